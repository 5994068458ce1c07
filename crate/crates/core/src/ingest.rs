//! Trust-rating ingestion: directed ratings → undirected weights →
//! `[1, 10]`-normalized weights → edge probabilities for a threshold `t`.
//!
//! Probabilities are `min(1, w / t)`: small `t` saturates every edge, large
//! `t` fragments the sampled graph.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::{Edge, ProbabilisticGraph};

/// Directed, positively rated trust edges over named people.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawTrustNetwork {
    /// Node names in first-appearance order; index = node id.
    pub names: Vec<String>,
    /// `(source, target, rating)`, all ratings finite and positive.
    pub ratings: Vec<(u32, u32, f64)>,
    /// Rows dropped because the rating was zero or negative.
    pub unfavorable_dropped: usize,
}

impl RawTrustNetwork {
    /// Builds a network from `(source, target, rating)` triples. Nonpositive
    /// ratings are counted and discarded; non-finite ratings are an error.
    pub fn from_ratings<'a, I>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, f64)>,
    {
        let mut net = RawTrustNetwork::default();
        let mut ids: HashMap<String, u32> = HashMap::new();
        for (i, (s, t, r)) in rows.into_iter().enumerate() {
            if !r.is_finite() {
                return Err(Error::input(format!("row {}: rating {r} is not finite", i + 1)));
            }
            net.push(&mut ids, s, t, r);
        }
        Ok(net)
    }

    /// Parses `source<TAB>target<TAB>rating` lines; `#` lines and blank
    /// lines are skipped.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut net = RawTrustNetwork::default();
        let mut ids: HashMap<String, u32> = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split('\t').collect();
            if parts.len() != 3 {
                return Err(Error::parse(
                    lineno,
                    format!("expected source, target and rating, found {} fields", parts.len()),
                ));
            }
            let (s, t) = (parts[0].trim(), parts[1].trim());
            if s.is_empty() || t.is_empty() {
                return Err(Error::parse(lineno, "empty node name"));
            }
            let r: f64 = parts[2]
                .trim()
                .parse()
                .map_err(|_| Error::parse(lineno, format!("invalid rating {:?}", parts[2])))?;
            if !r.is_finite() {
                return Err(Error::parse(lineno, format!("rating {r} is not finite")));
            }
            net.push(&mut ids, s, t, r);
        }
        Ok(net)
    }

    fn push(&mut self, ids: &mut HashMap<String, u32>, s: &str, t: &str, r: f64) {
        let mut intern = |name: &str| -> u32 {
            if let Some(&id) = ids.get(name) {
                return id;
            }
            let id = self.names.len() as u32;
            self.names.push(name.to_string());
            ids.insert(name.to_string(), id);
            id
        };
        let (u, v) = (intern(s), intern(t));
        if r <= 0.0 {
            self.unfavorable_dropped += 1;
        } else {
            self.ratings.push((u, v, r));
        }
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }
}

/// Undirected weighted edges over `0..n` with nonnegative weights and at
/// most one edge per unordered pair. Edge order is preserved.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(u32, u32, f64)>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<(u32, u32, f64)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v, w) in &edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::input(format!("edge ({u}, {v}) out of range for {n} nodes")));
            }
            if u == v {
                return Err(Error::input(format!("self-loop on node {u}")));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::input(format!("edge ({u}, {v}) has weight {w}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::input(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(WeightedGraph { n, edges })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32, f64)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Result of [`symmetrize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Symmetrized {
    pub graph: WeightedGraph,
    pub self_loops_dropped: usize,
}

/// Collapses directed ratings into undirected weights. Repeated ratings in
/// one direction are averaged first; a mutual pair then gets the mean of
/// its two directions; a lone rating carries over unchanged. Self-loops are
/// dropped and counted.
pub fn symmetrize(net: &RawTrustNetwork) -> Symmetrized {
    let mut directed: BTreeMap<(u32, u32), (f64, u32)> = BTreeMap::new();
    let mut self_loops = 0;
    for &(u, v, r) in &net.ratings {
        if u == v {
            self_loops += 1;
            continue;
        }
        let slot = directed.entry((u, v)).or_insert((0.0, 0));
        slot.0 += r;
        slot.1 += 1;
    }
    let mean = |&(sum, count): &(f64, u32)| sum / count as f64;
    let mut undirected: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    for (&(u, v), agg) in &directed {
        let key = (u.min(v), u.max(v));
        if undirected.contains_key(&key) {
            continue;
        }
        let forward = mean(agg);
        let w = match directed.get(&(v, u)) {
            Some(back) => (forward + mean(back)) / 2.0,
            None => forward,
        };
        undirected.insert(key, w);
    }
    let edges = undirected.into_iter().map(|((u, v), w)| (u, v, w)).collect();
    Symmetrized {
        graph: WeightedGraph {
            n: net.node_count(),
            edges,
        },
        self_loops_dropped: self_loops,
    }
}

/// A weighted graph whose weights all lie in `[1, 10]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedTrustGraph(WeightedGraph);

impl NormalizedTrustGraph {
    pub fn as_weighted(&self) -> &WeightedGraph {
        &self.0
    }

    pub fn into_weighted(self) -> WeightedGraph {
        self.0
    }
}

/// Affine map of `[w_min, w_max]` onto `[1, 10]`. When every weight is the
/// same they all become 10.
pub fn normalize(g: &WeightedGraph) -> Result<NormalizedTrustGraph> {
    if g.edges.is_empty() {
        return Err(Error::input("cannot normalize a graph with no edges"));
    }
    let (lo, hi) = g.edges.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| {
        (lo.min(e.2), hi.max(e.2))
    });
    let span = hi - lo;
    let edges = g
        .edges
        .iter()
        .map(|&(u, v, w)| {
            let scaled = if span > 0.0 {
                (1.0 + 9.0 * (w - lo) / span).clamp(1.0, 10.0)
            } else {
                10.0
            };
            (u, v, scaled)
        })
        .collect();
    Ok(NormalizedTrustGraph(WeightedGraph { n: g.n, edges }))
}

/// Global divisor turning weights into probabilities.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ThresholdParam(f64);

impl ThresholdParam {
    pub fn new(t: f64) -> Result<Self> {
        if t > 0.0 {
            Ok(ThresholdParam(t))
        } else {
            Err(Error::input(format!("threshold t must be positive, got {t}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Edge probability `min(1, w / t)`.
pub fn edge_probability(w: f64, t: ThresholdParam) -> f64 {
    (w / t.0).min(1.0)
}

/// Turns weights into inclusion probabilities `min(1, w / t)`.
pub fn probabilize(g: &WeightedGraph, t: ThresholdParam) -> ProbabilisticGraph {
    let edges = g
        .edges
        .iter()
        .map(|&(u, v, w)| Edge::new(u, v, edge_probability(w, t)))
        .collect();
    ProbabilisticGraph::new(g.n, edges).expect("weighted graph invariants imply a valid graph")
}
