//! Distances between clusterings.
//!
//! Both distances match the clusters of a *sample* clustering `y` into the
//! clusters of a *reference* clustering `x`, each `x`-cluster receiving at
//! most one `y`-cluster.
//!
//! * [`symdiff_distance`]: a `y`-cluster `s` matched to `c` costs
//!   `|s| + |c| - 2|s ∩ c|`, an unmatched `s` costs `|s|`, unmatched
//!   `x`-clusters are free. The argument order matters:
//!   `symdiff_distance(reference, sample)`.
//! * [`balcan_distance`]: the number of nodes not covered by the matched
//!   intersections, minimised over matchings. Symmetric.
//!
//! Writing the symmetric-difference cost as `n - Σ benefit` with
//! `benefit(s, c) = 2|s ∩ c| - |c|`, only pairs where `s` holds a strict
//! majority of `c` can have positive benefit. Each `x`-cluster then has at
//! most one candidate `y`-cluster, so the optimal matching is found by
//! letting every `y`-cluster keep its best candidate.

use crate::assignment::max_weight_matching;
use crate::error::{Error, Result};
use crate::graph::Clustering;

/// Which distance to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    SymDiff,
    Balcan,
}

impl Metric {
    pub fn distance(self, reference: &Clustering, sample: &Clustering) -> Result<u64> {
        match self {
            Metric::SymDiff => symdiff_distance(reference, sample).map(|(d, _)| d),
            Metric::Balcan => balcan_distance(reference, sample),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::SymDiff => "symdiff",
            Metric::Balcan => "balcan",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symdiff" => Ok(Metric::SymDiff),
            "balcan" => Ok(Metric::Balcan),
            other => Err(Error::input(format!("unknown metric {other:?}"))),
        }
    }
}

/// Nonzero cells of the cluster contingency table.
///
/// Clusters are indexed densely in ascending canonical-label order;
/// `cells` is sorted by `(x index, y index)`.
#[derive(Debug, Clone)]
pub struct Contingency {
    pub x_labels: Vec<u32>,
    pub y_labels: Vec<u32>,
    pub x_sizes: Vec<u32>,
    pub y_sizes: Vec<u32>,
    pub cells: Vec<(u32, u32, u32)>,
}

fn dense_index(c: &Clustering) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
    let n = c.len();
    let mut index_of = vec![u32::MAX; n];
    let mut labels = Vec::new();
    for (i, &l) in c.labels().iter().enumerate() {
        if l as usize == i {
            index_of[i] = labels.len() as u32;
            labels.push(l);
        }
    }
    let node_index: Vec<u32> = c.labels().iter().map(|&l| index_of[l as usize]).collect();
    let mut sizes = vec![0u32; labels.len()];
    for &k in &node_index {
        sizes[k as usize] += 1;
    }
    (labels, sizes, node_index)
}

/// Tallies `|s ∩ c|` for every intersecting pair in `O(n)`.
pub fn contingency(x: &Clustering, y: &Clustering) -> Result<Contingency> {
    if x.len() != y.len() {
        return Err(Error::input(format!(
            "clusterings cover {} and {} nodes",
            x.len(),
            y.len()
        )));
    }
    let (x_labels, x_sizes, x_of) = dense_index(x);
    let (y_labels, y_sizes, y_of) = dense_index(y);

    // Counting sort of nodes by x-cluster.
    let mut start = vec![0usize; x_labels.len() + 1];
    for (k, &s) in x_sizes.iter().enumerate() {
        start[k + 1] = start[k] + s as usize;
    }
    let mut fill = start.clone();
    let mut by_x = vec![0u32; x.len()];
    for (node, &k) in x_of.iter().enumerate() {
        by_x[fill[k as usize]] = node as u32;
        fill[k as usize] += 1;
    }

    let mut tally = vec![0u32; y_labels.len()];
    let mut touched: Vec<u32> = Vec::new();
    let mut cells = Vec::new();
    for k in 0..x_labels.len() {
        for &node in &by_x[start[k]..start[k + 1]] {
            let j = y_of[node as usize];
            if tally[j as usize] == 0 {
                touched.push(j);
            }
            tally[j as usize] += 1;
        }
        touched.sort_unstable();
        for &j in &touched {
            cells.push((k as u32, j, tally[j as usize]));
            tally[j as usize] = 0;
        }
        touched.clear();
    }

    Ok(Contingency {
        x_labels,
        y_labels,
        x_sizes,
        y_sizes,
        cells,
    })
}

/// One `y`-cluster and where it went.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedPair {
    /// Canonical label of the sample cluster.
    pub y_cluster: u32,
    /// Canonical label of the reference cluster, `None` for the empty set.
    pub x_cluster: Option<u32>,
    pub cost: u64,
    pub benefit: u64,
}

/// Optimal symmetric-difference matching, one entry per `y`-cluster in
/// label order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterMatching {
    pub pairs: Vec<MatchedPair>,
    pub total_cost: u64,
}

impl ClusterMatching {
    /// Positive benefits of the kept pairs, ascending.
    pub fn benefits(&self) -> Vec<u64> {
        let mut b: Vec<u64> = self.pairs.iter().filter(|p| p.benefit > 0).map(|p| p.benefit).collect();
        b.sort_unstable();
        b
    }
}

/// Symmetric-difference distance of `sample` from `reference`, with the
/// optimal matching. Ties between equally good reference clusters go to the
/// smaller label.
pub fn symdiff_distance(reference: &Clustering, sample: &Clustering) -> Result<(u64, ClusterMatching)> {
    let t = contingency(reference, sample)?;
    // best[j] = (benefit, x index, overlap)
    let mut best: Vec<Option<(u64, u32, u32)>> = vec![None; t.y_labels.len()];
    for &(k, j, w) in &t.cells {
        let gain = 2 * w as i64 - t.x_sizes[k as usize] as i64;
        if gain <= 0 {
            continue;
        }
        let gain = gain as u64;
        match best[j as usize] {
            Some((b, _, _)) if b >= gain => {}
            _ => best[j as usize] = Some((gain, k, w)),
        }
    }
    let mut total = 0u64;
    let pairs = best
        .iter()
        .enumerate()
        .map(|(j, kept)| {
            let s = t.y_sizes[j] as u64;
            let pair = match *kept {
                Some((benefit, k, w)) => MatchedPair {
                    y_cluster: t.y_labels[j],
                    x_cluster: Some(t.x_labels[k as usize]),
                    cost: s + t.x_sizes[k as usize] as u64 - 2 * w as u64,
                    benefit,
                },
                None => MatchedPair {
                    y_cluster: t.y_labels[j],
                    x_cluster: None,
                    cost: s,
                    benefit: 0,
                },
            };
            total += pair.cost;
            pair
        })
        .collect();
    Ok((
        total,
        ClusterMatching {
            pairs,
            total_cost: total,
        },
    ))
}

/// Misclassification distance: `n` minus the heaviest one-to-one matching
/// of clusters by overlap size.
pub fn balcan_distance(x: &Clustering, y: &Clustering) -> Result<u64> {
    let t = contingency(x, y)?;
    let entries: Vec<_> = t.cells.iter().map(|&(k, j, w)| (k, j, w as u64)).collect();
    let (kept, _) = max_weight_matching(t.x_labels.len(), t.y_labels.len(), &entries);
    Ok(x.len() as u64 - kept)
}

/// Positive benefits `2|s ∩ c| - |c|` of the pairs kept by the optimal
/// symmetric-difference matching, ascending.
pub fn benefits(reference: &Clustering, sample: &Clustering) -> Result<Vec<u64>> {
    symdiff_distance(reference, sample).map(|(_, m)| m.benefits())
}
