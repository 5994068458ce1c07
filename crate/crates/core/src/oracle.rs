//! Exhaustive ground truth for tiny instances.
//!
//! Everything here enumerates its search space outright: set partitions,
//! edge subsets, injective cluster mappings. Results are exact rationals so
//! approximation-ratio assertions never depend on floating-point rounding.
//! Hard size limits are enforced with [`Error::Capacity`].

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::distribution::ExplicitDistribution;
use crate::error::{Error, Result};
use crate::graph::{Clustering, DisjointSet, ProbabilisticGraph};
use crate::metrics::Metric;

/// Largest universe [`enumerate_partitions`] accepts; Bell(12) = 4,213,597.
pub const MAX_PARTITION_UNIVERSE: usize = 12;
/// Largest edge count [`exact_outcome_distribution`] accepts.
pub const MAX_ENUMERATED_EDGES: usize = 20;
/// Largest universe for the bitmask-based exhaustive distances.
pub const MAX_EXHAUSTIVE_UNIVERSE: usize = 16;

/// Iterator over all partitions of `0..n` via restricted growth strings.
/// Every item is canonical and distinct.
pub struct Partitions {
    rgs: Vec<u32>,
    max_prefix: Vec<u32>,
    done: bool,
}

impl Partitions {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_PARTITION_UNIVERSE {
            return Err(Error::capacity(format!(
                "cannot enumerate partitions of {n} > {MAX_PARTITION_UNIVERSE} elements"
            )));
        }
        Ok(Partitions {
            rgs: vec![0; n],
            max_prefix: vec![0; n],
            done: false,
        })
    }
}

impl Iterator for Partitions {
    type Item = Clustering;

    fn next(&mut self) -> Option<Clustering> {
        if self.done {
            return None;
        }
        let out = Clustering::from_labels(&self.rgs);
        // Advance: bump the rightmost position that may still grow.
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            let bound = self.max_prefix[i - 1] + 1;
            if self.rgs[i] < bound {
                self.rgs[i] += 1;
                self.max_prefix[i] = self.max_prefix[i - 1].max(self.rgs[i]);
                for k in i + 1..n {
                    self.rgs[k] = 0;
                    self.max_prefix[k] = self.max_prefix[i];
                }
                break;
            }
        }
        Some(out)
    }
}

/// All Bell(n) partitions of `0..n`.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Clustering>> {
    Ok(Partitions::new(n)?.collect())
}

/// Bell numbers by the triangle recurrence.
pub fn bell_number(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for v in &row {
            let prev = *next.last().unwrap();
            next.push(prev + v);
        }
        row = next;
    }
    row[0]
}

fn masks(c: &Clustering) -> Vec<u64> {
    c.clusters()
        .iter()
        .map(|members| members.iter().fold(0u64, |m, &i| m | (1 << i)))
        .collect()
}

fn check_exhaustive(x: &Clustering, y: &Clustering) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::input("clusterings cover different universes"));
    }
    if x.len() > MAX_EXHAUSTIVE_UNIVERSE {
        return Err(Error::capacity(format!(
            "exhaustive distance limited to {MAX_EXHAUSTIVE_UNIVERSE} nodes"
        )));
    }
    Ok(())
}

/// Minimum of `Σ_s pair_cost(s, f(s))` over every injective mapping `f` from
/// `y`'s clusters into `x`'s clusters plus an unlimited empty sink.
fn min_over_injections(xs: &[u64], ys: &[u64], pair_cost: impl Fn(u64, Option<u64>) -> u32 + Copy) -> u32 {
    fn go(
        i: usize,
        xs: &[u64],
        ys: &[u64],
        used: &mut [bool],
        pair_cost: impl Fn(u64, Option<u64>) -> u32 + Copy,
    ) -> u32 {
        if i == ys.len() {
            return 0;
        }
        let mut best = pair_cost(ys[i], None) + go(i + 1, xs, ys, used, pair_cost);
        for j in 0..xs.len() {
            if !used[j] {
                used[j] = true;
                let c = pair_cost(ys[i], Some(xs[j])) + go(i + 1, xs, ys, used, pair_cost);
                used[j] = false;
                best = best.min(c);
            }
        }
        best
    }
    go(0, xs, ys, &mut vec![false; xs.len()], pair_cost)
}

/// Symmetric-difference distance by brute force over injective mappings:
/// `Σ_s |s ∪ f(s)| - |s ∩ f(s)|`.
pub fn exhaustive_symdiff(reference: &Clustering, sample: &Clustering) -> Result<u64> {
    check_exhaustive(reference, sample)?;
    let cost = |s: u64, c: Option<u64>| (s ^ c.unwrap_or(0)).count_ones();
    Ok(min_over_injections(&masks(reference), &masks(sample), cost) as u64)
}

/// Misclassification distance by brute force: the fewest nodes `u` with
/// `f(cluster_y(u)) != cluster_x(u)` over injective mappings `f`.
pub fn exhaustive_balcan(x: &Clustering, y: &Clustering) -> Result<u64> {
    check_exhaustive(x, y)?;
    let cost = |s: u64, c: Option<u64>| (s & !c.unwrap_or(0)).count_ones();
    Ok(min_over_injections(&masks(x), &masks(y), cost) as u64)
}

/// The two-outcome distribution on `{0, 1}` where the singletons appear with
/// probability `(k-1)/k` and the joined pair with probability `1/k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TightnessDistribution {
    pub k: u64,
}

impl TightnessDistribution {
    pub fn new(k: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::input(format!("tightness needs k >= 2, got {k}")));
        }
        Ok(TightnessDistribution { k })
    }

    pub fn distribution(&self) -> ExplicitDistribution {
        let k = BigInt::from(self.k);
        ExplicitDistribution::new(vec![
            (Clustering::singletons(2), BigRational::new(&k - 1, k.clone())),
            (Clustering::single_cluster(2), BigRational::new(1.into(), k)),
        ])
        .expect("tightness distribution is valid")
    }
}

/// Exact component distribution of a random graph by enumerating all
/// `2^|E|` edge subsets.
pub fn exact_outcome_distribution(g: &ProbabilisticGraph) -> Result<ExplicitDistribution> {
    let m = g.edge_count();
    if m > MAX_ENUMERATED_EDGES {
        return Err(Error::capacity(format!(
            "{m} edges exceeds the enumeration limit of {MAX_ENUMERATED_EDGES}"
        )));
    }
    let probs: Vec<BigRational> = g
        .edges()
        .iter()
        .map(|e| BigRational::from_float(e.p).expect("graph probabilities are finite"))
        .collect();
    let mut acc: HashMap<Clustering, BigRational> = HashMap::new();
    let mut chosen = Vec::with_capacity(m);
    enumerate_subsets(g, &probs, 0, BigRational::one(), &mut chosen, &mut acc);
    ExplicitDistribution::new(acc.into_iter().collect())
}

fn enumerate_subsets(
    g: &ProbabilisticGraph,
    probs: &[BigRational],
    i: usize,
    mass: BigRational,
    chosen: &mut Vec<usize>,
    acc: &mut HashMap<Clustering, BigRational>,
) {
    if mass.is_zero() {
        return;
    }
    if i == probs.len() {
        let mut ds = DisjointSet::new(g.node_count());
        for &k in chosen.iter() {
            let e = g.edges()[k];
            ds.union(e.u.0, e.v.0);
        }
        *acc.entry(ds.into_clustering()).or_insert_with(BigRational::zero) += mass;
        return;
    }
    let p = &probs[i];
    chosen.push(i);
    enumerate_subsets(g, probs, i + 1, &mass * p, chosen, acc);
    chosen.pop();
    enumerate_subsets(g, probs, i + 1, &mass * (BigRational::one() - p), chosen, acc);
}

/// `E_Y[D_c(Y)]` with `c` as the reference.
pub fn expected_distance(c: &Clustering, d: &ExplicitDistribution, metric: Metric) -> Result<BigRational> {
    if c.len() != d.universe() {
        return Err(Error::input(format!(
            "clustering over {} nodes, distribution over {}",
            c.len(),
            d.universe()
        )));
    }
    let mut total = BigRational::zero();
    for (y, p) in d.outcomes() {
        let dist = metric.distance(c, y)?;
        total += p * BigRational::from_integer(dist.into());
    }
    Ok(total)
}

/// Integer-weighted expected costs of every candidate against a fixed
/// distribution: `E[D_c(Y)] = numerators[c] / denominator`.
struct CostTable {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl CostTable {
    fn build(candidates: &[Clustering], d: &ExplicitDistribution, metric: Metric) -> Result<Self> {
        let (weights, denominator) = d.integer_weights();
        let numerators = candidates
            .par_iter()
            .map(|c| {
                let mut acc = BigInt::zero();
                for ((y, _), w) in d.outcomes().iter().zip(&weights) {
                    let dist = metric.distance(c, y)?;
                    if dist > 0 {
                        acc += w * BigInt::from(dist);
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CostTable {
            numerators,
            denominator,
        })
    }

    fn value(&self, i: usize) -> BigRational {
        BigRational::new(self.numerators[i].clone(), self.denominator.clone())
    }
}

/// The best clustering for a distribution, found by trying every partition.
/// Ties go to the canonically smallest partition.
pub fn optimal_clustering(d: &ExplicitDistribution, metric: Metric) -> Result<(Clustering, BigRational)> {
    let candidates = enumerate_partitions(d.universe())?;
    let table = CostTable::build(&candidates, d, metric)?;
    let best = argmin(&candidates, &table.numerators);
    Ok((candidates[best].clone(), table.value(best)))
}

fn argmin(candidates: &[Clustering], costs: &[BigInt]) -> usize {
    let mut best = 0;
    for i in 1..candidates.len() {
        if costs[i] < costs[best] || (costs[i] == costs[best] && candidates[i] < candidates[best]) {
            best = i;
        }
    }
    best
}

/// Exact approximation profile of the single-sample algorithm on a
/// distribution: the optimum, and for each outcome `C'` its probability and
/// its expected cost `E_Y[D_{C'}(Y)]`.
#[derive(Debug, Clone)]
pub struct RatioProfile {
    pub optimal: Clustering,
    pub optimal_cost: BigRational,
    /// `(Pr[C'], E_Y[D_{C'}(Y)])` per outcome, in outcome order.
    pub outcomes: Vec<(BigRational, BigRational)>,
}

impl RatioProfile {
    pub fn new(d: &ExplicitDistribution, metric: Metric) -> Result<Self> {
        let candidates = enumerate_partitions(d.universe())?;
        let table = CostTable::build(&candidates, d, metric)?;
        let best = argmin(&candidates, &table.numerators);
        let index: HashMap<&Clustering, usize> = candidates.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let outcomes = d
            .outcomes()
            .iter()
            .map(|(c, p)| (p.clone(), table.value(index[c])))
            .collect();
        Ok(RatioProfile {
            optimal: candidates[best].clone(),
            optimal_cost: table.value(best),
            outcomes,
        })
    }

    /// `Σ Pr[C'] · E_Y[D_{C'}(Y)]`.
    pub fn expected_sample_cost(&self) -> BigRational {
        self.outcomes.iter().map(|(p, c)| p * c).sum()
    }

    /// Expected cost of a random sample over the optimum; 1 when the
    /// optimum is 0 (a point mass, where every sample is optimal).
    pub fn ratio(&self) -> BigRational {
        if self.optimal_cost.is_zero() {
            BigRational::one()
        } else {
            self.expected_sample_cost() / &self.optimal_cost
        }
    }

    /// `Pr_{C'}[E_Y D_{C'}(Y) > factor · opt]`.
    pub fn tail_mass(&self, factor: &BigRational) -> BigRational {
        let bound = factor * &self.optimal_cost;
        self.outcomes
            .iter()
            .filter(|(_, c)| *c > bound)
            .map(|(p, _)| p.clone())
            .sum()
    }

    /// Probability that none of `m` independent samples is within
    /// `factor · opt`.
    pub fn miss_probability(&self, factor: &BigRational, m: u32) -> BigRational {
        num_traits::pow(self.tail_mass(factor), m as usize)
    }
}

/// `(Σ_{C'} Pr[C'] E_Y[D_{C'}(Y)]) / opt`, exactly.
pub fn expected_sample_ratio(d: &ExplicitDistribution, metric: Metric) -> Result<BigRational> {
    Ok(RatioProfile::new(d, metric)?.ratio())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(0).unwrap().len(), 1);
        assert_eq!(enumerate_partitions(1).unwrap().len(), 1);
        assert_eq!(enumerate_partitions(3).unwrap().len(), 5);
        assert_eq!(enumerate_partitions(6).unwrap().len(), 203);
        assert_eq!(bell_number(6), 203);
        assert_eq!(bell_number(12), 4_213_597);
        assert!(matches!(enumerate_partitions(13), Err(Error::Capacity(_))));
    }

    #[test]
    fn partitions_are_distinct_and_canonical() {
        let all = enumerate_partitions(5).unwrap();
        let set: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), 52);
        for c in &all {
            assert_eq!(&Clustering::from_labels(c.labels()), c);
        }
    }

    #[test]
    fn single_edge_distribution() {
        let g = ProbabilisticGraph::new(2, vec![Edge::new(0, 1, 0.3)]).unwrap();
        let d = exact_outcome_distribution(&g).unwrap();
        let p = BigRational::from_float(0.3).unwrap();
        assert_eq!(d.probability_of(&Clustering::single_cluster(2)), p);
        assert_eq!(d.probability_of(&Clustering::singletons(2)), BigRational::one() - p);
    }

    #[test]
    fn triangle_distribution() {
        let g = ProbabilisticGraph::new(
            3,
            vec![Edge::new(0, 1, 0.5), Edge::new(1, 2, 0.5), Edge::new(0, 2, 0.5)],
        )
        .unwrap();
        let d = exact_outcome_distribution(&g).unwrap();
        assert_eq!(d.probability_of(&Clustering::single_cluster(3)), r(1, 2));
        assert_eq!(d.probability_of(&Clustering::singletons(3)), r(1, 8));
        assert_eq!(d.probability_of(&Clustering::from_labels(&[0, 0, 2])), r(1, 8));
        assert_eq!(d.len(), 5);
    }

    #[test]
    fn deterministic_path() {
        let g = ProbabilisticGraph::new(3, vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 0.0)]).unwrap();
        let d = exact_outcome_distribution(&g).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.outcomes()[0].0, Clustering::from_labels(&[0, 0, 2]));
    }

    #[test]
    fn edge_limit() {
        let edges: Vec<Edge> = (0..21).map(|i| Edge::new(i, i + 1, 0.5)).collect();
        let g = ProbabilisticGraph::new(22, edges).unwrap();
        assert!(matches!(exact_outcome_distribution(&g), Err(Error::Capacity(_))));
    }

    #[test]
    fn tightness_values() {
        for k in [2u64, 4, 10] {
            let d = TightnessDistribution::new(k).unwrap().distribution();
            let ki = k as i64;
            assert_eq!(
                expected_distance(&Clustering::singletons(2), &d, Metric::SymDiff).unwrap(),
                r(1, ki)
            );
            let (opt, cost) = optimal_clustering(&d, Metric::SymDiff).unwrap();
            assert_eq!(opt, Clustering::singletons(2));
            assert_eq!(cost, r(1, ki));
            let profile = RatioProfile::new(&d, Metric::SymDiff).unwrap();
            assert_eq!(profile.expected_sample_cost(), r(3 * (ki - 1), ki * ki));
            assert_eq!(profile.ratio(), r(3 * (ki - 1), ki));
        }
        let d = TightnessDistribution::new(4).unwrap().distribution();
        assert_eq!(
            expected_distance(&Clustering::single_cluster(2), &d, Metric::SymDiff).unwrap(),
            r(3, 2)
        );
        assert!(TightnessDistribution::new(1).is_err());
    }

    #[test]
    fn point_mass() {
        let c = Clustering::from_labels(&[0, 0, 1]);
        let d = ExplicitDistribution::point_mass(c.clone());
        assert!(expected_distance(&c, &d, Metric::SymDiff).unwrap().is_zero());
        let (opt, cost) = optimal_clustering(&d, Metric::Balcan).unwrap();
        assert_eq!(opt, c);
        assert!(cost.is_zero());
        assert_eq!(expected_sample_ratio(&d, Metric::SymDiff).unwrap(), BigRational::one());
    }

    #[test]
    fn exhaustive_distances_match_documented_values() {
        let x = Clustering::from_labels(&[0, 0, 1]);
        let y = Clustering::singletons(3);
        assert_eq!(exhaustive_symdiff(&x, &y).unwrap(), 2);
        assert_eq!(exhaustive_balcan(&x, &y).unwrap(), 1);
        let whole = Clustering::single_cluster(4);
        let halves = Clustering::from_labels(&[0, 0, 1, 1]);
        assert_eq!(exhaustive_symdiff(&whole, &halves).unwrap(), 4);
        assert_eq!(exhaustive_symdiff(&halves, &whole).unwrap(), 2);
        assert_eq!(exhaustive_balcan(&whole, &halves).unwrap(), 2);
    }

    #[test]
    fn universe_mismatch() {
        let d = TightnessDistribution::new(3).unwrap().distribution();
        assert!(expected_distance(&Clustering::singletons(3), &d, Metric::SymDiff).is_err());
    }
}
