//! Seeded synthetic inputs: random tiny instances for the exhaustive checks,
//! planted-block and trust-network fixtures, and large lazy edge streams.

use std::collections::HashSet;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::ExplicitDistribution;
use crate::graph::{Clustering, Edge, ProbabilisticGraph};
use crate::ingest::{RawTrustNetwork, WeightedGraph};

/// Edges over possible edges, `e / (n(n-1)/2)`.
pub fn density(nodes: usize, edges: usize) -> f64 {
    if nodes < 2 {
        return 0.0;
    }
    edges as f64 / (nodes as f64 * (nodes as f64 - 1.0) / 2.0)
}

fn all_pairs(n: usize) -> Vec<(u32, u32)> {
    (0..n as u32)
        .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
        .collect()
}

/// A random graph on `2..=max_nodes` nodes with at most `max_edges` edges.
/// Probabilities are multiples of 1/8 so exact enumeration stays cheap.
pub fn random_probabilistic_graph(seed: u64, max_nodes: usize, max_edges: usize) -> ProbabilisticGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_nodes.max(2));
    let mut pairs = all_pairs(n);
    pairs.shuffle(&mut rng);
    let m = rng.random_range(0..=max_edges.min(pairs.len()));
    let edges = pairs[..m]
        .iter()
        .map(|&(u, v)| Edge::new(u, v, rng.random_range(0..=8u32) as f64 / 8.0))
        .collect();
    ProbabilisticGraph::new(n, edges).expect("generated graph is valid")
}

/// A random distribution over `1..=6` random partitions of `1..=max_nodes`
/// nodes, with small integer weights normalized exactly.
pub fn random_explicit_distribution(seed: u64, max_nodes: usize) -> ExplicitDistribution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_nodes.max(1));
    let k = rng.random_range(1..=6usize);
    let raw: Vec<(Clustering, u64)> = (0..k)
        .map(|_| {
            let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            (Clustering::from_labels(&labels), rng.random_range(1..=12u64))
        })
        .collect();
    let total: u64 = raw.iter().map(|(_, w)| w).sum();
    let outcomes = raw
        .into_iter()
        .map(|(c, w)| (c, BigRational::new(w.into(), total.into())))
        .collect();
    ExplicitDistribution::new(outcomes).expect("weights sum to one")
}

/// Layout of a planted-blocks network.
#[derive(Debug, Clone, Copy)]
pub struct PlantedBlocks {
    pub blocks: usize,
    pub block_size: usize,
    /// Random partners drawn per node inside its block.
    pub inner_degree: usize,
    pub inner_weight: f64,
    /// Edges between consecutive blocks.
    pub cross_edges: usize,
    pub cross_weight: f64,
}

impl PlantedBlocks {
    /// Nodes `b * block_size .. (b + 1) * block_size` form block `b`.
    pub fn generate(&self, seed: u64) -> WeightedGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.blocks * self.block_size;
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        let mut add = |u: u32, v: u32, w: f64, edges: &mut Vec<(u32, u32, f64)>| {
            if u != v && seen.insert((u.min(v), u.max(v))) {
                edges.push((u.min(v), u.max(v), w));
            }
        };
        for b in 0..self.blocks {
            let base = (b * self.block_size) as u32;
            let size = self.block_size as u32;
            // a ring keeps every block connected when all edges are present
            for i in 0..size {
                add(base + i, base + (i + 1) % size, self.inner_weight, &mut edges);
            }
            for i in 0..size {
                for _ in 0..self.inner_degree {
                    let j = rng.random_range(0..size);
                    add(base + i, base + j, self.inner_weight, &mut edges);
                }
            }
        }
        for b in 0..self.blocks.saturating_sub(1) {
            for _ in 0..self.cross_edges {
                let u = (b * self.block_size + rng.random_range(0..self.block_size)) as u32;
                let v = ((b + 1) * self.block_size + rng.random_range(0..self.block_size)) as u32;
                add(u, v, self.cross_weight, &mut edges);
            }
        }
        WeightedGraph::new(n, edges).expect("generated graph is valid")
    }
}

/// Directed integer ratings in `1..=10` whose symmetrization has exactly
/// `edges` undirected edges over `nodes` named people. A `mutual` fraction
/// of pairs is rated in both directions.
pub fn synthetic_trust_network(nodes: usize, edges: usize, mutual: f64, seed: u64) -> RawTrustNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = all_pairs(nodes);
    assert!(edges <= pairs.len(), "too many edges for {nodes} nodes");
    pairs.shuffle(&mut rng);
    let names: Vec<String> = (0..nodes).map(|i| format!("user{i:05}")).collect();
    let mut rows: Vec<(&str, &str, f64)> = Vec::with_capacity(edges * 2);
    for &(u, v) in &pairs[..edges] {
        let (a, b) = if rng.random_bool(0.5) { (u, v) } else { (v, u) };
        rows.push((
            &names[a as usize],
            &names[b as usize],
            rng.random_range(1..=10u32) as f64,
        ));
        if rng.random_bool(mutual) {
            rows.push((
                &names[b as usize],
                &names[a as usize],
                rng.random_range(1..=10u32) as f64,
            ));
        }
    }
    let mut net = RawTrustNetwork::from_ratings(rows).expect("generated ratings are finite");
    // Isolated people still belong to the network.
    let present: HashSet<String> = net.names.iter().cloned().collect();
    for name in names.into_iter().filter(|n| !present.contains(n)) {
        net.names.push(name);
    }
    net
}

/// `m` distinct random edges over `n` nodes with weights uniform in
/// `[1, 10]`.
pub fn random_weighted_graph(n: usize, m: usize, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    assert!(m as f64 <= density_capacity(n), "too many edges for {n} nodes");
    while edges.len() < m {
        let u = rng.random_range(0..n as u32);
        let v = rng.random_range(0..n as u32);
        if u != v && seen.insert((u.min(v), u.max(v))) {
            edges.push((u.min(v), u.max(v), rng.random_range(1.0..=10.0)));
        }
    }
    WeightedGraph::new(n, edges).expect("generated graph is valid")
}

fn density_capacity(n: usize) -> f64 {
    n as f64 * (n as f64 - 1.0) / 2.0
}

/// Lazily generated random edges with a fixed probability; nothing is
/// stored, so consuming it costs `O(1)` memory.
pub fn edge_stream(n: usize, m: usize, p: f64, seed: u64) -> impl Iterator<Item = Edge> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m).map(move |_| {
        let u = rng.random_range(0..n as u32);
        let mut v = rng.random_range(0..n as u32 - 1);
        if v >= u {
            v += 1;
        }
        Edge::new(u, v, p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::symmetrize;

    #[test]
    fn table_densities() {
        assert!((density(62, 105) - 0.055).abs() < 1e-3);
        assert!((density(310, 774) - 0.016).abs() < 1e-3);
        assert!((density(114_467, 717_667) - 0.0001).abs() < 1e-4);
    }

    #[test]
    fn trust_fixture_has_requested_shape() {
        let net = synthetic_trust_network(62, 105, 0.3, 7);
        assert_eq!(net.node_count(), 62);
        let g = symmetrize(&net).graph;
        assert_eq!(g.edge_count(), 105);
        assert!((density(g.node_count(), g.edge_count()) - 0.055).abs() < 1e-3);
    }

    #[test]
    fn generators_are_seeded() {
        assert_eq!(
            random_probabilistic_graph(3, 6, 10),
            random_probabilistic_graph(3, 6, 10)
        );
        assert_eq!(random_explicit_distribution(3, 5), random_explicit_distribution(3, 5));
        let a: Vec<Edge> = edge_stream(10, 50, 0.5, 1).collect();
        let b: Vec<Edge> = edge_stream(10, 50, 0.5, 1).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|e| e.u != e.v));
    }

    #[test]
    fn planted_blocks_layout() {
        let g = PlantedBlocks {
            blocks: 2,
            block_size: 20,
            inner_degree: 3,
            inner_weight: 9.0,
            cross_edges: 1,
            cross_weight: 0.5,
        }
        .generate(1);
        assert_eq!(g.node_count(), 40);
        let cross = g.edges().iter().filter(|e| (e.0 < 20) != (e.1 < 20)).count();
        assert_eq!(cross, 1);
    }
}
