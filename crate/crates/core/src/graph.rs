//! Node, edge and partition data model plus the disjoint-set forest that
//! turns an edge stream into connected components.
//!
//! Node ids are dense indices `0..n`. A [`Clustering`] always stores
//! canonical labels: every node is labelled with the smallest node id in its
//! cluster, so two equal partitions have identical representations.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Dense index of a node in a universe of `n` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for NodeId {
    fn from(v: u32) -> Self {
        NodeId(v)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An undirected edge with an independent inclusion probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub p: f64,
}

impl Edge {
    pub fn new(u: u32, v: u32, p: f64) -> Self {
        Edge {
            u: NodeId(u),
            v: NodeId(v),
            p,
        }
    }
}

/// A node universe whose edges each appear independently with their own
/// probability. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilisticGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl ProbabilisticGraph {
    /// Validates and builds a graph. Edge order is preserved; it defines the
    /// order in which samplers consume the edges.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::input(format!("{n} nodes exceeds the u32 id space")));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            check_node(e.u, n)?;
            check_node(e.v, n)?;
            if e.u == e.v {
                return Err(Error::input(format!("edge {i}: self-loop on node {}", e.u)));
            }
            if !(0.0..=1.0).contains(&e.p) {
                return Err(Error::input(format!("edge {i}: probability {} outside [0, 1]", e.p)));
            }
            let key = (e.u.min(e.v), e.u.max(e.v));
            if !seen.insert(key) {
                return Err(Error::input(format!(
                    "edge {i}: duplicate edge between {} and {}",
                    key.0, key.1
                )));
            }
        }
        Ok(ProbabilisticGraph { n, edges })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

pub(crate) fn check_node(id: NodeId, n: usize) -> Result<()> {
    if id.index() >= n {
        Err(Error::input(format!("node id {id} out of range for {n} nodes")))
    } else {
        Ok(())
    }
}

/// A partition of `0..n` in canonical form.
///
/// `labels[i]` is the smallest node id of the cluster containing `i`.
/// Ordering is lexicographic on the label vector, which gives a total order
/// on partitions used for deterministic tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clustering {
    labels: Vec<u32>,
}

impl Clustering {
    /// Canonicalizes an arbitrary per-node labelling.
    pub fn from_labels<L: Copy + Eq + Hash>(labels: &[L]) -> Self {
        let mut first: HashMap<L, u32> = HashMap::new();
        let labels = labels
            .iter()
            .enumerate()
            .map(|(i, l)| *first.entry(*l).or_insert(i as u32))
            .collect();
        Clustering { labels }
    }

    /// Builds a clustering from explicit clusters, which must partition
    /// `0..n` exactly. Empty clusters are ignored.
    pub fn from_clusters(n: usize, clusters: &[Vec<u32>]) -> Result<Self> {
        let mut raw = vec![u32::MAX; n];
        for (c, members) in clusters.iter().enumerate() {
            for &m in members {
                check_node(NodeId(m), n)?;
                if raw[m as usize] != u32::MAX {
                    return Err(Error::input(format!("node {m} appears in two clusters")));
                }
                raw[m as usize] = c as u32;
            }
        }
        if let Some(missing) = raw.iter().position(|&l| l == u32::MAX) {
            return Err(Error::input(format!("node {missing} is not in any cluster")));
        }
        Ok(Clustering::from_labels(&raw))
    }

    pub fn singletons(n: usize) -> Self {
        Clustering {
            labels: (0..n as u32).collect(),
        }
    }

    pub fn single_cluster(n: usize) -> Self {
        Clustering { labels: vec![0; n] }
    }

    /// Size of the universe.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, node: NodeId) -> u32 {
        self.labels[node.index()]
    }

    pub fn cluster_count(&self) -> usize {
        self.labels
            .iter()
            .enumerate()
            .filter(|&(i, &l)| l as usize == i)
            .count()
    }

    /// Clusters ordered by canonical label, members ascending.
    pub fn clusters(&self) -> Vec<Vec<u32>> {
        let mut slot = vec![u32::MAX; self.len()];
        let mut out: Vec<Vec<u32>> = Vec::new();
        for (i, &l) in self.labels.iter().enumerate() {
            if l as usize == i {
                slot[i] = out.len() as u32;
                out.push(vec![i as u32]);
            } else {
                out[slot[l as usize] as usize].push(i as u32);
            }
        }
        out
    }

    /// Multiset of cluster sizes, ascending. Sums to `len()`.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.len()];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        let mut sizes: Vec<usize> = counts.into_iter().filter(|&c| c > 0).collect();
        sizes.sort_unstable();
        sizes
    }

    pub fn same_cluster(&self, a: NodeId, b: NodeId) -> bool {
        self.label(a) == self.label(b)
    }
}

impl fmt::Display for Clustering {
    /// `{{0,1},{2}}` style, clusters in label order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (ci, c) in self.clusters().iter().enumerate() {
            if ci > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (mi, m) in c.iter().enumerate() {
                if mi > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{m}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// Canonicalizes an arbitrary labelling: each node's label becomes the
/// smallest node id sharing its original label.
pub fn canonicalize<L: Copy + Eq + Hash>(labels: &[L]) -> Clustering {
    Clustering::from_labels(labels)
}

/// Union by rank with path halving.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<u32>,
    rank: Vec<u8>,
    roots: usize,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            roots: n,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: u32) -> u32 {
        let mut x = x;
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Merges the sets of `a` and `b`. Returns false if they were already
    /// joined.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (ka, kb) = (self.rank[ra as usize], self.rank[rb as usize]);
        if ka < kb {
            self.parent[ra as usize] = rb;
        } else {
            self.parent[rb as usize] = ra;
            if ka == kb {
                self.rank[ra as usize] += 1;
            }
        }
        self.roots -= 1;
        true
    }

    /// Number of disjoint sets.
    pub fn component_count(&self) -> usize {
        self.roots
    }

    pub fn into_clustering(mut self) -> Clustering {
        let n = self.len();
        // root -> smallest member; nodes are visited in ascending order so the
        // first member seen for a root is its minimum.
        let mut min_member = vec![u32::MAX; n];
        let mut labels = Vec::with_capacity(n);
        for i in 0..n as u32 {
            let r = self.find(i) as usize;
            if min_member[r] == u32::MAX {
                min_member[r] = i;
            }
            labels.push(min_member[r]);
        }
        Clustering { labels }
    }
}

/// Connected components of the deterministic graph with the given edges.
pub fn components<I>(n: usize, edges: I) -> Result<Clustering>
where
    I: IntoIterator<Item = (NodeId, NodeId)>,
{
    let mut ds = DisjointSet::new(n);
    for (u, v) in edges {
        check_node(u, n)?;
        check_node(v, n)?;
        ds.union(u.0, v.0);
    }
    Ok(ds.into_clustering())
}

/// Multiset of cluster sizes, ascending.
pub fn cluster_sizes(c: &Clustering) -> Vec<usize> {
    c.cluster_sizes()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(list: &[(u32, u32)]) -> Vec<(NodeId, NodeId)> {
        list.iter().map(|&(u, v)| (NodeId(u), NodeId(v))).collect()
    }

    #[test]
    fn components_small_cases() {
        assert_eq!(components(3, edges(&[])).unwrap(), Clustering::singletons(3));
        assert_eq!(
            components(3, edges(&[(0, 1)])).unwrap().clusters(),
            vec![vec![0, 1], vec![2]]
        );
        assert_eq!(
            components(6, edges(&[(0, 1), (1, 2), (3, 4)])).unwrap().clusters(),
            vec![vec![0, 1, 2], vec![3, 4], vec![5]]
        );
    }

    #[test]
    fn components_rejects_out_of_range() {
        assert!(matches!(components(3, edges(&[(0, 3)])), Err(Error::Input(_))));
    }

    #[test]
    fn canonical_labels() {
        assert_eq!(canonicalize(&[7, 7, 3]).labels(), &[0, 0, 2]);
        assert_eq!(canonicalize(&[1, 0, 0]).labels(), &[0, 1, 1]);
        assert_eq!(canonicalize(&["b", "a", "b"]), canonicalize(&[9, 4, 9]));
    }

    #[test]
    fn sizes() {
        assert_eq!(Clustering::single_cluster(3).cluster_sizes(), vec![3]);
        assert_eq!(Clustering::singletons(3).cluster_sizes(), vec![1, 1, 1]);
        let c = Clustering::from_clusters(6, &[vec![0, 1], vec![2, 3, 4], vec![5]]).unwrap();
        assert_eq!(cluster_sizes(&c), vec![1, 2, 3]);
        assert_eq!(c.cluster_count(), 3);
    }

    #[test]
    fn from_clusters_validates() {
        assert!(Clustering::from_clusters(3, &[vec![0, 1]]).is_err());
        assert!(Clustering::from_clusters(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(Clustering::from_clusters(2, &[vec![0, 2]]).is_err());
    }

    #[test]
    fn graph_invariants() {
        assert!(ProbabilisticGraph::new(2, vec![Edge::new(0, 1, 0.5)]).is_ok());
        assert!(ProbabilisticGraph::new(2, vec![Edge::new(0, 0, 0.5)]).is_err());
        assert!(ProbabilisticGraph::new(2, vec![Edge::new(0, 1, 1.5)]).is_err());
        assert!(ProbabilisticGraph::new(2, vec![Edge::new(0, 1, f64::NAN)]).is_err());
        assert!(ProbabilisticGraph::new(2, vec![Edge::new(0, 1, 0.5), Edge::new(1, 0, 0.2)]).is_err());
        assert!(ProbabilisticGraph::new(2, vec![Edge::new(0, 2, 0.5)]).is_err());
    }

    #[test]
    fn disjoint_set_counts_roots() {
        let mut ds = DisjointSet::new(5);
        assert!(ds.union(0, 1));
        assert!(ds.union(3, 4));
        assert!(!ds.union(1, 0));
        assert_eq!(ds.component_count(), 3);
        assert_eq!(ds.find(1), ds.find(0));
        let root = ds.find(4);
        assert_eq!(ds.find(root), root);
    }

    #[test]
    fn display() {
        let c = Clustering::from_labels(&[0, 0, 1]);
        assert_eq!(c.to_string(), "{{0,1},{2}}");
    }
}
