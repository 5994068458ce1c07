//! One-pass sampling of random clusterings.
//!
//! A random-graph sample walks the edge list once. For each edge it draws a
//! single uniform variate and, when the variate falls below the edge's
//! probability, unions the endpoints in a disjoint-set forest. The only
//! state carried across edges is that forest, so memory is `O(n)` no matter
//! how long the stream is.
//!
//! Randomness is counter-based: a ChaCha8 stream keyed by the master seed is
//! selected by the sample index, and the `k`-th edge of the stream consumes
//! the `k`-th variate. A sample is therefore fully determined by
//! `(seed, sample_index)` and the edge order, and samples can be drawn in
//! parallel without shared generator state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distribution::ExplicitDistribution;
use crate::error::{Error, Result};
use crate::graph::{check_node, Clustering, DisjointSet, Edge, ProbabilisticGraph};

/// Identifies one sample drawn under a master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SampleSeed {
    pub seed: u64,
    pub sample_index: u64,
}

impl SampleSeed {
    pub fn new(seed: u64, sample_index: u64) -> Self {
        SampleSeed { seed, sample_index }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.sample_index);
        rng
    }
}

/// Forward-only edge iterator that counts how many edges it has yielded.
pub struct EdgeStream<I> {
    inner: I,
    queried: usize,
}

impl<I: Iterator<Item = Edge>> EdgeStream<I> {
    pub fn new<T: IntoIterator<IntoIter = I>>(edges: T) -> Self {
        EdgeStream {
            inner: edges.into_iter(),
            queried: 0,
        }
    }

    pub fn query_count(&self) -> usize {
        self.queried
    }
}

impl<I: Iterator<Item = Edge>> Iterator for EdgeStream<I> {
    type Item = Edge;

    fn next(&mut self) -> Option<Edge> {
        let e = self.inner.next()?;
        self.queried += 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.inner.size_hint()
    }
}

/// Draws the component clustering of one random edge-induced subgraph over
/// `n` nodes, consuming `stream` to the end.
pub fn sample_stream<I>(n: usize, stream: &mut EdgeStream<I>, seed: SampleSeed) -> Result<Clustering>
where
    I: Iterator<Item = Edge>,
{
    let mut rng = seed.rng();
    let mut forest = DisjointSet::new(n);
    for (i, e) in stream.enumerate() {
        check_node(e.u, n)?;
        check_node(e.v, n)?;
        if !(0.0..=1.0).contains(&e.p) {
            return Err(Error::input(format!("edge {i}: probability {} outside [0, 1]", e.p)));
        }
        let u: f64 = rng.random();
        if u < e.p {
            forest.union(e.u.0, e.v.0);
        }
    }
    Ok(forest.into_clustering())
}

/// Anything clusterings can be drawn from.
#[derive(Debug, Clone, Copy)]
pub enum BlackBoxSource<'a> {
    /// Components of a random edge-induced subgraph.
    RandomGraph(&'a ProbabilisticGraph),
    /// An explicit list of clusterings with their probabilities.
    Explicit(&'a ExplicitDistribution),
}

impl BlackBoxSource<'_> {
    pub fn universe(&self) -> usize {
        match self {
            BlackBoxSource::RandomGraph(g) => g.node_count(),
            BlackBoxSource::Explicit(d) => d.universe(),
        }
    }
}

impl<'a> From<&'a ProbabilisticGraph> for BlackBoxSource<'a> {
    fn from(g: &'a ProbabilisticGraph) -> Self {
        BlackBoxSource::RandomGraph(g)
    }
}

impl<'a> From<&'a ExplicitDistribution> for BlackBoxSource<'a> {
    fn from(d: &'a ExplicitDistribution) -> Self {
        BlackBoxSource::Explicit(d)
    }
}

/// Draws one clustering. Pure function of `(source, seed)`.
pub fn sample_clustering(source: BlackBoxSource<'_>, seed: SampleSeed) -> Result<Clustering> {
    match source {
        BlackBoxSource::RandomGraph(g) => {
            let mut stream = EdgeStream::new(g.edges().iter().copied());
            let c = sample_stream(g.node_count(), &mut stream, seed)?;
            debug_assert_eq!(stream.query_count(), g.edge_count());
            Ok(c)
        }
        BlackBoxSource::Explicit(d) => {
            let u: f64 = seed.rng().random();
            Ok(d.outcomes()[d.outcome_at(u)].0.clone())
        }
    }
}

/// Draws `count` independent clusterings with sample indices `0..count`.
pub fn sample_many(source: BlackBoxSource<'_>, seed: u64, count: usize) -> Result<Vec<Clustering>> {
    sample_range(source, seed, 0, count)
}

/// Draws clusterings for sample indices `start..start + count`, in order.
pub fn sample_range(source: BlackBoxSource<'_>, seed: u64, start: u64, count: usize) -> Result<Vec<Clustering>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| sample_clustering(source, SampleSeed::new(seed, start + i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(p: f64) -> ProbabilisticGraph {
        ProbabilisticGraph::new(3, vec![Edge::new(0, 1, p), Edge::new(1, 2, p), Edge::new(0, 2, p)]).unwrap()
    }

    #[test]
    fn certain_edges_ignore_the_seed() {
        let g = triangle(1.0);
        for s in 0..20 {
            let c = sample_clustering((&g).into(), SampleSeed::new(s, s * 7)).unwrap();
            assert_eq!(c, Clustering::single_cluster(3));
        }
        let g = triangle(0.0);
        for s in 0..20 {
            let c = sample_clustering((&g).into(), SampleSeed::new(s, 3)).unwrap();
            assert_eq!(c, Clustering::singletons(3));
        }
    }

    #[test]
    fn stream_is_consumed_once() {
        let g = triangle(0.5);
        let mut stream = EdgeStream::new(g.edges().iter().copied());
        sample_stream(3, &mut stream, SampleSeed::new(1, 0)).unwrap();
        assert_eq!(stream.query_count(), 3);
        assert!(stream.next().is_none());
    }

    #[test]
    fn malformed_stream_probability() {
        let edges = vec![Edge::new(0, 1, 1.2)];
        let mut stream = EdgeStream::new(edges);
        assert!(matches!(
            sample_stream(2, &mut stream, SampleSeed::new(0, 0)),
            Err(Error::Input(_))
        ));
        let mut stream = EdgeStream::new(vec![Edge::new(0, 4, 0.5)]);
        assert!(sample_stream(2, &mut stream, SampleSeed::new(0, 0)).is_err());
    }

    #[test]
    fn sample_many_is_deterministic() {
        let g = triangle(0.5);
        let a = sample_many((&g).into(), 42, 50).unwrap();
        let b = sample_many((&g).into(), 42, 50).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[7], sample_clustering((&g).into(), SampleSeed::new(42, 7)).unwrap());
        let full = sample_many((&triangle(1.0)).into(), 3, 3).unwrap();
        assert!(full.iter().all(|c| *c == Clustering::single_cluster(3)));
    }

    #[test]
    fn explicit_source_frequency() {
        let a = Clustering::singletons(2);
        let b = Clustering::single_cluster(2);
        let d = ExplicitDistribution::from_f64(vec![(a.clone(), 0.9), (b, 0.1)]).unwrap();
        let samples = sample_many((&d).into(), 2024, 100_000).unwrap();
        let freq = samples.iter().filter(|c| **c == a).count() as f64 / 1e5;
        assert!((freq - 0.9).abs() < 0.01, "frequency {freq}");
    }
}
