//! One-pass random-subgraph clustering.
//!
//! Each edge of a network carries an independent probability. Sampling the
//! graph once, edge by edge, and taking the connected components of the
//! kept edges yields a clustering whose expected symmetric-difference
//! distance to a fresh sample is within a factor 3 of the best possible
//! clustering (factor 2 under the misclassification distance).
//!
//! Modules:
//! - [`graph`]: node ids, probabilistic graphs, canonical clusterings,
//!   disjoint sets.
//! - [`sampling`]: one-pass seeded samplers over random graphs and explicit
//!   distributions.
//! - [`metrics`]: the two clustering distances and per-cluster benefits.
//! - [`selection`]: best-of-`m` selection and its sample-size calculators.
//! - [`oracle`]: exhaustive, exact computations for tiny instances.
//! - [`ingest`]: trust ratings to probabilistic graphs.
//! - [`sweep`]: threshold sweeps producing CSV tables.
//! - [`io`]: text formats.

pub mod assignment;
pub mod distribution;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod io;
pub mod metrics;
pub mod oracle;
pub mod sampling;
pub mod selection;
pub mod sweep;
pub mod synth;

pub use distribution::ExplicitDistribution;
pub use error::{Error, Result};
pub use graph::{canonicalize, cluster_sizes, components, Clustering, DisjointSet, Edge, NodeId, ProbabilisticGraph};
pub use metrics::{balcan_distance, benefits, symdiff_distance, ClusterMatching, MatchedPair, Metric};
pub use sampling::{sample_clustering, sample_many, BlackBoxSource, EdgeStream, SampleSeed};
pub use selection::{candidates_needed, evaluators_needed, select_candidate, SelectionParams, SelectionResult};
