//! Threshold sweeps: for each `t` in a grid, sample several clusterings and
//! record component sizes, pairwise benefits and pairwise distances.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Clustering;
use crate::ingest::{probabilize, ThresholdParam, WeightedGraph};
use crate::metrics::{balcan_distance, symdiff_distance};
use crate::sampling::{sample_clustering, BlackBoxSource, SampleSeed};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub t_step: f64,
    pub samples_per_t: usize,
    pub seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_max.is_finite() && self.t_step > 0.0) {
            return Err(Error::input("t_min and t_step must be positive, t_max finite"));
        }
        if self.t_min > self.t_max {
            return Err(Error::input(format!(
                "t_min {} exceeds t_max {}",
                self.t_min, self.t_max
            )));
        }
        if self.samples_per_t < 2 {
            return Err(Error::input("pairwise statistics need at least 2 samples per t"));
        }
        Ok(())
    }

    /// `t_min + k * t_step` up to `t_max`, computed without accumulation.
    pub fn t_values(&self) -> Vec<f64> {
        let steps = ((self.t_max - self.t_min) / self.t_step + 1e-9).floor() as usize;
        (0..=steps).map(|k| self.t_min + k as f64 * self.t_step).collect()
    }
}

/// `sizes.csv` row: `count` components of `component_size` in one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeRow {
    pub t: f64,
    pub sample_index: usize,
    pub component_size: usize,
    pub count: usize,
}

/// `benefits.csv` row: `count` kept pairs with this benefit for one sample
/// pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BenefitRow {
    pub t: f64,
    pub pair_index: usize,
    pub benefit: u64,
    pub count: usize,
}

/// `distances.csv` row; the symmetric-difference distance uses sample `i`
/// as the reference.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceRow {
    pub t: f64,
    pub i: usize,
    pub j: usize,
    pub symdiff: u64,
    pub balcan: u64,
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutput {
    pub sizes: Vec<SizeRow>,
    pub benefits: Vec<BenefitRow>,
    pub distances: Vec<DistanceRow>,
}

/// Unordered sample pairs `(i, j)`, `i < j`, in lexicographic order; the
/// position in this list is the pair index.
pub fn sample_pairs(samples: usize) -> Vec<(usize, usize)> {
    (0..samples)
        .flat_map(|i| (i + 1..samples).map(move |j| (i, j)))
        .collect()
}

fn run_length(sorted: &[u64]) -> Vec<(u64, usize)> {
    let mut out: Vec<(u64, usize)> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some((last, count)) if *last == v => *count += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Runs the sweep. Sample `s` at the `k`-th threshold uses sample index
/// `k * samples_per_t + s`.
pub fn run_sweep(graph: &WeightedGraph, config: &SweepConfig) -> Result<SweepOutput> {
    config.validate()?;
    let per_t = config.samples_per_t;
    let pairs = sample_pairs(per_t);
    let mut out = SweepOutput::default();
    for (k, t) in config.t_values().into_iter().enumerate() {
        let g = probabilize(graph, ThresholdParam::new(t)?);
        let samples: Vec<Clustering> = (0..per_t)
            .into_par_iter()
            .map(|s| {
                let seed = SampleSeed::new(config.seed, (k * per_t + s) as u64);
                sample_clustering(BlackBoxSource::RandomGraph(&g), seed)
            })
            .collect::<Result<_>>()?;

        for (s, c) in samples.iter().enumerate() {
            let sizes: Vec<u64> = c.cluster_sizes().into_iter().map(|x| x as u64).collect();
            out.sizes
                .extend(run_length(&sizes).into_iter().map(|(size, count)| SizeRow {
                    t,
                    sample_index: s,
                    component_size: size as usize,
                    count,
                }));
        }

        let per_pair: Vec<(Vec<u64>, u64, u64)> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (d, matching) = symdiff_distance(&samples[i], &samples[j])?;
                let b = balcan_distance(&samples[i], &samples[j])?;
                Ok((matching.benefits(), d, b))
            })
            .collect::<Result<_>>()?;

        for (pair_index, ((benefits, d, b), &(i, j))) in per_pair.into_iter().zip(&pairs).enumerate() {
            out.benefits
                .extend(run_length(&benefits).into_iter().map(|(benefit, count)| BenefitRow {
                    t,
                    pair_index,
                    benefit,
                    count,
                }));
            out.distances.push(DistanceRow {
                t,
                i,
                j,
                symdiff: d,
                balcan: b,
            });
        }
    }
    Ok(out)
}

impl SweepOutput {
    pub fn write_sizes<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,sample_index,component_size,count")?;
        for r in &self.sizes {
            writeln!(w, "{},{},{},{}", r.t, r.sample_index, r.component_size, r.count)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_benefits<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,pair_index,benefit,count")?;
        for r in &self.benefits {
            writeln!(w, "{},{},{},{}", r.t, r.pair_index, r.benefit, r.count)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_distances<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,i,j,symdiff_distance,balcan_distance")?;
        for r in &self.distances {
            writeln!(w, "{},{},{},{},{}", r.t, r.i, r.j, r.symdiff, r.balcan)?;
        }
        w.flush()?;
        Ok(())
    }
}
