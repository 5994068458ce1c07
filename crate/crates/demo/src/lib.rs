//! Browser bindings for a small interactive page: percolation samples on a
//! planted-blocks network, the tightness curve of the factor-3 bound, and
//! mean pairwise distances across a threshold sweep.
//!
//! Build with `wasm-pack build crates/demo --target web --out-dir www/pkg`.

use num_traits::ToPrimitive;
use onepass_cluster::ingest::{probabilize, ThresholdParam, WeightedGraph};
use onepass_cluster::oracle::{RatioProfile, TightnessDistribution};
use onepass_cluster::sweep::{run_sweep, SweepConfig};
use onepass_cluster::synth::PlantedBlocks;
use onepass_cluster::{sample_clustering, BlackBoxSource, Metric, SampleSeed};
use wasm_bindgen::prelude::*;

const MAX_NODES: usize = 2_000;
const MAX_SAMPLES: usize = 40;

fn planted(blocks: usize, block_size: usize, seed: u64) -> Result<WeightedGraph, String> {
    if blocks == 0 || block_size < 2 || blocks * block_size > MAX_NODES {
        return Err(format!(
            "need 1+ blocks of 2+ nodes, at most {MAX_NODES} nodes in total"
        ));
    }
    Ok(PlantedBlocks {
        blocks,
        block_size,
        inner_degree: 2,
        inner_weight: 9.0,
        cross_edges: block_size / 4 + 1,
        cross_weight: 1.0,
    }
    .generate(seed))
}

/// Samples one clustering of a planted-blocks network at threshold `t` and
/// returns its node labels (the smallest node id in each cluster).
#[wasm_bindgen]
pub fn percolate(blocks: usize, block_size: usize, t: f64, seed: u64, sample_index: u64) -> Result<Vec<u32>, String> {
    let g = planted(blocks, block_size, seed)?;
    let t = ThresholdParam::new(t).map_err(|e| e.to_string())?;
    let pg = probabilize(&g, t);
    let c = sample_clustering(BlackBoxSource::RandomGraph(&pg), SampleSeed::new(seed, sample_index))
        .map_err(|e| e.to_string())?;
    Ok(c.labels().to_vec())
}

/// For `k = 2..=k_max`, the exact ratio between a random sample's expected
/// cost and the optimum on the two-node tightness family. Values approach 3.
#[wasm_bindgen]
pub fn tightness_curve(k_max: u32) -> Result<Vec<f64>, String> {
    if !(2..=500).contains(&k_max) {
        return Err("k_max must be in 2..=500".into());
    }
    (2..=k_max as u64)
        .map(|k| {
            let d = TightnessDistribution::new(k).map_err(|e| e.to_string())?.distribution();
            let profile = RatioProfile::new(&d, Metric::SymDiff).map_err(|e| e.to_string())?;
            Ok(profile.ratio().to_f64().unwrap_or(f64::NAN))
        })
        .collect()
}

/// Mean pairwise distances per threshold, flattened as
/// `[t, mean_symdiff, mean_balcan, ...]`.
#[wasm_bindgen]
pub fn distance_sweep(
    blocks: usize,
    block_size: usize,
    t_min: f64,
    t_max: f64,
    t_step: f64,
    samples: usize,
    seed: u64,
) -> Result<Vec<f64>, String> {
    if !(2..=MAX_SAMPLES).contains(&samples) {
        return Err(format!("samples must be in 2..={MAX_SAMPLES}"));
    }
    if t_step > 0.0 && (t_max - t_min) / t_step > 200.0 {
        return Err("at most 200 threshold steps".into());
    }
    let g = planted(blocks, block_size, seed)?;
    let config = SweepConfig {
        t_min,
        t_max,
        t_step,
        samples_per_t: samples,
        seed,
    };
    let out = run_sweep(&g, &config).map_err(|e| e.to_string())?;
    let pairs = (samples * (samples - 1) / 2) as f64;
    Ok(out
        .distances
        .chunks(samples * (samples - 1) / 2)
        .flat_map(|rows| {
            let sd: u64 = rows.iter().map(|r| r.symdiff).sum();
            let b: u64 = rows.iter().map(|r| r.balcan).sum();
            [rows[0].t, sd as f64 / pairs, b as f64 / pairs]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percolate_is_seeded_and_complete_at_small_t() {
        let a = percolate(2, 10, 0.5, 3, 0).unwrap();
        assert_eq!(a, percolate(2, 10, 0.5, 3, 0).unwrap());
        assert_eq!(a.len(), 20);
        // every weight is >= 1 > t, so all edges are present
        assert!(a.iter().all(|&l| l == 0));
        let far = percolate(2, 10, 1e9, 3, 0).unwrap();
        assert_eq!(far, (0..20).collect::<Vec<u32>>());
    }

    #[test]
    fn tightness_curve_values() {
        let c = tightness_curve(10).unwrap();
        assert_eq!(c.len(), 9);
        assert!((c[0] - 1.5).abs() < 1e-12);
        assert!((c[8] - 2.7).abs() < 1e-12);
        assert!(c.windows(2).all(|w| w[0] < w[1] && w[1] < 3.0));
        assert!(tightness_curve(1).is_err());
    }

    #[test]
    fn sweep_is_zero_at_the_extremes() {
        let rows = distance_sweep(2, 10, 0.5, 0.5, 1.0, 4, 1).unwrap();
        assert_eq!(rows, vec![0.5, 0.0, 0.0]);
        let rows = distance_sweep(2, 10, 2.0, 20.0, 6.0, 4, 1).unwrap();
        assert_eq!(rows.len(), 4 * 3);
        for r in rows.chunks(3) {
            assert!(r[2] <= r[1] && r[1] <= 2.0 * r[2] && r[1] <= 20.0);
        }
        assert!(distance_sweep(2, 10, 1.0, 2.0, 1.0, 1, 1).is_err());
        assert!(distance_sweep(1000, 10, 1.0, 2.0, 1.0, 4, 1).is_err());
    }
}
