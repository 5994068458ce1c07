//! Best-of-many selection.
//!
//! Draw `m` candidate clusterings and `l` further evaluation clusterings,
//! score every candidate by its mean symmetric-difference distance to the
//! evaluators (`d_i = Σ_j D_{C'_i}(X_j) / n`), and keep the lowest score.
//!
//! With `m = ⌈log_{1+ε}(1/τ)⌉` candidates, some candidate is within
//! `(3 + 2ε)` of optimal except with probability `τ`. The evaluator count
//! comes from a multiplicative Chernoff bound plus a union bound over the
//! candidates; its constant is configurable (default
//! [`DEFAULT_CHERNOFF_CONSTANT`]) because only the asymptotic form is
//! known.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Clustering;
use crate::metrics::symdiff_distance;
use crate::sampling::{sample_range, BlackBoxSource};

pub const DEFAULT_CHERNOFF_CONSTANT: f64 = 2.0;

/// First sample index used for evaluators; candidates use `0..m`.
pub const EVALUATOR_STREAM_OFFSET: u64 = 1 << 63;

/// `⌈x⌉`, ignoring floating-point noise just above an integer.
fn ceil_tolerant(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

/// `⌈ln(1/τ) / ln(1+ε)⌉`, at least 1.
pub fn candidates_needed(epsilon: f64, tau: f64) -> Result<u32> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::input(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::input(format!("tau must lie in (0, 1), got {tau}")));
    }
    let m = ceil_tolerant((1.0 / tau).ln() / epsilon.ln_1p());
    Ok(m.max(1.0) as u32)
}

/// `⌈(n/δ²) · c · ln(m/p)⌉`, at least 1, with `c` the Chernoff constant.
pub fn evaluators_needed_with(n: usize, delta: f64, m: u32, p: f64, chernoff: f64) -> Result<u64> {
    if n == 0 {
        return Err(Error::input("universe must be nonempty"));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::input(format!("delta must be positive, got {delta}")));
    }
    if m == 0 {
        return Err(Error::input("candidate count must be positive"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::input(format!("failure probability must lie in (0, 1), got {p}")));
    }
    if !(chernoff > 0.0 && chernoff.is_finite()) {
        return Err(Error::input(format!(
            "Chernoff constant must be positive, got {chernoff}"
        )));
    }
    let l = ceil_tolerant(n as f64 / (delta * delta) * chernoff * ((m as f64).ln() - p.ln()));
    Ok(if l.is_finite() { l.max(1.0) as u64 } else { 1 })
}

/// [`evaluators_needed_with`] using [`DEFAULT_CHERNOFF_CONSTANT`].
pub fn evaluators_needed(n: usize, delta: f64, m: u32, p: f64) -> Result<u64> {
    evaluators_needed_with(n, delta, m, p, DEFAULT_CHERNOFF_CONSTANT)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionParams {
    pub epsilon: f64,
    pub tau: f64,
    pub delta: f64,
    /// Candidate count.
    pub m: u32,
    /// Evaluator count.
    pub l: u64,
}

impl SelectionParams {
    /// Derives `m` and `l` from the accuracy targets.
    pub fn derive(n: usize, epsilon: f64, tau: f64, delta: f64, p: f64) -> Result<Self> {
        let m = candidates_needed(epsilon, tau)?;
        let l = evaluators_needed(n, delta, m, p)?;
        Ok(SelectionParams {
            epsilon,
            tau,
            delta,
            m,
            l,
        })
    }

    /// Explicit counts; `epsilon`, `tau` and `delta` are informational.
    pub fn with_counts(m: u32, l: u64) -> Result<Self> {
        if m == 0 || l == 0 {
            return Err(Error::input("candidate and evaluator counts must be positive"));
        }
        Ok(SelectionParams {
            epsilon: f64::NAN,
            tau: f64::NAN,
            delta: f64::NAN,
            m,
            l,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SelectionResult {
    pub chosen: Clustering,
    pub chosen_index: usize,
    /// `d_i` per candidate.
    pub scores: Vec<f64>,
    /// `Σ_j D_{C'_i}(X_j)` per candidate.
    pub totals: Vec<u64>,
}

/// Runs the candidate/evaluator procedure. Candidates use sample indices
/// `0..m`, evaluators `EVALUATOR_STREAM_OFFSET..+l`, so the two sets are
/// independent draws from `source`. Ties go to the lowest index.
pub fn select_candidate(source: BlackBoxSource<'_>, params: &SelectionParams, seed: u64) -> Result<SelectionResult> {
    if params.m == 0 || params.l == 0 {
        return Err(Error::input("candidate and evaluator counts must be positive"));
    }
    let n = source.universe();
    let candidates = sample_range(source, seed, 0, params.m as usize)?;
    let evaluators = sample_range(source, seed, EVALUATOR_STREAM_OFFSET, params.l as usize)?;
    let totals = candidates
        .par_iter()
        .map(|c| {
            evaluators
                .iter()
                .map(|x| symdiff_distance(c, x).map(|(d, _)| d))
                .sum::<Result<u64>>()
        })
        .collect::<Result<Vec<u64>>>()?;
    let chosen_index = totals
        .iter()
        .enumerate()
        .min_by_key(|&(i, t)| (*t, i))
        .map(|(i, _)| i)
        .expect("at least one candidate");
    let scores = totals
        .iter()
        .map(|&t| if n == 0 { 0.0 } else { t as f64 / n as f64 })
        .collect();
    Ok(SelectionResult {
        chosen: candidates[chosen_index].clone(),
        chosen_index,
        scores,
        totals,
    })
}
