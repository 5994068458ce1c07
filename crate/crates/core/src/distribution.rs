//! Explicit finite distributions over clusterings with exact probabilities.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::Clustering;

/// Absolute tolerance on the total probability mass.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// A finite list of distinct canonical clusterings with exact probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitDistribution {
    n: usize,
    outcomes: Vec<(Clustering, BigRational)>,
    cumulative: Vec<f64>,
}

impl ExplicitDistribution {
    /// Duplicate clusterings are merged by summing their mass; zero-mass
    /// outcomes are dropped. Outcomes come back in canonical order.
    pub fn new(outcomes: Vec<(Clustering, BigRational)>) -> Result<Self> {
        let Some(n) = outcomes.first().map(|(c, _)| c.len()) else {
            return Err(Error::input("distribution has no outcomes"));
        };
        let mut merged: BTreeMap<Clustering, BigRational> = BTreeMap::new();
        for (c, p) in outcomes {
            if c.len() != n {
                return Err(Error::input(format!(
                    "outcome over {} nodes in a distribution over {n}",
                    c.len()
                )));
            }
            if p.is_negative() {
                return Err(Error::input(format!("negative probability {p}")));
            }
            *merged.entry(c).or_insert_with(BigRational::zero) += p;
        }
        let total: BigRational = merged.values().sum();
        let gap = (&total - BigRational::one()).abs().to_f64().unwrap_or(f64::INFINITY);
        if gap > MASS_TOLERANCE {
            return Err(Error::input(format!("probabilities sum to {total}, not 1")));
        }
        let outcomes: Vec<_> = merged.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        let cumulative = cumulative(&outcomes);
        Ok(ExplicitDistribution {
            n,
            outcomes,
            cumulative,
        })
    }

    /// Converts floating-point probabilities exactly (every finite f64 is a
    /// dyadic rational).
    pub fn from_f64(outcomes: Vec<(Clustering, f64)>) -> Result<Self> {
        let exact = outcomes
            .into_iter()
            .map(|(c, p)| {
                BigRational::from_float(p)
                    .map(|r| (c, r))
                    .ok_or_else(|| Error::input(format!("probability {p} is not finite")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(exact)
    }

    pub fn point_mass(c: Clustering) -> Self {
        ExplicitDistribution {
            n: c.len(),
            outcomes: vec![(c, BigRational::one())],
            cumulative: vec![1.0],
        }
    }

    /// Universe size.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn outcomes(&self) -> &[(Clustering, BigRational)] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn probability_of(&self, c: &Clustering) -> BigRational {
        self.outcomes
            .iter()
            .find(|(o, _)| o == c)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Probabilities rescaled to integers over their least common
    /// denominator: returns `(weights, denominator)`.
    pub fn integer_weights(&self) -> (Vec<BigInt>, BigInt) {
        let lcm = self
            .outcomes
            .iter()
            .fold(BigInt::one(), |acc, (_, p)| num_integer::lcm(acc, p.denom().clone()));
        let weights = self
            .outcomes
            .iter()
            .map(|(_, p)| p.numer() * (&lcm / p.denom()))
            .collect();
        (weights, lcm)
    }

    /// Index of the outcome selected by a uniform variate in `[0, 1)`.
    pub(crate) fn outcome_at(&self, u: f64) -> usize {
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.outcomes.len() - 1)
    }
}

/// Cumulative probabilities as f64, for inverse-CDF sampling.
fn cumulative(outcomes: &[(Clustering, BigRational)]) -> Vec<f64> {
    let mut acc = BigRational::zero();
    outcomes
        .iter()
        .map(|(_, p)| {
            acc += p;
            acc.to_f64().unwrap_or(1.0)
        })
        .collect()
}
