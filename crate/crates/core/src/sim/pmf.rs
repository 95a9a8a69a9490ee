use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-9;

/// Probability mass function over 2ⁿ computational-basis outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    /// Validates non-negativity and unit sum (within 1e-9).
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidPmf("empty".into()));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(**p >= 0.0) || !p.is_finite())
        {
            return Err(Error::InvalidPmf(format!("entry {i} = {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidPmf(format!("sums to {sum}")));
        }
        Ok(Self { probs })
    }

    /// Normalizes non-negative weights to unit sum.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) || weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidPmf(format!("weights sum to {sum}")));
        }
        Ok(Self {
            probs: weights.into_iter().map(|w| w / sum).collect(),
        })
    }

    /// For values that are a distribution up to rounding (Born probabilities,
    /// density-matrix diagonals). Tiny negative round-off is clamped.
    pub(crate) fn from_weights_unchecked(mut probs: Vec<f64>) -> Self {
        for p in probs.iter_mut() {
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        Self { probs }
    }

    pub fn uniform(n_bins: usize) -> Self {
        Self {
            probs: vec![1.0 / n_bins as f64; n_bins],
        }
    }

    pub fn one_hot(n_bins: usize, index: usize) -> Self {
        let mut probs = vec![0.0; n_bins];
        probs[index] = 1.0;
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// log₂ of the bin count, if it is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        self.probs
            .len()
            .is_power_of_two()
            .then(|| self.probs.len().trailing_zeros() as usize)
    }

    pub fn total_variation(&self, other: &Pmf) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(0.5
            * self
                .probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>())
    }

    /// Marginal over the `width` qubits starting at `first`.
    pub fn marginal(&self, first: usize, width: usize) -> Vec<f64> {
        let mask = (1usize << width) - 1;
        let mut out = vec![0.0; 1 << width];
        for (i, p) in self.probs.iter().enumerate() {
            out[(i >> first) & mask] += p;
        }
        out
    }

    /// Draws `n_shots` outcomes. Deterministic for a given generator state.
    pub fn sample_shots<R: Rng + ?Sized>(
        &self,
        n_shots: u64,
        rng: &mut R,
    ) -> Result<ShotHistogram> {
        if n_shots == 0 {
            return Err(Error::ZeroShots);
        }
        let n_bins = self.probs.len();
        let counts = if n_shots.saturating_mul(4) < n_bins as u64 {
            self.sample_by_inversion(n_shots, rng)
        } else {
            self.sample_by_binomials(n_shots, rng)
        };
        Ok(ShotHistogram { counts, n_shots })
    }

    /// Few shots over many bins: inverse-CDF per shot.
    fn sample_by_inversion<R: Rng + ?Sized>(&self, n_shots: u64, rng: &mut R) -> Vec<u64> {
        let mut cdf = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0;
        for p in &self.probs {
            acc += p;
            cdf.push(acc);
        }
        let mut counts = vec![0u64; self.probs.len()];
        for _ in 0..n_shots {
            counts[sample_from_cdf(&cdf, &self.probs, rng)] += 1;
        }
        counts
    }

    /// Conditional binomials: count_i ~ B(remaining shots, p_i / remaining mass).
    fn sample_by_binomials<R: Rng + ?Sized>(&self, n_shots: u64, rng: &mut R) -> Vec<u64> {
        let mut counts = vec![0u64; self.probs.len()];
        let mut remaining = n_shots;
        let mut mass: f64 = self.probs.iter().sum();
        let last_nonzero = self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        for (i, &p) in self.probs.iter().enumerate() {
            if remaining == 0 {
                break;
            }
            if i == last_nonzero {
                counts[i] = remaining;
                break;
            }
            if p <= 0.0 {
                continue;
            }
            let ratio = (p / mass).clamp(0.0, 1.0);
            let k = if ratio >= 1.0 {
                remaining
            } else {
                Binomial::new(remaining, ratio)
                    .expect("ratio lies in [0, 1]")
                    .sample(rng)
            };
            counts[i] = k;
            remaining -= k;
            mass -= p;
        }
        counts
    }
}

/// Samples one index given the running sum of `probs`.
pub(crate) fn sample_from_cdf<R: Rng + ?Sized>(cdf: &[f64], probs: &[f64], rng: &mut R) -> usize {
    let total = *cdf.last().expect("non-empty");
    let u = rng.random::<f64>() * total;
    let mut idx = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
    // Never return a zero-probability bin due to rounding at the top.
    while probs[idx] <= 0.0 && idx > 0 {
        idx -= 1;
    }
    idx
}

/// Counts of measured outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotHistogram {
    counts: Vec<u64>,
    n_shots: u64,
}

impl ShotHistogram {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        let n_shots = counts.iter().sum();
        if n_shots == 0 {
            return Err(Error::ZeroShots);
        }
        Ok(Self { counts, n_shots })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n_shots(&self) -> u64 {
        self.n_shots
    }

    /// Empirical frequencies nᵢ / n_shots.
    pub fn to_pmf(&self) -> Pmf {
        let n = self.n_shots as f64;
        Pmf {
            probs: self.counts.iter().map(|&c| c as f64 / n).collect(),
        }
    }

    /// Outcomes with multiplicity, in ascending index order.
    pub fn outcomes(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| core::iter::repeat_n(i, c as usize))
    }
}
