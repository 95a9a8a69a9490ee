use alloc::vec::Vec;

use crate::optim::{nelder_mead, NelderMeadSettings};
use crate::{Error, Result};

/// Minimum number of points accepted by [`fit_stretched_exponential`].
pub const MIN_FIT_POINTS: usize = 8;
pub const GAMMA_MAX: f64 = 1.5;

const GRID: usize = 20;
const GAMMA_GRID_MIN: f64 = 0.05;
/// Grid bounds for the decay rate in normalized units, b = β·x_max^γ.
const RATE_GRID: (f64, f64) = (1e-2, 1e4);
const REFINE_STARTS: usize = 4;

/// Parameters of f(x) = α·exp(−β·x^γ) + C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub c_conv: f64,
    pub residual_rms: f64,
}

impl FitResult {
    pub fn eval(&self, x: f64) -> f64 {
        self.alpha * libm::exp(-self.beta * libm::pow(x, self.gamma)) + self.c_conv
    }
}

/// Curve in normalized abscissa u = x / x_max, which keeps the decay rate
/// O(1) whatever the execution scale.
struct Problem<'a> {
    ln_u: Vec<f64>,
    y: &'a [f64],
}

impl Problem<'_> {
    fn sse(&self, alpha: f64, rate: f64, gamma: f64, c: f64) -> f64 {
        self.ln_u
            .iter()
            .zip(self.y)
            .map(|(&l, &y)| {
                let r = alpha * libm::exp(-rate * libm::exp(gamma * l)) + c - y;
                r * r
            })
            .sum()
    }

    /// Best (α, C ≥ 0) for fixed (rate, γ), by linear least squares.
    fn linear_part(&self, rate: f64, gamma: f64) -> (f64, f64) {
        let n = self.ln_u.len() as f64;
        let (mut sp, mut spp, mut sy, mut spy) = (0.0, 0.0, 0.0, 0.0);
        for (&l, &y) in self.ln_u.iter().zip(self.y) {
            let p = libm::exp(-rate * libm::exp(gamma * l));
            sp += p;
            spp += p * p;
            sy += y;
            spy += p * y;
        }
        let det = n * spp - sp * sp;
        if det.abs() > 1e-300 * n * spp.max(1.0) {
            let alpha = (n * spy - sp * sy) / det;
            let c = (spp * sy - sp * spy) / det;
            if c >= 0.0 {
                return (alpha, c);
            }
        }
        if spp > 0.0 {
            (spy / spp, 0.0)
        } else {
            (0.0, (sy / n).max(0.0))
        }
    }

    fn projected_sse(&self, rate: f64, gamma: f64) -> f64 {
        let (alpha, c) = self.linear_part(rate, gamma);
        self.sse(alpha, rate, gamma, c)
    }
}

fn log_space(lo: f64, hi: f64, k: usize, n: usize) -> f64 {
    libm::exp(libm::log(lo) + (libm::log(hi) - libm::log(lo)) * k as f64 / (n - 1) as f64)
}

fn in_bounds(rate: f64, gamma: f64, c: f64) -> bool {
    rate >= 0.0 && gamma > 0.0 && gamma <= GAMMA_MAX && c >= 0.0 && rate.is_finite()
}

/// Least-squares fit of α·exp(−β·x^γ) + C.
///
/// A 20×20 log-spaced grid over (β, γ) seeds the search; at each node the
/// best α and C ≥ 0 are solved linearly, and the start C₀ = min y,
/// α₀ = y₀ − C₀ is scored alongside. The best nodes are refined by
/// Nelder–Mead, first on (ln β, γ) with α and C eliminated, then on all four
/// parameters. Bounds: β ≥ 0, γ ∈ (0, 1.5], C ≥ 0.
///
/// A constant series returns α = 0, C = y₀.
pub fn fit_stretched_exponential(x: &[f64], y: &[f64]) -> Result<FitResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_FIT_POINTS,
            got: x.len(),
        });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("fit input"));
    }
    if x[0] <= 0.0 || x.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "x must be positive and strictly increasing".into(),
        ));
    }

    let y_min = y.iter().copied().fold(f64::INFINITY, f64::min);
    let y_max = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if y_max - y_min <= 1e-15 * y_max.abs().max(1.0) {
        return Ok(FitResult {
            alpha: 0.0,
            beta: 0.0,
            gamma: 1.0,
            c_conv: y[0].max(0.0),
            residual_rms: if y[0] < 0.0 { -y[0] } else { 0.0 },
        });
    }

    let x_max = x[x.len() - 1];
    let prob = Problem {
        ln_u: x.iter().map(|&v| libm::log(v / x_max)).collect(),
        y,
    };

    let c0 = y_min.max(0.0);
    let alpha0 = y[0] - c0;
    let mut grid: Vec<(f64, f64, f64)> = Vec::with_capacity(GRID * GRID);
    for i in 0..GRID {
        let gamma = log_space(GAMMA_GRID_MIN, GAMMA_MAX, i, GRID);
        for j in 0..GRID {
            let rate = log_space(RATE_GRID.0, RATE_GRID.1, j, GRID);
            let naive = prob.sse(alpha0, rate, gamma, c0);
            grid.push((prob.projected_sse(rate, gamma).min(naive), rate, gamma));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));

    let settings = NelderMeadSettings {
        max_iterations: 5_000,
        f_tolerance: 1e-20,
        x_tolerance: 1e-10,
    };
    let mut best: Option<([f64; 4], f64)> = None;
    for &(_, rate, gamma) in grid.iter().take(REFINE_STARTS) {
        let reduced = nelder_mead(
            |v| {
                let (rate, gamma) = (libm::exp(v[0]), v[1]);
                if !in_bounds(rate, gamma, 0.0) {
                    return f64::INFINITY;
                }
                prob.projected_sse(rate, gamma)
            },
            &[libm::log(rate), gamma],
            &[0.3, 0.1 * gamma],
            settings,
        );
        let (rate, gamma) = (libm::exp(reduced.x[0]), reduced.x[1]);
        let (alpha, c) = prob.linear_part(rate, gamma);
        let scale = alpha.abs().max(1e-3);
        let full = nelder_mead(
            |v| {
                let (rate, gamma) = (libm::exp(v[1]), v[2]);
                if !in_bounds(rate, gamma, v[3]) {
                    return f64::INFINITY;
                }
                prob.sse(v[0], rate, gamma, v[3])
            },
            &[alpha, libm::log(rate), gamma, c],
            &[0.01 * scale, 0.01, 0.01 * gamma, 0.01 * scale],
            settings,
        );
        let candidate = if full.value <= reduced.value {
            (
                [full.x[0], libm::exp(full.x[1]), full.x[2], full.x[3]],
                full.value,
            )
        } else {
            ([alpha, rate, gamma, c], reduced.value)
        };
        if best.is_none_or(|(_, v)| candidate.1 < v) {
            best = Some(candidate);
        }
    }

    let ([alpha, rate, gamma, c], sse) = best.expect("at least one start");
    Ok(FitResult {
        alpha,
        beta: rate / libm::pow(x_max, gamma),
        gamma,
        c_conv: c,
        residual_rms: libm::sqrt(sse / x.len() as f64),
    })
}
