//! (μ/μ_w, λ)-CMA-ES with rank-one and rank-μ covariance updates and
//! cumulative step-size adaptation, using the default strategy parameters
//! from Hansen's tutorial.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{symmetric_eigen, SquareMatrix};
use crate::{Error, Result};

/// Ask/tell CMA-ES state for minimization.
#[derive(Debug, Clone)]
pub struct CmaEs {
    dim: usize,
    lambda: usize,
    weights: Vec<f64>,
    mu_eff: f64,
    cc: f64,
    cs: f64,
    c1: f64,
    cmu: f64,
    damps: f64,
    chi_n: f64,
    mean: Vec<f64>,
    sigma: f64,
    cov: SquareMatrix,
    basis: SquareMatrix,
    scales: Vec<f64>,
    pc: Vec<f64>,
    ps: Vec<f64>,
    generation: u64,
    eigen_generation: u64,
    evaluations: u64,
    pending: Vec<Vec<f64>>,
}

impl CmaEs {
    pub fn new(x0: Vec<f64>, sigma0: f64, lambda: usize) -> Result<Self> {
        let dim = x0.len();
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "CMA-ES needs at least one dimension".into(),
            ));
        }
        if lambda < 2 {
            return Err(Error::InvalidArgument(alloc::format!(
                "population size {lambda} < 2"
            )));
        }
        if !(sigma0 > 0.0) || !sigma0.is_finite() {
            return Err(Error::InvalidArgument(alloc::format!("sigma0 = {sigma0}")));
        }
        let n = dim as f64;
        let mu = lambda / 2;
        let raw: Vec<f64> = (1..=mu)
            .map(|i| libm::log(mu as f64 + 0.5) - libm::log(i as f64))
            .collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let mu_eff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();

        let cc = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n);
        let cs = (mu_eff + 2.0) / (n + mu_eff + 5.0);
        let c1 = 2.0 / ((n + 1.3) * (n + 1.3) + mu_eff);
        let cmu =
            (1.0 - c1).min(2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((n + 2.0) * (n + 2.0) + mu_eff));
        let damps = 1.0 + 2.0 * (libm::sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0).max(0.0) + cs;
        let chi_n = libm::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

        Ok(Self {
            dim,
            lambda,
            weights,
            mu_eff,
            cc,
            cs,
            c1,
            cmu,
            damps,
            chi_n,
            mean: x0,
            sigma: sigma0,
            cov: SquareMatrix::identity(dim),
            basis: SquareMatrix::identity(dim),
            scales: vec![1.0; dim],
            pc: vec![0.0; dim],
            ps: vec![0.0; dim],
            generation: 0,
            eigen_generation: 0,
            evaluations: 0,
            pending: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    /// Objective evaluations reported through [`CmaEs::tell`].
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Samples λ candidates `m + σ B D z`.
    pub fn ask<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Vec<Vec<f64>> {
        self.pending.clear();
        let mut out = Vec::with_capacity(self.lambda);
        for _ in 0..self.lambda {
            let z: Vec<f64> = (0..self.dim)
                .map(|i| {
                    let g: f64 = StandardNormal.sample(rng);
                    self.scales[i] * g
                })
                .collect();
            let y = self.basis.mul_vec(&z);
            let x = self
                .mean
                .iter()
                .zip(&y)
                .map(|(m, yi)| m + self.sigma * yi)
                .collect();
            self.pending.push(y);
            out.push(x);
        }
        out
    }

    /// Updates the distribution from the objective values of the last
    /// [`CmaEs::ask`] batch, in the same order.
    pub fn tell(&mut self, fitness: &[f64]) -> Result<()> {
        if fitness.len() != self.pending.len() || self.pending.is_empty() {
            return Err(Error::LengthMismatch {
                left: fitness.len(),
                right: self.pending.len(),
            });
        }
        if fitness.iter().any(|f| !f.is_finite()) {
            return Err(Error::NonFinite("objective value"));
        }
        self.evaluations += fitness.len() as u64;
        let mut order: Vec<usize> = (0..fitness.len()).collect();
        order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(a.cmp(&b)));

        let n = self.dim;
        let mut y_w = vec![0.0; n];
        for (w, &idx) in self.weights.iter().zip(&order) {
            for (acc, y) in y_w.iter_mut().zip(&self.pending[idx]) {
                *acc += w * y;
            }
        }
        for (m, y) in self.mean.iter_mut().zip(&y_w) {
            *m += self.sigma * y;
        }

        // C^{-1/2} y_w = B D^{-1} Bᵀ y_w
        let mut t = self.basis.transpose_mul_vec(&y_w);
        for (ti, d) in t.iter_mut().zip(&self.scales) {
            *ti /= d;
        }
        let inv_sqrt_y = self.basis.mul_vec(&t);
        let cs_norm = libm::sqrt(self.cs * (2.0 - self.cs) * self.mu_eff);
        for (p, v) in self.ps.iter_mut().zip(&inv_sqrt_y) {
            *p = (1.0 - self.cs) * *p + cs_norm * v;
        }
        let ps_norm = libm::sqrt(self.ps.iter().map(|p| p * p).sum::<f64>());
        let gen = (self.generation + 1) as f64;
        let h_sigma = ps_norm / libm::sqrt(1.0 - libm::pow(1.0 - self.cs, 2.0 * gen))
            < (1.4 + 2.0 / (n as f64 + 1.0)) * self.chi_n;
        let h = if h_sigma { 1.0 } else { 0.0 };
        let cc_norm = libm::sqrt(self.cc * (2.0 - self.cc) * self.mu_eff);
        for (p, y) in self.pc.iter_mut().zip(&y_w) {
            *p = (1.0 - self.cc) * *p + h * cc_norm * y;
        }

        let decay = 1.0 - self.c1 - self.cmu + (1.0 - h) * self.c1 * self.cc * (2.0 - self.cc);
        for r in 0..n {
            for c in r..n {
                let mut rank_mu = 0.0;
                for (w, &idx) in self.weights.iter().zip(&order) {
                    let y = &self.pending[idx];
                    rank_mu += w * y[r] * y[c];
                }
                let v = decay * self.cov[(r, c)]
                    + self.c1 * self.pc[r] * self.pc[c]
                    + self.cmu * rank_mu;
                self.cov[(r, c)] = v;
                self.cov[(c, r)] = v;
            }
        }

        self.sigma *= libm::exp((self.cs / self.damps) * (ps_norm / self.chi_n - 1.0));
        self.generation += 1;

        let gap = self.lambda as f64 / ((self.c1 + self.cmu) * n as f64 * 10.0);
        if (self.generation - self.eigen_generation) as f64 > gap {
            self.update_eigensystem();
        }
        self.pending.clear();
        Ok(())
    }

    fn update_eigensystem(&mut self) {
        self.eigen_generation = self.generation;
        let eig = symmetric_eigen(&self.cov);
        self.scales = eig
            .values
            .iter()
            .map(|&v| libm::sqrt(v.max(1e-300)))
            .collect();
        self.basis = eig.vectors;
    }
}

/// Outcome of [`cma_es_minimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct CmaEsResult {
    pub best_x: Vec<f64>,
    pub best_value: f64,
    /// Best objective value within each generation.
    pub history: Vec<f64>,
    pub evaluations: u64,
}

/// Runs `max_generations` generations of λ evaluations each.
pub fn cma_es_minimize<F, R>(
    mut objective: F,
    x0: Vec<f64>,
    sigma0: f64,
    lambda: usize,
    max_generations: usize,
    rng: &mut R,
) -> Result<CmaEsResult>
where
    F: FnMut(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    let mut es = CmaEs::new(x0.clone(), sigma0, lambda)?;
    let mut best_x = x0;
    let mut best_value = f64::INFINITY;
    let mut history = Vec::with_capacity(max_generations);
    for _ in 0..max_generations {
        let candidates = es.ask(rng);
        let fitness: Vec<f64> = candidates.iter().map(|x| objective(x)).collect();
        es.tell(&fitness)?;
        let (i, &f) = fitness
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("lambda >= 2");
        if f < best_value {
            best_value = f;
            best_x = candidates[i].clone();
        }
        history.push(f);
    }
    Ok(CmaEsResult {
        best_x,
        best_value,
        history,
        evaluations: es.evaluations(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn sphere_converges() {
        let mut rng = rng_from_seed(2024);
        let r = cma_es_minimize(sphere, vec![1.0; 10], 0.5, 10, 300, &mut rng).unwrap();
        assert!(r.best_value < 1e-8, "best {}", r.best_value);
        assert_eq!(r.evaluations, 3000);
    }

    #[test]
    fn evaluation_count_is_lambda_times_generations() {
        let mut calls = 0u64;
        let mut rng = rng_from_seed(1);
        let r = cma_es_minimize(
            |x| {
                calls += 1;
                sphere(x)
            },
            vec![0.3; 4],
            0.5,
            5,
            17,
            &mut rng,
        )
        .unwrap();
        assert_eq!(calls, 5 * 17);
        assert_eq!(r.evaluations, 5 * 17);
        assert_eq!(r.history.len(), 17);
    }

    #[test]
    fn constant_objective_does_not_diverge() {
        // Flat fitness makes selection random: the mean and log σ random-walk
        // without drift, so only blow-ups are failures.
        for seed in 0..5 {
            let mut rng = rng_from_seed(seed);
            let mut es = CmaEs::new(vec![2.0; 6], 0.5, 8).unwrap();
            for _ in 0..100 {
                es.ask(&mut rng);
                es.tell(&[1.0; 8]).unwrap();
            }
            let drift = es
                .mean()
                .iter()
                .map(|m| (m - 2.0).abs())
                .fold(0.0, f64::max);
            assert!(drift < 25.0, "seed {seed}: mean drifted by {drift}");
            assert!(
                es.sigma() > 5e-3 && es.sigma() < 50.0,
                "seed {seed}: sigma {}",
                es.sigma()
            );
        }
    }

    #[test]
    fn non_finite_objective_is_an_error() {
        let mut rng = rng_from_seed(5);
        let r = cma_es_minimize(|_| f64::NAN, vec![0.0; 2], 0.5, 4, 3, &mut rng);
        assert_eq!(r, Err(Error::NonFinite("objective value")));
    }

    #[test]
    fn rejects_tiny_population() {
        assert!(CmaEs::new(vec![0.0; 3], 0.5, 1).is_err());
    }
}
