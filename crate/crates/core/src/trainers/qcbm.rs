use alloc::vec::Vec;

use super::{initial_params, Clock, Device, TraceRow, TrainingRun, TrainingTrace};
use crate::data::{kl_divergence, TargetDistribution, KL_FLOOR};
use crate::optim::CmaEs;
use crate::rng::{child_rng, SimRng};
use crate::sim::{Circuit, Pmf};
use crate::{Error, Result};

const STREAM_INIT: u64 = 1;
const STREAM_CMA: u64 = 2;
const STREAM_SHOTS: u64 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct QcbmConfig {
    /// CMA-ES population size λ.
    pub population: usize,
    /// Shots per objective evaluation.
    pub n_shots: u64,
    pub sigma0: f64,
    pub max_generations: usize,
    pub seed: u64,
    pub kl_floor: f64,
}

impl Default for QcbmConfig {
    fn default() -> Self {
        Self {
            population: 5,
            n_shots: 10_000,
            sigma0: 0.5,
            max_generations: 100,
            seed: 0,
            kl_floor: KL_FLOOR,
        }
    }
}

impl QcbmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::InvalidArgument(alloc::format!(
                "population {} < 2",
                self.population
            )));
        }
        if self.n_shots == 0 {
            return Err(Error::ZeroShots);
        }
        if !(self.sigma0 > 0.0) {
            return Err(Error::InvalidArgument("sigma0 must be positive".into()));
        }
        if !(self.kl_floor > 0.0) {
            return Err(Error::InvalidArgument("KL floor must be positive".into()));
        }
        Ok(())
    }

    /// Circuit executions per generation, λ · n_shots.
    pub fn executions_per_epoch(&self) -> u64 {
        self.population as u64 * self.n_shots
    }
}

struct Evaluation {
    kl_estimated: f64,
    exact: Option<Pmf>,
}

fn evaluate(
    circuit: &Circuit,
    target: &TargetDistribution,
    cfg: &QcbmConfig,
    device: &Device,
    params: &[f64],
    mut rng: SimRng,
) -> Result<Evaluation> {
    let (hist, exact) = match device.exact_pmf(circuit, params)? {
        Some(pmf) => (pmf.sample_shots(cfg.n_shots, &mut rng)?, Some(pmf)),
        None => (device.sample(circuit, params, cfg.n_shots, &mut rng)?, None),
    };
    let kl_estimated = kl_divergence(&target.pmf, &hist.to_pmf(), cfg.kl_floor)?;
    Ok(Evaluation {
        kl_estimated,
        exact,
    })
}

fn evaluate_population(
    circuit: &Circuit,
    target: &TargetDistribution,
    cfg: &QcbmConfig,
    device: &Device,
    generation: u64,
    candidates: &[Vec<f64>],
) -> Result<Vec<Evaluation>> {
    let run = |(member, x): (usize, &Vec<f64>)| {
        let rng = child_rng(cfg.seed, &[STREAM_SHOTS, generation, member as u64]);
        evaluate(circuit, target, cfg, device, x, rng)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        candidates.par_iter().enumerate().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        candidates.iter().enumerate().map(run).collect()
    }
}

/// Minimizes KL(target ‖ q̂_θ), with q̂ estimated from `n_shots` executions
/// on `device`, by CMA-ES. One trace row per generation.
///
/// `kl_estimated` is the generation's best objective value; `kl_exact`
/// scores the same candidate against the device's exact output
/// distribution (noise-free Born distribution on the trajectory backend).
pub fn train_qcbm(
    circuit: &Circuit,
    target: &TargetDistribution,
    cfg: &QcbmConfig,
    device: &Device,
    clock: &dyn Clock,
) -> Result<TrainingRun> {
    cfg.validate()?;
    device.validate()?;
    if circuit.n_params() == 0 {
        return Err(Error::InvalidArgument(
            "circuit has no trainable parameters".into(),
        ));
    }
    if target.pmf.len() != 1 << circuit.n_qubits() {
        return Err(Error::LengthMismatch {
            left: target.pmf.len(),
            right: 1 << circuit.n_qubits(),
        });
    }

    let start = clock.now_ms();
    let x0 = initial_params(circuit.n_params(), &mut child_rng(cfg.seed, &[STREAM_INIT]));
    let mut es = CmaEs::new(x0.clone(), cfg.sigma0, cfg.population)?;
    let mut cma_rng = child_rng(cfg.seed, &[STREAM_CMA]);
    let mut trace = TrainingTrace::default();
    let mut best = (f64::INFINITY, x0);

    for generation in 0..cfg.max_generations as u64 {
        let candidates = es.ask(&mut cma_rng);
        let evals = evaluate_population(circuit, target, cfg, device, generation, &candidates)?;
        let fitness: Vec<f64> = evals.iter().map(|e| e.kl_estimated).collect();
        es.tell(&fitness)?;

        let (winner, eval) = evals
            .iter()
            .enumerate()
            .min_by(|a, b| {
                a.1.kl_estimated
                    .total_cmp(&b.1.kl_estimated)
                    .then(a.0.cmp(&b.0))
            })
            .expect("population >= 2");
        let reporting = match &eval.exact {
            Some(p) => p.clone(),
            None => device.reporting_pmf(circuit, &candidates[winner])?,
        };
        let kl_exact = kl_divergence(&target.pmf, &reporting, cfg.kl_floor)?;
        if eval.kl_estimated < best.0 {
            best = (eval.kl_estimated, candidates[winner].clone());
        }
        trace.push(TraceRow {
            epoch: generation + 1,
            cumulative_executions: (generation + 1) * cfg.executions_per_epoch(),
            kl_exact,
            kl_estimated: eval.kl_estimated,
            wall_ms: clock.now_ms().saturating_sub(start),
        })?;
    }
    Ok(TrainingRun {
        trace,
        params: best.1,
    })
}
