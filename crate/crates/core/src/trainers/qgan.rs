use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{
    for_each_shifted_pmf, initial_params, Clock, MlpDiscriminator, TraceRow, TrainingRun,
    TrainingTrace,
};
use crate::data::{bin_center, kl_divergence, TargetDistribution, KL_FLOOR};
use crate::optim::{Adam, AdamSettings};
use crate::rng::child_rng;
use crate::sim::{simulate, Circuit, ShotHistogram};
use crate::{Error, Result};

/// Per-sample generator objective, minimized over the circuit parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeneratorLoss {
    /// −ln D(x)
    #[default]
    NonSaturating,
    /// ln(1 − D(x))
    Minimax,
}

impl GeneratorLoss {
    pub fn name(self) -> &'static str {
        match self {
            Self::NonSaturating => "non_saturating",
            Self::Minimax => "minimax",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "non_saturating" => Some(Self::NonSaturating),
            "minimax" => Some(Self::Minimax),
            _ => None,
        }
    }

    pub fn eval(self, disc: &MlpDiscriminator, x: [f64; 2]) -> f64 {
        match self {
            Self::NonSaturating => disc.neg_log_output(x),
            Self::Minimax => disc.log_one_minus_output(x),
        }
    }
}

const STREAM_INIT: u64 = 1;
const STREAM_DISC_INIT: u64 = 2;
const STREAM_REAL: u64 = 3;
const STREAM_FAKE: u64 = 4;
const STREAM_SHIFT: u64 = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct QganConfig {
    /// Shots per circuit execution batch, also the real-sample batch size.
    pub batch_size: u64,
    pub lr_generator: f64,
    pub lr_discriminator: f64,
    pub adam: AdamSettings,
    pub disc_hidden: Vec<usize>,
    pub loss: GeneratorLoss,
    pub max_epochs: usize,
    pub seed: u64,
    pub kl_floor: f64,
}

impl Default for QganConfig {
    fn default() -> Self {
        Self {
            batch_size: 20,
            lr_generator: 1e-2,
            lr_discriminator: 1e-3,
            adam: AdamSettings::default(),
            disc_hidden: vec![32, 16],
            loss: GeneratorLoss::default(),
            max_epochs: 1000,
            seed: 0,
            kl_floor: KL_FLOOR,
        }
    }
}

impl QganConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::ZeroShots);
        }
        for (name, lr) in [
            ("lr_generator", self.lr_generator),
            ("lr_discriminator", self.lr_discriminator),
        ] {
            if !(lr > 0.0) || !lr.is_finite() {
                return Err(Error::InvalidArgument(alloc::format!(
                    "{name} must be positive, got {lr}"
                )));
            }
        }
        if self.disc_hidden.contains(&0) {
            return Err(Error::InvalidArgument("hidden layer of width 0".into()));
        }
        if !(self.kl_floor > 0.0) {
            return Err(Error::InvalidArgument("KL floor must be positive".into()));
        }
        Ok(())
    }
}

/// Circuit executions per epoch: one unshifted batch plus two shifted
/// batches per parameterized gate.
pub fn qgan_executions_per_epoch(circuit: &Circuit, batch_size: u64) -> u64 {
    let shifted = circuit
        .gates()
        .iter()
        .filter(|g| g.param_slot.is_some())
        .count() as u64;
    (2 * shifted + 1) * batch_size
}

fn mean_generator_loss(
    loss: GeneratorLoss,
    disc: &MlpDiscriminator,
    hist: &ShotHistogram,
    bits_per_dim: usize,
) -> f64 {
    let total: f64 = hist
        .counts()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| c as f64 * loss.eval(disc, bin_center(i, bits_per_dim)))
        .sum();
    total / hist.n_shots() as f64
}

/// Shot-based parameter-shift estimate of ∇θ E_{x~q_θ}[loss(x)], with each
/// shifted loss estimated from `batch_size` samples.
pub fn generator_gradient_estimate<R: Rng + ?Sized>(
    loss: GeneratorLoss,
    circuit: &Circuit,
    params: &[f64],
    disc: &MlpDiscriminator,
    bits_per_dim: usize,
    batch_size: u64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let mut grad = vec![0.0; circuit.n_params()];
    for_each_shifted_pmf(circuit, params, |_, slot, plus, minus| {
        let e_plus = mean_generator_loss(
            loss,
            disc,
            &plus.sample_shots(batch_size, rng)?,
            bits_per_dim,
        );
        let e_minus = mean_generator_loss(
            loss,
            disc,
            &minus.sample_shots(batch_size, rng)?,
            bits_per_dim,
        );
        grad[slot] += 0.5 * (e_plus - e_minus);
        Ok(())
    })?;
    Ok(grad)
}

/// Adversarial training of the circuit against an MLP discriminator on the
/// noise-free statevector backend, alternating one discriminator and one
/// generator step per epoch.
///
/// `kl_exact` is measured on the exact PMF after the epoch's generator
/// update; `kl_estimated` uses the epoch's batch of generator samples.
pub fn train_qgan(
    circuit: &Circuit,
    target: &TargetDistribution,
    cfg: &QganConfig,
    clock: &dyn Clock,
) -> Result<TrainingRun> {
    cfg.validate()?;
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
    let bits = target.bits_per_dim;
    let per_epoch = qgan_executions_per_epoch(circuit, cfg.batch_size);

    let start = clock.now_ms();
    let mut theta = initial_params(circuit.n_params(), &mut child_rng(cfg.seed, &[STREAM_INIT]));
    let mut disc = MlpDiscriminator::random(
        &cfg.disc_hidden,
        &mut child_rng(cfg.seed, &[STREAM_DISC_INIT]),
    );
    let mut disc_params = disc.params();
    let mut gen_adam = Adam::new(theta.len(), cfg.adam);
    let mut disc_adam = Adam::new(disc_params.len(), cfg.adam);
    let mut trace = TrainingTrace::default();

    let n = cfg.batch_size as usize;
    let mut batch = Vec::with_capacity(2 * n);
    let labels: Vec<f64> = core::iter::repeat_n(1.0, n)
        .chain(core::iter::repeat_n(0.0, n))
        .collect();

    for epoch in 0..cfg.max_epochs as u64 {
        let model = simulate(circuit, &theta)?.exact_pmf();
        let real = target.pmf.sample_shots(
            cfg.batch_size,
            &mut child_rng(cfg.seed, &[STREAM_REAL, epoch]),
        )?;
        let fake = model.sample_shots(
            cfg.batch_size,
            &mut child_rng(cfg.seed, &[STREAM_FAKE, epoch]),
        )?;

        batch.clear();
        batch.extend(real.outcomes().map(|i| bin_center(i, bits)));
        batch.extend(fake.outcomes().map(|i| bin_center(i, bits)));
        let (loss, grad) = disc.loss_and_grad(&batch, &labels)?;
        if !loss.is_finite() {
            return Err(Error::NonFinite("discriminator loss"));
        }
        disc_adam.step(&mut disc_params, &grad, cfg.lr_discriminator)?;
        disc.set_params(&disc_params)?;

        let mut shift_rng = child_rng(cfg.seed, &[STREAM_SHIFT, epoch]);
        let g = generator_gradient_estimate(
            cfg.loss,
            circuit,
            &theta,
            &disc,
            bits,
            cfg.batch_size,
            &mut shift_rng,
        )?;
        gen_adam.step(&mut theta, &g, cfg.lr_generator)?;

        let kl_exact = kl_divergence(
            &target.pmf,
            &simulate(circuit, &theta)?.exact_pmf(),
            cfg.kl_floor,
        )?;
        let kl_estimated = kl_divergence(&target.pmf, &fake.to_pmf(), cfg.kl_floor)?;
        trace.push(TraceRow {
            epoch: epoch + 1,
            cumulative_executions: (epoch + 1) * per_epoch,
            kl_exact,
            kl_estimated,
            wall_ms: clock.now_ms().saturating_sub(start),
        })?;
    }
    Ok(TrainingRun {
        trace,
        params: theta,
    })
}
