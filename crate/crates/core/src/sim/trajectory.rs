//! Monte-Carlo unraveling of the noise channels into pure-state trajectories.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::kernel::{self, apply_pauli};
use super::pmf::sample_from_cdf;
use super::{simulate, Circuit, GateOp, ShotHistogram, StateVector};
use crate::noise::NoiseModel;
use crate::{Error, Result};

/// Probability that qubit `q` reads 1.
fn excited_population(state: &StateVector, q: usize) -> f64 {
    let stride = 1usize << q;
    state
        .amplitudes()
        .chunks_exact(2 * stride)
        .flat_map(|chunk| chunk[stride..].iter())
        .map(|a| a.norm_sqr())
        .sum()
}

fn scale(state: &mut StateVector, factor: f64) {
    state.amplitudes_mut().iter_mut().for_each(|a| *a *= factor);
}

/// Samples one Kraus operator of the amplitude-damping channel.
fn amplitude_damp<R: Rng + ?Sized>(state: &mut StateVector, q: usize, gamma: f64, rng: &mut R) {
    let p1 = excited_population(state, q);
    let jump = gamma * p1;
    let stride = 1usize << q;
    if rng.random::<f64>() < jump {
        for chunk in state.amplitudes_mut().chunks_exact_mut(2 * stride) {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                *a = *b;
                *b = Default::default();
            }
        }
        scale(state, 1.0 / libm::sqrt(p1));
    } else {
        let keep = libm::sqrt(1.0 - gamma);
        kernel::apply_diag_1q(state.amplitudes_mut(), q, 1.0.into(), keep.into());
        scale(state, 1.0 / libm::sqrt(1.0 - jump));
    }
}

/// Samples one Kraus operator of the phase-damping channel.
fn phase_damp<R: Rng + ?Sized>(state: &mut StateVector, q: usize, gamma: f64, rng: &mut R) {
    let p1 = excited_population(state, q);
    let jump = gamma * p1;
    if rng.random::<f64>() < jump {
        kernel::apply_diag_1q(state.amplitudes_mut(), q, 0.0.into(), 1.0.into());
        scale(state, 1.0 / libm::sqrt(p1));
    } else {
        let keep = libm::sqrt(1.0 - gamma);
        kernel::apply_diag_1q(state.amplitudes_mut(), q, 1.0.into(), keep.into());
        scale(state, 1.0 / libm::sqrt(1.0 - jump));
    }
}

fn apply_noise<R: Rng + ?Sized>(
    state: &mut StateVector,
    gate: &GateOp,
    noise: &NoiseModel,
    rng: &mut R,
) {
    let qubits = gate.qubits();
    // Depolarizing: with probability p, a uniformly random Pauli string
    // (identity included) on the gate's qubits.
    if qubits.len() == 2 && noise.p_depol_2q > 0.0 && rng.random::<f64>() < noise.p_depol_2q {
        let k = rng.random_range(0..16usize);
        apply_pauli(state.amplitudes_mut(), qubits[0], k % 4, false);
        apply_pauli(state.amplitudes_mut(), qubits[1], k / 4, false);
    }
    if qubits.len() == 1 && noise.p_depol_1q > 0.0 && rng.random::<f64>() < noise.p_depol_1q {
        let k = rng.random_range(0..4usize);
        apply_pauli(state.amplitudes_mut(), qubits[0], k, false);
    }
    if noise.amp_damping > 0.0 {
        for &q in qubits {
            amplitude_damp(state, q, noise.amp_damping, rng);
        }
    }
    if noise.phase_damping > 0.0 {
        for &q in qubits {
            phase_damp(state, q, noise.phase_damping, rng);
        }
    }
}

fn flip_readout<R: Rng + ?Sized>(
    outcome: usize,
    n_qubits: usize,
    noise: &NoiseModel,
    rng: &mut R,
) -> usize {
    if !noise.has_readout() {
        return outcome;
    }
    let mut out = outcome;
    for q in 0..n_qubits {
        let bit = (outcome >> q) & 1;
        let p_flip = if bit == 0 { noise.p01 } else { noise.p10 };
        if rng.random::<f64>() < p_flip {
            out ^= 1 << q;
        }
    }
    out
}

fn measure<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p;
        cdf.push(acc);
    }
    sample_from_cdf(&cdf, probs, rng)
}

/// One stochastic trajectory ending in a (readout-corrupted) measurement.
pub fn trajectory_shot<R: Rng + ?Sized>(
    circuit: &Circuit,
    params: &[f64],
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<usize> {
    circuit.check_params(params)?;
    noise.validate()?;
    let mut state = StateVector::zero(circuit.n_qubits())?;
    for gate in circuit.gates() {
        let angle = gate.param_slot.map_or(0.0, |s| params[s]);
        state.apply_unchecked(gate, angle);
        apply_noise(&mut state, gate, noise, rng);
    }
    let probs: Vec<f64> = state.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let outcome = measure(&probs, rng);
    Ok(flip_readout(outcome, circuit.n_qubits(), noise, rng))
}

/// `n_shots` independent trajectories. Without state-level channels every
/// trajectory is the same pure state, so it is simulated once.
pub fn sample_trajectories<R: Rng + ?Sized>(
    circuit: &Circuit,
    params: &[f64],
    noise: &NoiseModel,
    n_shots: u64,
    rng: &mut R,
) -> Result<ShotHistogram> {
    if n_shots == 0 {
        return Err(Error::ZeroShots);
    }
    noise.validate()?;
    let n = circuit.n_qubits();
    let mut counts = vec![0u64; 1 << n];
    if noise.has_quantum_channels() {
        for _ in 0..n_shots {
            counts[trajectory_shot(circuit, params, noise, rng)?] += 1;
        }
    } else {
        let probs: Vec<f64> = simulate(circuit, params)?
            .amplitudes()
            .iter()
            .map(|a| a.norm_sqr())
            .collect();
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cdf.push(acc);
        }
        for _ in 0..n_shots {
            let outcome = sample_from_cdf(&cdf, &probs, rng);
            counts[flip_readout(outcome, n, noise, rng)] += 1;
        }
    }
    ShotHistogram::new(counts)
}
