//! Parameter-shift derivatives of the model PMF.
//!
//! For a gate exp(-iθG/2) with G² = I,
//! ∂q/∂θ = (q(θ + π/2) − q(θ − π/2)) / 2, exactly.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use super::{Backend, Device};
use crate::sim::{dm_simulate_with_override, simulate_with_override, Circuit, Pmf, StateVector};
use crate::{Error, Result};

fn shifted_pmf(
    device: &Device,
    circuit: &Circuit,
    params: &[f64],
    gate: usize,
    offset: f64,
) -> Result<Pmf> {
    let pmf = match device.backend {
        Backend::Statevector => simulate_with_override(circuit, params, gate, offset)?.exact_pmf(),
        Backend::DensityMatrix => {
            dm_simulate_with_override(circuit, params, &device.noise, gate, offset)?.diagonal()
        }
        Backend::Trajectory => {
            return Err(Error::IncompatibleBackend {
                backend: "trajectory",
                channel: "exact parameter-shift gradients",
            })
        }
    };
    device.apply_readout(&pmf)
}

/// ∂q/∂θⱼ on the device's exact output distribution. A slot read by several
/// gates sums the per-gate shift terms.
pub fn pmf_param_shift_grad(
    circuit: &Circuit,
    params: &[f64],
    j: usize,
    device: &Device,
) -> Result<Vec<f64>> {
    circuit.check_params(params)?;
    if j >= circuit.n_params() {
        return Err(Error::UnknownParameter {
            index: j,
            n_params: circuit.n_params(),
        });
    }
    let mut grad = alloc::vec![0.0; 1 << circuit.n_qubits()];
    for g in circuit.gates_using(j) {
        let kind = circuit.gates()[g].kind;
        if !kind.is_shiftable() {
            return Err(Error::NonShiftable(kind.name()));
        }
        let plus = shifted_pmf(device, circuit, params, g, FRAC_PI_2)?;
        let minus = shifted_pmf(device, circuit, params, g, -FRAC_PI_2)?;
        for ((d, p), m) in grad.iter_mut().zip(plus.probs()).zip(minus.probs()) {
            *d += 0.5 * (p - m);
        }
    }
    Ok(grad)
}

/// Calls `f(gate_index, slot, q₊, q₋)` for every parameterized gate, with the
/// noise-free PMFs of the circuit whose gate is shifted by ±π/2.
///
/// The state before each gate is carried forward, so only the suffix after
/// the shifted gate is re-simulated.
pub fn for_each_shifted_pmf<F>(circuit: &Circuit, params: &[f64], mut f: F) -> Result<()>
where
    F: FnMut(usize, usize, &Pmf, &Pmf) -> Result<()>,
{
    circuit.check_params(params)?;
    let gates = circuit.gates();
    let angle = |i: usize| gates[i].param_slot.map_or(0.0, |s| params[s]);
    let mut prefix = StateVector::zero(circuit.n_qubits())?;
    for (i, gate) in gates.iter().enumerate() {
        if let Some(slot) = gate.param_slot {
            let mut shifted = [Pmf::uniform(1), Pmf::uniform(1)];
            for (out, offset) in shifted.iter_mut().zip([FRAC_PI_2, -FRAC_PI_2]) {
                let mut state = prefix.clone();
                state.apply_unchecked(gate, angle(i) + offset);
                for (k, rest) in gates.iter().enumerate().skip(i + 1) {
                    state.apply_unchecked(rest, angle(k));
                }
                *out = state.exact_pmf();
            }
            f(i, slot, &shifted[0], &shifted[1])?;
        }
        prefix.apply_unchecked(gate, angle(i));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{build_copula, CopulaSpec};
    use crate::noise::NoiseModel;
    use crate::rng::rng_from_seed;
    use crate::sim::GateOp;
    use rand::Rng;

    #[test]
    fn gradient_entries_sum_to_zero() {
        let c = build_copula(&CopulaSpec::new(4, 1).unwrap()).unwrap();
        let mut rng = rng_from_seed(1);
        let params: Vec<f64> = (0..c.n_params())
            .map(|_| rng.random_range(-3.0..3.0))
            .collect();
        for j in 0..c.n_params() {
            let g = pmf_param_shift_grad(&c, &params, j, &Device::ideal()).unwrap();
            assert!(g.iter().sum::<f64>().abs() < 1e-10);
        }
    }

    #[test]
    fn single_rx_closed_form() {
        let c = Circuit::from_gates(1, [GateOp::rx(0, 0)]).unwrap();
        for theta in [0.0, 0.4, 1.3, -2.0] {
            let g = pmf_param_shift_grad(&c, &[theta], 0, &Device::ideal()).unwrap();
            // P(1) = sin²(θ/2) ⇒ dP(1)/dθ = sin(θ)/2
            assert!((g[1] - theta.sin() / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn cached_sweep_matches_per_parameter_gradient() {
        let c = build_copula(&CopulaSpec::new(4, 1).unwrap()).unwrap();
        let mut rng = rng_from_seed(2);
        let params: Vec<f64> = (0..c.n_params())
            .map(|_| rng.random_range(-3.0..3.0))
            .collect();
        let mut seen = 0;
        for_each_shifted_pmf(&c, &params, |_, slot, plus, minus| {
            let g = pmf_param_shift_grad(&c, &params, slot, &Device::ideal())?;
            for ((a, p), m) in g.iter().zip(plus.probs()).zip(minus.probs()) {
                assert!((a - 0.5 * (p - m)).abs() < 1e-13);
            }
            seen += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, c.n_params());
    }

    #[test]
    fn noisy_shift_rule_matches_finite_difference() {
        let c = build_copula(&CopulaSpec::new(2, 1).unwrap()).unwrap();
        let noise = NoiseModel {
            p_depol_2q: 0.2,
            p01: 0.05,
            p10: 0.05,
            amp_damping: 0.1,
            ..NoiseModel::default()
        };
        let device = Device::new(Backend::DensityMatrix, noise).unwrap();
        let params: Vec<f64> = (0..c.n_params()).map(|i| 0.3 * i as f64 - 0.7).collect();
        let h = 1e-6;
        for j in 0..c.n_params() {
            let g = pmf_param_shift_grad(&c, &params, j, &device).unwrap();
            let mut up = params.clone();
            let mut down = params.clone();
            up[j] += h;
            down[j] -= h;
            let qu = device.exact_pmf(&c, &up).unwrap().unwrap();
            let qd = device.exact_pmf(&c, &down).unwrap().unwrap();
            for (i, gi) in g.iter().enumerate() {
                let fd = (qu.probs()[i] - qd.probs()[i]) / (2.0 * h);
                assert!((gi - fd).abs() < 1e-8, "param {j} bin {i}: {gi} vs {fd}");
            }
        }
    }

    #[test]
    fn rejects_unknown_parameter_and_trajectories() {
        let c = Circuit::from_gates(1, [GateOp::rx(0, 0)]).unwrap();
        assert!(matches!(
            pmf_param_shift_grad(&c, &[0.0], 1, &Device::ideal()),
            Err(Error::UnknownParameter { .. })
        ));
        let traj = Device::new(Backend::Trajectory, NoiseModel::ideal()).unwrap();
        assert!(pmf_param_shift_grad(&c, &[0.0], 0, &traj).is_err());
    }
}
