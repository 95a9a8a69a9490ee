use alloc::vec;
use alloc::vec::Vec;

use super::kernel;
use super::{Circuit, GateOp, Pmf, StateVector};
use crate::linalg::{symmetric_eigen, SquareMatrix};
use crate::noise::NoiseModel;
use crate::{Error, Result, C64};

/// 4ⁿ complex entries: 12 qubits already need 256 MiB.
pub const MAX_DENSITY_QUBITS: usize = 12;

/// Mixed state of `n_qubits` qubits.
///
/// Entry (r, c) lives at `r + (c << n)`: the row index occupies the low `n`
/// bits of a 2n-qubit vector and the column index the high `n` bits, so
/// U ρ U† is U on the low bits followed by U* on the high bits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    elems: Vec<C64>,
}

/// Calls `f` with every index whose bits at `positions` (ascending) are zero.
fn for_each_with_zero_bits(len: usize, positions: &[usize], mut f: impl FnMut(usize)) {
    let count = len >> positions.len();
    for k in 0..count {
        let mut i = k;
        for &pos in positions {
            let low = i & ((1usize << pos) - 1);
            i = ((i >> pos) << (pos + 1)) | low;
        }
        f(i);
    }
}

impl DensityMatrix {
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_DENSITY_QUBITS {
            return Err(Error::TooManyQubits {
                n_qubits,
                max: MAX_DENSITY_QUBITS,
                backend: "density_matrix",
            });
        }
        let mut elems = vec![C64::new(0.0, 0.0); 1 << (2 * n_qubits)];
        elems[0] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, elems })
    }

    /// |ψ⟩⟨ψ|.
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        let n = state.n_qubits();
        let mut rho = Self::zero_state(n)?;
        let amps = state.amplitudes();
        for (c, ac) in amps.iter().enumerate() {
            for (r, ar) in amps.iter().enumerate() {
                rho.elems[r + (c << n)] = ar * ac.conj();
            }
        }
        Ok(rho)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.elems[row + (col << self.n_qubits)]
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// Computational-basis populations, i.e. the noisy PMF before readout.
    pub fn diagonal(&self) -> Pmf {
        Pmf::from_weights_unchecked((0..self.dim()).map(|i| self.get(i, i).re).collect())
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in 0..=r {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue, via the real symmetric embedding [[A, -B], [B, A]]
    /// of ρ = A + iB. O(8ⁿ); meant for small instances.
    pub fn min_eigenvalue(&self) -> f64 {
        let d = self.dim();
        let mut m = SquareMatrix::zeros(2 * d);
        for r in 0..d {
            for c in 0..d {
                let z = self.get(r, c);
                m[(r, c)] = z.re;
                m[(r + d, c + d)] = z.re;
                m[(r, c + d)] = -z.im;
                m[(r + d, c)] = z.im;
            }
        }
        symmetric_eigen(&m)
            .values
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn apply_gate_unchecked(&mut self, gate: &GateOp, angle: f64) {
        let n = self.n_qubits;
        let [a, b] = gate.qubit_pair();
        kernel::apply_unitary(&mut self.elems, gate.kind, [a, b], angle, false);
        kernel::apply_unitary(&mut self.elems, gate.kind, [a + n, b + n], angle, true);
    }

    pub fn apply_gate(&mut self, gate: &GateOp, angle: Option<f64>) -> Result<()> {
        gate.check_width(self.n_qubits)?;
        if gate.kind.is_parameterized() != angle.is_some() {
            return Err(Error::AngleMismatch {
                kind: gate.kind.name(),
                expected: gate.kind.is_parameterized(),
                got: angle.is_some(),
            });
        }
        self.apply_gate_unchecked(gate, angle.unwrap_or(0.0));
        Ok(())
    }

    /// ρ → (1-p) ρ + p · Tr_ab(ρ) ⊗ I/4.
    pub fn depolarize_2q(&mut self, a: usize, b: usize, p: f64) {
        let n = self.n_qubits;
        let (ma, mb) = (1usize << a, 1usize << b);
        let rows = [0, ma, mb, ma | mb];
        let mut positions = [a, b, a + n, b + n];
        positions.sort_unstable();
        let elems = &mut self.elems;
        for_each_with_zero_bits(elems.len(), &positions, |base| {
            let trace: C64 = rows.iter().map(|&s| elems[base + s + (s << n)]).sum();
            for &s in &rows {
                for &t in &rows {
                    elems[base + s + (t << n)] *= 1.0 - p;
                }
                elems[base + s + (s << n)] += trace * (p / 4.0);
            }
        });
    }

    /// ρ → (1-p) ρ + p · Tr_q(ρ) ⊗ I/2.
    pub fn depolarize_1q(&mut self, q: usize, p: f64) {
        let n = self.n_qubits;
        let m = 1usize << q;
        let elems = &mut self.elems;
        for_each_with_zero_bits(elems.len(), &[q, q + n], |base| {
            let (i00, i01, i10, i11) = (base, base + (m << n), base + m, base + m + (m << n));
            let trace = elems[i00] + elems[i11];
            elems[i00] = elems[i00] * (1.0 - p) + trace * (p / 2.0);
            elems[i11] = elems[i11] * (1.0 - p) + trace * (p / 2.0);
            elems[i01] *= 1.0 - p;
            elems[i10] *= 1.0 - p;
        });
    }

    /// Kraus pair K₀ = diag(1, √(1-γ)), K₁ = √γ |0⟩⟨1|.
    pub fn amplitude_damp(&mut self, q: usize, gamma: f64) {
        let n = self.n_qubits;
        let m = 1usize << q;
        let keep = libm::sqrt(1.0 - gamma);
        let elems = &mut self.elems;
        for_each_with_zero_bits(elems.len(), &[q, q + n], |base| {
            let (i00, i01, i10, i11) = (base, base + (m << n), base + m, base + m + (m << n));
            let moved = elems[i11] * gamma;
            elems[i00] += moved;
            elems[i11] -= moved;
            elems[i01] *= keep;
            elems[i10] *= keep;
        });
    }

    /// Kraus pair K₀ = diag(1, √(1-γ)), K₁ = √γ |1⟩⟨1|.
    pub fn phase_damp(&mut self, q: usize, gamma: f64) {
        let n = self.n_qubits;
        let m = 1usize << q;
        let keep = libm::sqrt(1.0 - gamma);
        let elems = &mut self.elems;
        for_each_with_zero_bits(elems.len(), &[q, q + n], |base| {
            elems[base + (m << n)] *= keep;
            elems[base + m] *= keep;
        });
    }

    /// Channels that follow `gate` under `noise`.
    pub(crate) fn apply_gate_noise(&mut self, gate: &GateOp, noise: &NoiseModel) {
        let qubits = gate.qubits();
        if qubits.len() == 2 && noise.p_depol_2q > 0.0 {
            self.depolarize_2q(qubits[0], qubits[1], noise.p_depol_2q);
        }
        if qubits.len() == 1 && noise.p_depol_1q > 0.0 {
            self.depolarize_1q(qubits[0], noise.p_depol_1q);
        }
        if noise.amp_damping > 0.0 {
            for &q in qubits {
                self.amplitude_damp(q, noise.amp_damping);
            }
        }
        if noise.phase_damping > 0.0 {
            for &q in qubits {
                self.phase_damp(q, noise.phase_damping);
            }
        }
    }
}

/// Evolves |0…0⟩⟨0…0| through `circuit`, inserting the channels of `noise`
/// after every gate. Readout error is not applied here.
pub fn dm_simulate(circuit: &Circuit, params: &[f64], noise: &NoiseModel) -> Result<DensityMatrix> {
    dm_simulate_with_override(circuit, params, noise, usize::MAX, 0.0)
}

/// [`dm_simulate`] with `offset` added to the angle of gate `gate_index`.
pub fn dm_simulate_with_override(
    circuit: &Circuit,
    params: &[f64],
    noise: &NoiseModel,
    gate_index: usize,
    offset: f64,
) -> Result<DensityMatrix> {
    circuit.check_params(params)?;
    noise.validate()?;
    let mut rho = DensityMatrix::zero_state(circuit.n_qubits())?;
    for (i, gate) in circuit.gates().iter().enumerate() {
        let mut angle = gate.param_slot.map_or(0.0, |s| params[s]);
        if i == gate_index {
            angle += offset;
        }
        rho.apply_gate_unchecked(gate, angle);
        rho.apply_gate_noise(gate, noise);
    }
    Ok(rho)
}
