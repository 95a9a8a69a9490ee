//! Noise configuration and the classical readout channel.

use alloc::string::String;
use alloc::vec::Vec;

use crate::sim::Pmf;
use crate::{Error, Result};

/// Channel strengths. Readout flips are classical; the rest act on the state
/// immediately after each gate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseModel {
    /// Prepared |0⟩ read as "1".
    pub p01: f64,
    /// Prepared |1⟩ read as "0".
    pub p10: f64,
    /// Two-qubit depolarizing probability after every two-qubit gate.
    pub p_depol_2q: f64,
    /// One-qubit depolarizing probability after every one-qubit gate.
    pub p_depol_1q: f64,
    pub amp_damping: f64,
    pub phase_damping: f64,
}

impl NoiseModel {
    pub fn ideal() -> Self {
        Self::default()
    }

    /// Symmetric readout error with p01 = p10 = `p`.
    pub fn readout(p: f64) -> Self {
        Self {
            p01: p,
            p10: p,
            ..Self::default()
        }
    }

    pub fn depolarizing_2q(p: f64) -> Self {
        Self {
            p_depol_2q: p,
            ..Self::default()
        }
    }

    pub fn fields(&self) -> [(&'static str, f64); 6] {
        [
            ("p01", self.p01),
            ("p10", self.p10),
            ("p_depol_2q", self.p_depol_2q),
            ("p_depol_1q", self.p_depol_1q),
            ("amp_damping", self.amp_damping),
            ("phase_damping", self.phase_damping),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.fields() {
            check_probability(name, value)?;
        }
        Ok(())
    }

    pub fn has_readout(&self) -> bool {
        self.p01 > 0.0 || self.p10 > 0.0
    }

    /// Any channel that acts on the quantum state (not just the readout).
    pub fn has_quantum_channels(&self) -> bool {
        self.p_depol_2q > 0.0
            || self.p_depol_1q > 0.0
            || self.amp_damping > 0.0
            || self.phase_damping > 0.0
    }

    pub fn is_ideal(&self) -> bool {
        !self.has_readout() && !self.has_quantum_channels()
    }
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ProbabilityRange { name, value })
    }
}

/// Static hardware snapshot: noise strengths plus the device's native gates
/// and connectivity. The coupling map is informational; circuits assume
/// all-to-all connectivity.
#[derive(Debug, Clone, PartialEq)]
pub struct BackendProfile {
    pub name: String,
    pub basis_gates: Vec<String>,
    pub noise: NoiseModel,
    pub coupling_map: Option<Vec<(usize, usize)>>,
}

impl BackendProfile {
    pub fn validate(&self) -> Result<()> {
        if self.basis_gates.is_empty() {
            return Err(Error::InvalidArgument(
                "profile lists no basis gates".into(),
            ));
        }
        self.noise.validate()
    }
}

/// Applies the per-qubit readout confusion matrix
/// `[[1-p01, p10], [p01, 1-p10]]` to every qubit of `pmf`.
pub fn confusion_matrix_pmf(pmf: &Pmf, p01: f64, p10: f64) -> Result<Pmf> {
    check_probability("p01", p01)?;
    check_probability("p10", p10)?;
    let n_qubits = pmf.n_qubits().ok_or_else(|| {
        Error::InvalidPmf(alloc::format!("{} bins is not a power of two", pmf.len()))
    })?;
    let mut probs = pmf.probs().to_vec();
    if p01 == 0.0 && p10 == 0.0 {
        return Ok(pmf.clone());
    }
    for q in 0..n_qubits {
        let stride = 1usize << q;
        for chunk in probs.chunks_exact_mut(2 * stride) {
            let (zeros, ones) = chunk.split_at_mut(stride);
            for (z, o) in zeros.iter_mut().zip(ones.iter_mut()) {
                let (p0, p1) = (*z, *o);
                *z = (1.0 - p01) * p0 + p10 * p1;
                *o = p01 * p0 + (1.0 - p10) * p1;
            }
        }
    }
    Ok(Pmf::from_weights_unchecked(probs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn zero_error_is_identity() {
        let p = Pmf::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(confusion_matrix_pmf(&p, 0.0, 0.0).unwrap(), p);
    }

    #[test]
    fn single_qubit_flip() {
        let p = Pmf::new(vec![1.0, 0.0]).unwrap();
        let out = confusion_matrix_pmf(&p, 0.1, 0.0).unwrap();
        assert!(close(out.probs(), &[0.9, 0.1], 1e-15));
    }

    #[test]
    fn certain_one_to_zero_flip() {
        let p = Pmf::one_hot(4, 3);
        let out = confusion_matrix_pmf(&p, 0.0, 1.0).unwrap();
        assert!(close(out.probs(), &[1.0, 0.0, 0.0, 0.0], 1e-15));
    }

    #[test]
    fn range_checked() {
        let p = Pmf::uniform(2);
        assert!(matches!(
            confusion_matrix_pmf(&p, 1.5, 0.0),
            Err(Error::ProbabilityRange { name: "p01", .. })
        ));
        let noise = NoiseModel {
            p_depol_2q: 1.5,
            ..NoiseModel::default()
        };
        assert!(noise.validate().is_err());
    }

    #[test]
    fn binary_symmetric_channels_compose() {
        let p = Pmf::from_weights(vec![0.3, 0.1, 0.05, 0.2, 0.15, 0.05, 0.1, 0.05]).unwrap();
        for (a, b) in [(0.1, 0.2), (0.03, 0.4), (0.5, 0.25)] {
            let twice =
                confusion_matrix_pmf(&confusion_matrix_pmf(&p, a, a).unwrap(), b, b).unwrap();
            let c = a + b - 2.0 * a * b;
            let once = confusion_matrix_pmf(&p, c, c).unwrap();
            assert!(close(twice.probs(), once.probs(), 1e-14));
        }
    }
}
