use crate::{Error, Result};

/// Native gate set of the copula ansatz.
///
/// Parameterized kinds follow the `exp(-i theta G / 2)` convention with
/// `G` in {Z, X, X⊗X}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    Rz,
    Rx,
    Sx,
    Cx,
    Rxx,
}

impl GateKind {
    pub const ALL: [GateKind; 6] = [
        GateKind::H,
        GateKind::Rz,
        GateKind::Rx,
        GateKind::Sx,
        GateKind::Cx,
        GateKind::Rxx,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::Rz => "rz",
            GateKind::Rx => "rx",
            GateKind::Sx => "sx",
            GateKind::Cx => "cx",
            GateKind::Rxx => "rxx",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(name))
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::H | GateKind::Rz | GateKind::Rx | GateKind::Sx => 1,
            GateKind::Cx | GateKind::Rxx => 2,
        }
    }

    pub fn is_parameterized(self) -> bool {
        matches!(self, GateKind::Rz | GateKind::Rx | GateKind::Rxx)
    }

    /// Whether the two-term parameter-shift rule with shifts of ±π/2 is exact.
    pub fn is_shiftable(self) -> bool {
        self.is_parameterized()
    }
}

impl core::fmt::Display for GateKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// One gate application. For `Cx`, `qubits[0]` is the control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateOp {
    pub kind: GateKind,
    qubits: [usize; 2],
    pub param_slot: Option<usize>,
}

impl GateOp {
    pub fn new(kind: GateKind, qubits: &[usize], param_slot: Option<usize>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::InvalidArgument(alloc::format!(
                "{kind} acts on {} qubits, got {}",
                kind.arity(),
                qubits.len()
            )));
        }
        if kind.is_parameterized() != param_slot.is_some() {
            return Err(Error::AngleMismatch {
                kind: kind.name(),
                expected: kind.is_parameterized(),
                got: param_slot.is_some(),
            });
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::RepeatedQubit(qubits[0]));
        }
        let q1 = if qubits.len() == 2 {
            qubits[1]
        } else {
            qubits[0]
        };
        Ok(Self {
            kind,
            qubits: [qubits[0], q1],
            param_slot,
        })
    }

    pub fn h(q: usize) -> Self {
        Self {
            kind: GateKind::H,
            qubits: [q, q],
            param_slot: None,
        }
    }

    pub fn sx(q: usize) -> Self {
        Self {
            kind: GateKind::Sx,
            qubits: [q, q],
            param_slot: None,
        }
    }

    pub fn rz(q: usize, slot: usize) -> Self {
        Self {
            kind: GateKind::Rz,
            qubits: [q, q],
            param_slot: Some(slot),
        }
    }

    pub fn rx(q: usize, slot: usize) -> Self {
        Self {
            kind: GateKind::Rx,
            qubits: [q, q],
            param_slot: Some(slot),
        }
    }

    /// Panics if `control == target`.
    pub fn cx(control: usize, target: usize) -> Self {
        assert_ne!(control, target, "cx needs two distinct qubits");
        Self {
            kind: GateKind::Cx,
            qubits: [control, target],
            param_slot: None,
        }
    }

    /// Panics if `a == b`.
    pub fn rxx(a: usize, b: usize, slot: usize) -> Self {
        assert_ne!(a, b, "rxx needs two distinct qubits");
        Self {
            kind: GateKind::Rxx,
            qubits: [a, b],
            param_slot: Some(slot),
        }
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }

    pub(crate) fn qubit_pair(&self) -> [usize; 2] {
        self.qubits
    }

    pub fn check_width(&self, n_qubits: usize) -> Result<()> {
        for &q in self.qubits() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
        }
        Ok(())
    }
}
