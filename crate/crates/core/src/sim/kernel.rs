//! In-place gate kernels on amplitude buffers.
//!
//! The density-matrix backend stores ρ as a vector over 2n "qubits" (row bits
//! low, column bits high) and reuses these kernels with conjugated matrices.

use super::GateKind;
use crate::C64;

pub(crate) type Mat2 = [[C64; 2]; 2];

const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

pub(crate) const HADAMARD: Mat2 = [
    [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
    [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
];
pub(crate) const SQRT_X: Mat2 = [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]];
pub(crate) const PAULI_X: Mat2 = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
pub(crate) const PAULI_Y: Mat2 = [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]];
pub(crate) const PAULI_Z: Mat2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];

fn conj2(m: &Mat2) -> Mat2 {
    [
        [m[0][0].conj(), m[0][1].conj()],
        [m[1][0].conj(), m[1][1].conj()],
    ]
}

#[inline]
fn insert_zero_bit(k: usize, pos: usize) -> usize {
    let low = k & ((1usize << pos) - 1);
    ((k >> pos) << (pos + 1)) | low
}

pub(crate) fn apply_1q(amps: &mut [C64], q: usize, m: &Mat2) {
    let stride = 1usize << q;
    for chunk in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = chunk.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = m[0][0] * x + m[0][1] * y;
            *b = m[1][0] * x + m[1][1] * y;
        }
    }
}

pub(crate) fn apply_diag_1q(amps: &mut [C64], q: usize, d0: C64, d1: C64) {
    let stride = 1usize << q;
    for chunk in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = chunk.split_at_mut(stride);
        lo.iter_mut().for_each(|a| *a *= d0);
        hi.iter_mut().for_each(|b| *b *= d1);
    }
}

/// Calls `f` with the four indices `(00, 10, 01, 11)` of every subspace spanned
/// by qubits `a` (low local bit) and `b` (high local bit).
#[inline]
pub(crate) fn for_each_quad(len: usize, a: usize, b: usize, mut f: impl FnMut([usize; 4])) {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let (ma, mb) = (1usize << a, 1usize << b);
    for k in 0..len / 4 {
        let i = insert_zero_bit(insert_zero_bit(k, lo), hi);
        f([i, i | ma, i | mb, i | ma | mb]);
    }
}

/// Single-qubit unitary of `kind` at `angle`.
pub(crate) fn matrix_1q(kind: GateKind, angle: f64) -> Mat2 {
    let (s, co) = libm::sincos(angle / 2.0);
    match kind {
        GateKind::H => HADAMARD,
        GateKind::Sx => SQRT_X,
        GateKind::Rx => [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]],
        GateKind::Rz => [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]],
        GateKind::Cx | GateKind::Rxx => unreachable!("two-qubit gate"),
    }
}

/// Applies `kind` (or its complex conjugate) at `angle` to qubits `q`.
pub(crate) fn apply_unitary(
    amps: &mut [C64],
    kind: GateKind,
    q: [usize; 2],
    angle: f64,
    conjugate: bool,
) {
    match kind {
        GateKind::Rz => {
            let angle = if conjugate { -angle } else { angle };
            let (s, co) = libm::sincos(angle / 2.0);
            apply_diag_1q(amps, q[0], c(co, -s), c(co, s));
        }
        GateKind::H | GateKind::Sx | GateKind::Rx => {
            let m = matrix_1q(kind, angle);
            let m = if conjugate { conj2(&m) } else { m };
            apply_1q(amps, q[0], &m);
        }
        GateKind::Cx => {
            for_each_quad(amps.len(), q[0], q[1], |[_, i10, _, i11]| {
                amps.swap(i10, i11)
            });
        }
        GateKind::Rxx => {
            let angle = if conjugate { -angle } else { angle };
            let (s, co) = libm::sincos(angle / 2.0);
            let mis = c(0.0, -s);
            for_each_quad(amps.len(), q[0], q[1], |[i00, i10, i01, i11]| {
                let (a00, a10, a01, a11) = (amps[i00], amps[i10], amps[i01], amps[i11]);
                amps[i00] = a00 * co + mis * a11;
                amps[i11] = a11 * co + mis * a00;
                amps[i10] = a10 * co + mis * a01;
                amps[i01] = a01 * co + mis * a10;
            });
        }
    }
}

/// Pauli by index 0..4 = I, X, Y, Z.
pub(crate) fn apply_pauli(amps: &mut [C64], q: usize, pauli: usize, conjugate: bool) {
    match pauli {
        0 => {}
        1 => apply_1q(amps, q, &PAULI_X),
        2 => {
            let m = if conjugate { conj2(&PAULI_Y) } else { PAULI_Y };
            apply_1q(amps, q, &m)
        }
        3 => apply_1q(amps, q, &PAULI_Z),
        _ => unreachable!("pauli index"),
    }
}
