//! Independent dense-matrix reference for the density-matrix backend.

#![allow(clippy::needless_range_loop)]

use genbench_core::noise::NoiseModel;
use genbench_core::sim::{dm_simulate, Circuit, GateKind};
use genbench_core::C64;

pub type Dense = Vec<Vec<C64>>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn zeros(d: usize) -> Dense {
    vec![vec![c(0.0, 0.0); d]; d]
}

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let d = a.len();
    let mut out = zeros(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn dagger(a: &Dense) -> Dense {
    let d = a.len();
    (0..d)
        .map(|i| (0..d).map(|j| a[j][i].conj()).collect())
        .collect()
}

/// Embeds a k-qubit local matrix acting on `qubits` (local bit j = qubit
/// `qubits[j]`) into the full 2ⁿ space.
fn embed(local: &[Vec<C64>], qubits: &[usize], n: usize) -> Dense {
    let d = 1 << n;
    let mask: usize = qubits.iter().map(|q| 1 << q).sum();
    let local_index = |i: usize| {
        qubits
            .iter()
            .enumerate()
            .map(|(j, &q)| ((i >> q) & 1) << j)
            .sum::<usize>()
    };
    let mut out = zeros(d);
    for r in 0..d {
        for col in 0..d {
            if r & !mask == col & !mask {
                out[r][col] = local[local_index(r)][local_index(col)];
            }
        }
    }
    out
}

fn paulis() -> [Dense; 4] {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        vec![vec![l, o], vec![o, l]],
        vec![vec![o, l], vec![l, o]],
        vec![vec![o, -i], vec![i, o]],
        vec![vec![l, o], vec![o, -l]],
    ]
}

fn kron(a: &Dense, b: &Dense) -> Dense {
    // a acts on local bit 1, b on local bit 0
    let (da, db) = (a.len(), b.len());
    let mut out = zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out[k + db * i][l + db * j] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn gate_matrix(kind: GateKind, angle: f64) -> Dense {
    let (co, si) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match kind {
        GateKind::H => vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]],
        GateKind::Sx => vec![
            vec![c(0.5, 0.5), c(0.5, -0.5)],
            vec![c(0.5, -0.5), c(0.5, 0.5)],
        ],
        GateKind::Rz => vec![vec![c(co, -si), o], vec![o, c(co, si)]],
        GateKind::Rx => vec![vec![c(co, 0.0), c(0.0, -si)], vec![c(0.0, -si), c(co, 0.0)]],
        GateKind::Cx => {
            // local bit 0 = control, bit 1 = target
            let mut m = zeros(4);
            for b in 0..4usize {
                let out = if b & 1 == 1 { b ^ 2 } else { b };
                m[out][b] = l;
            }
            m
        }
        GateKind::Rxx => {
            let x = &paulis()[1];
            let xx = kron(x, x);
            let mut m = zeros(4);
            for i in 0..4 {
                for j in 0..4 {
                    m[i][j] = xx[i][j] * c(0.0, -si);
                }
                m[i][i] += c(co, 0.0);
            }
            m
        }
    }
}

fn kraus_sum(rho: &Dense, ops: &[(f64, Dense)]) -> Dense {
    let d = rho.len();
    let mut out = zeros(d);
    for (w, k) in ops {
        let term = matmul(&matmul(k, rho), &dagger(k));
        for i in 0..d {
            for j in 0..d {
                out[i][j] += term[i][j] * *w;
            }
        }
    }
    out
}

/// ρ evolved gate by gate with every channel written as an explicit Kraus
/// sum; two-qubit depolarizing uses the 16 Pauli products.
pub fn oracle(circuit: &Circuit, params: &[f64], noise: &NoiseModel) -> Dense {
    let n = circuit.n_qubits();
    let mut rho = zeros(1 << n);
    rho[0][0] = c(1.0, 0.0);
    let p = paulis();
    for gate in circuit.gates() {
        let angle = gate.param_slot.map_or(0.0, |s| params[s]);
        let u = embed(&gate_matrix(gate.kind, angle), gate.qubits(), n);
        rho = matmul(&matmul(&u, &rho), &dagger(&u));
        let qs = gate.qubits();
        if qs.len() == 2 && noise.p_depol_2q > 0.0 {
            let mut ops = vec![(1.0 - noise.p_depol_2q, embed(&p[0], &qs[..1], n))];
            for a in &p {
                for b in &p {
                    ops.push((noise.p_depol_2q / 16.0, embed(&kron(b, a), qs, n)));
                }
            }
            rho = kraus_sum(&rho, &ops);
        }
        if qs.len() == 1 && noise.p_depol_1q > 0.0 {
            let mut ops = vec![(1.0 - noise.p_depol_1q, embed(&p[0], qs, n))];
            ops.extend(p.iter().map(|a| (noise.p_depol_1q / 4.0, embed(a, qs, n))));
            rho = kraus_sum(&rho, &ops);
        }
        for &q in qs {
            let o = c(0.0, 0.0);
            let l = c(1.0, 0.0);
            let g = noise.amp_damping;
            if g > 0.0 {
                let k0 = vec![vec![l, o], vec![o, c((1.0 - g).sqrt(), 0.0)]];
                let k1 = vec![vec![o, c(g.sqrt(), 0.0)], vec![o, o]];
                rho = kraus_sum(
                    &rho,
                    &[(1.0, embed(&k0, &[q], n)), (1.0, embed(&k1, &[q], n))],
                );
            }
            let g = noise.phase_damping;
            if g > 0.0 {
                let k0 = vec![vec![l, o], vec![o, c((1.0 - g).sqrt(), 0.0)]];
                let k1 = vec![vec![o, o], vec![o, c(g.sqrt(), 0.0)]];
                rho = kraus_sum(
                    &rho,
                    &[(1.0, embed(&k0, &[q], n)), (1.0, embed(&k1, &[q], n))],
                );
            }
        }
    }
    rho
}

pub fn max_oracle_error(circuit: &Circuit, params: &[f64], noise: &NoiseModel) -> f64 {
    let rho = dm_simulate(circuit, params, noise).unwrap();
    let want = oracle(circuit, params, noise);
    let d = 1 << circuit.n_qubits();
    let mut worst = 0.0f64;
    for r in 0..d {
        for col in 0..d {
            worst = worst.max((rho.get(r, col) - want[r][col]).norm());
        }
    }
    worst
}
