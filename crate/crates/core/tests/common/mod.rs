#![allow(dead_code)]

pub mod oracle;

use genbench_core::sim::{Circuit, GateOp};
use rand::Rng;

/// Random circuit over the full gate set with one fresh slot per rotation.
pub fn random_circuit(n: usize, n_gates: usize, rng: &mut impl Rng) -> (Circuit, Vec<f64>) {
    let mut c = Circuit::new(n);
    for _ in 0..n_gates {
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n.max(2))) % n;
        let slot = c.n_params();
        let two_qubit = n > 1 && rng.random_bool(0.4);
        let gate = match (two_qubit, rng.random_range(0..3)) {
            (true, 0) => GateOp::cx(a, b),
            (true, _) => GateOp::rxx(a, b, slot),
            (false, 0) => GateOp::h(a),
            (false, 1) => GateOp::sx(a),
            (false, _) if rng.random_bool(0.5) => GateOp::rz(a, slot),
            (false, _) => GateOp::rx(a, slot),
        };
        c.push(gate).unwrap();
    }
    let params = (0..c.n_params())
        .map(|_| rng.random_range(-3.2..3.2))
        .collect();
    (c, params)
}
