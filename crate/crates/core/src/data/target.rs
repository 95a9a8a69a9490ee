use alloc::vec;

use super::{ContinuousDataset, TransformKind};
use crate::sim::Pmf;
use crate::{Error, Result};

/// Discrete training target over 2ⁿ bins.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetDistribution {
    pub pmf: Pmf,
    /// Bits per data dimension (n/2). Zero for bit-string datasets.
    pub bits_per_dim: usize,
    /// `None` for datasets defined directly on bit strings.
    pub transform: Option<TransformKind>,
}

impl TargetDistribution {
    pub fn n_qubits(&self) -> usize {
        self.pmf.n_qubits().expect("target has 2^n bins")
    }
}

/// Joint histogram on `2^(n/2)` equal-width bins per dimension.
///
/// Dimension 0 fills the low `n/2` index bits (register 0) and dimension 1
/// the high bits. A coordinate of exactly 1.0 lands in the top bin.
pub fn discretize(
    ds: &ContinuousDataset,
    n_qubits: usize,
    transform: TransformKind,
) -> Result<TargetDistribution> {
    if n_qubits < 2 || !n_qubits.is_multiple_of(2) {
        return Err(Error::OddWidth(n_qubits));
    }
    if ds.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot discretize an empty dataset".into(),
        ));
    }
    let bits = n_qubits / 2;
    let bins = 1usize << bits;
    let mut counts = vec![0.0f64; 1 << n_qubits];
    for (index, p) in ds.points.iter().enumerate() {
        let mut b = [0usize; 2];
        for dim in 0..2 {
            let x = p[dim];
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::CoordinateRange { index, value: x });
            }
            b[dim] = ((x * bins as f64) as usize).min(bins - 1);
        }
        counts[b[0] | (b[1] << bits)] += 1.0;
    }
    Ok(TargetDistribution {
        pmf: Pmf::from_weights(counts)?,
        bits_per_dim: bits,
        transform: Some(transform),
    })
}

/// Center of the 2-D bin addressed by PMF `index`.
pub fn bin_center(index: usize, bits_per_dim: usize) -> [f64; 2] {
    let bins = 1usize << bits_per_dim;
    let mask = bins - 1;
    let b0 = index & mask;
    let b1 = (index >> bits_per_dim) & mask;
    [
        (b0 as f64 + 0.5) / bins as f64,
        (b1 as f64 + 0.5) / bins as f64,
    ]
}

/// Uniform distribution over all `n`-bit strings of the given parity.
pub fn generate_parity_dataset(n_qubits: usize, parity: u32) -> Result<TargetDistribution> {
    if n_qubits == 0 || parity > 1 {
        return Err(Error::InvalidArgument(alloc::format!(
            "parity dataset needs n >= 1 and parity in {{0, 1}}, got n = {n_qubits}, parity = {parity}"
        )));
    }
    let weights = (0..1usize << n_qubits)
        .map(|i| {
            if i.count_ones() % 2 == parity {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    Ok(TargetDistribution {
        pmf: Pmf::from_weights(weights)?,
        bits_per_dim: n_qubits / 2,
        transform: None,
    })
}
