use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::rng::rng_from_seed;

/// Two-dimensional point cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousDataset {
    pub points: Vec<[f64; 2]>,
    pub seed: u64,
}

impl ContinuousDataset {
    pub fn new(points: Vec<[f64; 2]>, seed: u64) -> Self {
        Self { points, seed }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn column(&self, dim: usize) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(move |p| p[dim])
    }

    pub fn is_finite(&self) -> bool {
        self.points
            .iter()
            .all(|p| p[0].is_finite() && p[1].is_finite())
    }
}

/// Points scattered around the two diagonals of the unit square.
///
/// Each point draws `u ~ U[0, 1]`, picks `(u, u)` or `(u, 1 - u)` with a fair
/// coin, adds isotropic Gaussian jitter and clips back into `[0, 1]²`.
pub fn generate_x_dataset(n_points: usize, jitter_std: f64, seed: u64) -> ContinuousDataset {
    let mut rng = rng_from_seed(seed);
    let points = (0..n_points)
        .map(|_| {
            let u: f64 = rng.random();
            let y = if rng.random::<bool>() { u } else { 1.0 - u };
            let mut p = [u, y];
            if jitter_std > 0.0 {
                for c in p.iter_mut() {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    *c = (*c + jitter_std * z).clamp(0.0, 1.0);
                }
            }
            p
        })
        .collect();
    ContinuousDataset { points, seed }
}
