use alloc::vec::Vec;

use super::ContinuousDataset;
use crate::{Error, Result};

/// Marginal normalization applied before discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    MinMax,
    Pit,
}

impl TransformKind {
    pub fn name(self) -> &'static str {
        match self {
            TransformKind::MinMax => "minmax",
            TransformKind::Pit => "pit",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "minmax" => Some(TransformKind::MinMax),
            "pit" => Some(TransformKind::Pit),
            _ => None,
        }
    }

    pub fn apply(self, ds: &ContinuousDataset) -> Result<ContinuousDataset> {
        match self {
            TransformKind::MinMax => minmax_transform(ds),
            TransformKind::Pit => Ok(pit_transform(ds)),
        }
    }
}

/// Per dimension `x ↦ (x - min) / (max - min)`.
pub fn minmax_transform(ds: &ContinuousDataset) -> Result<ContinuousDataset> {
    let mut out = ds.clone();
    for dim in 0..2 {
        let (lo, hi) = ds
            .column(dim)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            });
        let range = hi - lo;
        if !(range > 0.0) || !range.is_finite() {
            return Err(Error::ZeroRange(dim));
        }
        for p in out.points.iter_mut() {
            // Pin the extremes so min ↦ 0 and max ↦ 1 exactly.
            p[dim] = if p[dim] == hi {
                1.0
            } else {
                (p[dim] - lo) / range
            };
        }
    }
    Ok(out)
}

/// Per dimension `x ↦ rank(x) / N` with ranks 1..=N; ties keep input order.
pub fn pit_transform(ds: &ContinuousDataset) -> ContinuousDataset {
    let n = ds.len();
    let mut out = ds.clone();
    let mut order: Vec<usize> = (0..n).collect();
    for dim in 0..2 {
        order.sort_by(|&a, &b| {
            ds.points[a][dim]
                .total_cmp(&ds.points[b][dim])
                .then(a.cmp(&b))
        });
        for (rank, &idx) in order.iter().enumerate() {
            out.points[idx][dim] = (rank + 1) as f64 / n as f64;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ds(col0: &[f64]) -> ContinuousDataset {
        ContinuousDataset::new(col0.iter().map(|&x| [x, -x]).collect(), 0)
    }

    #[test]
    fn minmax_column() {
        let out = minmax_transform(&ds(&[2.0, 4.0, 6.0])).unwrap();
        assert_eq!(out.column(0).collect::<Vec<_>>(), vec![0.0, 0.5, 1.0]);
        assert_eq!(out.column(1).collect::<Vec<_>>(), vec![1.0, 0.5, 0.0]);
    }

    #[test]
    fn minmax_unit_span_is_fixed_point() {
        let d = ContinuousDataset::new(vec![[0.0, 1.0], [0.25, 0.5], [1.0, 0.0]], 0);
        assert_eq!(minmax_transform(&d).unwrap(), d);
    }

    #[test]
    fn minmax_affine_invariance() {
        let d = crate::data::generate_x_dataset(200, 0.1, 5);
        let shifted = ContinuousDataset::new(
            d.points
                .iter()
                .map(|p| [3.0 * p[0] - 7.0, 0.5 * p[1] + 2.0])
                .collect(),
            0,
        );
        let a = minmax_transform(&d).unwrap();
        let b = minmax_transform(&shifted).unwrap();
        for (p, q) in a.points.iter().zip(&b.points) {
            assert!((p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn minmax_constant_column_rejected() {
        let d = ContinuousDataset::new(vec![[1.0, 0.0], [1.0, 1.0]], 0);
        assert_eq!(minmax_transform(&d), Err(Error::ZeroRange(0)));
    }

    #[test]
    fn pit_ranks() {
        let out = pit_transform(&ds(&[3.0, 1.0, 2.0]));
        let col: Vec<f64> = out.column(0).collect();
        assert_eq!(col, vec![1.0, 1.0 / 3.0, 2.0 / 3.0]);
    }

    #[test]
    fn pit_ties_follow_index_order() {
        let out = pit_transform(&ds(&[5.0, 5.0, 1.0]));
        let col: Vec<f64> = out.column(0).collect();
        assert_eq!(col, vec![2.0 / 3.0, 1.0, 1.0 / 3.0]);
    }

    #[test]
    fn pit_monotone_invariance_and_uniform_grid() {
        let d = crate::data::generate_x_dataset(500, 0.05, 8);
        let cubed = ContinuousDataset::new(
            d.points
                .iter()
                .map(|p| [p[0].powi(3), p[1].powi(3)])
                .collect(),
            0,
        );
        let a = pit_transform(&d);
        assert_eq!(a.points, pit_transform(&cubed).points);
        for dim in 0..2 {
            let mut col: Vec<f64> = a.column(dim).collect();
            col.sort_by(f64::total_cmp);
            for (k, v) in col.iter().enumerate() {
                assert_eq!(*v, (k + 1) as f64 / 500.0);
            }
        }
    }
}
