use alloc::vec::Vec;

use crate::trainers::TrainingTrace;
use crate::{Error, Result};

/// Pointwise mean and standard error over repetitions sharing an execution
/// grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCurve {
    pub x: Vec<u64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub n_reps: usize,
}

/// Mean and sample-std/√R of one sample. A single value has stderr 0.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let r = values.len() as f64;
    let mean = values.iter().sum::<f64>() / r;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r - 1.0);
    (mean, libm::sqrt(var / r))
}

/// Aggregates the `kl_exact` column of each trace.
pub fn aggregate(traces: &[TrainingTrace]) -> Result<AggregateCurve> {
    aggregate_by(traces, |t| t.kl_exact())
}

/// Aggregates the column selected by `column`.
pub fn aggregate_by<F>(traces: &[TrainingTrace], column: F) -> Result<AggregateCurve>
where
    F: Fn(&TrainingTrace) -> Vec<f64>,
{
    let first = traces
        .first()
        .ok_or_else(|| Error::InvalidArgument("no traces to aggregate".into()))?;
    let x: Vec<u64> = first.rows.iter().map(|r| r.cumulative_executions).collect();
    for (k, t) in traces.iter().enumerate() {
        if t.rows.len() != x.len()
            || t.rows
                .iter()
                .zip(&x)
                .any(|(r, &e)| r.cumulative_executions != e)
        {
            return Err(Error::Misaligned(alloc::format!(
                "trace {k} does not share the execution grid of trace 0"
            )));
        }
    }
    let columns: Vec<Vec<f64>> = traces.iter().map(column).collect();
    let mut mean = Vec::with_capacity(x.len());
    let mut stderr = Vec::with_capacity(x.len());
    let mut at = Vec::with_capacity(traces.len());
    for i in 0..x.len() {
        at.clear();
        at.extend(columns.iter().map(|c| c[i]));
        let (m, s) = mean_stderr(&at);
        mean.push(m);
        stderr.push(s);
    }
    Ok(AggregateCurve {
        x,
        mean,
        stderr,
        n_reps: traces.len(),
    })
}
