use alloc::vec::Vec;

use crate::{Error, Result};

/// Millisecond wall clock. The core crate has no time source of its own.
pub trait Clock: Sync {
    fn now_ms(&self) -> u64;
}

/// Reports 0 for every reading.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now_ms(&self) -> u64 {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub epoch: u64,
    pub cumulative_executions: u64,
    pub kl_exact: f64,
    pub kl_estimated: f64,
    pub wall_ms: u64,
}

/// Per-epoch training log.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainingTrace {
    pub rows: Vec<TraceRow>,
}

impl TrainingTrace {
    pub fn push(&mut self, row: TraceRow) -> Result<()> {
        if let Some(last) = self.rows.last() {
            if row.cumulative_executions <= last.cumulative_executions {
                return Err(Error::Misaligned(alloc::format!(
                    "executions {} after {}",
                    row.cumulative_executions,
                    last.cumulative_executions
                )));
            }
        }
        if !(row.kl_exact >= 0.0) || !(row.kl_estimated >= 0.0) {
            return Err(Error::NonFinite("KL divergence"));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn executions(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.cumulative_executions as f64)
            .collect()
    }

    pub fn kl_exact(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.kl_exact).collect()
    }

    pub fn kl_estimated(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.kl_estimated).collect()
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }
}

/// Result of a training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingRun {
    pub trace: TrainingTrace,
    /// Parameters to persist for inference.
    pub params: Vec<f64>,
}
