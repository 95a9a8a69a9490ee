//! Run records, parameter files and CSV exports.
//!
//! A run record is a header of `# key = value` lines followed by the column
//! line `epoch,cumulative_executions,kl_exact,kl_estimated,wall_ms` and one
//! row per epoch. Floats use the shortest decimal form that parses back to
//! the same bits.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use genbench_core::analysis::FitResult;
use genbench_core::data::ContinuousDataset;
use genbench_core::sim::{Pmf, ShotHistogram};
use genbench_core::trainers::{TraceRow, TrainingTrace};

use crate::error::{BenchError, Result};

pub const RECORD_MAGIC: &str = "# genbench run record v1";
pub const TRACE_COLUMNS: &str = "epoch,cumulative_executions,kl_exact,kl_estimated,wall_ms";
pub const RECORD_EXTENSION: &str = "record";

/// One repetition of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_id: String,
    pub point: usize,
    pub repetition: usize,
    pub config_hash: String,
    pub seed: u64,
    pub software_version: String,
    pub kl_floor: f64,
    pub loss_variant: String,
    pub method: String,
    pub n_qubits: usize,
    pub n_params: usize,
    pub backend: String,
    /// Shots per objective evaluation (QCBM, inference) or batch size (QGAN).
    pub n_shots: u64,
    pub sweep_key: Option<String>,
    pub sweep_value: Option<String>,
    pub random_baseline: f64,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    /// Fit of `kl_exact` against cumulative executions; absent for traces
    /// too short to fit.
    pub fit: Option<FitResult>,
    pub trace: TrainingTrace,
}

impl RunRecord {
    pub fn file_name(&self) -> String {
        format!("{}.{RECORD_EXTENSION}", self.run_id)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let opt = |o: &Option<String>| o.clone().unwrap_or_else(|| "none".into());
        let fit = match &self.fit {
            Some(f) => format!(
                "{},{},{},{},{}",
                f.alpha, f.beta, f.gamma, f.c_conv, f.residual_rms
            ),
            None => "none".into(),
        };
        let _ = writeln!(s, "{RECORD_MAGIC}");
        for (k, v) in [
            ("run_id", self.run_id.clone()),
            ("point", self.point.to_string()),
            ("repetition", self.repetition.to_string()),
            ("config_hash", self.config_hash.clone()),
            ("seed", self.seed.to_string()),
            ("software_version", self.software_version.clone()),
            ("kl_floor", self.kl_floor.to_string()),
            ("loss_variant", self.loss_variant.clone()),
            ("method", self.method.clone()),
            ("n_qubits", self.n_qubits.to_string()),
            ("n_params", self.n_params.to_string()),
            ("backend", self.backend.clone()),
            ("n_shots", self.n_shots.to_string()),
            ("sweep_key", opt(&self.sweep_key)),
            ("sweep_value", opt(&self.sweep_value)),
            ("random_baseline", self.random_baseline.to_string()),
            ("started_unix_ms", self.started_unix_ms.to_string()),
            ("finished_unix_ms", self.finished_unix_ms.to_string()),
            ("fit", fit),
        ] {
            let _ = writeln!(s, "# {k} = {v}");
        }
        let _ = writeln!(s, "{TRACE_COLUMNS}");
        for r in &self.trace.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                r.epoch, r.cumulative_executions, r.kl_exact, r.kl_estimated, r.wall_ms
            );
        }
        s
    }
}

fn parse_err(origin: &str, line: usize, message: impl Into<String>) -> BenchError {
    BenchError::Parse {
        path: origin.to_string(),
        line,
        message: message.into(),
    }
}

fn num<T: std::str::FromStr>(origin: &str, line: usize, field: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| parse_err(origin, line, format!("bad {field} `{v}`")))
}

pub fn parse_record(text: &str, origin: &str) -> Result<RunRecord> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l == RECORD_MAGIC => {}
        _ => return Err(parse_err(origin, 1, "not a run record")),
    }
    let mut header = std::collections::BTreeMap::new();
    let mut header_end = 1;
    for (i, line) in lines.by_ref() {
        if line == TRACE_COLUMNS {
            header_end = i + 1;
            break;
        }
        let body = line
            .strip_prefix("# ")
            .and_then(|b| b.split_once(" = "))
            .ok_or_else(|| parse_err(origin, i + 1, "expected `# key = value`"))?;
        header.insert(body.0.to_string(), (i + 1, body.1.to_string()));
    }
    if header_end == 1 {
        return Err(parse_err(origin, 1, "missing trace column line"));
    }
    let field = |k: &str| {
        header
            .get(k)
            .map(|(l, v)| (*l, v.as_str()))
            .ok_or_else(|| parse_err(origin, header_end, format!("missing header `{k}`")))
    };
    macro_rules! typed {
        ($k:expr) => {{
            let (l, v) = field($k)?;
            num(origin, l, $k, v)?
        }};
    }
    let optional = |k: &str| -> Result<Option<String>> {
        let (_, v) = field(k)?;
        Ok((v != "none").then(|| v.to_string()))
    };
    let fit = {
        let (l, v) = field("fit")?;
        if v == "none" {
            None
        } else {
            let parts: Vec<f64> = v
                .split(',')
                .map(|p| num(origin, l, "fit", p))
                .collect::<Result<_>>()?;
            if parts.len() != 5 {
                return Err(parse_err(origin, l, "fit needs 5 values"));
            }
            Some(FitResult {
                alpha: parts[0],
                beta: parts[1],
                gamma: parts[2],
                c_conv: parts[3],
                residual_rms: parts[4],
            })
        }
    };

    let mut trace = TrainingTrace::default();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(parse_err(origin, i + 1, "expected 5 columns"));
        }
        let row = TraceRow {
            epoch: num(origin, i + 1, "epoch", cols[0])?,
            cumulative_executions: num(origin, i + 1, "cumulative_executions", cols[1])?,
            kl_exact: num(origin, i + 1, "kl_exact", cols[2])?,
            kl_estimated: num(origin, i + 1, "kl_estimated", cols[3])?,
            wall_ms: num(origin, i + 1, "wall_ms", cols[4])?,
        };
        trace
            .push(row)
            .map_err(|e| parse_err(origin, i + 1, e.to_string()))?;
    }

    Ok(RunRecord {
        run_id: field("run_id")?.1.to_string(),
        point: typed!("point"),
        repetition: typed!("repetition"),
        config_hash: field("config_hash")?.1.to_string(),
        seed: typed!("seed"),
        software_version: field("software_version")?.1.to_string(),
        kl_floor: typed!("kl_floor"),
        loss_variant: field("loss_variant")?.1.to_string(),
        method: field("method")?.1.to_string(),
        n_qubits: typed!("n_qubits"),
        n_params: typed!("n_params"),
        backend: field("backend")?.1.to_string(),
        n_shots: typed!("n_shots"),
        sweep_key: optional("sweep_key")?,
        sweep_value: optional("sweep_value")?,
        random_baseline: typed!("random_baseline"),
        started_unix_ms: typed!("started_unix_ms"),
        finished_unix_ms: typed!("finished_unix_ms"),
        fit,
        trace,
    })
}

pub fn read_record(path: &Path) -> Result<RunRecord> {
    let text = fs::read_to_string(path).map_err(BenchError::io(path))?;
    parse_record(&text, &path.display().to_string())
}

/// Every `*.record` file in `dir`, sorted by run id.
/// Every `*.record` file under `dir`, subdirectories included, ordered by
/// run id and then path.
pub fn read_records(dir: &Path) -> Result<Vec<RunRecord>> {
    let mut found = Vec::new();
    collect_record_paths(dir, &mut found)?;
    let mut records = found
        .into_iter()
        .map(|p| read_record(&p).map(|r| (r, p)))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.0.run_id.cmp(&b.0.run_id).then_with(|| a.1.cmp(&b.1)));
    Ok(records.into_iter().map(|(r, _)| r).collect())
}

fn collect_record_paths(dir: &Path, out: &mut Vec<std::path::PathBuf>) -> Result<()> {
    for entry in fs::read_dir(dir).map_err(BenchError::io(dir))? {
        let path = entry.map_err(BenchError::io(dir))?.path();
        if path.is_dir() {
            collect_record_paths(&path, out)?;
        } else if path.extension().is_some_and(|e| e == RECORD_EXTENSION) {
            out.push(path);
        }
    }
    Ok(())
}

/// Writes `contents` to a hidden sibling and renames it over `path`, so the
/// destination is either absent, the old file, or complete.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| BenchError::Config(format!("{} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    let mut f = fs::File::create(&tmp).map_err(BenchError::io(&tmp))?;
    f.write_all(contents).map_err(BenchError::io(&tmp))?;
    f.sync_all().map_err(BenchError::io(&tmp))?;
    drop(f);
    fs::rename(&tmp, path).map_err(BenchError::io(path))
}

/// `n_params=<k>` followed by one value per line, 17 significant digits.
pub fn params_to_text(params: &[f64]) -> String {
    let mut s = format!("n_params={}\n", params.len());
    for p in params {
        let _ = writeln!(s, "{p:.16e}");
    }
    s
}

pub fn parse_params(text: &str, origin: &str) -> Result<Vec<f64>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let n: usize = match lines.next() {
        Some((i, l)) => {
            let v = l
                .trim()
                .strip_prefix("n_params=")
                .ok_or_else(|| parse_err(origin, i + 1, "expected `n_params=<k>` header"))?;
            num(origin, i + 1, "n_params", v.trim())?
        }
        None => return Err(parse_err(origin, 1, "empty parameter file")),
    };
    let values: Vec<f64> = lines
        .map(|(i, l)| {
            let v: f64 = num(origin, i + 1, "parameter", l.trim())?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(parse_err(origin, i + 1, "non-finite parameter"))
            }
        })
        .collect::<Result<_>>()?;
    if values.len() != n {
        return Err(parse_err(
            origin,
            1,
            format!("header declares {n} parameters, file has {}", values.len()),
        ));
    }
    Ok(values)
}

pub fn read_params(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(BenchError::io(path))?;
    parse_params(&text, &path.display().to_string())
}

pub fn pmf_csv(pmf: &Pmf) -> String {
    let mut s = String::from("index,probability\n");
    for (i, p) in pmf.probs().iter().enumerate() {
        let _ = writeln!(s, "{i},{p}");
    }
    s
}

pub fn histogram_csv(hist: &ShotHistogram) -> String {
    let mut s = String::from("index,count\n");
    for (i, c) in hist.counts().iter().enumerate() {
        let _ = writeln!(s, "{i},{c}");
    }
    s
}

pub fn dataset_csv(ds: &ContinuousDataset) -> String {
    let mut s = String::from("x0,x1\n");
    for [a, b] in &ds.points {
        let _ = writeln!(s, "{a},{b}");
    }
    s
}
