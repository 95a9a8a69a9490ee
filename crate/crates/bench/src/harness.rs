//! Pipeline orchestration: dataset → transform → circuit → backend →
//! training → records.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use genbench_core::analysis::{aggregate, fit_stretched_exponential, mean_stderr, MIN_FIT_POINTS};
use genbench_core::ansatz::{build_copula, count_gates, CopulaSpec};
use genbench_core::data::{
    discretize, generate_parity_dataset, generate_x_dataset, kl_divergence, random_baseline,
    ContinuousDataset, TargetDistribution,
};
use genbench_core::rng::child_rng;
use genbench_core::sim::Circuit;
use genbench_core::trainers::{
    run_inference, train_qcbm, train_qgan, Clock, TraceRow, TrainingRun, TrainingTrace,
};
use rayon::prelude::*;

use crate::config::{BenchmarkConfig, DatasetSpec, Method, Mode, PointConfig};
use crate::error::{BenchError, Result};
use crate::record::{
    dataset_csv, histogram_csv, params_to_text, pmf_csv, read_params, write_atomic, RunRecord,
};

pub const SOFTWARE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const RESOLVED_FILE: &str = "resolved.cfg";
pub const GATECOUNT_FILE: &str = "gatecount.csv";
const INFERENCE_STREAM: u64 = 6;

/// Wall time since construction.
#[derive(Debug, Clone, Copy)]
pub struct WallClock(Instant);

impl WallClock {
    pub fn start() -> Self {
        WallClock(Instant::now())
    }
}

impl Clock for WallClock {
    fn now_ms(&self) -> u64 {
        self.0.elapsed().as_millis() as u64
    }
}

fn unix_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64)
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Worker threads for repetitions and sweep points.
    pub workers: usize,
}

/// A sweep point with everything derived from its config.
#[derive(Debug, Clone)]
pub struct PreparedPoint {
    pub config: PointConfig,
    pub circuit: Circuit,
    pub target: TargetDistribution,
    pub dataset: Option<ContinuousDataset>,
    pub random_baseline: f64,
    /// Stored parameters, for inference runs.
    pub params: Option<Vec<f64>>,
}

/// Dataset generation, transform and discretization for one point.
pub fn build_target(
    point: &PointConfig,
) -> Result<(TargetDistribution, Option<ContinuousDataset>)> {
    match point.dataset {
        DatasetSpec::X { size, jitter, seed } => {
            let raw = generate_x_dataset(size, jitter, seed);
            let transformed = point.transform.apply(&raw)?;
            let target = discretize(&transformed, point.n_qubits, point.transform)?;
            Ok((target, Some(transformed)))
        }
        DatasetSpec::Parity { parity } => {
            Ok((generate_parity_dataset(point.n_qubits, parity)?, None))
        }
    }
}

/// Builds circuits and targets and loads stored parameters. Failures here
/// are input errors.
pub fn prepare(cfg: &BenchmarkConfig) -> Result<Vec<PreparedPoint>> {
    cfg.points
        .iter()
        .map(|p| {
            let circuit = build_copula(&p.circuit)?;
            let (target, dataset) = build_target(p)?;
            let params = match &p.params_path {
                Some(path) if p.method == Method::Inference => {
                    let params = read_params(path)?;
                    circuit.check_params(&params)?;
                    Some(params)
                }
                _ => None,
            };
            Ok(PreparedPoint {
                random_baseline: random_baseline(&target.pmf),
                config: p.clone(),
                circuit,
                target,
                dataset,
                params,
            })
        })
        .collect()
}

pub fn run_id(point: usize, repetition: usize) -> String {
    format!("p{point:02}-r{repetition:03}")
}

fn inference_run(p: &PreparedPoint, seed: u64) -> genbench_core::Result<(TrainingRun, String)> {
    let params = p
        .params
        .clone()
        .expect("prepared inference point has parameters");
    let device = &p.config.device;
    let mut rng = child_rng(seed, &[INFERENCE_STREAM]);
    let hist = run_inference(&p.circuit, &params, p.config.n_shots, device, &mut rng)?;
    let exact = device.reporting_pmf(&p.circuit, &params)?;
    let mut trace = TrainingTrace::default();
    trace.push(TraceRow {
        epoch: 1,
        cumulative_executions: p.config.n_shots,
        kl_exact: kl_divergence(&p.target.pmf, &exact, p.config.kl_floor)?,
        kl_estimated: kl_divergence(&p.target.pmf, &hist.to_pmf(), p.config.kl_floor)?,
        wall_ms: 0,
    })?;
    Ok((TrainingRun { trace, params }, histogram_csv(&hist)))
}

/// Trains one repetition of one point. Returns the record, the parameters
/// to persist and, for inference, the sampled histogram as CSV.
pub fn run_job(
    p: &PreparedPoint,
    repetition: usize,
    master_seed: u64,
    sweep_key: Option<&str>,
) -> Result<(RunRecord, Vec<f64>, Option<String>)> {
    let cfg = &p.config;
    let seed = master_seed.wrapping_add(repetition as u64);
    let id = run_id(cfg.index, repetition);
    let runtime = |source| BenchError::Runtime {
        run_id: id.clone(),
        source,
    };
    let started = unix_ms();
    let clock = WallClock::start();
    let (run, histogram, loss_variant, n_shots) = match cfg.method {
        Method::Qcbm => {
            let qcbm = genbench_core::trainers::QcbmConfig {
                seed,
                ..cfg.qcbm.clone()
            };
            let run =
                train_qcbm(&p.circuit, &p.target, &qcbm, &cfg.device, &clock).map_err(runtime)?;
            (run, None, "kl_divergence", cfg.n_shots)
        }
        Method::Qgan => {
            let qgan = genbench_core::trainers::QganConfig {
                seed,
                ..cfg.qgan.clone()
            };
            let run = train_qgan(&p.circuit, &p.target, &qgan, &clock).map_err(runtime)?;
            (run, None, qgan.loss.name(), qgan.batch_size)
        }
        Method::Inference => {
            let (run, hist) = inference_run(p, seed).map_err(runtime)?;
            (run, Some(hist), "none", cfg.n_shots)
        }
    };
    let fit = if run.trace.rows.len() >= MIN_FIT_POINTS {
        Some(
            fit_stretched_exponential(&run.trace.executions(), &run.trace.kl_exact())
                .map_err(runtime)?,
        )
    } else {
        None
    };
    let record = RunRecord {
        run_id: id.clone(),
        point: cfg.index,
        repetition,
        config_hash: cfg.hash.clone(),
        seed,
        software_version: SOFTWARE_VERSION.to_string(),
        kl_floor: cfg.kl_floor,
        loss_variant: loss_variant.to_string(),
        method: cfg.method.name().to_string(),
        n_qubits: cfg.n_qubits,
        n_params: p.circuit.n_params(),
        backend: cfg.device.backend.name().to_string(),
        n_shots,
        sweep_key: sweep_key.map(str::to_string),
        sweep_value: cfg.sweep_value.clone(),
        random_baseline: p.random_baseline,
        started_unix_ms: started,
        finished_unix_ms: unix_ms(),
        fit,
        trace: run.trace,
    };
    Ok((record, run.params, histogram))
}

fn resolved_text(cfg: &BenchmarkConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# repetitions = {}, master_seed = {}",
        cfg.repetitions, cfg.master_seed
    );
    for p in &cfg.points {
        let sweep = match (&cfg.sweep, &p.sweep_value) {
            (Some(sw), Some(v)) => format!(", {} = {v}", sw.key),
            _ => String::new(),
        };
        let _ = writeln!(s, "\n# point {}{sweep}, hash {}", p.index, p.hash);
        s.push_str(&p.canonical_text());
    }
    s
}

/// Runs every (point, repetition) pair on `opts.workers` threads and
/// persists one record and one parameter file per run, plus the resolved
/// config, target PMFs and the aggregate. Records come back sorted by run
/// id.
///
/// In gate-count mode only `gatecount.csv` is written and no records are
/// produced.
pub fn run_benchmark(cfg: &BenchmarkConfig, opts: &RunOptions) -> Result<Vec<RunRecord>> {
    fs::create_dir_all(&opts.out_dir).map_err(BenchError::io(&opts.out_dir))?;
    let out = |name: &str| opts.out_dir.join(name);
    write_atomic(&out(RESOLVED_FILE), resolved_text(cfg).as_bytes())?;

    if cfg.mode == Mode::GateCount {
        let specs: Vec<CopulaSpec> = cfg.points.iter().map(|p| p.circuit).collect();
        write_atomic(&out(GATECOUNT_FILE), gatecount_table(&specs)?.as_bytes())?;
        return Ok(Vec::new());
    }

    let points = prepare(cfg)?;
    for p in &points {
        write_atomic(
            &out(&format!("target_p{:02}.csv", p.config.index)),
            pmf_csv(&p.target.pmf).as_bytes(),
        )?;
        if let (true, Some(ds)) = (p.config.export_dataset, &p.dataset) {
            write_atomic(
                &out(&format!("dataset_p{:02}.csv", p.config.index)),
                dataset_csv(ds).as_bytes(),
            )?;
        }
    }

    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| (0..cfg.repetitions).map(move |r| (i, r)))
        .collect();
    let sweep_key = cfg.sweep.as_ref().map(|s| s.key.as_str());
    let writer = Mutex::new(());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| BenchError::Config(format!("cannot start {} workers: {e}", opts.workers)))?;
    let results: Vec<Result<RunRecord>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, rep)| {
                let (record, params, histogram) =
                    run_job(&points[i], rep, cfg.master_seed, sweep_key)?;
                let _guard = writer.lock().unwrap_or_else(|e| e.into_inner());
                write_atomic(
                    &out(&format!("{}.params", record.run_id)),
                    params_to_text(&params).as_bytes(),
                )?;
                if let Some(h) = histogram {
                    write_atomic(&out(&format!("{}.counts.csv", record.run_id)), h.as_bytes())?;
                }
                write_atomic(&out(&record.file_name()), record.to_text().as_bytes())?;
                Ok(record)
            })
            .collect()
    });
    let mut records = results.into_iter().collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.run_id.cmp(&b.run_id));
    write_atomic(&out(AGGREGATE_FILE), aggregate_table(&records)?.as_bytes())?;
    Ok(records)
}

/// `n_qubits,depth,one_qubit,two_qubit,n_params` for each spec.
pub fn gatecount_table(specs: &[CopulaSpec]) -> Result<String> {
    let mut s = String::from("n_qubits,depth,one_qubit,two_qubit,n_params\n");
    for spec in specs {
        let c = build_copula(spec)?;
        let g = count_gates(&c);
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            spec.n_qubits,
            spec.depth,
            g.one_qubit,
            g.two_qubit,
            c.n_params()
        );
    }
    Ok(s)
}

/// Records grouped by config hash, in first-appearance order.
fn groups(records: &[RunRecord]) -> Vec<Vec<&RunRecord>> {
    let mut order: Vec<&str> = Vec::new();
    let mut by_hash: BTreeMap<&str, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        if !by_hash.contains_key(r.config_hash.as_str()) {
            order.push(&r.config_hash);
        }
        by_hash.entry(&r.config_hash).or_default().push(r);
    }
    order
        .into_iter()
        .map(|h| by_hash.remove(h).unwrap_or_default())
        .collect()
}

fn c_conv_values(group: &[&RunRecord]) -> Option<Vec<f64>> {
    group.iter().map(|r| r.fit.map(|f| f.c_conv)).collect()
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// One row per config: fitted asymptote and final `kl_exact`, each as mean
/// and standard error over repetitions. Blank asymptote columns mean some
/// record had too few epochs to fit.
pub fn aggregate_table(records: &[RunRecord]) -> Result<String> {
    let mut s = String::from(
        "point,config_hash,method,n_qubits,backend,n_shots,sweep_key,sweep_value,n_reps,\
mean_c_conv,stderr_c_conv,mean_final_kl,stderr_final_kl,random_baseline\n",
    );
    for g in groups(records) {
        let r0 = g[0];
        let (mc, sc) = match c_conv_values(&g) {
            Some(v) => {
                let (m, e) = mean_stderr(&v);
                (Some(m), Some(e))
            }
            None => (None, None),
        };
        let finals: Vec<f64> = g
            .iter()
            .map(|r| r.trace.last().map_or(f64::NAN, |row| row.kl_exact))
            .collect();
        let (mf, sf) = mean_stderr(&finals);
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r0.point,
            r0.config_hash,
            r0.method,
            r0.n_qubits,
            r0.backend,
            r0.n_shots,
            r0.sweep_key.as_deref().unwrap_or(""),
            r0.sweep_value.as_deref().unwrap_or(""),
            g.len(),
            fmt_opt(mc),
            fmt_opt(sc),
            mf,
            sf,
            r0.random_baseline
        );
    }
    Ok(s)
}

/// Rewrites `aggregate.csv` in `dir` from the record files alone.
pub fn write_aggregate(dir: &Path) -> Result<PathBuf> {
    let records = crate::record::read_records(dir)?;
    if records.is_empty() {
        return Err(BenchError::Incompatible(format!(
            "no run records in {}",
            dir.display()
        )));
    }
    let path = dir.join(AGGREGATE_FILE);
    write_atomic(&path, aggregate_table(&records)?.as_bytes())?;
    Ok(path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Convergence,
    NoiseSweep,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Convergence => "convergence",
            Figure::NoiseSweep => "noise_sweep",
        }
    }
}

const NOISE_SWEEP_KEYS: [&str; 7] = [
    "backend.readout",
    "backend.p01",
    "backend.p10",
    "backend.p_depol_2q",
    "backend.p_depol_1q",
    "backend.amp_damping",
    "backend.phase_damping",
];

/// (n_qubits, method, sweep key, error-rate bits)
type SweepKey = (usize, String, String, u64);
/// (error rate, C_KL^conv per repetition, random baseline)
type SweepCell = (f64, Vec<f64>, f64);

/// Table data behind the convergence and noise-sweep figures.
///
/// Convergence: per config, mean `kl_exact` and standard error at each
/// cumulative execution count. Noise sweep: per (n_qubits, method, swept
/// key), mean fitted asymptote and standard error at each error rate, with
/// the random baseline of the target.
pub fn export_figure_data(records: &[RunRecord], figure: Figure) -> Result<String> {
    if records.is_empty() {
        return Err(BenchError::Incompatible("no run records".into()));
    }
    let mut s = String::new();
    match figure {
        Figure::Convergence => {
            s.push_str("point,config_hash,method,n_qubits,n_shots,sweep_value,cumulative_executions,mean_kl,stderr,n_reps\n");
            for g in groups(records) {
                let traces: Vec<TrainingTrace> = g.iter().map(|r| r.trace.clone()).collect();
                let curve = aggregate(&traces).map_err(|e| {
                    BenchError::Incompatible(format!("config {}: {e}", g[0].config_hash))
                })?;
                let r0 = g[0];
                for i in 0..curve.x.len() {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{},{},{},{}",
                        r0.point,
                        r0.config_hash,
                        r0.method,
                        r0.n_qubits,
                        r0.n_shots,
                        r0.sweep_value.as_deref().unwrap_or(""),
                        curve.x[i],
                        curve.mean[i],
                        curve.stderr[i],
                        curve.n_reps
                    );
                }
            }
        }
        Figure::NoiseSweep => {
            s.push_str(
                "n_qubits,method,sweep_key,error_rate,n_reps,mean_c_conv,stderr,random_baseline\n",
            );
            let mut rows: BTreeMap<SweepKey, SweepCell> = BTreeMap::new();
            for r in records {
                let (Some(key), Some(value)) = (&r.sweep_key, &r.sweep_value) else {
                    return Err(BenchError::Incompatible(format!(
                        "{} is not part of a noise sweep",
                        r.run_id
                    )));
                };
                if !NOISE_SWEEP_KEYS.contains(&key.as_str()) {
                    return Err(BenchError::Incompatible(format!(
                        "{}: `{key}` is not a noise parameter",
                        r.run_id
                    )));
                }
                let rate: f64 = value.parse().map_err(|_| {
                    BenchError::Incompatible(format!("{}: error rate `{value}`", r.run_id))
                })?;
                let fit = r.fit.ok_or_else(|| {
                    BenchError::Incompatible(format!("{}: trace too short to fit", r.run_id))
                })?;
                let entry = rows
                    .entry((r.n_qubits, r.method.clone(), key.clone(), rate.to_bits()))
                    .or_insert((rate, Vec::new(), r.random_baseline));
                entry.1.push(fit.c_conv);
            }
            let mut ordered: Vec<_> = rows.into_iter().collect();
            ordered.sort_by(|a, b| {
                (a.0 .0, &a.0 .1, &a.0 .2)
                    .cmp(&(b.0 .0, &b.0 .1, &b.0 .2))
                    .then(a.1 .0.total_cmp(&b.1 .0))
            });
            for ((n, method, key, _), (rate, values, baseline)) in ordered {
                let (m, e) = mean_stderr(&values);
                let _ = writeln!(
                    s,
                    "{n},{method},{key},{rate},{},{m},{e},{baseline}",
                    values.len()
                );
            }
        }
    }
    Ok(s)
}
