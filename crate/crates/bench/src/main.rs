use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use genbench::config::{parse_config, BenchmarkConfig, Mode};
use genbench::harness::{
    build_target, export_figure_data, gatecount_table, run_benchmark, write_aggregate, Figure,
    RunOptions,
};
use genbench::record::{histogram_csv, read_params, read_record, read_records, write_atomic};
use genbench::{BenchError, Result, OUT_DIR_ENV};
use genbench_core::analysis::fit_stretched_exponential;
use genbench_core::ansatz::{build_copula, CopulaSpec};
use genbench_core::data::kl_divergence;
use genbench_core::rng::rng_from_seed;
use genbench_core::trainers::run_inference;

#[derive(Parser)]
#[command(
    name = "genbench",
    version,
    about = "Benchmark quantum generative models on simulated hardware"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureArg {
    Convergence,
    #[value(name = "noise_sweep")]
    NoiseSweep,
}

#[derive(Subcommand)]
enum Command {
    /// Run every sweep point and repetition of a config.
    Run {
        config: PathBuf,
        /// Output directory.
        #[arg(long, env = OUT_DIR_ENV, default_value = "results")]
        out: PathBuf,
        /// Worker threads (default: available cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Overrides `application.master_seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print one- and two-qubit gate totals of the copula circuit.
    Gatecount {
        /// Register width(s); repeat or comma-separate.
        #[arg(long = "n", required = true, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Rebuild aggregate.csv from the run records in a directory.
    Aggregate { dir: PathBuf },
    /// Fit the stretched exponential to a run record's kl_exact column.
    Fit { record: PathBuf },
    /// Write the table behind a figure from the records in a directory.
    Export {
        #[arg(long, value_enum)]
        figure: FigureArg,
        dir: PathBuf,
        /// Output file (default: <DIR>/<figure>.csv).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a trained model; prints `index,count` CSV.
    Infer {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        shots: u64,
        /// Sampling seed (default: `application.master_seed`).
        #[arg(long)]
        seed: Option<u64>,
        /// Write the histogram here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(path: &Path) -> Result<BenchmarkConfig> {
    let text = fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config(&text, &path.display().to_string(), base)
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run {
            config,
            out,
            workers,
            seed,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            let workers = workers
                .or_else(|| std::thread::available_parallelism().ok().map(usize::from))
                .unwrap_or(1);
            if workers == 0 {
                return Err(BenchError::Config("--workers must be at least 1".into()));
            }
            let records = run_benchmark(
                &cfg,
                &RunOptions {
                    out_dir: out.clone(),
                    workers,
                },
            )?;
            if cfg.mode == Mode::GateCount {
                print!(
                    "{}",
                    fs::read_to_string(out.join(genbench::harness::GATECOUNT_FILE))
                        .unwrap_or_default()
                );
            }
            for r in &records {
                let last = r.trace.last().map_or(f64::NAN, |row| row.kl_exact);
                let c_conv = r
                    .fit
                    .map_or_else(|| "-".to_string(), |f| format!("{:.4}", f.c_conv));
                println!(
                    "{} {} n={} final_kl={last:.4} c_conv={c_conv} baseline={:.4}",
                    r.run_id, r.method, r.n_qubits, r.random_baseline
                );
            }
            eprintln!("results in {}", out.display());
        }
        Command::Gatecount { n, depth } => {
            let specs = n
                .iter()
                .map(|&k| CopulaSpec::new(k, depth))
                .collect::<genbench_core::Result<Vec<_>>>()?;
            print!("{}", gatecount_table(&specs)?);
        }
        Command::Aggregate { dir } => {
            let path = write_aggregate(&dir)?;
            print!(
                "{}",
                fs::read_to_string(&path).map_err(|source| BenchError::Io { path, source })?
            );
        }
        Command::Fit { record } => {
            let r = read_record(&record)?;
            let f = fit_stretched_exponential(&r.trace.executions(), &r.trace.kl_exact())?;
            println!("alpha = {}", f.alpha);
            println!("beta = {}", f.beta);
            println!("gamma = {}", f.gamma);
            println!("c_conv = {}", f.c_conv);
            println!("residual_rms = {}", f.residual_rms);
        }
        Command::Export { figure, dir, out } => {
            let figure = match figure {
                FigureArg::Convergence => Figure::Convergence,
                FigureArg::NoiseSweep => Figure::NoiseSweep,
            };
            let table = export_figure_data(&read_records(&dir)?, figure)?;
            let path = out.unwrap_or_else(|| dir.join(format!("{}.csv", figure.name())));
            write_atomic(&path, table.as_bytes())?;
            println!("{}", path.display());
        }
        Command::Infer {
            params,
            config,
            shots,
            seed,
            out,
        } => {
            let cfg = load_config(&config)?;
            if cfg.points.len() != 1 {
                return Err(BenchError::Config(format!(
                    "{} describes {} sweep points; inference needs exactly one",
                    config.display(),
                    cfg.points.len()
                )));
            }
            let point = &cfg.points[0];
            let circuit = build_copula(&point.circuit)?;
            let theta = read_params(&params)?;
            circuit.check_params(&theta)?;
            let (target, _) = build_target(point)?;
            let mut rng = rng_from_seed(seed.unwrap_or(cfg.master_seed));
            let hist = run_inference(&circuit, &theta, shots, &point.device, &mut rng)?;
            let kl = kl_divergence(&target.pmf, &hist.to_pmf(), point.kl_floor)?;
            eprintln!("kl_estimated = {kl}");
            match out {
                Some(path) => write_atomic(&path, histogram_csv(&hist).as_bytes())?,
                None => print!("{}", histogram_csv(&hist)),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
