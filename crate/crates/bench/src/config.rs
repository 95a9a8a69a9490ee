//! Benchmark configuration documents.
//!
//! A document is a list of `section.key = value` lines. `#` starts a comment
//! that runs to the end of the line, blank lines are ignored, and keys may
//! not repeat. [`KEYS`] lists every accepted key with its default; keys
//! without a default are optional unless noted. Relative paths resolve
//! against the directory holding the config file.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use genbench_core::ansatz::CopulaSpec;
use genbench_core::data::TransformKind;
use genbench_core::noise::NoiseModel;
use genbench_core::optim::AdamSettings;
use genbench_core::sim::{MAX_DENSITY_QUBITS, MAX_STATEVECTOR_QUBITS};
use genbench_core::trainers::{Backend, Device, GeneratorLoss, QcbmConfig, QganConfig};
use sha2::{Digest, Sha256};

use crate::error::{BenchError, Result};
use crate::profile::load_profile_file;

pub const SECTIONS: [&str; 6] = [
    "application",
    "dataset",
    "transform",
    "circuit",
    "backend",
    "training",
];

/// Every accepted key and its default. `application.n_qubits` is required.
pub const KEYS: &[(&str, Option<&str>)] = &[
    ("application.n_qubits", None),
    ("application.repetitions", Some("1")),
    ("application.master_seed", Some("0")),
    ("application.mode", Some("train")),
    ("application.sweep", None),
    ("application.sweep_values", None),
    ("dataset.kind", Some("x")),
    ("dataset.size", Some("100000")),
    ("dataset.jitter", Some("0.05")),
    ("dataset.seed", Some("0")),
    ("dataset.parity", Some("0")),
    ("dataset.export", Some("false")),
    ("transform.kind", Some("pit")),
    ("circuit.depth", Some("1")),
    ("backend.mode", Some("statevector")),
    ("backend.profile", None),
    ("backend.readout", None),
    ("backend.p01", None),
    ("backend.p10", None),
    ("backend.p_depol_2q", None),
    ("backend.p_depol_1q", None),
    ("backend.amp_damping", None),
    ("backend.phase_damping", None),
    ("backend.n_shots", Some("10000")),
    ("training.method", Some("qcbm")),
    ("training.population", Some("5")),
    ("training.sigma0", Some("0.5")),
    ("training.max_generations", Some("100")),
    ("training.batch_size", Some("20")),
    ("training.lr_generator", Some("0.01")),
    ("training.lr_discriminator", Some("0.001")),
    ("training.adam_beta1", Some("0.9")),
    ("training.adam_beta2", Some("0.999")),
    ("training.adam_eps", Some("1e-8")),
    ("training.disc_hidden", Some("32,16")),
    ("training.generator_loss", Some("non_saturating")),
    ("training.max_epochs", Some("1000")),
    ("training.kl_floor", Some("1e-8")),
    ("training.params", None),
];

/// Keys that describe the experiment rather than one run; they never enter
/// the config hash.
const ORCHESTRATION_KEYS: [&str; 5] = [
    "application.repetitions",
    "application.master_seed",
    "application.mode",
    "application.sweep",
    "application.sweep_values",
];

const NOISE_KEYS: [&str; 6] = [
    "backend.p01",
    "backend.p10",
    "backend.p_depol_2q",
    "backend.p_depol_1q",
    "backend.amp_damping",
    "backend.phase_damping",
];

/// One `key = value` line of a flat document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Splits a `key = value` document into entries, dropping comments and
/// blank lines. Duplicate keys are an error.
pub fn parse_entries(text: &str, origin: &str) -> Result<Vec<Entry>> {
    let mut out: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| BenchError::Parse {
            path: origin.to_string(),
            line,
            message,
        };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(err(format!("malformed key `{key}`")));
        }
        if value.is_empty() {
            return Err(err(format!("empty value for `{key}`")));
        }
        if let Some(prev) = out.iter().find(|e| e.key == key) {
            return Err(err(format!(
                "duplicate key `{key}` (first set on line {})",
                prev.line
            )));
        }
        out.push(Entry {
            line,
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Train,
    GateCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Qcbm,
    Qgan,
    Inference,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Qcbm => "qcbm",
            Method::Qgan => "qgan",
            Method::Inference => "inference",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "qcbm" => Some(Method::Qcbm),
            "qgan" => Some(Method::Qgan),
            "inference" => Some(Method::Inference),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSpec {
    X { size: usize, jitter: f64, seed: u64 },
    Parity { parity: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep {
    pub key: String,
    pub values: Vec<String>,
}

/// A fully resolved single-run configuration: one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfig {
    pub index: usize,
    pub sweep_value: Option<String>,
    pub n_qubits: usize,
    pub dataset: DatasetSpec,
    pub export_dataset: bool,
    pub transform: TransformKind,
    pub circuit: CopulaSpec,
    pub device: Device,
    pub profile_name: Option<String>,
    pub n_shots: u64,
    pub method: Method,
    /// Seed left at 0; the harness sets it per repetition.
    pub qcbm: QcbmConfig,
    pub qgan: QganConfig,
    pub kl_floor: f64,
    pub params_path: Option<PathBuf>,
    /// Resolved values of every semantic key, defaults included.
    pub canonical: BTreeMap<String, String>,
    /// Hex SHA-256 of the canonical `key=value` lines.
    pub hash: String,
}

impl PointConfig {
    /// The canonical document, one `key = value` per line in key order.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.canonical {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub mode: Mode,
    pub repetitions: usize,
    pub master_seed: u64,
    pub sweep: Option<Sweep>,
    pub points: Vec<PointConfig>,
}

fn invalid(key: &str, value: &str, what: &str) -> BenchError {
    BenchError::Config(format!("`{key} = {value}`: {what}"))
}

struct Values<'a> {
    map: &'a BTreeMap<String, String>,
}

impl Values<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    fn text(&self, key: &str) -> Result<&str> {
        self.raw(key)
            .or_else(|| KEYS.iter().find(|(k, _)| *k == key).and_then(|(_, d)| *d))
            .ok_or_else(|| BenchError::Config(format!("missing required key `{key}`")))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<T> {
        let v = self.text(key)?;
        v.parse().map_err(|_| invalid(key, v, what))
    }

    fn count(&self, key: &str) -> Result<usize> {
        self.parse(key, "expected a non-negative integer")
    }

    fn positive(&self, key: &str) -> Result<usize> {
        let n = self.count(key)?;
        if n == 0 {
            return Err(invalid(key, "0", "must be at least 1"));
        }
        Ok(n)
    }

    fn real(&self, key: &str) -> Result<f64> {
        let x: f64 = self.parse(key, "expected a number")?;
        if !x.is_finite() {
            return Err(invalid(key, self.text(key)?, "must be finite"));
        }
        Ok(x)
    }

    fn flag(&self, key: &str) -> Result<bool> {
        self.parse(key, "expected `true` or `false`")
    }
}

/// Parses, defaults and validates a config document. Relative paths are
/// resolved against `base_dir`.
pub fn parse_config(text: &str, origin: &str, base_dir: &Path) -> Result<BenchmarkConfig> {
    let mut map = BTreeMap::new();
    for e in parse_entries(text, origin)? {
        let Some((section, _)) = e.key.split_once('.') else {
            return Err(BenchError::Parse {
                path: origin.to_string(),
                line: e.line,
                message: format!("key `{}` has no section", e.key),
            });
        };
        if !SECTIONS.contains(&section) {
            return Err(BenchError::Parse {
                path: origin.to_string(),
                line: e.line,
                message: format!("unknown section `{section}`"),
            });
        }
        if !KEYS.iter().any(|(k, _)| *k == e.key) {
            return Err(BenchError::Parse {
                path: origin.to_string(),
                line: e.line,
                message: format!("unknown key `{}`", e.key),
            });
        }
        map.insert(e.key, e.value);
    }

    let top = Values { map: &map };
    let mode = match top.text("application.mode")? {
        "train" => Mode::Train,
        "gatecount" => Mode::GateCount,
        other => {
            return Err(invalid(
                "application.mode",
                other,
                "expected `train` or `gatecount`",
            ))
        }
    };
    let repetitions = top.positive("application.repetitions")?;
    let master_seed = top.parse(
        "application.master_seed",
        "expected an unsigned 64-bit integer",
    )?;

    let sweep = match (
        top.raw("application.sweep"),
        top.raw("application.sweep_values"),
    ) {
        (None, None) => None,
        (Some(key), Some(values)) => {
            if ORCHESTRATION_KEYS.contains(&key) || !KEYS.iter().any(|(k, _)| *k == key) {
                return Err(invalid("application.sweep", key, "not a sweepable key"));
            }
            let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
            if values.iter().any(String::is_empty) {
                return Err(invalid(
                    "application.sweep_values",
                    &values.join(","),
                    "empty entry",
                ));
            }
            Some(Sweep {
                key: key.to_string(),
                values,
            })
        }
        _ => {
            return Err(BenchError::Config(
                "`application.sweep` and `application.sweep_values` must be given together".into(),
            ))
        }
    };

    let points = match &sweep {
        None => vec![resolve_point(&map, 0, None, base_dir)?],
        Some(s) => s
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut m = map.clone();
                m.insert(s.key.clone(), v.clone());
                resolve_point(&m, i, Some(v.clone()), base_dir)
            })
            .collect::<Result<_>>()?,
    };

    Ok(BenchmarkConfig {
        mode,
        repetitions,
        master_seed,
        sweep,
        points,
    })
}

fn resolve_path(base_dir: &Path, p: &str) -> PathBuf {
    let path = Path::new(p);
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base_dir.join(path)
    }
}

fn resolve_point(
    map: &BTreeMap<String, String>,
    index: usize,
    sweep_value: Option<String>,
    base_dir: &Path,
) -> Result<PointConfig> {
    let v = Values { map };
    let n_qubits = v.positive("application.n_qubits")?;
    let depth = v.positive("circuit.depth")?;
    let circuit = CopulaSpec::new(n_qubits, depth)?;

    let dataset = match v.text("dataset.kind")? {
        "x" => {
            let jitter = v.real("dataset.jitter")?;
            if jitter < 0.0 {
                return Err(invalid(
                    "dataset.jitter",
                    v.text("dataset.jitter")?,
                    "must be non-negative",
                ));
            }
            DatasetSpec::X {
                size: v.positive("dataset.size")?,
                jitter,
                seed: v.parse("dataset.seed", "expected an unsigned 64-bit integer")?,
            }
        }
        "parity" => {
            let parity: u32 = v.parse("dataset.parity", "expected 0 or 1")?;
            if parity > 1 {
                return Err(invalid(
                    "dataset.parity",
                    v.text("dataset.parity")?,
                    "expected 0 or 1",
                ));
            }
            DatasetSpec::Parity { parity }
        }
        other => return Err(invalid("dataset.kind", other, "expected `x` or `parity`")),
    };
    let transform = TransformKind::from_name(v.text("transform.kind")?).ok_or_else(|| {
        invalid(
            "transform.kind",
            v.text("transform.kind").unwrap_or(""),
            "expected `pit` or `minmax`",
        )
    })?;

    let backend_name = v.text("backend.mode")?;
    let backend = Backend::from_name(backend_name).ok_or_else(|| {
        invalid(
            "backend.mode",
            backend_name,
            "expected `statevector`, `density_matrix` or `trajectory`",
        )
    })?;
    let (mut noise, profile_name) = match v.raw("backend.profile") {
        Some(p) => {
            let profile = load_profile_file(&resolve_path(base_dir, p))?;
            (profile.noise, Some(profile.name))
        }
        None => (NoiseModel::ideal(), None),
    };
    if v.raw("backend.readout").is_some() {
        if v.raw("backend.p01").is_some() || v.raw("backend.p10").is_some() {
            return Err(BenchError::Config(
                "`backend.readout` sets both p01 and p10; do not combine it with them".into(),
            ));
        }
        let p = v.real("backend.readout")?;
        noise.p01 = p;
        noise.p10 = p;
    }
    for key in NOISE_KEYS {
        if v.raw(key).is_some() {
            let x = v.real(key)?;
            match key {
                "backend.p01" => noise.p01 = x,
                "backend.p10" => noise.p10 = x,
                "backend.p_depol_2q" => noise.p_depol_2q = x,
                "backend.p_depol_1q" => noise.p_depol_1q = x,
                "backend.amp_damping" => noise.amp_damping = x,
                _ => noise.phase_damping = x,
            }
        }
    }
    let device = Device::new(backend, noise)?;
    let max = match backend {
        Backend::DensityMatrix => MAX_DENSITY_QUBITS,
        _ => MAX_STATEVECTOR_QUBITS,
    };
    if n_qubits > max {
        return Err(genbench_core::Error::TooManyQubits {
            n_qubits,
            max,
            backend: backend.name(),
        }
        .into());
    }
    let n_shots = v.positive("backend.n_shots")? as u64;

    let method_name = v.text("training.method")?;
    let method = Method::from_name(method_name).ok_or_else(|| {
        invalid(
            "training.method",
            method_name,
            "expected `qcbm`, `qgan` or `inference`",
        )
    })?;
    let kl_floor = v.real("training.kl_floor")?;
    if kl_floor <= 0.0 {
        return Err(invalid(
            "training.kl_floor",
            v.text("training.kl_floor")?,
            "must be positive",
        ));
    }
    let qcbm = QcbmConfig {
        population: v.count("training.population")?,
        n_shots,
        sigma0: v.real("training.sigma0")?,
        max_generations: v.positive("training.max_generations")?,
        seed: 0,
        kl_floor,
    };
    let disc_hidden = v
        .text("training.disc_hidden")?
        .split(',')
        .map(|w| w.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| {
            invalid(
                "training.disc_hidden",
                v.text("training.disc_hidden").unwrap_or(""),
                "expected comma-separated widths",
            )
        })?;
    let loss_name = v.text("training.generator_loss")?;
    let loss = GeneratorLoss::from_name(loss_name).ok_or_else(|| {
        invalid(
            "training.generator_loss",
            loss_name,
            "expected `non_saturating` or `minimax`",
        )
    })?;
    let qgan = QganConfig {
        batch_size: v.positive("training.batch_size")? as u64,
        lr_generator: v.real("training.lr_generator")?,
        lr_discriminator: v.real("training.lr_discriminator")?,
        adam: AdamSettings {
            beta1: v.real("training.adam_beta1")?,
            beta2: v.real("training.adam_beta2")?,
            eps: v.real("training.adam_eps")?,
        },
        disc_hidden,
        loss,
        max_epochs: v.positive("training.max_epochs")?,
        seed: 0,
        kl_floor,
    };
    let params_path = v.raw("training.params").map(|p| resolve_path(base_dir, p));
    match method {
        Method::Qcbm => qcbm.validate()?,
        Method::Qgan => {
            qgan.validate()?;
            if !device.noise.is_ideal() {
                return Err(BenchError::Config(
                    "QGAN training is noise-free only; remove the backend noise settings".into(),
                ));
            }
        }
        Method::Inference => {
            if params_path.is_none() {
                return Err(BenchError::Config(
                    "`training.method = inference` needs `training.params`".into(),
                ));
            }
        }
    }
    let export_dataset = v.flag("dataset.export")?;

    let mut canonical = BTreeMap::new();
    for (key, _) in KEYS {
        if ORCHESTRATION_KEYS.contains(key)
            || NOISE_KEYS.contains(key)
            || matches!(
                *key,
                "backend.readout" | "backend.profile" | "training.params"
            )
        {
            continue;
        }
        if let Ok(value) = v.text(key) {
            canonical.insert(key.to_string(), value.to_string());
        }
    }
    for (name, value) in device.noise.fields() {
        canonical.insert(format!("backend.{name}"), value.to_string());
    }
    if let Some(name) = &profile_name {
        canonical.insert("backend.profile_name".into(), name.clone());
    }
    if let Some(p) = &params_path {
        canonical.insert("training.params".into(), p.display().to_string());
    }
    let hash = config_hash(&canonical);

    Ok(PointConfig {
        index,
        sweep_value,
        n_qubits,
        dataset,
        export_dataset,
        transform,
        circuit,
        device,
        profile_name,
        n_shots,
        method,
        qcbm,
        qgan,
        kl_floor,
        params_path,
        canonical,
        hash,
    })
}

/// SHA-256 over `key=value\n` lines in key order.
pub fn config_hash(canonical: &BTreeMap<String, String>) -> String {
    let mut h = Sha256::new();
    for (k, v) in canonical {
        h.update(k.as_bytes());
        h.update(b"=");
        h.update(v.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
