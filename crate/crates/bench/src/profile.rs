//! Static backend profiles: one `key = value` per line, `#` comments.
//!
//! Keys: `name`, `basis_gates` (comma-separated), `p01`, `p10`,
//! `p_depol_2q`, `p_depol_1q`, `amp_damping`, `phase_damping`,
//! `coupling_map` (`;`-separated `i-j` pairs). `name` and `basis_gates` are
//! required; error rates default to 0.

use std::path::Path;

use genbench_core::noise::{BackendProfile, NoiseModel};

use crate::config::parse_entries;
use crate::error::{BenchError, Result};

pub fn load_profile(text: &str, origin: &str) -> Result<BackendProfile> {
    let mut name = None;
    let mut basis_gates = None;
    let mut coupling_map = None;
    let mut noise = NoiseModel::ideal();
    for e in parse_entries(text, origin)? {
        let err = |message: String| BenchError::Parse {
            path: origin.to_string(),
            line: e.line,
            message,
        };
        let rate = || {
            e.value
                .parse::<f64>()
                .map_err(|_| err(format!("`{}` is not a number", e.value)))
        };
        match e.key.as_str() {
            "name" => name = Some(e.value.clone()),
            "basis_gates" => {
                basis_gates = Some(
                    e.value
                        .split(',')
                        .map(|g| g.trim().to_string())
                        .filter(|g| !g.is_empty())
                        .collect(),
                )
            }
            "p01" => noise.p01 = rate()?,
            "p10" => noise.p10 = rate()?,
            "p_depol_2q" => noise.p_depol_2q = rate()?,
            "p_depol_1q" => noise.p_depol_1q = rate()?,
            "amp_damping" => noise.amp_damping = rate()?,
            "phase_damping" => noise.phase_damping = rate()?,
            "coupling_map" => {
                let pairs = e
                    .value
                    .split(';')
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .map(|p| {
                        let (a, b) = p.split_once('-')?;
                        Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
                    })
                    .collect::<Option<Vec<(usize, usize)>>>()
                    .ok_or_else(|| err(format!("malformed coupling map `{}`", e.value)))?;
                coupling_map = Some(pairs);
            }
            other => return Err(err(format!("unknown profile key `{other}`"))),
        }
    }
    let missing = |key: &str| BenchError::Config(format!("{origin}: missing `{key}`"));
    let profile = BackendProfile {
        name: name.ok_or_else(|| missing("name"))?,
        basis_gates: basis_gates.ok_or_else(|| missing("basis_gates"))?,
        noise,
        coupling_map,
    };
    profile.validate()?;
    Ok(profile)
}

pub fn load_profile_file(path: &Path) -> Result<BackendProfile> {
    let text = std::fs::read_to_string(path).map_err(BenchError::io(path))?;
    load_profile(&text, &path.display().to_string())
}
