//! Turning flags into lattices, strategies, noise models and scripts.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;
use topoff_core::dynamics::DynamicsScript;
use topoff_core::prep::{DecoderKind, PrepStrategy};
use topoff_core::{Lattice, LatticeKind, NoiseSpec};

/// Directory searched for noise, strategy and script files given by name.
pub const CONFIG_DIR_ENV: &str = "TOPOFF_CONFIG_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or input files; exit code 2.
    #[error("{0}")]
    Config(String),
    /// Failure while running or writing results; exit code 1.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<topoff_core::Error> for CliError {
    fn from(e: topoff_core::Error) -> Self {
        use topoff_core::Error::*;
        match e {
            InvalidStrategy(_) | InvalidNoise(_) | AncillaShortage { .. } | PlanGap(_) | Parse { .. } | Json(_)
            | InvalidArgument(_) | TooFewShots(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Finds a referenced file as given, then in the config directory.
pub fn locate(name: &str) -> Option<PathBuf> {
    let direct = Path::new(name);
    if direct.is_file() {
        return Some(direct.to_path_buf());
    }
    let dir = std::env::var_os(CONFIG_DIR_ENV)?;
    let p = Path::new(&dir).join(name);
    p.is_file().then_some(p)
}

pub fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn lattice(name: &str) -> CliResult<Lattice> {
    Ok(name.parse::<LatticeKind>()?.build())
}

/// `none`, the built-in `h1-1` model, or a JSON file.
pub fn noise(arg: &str) -> CliResult<Option<NoiseSpec>> {
    if arg == "none" {
        return Ok(None);
    }
    if let Some(path) = locate(arg) {
        return Ok(Some(NoiseSpec::from_json(&read_input(&path)?)?));
    }
    match arg.trim_end_matches(".json") {
        "h1-1" | "h1_1" => Ok(Some(NoiseSpec::h1_1())),
        _ => Err(CliError::Config(format!("noise model '{arg}' is neither a preset nor a readable file"))),
    }
}

/// A preset name or a JSON file. `qasm2` swaps in the whole-register
/// lookup decoder.
pub fn strategy(arg: &str, lattice: &Lattice, qasm2: bool) -> CliResult<PrepStrategy> {
    let mut s = match locate(arg) {
        Some(path) => PrepStrategy::from_json(&read_input(&path)?)?,
        None => PrepStrategy::preset(arg, lattice)?,
    };
    if qasm2 {
        if s.decoder == DecoderKind::InferredParity {
            return Err(CliError::Config("--qasm2-conditions cannot be combined with an inferred check".into()));
        }
        s.decoder = DecoderKind::LookupQasm2;
    }
    s.validate(lattice)?;
    Ok(s)
}

pub fn script(arg: Option<&str>, preset: fn() -> DynamicsScript) -> CliResult<DynamicsScript> {
    let Some(arg) = arg else { return Ok(preset()) };
    match arg {
        "transmutation" => Ok(DynamicsScript::transmutation()),
        "qnd_trace" | "qnd-trace" => Ok(DynamicsScript::qnd_trace()),
        _ => {
            let path = locate(arg).ok_or_else(|| CliError::Config(format!("script '{arg}' not found")))?;
            Ok(DynamicsScript::from_json(&read_input(&path)?)?)
        }
    }
}

/// Echo of the resolved run configuration. Output paths and the thread
/// count are left out so that reports do not depend on them.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub lattice: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<PrepStrategy>,
    pub noise: Option<NoiseSpec>,
    pub seed: Option<u64>,
    pub keep_all: bool,
    pub params: serde_json::Value,
}
