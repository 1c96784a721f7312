//! Experiment runner for `qlat-core`: INI configuration in, CSV tables and a
//! JSON manifest out.

pub mod commands;
pub mod config;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde_json::json;

use config::{Config, ConfigError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    SchwingerQuench,
    SchwingerVqe,
    DeuteronVqe,
    PhaseScan,
    ThirringCorrelator,
    HadronicTensor,
    Thermal,
    DumpHamiltonian,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::SchwingerQuench => "schwinger-quench",
            Subcommand::SchwingerVqe => "schwinger-vqe",
            Subcommand::DeuteronVqe => "deuteron-vqe",
            Subcommand::PhaseScan => "phase-scan",
            Subcommand::ThirringCorrelator => "thirring-correlator",
            Subcommand::HadronicTensor => "hadronic-tensor",
            Subcommand::Thermal => "thermal",
            Subcommand::DumpHamiltonian => "dump-hamiltonian",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qlat", version, about = "Lattice field theory experiments on an exact statevector simulator")]
pub struct Cli {
    #[arg(value_enum)]
    pub subcommand: Subcommand,
    /// INI file with [model] and [algorithm] sections.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Seed for optimizer restarts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads requested; recorded in the manifest.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Also write the Hamiltonian(s) in Pauli text format.
    #[arg(long)]
    pub dump_hamiltonian: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Core(#[from] qlat_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// 2 configuration, 3 resource cap, 4 internal invariant or I/O failure.
    pub fn exit_code(&self) -> i32 {
        use qlat_core::Error as E;
        match self {
            RunError::Config(_) => 2,
            RunError::Core(E::QubitCap { .. }) => 3,
            RunError::Core(
                E::InvalidParameter(_)
                | E::UnsupportedLevelCount(_)
                | E::EmptySector { .. }
                | E::RankOutOfRange { .. }
                | E::NonUniformGrid
                | E::OffLattice { .. }
                | E::IndexOutOfRange { .. },
            ) => 2,
            RunError::Core(_) | RunError::Io(_) => 4,
        }
    }
}

/// Runs one subcommand, writing its files and `manifest.json` into `cli.out`.
/// Returns the paths written.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>, RunError> {
    let started = Instant::now();
    if cli.threads == 0 {
        return Err(Config::invalid("cli", "threads", 0, "must be at least 1").into());
    }
    let mut cfg = Config::from_path(&cli.config)?;
    let outcome = commands::execute(cli.subcommand, &mut cfg, cli.seed)?;
    std::fs::create_dir_all(&cli.out)?;
    let mut files = outcome.files;
    if cli.dump_hamiltonian || cli.subcommand == Subcommand::DumpHamiltonian {
        files.extend(outcome.hamiltonians.iter().map(|(name, h)| (name.clone(), h.to_string().into_bytes())));
    }
    let mut written = Vec::new();
    let mut checksums = serde_json::Map::new();
    for (name, bytes) in &files {
        written.push(write(&cli.out, name, bytes)?);
        checksums.insert(name.clone(), json!(output::sha256_hex(bytes)));
    }
    let mut resolved = serde_json::Map::new();
    for (section, key, value) in cfg.resolved() {
        resolved
            .entry(section.clone())
            .or_insert_with(|| json!({}))
            .as_object_mut()
            .expect("section object")
            .insert(key.clone(), json!(value));
    }
    let manifest = json!({
        "subcommand": cli.subcommand.name(),
        "config_path": cli.config.display().to_string(),
        "config": resolved,
        "seed": cli.seed,
        "threads": cli.threads,
        "versions": { "qlat": env!("CARGO_PKG_VERSION") },
        "wall_time_seconds": started.elapsed().as_secs_f64(),
        "outputs": checksums,
        "results": outcome.results,
    });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest is valid JSON") + "\n";
    written.push(write(&cli.out, "manifest.json", text.as_bytes())?);
    Ok(written)
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, std::io::Error> {
    let path = dir.join(name);
    std::fs::write(&path, bytes)?;
    Ok(path)
}
