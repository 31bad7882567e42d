//! Batch entry points shared by the `aqft` binary and the Python module:
//! every subcommand turns a [`RunConfig`] into a [`Report`] plus optional
//! artifacts (JSON tables, CSV grids).

pub mod commands;
pub mod config;
pub mod report;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub use commands::execute;
pub use config::RunConfig;
pub use report::{CheckRecord, Report, Status};

use crate::catalog::CatalogError;
use crate::extension::ExtError;
use crate::klein_gordon::KgError;
use crate::theory::TheoryError;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("unknown command {0}")]
    UnknownCommand(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error(transparent)]
    Kg(#[from] KgError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

fn variant(debug: String) -> String {
    debug.split(['(', ' ', '{']).next().unwrap_or_default().to_string()
}

impl RunError {
    /// Name of the innermost error variant, e.g. `EmptyCatalog`.
    pub fn kind(&self) -> String {
        match self {
            RunError::Catalog(e) => variant(format!("{e:?}")),
            RunError::Theory(e) => variant(format!("{e:?}")),
            RunError::Ext(ExtError::Catalog(e)) => variant(format!("{e:?}")),
            RunError::Ext(ExtError::Theory(e)) => variant(format!("{e:?}")),
            RunError::Ext(e) => variant(format!("{e:?}")),
            RunError::Kg(e) => variant(format!("{e:?}")),
            other => variant(format!("{other:?}")),
        }
    }

    /// `{"error": kind, "message": text}`
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() }).to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    GeometryCheck,
    CatalogBuild,
    Axioms,
    Extend,
    Characterize,
    IqftRoundtrip,
    KgGreen,
    KgIdeal,
    KgSupport,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::GeometryCheck,
        Command::CatalogBuild,
        Command::Axioms,
        Command::Extend,
        Command::Characterize,
        Command::IqftRoundtrip,
        Command::KgGreen,
        Command::KgIdeal,
        Command::KgSupport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::GeometryCheck => "geometry-check",
            Command::CatalogBuild => "catalog-build",
            Command::Axioms => "axioms",
            Command::Extend => "extend",
            Command::Characterize => "characterize",
            Command::IqftRoundtrip => "iqft-roundtrip",
            Command::KgGreen => "kg-green",
            Command::KgIdeal => "kg-ideal",
            Command::KgSupport => "kg-support",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = RunError;
    fn from_str(s: &str) -> Result<Self, RunError> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| RunError::UnknownCommand(s.to_string()))
    }
}

/// Report and artifacts of one command, not yet written anywhere.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    /// `(file name, contents)`
    pub artifacts: Vec<(String, Vec<u8>)>,
}

impl Outcome {
    /// Writes `<command>.json` and the artifacts into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), RunError> {
        std::fs::create_dir_all(dir)?;
        for (name, bytes) in &self.artifacts {
            std::fs::write(dir.join(name), bytes)?;
        }
        std::fs::write(dir.join(format!("{}.json", self.report.command)), self.report.to_json())?;
        Ok(())
    }
}

/// Validates the config, executes `command` and writes into `config.out`.
pub fn run(command: Command, config: &RunConfig) -> Result<Outcome, RunError> {
    config.validate()?;
    let out = execute(command, config)?;
    out.write(&config.out)?;
    Ok(out)
}
