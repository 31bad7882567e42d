//! Python bindings: run any subcommand from a JSON config and get the report back as JSON.

use aqft::cli::{execute, Command, RunConfig, RunError};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: RunError) -> PyErr {
    match e {
        RunError::InvalidConfig(_) | RunError::UnknownCommand(_) => PyValueError::new_err(e.to_json()),
        _ => PyRuntimeError::new_err(e.to_json()),
    }
}

fn config(config_json: Option<&str>) -> Result<RunConfig, RunError> {
    match config_json {
        Some(text) => RunConfig::from_json(text),
        None => Ok(RunConfig::default()),
    }
}

/// The default run config as JSON.
#[pyfunction]
fn default_config() -> String {
    RunConfig::default().to_json()
}

#[pyfunction]
fn commands() -> Vec<&'static str> {
    Command::ALL.iter().map(|c| c.name()).collect()
}

/// Runs `command` and returns the report as JSON. With `write`, the report
/// and its artifacts also go to the config's output directory.
#[pyfunction]
#[pyo3(signature = (command, config_json=None, write=false))]
fn run(command: &str, config_json: Option<&str>, write: bool) -> PyResult<String> {
    let cmd: Command = command.parse().map_err(err)?;
    let cfg = config(config_json).map_err(err)?;
    let out = execute(cmd, &cfg).map_err(err)?;
    if write {
        out.write(&cfg.out).map_err(err)?;
    }
    Ok(out.report.to_json())
}

/// SHA-256 of the normalized config.
#[pyfunction]
#[pyo3(signature = (config_json=None))]
fn config_hash(config_json: Option<&str>) -> PyResult<String> {
    Ok(config(config_json).map_err(err)?.hash())
}

#[pymodule]
fn aqft_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(default_config, m)?)?;
    m.add_function(wrap_pyfunction!(commands, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(config_hash, m)?)?;
    Ok(())
}
