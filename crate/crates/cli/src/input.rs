//! Loading input files with located diagnostics.

use posetcoh::glue::PunctureFamily;
use posetcoh::io::{CocycleJson, IntertwinerJson, NetJson, PosetJson, PuncturesJson};
use posetcoh::{Cocycle, Intertwiner, LocalNet, Poset, Tolerances};
use serde::de::DeserializeOwned;
use std::path::{Path, PathBuf};

/// Errors that end a run with exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn input(path: &Path, message: impl std::fmt::Display) -> Self {
        CliError::Input {
            path: path.to_path_buf(),
            message: message.to_string(),
        }
    }
}

/// Parses a JSON file; syntax and schema errors carry line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("artifacts serialize");
    text.push('\n');
    write_text(path, &text)
}

pub fn poset(path: &Path) -> Result<Poset, CliError> {
    read_json::<PosetJson>(path)?
        .to_poset()
        .map_err(|e| CliError::input(path, e))
}

pub fn cocycle(path: &Path, p: &Poset) -> Result<Cocycle, CliError> {
    read_json::<CocycleJson>(path)?
        .to_cocycle(p)
        .map_err(|e| CliError::input(path, e))
}

pub fn intertwiner(path: &Path) -> Result<Intertwiner, CliError> {
    Ok(read_json::<IntertwinerJson>(path)?.to_intertwiner())
}

/// The net in the file, or the full matrix algebra of dimension `d` on
/// every element.
pub fn net(
    path: Option<&Path>,
    p: &Poset,
    d: usize,
    tol: &Tolerances,
) -> Result<LocalNet, CliError> {
    match path {
        Some(path) => read_json::<NetJson>(path)?
            .to_net(p.len(), tol)
            .map_err(|e| CliError::input(path, e)),
        None => Ok(LocalNet::full(p.len(), d)),
    }
}

pub fn punctures(path: &Path, p: &Poset) -> Result<PunctureFamily, CliError> {
    let json: PuncturesJson = read_json(path)?;
    PunctureFamily::from_json(p, &json).map_err(|e| CliError::input(path, e))
}

pub fn element(p: &Poset, e: usize, what: &str) -> Result<usize, CliError> {
    if e < p.len() {
        Ok(e)
    } else {
        Err(CliError::Usage(format!(
            "{what} {e} is not an element (the poset has {} elements)",
            p.len()
        )))
    }
}
