//! Input documents.

use std::path::Path;

use dmod_core::scalar::parse_scalar;
use dmod_core::Scalar;
use serde::Deserialize;

use crate::CliError;

/// A rational given as a JSON integer or a `p/q` string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn scalar(&self) -> Result<Scalar, CliError> {
        match self {
            Num::Int(i) => Ok(Scalar::from_integer((*i).into())),
            Num::Text(s) => parse_scalar(s).map_err(|e| CliError::Parse(format!("`{s}`: {e}"))),
        }
    }
}

pub fn scalars(v: &[Num]) -> Result<Vec<Scalar>, CliError> {
    v.iter().map(Num::scalar).collect()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChiDoc {
    pub chi: Vec<Vec<i64>>,
    #[serde(default)]
    pub lambda: Option<Vec<Num>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub basis: Vec<String>,
    pub matrices: Vec<Vec<Vec<Num>>>,
    #[serde(default)]
    pub structure: Option<Vec<Vec<Vec<Num>>>>,
    pub lambda: Vec<Num>,
    #[serde(default)]
    pub constgens: Vec<String>,
    /// Caller-asserted reason the action has finitely many orbits.
    #[serde(default)]
    pub finite_orbits: Option<String>,
}

pub fn read_doc<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}
