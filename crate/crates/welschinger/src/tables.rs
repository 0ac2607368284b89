//! On-disk table formats. Both tables are versioned JSON documents
//! `{"version": 1, "entries": [...]}`; contact vectors are count arrays
//! (`[2, 0, 1]` is `2e1 + e3`).

use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::contact::{ContactVector, LagrangianKind};
use crate::error::{Error, Result};

pub const TABLE_VERSION: u32 = 1;

/// Environment variable naming a directory with `relative.json` / `cotangent.json` overrides.
pub const TABLE_DIR_ENV: &str = "WELSCHINGER_TABLE_DIR";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableFile<E> {
    pub version: u32,
    pub entries: Vec<E>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelativeEntry {
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub alpha: ContactVector,
    pub beta: ContactVector,
    pub value: i64,
    #[serde(default)]
    pub source_quote: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FRole {
    /// A plain value that the reduction relations are expected to re-derive.
    #[default]
    Plain,
    /// A plain value with too few real points for any relation to apply.
    Base,
    /// A value with prescribed real double points.
    Cross,
    /// A value known to vanish.
    Vanishing,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FEntry {
    pub kind: LagrangianKind,
    pub r: u32,
    #[serde(default)]
    pub r_l: u32,
    #[serde(default)]
    pub crosses: u32,
    pub alpha: ContactVector,
    pub beta: ContactVector,
    pub value: i64,
    #[serde(default)]
    pub role: FRole,
    #[serde(default)]
    pub source_quote: String,
}

pub fn parse<E: DeserializeOwned>(text: &str, what: &str) -> Result<Vec<E>> {
    let file: TableFile<E> =
        serde_json::from_str(text).map_err(|e| Error::Table(format!("{what}: {e}")))?;
    if file.version != TABLE_VERSION {
        return Err(Error::Table(format!(
            "{what}: unsupported version {} (expected {TABLE_VERSION})",
            file.version
        )));
    }
    Ok(file.entries)
}

pub fn read<E: DeserializeOwned>(path: &Path) -> Result<Vec<E>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Table(format!("{}: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}

/// Path of `name` inside the override directory, if the variable is set and the file exists.
pub fn env_override(name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(TABLE_DIR_ENV)?;
    let p = Path::new(&dir).join(name);
    p.is_file().then_some(p)
}
