//! File input and atomic output.

use std::fs;
use std::io::Write;
use std::path::Path;

use jclass_core::witness::Witness;
use jclass_core::{Error, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Reads and decodes a JSON file; validation failures keep their domain kind.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
    jclass_core::from_json(&text)
}

/// A bare witness, or the `{witness, verification}` report written by
/// `witness build`.
pub fn read_witness(path: &Path) -> Result<Witness> {
    let v: serde_json::Value = read_json(path)?;
    let inner = match (v.get("witness"), v.get("verification")) {
        (Some(w), Some(_)) => w,
        _ => &v,
    };
    jclass_core::from_json(&inner.to_string())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes `text` to `path` through a temporary sibling and a rename, or to
/// standard output when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::InvalidConfig(format!("cannot write output: {e}"));
    match path {
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io),
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(io)?;
            }
            let tmp = p.with_extension("partial");
            fs::write(&tmp, text).map_err(io)?;
            fs::rename(&tmp, p).map_err(io)
        }
    }
}
