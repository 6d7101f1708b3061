//! Artifact files: every output embeds the resolved configuration and a
//! content hash of its inputs, and is written atomically (temp file +
//! rename) so interrupted runs never leave partial artifacts behind.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Resolve the output directory: explicit flag, then QUASILINE_OUT, then
/// the working directory.
pub fn out_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone()
        .or_else(|| std::env::var_os("QUASILINE_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Wrap a result with run metadata. The timestamp is the only
/// non-reproducible field; strip it to compare artifacts byte-for-byte.
pub fn wrap(command: &str, config: Value, input_hash: &str, result: Value) -> Value {
    json!({
        "command": command,
        "config": config,
        "input_hash": input_hash,
        "timestamp": chrono_free_timestamp(),
        "result": result,
    })
}

/// RFC3339-ish UTC timestamp from the system clock without extra deps.
fn chrono_free_timestamp() -> String {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .unwrap_or_default();
    format!("unix:{}", now.as_secs())
}

/// Atomic write: contents land under `path` only as a complete file.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

pub fn write_json(path: &Path, value: &Value) -> std::io::Result<()> {
    let mut s = serde_json::to_string_pretty(value).expect("json serialization");
    s.push('\n');
    write_atomic(path, &s)
}
