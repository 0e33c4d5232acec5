//! Deterministic CSV/JSON writing.
//!
//! CSV follows RFC 4180 (header row, CRLF line endings, `.` decimal
//! separator); numbers carry 12 significant digits so repeated runs are
//! byte-identical. Relative output paths are resolved against the
//! `TWINBEAM_OUT_DIR` environment variable when it is set.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Format with 12 significant digits, stable across runs.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.11e}")
}

/// Resolve the output path, honoring `TWINBEAM_OUT_DIR` for relative paths.
pub fn resolve_path(path: &str) -> PathBuf {
    let p = Path::new(path);
    if p.is_relative() {
        if let Ok(dir) = std::env::var("TWINBEAM_OUT_DIR") {
            if !dir.is_empty() {
                return Path::new(&dir).join(p);
            }
        }
    }
    p.to_path_buf()
}

/// Write an RFC 4180 CSV file: header row plus formatted numeric rows.
pub fn write_csv(path: &str, header: &[&str], rows: &[Vec<f64>]) -> Result<(), String> {
    let full = resolve_path(path);
    let mut buf = String::new();
    buf.push_str(&header.join(","));
    buf.push_str("\r\n");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| fmt_sig(x)).collect();
        buf.push_str(&cells.join(","));
        buf.push_str("\r\n");
    }
    write_atomic(&full, buf.as_bytes())
}

/// Serialize a report as pretty JSON (UTF-8, trailing newline).
pub fn write_json<T: serde::Serialize>(path: &str, value: &T) -> Result<(), String> {
    let full = resolve_path(path);
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| format!("serialization failed: {e}"))?;
    text.push('\n');
    write_atomic(&full, text.as_bytes())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), String> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| format!("cannot create {}: {e}", parent.display()))?;
        }
    }
    let mut file =
        fs::File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
    file.write_all(bytes)
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}
