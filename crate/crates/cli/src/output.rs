use std::env;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use crate::{Failure, Format, Output};

pub const OUT_DIR_VAR: &str = "GRADIOMETRY_OUT_DIR";

fn destination(out: &Output, name: &str) -> Option<PathBuf> {
    let dir = env::var_os(OUT_DIR_VAR).filter(|d| !d.is_empty()).map(PathBuf::from);
    match (&out.output, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => {
            let ext = match out.format {
                Format::Json => "json",
                Format::Csv => "csv",
            };
            Some(d.join(format!("{name}.{ext}")))
        }
        (None, None) => None,
    }
}

fn csv_text<R: Serialize>(rows: &[R]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Failure::Inconsistent(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Inconsistent(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Inconsistent(e.to_string()))
}

/// Writes the JSON document or the CSV rows to the selected destination.
pub fn emit<T: Serialize, R: Serialize>(out: &Output, name: &str, json: &T, rows: &[R]) -> Result<(), Failure> {
    let text = match out.format {
        Format::Json => gradiometry::export::to_json(json)?,
        Format::Csv => csv_text(rows)?,
    };
    match destination(out, name) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))?;
        }
    }
    Ok(())
}
