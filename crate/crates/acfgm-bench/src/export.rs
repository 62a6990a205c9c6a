//! Trace export: one CSV and one JSON file per `(problem, solver)` run.

use crate::trace::{to_csv, Trace};
use crate::HarnessError;
use std::fs;
use std::path::{Path, PathBuf};

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

pub fn trace_basename(trace: &Trace) -> String {
    format!(
        "{}__{}",
        sanitize(&trace.meta.problem),
        sanitize(&trace.meta.solver)
    )
}

/// Write `<problem>__<solver>.csv` and `.json` for every trace.
pub fn export_traces(traces: &[Trace], dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir)
        .map_err(|e| HarnessError::Data(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for trace in traces {
        let base = trace_basename(trace);
        let csv_path = dir.join(format!("{base}.csv"));
        fs::write(&csv_path, to_csv(trace))
            .map_err(|e| HarnessError::Data(format!("cannot write {}: {e}", csv_path.display())))?;
        let json_path = dir.join(format!("{base}.json"));
        let json = serde_json::to_string_pretty(trace)
            .map_err(|e| HarnessError::Data(format!("serialization failed: {e}")))?;
        fs::write(&json_path, json)
            .map_err(|e| HarnessError::Data(format!("cannot write {}: {e}", json_path.display())))?;
        written.push(csv_path);
        written.push(json_path);
    }
    Ok(written)
}

/// Load every `*.json` trace in a directory, sorted by file name.
pub fn load_traces(dir: &Path) -> Result<Vec<Trace>, HarnessError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| HarnessError::Data(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    let mut traces = Vec::new();
    for path in paths {
        let text = fs::read_to_string(&path)
            .map_err(|e| HarnessError::Data(format!("cannot read {}: {e}", path.display())))?;
        let trace: Trace = serde_json::from_str(&text)
            .map_err(|e| HarnessError::Data(format!("{}: {e}", path.display())))?;
        traces.push(trace);
    }
    Ok(traces)
}
