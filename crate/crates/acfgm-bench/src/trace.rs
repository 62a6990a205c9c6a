//! Per-run convergence traces.

use serde::{Deserialize, Serialize};

/// The fixed CSV schema traces are exported with.
pub const CSV_HEADER: &str = "iteration,oracle_calls,elapsed_seconds,objective,gap,eta,tau,L_local";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: u64,
    pub oracle_calls: u64,
    /// CPU seconds of the worker thread since the run started.
    pub elapsed_seconds: f64,
    pub objective: f64,
    /// `objective - reference`; absent when no reference is known.
    pub gap: Option<f64>,
    pub eta: Option<f64>,
    pub tau: Option<f64>,
    pub l_local: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub solver: String,
    pub problem: String,
    pub config_hash: String,
    pub diverged: bool,
    pub divergence_detail: Option<String>,
    pub init_oracle_calls: u64,
    pub init_iterations: u64,
    /// Wall-clock duration of the whole run; recorded but not used in
    /// summaries.
    pub wall_seconds: f64,
    pub reference_objective: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub meta: TraceMeta,
    pub records: Vec<TraceRecord>,
}

impl Trace {
    /// Key traces are sorted and named by.
    pub fn run_key(&self) -> (String, String) {
        (self.meta.problem.clone(), self.meta.solver.clone())
    }

    pub fn final_record(&self) -> Option<&TraceRecord> {
        self.records.last()
    }
}

fn field(value: Option<f64>) -> String {
    match value {
        // `{}` prints the shortest representation that parses back equal
        Some(v) => format!("{v}"),
        None => String::new(),
    }
}

/// Render the records as CSV under [`CSV_HEADER`].
pub fn to_csv(trace: &Trace) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &trace.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.iteration,
            r.oracle_calls,
            r.elapsed_seconds,
            r.objective,
            field(r.gap),
            field(r.eta),
            field(r.tau),
            field(r.l_local),
        ));
    }
    out
}

/// Parse a CSV produced by [`to_csv`].
pub fn records_from_csv(text: &str) -> Result<Vec<TraceRecord>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(format!("unexpected header: {other:?}")),
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 8 {
            return Err(format!("row {} has {} cells", i + 2, cells.len()));
        }
        let parse = |s: &str| -> Result<f64, String> {
            s.parse().map_err(|e| format!("row {}: {e}", i + 2))
        };
        let opt = |s: &str| -> Result<Option<f64>, String> {
            if s.is_empty() {
                Ok(None)
            } else {
                parse(s).map(Some)
            }
        };
        records.push(TraceRecord {
            iteration: cells[0].parse().map_err(|e| format!("row {}: {e}", i + 2))?,
            oracle_calls: cells[1].parse().map_err(|e| format!("row {}: {e}", i + 2))?,
            elapsed_seconds: parse(cells[2])?,
            objective: parse(cells[3])?,
            gap: opt(cells[4])?,
            eta: opt(cells[5])?,
            tau: opt(cells[6])?,
            l_local: opt(cells[7])?,
        });
    }
    Ok(records)
}
