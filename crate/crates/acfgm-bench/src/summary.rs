//! Per-run summaries: average CPU time per thousand iterations, average
//! oracle calls per iteration (initialization excluded), and final gap.

use crate::trace::Trace;

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub problem: String,
    pub solver: String,
    pub iterations: u64,
    pub cpu_seconds_per_1k_iterations: f64,
    pub oracle_calls_per_iteration: f64,
    pub final_objective: f64,
    pub final_gap: Option<f64>,
    pub diverged: bool,
}

pub fn summarize(traces: &[Trace]) -> Vec<RunSummary> {
    let mut out = Vec::new();
    for trace in traces {
        let Some(last) = trace.final_record() else {
            out.push(RunSummary {
                problem: trace.meta.problem.clone(),
                solver: trace.meta.solver.clone(),
                iterations: 0,
                cpu_seconds_per_1k_iterations: 0.0,
                oracle_calls_per_iteration: 0.0,
                final_objective: f64::NAN,
                final_gap: None,
                diverged: trace.meta.diverged,
            });
            continue;
        };
        let iterations = last.iteration;
        let accounted_iters = iterations.saturating_sub(trace.meta.init_iterations);
        let accounted_calls = last.oracle_calls.saturating_sub(trace.meta.init_oracle_calls);
        let calls_per_iter = if accounted_iters > 0 {
            accounted_calls as f64 / accounted_iters as f64
        } else {
            0.0
        };
        let cpu_per_1k = if iterations > 0 {
            last.elapsed_seconds / iterations as f64 * 1000.0
        } else {
            0.0
        };
        out.push(RunSummary {
            problem: trace.meta.problem.clone(),
            solver: trace.meta.solver.clone(),
            iterations,
            cpu_seconds_per_1k_iterations: cpu_per_1k,
            oracle_calls_per_iteration: calls_per_iter,
            final_objective: last.objective,
            final_gap: last.gap,
            diverged: trace.meta.diverged,
        });
    }
    out
}

/// Aligned text table; empty input renders only the header.
pub fn render_table(summaries: &[RunSummary]) -> String {
    let headers = [
        "problem",
        "solver",
        "iters",
        "cpu_s/1k_iters",
        "oracle_calls/iter",
        "final_gap",
        "status",
    ];
    let rows: Vec<[String; 7]> = summaries
        .iter()
        .map(|s| {
            [
                s.problem.clone(),
                s.solver.clone(),
                s.iterations.to_string(),
                format!("{:.4}", s.cpu_seconds_per_1k_iterations),
                format!("{:.3}", s.oracle_calls_per_iteration),
                s.final_gap
                    .map(|g| format!("{g:.3e}"))
                    .unwrap_or_else(|| "-".into()),
                if s.diverged { "diverged" } else { "ok" }.into(),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let render_row = |cells: &[String]| -> String {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    out.push_str(&render_row(
        &headers.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
    ));
    out.push('\n');
    for row in &rows {
        out.push_str(&render_row(row));
        out.push('\n');
    }
    out
}

/// CSV mirror of the table.
pub fn summary_csv(summaries: &[RunSummary]) -> String {
    let mut out =
        String::from("problem,solver,iterations,cpu_seconds_per_1k_iterations,oracle_calls_per_iteration,final_objective,final_gap,diverged\n");
    for s in summaries {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            s.problem,
            s.solver,
            s.iterations,
            s.cpu_seconds_per_1k_iterations,
            s.oracle_calls_per_iteration,
            s.final_objective,
            s.final_gap.map(|g| g.to_string()).unwrap_or_default(),
            s.diverged,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{TraceMeta, TraceRecord};

    fn trace(init_calls: u64, init_iters: u64, final_iter: u64, final_calls: u64) -> Trace {
        Trace {
            meta: TraceMeta {
                solver: "s".into(),
                problem: "p".into(),
                config_hash: "h".into(),
                diverged: false,
                divergence_detail: None,
                init_oracle_calls: init_calls,
                init_iterations: init_iters,
                wall_seconds: 1.0,
                reference_objective: Some(0.0),
            },
            records: vec![TraceRecord {
                iteration: final_iter,
                oracle_calls: final_calls,
                elapsed_seconds: 2.0,
                objective: 0.25,
                gap: Some(0.25),
                eta: None,
                tau: None,
                l_local: None,
            }],
        }
    }

    #[test]
    fn oracle_calls_per_iteration_excludes_initialization() {
        // 2 init calls, then 100 iterations at one call each
        let s = summarize(&[trace(2, 0, 100, 102)]);
        assert_eq!(s[0].oracle_calls_per_iteration, 1.0);
        // line-search init: first iteration folded into initialization
        let s = summarize(&[trace(5, 1, 100, 104)]);
        assert_eq!(s[0].oracle_calls_per_iteration, 1.0);
    }

    #[test]
    fn empty_input_gives_empty_table() {
        let summaries = summarize(&[]);
        assert!(summaries.is_empty());
        let table = render_table(&summaries);
        assert_eq!(table.lines().count(), 1);
    }
}
