//! Command-line benchmark runner.
//!
//! Exit codes: 0 success, 1 configuration error, 2 data error, 3 at
//! least one solver diverged (traces are still exported).

use acfgm_bench::{config::RawConfig, export, runner, summary, HarnessError};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "acfgm-bench",
    about = "Run first-order solver benchmarks and export convergence traces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Override a config key, e.g. --set run.budget=500 (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Shorthand for --set run.jobs=N.
        #[arg(long)]
        jobs: Option<usize>,
        /// Shorthand for --set run.budget=N.
        #[arg(long)]
        budget: Option<usize>,
        /// Shorthand for --set run.stride=N.
        #[arg(long)]
        stride: Option<usize>,
        /// Shorthand for --set run.seed=N.
        #[arg(long)]
        seed: Option<u64>,
        /// Shorthand for --set run.output=DIR.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Summarize previously exported traces.
    Summarize { trace_dir: PathBuf },
    /// Generate a synthetic dataset and write it in LIBSVM format.
    Gen {
        /// Problem family (currently `qp`).
        family: String,
        m: usize,
        n: usize,
        seed: u64,
        /// Output file; defaults to `<family>_<m>x<n>_s<seed>.svm`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch() -> Result<ExitCode, HarnessError> {
    match Cli::parse().command {
        Command::Run {
            config,
            set,
            jobs,
            budget,
            stride,
            seed,
            output,
        } => {
            let text = std::fs::read_to_string(&config).map_err(|e| {
                HarnessError::Config(format!("cannot read {}: {e}", config.display()))
            })?;
            let mut raw = RawConfig::parse(&text)?;
            for assignment in &set {
                raw.apply_override(assignment)?;
            }
            if let Some(jobs) = jobs {
                raw.set("run.jobs", &jobs.to_string());
            }
            if let Some(budget) = budget {
                raw.set("run.budget", &budget.to_string());
            }
            if let Some(stride) = stride {
                raw.set("run.stride", &stride.to_string());
            }
            if let Some(seed) = seed {
                raw.set("run.seed", &seed.to_string());
            }
            if let Some(output) = output {
                raw.set("run.output", &output.display().to_string());
            }
            let experiment = raw.into_experiment()?;
            let traces = runner::run_experiment(&experiment)?;
            export::export_traces(&traces, &experiment.output)?;
            let summaries = summary::summarize(&traces);
            print!("{}", summary::render_table(&summaries));
            println!(
                "exported {} trace(s) to {}",
                traces.len(),
                experiment.output.display()
            );
            if traces.iter().any(|t| t.meta.diverged) {
                eprintln!("warning: at least one solver diverged");
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Summarize { trace_dir } => {
            let traces = export::load_traces(&trace_dir)?;
            let summaries = summary::summarize(&traces);
            print!("{}", summary::render_table(&summaries));
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen {
            family,
            m,
            n,
            seed,
            out,
        } => {
            if family != "qp" {
                return Err(HarnessError::Config(format!(
                    "unknown generator family `{family}` (expected qp)"
                )));
            }
            if m == 0 || n == 0 {
                return Err(HarnessError::Config(
                    "generator needs m >= 1 and n >= 1".into(),
                ));
            }
            let dataset = acfgm::problems::random_qp_instance(m, n, seed);
            let path =
                out.unwrap_or_else(|| PathBuf::from(format!("{family}_{m}x{n}_s{seed}.svm")));
            let file = std::fs::File::create(&path).map_err(|e| {
                HarnessError::Data(format!("cannot write {}: {e}", path.display()))
            })?;
            acfgm::problems::write_libsvm(&dataset, std::io::BufWriter::new(file))
                .map_err(|e| HarnessError::Data(format!("write failed: {e}")))?;
            println!("wrote {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
