//! Experiment configuration.
//!
//! Config files are flat `key = value` text with dotted sections; see the
//! repository README for the full grammar. `#` starts a comment line and
//! blank lines are ignored. CLI overrides are applied as extra
//! `key = value` pairs on top of the file.

use crate::HarnessError;
use acfgm::problems::{IngestMode, PenaltyFamily};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Qp,
    Lasso,
    SqrtLasso,
    Logistic,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        match s {
            "qp" => Ok(Family::Qp),
            "lasso" => Ok(Family::Lasso),
            "sqrt_lasso" => Ok(Family::SqrtLasso),
            "logistic" => Ok(Family::Logistic),
            other => Err(HarnessError::Config(format!(
                "unknown problem family `{other}` (expected qp|lasso|sqrt_lasso|logistic)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Qp => "qp",
            Family::Lasso => "lasso",
            Family::SqrtLasso => "sqrt_lasso",
            Family::Logistic => "logistic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Synthetic { m: usize, n: usize },
    File { path: PathBuf, format: IngestMode },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub family: Family,
    pub source: DataSource,
    pub penalty: Option<PenaltyFamily>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyCfg {
    Simple,
    Adaptive,
    Hoelder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitCfg {
    FromL0,
    LineSearch,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverKindCfg {
    AcFgm {
        policy: PolicyCfg,
        alpha: f64,
        epsilon: f64,
        beta: Option<f64>,
        init: InitCfg,
        scale: f64,
        gamma: f64,
    },
    AdGd {
        gamma: f64,
    },
    NsFgm {
        gamma: f64,
        epsilon: f64,
    },
    NsPgm {
        gamma: f64,
        epsilon: f64,
    },
    NsAgd {
        /// `None` means "estimate from the problem family".
        lipschitz: Option<f64>,
        accelerated: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSpec {
    pub name: String,
    pub kind: SolverKindCfg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    /// Sorted by name; the runner's output order.
    pub solvers: Vec<SolverSpec>,
    pub budget: usize,
    pub stride: usize,
    pub output: PathBuf,
    pub seed: u64,
    pub jobs: usize,
}

/// Raw `key = value` map; later assignments win.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!("line {}: expected `key = value`", i + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(HarnessError::Config(format!(
                    "line {}: empty key or value",
                    i + 1
                )));
            }
            entries.insert(key.to_string(), value.to_string());
        }
        Ok(Self { entries })
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.entries.insert(key.trim().into(), value.trim().into());
    }

    /// Apply a CLI override of the form `key=value`.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), HarnessError> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| {
            HarnessError::Config(format!("override `{assignment}` is not key=value"))
        })?;
        self.set(key, value);
        Ok(())
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    fn take_parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, HarnessError> {
        match self.take(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                HarnessError::Config(format!("key `{key}`: cannot parse `{raw}`"))
            }),
        }
    }

    fn require<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, HarnessError> {
        self.take_parsed(key)?
            .ok_or_else(|| HarnessError::Config(format!("missing required key `{key}`")))
    }

    /// Resolve into a typed experiment configuration, rejecting unknown
    /// keys.
    pub fn into_experiment(mut self) -> Result<ExperimentConfig, HarnessError> {
        let family = Family::parse(&self.require::<String>("problem.family")?)?;
        let source = match self.require::<String>("problem.source")?.as_str() {
            "synthetic" => DataSource::Synthetic {
                m: self.require("problem.m")?,
                n: self.require("problem.n")?,
            },
            "file" => {
                let path: String = self.require("problem.path")?;
                let format = match self.take("problem.format").as_deref() {
                    Some("classification") => IngestMode::Classification,
                    Some("regression") => IngestMode::Regression,
                    Some(other) => {
                        return Err(HarnessError::Config(format!(
                            "problem.format: unknown mode `{other}`"
                        )))
                    }
                    None => match family {
                        Family::Logistic => IngestMode::Classification,
                        _ => IngestMode::Regression,
                    },
                };
                DataSource::File {
                    path: PathBuf::from(path),
                    format,
                }
            }
            other => {
                return Err(HarnessError::Config(format!(
                    "problem.source: unknown source `{other}` (expected synthetic|file)"
                )))
            }
        };
        let penalty = match self.take("problem.penalty.family") {
            None => {
                // drop a dangling c quietly only if absent as well
                if self.take("problem.penalty.c").is_some() {
                    return Err(HarnessError::Config(
                        "problem.penalty.c given without problem.penalty.family".into(),
                    ));
                }
                None
            }
            Some(fam) => {
                let c: f64 = self.require("problem.penalty.c")?;
                Some(match fam.as_str() {
                    "lasso_frac" => PenaltyFamily::LassoFrac { c },
                    "sqrt_lasso_quantile" => PenaltyFamily::SqrtLassoQuantile { c },
                    other => {
                        return Err(HarnessError::Config(format!(
                            "problem.penalty.family: unknown family `{other}`"
                        )))
                    }
                })
            }
        };

        let budget: usize = self.require("run.budget")?;
        let stride: usize = self.take_parsed("run.stride")?.unwrap_or(1);
        let output = PathBuf::from(
            self.take("run.output").unwrap_or_else(|| "traces".into()),
        );
        let seed: u64 = self.take_parsed("run.seed")?.unwrap_or(0);
        let jobs: usize = self.take_parsed("run.jobs")?.unwrap_or(1);
        if budget < 1 {
            return Err(HarnessError::Config("run.budget must be >= 1".into()));
        }
        if stride < 1 {
            return Err(HarnessError::Config("run.stride must be >= 1".into()));
        }
        if jobs < 1 {
            return Err(HarnessError::Config("run.jobs must be >= 1".into()));
        }

        // group remaining solver.* keys by solver name
        let mut solver_keys: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut leftovers = Vec::new();
        for (key, value) in std::mem::take(&mut self.entries) {
            if let Some(rest) = key.strip_prefix("solver.") {
                if let Some((name, field)) = rest.split_once('.') {
                    solver_keys
                        .entry(name.to_string())
                        .or_default()
                        .insert(field.to_string(), value);
                    continue;
                }
            }
            leftovers.push(key);
        }
        if !leftovers.is_empty() {
            return Err(HarnessError::Config(format!(
                "unknown configuration keys: {}",
                leftovers.join(", ")
            )));
        }

        let mut solvers = Vec::new();
        for (name, mut fields) in solver_keys {
            let kind = parse_solver(&name, &mut fields)?;
            if let Some(stray) = fields.keys().next() {
                return Err(HarnessError::Config(format!(
                    "solver.{name}: unknown or inapplicable key `{stray}`"
                )));
            }
            solvers.push(SolverSpec { name, kind });
        }
        if solvers.is_empty() {
            return Err(HarnessError::Config(
                "at least one solver.<name>.kind entry is required".into(),
            ));
        }

        Ok(ExperimentConfig {
            problem: ProblemSpec {
                family,
                source,
                penalty,
            },
            solvers,
            budget,
            stride,
            output,
            seed,
            jobs,
        })
    }
}

fn take_field<T: std::str::FromStr>(
    fields: &mut BTreeMap<String, String>,
    solver: &str,
    key: &str,
) -> Result<Option<T>, HarnessError> {
    match fields.remove(key) {
        None => Ok(None),
        Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
            HarnessError::Config(format!("solver.{solver}.{key}: cannot parse `{raw}`"))
        }),
    }
}

fn parse_solver(
    name: &str,
    fields: &mut BTreeMap<String, String>,
) -> Result<SolverKindCfg, HarnessError> {
    let kind = fields.remove("kind").ok_or_else(|| {
        HarnessError::Config(format!("solver.{name}: missing `kind`"))
    })?;
    match kind.as_str() {
        "acfgm" => {
            let policy = match fields.remove("policy").as_deref() {
                None | Some("simple") => PolicyCfg::Simple,
                Some("adaptive") => PolicyCfg::Adaptive,
                Some("hoelder") => PolicyCfg::Hoelder,
                Some(other) => {
                    return Err(HarnessError::Config(format!(
                        "solver.{name}.policy: unknown policy `{other}`"
                    )))
                }
            };
            let init = match fields.remove("init").as_deref() {
                None | Some("from_l0") => InitCfg::FromL0,
                Some("line_search") => InitCfg::LineSearch,
                Some(other) => {
                    return Err(HarnessError::Config(format!(
                        "solver.{name}.init: unknown strategy `{other}`"
                    )))
                }
            };
            Ok(SolverKindCfg::AcFgm {
                policy,
                alpha: take_field(fields, name, "alpha")?.unwrap_or(1.0),
                epsilon: take_field(fields, name, "epsilon")?.unwrap_or(1e-8),
                beta: take_field(fields, name, "beta")?,
                init,
                scale: take_field(fields, name, "scale")?.unwrap_or(0.4),
                gamma: take_field(fields, name, "gamma")?.unwrap_or(2.0),
            })
        }
        "adgd" => Ok(SolverKindCfg::AdGd {
            gamma: take_field(fields, name, "gamma")?.unwrap_or(1.5),
        }),
        "nsfgm" => Ok(SolverKindCfg::NsFgm {
            gamma: take_field(fields, name, "gamma")?.unwrap_or(2.0),
            epsilon: take_field(fields, name, "epsilon")?.unwrap_or(1e-8),
        }),
        "nspgm" => Ok(SolverKindCfg::NsPgm {
            gamma: take_field(fields, name, "gamma")?.unwrap_or(2.0),
            epsilon: take_field(fields, name, "epsilon")?.unwrap_or(1e-8),
        }),
        "nsagd" => {
            let lipschitz = match fields.remove("lipschitz") {
                None => None,
                Some(raw) if raw == "auto" => None,
                Some(raw) => Some(raw.parse::<f64>().map_err(|_| {
                    HarnessError::Config(format!(
                        "solver.{name}.lipschitz: expected `auto` or a number, got `{raw}`"
                    ))
                })?),
            };
            Ok(SolverKindCfg::NsAgd {
                lipschitz,
                accelerated: take_field(fields, name, "accelerated")?.unwrap_or(true),
            })
        }
        other => Err(HarnessError::Config(format!(
            "solver.{name}.kind: unknown kind `{other}`"
        ))),
    }
}

impl ExperimentConfig {
    /// Canonical `key = value` lines covering every semantically
    /// meaningful field (output path and job count excluded: they do not
    /// affect results).
    pub fn canonical_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        lines.push(format!("problem.family = {}", self.problem.family.as_str()));
        match &self.problem.source {
            DataSource::Synthetic { m, n } => {
                lines.push("problem.source = synthetic".into());
                lines.push(format!("problem.m = {m}"));
                lines.push(format!("problem.n = {n}"));
            }
            DataSource::File { path, format } => {
                lines.push("problem.source = file".into());
                lines.push(format!("problem.path = {}", path.display()));
                lines.push(format!(
                    "problem.format = {}",
                    match format {
                        IngestMode::Classification => "classification",
                        IngestMode::Regression => "regression",
                    }
                ));
            }
        }
        match self.problem.penalty {
            Some(PenaltyFamily::LassoFrac { c }) => {
                lines.push("problem.penalty.family = lasso_frac".into());
                lines.push(format!("problem.penalty.c = {c}"));
            }
            Some(PenaltyFamily::SqrtLassoQuantile { c }) => {
                lines.push("problem.penalty.family = sqrt_lasso_quantile".into());
                lines.push(format!("problem.penalty.c = {c}"));
            }
            None => {}
        }
        lines.push(format!("run.budget = {}", self.budget));
        lines.push(format!("run.stride = {}", self.stride));
        lines.push(format!("run.seed = {}", self.seed));
        for spec in &self.solvers {
            let name = &spec.name;
            match &spec.kind {
                SolverKindCfg::AcFgm {
                    policy,
                    alpha,
                    epsilon,
                    beta,
                    init,
                    scale,
                    gamma,
                } => {
                    lines.push(format!("solver.{name}.kind = acfgm"));
                    lines.push(format!(
                        "solver.{name}.policy = {}",
                        match policy {
                            PolicyCfg::Simple => "simple",
                            PolicyCfg::Adaptive => "adaptive",
                            PolicyCfg::Hoelder => "hoelder",
                        }
                    ));
                    lines.push(format!("solver.{name}.alpha = {alpha}"));
                    lines.push(format!("solver.{name}.epsilon = {epsilon}"));
                    if let Some(beta) = beta {
                        lines.push(format!("solver.{name}.beta = {beta}"));
                    }
                    lines.push(format!(
                        "solver.{name}.init = {}",
                        match init {
                            InitCfg::FromL0 => "from_l0",
                            InitCfg::LineSearch => "line_search",
                        }
                    ));
                    lines.push(format!("solver.{name}.scale = {scale}"));
                    lines.push(format!("solver.{name}.gamma = {gamma}"));
                }
                SolverKindCfg::AdGd { gamma } => {
                    lines.push(format!("solver.{name}.kind = adgd"));
                    lines.push(format!("solver.{name}.gamma = {gamma}"));
                }
                SolverKindCfg::NsFgm { gamma, epsilon } => {
                    lines.push(format!("solver.{name}.kind = nsfgm"));
                    lines.push(format!("solver.{name}.gamma = {gamma}"));
                    lines.push(format!("solver.{name}.epsilon = {epsilon}"));
                }
                SolverKindCfg::NsPgm { gamma, epsilon } => {
                    lines.push(format!("solver.{name}.kind = nspgm"));
                    lines.push(format!("solver.{name}.gamma = {gamma}"));
                    lines.push(format!("solver.{name}.epsilon = {epsilon}"));
                }
                SolverKindCfg::NsAgd {
                    lipschitz,
                    accelerated,
                } => {
                    lines.push(format!("solver.{name}.kind = nsagd"));
                    match lipschitz {
                        Some(l) => lines.push(format!("solver.{name}.lipschitz = {l}")),
                        None => lines.push(format!("solver.{name}.lipschitz = auto")),
                    }
                    lines.push(format!("solver.{name}.accelerated = {accelerated}"));
                }
            }
        }
        lines.sort();
        lines
    }

    /// Order-insensitive hash of the canonical form.
    pub fn hash(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for line in self.canonical_lines() {
            for b in line.as_bytes() {
                h ^= u64::from(*b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
            h ^= u64::from(b'\n');
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}
