use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::sim::{Environment, PathScript};

/// Order of learning (`L`) and readout (`NL`) trials within a phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// `L NL L NL ...` until a learning trial converges (its readout partner still runs).
    LearnFirst,
    /// `NL L NL L NL ...`, the same stopping rule.
    ReadoutFirst,
    /// A single readout trial.
    ReadoutOnce,
}

fn default_threshold() -> f64 {
    0.5
}

fn default_max_trials() -> usize {
    20
}

/// One environment visited by the experiment.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhasePlan {
    /// Built-in environment name or environment file path.
    pub env: String,
    /// `default` or a path file.
    #[serde(default)]
    pub path: Option<String>,
    pub policy: Policy,
    /// A learning trial whose integrated output is below this has converged.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Upper bound on trials (of either mode) in this phase.
    #[serde(default = "default_max_trials")]
    pub max_trials: usize,
    /// Start the phase from a freshly initialised filter.
    #[serde(default)]
    pub reset: bool,
}

impl PhasePlan {
    pub fn new(env: &str, policy: Policy) -> Self {
        Self {
            env: env.to_string(),
            path: None,
            policy,
            threshold: default_threshold(),
            max_trials: default_max_trials(),
            reset: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(Error::Plan(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        if self.max_trials == 0 {
            return Err(Error::Plan("max_trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// A sequence of phases run on one filter.
///
/// ```toml
/// noise_sigma = 0.0
///
/// [[phase]]
/// env = "A"
/// policy = "learn_first"
/// threshold = 0.5
/// max_trials = 16
///
/// [[phase]]
/// env = "A_star"
/// policy = "readout_first"
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default, rename = "phase")]
    pub phases: Vec<PhasePlan>,
    /// Directory that relative env/path files are resolved against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl ExperimentPlan {
    pub fn new(phases: Vec<PhasePlan>) -> Self {
        Self {
            phases,
            ..Self::default()
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let plan: Self = toml::from_str(text).map_err(|e| Error::Plan(e.to_string()))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut plan = Self::parse(&text)?;
        plan.base_dir = path.parent().map(Path::to_path_buf);
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::Plan(format!(
                "noise_sigma must be non-negative, got {}",
                self.noise_sigma
            )));
        }
        self.phases.iter().try_for_each(PhasePlan::validate)
    }

    fn local(&self, file: &str) -> PathBuf {
        match &self.base_dir {
            Some(dir) if Path::new(file).is_relative() => dir.join(file),
            _ => PathBuf::from(file),
        }
    }

    pub(crate) fn environment(&self, phase: &PhasePlan) -> Result<Environment> {
        match Environment::builtin(&phase.env) {
            Err(Error::UnknownEnvironment(_)) => {
                let local = self.local(&phase.env);
                if local.is_file() {
                    Environment::load(local)
                } else {
                    Err(Error::UnknownEnvironment(phase.env.clone()))
                }
            }
            other => other,
        }
    }

    pub(crate) fn path(&self, phase: &PhasePlan, env: &Environment) -> Result<PathScript> {
        match phase.path.as_deref() {
            None | Some("default") => Ok(env.default_path()),
            Some(file) => PathScript::load(self.local(file)),
        }
    }
}
