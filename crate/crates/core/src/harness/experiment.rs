use super::plan::{ExperimentPlan, Policy};
use super::trial::{run_trial, Mode, Trial, TrialOptions};
use crate::error::Result;
use crate::novelty::NoveltyFilter;
use crate::sim::{run_path, SonarModel};
use crate::sonar::DEFAULT_MAX_RANGE;

/// A trial together with where in the experiment it happened.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentTrial {
    /// 1-based phase number.
    pub phase: usize,
    pub env: String,
    pub trial: Trial,
}

/// How a phase ended.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOutcome {
    pub env: String,
    pub trials: usize,
    /// Number of learning trials up to and including the converged one.
    pub converged_after: Option<usize>,
    /// Filter state when the phase finished.
    pub final_state: String,
}

impl PhaseOutcome {
    pub fn converged(&self) -> bool {
        self.converged_after.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentRun {
    pub trials: Vec<ExperimentTrial>,
    pub phases: Vec<PhaseOutcome>,
}

impl ExperimentRun {
    pub fn phase_trials(&self, phase: usize) -> impl Iterator<Item = &ExperimentTrial> {
        self.trials.iter().filter(move |t| t.phase == phase)
    }
}

// Sonar noise must differ between trials but stay reproducible.
fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs every phase of `plan` on one filter seeded with `seed`.
pub fn run_experiment(plan: &ExperimentPlan, seed: u64) -> Result<ExperimentRun> {
    plan.validate()?;
    run_experiment_from(plan, seed, NoveltyFilter::with_defaults(seed)?)
}

/// As [`run_experiment`], starting from an existing filter.
pub fn run_experiment_from(
    plan: &ExperimentPlan,
    seed: u64,
    mut filter: NoveltyFilter,
) -> Result<ExperimentRun> {
    plan.validate()?;
    let mut run = ExperimentRun::default();
    for (p, phase) in plan.phases.iter().enumerate() {
        let env = plan.environment(phase)?;
        let path = plan.path(phase, &env)?;
        if phase.reset {
            filter = NoveltyFilter::new(
                *filter.config(),
                filter.grid().rows(),
                filter.grid().cols(),
                filter.dim(),
                seed,
            )?;
        }
        let opts = TrialOptions::for_filter(&filter);

        let first_mode = match phase.policy {
            Policy::LearnFirst => Mode::Learning,
            Policy::ReadoutFirst | Policy::ReadoutOnce => Mode::Readout,
        };
        let mut mode = first_mode;
        let mut learned = 0;
        let mut converged_after = None;
        let mut trials = 0;
        while trials < phase.max_trials {
            let index = run.trials.len() + 1;
            let model =
                SonarModel::new(DEFAULT_MAX_RANGE, plan.noise_sigma, trial_seed(seed, index))?;
            let samples = run_path(&env, &path, &model)?;
            let mut trial = run_trial(&mut filter, &samples, mode, &opts)?;
            trial.summary.trial_index = index;
            trials += 1;
            let integrated = trial.summary.integrated_output;
            run.trials.push(ExperimentTrial {
                phase: p + 1,
                env: env.name.clone(),
                trial,
            });

            if phase.policy == Policy::ReadoutOnce {
                break;
            }
            match mode {
                Mode::Learning => {
                    learned += 1;
                    if integrated < phase.threshold {
                        converged_after = Some(learned);
                    }
                    mode = Mode::Readout;
                }
                Mode::Readout => {
                    if converged_after.is_some() {
                        break;
                    }
                    mode = Mode::Learning;
                }
            }
        }
        run.phases.push(PhaseOutcome {
            env: env.name.clone(),
            trials,
            converged_after,
            final_state: filter.save_state(),
        });
    }
    Ok(run)
}
