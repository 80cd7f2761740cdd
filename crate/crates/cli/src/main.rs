use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use hsom::harness::{
    self, format_table, read_summary, run_experiment, run_trial, summary_csv, trace_csv,
    trace_file_name, write_experiment, ExperimentPlan, Mode, SummaryRow, TrialOptions,
};
use hsom::sim::{self, Environment, PathScript, SonarModel};
use hsom::sonar::{read_scan_csv, write_scan_csv, DEFAULT_MAX_RANGE};
use hsom::NoveltyFilter;

#[derive(Parser)]
#[command(
    name = "hsom",
    version,
    about = "Habituating SOM novelty filter experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Drive the simulated sonar along a path and write the raw scans.
    Simulate {
        /// A, A_star, B, C, control, or an environment file.
        #[arg(long)]
        env: String,
        /// `default` or a path file of `x y heading` lines.
        #[arg(long, default_value = "default")]
        path: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        noise_sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = sim::DEFAULT_SCAN_INTERVAL)]
        scan_interval: f64,
    },
    /// Run one trial over a scan file, updating the state file when learning.
    Trial {
        #[arg(long)]
        scans: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long)]
        out_dir: PathBuf,
        /// Create a fresh filter with this seed if the state file does not exist.
        #[arg(long)]
        init_seed: Option<u64>,
    },
    /// Run a multi-phase experiment plan.
    Experiment {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Print the summary table of a results directory.
    Report {
        #[arg(long)]
        in_dir: PathBuf,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: hsom::Error| e.to_string())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate {
            env,
            path,
            out,
            noise_sigma,
            seed,
            scan_interval,
        } => simulate(&env, &path, &out, noise_sigma, seed, scan_interval),
        Command::Trial {
            scans,
            state,
            mode,
            out_dir,
            init_seed,
        } => trial(&scans, &state, mode, &out_dir, init_seed),
        Command::Experiment {
            plan,
            seed,
            out_dir,
        } => experiment(&plan, seed, &out_dir),
        Command::Report { in_dir } => {
            let rows = read_summary(&in_dir)?;
            print!("{}", format_table(&rows));
            Ok(())
        }
    }
}

fn simulate(
    env: &str,
    path: &str,
    out: &Path,
    noise_sigma: f64,
    seed: u64,
    scan_interval: f64,
) -> Result<()> {
    let env = Environment::resolve(env)?;
    let mut script = match path {
        "default" => env.default_path(),
        file => PathScript::load(file)?,
    };
    script = PathScript::new(script.waypoints, scan_interval)?;
    let model = SonarModel::new(DEFAULT_MAX_RANGE, noise_sigma, seed)?;
    let samples = sim::run_path(&env, &script, &model)?;
    let file = File::create(out).with_context(|| format!("creating {}", out.display()))?;
    write_scan_csv(BufWriter::new(file), &samples)?;
    eprintln!(
        "wrote {} scans over {:.2} m to {}",
        samples.len(),
        script.length(),
        out.display()
    );
    Ok(())
}

fn trial(
    scans: &Path,
    state: &Path,
    mode: Mode,
    out_dir: &Path,
    init_seed: Option<u64>,
) -> Result<()> {
    let file = File::open(scans).with_context(|| format!("opening {}", scans.display()))?;
    let samples = read_scan_csv(file)?;
    let mut filter = match (state.exists(), init_seed) {
        (true, _) => NoveltyFilter::load_from(state)?,
        (false, Some(seed)) => NoveltyFilter::with_defaults(seed)?,
        (false, None) => bail!(
            "state file {} does not exist (pass --init-seed to create one)",
            state.display()
        ),
    };
    let opts = TrialOptions::for_filter(&filter);
    let mut result = run_trial(&mut filter, &samples, mode, &opts)?;

    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut rows = if out_dir.join(harness::SUMMARY_FILE).exists() {
        read_summary(out_dir)?
    } else {
        Vec::new()
    };
    result.summary.trial_index = rows.len() + 1;
    let trace_path = out_dir.join(trace_file_name(result.summary.trial_index));
    std::fs::write(&trace_path, trace_csv(&result.trace)?)
        .with_context(|| format!("writing {}", trace_path.display()))?;
    rows.push(SummaryRow {
        summary: result.summary.clone(),
        phase: 1,
        env: scans
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
    });
    let summary_path = out_dir.join(harness::SUMMARY_FILE);
    std::fs::write(&summary_path, summary_csv(&rows)?)
        .with_context(|| format!("writing {}", summary_path.display()))?;

    if mode.is_learning() || !state.exists() {
        filter.save_to(state)?;
    }
    let s = &result.summary;
    println!(
        "trial {} ({}): integrated {:.4}, max {:.4}, {} steps",
        s.trial_index, s.mode, s.integrated_output, s.max_output, s.step_count
    );
    Ok(())
}

fn experiment(plan: &Path, seed: u64, out_dir: &Path) -> Result<()> {
    let plan = ExperimentPlan::load(plan)?;
    let run = run_experiment(&plan, seed)?;
    write_experiment(&run, out_dir)?;
    let rows: Vec<SummaryRow> = run.trials.iter().map(SummaryRow::from).collect();
    print!("{}", format_table(&rows));
    for (i, p) in run.phases.iter().enumerate() {
        match p.converged_after {
            Some(n) => println!(
                "phase {} ({}): converged after {n} learning trial(s)",
                i + 1,
                p.env
            ),
            None => println!(
                "phase {} ({}): did not converge in {} trial(s)",
                i + 1,
                p.env,
                p.trials
            ),
        }
    }
    Ok(())
}
