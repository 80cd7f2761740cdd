use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::novelty::NoveltyFilter;
use crate::som::GridCoord;
use crate::sonar::{
    ScanSample, SegmentAccumulator, BEAM_COUNT, DEFAULT_MAX_RANGE, DEFAULT_SEGMENT_LENGTH,
};

/// Whether a trial trains the filter or only reads novelty out of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Learning,
    Readout,
}

impl Mode {
    pub fn is_learning(self) -> bool {
        self == Mode::Learning
    }

    /// `L` / `NL`, as used in printed tables.
    pub fn short(self) -> &'static str {
        match self {
            Mode::Learning => "L",
            Mode::Readout => "NL",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Learning => "learn",
            Mode::Readout => "readout",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "learn" | "learning" | "L" => Ok(Mode::Learning),
            "readout" | "NL" => Ok(Mode::Readout),
            other => Err(Error::InvalidParameter(format!(
                "unknown trial mode `{other}`"
            ))),
        }
    }
}

/// One presentation within a trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub step: usize,
    pub distance_m: f64,
    pub winner: GridCoord,
    pub novelty: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialSummary {
    pub trial_index: usize,
    pub mode: Mode,
    /// Sum of per-step novelty above resting activity.
    pub integrated_output: f64,
    pub max_output: f64,
    pub step_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub trace: Vec<TraceRecord>,
    pub summary: TrialSummary,
}

/// Smoothing and scoring settings for a trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOptions {
    pub segment_length: f64,
    pub r_max: f64,
    pub resting: f64,
}

impl TrialOptions {
    /// Default smoothing with the resting activity implied by the filter's constants.
    pub fn for_filter(filter: &NoveltyFilter) -> Self {
        Self {
            segment_length: DEFAULT_SEGMENT_LENGTH,
            r_max: DEFAULT_MAX_RANGE,
            resting: filter.config().resting_activity(),
        }
    }
}

/// Integrated output above `resting` (negative contributions clamp to zero)
/// and the peak novelty. Both are zero for an empty trace.
pub fn integrate(novelties: impl IntoIterator<Item = f64>, resting: f64) -> (f64, f64) {
    novelties.into_iter().fold((0.0, 0.0), |(sum, max), n| {
        (sum + (n - resting).max(0.0), f64::max(max, n))
    })
}

/// Streams scans through the 10 cm smoother and presents every perception.
/// The filter is modified only in [`Mode::Learning`].
pub fn run_trial(
    filter: &mut NoveltyFilter,
    samples: &[ScanSample],
    mode: Mode,
    opts: &TrialOptions,
) -> Result<Trial> {
    if filter.dim() != BEAM_COUNT {
        return Err(Error::InvalidParameter(format!(
            "filter expects {}-dimensional input but the sonar ring has {BEAM_COUNT} beams",
            filter.dim()
        )));
    }
    let mut acc = SegmentAccumulator::new(opts.segment_length, opts.r_max)?;
    let mut trace = Vec::new();
    let mut prev = samples.first().map_or(0.0, |s| s.distance_m);
    for s in samples {
        let delta = s.distance_m - prev;
        prev = s.distance_m;
        if let Some(p) = acc.push_scan(s.scan, delta)? {
            let reading = filter.present(p.as_slice(), mode.is_learning())?;
            trace.push(TraceRecord {
                step: trace.len() + 1,
                distance_m: s.distance_m,
                winner: reading.winner,
                novelty: reading.novelty,
            });
        }
    }
    let (integrated_output, max_output) = integrate(trace.iter().map(|r| r.novelty), opts.resting);
    Ok(Trial {
        summary: TrialSummary {
            trial_index: 1,
            mode,
            integrated_output,
            max_output,
            step_count: trace.len(),
        },
        trace,
    })
}
