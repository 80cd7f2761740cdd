//! Deterministic 2-D corridor world with a ring of pencil-beam sonars.

mod environment;
mod geometry;
mod path;

pub use environment::{Environment, BUILTIN_NAMES, OPENED_DOOR};
pub use geometry::{ray_cast, Point, Segment};
pub use path::{PathScript, Pose, DEFAULT_SCAN_INTERVAL};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::sonar::{RawScan, ScanSample, BEAM_COUNT, DEFAULT_MAX_RANGE};

/// Sixteen beams spaced 22.5 degrees apart, beam 0 pointing along the heading
/// and indices increasing counter-clockwise (beam 4 left, beam 12 right).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SonarModel {
    pub r_max: f64,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SonarModel {
    fn default() -> Self {
        Self {
            r_max: DEFAULT_MAX_RANGE,
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

impl SonarModel {
    pub const BEAM_SPACING: f64 = std::f64::consts::TAU / BEAM_COUNT as f64;

    pub fn new(r_max: f64, noise_sigma: f64, seed: u64) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "r_max must be positive, got {r_max}"
            )));
        }
        if !(noise_sigma.is_finite() && noise_sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise sigma must be non-negative, got {noise_sigma}"
            )));
        }
        Ok(Self {
            r_max,
            noise_sigma,
            seed,
        })
    }

    /// Starts a scanner whose noise stream is seeded from this model.
    pub fn scanner(&self) -> Sonar {
        Sonar {
            model: *self,
            rng: ChaCha8Rng::seed_from_u64(self.seed),
            noise: Normal::new(0.0, self.noise_sigma).ok(),
        }
    }
}

/// A sonar ring with its own noise stream.
#[derive(Debug, Clone)]
pub struct Sonar {
    model: SonarModel,
    rng: ChaCha8Rng,
    noise: Option<Normal<f64>>,
}

impl Sonar {
    pub fn scan(&mut self, env: &Environment, pose: &Pose) -> RawScan {
        let origin = pose.position();
        let ranges = std::array::from_fn(|k| {
            let bearing = pose.heading + k as f64 * SonarModel::BEAM_SPACING;
            let r = ray_cast(&env.segments, origin, bearing, self.model.r_max);
            match &self.noise {
                Some(n) if self.model.noise_sigma > 0.0 => {
                    (r + n.sample(&mut self.rng)).clamp(0.0, self.model.r_max)
                }
                _ => r,
            }
        });
        RawScan::new(ranges).expect("ray casts are finite and non-negative")
    }
}

/// One noise-free or seeded scan at a single pose.
pub fn scan(env: &Environment, pose: &Pose, model: &SonarModel) -> RawScan {
    model.scanner().scan(env, pose)
}

/// Drives the sonar along `path`, one scan per sampled pose.
pub fn run_path(
    env: &Environment,
    path: &PathScript,
    model: &SonarModel,
) -> Result<Vec<ScanSample>> {
    let mut sonar = model.scanner();
    Ok(path
        .sample()?
        .into_iter()
        .map(|(distance_m, pose)| ScanSample {
            distance_m,
            scan: sonar.scan(env, &pose),
        })
        .collect())
}
