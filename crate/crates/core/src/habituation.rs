//! Habituating synapse dynamics.
//!
//! A synapse's efficacy `y` follows
//!
//! ```text
//! tau * dy/dt = alpha * (y0 - y) - S
//! ```
//!
//! integrated with an explicit Euler step of one unit per presentation.
//! A constant stimulus drives the efficacy down towards `y0 - S / alpha`;
//! removing the stimulus lets it recover towards `y0`. A smaller `tau`
//! makes both happen faster.

use crate::error::{Error, Result};

/// Constants of the habituation equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HabituationParams {
    tau: f64,
    alpha: f64,
    y0: f64,
}

impl HabituationParams {
    /// Time constant used for the winning neuron's synapse.
    pub const WINNER_TAU: f64 = 3.33;
    /// Time constant used for synapses in the winner's neighbourhood.
    pub const NEIGHBOR_TAU: f64 = 14.3;
    /// Recovery constant shared by every synapse.
    pub const ALPHA: f64 = 1.05;
    /// Initial (and maximum) efficacy.
    pub const Y0: f64 = 1.0;

    pub fn new(tau: f64, alpha: f64, y0: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tau must be positive, got {tau}"
            )));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if !(y0 > 0.0 && y0 <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "y0 must lie in (0, 1], got {y0}"
            )));
        }
        // The discrete recurrence contracts by (1 - alpha/tau) per step.
        if alpha / tau >= 2.0 {
            return Err(Error::InvalidParameter(format!(
                "alpha/tau = {} makes the discrete step unstable",
                alpha / tau
            )));
        }
        Ok(Self { tau, alpha, y0 })
    }

    /// Fast-habituating parameters for the winning neuron (`tau = 3.33`).
    pub fn winner() -> Self {
        Self {
            tau: Self::WINNER_TAU,
            alpha: Self::ALPHA,
            y0: Self::Y0,
        }
    }

    /// Slower parameters for neighbourhood synapses (`tau = 14.3`).
    pub fn neighbor() -> Self {
        Self {
            tau: Self::NEIGHBOR_TAU,
            alpha: Self::ALPHA,
            y0: Self::Y0,
        }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    /// Fixed point of the dynamics under a constant stimulus, clamped to `[0, y0]`.
    ///
    /// With the default constants and `S = 1` this is `1 - 1/1.05 = 0.047619...`,
    /// the floor the efficacy never drops below.
    pub fn steady_state(&self, stimulus: f64) -> f64 {
        (self.y0 - stimulus / self.alpha).clamp(0.0, self.y0)
    }
}

/// Current efficacy of one habituable synapse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynapseState {
    efficacy: f64,
}

impl SynapseState {
    /// A fresh synapse at full efficacy `y0`.
    pub fn new(params: &HabituationParams) -> Self {
        Self {
            efficacy: params.y0,
        }
    }

    /// A synapse at an arbitrary efficacy within `[0, y0]`.
    pub fn with_efficacy(params: &HabituationParams, efficacy: f64) -> Result<Self> {
        if !(0.0..=params.y0).contains(&efficacy) {
            return Err(Error::OutOfRange(format!(
                "efficacy {efficacy} outside [0, {}]",
                params.y0
            )));
        }
        Ok(Self { efficacy })
    }

    pub fn efficacy(&self) -> f64 {
        self.efficacy
    }

    /// Advances the synapse by one presentation of `stimulus`.
    pub fn step(self, params: &HabituationParams, stimulus: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&stimulus) {
            return Err(Error::OutOfRange(format!(
                "stimulus {stimulus} outside [0, 1]"
            )));
        }
        Ok(self.advance(params, stimulus))
    }

    pub(crate) fn advance(self, params: &HabituationParams, stimulus: f64) -> Self {
        let rate = params.alpha * (params.y0 - self.efficacy) - stimulus;
        Self {
            efficacy: (self.efficacy + rate / params.tau).clamp(0.0, params.y0),
        }
    }
}
