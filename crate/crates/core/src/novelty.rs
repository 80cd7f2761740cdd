//! The habituating self-organising map novelty filter.
//!
//! Every map neuron drives the output neuron through its own habituable
//! synapse. Presenting a perception selects the winning neuron and reports
//! that synapse's current efficacy as the novelty of the perception. When
//! learning, the winner's neighbourhood is trained towards the input, the
//! winner's synapse habituates with the fast time constant and the
//! neighbours' synapses with the slow one.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::habituation::{HabituationParams, SynapseState};
use crate::som::{GridCoord, SomGrid};

/// Default map shape.
pub const DEFAULT_ROWS: usize = 10;
pub const DEFAULT_COLS: usize = 10;
pub const DEFAULT_DIM: usize = 16;

/// Header line of the state file format.
pub const STATE_MAGIC: &str = "HSOM 1";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    pub winner_params: HabituationParams,
    pub neighbor_params: HabituationParams,
    pub eta: f64,
    pub neighborhood_radius: usize,
    /// Give non-neighbourhood synapses a zero stimulus so they recover.
    pub forgetting_enabled: bool,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            winner_params: HabituationParams::winner(),
            neighbor_params: HabituationParams::neighbor(),
            eta: 0.25,
            neighborhood_radius: 1,
            forgetting_enabled: false,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::InvalidParameter(format!(
                "learning rate {} outside [0, 1]",
                self.eta
            )));
        }
        for p in [self.winner_params, self.neighbor_params] {
            HabituationParams::new(p.tau(), p.alpha(), p.y0())?;
        }
        Ok(())
    }

    /// Output level of a fully habituated winner, subtracted when integrating novelty.
    pub fn resting_activity(&self) -> f64 {
        self.winner_params.steady_state(1.0)
    }
}

/// Result of presenting one perception.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoveltyReading {
    pub winner: GridCoord,
    /// Winner's synapse efficacy before this presentation updated anything.
    pub novelty: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoveltyFilter {
    grid: SomGrid,
    synapses: Vec<SynapseState>,
    config: FilterConfig,
    presentations: u64,
}

impl NoveltyFilter {
    /// A filter over a randomly initialised map with every synapse at full efficacy.
    pub fn new(
        config: FilterConfig,
        rows: usize,
        cols: usize,
        dim: usize,
        seed: u64,
    ) -> Result<Self> {
        config.validate()?;
        let grid = SomGrid::random(rows, cols, dim, seed)?;
        Ok(Self::with_grid(config, grid))
    }

    /// The default 10x10 map over 16 inputs.
    pub fn with_defaults(seed: u64) -> Result<Self> {
        Self::new(
            FilterConfig::default(),
            DEFAULT_ROWS,
            DEFAULT_COLS,
            DEFAULT_DIM,
            seed,
        )
    }

    fn with_grid(config: FilterConfig, grid: SomGrid) -> Self {
        let synapses = vec![SynapseState::new(&config.winner_params); grid.len()];
        Self {
            grid,
            synapses,
            config,
            presentations: 0,
        }
    }

    pub fn grid(&self) -> &SomGrid {
        &self.grid
    }

    pub fn config(&self) -> &FilterConfig {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    /// Number of learning presentations since construction or load.
    pub fn presentations(&self) -> u64 {
        self.presentations
    }

    pub fn efficacy(&self, coord: GridCoord) -> f64 {
        self.synapses[self.grid.index(coord)].efficacy()
    }

    /// All efficacies, row-major.
    pub fn efficacies(&self) -> impl Iterator<Item = f64> + '_ {
        self.synapses.iter().map(SynapseState::efficacy)
    }

    fn check_perception(&self, perception: &[f64]) -> Result<()> {
        if perception.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: perception.len(),
            });
        }
        if let Some(v) = perception.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::OutOfRange(format!(
                "perception component {v} outside [0, 1]"
            )));
        }
        Ok(())
    }

    /// Novelty of `perception` without touching any state.
    pub fn evaluate(&self, perception: &[f64]) -> Result<NoveltyReading> {
        self.check_perception(perception)?;
        let winner = self.grid.find_winner(perception)?;
        Ok(NoveltyReading {
            winner,
            novelty: self.efficacy(winner),
        })
    }

    /// Presents a perception; trains and habituates only when `learning`.
    pub fn present(&mut self, perception: &[f64], learning: bool) -> Result<NoveltyReading> {
        let reading = self.evaluate(perception)?;
        if !learning {
            return Ok(reading);
        }
        let cfg = self.config;
        let winner = reading.winner;
        self.grid
            .update_within(winner, perception, cfg.eta, cfg.neighborhood_radius)?;

        let neighbors = self.grid.neighborhood(winner, cfg.neighborhood_radius);
        let mut touched = vec![false; self.synapses.len()];
        let wi = self.grid.index(winner);
        self.synapses[wi] = self.synapses[wi].advance(&cfg.winner_params, 1.0);
        touched[wi] = true;
        for c in neighbors {
            let i = self.grid.index(c);
            self.synapses[i] = self.synapses[i].advance(&cfg.neighbor_params, 1.0);
            touched[i] = true;
        }
        if cfg.forgetting_enabled {
            for (s, _) in self.synapses.iter_mut().zip(&touched).filter(|(_, t)| !**t) {
                *s = s.advance(&cfg.winner_params, 0.0);
            }
        }
        self.presentations += 1;
        Ok(reading)
    }

    /// Serialises weights and efficacies in the versioned text format.
    ///
    /// ```text
    /// HSOM 1
    /// rows cols dim
    /// <dim weights>        (rows*cols lines, row-major)
    /// <efficacy>           (rows*cols lines)
    /// ```
    pub fn save_state(&self) -> String {
        let g = &self.grid;
        let mut out = String::with_capacity(g.len() * (g.dim() + 1) * 26 + 32);
        writeln!(out, "{STATE_MAGIC}").unwrap();
        writeln!(out, "{} {} {}", g.rows(), g.cols(), g.dim()).unwrap();
        for w in g.as_slice().chunks_exact(g.dim()) {
            let line: Vec<String> = w.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        for s in &self.synapses {
            writeln!(out, "{:.16e}", s.efficacy()).unwrap();
        }
        out
    }

    /// Parses a state blob using the default configuration.
    pub fn load_state(blob: &str) -> Result<Self> {
        Self::load_state_with_config(blob, FilterConfig::default())
    }

    pub fn load_state_with_config(blob: &str, config: FilterConfig) -> Result<Self> {
        config.validate()?;
        let mut lines = blob.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let mut next = |what: &str| {
            lines.next().ok_or_else(|| {
                Error::format(0, format!("unexpected end of state while reading {what}"))
            })
        };

        let (ln, magic) = next("header")?;
        if magic != STATE_MAGIC {
            return Err(Error::format(
                ln,
                format!("expected `{STATE_MAGIC}`, found `{magic}`"),
            ));
        }
        let (ln, dims) = next("dimensions")?;
        let dims = parse_values::<usize>(ln, dims)?;
        let [rows, cols, dim] = dims[..] else {
            return Err(Error::format(
                ln,
                format!("expected 3 dimensions, found {}", dims.len()),
            ));
        };
        if rows == 0 || cols == 0 || dim == 0 {
            return Err(Error::format(ln, "dimensions must be positive"));
        }

        let n = rows * cols;
        let mut weights = Vec::with_capacity(n * dim);
        for _ in 0..n {
            let (ln, line) = next("weights")?;
            let values = parse_values::<f64>(ln, line)?;
            if values.len() != dim {
                return Err(Error::format(
                    ln,
                    format!("expected {dim} weights, found {}", values.len()),
                ));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::format(ln, "non-finite weight"));
            }
            weights.extend(values);
        }
        let y0 = config.winner_params.y0();
        let mut synapses = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, line) = next("efficacies")?;
            let value: f64 = line
                .parse()
                .map_err(|_| Error::format(ln, format!("bad efficacy `{line}`")))?;
            let s = SynapseState::with_efficacy(&config.winner_params, value)
                .map_err(|_| Error::format(ln, format!("efficacy {value} outside [0, {y0}]")))?;
            synapses.push(s);
        }
        if let Some((ln, extra)) = lines.find(|(_, l)| !l.is_empty()) {
            return Err(Error::format(ln, format!("trailing content `{extra}`")));
        }

        let grid = SomGrid::from_weights(rows, cols, dim, weights)?;
        Ok(Self {
            grid,
            synapses,
            config,
            presentations: 0,
        })
    }

    pub fn save_to(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.save_state()).map_err(|e| Error::io(path, e))
    }

    pub fn load_from(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let blob = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::load_state(&blob)
    }
}

fn parse_values<T: std::str::FromStr>(line_no: usize, line: &str) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<T>()
                .map_err(|_| Error::format(line_no, format!("cannot parse `{tok}`")))
        })
        .collect()
}
