//! Self-organising map layer.
//!
//! The winner is the neuron with the smallest squared Euclidean distance to
//! the input. The winner and every neuron within Chebyshev distance `radius`
//! on the (non-wrapping) grid move towards the input by `eta * (v - w)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Position of a neuron on the map grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridCoord {
    pub row: usize,
    pub col: usize,
}

impl GridCoord {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

/// A `rows x cols` lattice of `dim`-dimensional weight vectors, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SomGrid {
    rows: usize,
    cols: usize,
    dim: usize,
    weights: Vec<f64>,
}

fn check_dims(rows: usize, cols: usize, dim: usize) -> Result<()> {
    if rows == 0 || cols == 0 || dim == 0 {
        return Err(Error::InvalidParameter(format!(
            "grid dimensions must be positive, got {rows}x{cols}x{dim}"
        )));
    }
    Ok(())
}

impl SomGrid {
    /// Weights drawn uniformly from `[0, 1)` by a ChaCha generator seeded with `seed`.
    pub fn random(rows: usize, cols: usize, dim: usize, seed: u64) -> Result<Self> {
        check_dims(rows, cols, dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = (0..rows * cols * dim)
            .map(|_| rng.random::<f64>())
            .collect();
        Ok(Self {
            rows,
            cols,
            dim,
            weights,
        })
    }

    /// Builds a grid from explicit row-major weights.
    pub fn from_weights(rows: usize, cols: usize, dim: usize, weights: Vec<f64>) -> Result<Self> {
        check_dims(rows, cols, dim)?;
        if weights.len() != rows * cols * dim {
            return Err(Error::DimensionMismatch {
                expected: rows * cols * dim,
                got: weights.len(),
            });
        }
        if let Some(bad) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite weight {bad}")));
        }
        Ok(Self {
            rows,
            cols,
            dim,
            weights,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All weights, row-major, `dim` values per neuron.
    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn contains(&self, coord: GridCoord) -> bool {
        coord.row < self.rows && coord.col < self.cols
    }

    pub(crate) fn index(&self, coord: GridCoord) -> usize {
        coord.row * self.cols + coord.col
    }

    pub(crate) fn coord(&self, index: usize) -> GridCoord {
        GridCoord::new(index / self.cols, index % self.cols)
    }

    /// Coordinates in row-major order.
    pub fn coords(&self) -> impl Iterator<Item = GridCoord> + '_ {
        (0..self.len()).map(|i| self.coord(i))
    }

    /// Weight vector of one neuron.
    ///
    /// Panics if `coord` is out of bounds.
    pub fn weights(&self, coord: GridCoord) -> &[f64] {
        assert!(
            self.contains(coord),
            "{coord:?} outside {}x{}",
            self.rows,
            self.cols
        );
        let start = self.index(coord) * self.dim;
        &self.weights[start..start + self.dim]
    }

    fn check_input(&self, input: &[f64]) -> Result<()> {
        if input.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: input.len(),
            });
        }
        Ok(())
    }

    fn check_coord(&self, coord: GridCoord) -> Result<()> {
        if !self.contains(coord) {
            return Err(Error::OutOfRange(format!(
                "{coord:?} outside {}x{} grid",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// Squared Euclidean distance between a neuron's weights and `input`.
    pub fn distance(&self, coord: GridCoord, input: &[f64]) -> Result<f64> {
        self.check_input(input)?;
        self.check_coord(coord)?;
        Ok(squared_distance(self.weights(coord), input))
    }

    /// Neuron closest to `input`. Ties go to the first neuron in row-major order.
    pub fn find_winner(&self, input: &[f64]) -> Result<GridCoord> {
        self.check_input(input)?;
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, w) in self.weights.chunks_exact(self.dim).enumerate() {
            let d = squared_distance(w, input);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        Ok(self.coord(best))
    }

    /// In-bounds neurons within Chebyshev distance `radius` of `center`,
    /// excluding `center`, in row-major order.
    pub fn neighborhood(&self, center: GridCoord, radius: usize) -> Vec<GridCoord> {
        let r0 = center.row.saturating_sub(radius);
        let r1 = (center.row + radius).min(self.rows - 1);
        let c0 = center.col.saturating_sub(radius);
        let c1 = (center.col + radius).min(self.cols - 1);
        let mut out = Vec::with_capacity((r1 - r0 + 1) * (c1 - c0 + 1));
        for row in r0..=r1 {
            for col in c0..=c1 {
                let c = GridCoord::new(row, col);
                if c != center {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Moves the winner and its radius-1 neighbourhood towards `input`.
    pub fn update_weights(&mut self, winner: GridCoord, input: &[f64], eta: f64) -> Result<()> {
        self.update_within(winner, input, eta, 1)
    }

    /// Moves the winner and every neuron within `radius` of it towards `input`.
    pub fn update_within(
        &mut self,
        winner: GridCoord,
        input: &[f64],
        eta: f64,
        radius: usize,
    ) -> Result<()> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::OutOfRange(format!(
                "learning rate {eta} outside [0, 1]"
            )));
        }
        self.check_input(input)?;
        self.check_coord(winner)?;
        let mut targets = self.neighborhood(winner, radius);
        targets.push(winner);
        for coord in targets {
            let start = self.index(coord) * self.dim;
            for (w, v) in self.weights[start..start + self.dim].iter_mut().zip(input) {
                *w += eta * (v - *w);
            }
        }
        Ok(())
    }
}

pub(crate) fn squared_distance(w: &[f64], v: &[f64]) -> f64 {
    w.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum()
}
