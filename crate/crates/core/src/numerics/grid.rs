use serde::{Deserialize, Serialize};

use crate::error::{GmpError, Result};
use crate::model::GmpModel;
use crate::wavefunction::ln_normalization;

/// Bound-state tail allowed at `x_max`: `N e^{-alpha x_max} < TAIL`.
pub const TAIL: f64 = 1e-12;

/// Uniform integration grid on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub const DEFAULT_X_MIN: f64 = 1e-4;
    pub const DEFAULT_POINTS: usize = 20_000;
    pub const MIN_POINTS: usize = 1000;

    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min > 0.0 && x_max > x_min && x_max.is_finite()) {
            return Err(GmpError::Precondition(format!(
                "grid needs 0 < x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < Self::MIN_POINTS {
            return Err(GmpError::Precondition(format!(
                "grid needs at least {} points, got {n_points}",
                Self::MIN_POINTS
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    /// Grid whose right edge satisfies the tail rule for every bound level.
    pub fn for_model(model: &GmpModel, n_points: usize) -> Result<Self> {
        let mut x_max = 2.0 * model.well_position() + 10.0;
        for n in 0..model.level_count() {
            let alpha = model.level(n)?.alpha;
            let ln_n = ln_normalization(model, n)?;
            x_max = x_max.max((ln_n - TAIL.ln()) / alpha);
        }
        Self::new(Self::DEFAULT_X_MIN, x_max, n_points)
    }

    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.step()
    }

    /// Same span, twice the resolution.
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points - 1,
            ..*self
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }
}
