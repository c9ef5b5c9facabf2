//! Inclusive `min:max:step` parameter grids.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Upper bound on grid length; a typo like `0:1:1e-12` should not allocate
/// a trillion points.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Inclusive arithmetic grid. Point `i` is `min + i·step`, computed directly
/// rather than by accumulation, and the last point never exceeds `max` by
/// more than rounding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && step.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid bounds must be finite: {min}:{max}:{step}"
            )));
        }
        if step <= 0.0 {
            return Err(Error::InvalidParameter(format!("grid step must be positive, got {step}")));
        }
        if max < min {
            return Err(Error::InvalidParameter(format!("grid max {max} is below min {min}")));
        }
        let grid = Self { min, max, step };
        let span = (max - min) / step;
        if span >= MAX_GRID_POINTS as f64 {
            return Err(Error::InvalidParameter(format!(
                "grid {grid} has more than {MAX_GRID_POINTS} points"
            )));
        }
        Ok(grid)
    }

    /// Default orthogonality sweep, `0:0.95:0.01`.
    pub fn default_xi() -> Self {
        Self {
            min: 0.0,
            max: 0.95,
            step: 0.01,
        }
    }

    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| (self.min + i as f64 * self.step).min(self.max))
            .collect()
    }

    /// Checks that every point lies in `[lo, hi)`.
    pub fn check_within(&self, lo: f64, hi: f64, what: &str) -> Result<()> {
        if self.min < lo || self.max >= hi {
            return Err(Error::InvalidParameter(format!(
                "{what} grid {self} must lie in [{lo}, {hi})"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.step)
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [min, max, step] = parts.as_slice() else {
            return Err(Error::InvalidParameter(format!(
                "expected min:max:step, got {s:?}"
            )));
        };
        let parse = |field: &str, name: &str| -> Result<f64> {
            field.trim().parse::<f64>().map_err(|e| {
                Error::InvalidParameter(format!("grid {name} {field:?} is not a number: {e}"))
            })
        };
        Self::new(parse(min, "min")?, parse(max, "max")?, parse(step, "step")?)
    }
}
