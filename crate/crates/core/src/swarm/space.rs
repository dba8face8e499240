use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Box constraints on positions and velocities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub velocity_min: Vec<f64>,
    pub velocity_max: Vec<f64>,
}

/// Default velocity limit as a fraction of the box width.
pub const DEFAULT_VELOCITY_FRACTION: f64 = 0.2;

impl SearchSpace {
    /// A box with symmetric velocity limits `v_max = fraction * (b - a)`.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, velocity_fraction: f64) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::invalid(format!(
                "bounds must be nonempty and of equal length ({} vs {})",
                lower.len(),
                upper.len()
            )));
        }
        if let Some(i) = (0..lower.len()).find(|&i| lower[i].partial_cmp(&upper[i]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::invalid(format!(
                "lower bound {} is not below upper bound {} in dimension {i}",
                lower[i], upper[i]
            )));
        }
        if !(velocity_fraction > 0.0 && velocity_fraction.is_finite()) {
            return Err(Error::invalid(format!(
                "velocity fraction must be positive, got {velocity_fraction}"
            )));
        }
        let velocity_max: Vec<f64> = lower
            .iter()
            .zip(&upper)
            .map(|(a, b)| velocity_fraction * (b - a))
            .collect();
        let velocity_min = velocity_max.iter().map(|v| -v).collect();
        Ok(SearchSpace {
            lower,
            upper,
            velocity_min,
            velocity_max,
        })
    }

    /// `[lo, hi]^d` with the default velocity limit.
    pub fn cube(d: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; d], vec![hi; d], DEFAULT_VELOCITY_FRACTION)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(x, (a, b))| (*a..=*b).contains(x))
    }
}
