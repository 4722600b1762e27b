//! Numerical settings shared by geometry and evaluation.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_GRID: usize = 1024;
pub const DEFAULT_CURVATURE_FLOOR: f64 = 1e-8;

/// How `h'` and `h''` are obtained from a support body.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffScheme {
    /// Differentiate the body's trigonometric series.
    #[default]
    Spectral,
    /// Fourth-order centered periodic differences of grid samples.
    FiniteDifference4,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub grid: usize,
    pub scheme: DiffScheme,
    pub curvature_floor: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            grid: DEFAULT_GRID,
            scheme: DiffScheme::Spectral,
            curvature_floor: DEFAULT_CURVATURE_FLOOR,
        }
    }
}

impl QuadratureConfig {
    pub fn with_grid(grid: usize) -> Result<Self> {
        let cfg = QuadratureConfig {
            grid,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid < 64 || !self.grid.is_multiple_of(2) {
            return Err(Error::Parameter(format!(
                "grid size must be even and ≥ 64, got {}",
                self.grid
            )));
        }
        if !(self.curvature_floor > 0.0 && self.curvature_floor.is_finite()) {
            return Err(Error::Parameter(format!(
                "curvature floor must be positive, got {}",
                self.curvature_floor
            )));
        }
        Ok(())
    }
}
