//! Seeded random smooth planar bodies for test corpora.

use super::support::SupportBody2D;
use super::trig::TrigSeries;
use crate::config::QuadratureConfig;
use crate::error::{Error, Result};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Draws before giving up on finding a convex body.
pub const REJECTION_BUDGET: usize = 10_000;

/// `h(θ) = 1 + Σ_{k=2..kmax} (a_k cos kθ + b_k sin kθ)` with coefficients
/// uniform in `[−α/k², α/k²]`, redrawn until `ρ ≥ floor`, then recentered.
pub fn random_smooth_body(seed: u64, kmax: usize, alpha: f64, cfg: &QuadratureConfig) -> Result<SupportBody2D> {
    if kmax < 2 {
        return Err(Error::Parameter(format!("kmax must be at least 2, got {kmax}")));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Parameter(format!("alpha must be a nonnegative number, got {alpha}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..REJECTION_BUDGET {
        let mut series = TrigSeries::constant(1.0);
        for k in 2..=kmax {
            let amp = alpha / (k * k) as f64;
            let (a, b) = if amp > 0.0 {
                (rng.random_range(-amp..=amp), rng.random_range(-amp..=amp))
            } else {
                (0.0, 0.0)
            };
            series.set_harmonic(k, a, b);
        }
        series.trim(0.0);
        let body = match SupportBody2D::from_series(series, cfg.grid, cfg.curvature_floor) {
            Ok(b) => b,
            Err(Error::Nonconvex { .. } | Error::NotStarShaped { .. }) => continue,
            Err(e) => return Err(e),
        };
        let (_, g) = body.area_centroid();
        return body.translated(g, cfg.curvature_floor);
    }
    Err(Error::Generator(REJECTION_BUDGET))
}
