//! Hausdorff continuity of `IS_φ` along a shrinking perturbation.

use crate::config::QuadratureConfig;
use crate::error::{Error, Result};
use crate::extremal::{extremal_bounds, ExtremalKind};
use crate::funclass::AdmissibleFunction;
use crate::geometry::{grid_angle, ConvexBody, SupportBody2D};
use serde::{Deserialize, Serialize};

/// Orientation of the perturbation profile.
const PHASE: f64 = 0.3;

/// One perturbation size. `shrink` is `[(1+δ/ρ)^{−n}·lower(K_ε), upper(K)]`
/// and `grow` is `[lower(K), (1+10δ/ρ)^n·upper(K_ε)]`; each must be
/// ordered. `δ` is the larger of `ε` and the measured Hausdorff distance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityRow {
    pub eps: f64,
    pub rho: f64,
    pub base_lower: f64,
    pub base_upper: f64,
    pub hausdorff: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub shrink: Option<[f64; 2]>,
    pub grow: Option<[f64; 2]>,
    /// Largest endpoint change against `K`.
    pub gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Perturbs `h_K` by `ε(3 + cos 2(θ−θ₀))/4`, recenters, and compares the
/// `IS_φ` intervals of `K` and `K_ε`.
pub fn continuity_probe(
    k: &ConvexBody,
    f: &AdmissibleFunction,
    eps_list: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<ContinuityRow>> {
    if eps_list.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
        return Err(Error::Parameter("perturbation sizes must be finite and nonnegative".into()));
    }
    if eps_list.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Parameter("perturbation sizes must be decreasing".into()));
    }
    let base = extremal_bounds(k, f, ExtremalKind::InnerMaxPhi, cfg)?;
    let smooth = k.to_support_body(cfg)?;
    let (base_lower, base_upper) = (base.lower.as_f64(), base.upper.as_f64());
    let rho = k.min_support();
    let nf = k.dim() as f64;
    let grid = smooth.grid();
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let mut row = ContinuityRow {
            eps,
            rho,
            base_lower,
            base_upper,
            hausdorff: None,
            lower: None,
            upper: None,
            shrink: None,
            grow: None,
            gap: None,
            note: None,
        };
        let perturbed = if eps == 0.0 {
            Ok(k.clone())
        } else {
            let samples: Vec<f64> = smooth
                .samples()
                .iter()
                .enumerate()
                .map(|(j, h)| h + eps * (0.75 + 0.25 * (2.0 * (grid_angle(j, grid) - PHASE)).cos()))
                .collect();
            SupportBody2D::from_samples(samples, cfg.curvature_floor)
                .and_then(|s| ConvexBody::Support(s).recenter(cfg))
        };
        let ke = match perturbed {
            Ok(b) => b,
            Err(e) => {
                row.note = Some(format!("skipped: {e}"));
                rows.push(row);
                continue;
            }
        };
        let d = k.hausdorff(&ke, cfg)?;
        let b = extremal_bounds(&ke, f, ExtremalKind::InnerMaxPhi, cfg)?;
        let (lo, up) = (b.lower.as_f64(), b.upper.as_f64());
        let delta = d.max(eps);
        row.hausdorff = Some(d);
        row.lower = Some(lo);
        row.upper = Some(up);
        row.shrink = Some([(1.0 + delta / rho).powf(-nf) * lo, base_upper]);
        row.grow = Some([base_lower, (1.0 + 10.0 * delta / rho).powf(nf) * up]);
        row.gap = Some((lo - base_lower).abs().max((up - base_upper).abs()));
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn disk_sandwich_and_zero_perturbation() {
        let cfg = QuadratureConfig::default();
        let b = ConvexBody::ball(2, 1.0).unwrap();
        let f = AdmissibleFunction::arctan(2).unwrap();
        let rows = continuity_probe(&b, &f, &[0.1, 0.0], &cfg).unwrap();
        let r = &rows[0];
        // the profile is centrally symmetric, so the disk stays centered and
        // only the grid misses the peak
        assert!((r.hausdorff.unwrap() - 0.1).abs() < 1e-5);
        let target = PI / 4.0 * 2.0 * PI;
        assert!(r.lower.unwrap() >= 1.1f64.powi(-2) * target);
        assert!(r.upper.unwrap() <= 4.0 * target);
        let s = r.shrink.unwrap();
        let g = r.grow.unwrap();
        assert!(s[0] <= s[1] && g[0] <= g[1]);
        assert_eq!(rows[1].gap, Some(0.0));
    }

    #[test]
    fn rejects_increasing_sizes() {
        let cfg = QuadratureConfig::default();
        let b = ConvexBody::ball(2, 1.0).unwrap();
        let f = AdmissibleFunction::arctan(2).unwrap();
        assert!(continuity_probe(&b, &f, &[0.1, 0.2], &cfg).is_err());
    }
}
