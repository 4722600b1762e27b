//! Product inequalities for a body and its polar, checked on the sound side
//! of each certified interval.

use super::bounds::{extremal_bounds_with, inner_max_bounds, outer_min_bounds, CENTER_TOL};
use super::ExtremalKind;
use crate::config::QuadratureConfig;
use crate::error::{Error, Result};
use crate::funclass::{classify, AdmissibleFunction, FunctionClassReport, Kind, DEFAULT_TOL};
use crate::geometry::ConvexBody;
use crate::numeric::unit_sphere_area;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// Constant in the inverse Santaló inequality.
pub const SANTALO_C: f64 = 0.5;
/// Relative slack for certificate rows.
const ROW_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// `IS_φ(K) IS_φ(K°) ≤ IS_φ(B_n)²` for submultiplicative `φ ∈ Conc⁻`.
    BsType,
    /// `os_ψ(K) os_ψ(K°) ≥ cⁿ ψ(s)ψ(t)/ψ(1)² · os_ψ(B_n)²`.
    InverseSantalo,
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bs_type" | "BS_type" => Ok(Theorem::BsType),
            "inverse_santalo" => Ok(Theorem::InverseSantalo),
            _ => Err(Error::Parameter(format!("unknown theorem `{s}`"))),
        }
    }
}

/// One checked inequality; `margin ≥ 0` means it holds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRow {
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

impl CertificateRow {
    fn le(check: &str, lhs: f64, rhs: f64) -> Self {
        Self::with_margin(check, lhs, rhs, rhs - lhs)
    }

    fn ge(check: &str, lhs: f64, rhs: f64) -> Self {
        Self::with_margin(check, lhs, rhs, lhs - rhs)
    }

    fn with_margin(check: &str, lhs: f64, rhs: f64, margin: f64) -> Self {
        CertificateRow {
            check: check.to_string(),
            lhs,
            rhs,
            margin,
            pass: margin >= -ROW_SLACK * rhs.abs().max(lhs.abs()),
        }
    }
}

pub fn product_certificates(
    k: &ConvexBody,
    f: &AdmissibleFunction,
    theorem: Theorem,
    cfg: &QuadratureConfig,
) -> Result<Vec<CertificateRow>> {
    let report = classify(f, k.dim(), DEFAULT_TOL)?;
    product_certificates_with(k, f, theorem, &report, cfg)
}

/// [`product_certificates`] with a precomputed classification of `f`.
pub fn product_certificates_with(
    k: &ConvexBody,
    f: &AdmissibleFunction,
    theorem: Theorem,
    report: &FunctionClassReport,
    cfg: &QuadratureConfig,
) -> Result<Vec<CertificateRow>> {
    if !k.is_centered(CENTER_TOL) {
        return Err(Error::Uncentered(k.moments().centroid_norm()));
    }
    certificate_rows(k, &k.polar(cfg)?, f, theorem, report, cfg)
}

/// Rows for a centered `k` whose polar is already known.
pub(crate) fn certificate_rows(
    k: &ConvexBody,
    polar: &ConvexBody,
    f: &AdmissibleFunction,
    theorem: Theorem,
    report: &FunctionClassReport,
    cfg: &QuadratureConfig,
) -> Result<Vec<CertificateRow>> {
    let n = k.dim();
    let flags = report.flags();
    let vk = k.vrad();
    let vp = polar.vrad();
    let nf = n as f64;
    let s = vk.powf(-2.0 * nf);
    let t = vp.powf(-2.0 * nf);
    let sphere = unit_sphere_area(n);
    match theorem {
        Theorem::BsType => {
            if f.kind() != Kind::Concave || !flags.in_conc_minus {
                return Err(Error::ClassMismatch(format!(
                    "the Blaschke–Santaló-type product needs φ ∈ Conc⁻; {} is not",
                    f.name()
                )));
            }
            if !report.submultiplicative {
                return Err(Error::ClassMismatch(format!(
                    "{} is not submultiplicative: max φ(t)φ(1/t) = {} at t = {} exceeds φ(1)²",
                    f.name(),
                    report.submult_max,
                    report.submult_argmax
                )));
            }
            let own = extremal_bounds_with(k, f, ExtremalKind::InnerMaxPhi, &flags, cfg)?;
            // OS_{φ*}(K) = IS_φ(K°)
            let dual = inner_max_bounds(polar, f, cfg)?;
            let ball = f.eval(1.0) * sphere;
            let f1 = f.eval(1.0);
            Ok(vec![
                CertificateRow::le("bs_is_product", own.upper.as_f64() * dual.upper.as_f64(), ball * ball),
                CertificateRow::le(
                    "bs_inner_inequality",
                    f.eval(s) / s.sqrt() * (f.eval(t) / t.sqrt()),
                    f1 * f1,
                ),
                CertificateRow::ge("bs_santalo_st", s * t, 1.0),
            ])
        }
        Theorem::InverseSantalo => {
            if f.kind() != Kind::Convex || !flags.in_conv {
                return Err(Error::ClassMismatch(format!(
                    "the inverse Santaló-type product needs ψ ∈ Conv; {} is not",
                    f.name()
                )));
            }
            let own = extremal_bounds_with(k, f, ExtremalKind::OuterMinPsi, &flags, cfg)?;
            // is*_ψ(K) = os_ψ(K°)
            let dual = outer_min_bounds(polar, f, cfg)?;
            let c = SANTALO_C.powi(n as i32);
            let ball = f.eval(1.0) * sphere;
            let rhs = c * f.eval(s) * f.eval(t) / (f.eval(1.0) * f.eval(1.0)) * ball * ball;
            let volumes = k.moments().volume * polar.moments().volume;
            let vb = crate::numeric::unit_ball_volume(n);
            Ok(vec![
                CertificateRow::ge("inverse_santalo_os_product", own.lower.as_f64() * dual.lower.as_f64(), rhs),
                CertificateRow::ge("inverse_santalo_volume_product", volumes, c * vb * vb),
            ])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ball_has_zero_bs_margin() {
        let cfg = QuadratureConfig::default();
        let b = ConvexBody::ball(2, 1.0).unwrap();
        let phi = AdmissibleFunction::arctan(2).unwrap();
        let rows = product_certificates(&b, &phi, Theorem::BsType, &cfg).unwrap();
        assert_eq!(rows[0].margin, 0.0);
        assert!(rows.iter().all(|r| r.pass));
    }

    #[test]
    fn ellipse_bs_product() {
        let cfg = QuadratureConfig::default();
        let e = ConvexBody::ellipse(2.0, 0.5, 0.0).unwrap();
        let phi = AdmissibleFunction::arctan(2).unwrap();
        let rows = product_certificates(&e, &phi, Theorem::BsType, &cfg).unwrap();
        let rhs = (PI / 4.0 * 2.0 * PI).powi(2);
        assert!((rows[0].rhs - rhs).abs() < 1e-12 * rhs);
        assert!(rows[0].lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn refusals() {
        let cfg = QuadratureConfig::default();
        let b = ConvexBody::ball(2, 1.0).unwrap();
        let psi = AdmissibleFunction::power_psi(2, -1.0).unwrap();
        assert!(product_certificates(&b, &psi, Theorem::BsType, &cfg).is_err());
        let phi = AdmissibleFunction::power_phi(2, 1.0).unwrap();
        assert!(product_certificates(&b, &phi, Theorem::InverseSantalo, &cfg).is_err());
        let rows = product_certificates(&b, &psi, Theorem::InverseSantalo, &cfg).unwrap();
        assert!(rows.iter().all(|r| r.pass && r.margin > 0.0));
    }
}
