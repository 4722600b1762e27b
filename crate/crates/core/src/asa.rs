//! General L_φ / L_ψ affine surface areas and their L_p specializations.
//!
//! For a planar support body the boundary integral is taken in support
//! coordinates: with `κ = 1/ρ`, `⟨x, N⟩ = h` and `dμ = ρ dθ`,
//! `as_f(K) = ∫ f(1/(ρ h³)) h ρ dθ`, integrated by the periodic trapezoid
//! rule.

use crate::config::{DiffScheme, QuadratureConfig};
use crate::error::{Error, Result};
use crate::funclass::{AdmissibleFunction, BoundaryValue, FunctionSpec};
use crate::geometry::{grid_angle, ConvexBody, SupportBody2D};
use crate::numeric::{unit_ball_volume, unit_sphere_area, Extended};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Quadrature,
    BallClosedForm,
    EllipsoidClosedForm,
    PolytopeConvention,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsaValue {
    pub value: Extended,
    pub route: Route,
    /// `|Q_N − Q_{N/2}|` for quadrature values.
    #[serde(rename = "err", default, skip_serializing_if = "Option::is_none")]
    pub estimated_error: Option<f64>,
}

impl AsaValue {
    fn closed(value: f64, route: Route) -> Self {
        AsaValue {
            value: Extended::from_f64(value),
            route,
            estimated_error: None,
        }
    }

    pub fn as_f64(&self) -> f64 {
        self.value.as_f64()
    }
}

/// `as_f(rB_n) = rⁿ f(r^{−2n}) |∂B_n|`.
pub fn ball_value(n: usize, r: f64, f: &AdmissibleFunction) -> f64 {
    let nf = n as f64;
    r.powi(n as i32) * f.eval(r.powf(-2.0 * nf)) * unit_sphere_area(n)
}

pub fn eval_asa(body: &ConvexBody, f: &AdmissibleFunction, cfg: &QuadratureConfig) -> Result<AsaValue> {
    cfg.validate()?;
    let n = body.dim();
    match body {
        ConvexBody::Ball { r, .. } => Ok(AsaValue::closed(checked(ball_value(n, *r, f))?, Route::BallClosedForm)),
        // SL(n) invariance reduces an ellipsoid to the ball of equal volume
        ConvexBody::Ellipsoid(_) => Ok(AsaValue::closed(
            checked(ball_value(n, body.vrad(), f))?,
            Route::EllipsoidClosedForm,
        )),
        ConvexBody::Polygon(_) => {
            // κ = 0 almost everywhere, so the integrand is f(0)·⟨x, N⟩
            let value = match f.value_at_zero() {
                BoundaryValue::Zero => Extended::Zero,
                BoundaryValue::Infinite => Extended::Infinite,
                BoundaryValue::Finite(c) => Extended::from_f64(c * n as f64 * body.moments().volume),
            };
            Ok(AsaValue {
                value,
                route: Route::PolytopeConvention,
                estimated_error: None,
            })
        }
        ConvexBody::Support(s) => {
            let (q, err) = support_quadrature(s, cfg, |h, rho| f.eval(1.0 / (rho * h * h * h)) * h * rho)?;
            Ok(AsaValue {
                value: Extended::from_f64(q),
                route: Route::Quadrature,
                estimated_error: Some(err),
            })
        }
    }
}

fn checked(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Quadrature(format!("evaluator produced {x}")))
    }
}

/// Periodic trapezoid rule for `∫ g(h, ρ) dθ` on the configured grid, with
/// the difference to the half grid as error estimate.
pub fn support_quadrature(
    body: &SupportBody2D,
    cfg: &QuadratureConfig,
    g: impl Fn(f64, f64) -> f64,
) -> Result<(f64, f64)> {
    let n = cfg.grid;
    let (h, d2) = match cfg.scheme {
        DiffScheme::Spectral => {
            let (h, _, d2) = body.series().sample3(n);
            (h, d2)
        }
        DiffScheme::FiniteDifference4 => {
            let h = if body.grid() == n {
                body.samples().to_vec()
            } else {
                body.series().sample(n)
            };
            let d2 = second_derivative_fd4(&h);
            (h, d2)
        }
    };
    let (mut full, mut half) = (0.0, 0.0);
    for k in 0..n {
        let rho = h[k] + d2[k];
        if !(rho >= cfg.curvature_floor) {
            return Err(Error::Quadrature(format!(
                "curvature radius {rho:e} below floor at θ = {}",
                grid_angle(k, n)
            )));
        }
        let v = g(h[k], rho);
        if !v.is_finite() {
            return Err(Error::Quadrature(format!("integrand is {v} at θ = {}", grid_angle(k, n))));
        }
        full += v;
        if k % 2 == 0 {
            half += v;
        }
    }
    let full = full * 2.0 * PI / n as f64;
    let half = half * 4.0 * PI / n as f64;
    Ok((full, (full - half).abs()))
}

/// Fourth-order centered periodic second differences.
pub fn second_derivative_fd4(h: &[f64]) -> Vec<f64> {
    let n = h.len();
    let dt = 2.0 * PI / n as f64;
    let at = |k: isize| h[k.rem_euclid(n as isize) as usize];
    (0..n as isize)
        .map(|k| {
            (-at(k + 2) + 16.0 * at(k + 1) - 30.0 * at(k) + 16.0 * at(k - 1) - at(k - 2)) / (12.0 * dt * dt)
        })
        .collect()
}

/// The power integrand `t^{p/(n+p)}` for a finite `p ≠ −n`.
pub fn lp_function(n: usize, p: f64) -> Result<AdmissibleFunction> {
    let nf = n as f64;
    if !p.is_finite() {
        return Err(Error::Parameter("p = ±∞ has no power integrand".into()));
    }
    if (nf + p).abs() < 1e-6 {
        return Err(Error::Parameter(format!("p = {p} is too close to −n")));
    }
    let spec = if p >= 0.0 {
        FunctionSpec::PowerPhi { n, p }
    } else if p > -nf {
        FunctionSpec::PowerPsi { n, p }
    } else {
        FunctionSpec::Power { alpha: p / (nf + p) }
    };
    AdmissibleFunction::builtin(spec)
}

/// Homogeneity degree `n(n−p)/(n+p)`, which tends to `−n` as `p → ±∞`.
pub fn lp_degree(n: usize, p: f64) -> f64 {
    let nf = n as f64;
    if p.is_infinite() {
        -nf
    } else {
        nf * (nf - p) / (nf + p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpEvaluation {
    pub value: AsaValue,
    /// `n|K°|`, reported next to `as_{±∞}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polar_identity: Option<f64>,
}

pub fn eval_lp(body: &ConvexBody, p: f64, cfg: &QuadratureConfig) -> Result<LpEvaluation> {
    let n = body.dim();
    if p.is_nan() {
        return Err(Error::Parameter("p is NaN".into()));
    }
    if p.is_finite() {
        let f = lp_function(n, p)?;
        return Ok(LpEvaluation {
            value: eval_asa(body, &f, cfg)?,
            polar_identity: None,
        });
    }
    let nf = n as f64;
    let value = match body {
        // κ/⟨x,N⟩ⁿ dμ = h^{−n} dσ on the sphere
        ConvexBody::Ball { r, .. } => AsaValue::closed(unit_sphere_area(n) * r.powf(-nf), Route::BallClosedForm),
        ConvexBody::Ellipsoid(e) => {
            let polar_volume = unit_ball_volume(n) / e.axes().iter().product::<f64>();
            AsaValue::closed(nf * polar_volume, Route::EllipsoidClosedForm)
        }
        ConvexBody::Polygon(_) => AsaValue {
            value: Extended::Zero,
            route: Route::PolytopeConvention,
            estimated_error: None,
        },
        ConvexBody::Support(s) => {
            let (q, err) = support_quadrature(s, cfg, |h, _| h.powi(-2))?;
            AsaValue {
                value: Extended::from_f64(q),
                route: Route::Quadrature,
                estimated_error: Some(err),
            }
        }
    };
    let polar_identity = nf * body.polar(cfg)?.moments().volume;
    Ok(LpEvaluation {
        value,
        polar_identity: Some(polar_identity),
    })
}

/// `as_p(λK) / (λ^{n(n−p)/(n+p)} as_p(K))`.
pub fn homogeneity_check(body: &ConvexBody, p: f64, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Parameter(format!("λ must be positive, got {lambda}")));
    }
    if lambda == 1.0 {
        return Ok(1.0);
    }
    let scaled = body.transform(crate::geometry::Transform::Scale(lambda), cfg)?;
    let a = eval_lp(&scaled, p, cfg)?.value.as_f64();
    let b = eval_lp(body, p, cfg)?.value.as_f64();
    Ok(a / (lambda.powf(lp_degree(body.dim(), p)) * b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BodySpec, TrigSeries};

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn disk_as_support(r: f64) -> ConvexBody {
        ConvexBody::Support(SupportBody2D::from_series(TrigSeries::constant(r), 1024, 1e-8).unwrap())
    }

    #[test]
    fn ball_examples() {
        let c = cfg();
        let phi = AdmissibleFunction::power_phi(2, 1.0).unwrap();
        let v = eval_asa(&ConvexBody::ball(2, 1.0).unwrap(), &phi, &c).unwrap();
        assert!((v.as_f64() - 2.0 * PI).abs() < 1e-14);
        assert_eq!(v.route, Route::BallClosedForm);
        let psi = AdmissibleFunction::power_psi(2, -1.0).unwrap();
        let v = eval_asa(&ConvexBody::ball(2, 2.0).unwrap(), &psi, &c).unwrap();
        assert!((v.as_f64() - 128.0 * PI).abs() < 1e-11);
        let q = eval_asa(&disk_as_support(2.0), &psi, &c).unwrap();
        assert!((q.as_f64() - 128.0 * PI).abs() < 1e-10 * 128.0 * PI);
        assert!(q.estimated_error.unwrap() < 1e-10);
    }

    #[test]
    fn polygon_conventions() {
        let c = cfg();
        let sq = ConvexBody::from_spec(
            &BodySpec::Polygon {
                vertices: vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]],
            },
            &c,
        )
        .unwrap();
        let phi = AdmissibleFunction::power_phi(2, 1.0).unwrap();
        let psi = AdmissibleFunction::log_recip();
        assert_eq!(eval_asa(&sq, &phi, &c).unwrap().value, Extended::Zero);
        assert_eq!(eval_asa(&sq, &psi, &c).unwrap().value, Extended::Infinite);
        // p = 0 integrates ⟨x, N⟩ against the boundary measure
        assert_eq!(eval_lp(&sq, 0.0, &c).unwrap().value.value, Extended::Finite(8.0));
    }

    #[test]
    fn sampled_ellipse_matches_reduction() {
        // quadrature on a finer grid serves as the oracle
        let fine = QuadratureConfig::with_grid(8192).unwrap();
        let e = ConvexBody::ellipse(2.0, 0.5, 0.0).unwrap();
        let s = ConvexBody::Support(e.to_support_body(&fine).unwrap());
        let phi = AdmissibleFunction::power_phi(2, 1.0).unwrap();
        let q = eval_asa(&s, &phi, &fine).unwrap().as_f64();
        assert!((q - 2.0 * PI).abs() < 1e-10);
        assert!((eval_asa(&e, &phi, &cfg()).unwrap().as_f64() - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn lp_examples() {
        let c = cfg();
        let b = ConvexBody::ball(2, 1.0).unwrap();
        assert!((eval_lp(&b, 1.0, &c).unwrap().value.as_f64() - 2.0 * PI).abs() < 1e-14);
        let k = ConvexBody::from_spec(&BodySpec::Fourier { c0: 1.0, cos: vec![0.0, 0.1], sin: vec![0.0, 0.0, 0.03] }, &c)
            .unwrap();
        let area = k.moments().volume;
        assert!((eval_lp(&k, 0.0, &c).unwrap().value.as_f64() - 2.0 * area).abs() < 1e-12);
        let e = ConvexBody::ellipse(2.0, 0.5, 0.0).unwrap();
        let inf = eval_lp(&e, f64::INFINITY, &c).unwrap();
        assert!((inf.value.as_f64() - 2.0 * PI).abs() < 1e-13);
        assert!((inf.polar_identity.unwrap() - 2.0 * PI).abs() < 1e-13);
        assert!(eval_lp(&b, -2.0, &c).is_err());
        assert!(eval_lp(&b, -2.0 + 1e-7, &c).is_err());
    }

    #[test]
    fn homogeneity_examples() {
        let c = cfg();
        let b = ConvexBody::ball(2, 1.0).unwrap();
        assert!((homogeneity_check(&b, 1.0, 2.0, &c).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(homogeneity_check(&b, 1.0, 1.0, &c).unwrap(), 1.0);
    }

    #[test]
    fn finite_differences_agree_with_spectral_on_smooth_body() {
        let mut c = cfg();
        let k = ConvexBody::from_spec(&BodySpec::Fourier { c0: 1.0, cos: vec![0.0, 0.1], sin: vec![0.0, 0.05] }, &c)
            .unwrap();
        let phi = AdmissibleFunction::arctan(2).unwrap();
        let spectral = eval_asa(&k, &phi, &c).unwrap().as_f64();
        c.scheme = DiffScheme::FiniteDifference4;
        let fd = eval_asa(&k, &phi, &c).unwrap().as_f64();
        assert!((spectral - fd).abs() < 1e-7 * spectral);
    }
}
