//! Certified intervals for the finite extremal functionals.

use super::ellipse::{best_circumscribed_ellipse, best_inscribed_ellipse, EllipseFit};
use super::{classify_trivial, reduce_phi, ExtremalKind, TrivialClass};
use crate::asa::{ball_value, eval_asa};
use crate::config::QuadratureConfig;
use crate::error::{Error, Result};
use crate::funclass::{AdmissibleFunction, ClassFlags};
use crate::geometry::ConvexBody;
use crate::numeric::Extended;
use serde::{Deserialize, Serialize};

/// Relative tolerance for the centroid test on inputs.
pub(crate) const CENTER_TOL: f64 = 1e-8;
/// Relative overlap of lower over upper tolerated as rounding.
const CROSSING_TOL: f64 = 1e-9;

/// Where an interval endpoint comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Exact value for balls and ellipsoids.
    ClosedForm,
    /// Affine isoperimetric bound through the volume radius.
    IsoperimetricBound,
    /// The functional evaluated at the body itself.
    BodyValue,
    InscribedEllipse,
    CircumscribedEllipse,
    OptimizerWitness,
    /// Identically zero or infinite.
    Symbolic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Endpoint {
    pub value: Extended,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Endpoint {
    fn new(value: f64, provenance: Provenance, detail: Option<String>) -> Self {
        Endpoint {
            value: Extended::from_f64(value),
            provenance,
            detail,
        }
    }

    pub fn as_f64(&self) -> f64 {
        self.value.as_f64()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsInterval {
    pub kind: ExtremalKind,
    pub function: String,
    pub lower: Endpoint,
    pub upper: Endpoint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<TrivialClass>,
}

impl BoundsInterval {
    /// `(upper − lower)/upper`, zero for symbolic intervals.
    pub fn relative_width(&self) -> f64 {
        match (self.lower.value, self.upper.value) {
            (Extended::Finite(l), Extended::Finite(u)) => (u - l) / u,
            (Extended::Zero, Extended::Zero) | (Extended::Infinite, Extended::Infinite) => 0.0,
            _ => f64::INFINITY,
        }
    }

    fn symbolic(kind: ExtremalKind, f: &AdmissibleFunction, class: TrivialClass) -> Self {
        let value = if class == TrivialClass::Zero { Extended::Zero } else { Extended::Infinite };
        let end = Endpoint {
            value,
            provenance: Provenance::Symbolic,
            detail: None,
        };
        BoundsInterval {
            kind,
            function: f.name(),
            lower: end.clone(),
            upper: end,
            symbolic: Some(class),
        }
    }

    /// Replace the lower endpoint if `cand` improves it (inner-maximal kinds).
    pub(crate) fn raise_lower(&mut self, cand: Endpoint) {
        if cand.as_f64() > self.lower.as_f64() {
            self.lower = cand;
        }
    }

    /// Replace the upper endpoint if `cand` improves it (outer-minimal kinds).
    pub(crate) fn lower_upper(&mut self, cand: Endpoint) {
        if cand.as_f64() < self.upper.as_f64() {
            self.upper = cand;
        }
    }

    /// Rejects crossed endpoints beyond rounding and clamps the rest.
    pub(crate) fn settle(mut self) -> Result<Self> {
        let (l, u) = (self.lower.as_f64(), self.upper.as_f64());
        if l > u {
            if l - u > CROSSING_TOL * u.abs().max(1e-300) {
                return Err(Error::InternalConsistency(format!(
                    "{} interval for {} is crossed: lower {l} > upper {u}",
                    self.kind, self.function
                )));
            }
            self.lower.value = self.upper.value;
        }
        Ok(self)
    }
}

/// Certified interval for `kind` at `k`.
///
/// Kinds that are identically 0 or ∞ return a symbolic interval. The finite
/// kinds `IS_phi`, `OS_phi_star`, `os_psi` and `is_star_psi` are reduced to an
/// inner-maximal φ-bound or an outer-minimal ψ-bound of `k` or of its polar.
pub fn extremal_bounds(
    k: &ConvexBody,
    f: &AdmissibleFunction,
    kind: ExtremalKind,
    cfg: &QuadratureConfig,
) -> Result<BoundsInterval> {
    let flags = f.class_flags(k.dim())?;
    extremal_bounds_with(k, f, kind, &flags, cfg)
}

/// [`extremal_bounds`] with precomputed class flags.
pub(crate) fn extremal_bounds_with(
    k: &ConvexBody,
    f: &AdmissibleFunction,
    kind: ExtremalKind,
    flags: &ClassFlags,
    cfg: &QuadratureConfig,
) -> Result<BoundsInterval> {
    cfg.validate()?;
    let class = classify_trivial(kind, f, flags)?;
    match class {
        TrivialClass::Zero | TrivialClass::Infinite => return Ok(BoundsInterval::symbolic(kind, f, class)),
        TrivialClass::Unresolved => {
            return Err(Error::Unsupported(format!(
                "{kind} for {} is neither provably finite nor infinite",
                f.name()
            )))
        }
        TrivialClass::Finite => {}
    }
    if !k.is_centered(CENTER_TOL) {
        return Err(Error::Uncentered(k.moments().centroid_norm()));
    }
    let mut out = if kind.is_psi() {
        let target = if kind == ExtremalKind::InnerMinStarPsi { k.polar(cfg)? } else { k.clone() };
        outer_min_bounds(&target, f, cfg)?
    } else {
        let red = reduce_phi(kind, flags)?;
        let base = if red.given_is_dual { f.dual() } else { f.clone() };
        let target = if red.outer { k.polar(cfg)? } else { k.clone() };
        inner_max_bounds(&target, &base, cfg)?
    };
    out.kind = kind;
    out.function = f.name();
    Ok(out)
}

fn ellipse_detail(fit: &EllipseFit) -> String {
    let a = fit.ellipse.axes();
    format!("ellipse(a={:.12},b={:.12},angle={:.12})", a[0], a[1], fit.angle)
}

fn closed_form(body: &ConvexBody, f: &AdmissibleFunction, kind: ExtremalKind) -> BoundsInterval {
    let v = ball_value(body.dim(), body.vrad(), f);
    let end = Endpoint::new(v, Provenance::ClosedForm, Some(body.describe()));
    BoundsInterval {
        kind,
        function: f.name(),
        lower: end.clone(),
        upper: end,
        symbolic: None,
    }
}

/// `IS_φ(L)` for `φ ∈ Conc⁻`. `L` need not be centered: inscribed
/// competitors are centered by definition, and only the body-value lower
/// bound needs `L` itself to be centered.
pub(crate) fn inner_max_bounds(l: &ConvexBody, phi: &AdmissibleFunction, cfg: &QuadratureConfig) -> Result<BoundsInterval> {
    if matches!(l, ConvexBody::Ball { .. } | ConvexBody::Ellipsoid(_)) {
        return Ok(closed_form(l, phi, ExtremalKind::InnerMaxPhi));
    }
    let upper = Endpoint::new(ball_value(l.dim(), l.vrad(), phi), Provenance::IsoperimetricBound, None);
    let r = l.min_support();
    let mut out = BoundsInterval {
        kind: ExtremalKind::InnerMaxPhi,
        function: phi.name(),
        lower: Endpoint::new(ball_value(2, r, phi), Provenance::InscribedEllipse, Some(format!("disk(r={r:.12})"))),
        upper,
        symbolic: None,
    };
    let fit = best_inscribed_ellipse(l)?;
    out.raise_lower(Endpoint::new(
        ball_value(2, fit.vrad(), phi),
        Provenance::InscribedEllipse,
        Some(ellipse_detail(&fit)),
    ));
    if l.is_centered(CENTER_TOL) {
        let v = eval_asa(l, phi, cfg)?;
        out.raise_lower(Endpoint::new(v.as_f64(), Provenance::BodyValue, None));
    }
    out.settle()
}

/// `os_ψ(L)` for `ψ ∈ Conv`, the mirror image of [`inner_max_bounds`].
pub(crate) fn outer_min_bounds(l: &ConvexBody, psi: &AdmissibleFunction, cfg: &QuadratureConfig) -> Result<BoundsInterval> {
    if matches!(l, ConvexBody::Ball { .. } | ConvexBody::Ellipsoid(_)) {
        return Ok(closed_form(l, psi, ExtremalKind::OuterMinPsi));
    }
    let lower = Endpoint::new(ball_value(l.dim(), l.vrad(), psi), Provenance::IsoperimetricBound, None);
    let r = l.max_support();
    let mut out = BoundsInterval {
        kind: ExtremalKind::OuterMinPsi,
        function: psi.name(),
        lower,
        upper: Endpoint::new(ball_value(2, r, psi), Provenance::CircumscribedEllipse, Some(format!("disk(r={r:.12})"))),
        symbolic: None,
    };
    let fit = best_circumscribed_ellipse(l)?;
    out.lower_upper(Endpoint::new(
        ball_value(2, fit.vrad(), psi),
        Provenance::CircumscribedEllipse,
        Some(ellipse_detail(&fit)),
    ));
    if l.is_centered(CENTER_TOL) {
        let v = eval_asa(l, psi, cfg)?;
        out.lower_upper(Endpoint::new(v.as_f64(), Provenance::BodyValue, None));
    }
    out.settle()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BodySpec;
    use std::f64::consts::PI;

    fn square(cfg: &QuadratureConfig) -> ConvexBody {
        ConvexBody::from_spec(
            &BodySpec::Polygon {
                vertices: vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]],
            },
            cfg,
        )
        .unwrap()
    }

    #[test]
    fn ball_interval_is_a_point() {
        let cfg = QuadratureConfig::default();
        let phi = AdmissibleFunction::power_phi(2, 1.0).unwrap();
        let b = extremal_bounds(&ConvexBody::ball(2, 1.0).unwrap(), &phi, ExtremalKind::InnerMaxPhi, &cfg).unwrap();
        assert_eq!(b.lower.as_f64(), 2.0 * PI);
        assert_eq!(b.upper.as_f64(), 2.0 * PI);
        let psi = AdmissibleFunction::power_psi(2, -1.0).unwrap();
        let o = extremal_bounds(&ConvexBody::ball(2, 1.0).unwrap(), &psi, ExtremalKind::OuterMinPsi, &cfg).unwrap();
        assert_eq!(o.lower.as_f64(), psi.eval(1.0) * 2.0 * PI);
        assert_eq!(o.upper.as_f64(), o.lower.as_f64());
    }

    #[test]
    fn square_upper_bound() {
        let cfg = QuadratureConfig::default();
        let phi = AdmissibleFunction::power_phi(2, 1.0).unwrap();
        let b = extremal_bounds(&square(&cfg), &phi, ExtremalKind::InnerMaxPhi, &cfg).unwrap();
        let want = 2.0 * PI * (4.0 / PI).powf(1.0 / 3.0);
        assert!((b.upper.as_f64() - want).abs() < 1e-12 * want);
        assert!((want - 6.8100).abs() < 1e-4);
        // the incircle is the best inscribed ellipse
        assert!((b.lower.as_f64() - 2.0 * PI).abs() < 1e-8);
        assert_eq!(b.upper.provenance, Provenance::IsoperimetricBound);
    }

    #[test]
    fn sampled_ellipse_interval_is_tight() {
        let cfg = QuadratureConfig::default();
        let e = ConvexBody::ellipse(2.0, 0.5, 0.0).unwrap();
        let s = ConvexBody::Support(e.to_support_body(&cfg).unwrap());
        let phi = AdmissibleFunction::arctan(2).unwrap();
        let b = extremal_bounds(&s, &phi, ExtremalKind::InnerMaxPhi, &cfg).unwrap();
        assert!(b.relative_width() <= 1e-6, "{b:?}");
        // OS_{φ*}(E) = IS_φ(E°) and E° is again an ellipse
        let star = extremal_bounds(&s, &phi, ExtremalKind::OuterMaxPhiStar, &cfg).unwrap();
        assert!(star.relative_width() <= 1e-6, "{star:?}");
        // IS_{(φ*)*} = IS_φ, reached from the Conc⁺ side
        let back = extremal_bounds(&s, &phi.dual(), ExtremalKind::InnerMaxPhiStar, &cfg).unwrap();
        assert!((back.upper.as_f64() - b.upper.as_f64()).abs() < 1e-12 * b.upper.as_f64());
    }

    #[test]
    fn symbolic_and_rejected_cases() {
        let cfg = QuadratureConfig::default();
        let phi = AdmissibleFunction::power_phi(2, 1.0).unwrap();
        let k = ConvexBody::ball(2, 1.0).unwrap();
        let z = extremal_bounds(&k, &phi, ExtremalKind::InnerMinPhi, &cfg).unwrap();
        assert_eq!(z.symbolic, Some(TrivialClass::Zero));
        assert_eq!(z.upper.value, Extended::Zero);
        let i = extremal_bounds(&k, &phi, ExtremalKind::OuterMaxPhi, &cfg).unwrap();
        assert_eq!(i.lower.value, Extended::Infinite);
        let off = ConvexBody::from_spec(&BodySpec::Fourier { c0: 1.0, cos: vec![0.2], sin: vec![] }, &cfg).unwrap();
        assert!(matches!(
            extremal_bounds(&off, &phi, ExtremalKind::InnerMaxPhi, &cfg),
            Err(Error::Uncentered(_))
        ));
    }
}
