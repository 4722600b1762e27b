//! The tagged body type, its JSON spec, and the geometric primitives.

use super::ellipsoid::EllipsoidN;
use super::polygon::Polygon2D;
use super::random::random_smooth_body;
use super::support::SupportBody2D;
use super::trig::{grid_angle, TrigSeries};
use crate::config::QuadratureConfig;
use crate::error::{Error, Result};
use crate::numeric::unit_ball_volume;
use serde::{Deserialize, Serialize};

/// Convex body with the origin in its interior.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexBody {
    Ball { n: usize, r: f64 },
    Ellipsoid(EllipsoidN),
    Support(SupportBody2D),
    Polygon(Polygon2D),
}

fn default_kmax() -> usize {
    6
}

fn default_alpha() -> f64 {
    0.25
}

/// JSON body spec. For Fourier specs `cos[i]` and `sin[i]` multiply
/// `cos((i+1)θ)` and `sin((i+1)θ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BodySpec {
    Ball {
        n: usize,
        radius: f64,
    },
    Ellipsoid {
        n: usize,
        axes: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rotation_angle: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rotation: Option<Vec<Vec<f64>>>,
    },
    Fourier {
        c0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Random {
        seed: u64,
        #[serde(default = "default_kmax")]
        kmax: usize,
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
}

impl BodySpec {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("body specs serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricMoments {
    pub volume: f64,
    pub centroid: Vec<f64>,
    pub vrad: f64,
}

impl GeometricMoments {
    fn new(n: usize, volume: f64, centroid: Vec<f64>) -> Self {
        GeometricMoments {
            volume,
            centroid,
            vrad: (volume / unit_ball_volume(n)).powf(1.0 / n as f64),
        }
    }

    pub fn centroid_norm(&self) -> f64 {
        self.centroid.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Linear maps accepted by [`ConvexBody::transform`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Transform {
    Scale(f64),
    /// Row-major 2×2 matrix with determinant 1.
    Unimodular([[f64; 2]; 2]),
}

impl ConvexBody {
    pub fn from_spec(spec: &BodySpec, cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        match spec {
            BodySpec::Ball { n, radius } => Self::ball(*n, *radius),
            BodySpec::Ellipsoid {
                n,
                axes,
                rotation_angle,
                rotation,
            } => {
                if axes.len() != *n {
                    return Err(Error::DimensionMismatch(axes.len(), *n));
                }
                let e = match (rotation_angle, rotation) {
                    (Some(_), Some(_)) => {
                        return Err(Error::Parameter(
                            "give either rotation_angle or rotation, not both".into(),
                        ))
                    }
                    (Some(t), None) => {
                        if *n != 2 {
                            return Err(Error::Parameter(
                                "rotation_angle applies to planar ellipses only".into(),
                            ));
                        }
                        EllipsoidN::planar(axes[0], axes[1], *t)?
                    }
                    (None, r) => EllipsoidN::new(axes.clone(), r.clone())?,
                };
                Ok(ConvexBody::Ellipsoid(e))
            }
            BodySpec::Fourier { c0, cos, sin } => {
                let series = TrigSeries::new(*c0, cos.clone(), sin.clone());
                Ok(ConvexBody::Support(SupportBody2D::from_series(
                    series,
                    cfg.grid,
                    cfg.curvature_floor,
                )?))
            }
            BodySpec::Polygon { vertices } => Ok(ConvexBody::Polygon(Polygon2D::new(vertices.clone())?)),
            BodySpec::Random { seed, kmax, alpha } => Ok(ConvexBody::Support(random_smooth_body(
                *seed, *kmax, *alpha, cfg,
            )?)),
        }
    }

    pub fn ball(n: usize, r: f64) -> Result<Self> {
        if n == 0 || !(r > 0.0 && r.is_finite()) {
            return Err(Error::Parameter(format!("ball needs n ≥ 1 and r > 0, got n={n}, r={r}")));
        }
        Ok(ConvexBody::Ball { n, r })
    }

    pub fn ellipse(a: f64, b: f64, angle: f64) -> Result<Self> {
        Ok(ConvexBody::Ellipsoid(EllipsoidN::planar(a, b, angle)?))
    }

    /// The spec that rebuilds this body. Interpolated support bodies are
    /// emitted as their trigonometric interpolant.
    pub fn to_spec(&self) -> BodySpec {
        match self {
            ConvexBody::Ball { n, r } => BodySpec::Ball { n: *n, radius: *r },
            ConvexBody::Ellipsoid(e) => {
                if e.dim() == 2 {
                    BodySpec::Ellipsoid {
                        n: 2,
                        axes: e.axes().to_vec(),
                        rotation_angle: e.angle(),
                        rotation: None,
                    }
                } else {
                    BodySpec::Ellipsoid {
                        n: e.dim(),
                        axes: e.axes().to_vec(),
                        rotation_angle: None,
                        rotation: Some(e.rotation_rows()),
                    }
                }
            }
            ConvexBody::Support(s) => {
                let t = s.series();
                BodySpec::Fourier {
                    c0: t.c0,
                    cos: t.cos.clone(),
                    sin: t.sin.clone(),
                }
            }
            ConvexBody::Polygon(p) => BodySpec::Polygon {
                vertices: p.vertices().to_vec(),
            },
        }
    }

    /// Short descriptor for reports.
    pub fn describe(&self) -> String {
        match self {
            ConvexBody::Ball { n, r } => format!("ball(n={n},r={r})"),
            ConvexBody::Ellipsoid(e) => format!("ellipsoid(axes={:?})", e.axes()),
            ConvexBody::Support(s) => format!("fourier(degree={})", s.series().degree()),
            ConvexBody::Polygon(p) => format!("polygon({} vertices)", p.vertices().len()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Ball { n, .. } => *n,
            ConvexBody::Ellipsoid(e) => e.dim(),
            ConvexBody::Support(_) | ConvexBody::Polygon(_) => 2,
        }
    }

    pub fn is_polytope(&self) -> bool {
        matches!(self, ConvexBody::Polygon(_))
    }

    fn require_planar(&self) -> Result<()> {
        match self.dim() {
            2 => Ok(()),
            n => Err(Error::DimensionMismatch(n, 2)),
        }
    }

    /// Support function of a planar body at angle `theta`.
    pub fn support(&self, theta: f64) -> Result<f64> {
        self.require_planar()?;
        Ok(match self {
            ConvexBody::Ball { r, .. } => *r,
            ConvexBody::Ellipsoid(e) => e.support(theta),
            ConvexBody::Support(s) => s.support(theta),
            ConvexBody::Polygon(p) => p.support(theta),
        })
    }

    /// Support samples on the uniform grid of `n` directions.
    pub fn support_samples(&self, n: usize) -> Result<Vec<f64>> {
        self.require_planar()?;
        Ok(match self {
            ConvexBody::Support(s) if s.grid() == n => s.samples().to_vec(),
            ConvexBody::Support(s) => s.series().sample(n),
            _ => (0..n).map(|k| self.support(grid_angle(k, n)).unwrap()).collect(),
        })
    }

    /// Smallest support value, i.e. the radius of the largest origin-centered
    /// ball inside the body.
    pub fn min_support(&self) -> f64 {
        match self {
            ConvexBody::Ball { r, .. } => *r,
            ConvexBody::Ellipsoid(e) => e.min_axis(),
            ConvexBody::Support(s) => s.min_support(),
            ConvexBody::Polygon(p) => p.inradius(),
        }
    }

    pub fn max_support(&self) -> f64 {
        match self {
            ConvexBody::Ball { r, .. } => *r,
            ConvexBody::Ellipsoid(e) => e.max_axis(),
            ConvexBody::Support(s) => s.max_support(),
            ConvexBody::Polygon(p) => p.circumradius(),
        }
    }

    pub fn moments(&self) -> GeometricMoments {
        let n = self.dim();
        match self {
            ConvexBody::Ball { r, .. } => {
                GeometricMoments::new(n, unit_ball_volume(n) * r.powi(n as i32), vec![0.0; n])
            }
            ConvexBody::Ellipsoid(e) => GeometricMoments::new(n, e.volume(), vec![0.0; n]),
            ConvexBody::Support(s) => {
                let (a, g) = s.area_centroid();
                GeometricMoments::new(2, a, g.to_vec())
            }
            ConvexBody::Polygon(p) => {
                let (a, g) = p.area_centroid();
                GeometricMoments::new(2, a, g.to_vec())
            }
        }
    }

    pub fn vrad(&self) -> f64 {
        self.moments().vrad
    }

    /// True when the centroid lies within `tol·(1 + max h)` of the origin.
    pub fn is_centered(&self, tol: f64) -> bool {
        self.moments().centroid_norm() <= tol * (1.0 + self.max_support())
    }

    /// Translate so that the centroid sits at the origin.
    pub fn recenter(&self, cfg: &QuadratureConfig) -> Result<Self> {
        Ok(match self {
            ConvexBody::Ball { .. } | ConvexBody::Ellipsoid(_) => self.clone(),
            ConvexBody::Support(s) => {
                let (_, g) = s.area_centroid();
                if g == [0.0, 0.0] {
                    return Ok(self.clone());
                }
                ConvexBody::Support(s.translated(g, cfg.curvature_floor)?)
            }
            ConvexBody::Polygon(p) => {
                let (_, g) = p.area_centroid();
                ConvexBody::Polygon(p.translated(g)?)
            }
        })
    }

    pub fn polar(&self, cfg: &QuadratureConfig) -> Result<Self> {
        Ok(match self {
            ConvexBody::Ball { n, r } => ConvexBody::Ball { n: *n, r: r.recip() },
            ConvexBody::Ellipsoid(e) => ConvexBody::Ellipsoid(e.polar()),
            ConvexBody::Support(s) => ConvexBody::Support(s.polar(cfg.curvature_floor)?),
            ConvexBody::Polygon(p) => ConvexBody::Polygon(p.polar()?),
        })
    }

    /// Smooth planar bodies as support bodies on the configured grid.
    pub fn to_support_body(&self, cfg: &QuadratureConfig) -> Result<SupportBody2D> {
        self.require_planar()?;
        match self {
            ConvexBody::Support(s) => Ok(s.clone()),
            ConvexBody::Ball { r, .. } => {
                SupportBody2D::from_series(TrigSeries::constant(*r), cfg.grid, cfg.curvature_floor)
            }
            ConvexBody::Ellipsoid(e) => {
                SupportBody2D::from_support_fn(|t| e.support(t), cfg.grid, cfg.curvature_floor)
            }
            ConvexBody::Polygon(_) => Err(Error::Unsupported(
                "a polygon has no smooth support-body representation".into(),
            )),
        }
    }

    pub fn transform(&self, map: Transform, cfg: &QuadratureConfig) -> Result<Self> {
        match map {
            Transform::Scale(s) => {
                if !(s > 0.0 && s.is_finite()) {
                    return Err(Error::Parameter(format!("scale factor must be positive, got {s}")));
                }
                Ok(match self {
                    ConvexBody::Ball { n, r } => ConvexBody::Ball { n: *n, r: r * s },
                    ConvexBody::Ellipsoid(e) => ConvexBody::Ellipsoid(e.scaled(s)),
                    ConvexBody::Support(b) => ConvexBody::Support(b.scaled(s)),
                    ConvexBody::Polygon(p) => ConvexBody::Polygon(p.mapped([[s, 0.0], [0.0, s]])?),
                })
            }
            Transform::Unimodular(a) => {
                let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
                if !((det - 1.0).abs() <= 1e-10) || a.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(Error::Parameter(format!("matrix is not unimodular: det = {det}")));
                }
                self.require_planar()?;
                Ok(match self {
                    ConvexBody::Ball { r, .. } => {
                        ConvexBody::Ellipsoid(EllipsoidN::planar(*r, *r, 0.0)?.mapped(a)?)
                    }
                    ConvexBody::Ellipsoid(e) => ConvexBody::Ellipsoid(e.mapped(a)?),
                    ConvexBody::Polygon(p) => ConvexBody::Polygon(p.mapped(a)?),
                    ConvexBody::Support(b) => {
                        // h_{AK}(u) = h_K(Aᵀu)
                        let f = |t: f64| {
                            let (s, c) = t.sin_cos();
                            let v = [a[0][0] * c + a[1][0] * s, a[0][1] * c + a[1][1] * s];
                            v[0].hypot(v[1]) * b.support(v[1].atan2(v[0]))
                        };
                        ConvexBody::Support(SupportBody2D::from_support_fn(
                            f,
                            cfg.grid.max(b.grid()),
                            cfg.curvature_floor,
                        )?)
                    }
                })
            }
        }
    }

    /// Support-function inclusion `inner ⊂ self` on the shared grid.
    pub fn contains(&self, inner: &ConvexBody, cfg: &QuadratureConfig) -> Result<bool> {
        if self.dim() != inner.dim() {
            return Err(Error::DimensionMismatch(self.dim(), inner.dim()));
        }
        if self.dim() == 2 {
            let ho = self.support_samples(cfg.grid)?;
            let hi = inner.support_samples(cfg.grid)?;
            return Ok(hi.iter().zip(&ho).all(|(i, o)| *i <= o + 1e-12));
        }
        match (self, inner) {
            (ConvexBody::Ball { r: ro, .. }, ConvexBody::Ball { r: ri, .. }) => Ok(ri <= &(ro + 1e-12)),
            (ConvexBody::Ellipsoid(e), ConvexBody::Ball { r, .. }) => Ok(*r <= e.min_axis() + 1e-12),
            (ConvexBody::Ball { r, .. }, ConvexBody::Ellipsoid(e)) => Ok(e.max_axis() <= r + 1e-12),
            _ => Err(Error::Unsupported(
                "inclusion between ellipsoids is only available in the plane".into(),
            )),
        }
    }

    /// `max |h_K − h_L|` over the shared grid.
    pub fn hausdorff(&self, other: &ConvexBody, cfg: &QuadratureConfig) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        if self.dim() == 2 {
            let a = self.support_samples(cfg.grid)?;
            let b = other.support_samples(cfg.grid)?;
            return Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
        }
        let ball_vs_ellipsoid = |r: f64, e: &EllipsoidN| (e.max_axis() - r).abs().max((e.min_axis() - r).abs());
        match (self, other) {
            (ConvexBody::Ball { r: a, .. }, ConvexBody::Ball { r: b, .. }) => Ok((a - b).abs()),
            (ConvexBody::Ellipsoid(e), ConvexBody::Ball { r, .. })
            | (ConvexBody::Ball { r, .. }, ConvexBody::Ellipsoid(e)) => Ok(ball_vs_ellipsoid(*r, e)),
            _ => Err(Error::Unsupported(
                "Hausdorff distance between ellipsoids is only available in the plane".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn spec_examples() {
        let b = ConvexBody::from_spec(&BodySpec::from_json(r#"{"type":"ball","n":2,"radius":1}"#).unwrap(), &cfg())
            .unwrap();
        assert_eq!(b.support(1.0).unwrap(), 1.0);
        let ok = BodySpec::from_json(r#"{"type":"fourier","c0":1.0,"cos":[0,0.2]}"#).unwrap();
        let k = ConvexBody::from_spec(&ok, &cfg()).unwrap();
        if let ConvexBody::Support(s) = &k {
            assert!((s.min_curvature_radius() - 0.4).abs() < 1e-12);
        } else {
            panic!("expected a support body");
        }
        let bad = BodySpec::from_json(r#"{"type":"fourier","c0":1.0,"cos":[0,0.5]}"#).unwrap();
        assert!(matches!(ConvexBody::from_spec(&bad, &cfg()), Err(Error::Nonconvex { .. })));
        let outside = BodySpec::from_json(r#"{"type":"polygon","vertices":[[1,1],[2,1],[2,2]]}"#).unwrap();
        assert!(matches!(ConvexBody::from_spec(&outside, &cfg()), Err(Error::OriginOutside(_))));
    }

    #[test]
    fn moments_closed_forms() {
        let d = ConvexBody::ball(2, 1.0).unwrap().moments();
        assert!((d.volume - PI).abs() < 1e-15 && d.vrad == 1.0);
        let e = ConvexBody::ellipse(2.0, 0.5, 0.0).unwrap().moments();
        assert!((e.volume - PI).abs() < 1e-15 && (e.vrad - 1.0).abs() < 1e-15);
        let e3 = ConvexBody::Ellipsoid(EllipsoidN::new(vec![1.0, 2.0, 3.0], None).unwrap()).moments();
        assert!((e3.volume - 8.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn polar_contains_and_hausdorff_examples() {
        let c = cfg();
        let b = ConvexBody::ball(2, 1.0).unwrap();
        let b2 = ConvexBody::ball(2, 2.0).unwrap();
        let e = ConvexBody::ellipse(2.0, 0.5, 0.0).unwrap();
        assert_eq!(b.polar(&c).unwrap(), b);
        if let ConvexBody::Ellipsoid(p) = e.polar(&c).unwrap() {
            assert_eq!(p.axes(), &[0.5, 2.0]);
        }
        assert!(b2.contains(&b, &c).unwrap());
        assert!(!b.contains(&e, &c).unwrap());
        assert!(e.contains(&e, &c).unwrap());
        assert!((b.hausdorff(&b2, &c).unwrap() - 1.0).abs() < 1e-15);
        assert!((e.hausdorff(&b, &c).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(e.hausdorff(&e, &c).unwrap(), 0.0);
        let b3 = ConvexBody::ball(3, 1.0).unwrap();
        assert!(matches!(b.contains(&b3, &c), Err(Error::DimensionMismatch(2, 3))));
    }

    #[test]
    fn transform_examples() {
        let c = cfg();
        let b = ConvexBody::ball(2, 1.0).unwrap();
        assert_eq!(b.transform(Transform::Scale(3.0), &c).unwrap(), ConvexBody::Ball { n: 2, r: 3.0 });
        let e = b.transform(Transform::Unimodular([[2.0, 0.0], [0.0, 0.5]]), &c).unwrap();
        assert!(e.hausdorff(&ConvexBody::ellipse(2.0, 0.5, 0.0).unwrap(), &c).unwrap() < 1e-14);
        assert!(b.transform(Transform::Unimodular([[2.0, 0.0], [0.0, 1.0]]), &c).is_err());
    }

    #[test]
    fn recenter_translated_disk() {
        let c = cfg();
        let k = ConvexBody::from_spec(&BodySpec::Fourier { c0: 1.0, cos: vec![0.3], sin: vec![] }, &c).unwrap();
        let r = k.recenter(&c).unwrap();
        assert!(r.hausdorff(&ConvexBody::ball(2, 1.0).unwrap(), &c).unwrap() < 1e-14);
    }

    #[test]
    fn spec_round_trip() {
        let c = cfg();
        for json in [
            r#"{"type":"ball","n":3,"radius":2.0}"#,
            r#"{"type":"ellipsoid","n":2,"axes":[2.0,0.5],"rotation_angle":0.3}"#,
            r#"{"type":"fourier","c0":1.0,"cos":[0.0,0.1],"sin":[0.0,0.0]}"#,
            r#"{"type":"polygon","vertices":[[1.0,0.0],[0.0,1.0],[-1.0,0.0],[0.0,-1.0]]}"#,
        ] {
            let spec = BodySpec::from_json(json).unwrap();
            let body = ConvexBody::from_spec(&spec, &c).unwrap();
            let again = ConvexBody::from_spec(&body.to_spec(), &c).unwrap();
            assert_eq!(body, again, "{json}");
        }
    }
}
