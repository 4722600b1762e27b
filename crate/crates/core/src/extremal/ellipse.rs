//! Largest inscribed and smallest circumscribed origin-centered ellipses,
//! and the scale oracle shared with the shape optimizer.

use crate::error::{Error, Result};
use crate::geometry::{grid_angle, ConvexBody, EllipsoidN};
use crate::numeric::{golden_min, periodic_min_from};

/// Directions used while searching; final scales are refined beyond them.
pub(crate) const SEARCH_DIRECTIONS: usize = 128;
/// Relative margin applied to refined scales so that rounding cannot push
/// a witness across the boundary.
const SCALE_MARGIN: f64 = 1e-12;

/// Support data of a planar container body, for computing the largest
/// `s` with `s·W ⊂ K` (inner) or the smallest with `s·W ⊃ K` (outer).
pub(crate) struct Envelope<'a> {
    body: &'a ConvexBody,
    angles: Vec<f64>,
    cos: Vec<f64>,
    sin: Vec<f64>,
    h: Vec<f64>,
    facets: Option<Vec<(f64, f64)>>,
    vertices: Option<Vec<[f64; 2]>>,
}

impl<'a> Envelope<'a> {
    pub fn new(body: &'a ConvexBody) -> Result<Self> {
        let m = SEARCH_DIRECTIONS;
        let angles: Vec<f64> = (0..m).map(|k| grid_angle(k, m)).collect();
        Ok(Envelope {
            body,
            cos: angles.iter().map(|t| t.cos()).collect(),
            sin: angles.iter().map(|t| t.sin()).collect(),
            angles,
            h: body.support_samples(m)?,
            facets: match body {
                ConvexBody::Polygon(p) => Some(p.facets()),
                _ => None,
            },
            vertices: match body {
                ConvexBody::Polygon(p) => Some(p.vertices().to_vec()),
                _ => None,
            },
        })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Scale from the search directions. `w` holds the support of the
    /// unscaled body at [`Envelope::angles`].
    pub fn coarse_scale(&self, w: &[f64], outer: bool, w_fn: &dyn Fn(f64) -> f64) -> f64 {
        if let (Some(f), false) = (&self.facets, outer) {
            return facet_scale(f, w_fn);
        }
        if let (Some(v), true) = (&self.vertices, outer) {
            return self.vertex_scale(v, w, None);
        }
        let ratios = self.h.iter().zip(w).map(|(h, w)| h / w);
        if outer {
            ratios.fold(0.0, f64::max)
        } else {
            ratios.fold(f64::INFINITY, f64::min)
        }
    }

    /// Scale valid for every direction, up to the refinement tolerance and
    /// a relative safety margin.
    pub fn refined_scale(&self, w_fn: &dyn Fn(f64) -> f64, outer: bool) -> f64 {
        if let (Some(f), false) = (&self.facets, outer) {
            // a body lies in a polygon iff it lies below every facet line
            return facet_scale(f, w_fn) * (1.0 - SCALE_MARGIN);
        }
        if let (Some(v), true) = (&self.vertices, outer) {
            // ... and contains a polygon iff it contains every vertex
            let w: Vec<f64> = self.angles.iter().map(|&t| w_fn(t)).collect();
            return self.vertex_scale(v, &w, Some(w_fn)) * (1.0 + SCALE_MARGIN);
        }
        let sign = if outer { -1.0 } else { 1.0 };
        let ratio = |t: f64| sign * self.body.support(t).unwrap() / w_fn(t);
        let coarse = self
            .angles
            .iter()
            .map(|&t| ratio(t))
            .fold(f64::INFINITY, f64::min);
        let m = 4 * SEARCH_DIRECTIONS;
        let nodes: Vec<f64> = self
            .body
            .support_samples(m)
            .expect("planar body")
            .iter()
            .enumerate()
            .map(|(j, h)| sign * h / w_fn(grid_angle(j, m)))
            .collect();
        let (_, refined) = periodic_min_from(ratio, &nodes, 8);
        let s = sign * coarse.min(refined);
        if outer {
            s * (1.0 + SCALE_MARGIN)
        } else {
            s * (1.0 - SCALE_MARGIN)
        }
    }
}

impl Envelope<'_> {
    /// `max_v max_θ ⟨v, u(θ)⟩ / w(θ)`, the smallest `s` with every vertex
    /// in `s·W`. Without `w_fn` the inner maximum is a parabolic fit through
    /// the best node and its neighbours.
    fn vertex_scale(&self, vertices: &[[f64; 2]], w: &[f64], w_fn: Option<&dyn Fn(f64) -> f64>) -> f64 {
        let m = self.angles.len();
        let step = self.angles[1] - self.angles[0];
        let mut best = 0.0f64;
        for v in vertices {
            let g: Vec<f64> = (0..m).map(|j| (v[0] * self.cos[j] + v[1] * self.sin[j]) / w[j]).collect();
            let (j, node) = g
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |a, (j, &r)| if r > a.1 { (j, r) } else { a });
            let peak = match w_fn {
                Some(w_fn) => {
                    let gauge = |t: f64| (v[0] * t.cos() + v[1] * t.sin()) / w_fn(t);
                    let t = self.angles[j];
                    -golden_min(|x| -gauge(x), t - step, t + step, 1e-13).1
                }
                None => {
                    let (a, c) = (g[(j + m - 1) % m], g[(j + 1) % m]);
                    let curv = a - 2.0 * node + c;
                    if curv < 0.0 {
                        node - 0.125 * (c - a) * (c - a) / curv
                    } else {
                        node
                    }
                }
            };
            best = best.max(node).max(peak);
        }
        best
    }
}

fn facet_scale(facets: &[(f64, f64)], w_fn: &dyn Fn(f64) -> f64) -> f64 {
    facets
        .iter()
        .map(|&(t, c)| c / w_fn(t))
        .fold(f64::INFINITY, f64::min)
}

/// Support of `diag(e^ℓ, e^{−ℓ})` rotated by `ω`, applied to the unit disk.
pub(crate) fn ellipse_support(stretch: f64, angle: f64, theta: f64) -> f64 {
    let (s, c) = (theta - angle).sin_cos();
    let (e1, e2) = ((2.0 * stretch).exp(), (-2.0 * stretch).exp());
    (e1 * c * c + e2 * s * s).sqrt()
}

/// Result of an ellipse search: `ellipse = scale·R_ω diag(e^ℓ, e^{−ℓ})·B₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipseFit {
    pub ellipse: EllipsoidN,
    pub scale: f64,
    pub stretch: f64,
    pub angle: f64,
}

impl EllipseFit {
    /// Volume radius, equal to the scale since the shape has unit determinant.
    pub fn vrad(&self) -> f64 {
        self.scale
    }
}

/// Largest-area origin-centered ellipse inside a planar body.
pub fn best_inscribed_ellipse(body: &ConvexBody) -> Result<EllipseFit> {
    fit(body, false)
}

/// Smallest-area origin-centered ellipse containing a planar body.
pub fn best_circumscribed_ellipse(body: &ConvexBody) -> Result<EllipseFit> {
    fit(body, true)
}

fn fit(body: &ConvexBody, outer: bool) -> Result<EllipseFit> {
    if body.dim() != 2 {
        return Err(Error::DimensionMismatch(body.dim(), 2));
    }
    let env = Envelope::new(body)?;
    // score to maximize
    let score = |l: f64, w: f64| {
        let f = |t: f64| ellipse_support(l, w, t);
        let samples: Vec<f64> = env.angles().iter().map(|&t| f(t)).collect();
        let s = env.coarse_scale(&samples, outer, &f);
        if outer {
            -s
        } else {
            s
        }
    };
    let half_turn = std::f64::consts::PI;
    let mut best = (score(0.0, 0.0), 0.0, 0.0);
    for i in 1..=30 {
        let l = 0.1 * i as f64;
        for j in 0..24 {
            let w = half_turn * j as f64 / 24.0;
            let v = score(l, w);
            if v > best.0 {
                best = (v, l, w);
            }
        }
    }
    // compass refinement
    let (mut dl, mut dw) = (0.05, half_turn / 48.0);
    let (mut v, mut l, mut w) = best;
    while dl > 1e-10 {
        let mut moved = false;
        for (a, b) in [(dl, 0.0), (-dl, 0.0), (0.0, dw), (0.0, -dw)] {
            let cand = score(l + a, w + b);
            if cand > v {
                (v, l, w) = (cand, l + a, w + b);
                moved = true;
                break;
            }
        }
        if !moved {
            dl *= 0.5;
            dw *= 0.5;
        }
    }
    if l < 0.0 {
        l = -l;
        w += 0.5 * half_turn;
    }
    w = w.rem_euclid(half_turn);
    let scale = env.refined_scale(&|t| ellipse_support(l, w, t), outer);
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::Infeasible(format!("ellipse search produced scale {scale}")));
    }
    Ok(EllipseFit {
        ellipse: EllipsoidN::planar(scale * l.exp(), scale * (-l).exp(), w)?,
        scale,
        stretch: l,
        angle: w,
    })
}
