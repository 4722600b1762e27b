//! Multi-start shape optimization for `IS_φ` (inscribed) and `os_ψ`
//! (circumscribed), and through the polar for `OS_{φ*}` and `is*_ψ`.
//!
//! A candidate is `s·A·S`: `S` has support `1 + Σ_{k=2..kmax} (a_k cos kθ +
//! b_k sin kθ)` translated to its centroid, `A = R_ω diag(e^ℓ, e^{−ℓ}) R_ωᵀ`
//! is unimodular, and `s` is the extreme scale with `sAS ⊂ K` (resp. `⊃`).
//! By affine invariance the objective is `as_f(sS)`, so only the inclusion
//! test sees `A`. Centering is exact and inclusion holds by construction,
//! which leaves convexity of `S` as the only constraint.

use super::bounds::{extremal_bounds_with, BoundsInterval, Endpoint, Provenance, CENTER_TOL};
use super::ellipse::{best_circumscribed_ellipse, best_inscribed_ellipse, Envelope};
use super::{classify_trivial, reduce_phi, ExtremalKind, TrivialClass};
use crate::asa::eval_asa;
use crate::config::QuadratureConfig;
use crate::error::{Error, Result};
use crate::funclass::AdmissibleFunction;
use crate::geometry::{grid_angle, ConvexBody, SupportBody2D};
use crate::numeric::Extended;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Smallest curvature radius allowed for the unit-mean shape `S` at the
/// search nodes.
const SHAPE_RHO_MIN: f64 = 1e-3;
const STRETCH_MAX: f64 = 5.0;
const FD_STEP: f64 = 1e-6;
/// Consecutive steps with relative gain below [`STALL_GAIN`] before a start
/// is abandoned.
const STALL_STEPS: usize = 4;
const STALL_GAIN: f64 = 1e-8;
const LINE_SEARCH_HALVINGS: usize = 16;
/// Relative tolerance of the fence check against the isoperimetric bound.
const FENCE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub starts: usize,
    pub steps: usize,
    pub kmax: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            starts: 40,
            steps: 400,
            kmax: 6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Optimized {
    pub kind: ExtremalKind,
    /// `as_f` of the witness, evaluated on the configured grid.
    pub estimate: f64,
    pub witness: ConvexBody,
    /// Index of the winning start, `None` when `K` itself beat every start.
    pub start: Option<usize>,
    /// `as_f` of the best feasible search witness, before `K` competes.
    pub search_estimate: Option<f64>,
    pub evaluations: usize,
    /// Certified interval with the witness folded in.
    pub bounds: BoundsInterval,
}

struct Problem<'a> {
    env: Envelope<'a>,
    f: &'a AdmissibleFunction,
    outer: bool,
    kmax: usize,
    /// `cos kθ_j`, `sin kθ_j` for `k = 0..=kmax` on the search nodes.
    cos: Vec<Vec<f64>>,
    sin: Vec<Vec<f64>>,
}

/// The unimodular image `A·S` of a centered shape.
struct Candidate {
    /// `(a_k, b_k)` for `k = 1..=kmax`, with `k = 1` the centering shift.
    coeffs: Vec<(f64, f64)>,
    stretch: f64,
    angle: f64,
}

impl Candidate {
    /// `h_S` at the unit vector `(zx, zy)`, by complex powers.
    fn shape_support(&self, zx: f64, zy: f64) -> f64 {
        let (mut pr, mut pi) = (1.0, 0.0);
        let mut h = 1.0;
        for &(a, b) in &self.coeffs {
            (pr, pi) = (pr * zx - pi * zy, pr * zy + pi * zx);
            h += a * pr + b * pi;
        }
        h
    }

    /// `h_{AS}(u) = |Au|·h_S(Au/|Au|)` for `A` symmetric.
    fn support_at(&self, c: f64, s: f64, trig: (f64, f64, f64, f64)) -> f64 {
        let (el, eml, cw, sw) = trig;
        let x = el * (c * cw + s * sw);
        let y = eml * (s * cw - c * sw);
        let r = x.hypot(y);
        self.shape_support((x * cw - y * sw) / r, (x * sw + y * cw) / r) * r
    }

    fn trig(&self) -> (f64, f64, f64, f64) {
        let (sw, cw) = self.angle.sin_cos();
        (self.stretch.exp(), (-self.stretch).exp(), cw, sw)
    }

    fn support(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.support_at(c, s, self.trig())
    }
}

impl<'a> Problem<'a> {
    fn new(env: Envelope<'a>, f: &'a AdmissibleFunction, outer: bool, kmax: usize) -> Self {
        let m = env.angles().len();
        let table = |g: fn(f64) -> f64| -> Vec<Vec<f64>> {
            (0..m)
                .map(|j| (0..=kmax).map(|k| g(k as f64 * grid_angle(j, m))).collect())
                .collect()
        };
        Problem {
            f,
            outer,
            kmax,
            cos: table(f64::cos),
            sin: table(f64::sin),
            env,
        }
    }

    fn dims(&self) -> usize {
        2 * self.kmax
    }

    /// Centered shape with its support and curvature radius on the search
    /// nodes, or `None` when `S` is not admissibly convex.
    fn candidate(&self, x: &[f64]) -> Option<(Candidate, Vec<f64>, Vec<f64>)> {
        if !(x[0].abs() <= STRETCH_MAX) || x.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let m = self.cos.len();
        let (mut h, mut d1, mut rho) = (vec![1.0; m], vec![0.0; m], vec![1.0; m]);
        for j in 0..m {
            let (cj, sj) = (&self.cos[j], &self.sin[j]);
            for k in 2..=self.kmax {
                let (a, b) = (x[2 * k - 2], x[2 * k - 1]);
                let v = a * cj[k] + b * sj[k];
                let kf = k as f64;
                h[j] += v;
                d1[j] += kf * (b * cj[k] - a * sj[k]);
                rho[j] += (1.0 - kf * kf) * v;
            }
        }
        if rho.iter().any(|r| !(*r >= SHAPE_RHO_MIN)) {
            return None;
        }
        let (mut area, mut gx, mut gy) = (0.0, 0.0, 0.0);
        for j in 0..m {
            let (c, s) = (self.cos[j][1], self.sin[j][1]);
            let w = h[j] * rho[j];
            area += w;
            gx += (h[j] * c - d1[j] * s) * w;
            gy += (h[j] * s + d1[j] * c) * w;
        }
        let (gx, gy) = (2.0 * gx / (3.0 * area), 2.0 * gy / (3.0 * area));
        for ((hj, c), s) in h.iter_mut().zip(&self.cos).zip(&self.sin) {
            *hj -= gx * c[1] + gy * s[1];
        }
        if h.iter().any(|v| !(*v > 1e-9)) {
            return None;
        }
        let mut coeffs = vec![(-gx, -gy)];
        coeffs.extend((2..=self.kmax).map(|k| (x[2 * k - 2], x[2 * k - 1])));
        let cand = Candidate {
            coeffs,
            stretch: x[0],
            angle: x[1].rem_euclid(PI),
        };
        Some((cand, h, rho))
    }

    /// Signed objective (larger is better).
    fn score(&self, x: &[f64]) -> Option<f64> {
        let (cand, h, rho) = self.candidate(x)?;
        let trig = cand.trig();
        let w: Vec<f64> = (0..h.len())
            .map(|j| cand.support_at(self.cos[j][1], self.sin[j][1], trig))
            .collect();
        let s = self.env.coarse_scale(&w, self.outer, &|t| cand.support(t));
        if !(s.is_finite() && s > 0.0) {
            return None;
        }
        let v = self.value(&h, &rho, s);
        if !v.is_finite() {
            return None;
        }
        Some(if self.outer { -v } else { v })
    }

    /// `as_f(sS)` by the trapezoid rule on the search nodes.
    fn value(&self, h: &[f64], rho: &[f64], s: f64) -> f64 {
        let s2 = s * s;
        let sum: f64 = h
            .iter()
            .zip(rho)
            .map(|(h, r)| self.f.eval(1.0 / (s2 * s2 * r * h * h * h)) * s2 * h * r)
            .sum();
        sum * 2.0 * PI / h.len() as f64
    }

    /// Gradient ascent with finite differences and a backtracking line
    /// search; returns `(score, x, evaluations)`.
    fn ascend(&self, mut x: Vec<f64>, steps: usize) -> Option<(f64, Vec<f64>, usize)> {
        let mut fx = self.score(&x)?;
        let mut evals = 1;
        let mut t = 0.05;
        let mut stall = 0;
        let d = self.dims();
        for _ in 0..steps {
            let mut g = vec![0.0; d];
            for i in 0..d {
                let mut xp = x.clone();
                xp[i] += FD_STEP;
                let mut xm = x.clone();
                xm[i] -= FD_STEP;
                let fp = self.score(&xp);
                let fm = self.score(&xm);
                evals += 2;
                g[i] = match (fp, fm) {
                    (Some(a), Some(b)) => (a - b) / (2.0 * FD_STEP),
                    (Some(a), None) => (a - fx) / FD_STEP,
                    (None, Some(b)) => (fx - b) / FD_STEP,
                    (None, None) => 0.0,
                };
            }
            let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(gn > 1e-14) {
                break;
            }
            let mut tt = t;
            let mut accepted = None;
            for _ in 0..LINE_SEARCH_HALVINGS {
                let y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + tt * b / gn).collect();
                evals += 1;
                if let Some(fy) = self.score(&y) {
                    if fy > fx {
                        accepted = Some((fy, y));
                        break;
                    }
                }
                tt *= 0.5;
            }
            let Some((fy, y)) = accepted else { break };
            let gain = (fy - fx) / fx.abs().max(1e-300);
            x = y;
            fx = fy;
            t = (2.0 * tt).min(1.0);
            stall = if gain < STALL_GAIN { stall + 1 } else { 0 };
            if stall >= STALL_STEPS {
                break;
            }
        }
        Some((fx, x, evals))
    }
}

/// Maximizes `as_φ` over centered bodies inside `k` (`IS_phi`) or minimizes
/// `as_ψ` over centered bodies containing `k` (`os_psi`), and folds the
/// best witness into the certified interval. `OS_phi_star` and
/// `is_star_psi` are searched in the polar picture; their witness is the
/// polar of the body found there.
///
/// The result is deterministic in `(k, f, kind, budget, seed, cfg)`.
pub fn optimize_extremal(
    k: &ConvexBody,
    f: &AdmissibleFunction,
    kind: ExtremalKind,
    budget: Budget,
    seed: u64,
    cfg: &QuadratureConfig,
) -> Result<Optimized> {
    cfg.validate()?;
    if !matches!(
        kind,
        ExtremalKind::InnerMaxPhi | ExtremalKind::OuterMinPsi | ExtremalKind::OuterMaxPhiStar | ExtremalKind::InnerMinStarPsi
    ) {
        return Err(Error::Unsupported(format!(
            "shape optimization covers IS_phi, os_psi, OS_phi_star and is_star_psi, not {kind}"
        )));
    }
    if budget.starts == 0 || budget.kmax < 2 {
        return Err(Error::Parameter(format!(
            "budget needs at least one start and kmax ≥ 2, got {budget:?}"
        )));
    }
    if k.dim() != 2 {
        return Err(Error::DimensionMismatch(k.dim(), 2));
    }
    let flags = f.class_flags(2)?;
    match classify_trivial(kind, f, &flags)? {
        TrivialClass::Finite => {}
        class => {
            return Err(Error::Unsupported(format!(
                "{kind} for {} is {class:?}; nothing to optimize",
                f.name()
            )))
        }
    }
    if k.min_support() <= 0.0 {
        return Err(Error::Infeasible("the origin is not interior to the body".into()));
    }
    let bounds = extremal_bounds_with(k, f, kind, &flags, cfg)?;
    match kind {
        ExtremalKind::InnerMaxPhi => search(k, f, false, bounds, budget, seed, cfg),
        ExtremalKind::OuterMinPsi => search(k, f, true, bounds, budget, seed, cfg),
        _ => {
            // OS_{φ*}(K) = IS_φ(K°) and is*_ψ(K) = os_ψ(K°)
            let polar = k.polar(cfg)?;
            let (base, outer) = if kind == ExtremalKind::InnerMinStarPsi {
                (f.clone(), true)
            } else if reduce_phi(kind, &flags)?.given_is_dual {
                (f.dual(), false)
            } else {
                (f.clone(), false)
            };
            let mut out = search(&polar, &base, outer, bounds, budget, seed, cfg)?;
            out.kind = kind;
            out.witness = out.witness.polar(cfg)?;
            Ok(out)
        }
    }
}

/// Runs the multi-start search on `k` and tightens `bounds`, an interval
/// for `IS_f(k)` (inner) or `os_f(k)` (outer) under any kind label.
fn search(
    k: &ConvexBody,
    f: &AdmissibleFunction,
    outer: bool,
    bounds: BoundsInterval,
    budget: Budget,
    seed: u64,
    cfg: &QuadratureConfig,
) -> Result<Optimized> {
    let problem = Problem::new(Envelope::new(k)?, f, outer, budget.kmax);
    let starts = initial_points(k, outer, budget, seed)?;
    let runs: Vec<Option<(f64, Vec<f64>, usize)>> = starts
        .par_iter()
        .map(|x0| problem.ascend(x0.clone(), budget.steps))
        .collect();
    let evaluations = runs.iter().flatten().map(|r| r.2).sum();
    let mut ranked: Vec<(usize, f64, &Vec<f64>)> = runs
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.as_ref().map(|(v, x, _)| (i, *v, x)))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut best: Option<(Option<usize>, f64, ConvexBody)> = None;
    for (start, _, x) in ranked {
        let Some((cand, _, _)) = problem.candidate(x) else { continue };
        let Ok(witness) = build_witness(k, &problem.env, &cand, outer, cfg) else { continue };
        let estimate = eval_asa(&witness, f, cfg)?.as_f64();
        best = Some((Some(start), estimate, witness));
        break;
    }
    let search_estimate = best.as_ref().map(|b| b.1);
    // K is its own competitor when it is smooth and centered
    if !k.is_polytope() && k.is_centered(CENTER_TOL) {
        let own = eval_asa(k, f, cfg)?.as_f64();
        let better = match &best {
            None => true,
            Some((_, v, _)) => if outer { own < *v } else { own > *v },
        };
        if better {
            best = Some((None, own, k.clone()));
        }
    }
    if let Some((start, estimate, witness)) = best {
        let mut bounds = bounds;
        let end = Endpoint {
            value: Extended::from_f64(estimate),
            provenance: Provenance::OptimizerWitness,
            detail: Some(match start {
                Some(i) => format!("start {i}"),
                None => "the body itself".into(),
            }),
        };
        if outer {
            let fence = bounds.lower.as_f64();
            if estimate < fence * (1.0 - FENCE_TOL) {
                return Err(Error::InternalConsistency(format!(
                    "os estimate {estimate} falls below the isoperimetric bound {fence}"
                )));
            }
            bounds.lower_upper(end);
        } else {
            let fence = bounds.upper.as_f64();
            if estimate > fence * (1.0 + FENCE_TOL) {
                return Err(Error::InternalConsistency(format!(
                    "IS estimate {estimate} exceeds the isoperimetric bound {fence}"
                )));
            }
            bounds.raise_lower(end);
        }
        return Ok(Optimized {
            kind: bounds.kind,
            estimate,
            witness,
            start,
            search_estimate,
            evaluations,
            bounds: bounds.settle()?,
        });
    }
    Err(Error::Infeasible(format!(
        "no feasible witness after {} starts",
        budget.starts
    )))
}

/// Disk, best ellipse, the body's own low harmonics, then seeded
/// perturbations of the best ellipse.
fn initial_points(k: &ConvexBody, outer: bool, budget: Budget, seed: u64) -> Result<Vec<Vec<f64>>> {
    let d = 2 * budget.kmax;
    let fit = if outer { best_circumscribed_ellipse(k)? } else { best_inscribed_ellipse(k)? };
    let mut out = vec![vec![0.0; d]];
    let mut ellipse = vec![0.0; d];
    ellipse[0] = fit.stretch;
    ellipse[1] = fit.angle;
    out.push(ellipse.clone());
    if let ConvexBody::Support(s) = k {
        let t = s.series();
        let mut own = vec![0.0; d];
        for kk in 2..=budget.kmax {
            own[2 * kk - 2] = t.cos_coeff(kk) / t.c0;
            own[2 * kk - 1] = t.sin_coeff(kk) / t.c0;
        }
        out.push(own);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < budget.starts {
        let mut x = ellipse.clone();
        x[0] += rng.random_range(-0.3..=0.3);
        x[1] += rng.random_range(-0.3..=0.3);
        for kk in 2..=budget.kmax {
            let amp = 0.15 / (kk * kk) as f64;
            x[2 * kk - 2] = rng.random_range(-amp..=amp);
            x[2 * kk - 1] = rng.random_range(-amp..=amp);
        }
        out.push(x);
    }
    out.truncate(budget.starts);
    Ok(out)
}

fn build_witness(
    k: &ConvexBody,
    env: &Envelope<'_>,
    cand: &Candidate,
    outer: bool,
    cfg: &QuadratureConfig,
) -> Result<ConvexBody> {
    let w_fn = |t: f64| cand.support(t);
    let s = env.refined_scale(&w_fn, outer);
    let body = SupportBody2D::from_support_fn(|t| s * w_fn(t), cfg.grid, cfg.curvature_floor)?;
    let witness = ConvexBody::Support(body);
    let inside = if outer { witness.contains(k, cfg)? } else { k.contains(&witness, cfg)? };
    if !inside {
        return Err(Error::Infeasible("witness fails the inclusion check".into()));
    }
    if !witness.is_centered(CENTER_TOL) {
        return Err(Error::Infeasible("witness is not centered".into()));
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BodySpec;

    fn small() -> Budget {
        Budget {
            starts: 6,
            steps: 60,
            kmax: 4,
        }
    }

    #[test]
    fn disk_is_its_own_optimum() {
        let cfg = QuadratureConfig::default();
        let phi = AdmissibleFunction::power_phi(2, 1.0).unwrap();
        let k = ConvexBody::Support(ConvexBody::ball(2, 1.0).unwrap().to_support_body(&cfg).unwrap());
        let r = optimize_extremal(&k, &phi, ExtremalKind::InnerMaxPhi, small(), 1, &cfg).unwrap();
        assert!((r.estimate - 2.0 * PI).abs() < 1e-8, "{}", r.estimate);
        assert!(k.hausdorff(&r.witness, &cfg).unwrap() < 1e-6);
    }

    #[test]
    fn deterministic_and_fenced_on_a_random_body() {
        let cfg = QuadratureConfig::default();
        let k = ConvexBody::from_spec(&BodySpec::Random { seed: 3, kmax: 6, alpha: 0.25 }, &cfg).unwrap();
        let phi = AdmissibleFunction::arctan(2).unwrap();
        let a = optimize_extremal(&k, &phi, ExtremalKind::InnerMaxPhi, small(), 9, &cfg).unwrap();
        let b = optimize_extremal(&k, &phi, ExtremalKind::InnerMaxPhi, small(), 9, &cfg).unwrap();
        assert_eq!(a.estimate, b.estimate);
        assert_eq!(a.witness, b.witness);
        let body = eval_asa(&k, &phi, &cfg).unwrap().as_f64();
        assert!(a.estimate >= body * (1.0 - 1e-9));
        assert!(a.estimate <= a.bounds.upper.as_f64());
        assert!(k.contains(&a.witness, &cfg).unwrap());
    }

    #[test]
    fn os_on_the_square_lies_between_its_fences() {
        let cfg = QuadratureConfig::default();
        let sq = ConvexBody::from_spec(
            &BodySpec::Polygon {
                vertices: vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]],
            },
            &cfg,
        )
        .unwrap();
        let psi = AdmissibleFunction::power_psi(2, -1.0).unwrap();
        let r = optimize_extremal(&sq, &psi, ExtremalKind::OuterMinPsi, small(), 2, &cfg).unwrap();
        let lower = r.bounds.lower.as_f64();
        // the circumcircle is one admissible competitor
        let circ = crate::asa::ball_value(2, 2f64.sqrt(), &psi);
        assert!(r.estimate >= lower && r.estimate <= circ * (1.0 + 1e-9));
        assert!(r.witness.contains(&sq, &cfg).unwrap());
    }

    #[test]
    fn polar_kinds_return_containing_witnesses() {
        let cfg = QuadratureConfig::default();
        let k = ConvexBody::from_spec(&BodySpec::Random { seed: 9, kmax: 6, alpha: 0.25 }, &cfg).unwrap();
        let phi = AdmissibleFunction::power_phi(2, 1.0).unwrap();
        let r = optimize_extremal(&k, &phi, ExtremalKind::OuterMaxPhiStar, small(), 1, &cfg).unwrap();
        assert_eq!(r.kind, ExtremalKind::OuterMaxPhiStar);
        assert!(r.witness.contains(&k, &cfg).unwrap());
        // the dual value of the witness is the estimate
        let v = eval_asa(&r.witness, &phi.dual(), &cfg).unwrap().as_f64();
        assert!((v - r.estimate).abs() < 1e-4 * r.estimate, "{v} vs {}", r.estimate);
        assert!(r.estimate <= r.bounds.upper.as_f64());
        let psi = AdmissibleFunction::power_psi(2, -1.0).unwrap();
        let r = optimize_extremal(&k, &psi, ExtremalKind::InnerMinStarPsi, small(), 1, &cfg).unwrap();
        assert!(k.contains(&r.witness, &cfg).unwrap());
        assert!(r.estimate >= r.bounds.lower.as_f64());
    }

    #[test]
    fn wrong_kinds_are_refused() {
        let cfg = QuadratureConfig::default();
        let k = ConvexBody::ball(2, 1.0).unwrap();
        let phi = AdmissibleFunction::power_phi(2, 1.0).unwrap();
        assert!(optimize_extremal(&k, &phi, ExtremalKind::InnerMinPhi, small(), 0, &cfg).is_err());
        let psi = AdmissibleFunction::power_psi(2, -1.0).unwrap();
        assert!(matches!(
            optimize_extremal(&k, &psi, ExtremalKind::InnerMaxPhi, small(), 0, &cfg),
            Err(Error::ClassMismatch(_))
        ));
    }
}
