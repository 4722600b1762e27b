//! Admissible integrands φ (concave) and ψ (convex) for general affine
//! surface areas, their sampled classification, and the duality
//! `φ*(t) = t φ(1/t)`.

use crate::error::{Error, Result};
use crate::numeric::log_grid;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Closed-form function families, also the JSON function-spec format:
/// `{"family":"power_phi","n":2,"p":1}`, `{"family":"arctan","m":2}`, ...
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// `t^{p/(n+p)}`, `p ≥ 0`.
    PowerPhi { n: usize, p: f64 },
    /// `t^{p/(n+p)}`, `p ∈ (−n, 0)`.
    PowerPsi { n: usize, p: f64 },
    /// `arctan(t^{1/m})`, `m ≥ 2`.
    #[serde(alias = "arctan_family")]
    Arctan { m: u32 },
    /// `log(t + 1)`.
    Log1p,
    /// `log(1/t + 1)`.
    LogRecip,
    /// Bare power `t^alpha`.
    Power { alpha: f64 },
    /// `t · of(1/t)`.
    Dual { of: Box<FunctionSpec> },
}

impl FunctionSpec {
    fn validate(&self) -> Result<()> {
        match self {
            FunctionSpec::PowerPhi { n, p } => {
                if *n == 0 || !p.is_finite() || *p < 0.0 {
                    return Err(Error::Parameter(format!(
                        "power_phi needs n ≥ 1 and finite p ≥ 0, got n={n}, p={p}"
                    )));
                }
            }
            FunctionSpec::PowerPsi { n, p } => {
                let nf = *n as f64;
                if *n == 0 || !p.is_finite() || *p <= -nf || *p >= 0.0 {
                    return Err(Error::Parameter(format!(
                        "power_psi needs p ∈ (−n, 0), got n={n}, p={p}"
                    )));
                }
            }
            FunctionSpec::Arctan { m } => {
                if *m < 2 {
                    return Err(Error::Parameter(format!("arctan family needs m ≥ 2, got {m}")));
                }
            }
            FunctionSpec::Power { alpha } => {
                if !alpha.is_finite() {
                    return Err(Error::Parameter(format!("power exponent must be finite, got {alpha}")));
                }
            }
            FunctionSpec::Dual { of } => of.validate()?,
            FunctionSpec::Log1p | FunctionSpec::LogRecip => {}
        }
        Ok(())
    }

    /// Exponent of the pure power families, if any.
    fn power_exponent(&self) -> Option<f64> {
        match self {
            FunctionSpec::PowerPhi { n, p } | FunctionSpec::PowerPsi { n, p } => {
                Some(p / (*n as f64 + p))
            }
            FunctionSpec::Power { alpha } => Some(*alpha),
            _ => None,
        }
    }

    fn eval(&self, t: f64) -> f64 {
        match self {
            FunctionSpec::PowerPhi { .. } | FunctionSpec::PowerPsi { .. } | FunctionSpec::Power { .. } => {
                t.powf(self.power_exponent().unwrap())
            }
            FunctionSpec::Arctan { m } => t.powf(1.0 / *m as f64).atan(),
            FunctionSpec::Log1p => t.ln_1p(),
            FunctionSpec::LogRecip => t.recip().ln_1p(),
            FunctionSpec::Dual { of } => t * of.eval(t.recip()),
        }
    }

    fn kind(&self) -> Kind {
        match self {
            FunctionSpec::PowerPhi { .. } | FunctionSpec::Arctan { .. } | FunctionSpec::Log1p => {
                Kind::Concave
            }
            FunctionSpec::PowerPsi { .. } | FunctionSpec::LogRecip => Kind::Convex,
            FunctionSpec::Power { alpha } => {
                if (0.0..=1.0).contains(alpha) {
                    Kind::Concave
                } else {
                    Kind::Convex
                }
            }
            // the perspective t·f(1/t) preserves concavity and convexity
            FunctionSpec::Dual { of } => of.kind(),
        }
    }

    fn value_at_zero(&self) -> BoundaryValue {
        match self {
            FunctionSpec::Arctan { .. } | FunctionSpec::Log1p => BoundaryValue::Zero,
            FunctionSpec::LogRecip => BoundaryValue::Infinite,
            FunctionSpec::PowerPhi { .. } | FunctionSpec::PowerPsi { .. } | FunctionSpec::Power { .. } => {
                let a = self.power_exponent().unwrap();
                if a > 0.0 {
                    BoundaryValue::Zero
                } else if a == 0.0 {
                    BoundaryValue::Finite(1.0)
                } else {
                    BoundaryValue::Infinite
                }
            }
            // lim_{t→0} t f(1/t) = lim_{s→∞} f(s)/s, which vanishes for every
            // non-power family here (sublinear growth or decay)
            FunctionSpec::Dual { .. } => BoundaryValue::Zero,
        }
    }

    /// Closed-form dual when one exists, otherwise the generic wrapper.
    fn dual(&self) -> FunctionSpec {
        match self {
            FunctionSpec::PowerPhi { n, p } if *p > 0.0 => {
                let nf = *n as f64;
                FunctionSpec::PowerPhi { n: *n, p: nf * nf / p }
            }
            FunctionSpec::PowerPhi { .. } | FunctionSpec::PowerPsi { .. } | FunctionSpec::Power { .. } => {
                FunctionSpec::Power { alpha: 1.0 - self.power_exponent().unwrap() }
            }
            FunctionSpec::Dual { of } => (**of).clone(),
            other => FunctionSpec::Dual { of: Box::new(other.clone()) },
        }
    }

    /// Analytically known class membership.
    fn declared(&self) -> Option<DeclaredClasses> {
        let power = |a: f64| DeclaredClasses {
            conc: a > 0.0 && a < 1.0,
            conv: a < 0.0,
            conc_minus: a > 0.0 && a < 0.5,
            conc_plus: a > 0.5 && a < 1.0,
        };
        match self {
            FunctionSpec::PowerPhi { .. } | FunctionSpec::PowerPsi { .. } | FunctionSpec::Power { .. } => {
                Some(power(self.power_exponent().unwrap()))
            }
            FunctionSpec::Arctan { .. } => Some(DeclaredClasses {
                conc: true,
                conv: false,
                conc_minus: true,
                conc_plus: false,
            }),
            FunctionSpec::Log1p => Some(DeclaredClasses {
                conc: true,
                conv: false,
                conc_minus: false,
                conc_plus: false,
            }),
            FunctionSpec::LogRecip => Some(DeclaredClasses {
                conc: false,
                conv: true,
                conc_minus: false,
                conc_plus: false,
            }),
            FunctionSpec::Dual { of } => {
                let d = of.declared()?;
                // φ ∈ Conc ⟺ φ* ∈ Conc, with Conc⁻ and Conc⁺ exchanged; the
                // dual of a Conv function tends to 0 at 0 and so leaves Conv
                Some(DeclaredClasses {
                    conc: d.conc,
                    conv: false,
                    conc_minus: d.conc_plus,
                    conc_plus: d.conc_minus,
                })
            }
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::PowerPhi { n, p } => write!(f, "power_phi(n={n},p={p})"),
            FunctionSpec::PowerPsi { n, p } => write!(f, "power_psi(n={n},p={p})"),
            FunctionSpec::Arctan { m } => write!(f, "arctan(m={m})"),
            FunctionSpec::Log1p => write!(f, "log1p"),
            FunctionSpec::LogRecip => write!(f, "log_recip"),
            FunctionSpec::Power { alpha } => write!(f, "power(alpha={alpha})"),
            FunctionSpec::Dual { of } => write!(f, "dual({of})"),
        }
    }
}

/// Concave candidates are φ's, convex candidates are ψ's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Concave,
    Convex,
}

/// Value assigned at `t = 0`; drives the polytope convention (κ = 0 a.e.).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryValue {
    Zero,
    Finite(f64),
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct DeclaredClasses {
    conc: bool,
    conv: bool,
    conc_minus: bool,
    conc_plus: bool,
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Family {
    Spec(FunctionSpec),
    Custom { name: String, eval: Evaluator },
    CustomDual(Box<AdmissibleFunction>),
}

/// A φ or ψ candidate on `(0, ∞)`.
#[derive(Clone)]
pub struct AdmissibleFunction {
    family: Family,
    kind: Kind,
    at_zero: BoundaryValue,
}

impl fmt::Debug for AdmissibleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdmissibleFunction")
            .field("name", &self.name())
            .field("kind", &self.kind)
            .finish()
    }
}

impl AdmissibleFunction {
    /// Builds one of the closed-form families.
    pub fn builtin(spec: FunctionSpec) -> Result<Self> {
        spec.validate()?;
        Ok(AdmissibleFunction {
            kind: spec.kind(),
            at_zero: spec.value_at_zero(),
            family: Family::Spec(spec),
        })
    }

    pub fn power_phi(n: usize, p: f64) -> Result<Self> {
        Self::builtin(FunctionSpec::PowerPhi { n, p })
    }

    pub fn power_psi(n: usize, p: f64) -> Result<Self> {
        Self::builtin(FunctionSpec::PowerPsi { n, p })
    }

    pub fn arctan(m: u32) -> Result<Self> {
        Self::builtin(FunctionSpec::Arctan { m })
    }

    pub fn log1p() -> Self {
        Self::builtin(FunctionSpec::Log1p).unwrap()
    }

    pub fn log_recip() -> Self {
        Self::builtin(FunctionSpec::LogRecip).unwrap()
    }

    /// Arbitrary user evaluator. Classification of such functions is purely
    /// sampled.
    pub fn custom(
        name: impl Into<String>,
        kind: Kind,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        AdmissibleFunction {
            family: Family::Custom {
                name: name.into(),
                eval: Arc::new(eval),
            },
            kind,
            at_zero: match kind {
                Kind::Concave => BoundaryValue::Zero,
                Kind::Convex => BoundaryValue::Infinite,
            },
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: FunctionSpec = serde_json::from_str(s)?;
        Self::builtin(spec)
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match &self.family {
            Family::Spec(s) => s.eval(t),
            Family::Custom { eval, .. } => eval(t),
            Family::CustomDual(inner) => t * inner.eval(t.recip()),
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn value_at_zero(&self) -> BoundaryValue {
        self.at_zero
    }

    /// The closed-form descriptor, absent for custom evaluators.
    pub fn spec(&self) -> Option<&FunctionSpec> {
        match &self.family {
            Family::Spec(s) => Some(s),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match &self.family {
            Family::Spec(s) => s.to_string(),
            Family::Custom { name, .. } => name.clone(),
            Family::CustomDual(inner) => format!("dual({})", inner.name()),
        }
    }

    /// `φ*(t) = t φ(1/t)`, with a closed form attached when the family has one.
    pub fn dual(&self) -> AdmissibleFunction {
        match &self.family {
            Family::Spec(s) => AdmissibleFunction::builtin(s.dual())
                .expect("dual of a valid spec is valid"),
            Family::CustomDual(inner) => (**inner).clone(),
            Family::Custom { .. } => AdmissibleFunction {
                family: Family::CustomDual(Box::new(self.clone())),
                kind: self.kind,
                at_zero: BoundaryValue::Zero,
            },
        }
    }

    fn declared(&self) -> Option<DeclaredClasses> {
        self.spec().and_then(FunctionSpec::declared)
    }

    /// Conc⁻ / Conc⁺ / Conv membership without sampling when the family is
    /// known analytically; falls back to [`classify`].
    pub fn class_flags(&self, n: usize) -> Result<ClassFlags> {
        if let Some(d) = self.declared() {
            let (lim0, lim_inf) = sqrt_ratio_limits(self, &ProbeGrid::default());
            return Ok(ClassFlags {
                in_conc: d.conc,
                in_conv: d.conv,
                in_conc_minus: d.conc_minus,
                in_conc_plus: d.conc_plus,
                limit_at_0: lim0,
                limit_at_inf: lim_inf,
            });
        }
        let r = classify(self, n, DEFAULT_TOL)?;
        Ok(r.flags())
    }
}

/// Log-spaced probe grid used for every sampled class test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for ProbeGrid {
    fn default() -> Self {
        ProbeGrid {
            t_min: 1e-8,
            t_max: 1e8,
            points: 1000,
        }
    }
}

impl ProbeGrid {
    pub fn samples(&self) -> Vec<f64> {
        log_grid(self.t_min, self.t_max, self.points)
    }

    /// Index offset spanning one decade.
    fn decade(&self) -> usize {
        let decades = (self.t_max / self.t_min).log10();
        ((self.points - 1) as f64 / decades).round().max(1.0) as usize
    }
}

/// Estimated limit of `φ(t)/√t` at an end of `(0, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Limit {
    Finite,
    Infinite,
}

pub const DEFAULT_TOL: f64 = 1e-10;

/// Log-slope below which a trend toward 0 or ∞ is not asserted.
const SLOPE_TOL: f64 = 1e-3;
/// Growth ratio over the grid beyond which a limit is called infinite.
const INFINITE_RATIO: f64 = 1e3;
/// Relative slack for strict monotonicity of `φ(t)/√t`.
const MONOTONE_SLACK: f64 = 1e-12;

/// Sampled (and, for builtins, declared) class membership of a function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionClassReport {
    pub function: String,
    pub dimension: usize,
    pub in_conc: bool,
    pub in_conv: bool,
    pub in_conc_minus: bool,
    pub in_conc_plus: bool,
    pub submultiplicative: bool,
    /// `max_t f(t) f(1/t)` over the grid and where it is attained.
    pub submult_max: f64,
    pub submult_argmax: f64,
    pub limit_phi_over_sqrt_at_0: Limit,
    pub limit_phi_over_sqrt_at_inf: Limit,
    pub ye_admissible: bool,
    pub probe_grid: ProbeGrid,
    /// True when every flag comes from sampling alone.
    pub heuristic: bool,
    /// Flags where the analytic class tag overrode a disagreeing sample test.
    pub overridden: Vec<String>,
}

/// The subset of a report that the extremal module needs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassFlags {
    pub in_conc: bool,
    pub in_conv: bool,
    pub in_conc_minus: bool,
    pub in_conc_plus: bool,
    pub limit_at_0: Limit,
    pub limit_at_inf: Limit,
}

impl FunctionClassReport {
    pub fn flags(&self) -> ClassFlags {
        ClassFlags {
            in_conc: self.in_conc,
            in_conv: self.in_conv,
            in_conc_minus: self.in_conc_minus,
            in_conc_plus: self.in_conc_plus,
            limit_at_0: self.limit_phi_over_sqrt_at_0,
            limit_at_inf: self.limit_phi_over_sqrt_at_inf,
        }
    }
}

fn sample(f: &AdmissibleFunction, ts: &[f64]) -> Result<Vec<f64>> {
    ts.iter()
        .map(|&t| {
            let v = f.eval(t);
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(Error::InvalidFunction(format!(
                    "{} evaluates to {v} at t = {t:e}",
                    f.name()
                )))
            }
        })
        .collect()
}

/// Midpoint test over all probe pairs; `sign = 1` checks concavity,
/// `sign = -1` convexity.
fn midpoint_test(g: impl Fn(f64) -> f64, ts: &[f64], vals: &[f64], sign: f64, tol: f64) -> bool {
    for i in 0..ts.len() {
        for j in (i + 1)..ts.len() {
            let mid = g(0.5 * (ts[i] + ts[j]));
            if !mid.is_finite() {
                return false;
            }
            let avg = 0.5 * (vals[i] + vals[j]);
            let slack = tol * (1.0 + vals[i].abs() + vals[j].abs());
            if sign * (mid - avg) < -slack {
                return false;
            }
        }
    }
    true
}

fn log_slope(t0: f64, v0: f64, t1: f64, v1: f64) -> f64 {
    (v1 / v0).ln() / (t1 / t0).ln()
}

fn sqrt_ratio_limits(f: &AdmissibleFunction, grid: &ProbeGrid) -> (Limit, Limit) {
    let ts = grid.samples();
    let g: Vec<f64> = ts.iter().map(|&t| f.eval(t) / t.sqrt()).collect();
    let g1 = f.eval(1.0);
    let two = (2 * grid.decade()).min(ts.len() - 1);
    let last = ts.len() - 1;
    let s0 = log_slope(ts[0], g[0], ts[two], g[two]);
    let s_inf = log_slope(ts[last - two], g[last - two], ts[last], g[last]);
    let at0 = if s0 <= -SLOPE_TOL || g[0] >= INFINITE_RATIO * g1 {
        Limit::Infinite
    } else {
        Limit::Finite
    };
    let at_inf = if s_inf >= SLOPE_TOL || g[last] >= INFINITE_RATIO * g1 {
        Limit::Infinite
    } else {
        Limit::Finite
    };
    (at0, at_inf)
}

/// Sampled classification of `f` in dimension `n`.
///
/// Every test runs on the log-spaced probe grid; the result is heuristic for
/// arbitrary functions. For closed-form families the analytic class tags win,
/// and any disagreement is listed in `overridden`.
pub fn classify(f: &AdmissibleFunction, n: usize, tol: f64) -> Result<FunctionClassReport> {
    classify_on(f, n, tol, ProbeGrid::default())
}

pub fn classify_on(
    f: &AdmissibleFunction,
    n: usize,
    tol: f64,
    grid: ProbeGrid,
) -> Result<FunctionClassReport> {
    if n == 0 {
        return Err(Error::Parameter("dimension must be ≥ 1".into()));
    }
    let ts = grid.samples();
    let vals = sample(f, &ts)?;
    let last = ts.len() - 1;
    let dec = grid.decade().min(last);
    let f1 = f.eval(1.0);
    if !(f1.is_finite() && f1 > 0.0) {
        return Err(Error::InvalidFunction(format!("{} evaluates to {f1} at t = 1", f.name())));
    }

    let concave = midpoint_test(|t| f.eval(t), &ts, &vals, 1.0, tol);
    let convex = midpoint_test(|t| f.eval(t), &ts, &vals, -1.0, tol);

    let slope0 = log_slope(ts[0], vals[0], ts[dec], vals[dec]);
    let slope_inf = log_slope(ts[last - dec], vals[last - dec], ts[last], vals[last]);
    let to_zero_at_0 = slope0 >= SLOPE_TOL;
    let to_inf_at_0 = slope0 <= -SLOPE_TOL || vals[0] >= INFINITE_RATIO * f1;
    let sublinear_at_inf = slope_inf <= 1.0 - SLOPE_TOL;
    let to_zero_at_inf = slope_inf <= -SLOPE_TOL;

    let s_conc = concave && to_zero_at_0 && sublinear_at_inf;
    let s_conv = convex && to_inf_at_0 && to_zero_at_inf;

    let g: Vec<f64> = ts.iter().zip(&vals).map(|(t, v)| v / t.sqrt()).collect();
    let decreasing = g.windows(2).all(|w| w[1] - w[0] < -MONOTONE_SLACK * w[0].abs());
    let increasing = g.windows(2).all(|w| w[1] - w[0] > MONOTONE_SLACK * w[0].abs());
    let s_minus = s_conc && decreasing;
    let s_plus = s_conc && increasing;

    let (mut submult_max, mut submult_argmax) = (f64::NEG_INFINITY, 1.0);
    for &t in &ts {
        let prod = f.eval(t) * f.eval(t.recip());
        if prod > submult_max {
            submult_max = prod;
            submult_argmax = t;
        }
    }
    let submultiplicative = submult_max <= f1 * f1 * (1.0 + tol);

    let (lim0, lim_inf) = sqrt_ratio_limits(f, &grid);

    // F_n(t) = f(t^{n+1}) on the pre-image of the probe range
    let e = 1.0 / (n as f64 + 1.0);
    let ye_grid = ProbeGrid {
        t_min: grid.t_min.powf(e),
        t_max: grid.t_max.powf(e),
        points: grid.points,
    };
    let ye_ts = ye_grid.samples();
    let compose = |t: f64| f.eval(t.powi(n as i32 + 1));
    let ye_vals: Vec<f64> = ye_ts.iter().map(|&t| compose(t)).collect();
    let ye_admissible = match f.kind() {
        Kind::Concave => midpoint_test(compose, &ye_ts, &ye_vals, 1.0, tol),
        Kind::Convex => midpoint_test(compose, &ye_ts, &ye_vals, -1.0, tol),
    };

    let mut report = FunctionClassReport {
        function: f.name(),
        dimension: n,
        in_conc: s_conc,
        in_conv: s_conv,
        in_conc_minus: s_minus,
        in_conc_plus: s_plus,
        submultiplicative,
        submult_max,
        submult_argmax,
        limit_phi_over_sqrt_at_0: lim0,
        limit_phi_over_sqrt_at_inf: lim_inf,
        ye_admissible,
        probe_grid: grid,
        heuristic: true,
        overridden: Vec::new(),
    };

    if let Some(d) = f.declared() {
        report.heuristic = false;
        let mut changed = Vec::new();
        for (name, slot, exact) in [
            ("in_conc", &mut report.in_conc, d.conc),
            ("in_conv", &mut report.in_conv, d.conv),
            ("in_conc_minus", &mut report.in_conc_minus, d.conc_minus),
            ("in_conc_plus", &mut report.in_conc_plus, d.conc_plus),
        ] {
            if *slot != exact {
                *slot = exact;
                changed.push(name.to_string());
            }
        }
        report.overridden = changed;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sampled(f: &AdmissibleFunction, n: usize) -> FunctionClassReport {
        // classify a custom clone so the declared tags cannot mask sampling
        let g = f.clone();
        let custom = AdmissibleFunction::custom(f.name(), f.kind(), move |t| g.eval(t));
        classify(&custom, n, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn cube_root_is_conc_minus_and_submultiplicative() {
        let f = AdmissibleFunction::power_phi(2, 1.0).unwrap();
        assert!((f.eval(8.0) - 2.0).abs() < 1e-14);
        let r = sampled(&f, 2);
        assert!(r.in_conc && r.in_conc_minus && !r.in_conc_plus);
        assert!(r.submultiplicative);
        assert_eq!(r.limit_phi_over_sqrt_at_0, Limit::Infinite);
        assert!(r.heuristic);
        let exact = classify(&f, 2, DEFAULT_TOL).unwrap();
        assert!(!exact.heuristic && exact.overridden.is_empty());
    }

    #[test]
    fn sqrt_is_self_dual_and_in_neither_subclass() {
        let f = AdmissibleFunction::builtin(FunctionSpec::Power { alpha: 0.5 }).unwrap();
        let r = sampled(&f, 2);
        assert!(r.in_conc);
        assert!(!r.in_conc_minus && !r.in_conc_plus);
        let d = f.dual();
        for t in [1e-6, 0.3, 1.0, 7.0, 1e5] {
            assert!((d.eval(t) - t.sqrt()).abs() <= 1e-12 * t.sqrt());
        }
    }

    #[test]
    fn log1p_is_in_neither_subclass() {
        let r = sampled(&AdmissibleFunction::log1p(), 2);
        assert!(r.in_conc && !r.in_conc_minus && !r.in_conc_plus);
    }

    #[test]
    fn arctan_sqrt_is_conc_minus_and_submultiplicative() {
        let f = AdmissibleFunction::arctan(2).unwrap();
        let r = sampled(&f, 2);
        assert!(r.in_conc_minus && r.submultiplicative);
        assert_eq!(r.limit_phi_over_sqrt_at_0, Limit::Finite);
        let r3 = sampled(&AdmissibleFunction::arctan(3).unwrap(), 2);
        assert_eq!(r3.limit_phi_over_sqrt_at_0, Limit::Infinite);
    }

    #[test]
    fn arctan_derivative_matches_closed_form() {
        // φ_m'(t) = (1/m) (t^{(m-1)/m} + t^{(m+1)/m})^{-1}
        for m in [2u32, 3, 5] {
            let f = AdmissibleFunction::arctan(m).unwrap();
            let mf = m as f64;
            for t in [0.01, 0.5, 1.0, 3.0, 40.0] {
                let h = 1e-6 * t;
                let fd = (f.eval(t + h) - f.eval(t - h)) / (2.0 * h);
                let exact = 1.0 / mf / (t.powf((mf - 1.0) / mf) + t.powf((mf + 1.0) / mf));
                assert!((fd - exact).abs() < 1e-7 * exact.max(1.0), "m={m} t={t}");
            }
        }
    }

    #[test]
    fn power_psi_and_log_recip_are_conv() {
        let f = AdmissibleFunction::power_psi(2, -1.0).unwrap();
        assert!((f.eval(4.0) - 0.25).abs() < 1e-15);
        assert_eq!(f.kind(), Kind::Convex);
        assert_eq!(f.value_at_zero(), BoundaryValue::Infinite);
        assert!(sampled(&f, 2).in_conv);
        assert!(sampled(&AdmissibleFunction::log_recip(), 2).in_conv);
        assert!(!sampled(&AdmissibleFunction::log1p(), 2).in_conv);
    }

    #[test]
    fn power_dual_has_closed_form() {
        let (n, p) = (2usize, 1.0);
        let f = AdmissibleFunction::power_phi(n, p).unwrap();
        let d = f.dual();
        assert_eq!(d.spec(), Some(&FunctionSpec::PowerPhi { n, p: 4.0 }));
        for t in [1e-3f64, 0.7, 2.0, 1e4] {
            let want = t.powf(n as f64 / (n as f64 + p));
            assert!((d.eval(t) - want).abs() <= 1e-13 * want);
        }
    }

    #[test]
    fn out_of_range_parameters_are_rejected() {
        assert!(matches!(AdmissibleFunction::arctan(1), Err(Error::Parameter(_))));
        assert!(matches!(AdmissibleFunction::power_psi(2, -2.0), Err(Error::Parameter(_))));
        assert!(matches!(AdmissibleFunction::power_psi(2, 0.5), Err(Error::Parameter(_))));
        assert!(matches!(AdmissibleFunction::power_phi(2, -0.1), Err(Error::Parameter(_))));
    }

    #[test]
    fn invalid_evaluator_output_is_an_error() {
        let f = AdmissibleFunction::custom("bad", Kind::Concave, |t| t - 1.0);
        assert!(matches!(classify(&f, 2, DEFAULT_TOL), Err(Error::InvalidFunction(_))));
        let g = AdmissibleFunction::custom("nan", Kind::Concave, |t| if t > 1e7 { f64::NAN } else { 1.0 });
        assert!(matches!(classify(&g, 2, DEFAULT_TOL), Err(Error::InvalidFunction(_))));
    }

    #[test]
    fn json_function_specs_parse() {
        let f = AdmissibleFunction::from_json(r#"{"family":"power_phi","n":2,"p":1}"#).unwrap();
        assert!((f.eval(27.0) - 3.0).abs() < 1e-13);
        let g = AdmissibleFunction::from_json(r#"{"family":"arctan","m":2}"#).unwrap();
        assert!((g.eval(1.0) - PI / 4.0).abs() < 1e-15);
        assert!(AdmissibleFunction::from_json(r#"{"family":"log1p"}"#).is_ok());
        assert!(AdmissibleFunction::from_json(r#"{"family":"log_recip"}"#).is_ok());
        let h = AdmissibleFunction::from_json(r#"{"family":"power_psi","n":2,"p":-1}"#).unwrap();
        assert!((h.eval(2.0) - 0.5).abs() < 1e-15);
        assert!(AdmissibleFunction::from_json(r#"{"family":"bogus"}"#).is_err());
    }

    #[test]
    fn ye_condition_tracks_exponent() {
        // F_2(t) = t^{3α} is concave iff 3α ≤ 1
        let inside = AdmissibleFunction::builtin(FunctionSpec::Power { alpha: 0.3 }).unwrap();
        let outside = AdmissibleFunction::builtin(FunctionSpec::Power { alpha: 0.4 }).unwrap();
        assert!(classify(&inside, 2, DEFAULT_TOL).unwrap().ye_admissible);
        assert!(!classify(&outside, 2, DEFAULT_TOL).unwrap().ye_admissible);
        // arctan(t^{3/m}) is concave iff m ≥ 3
        assert!(!classify(&AdmissibleFunction::arctan(2).unwrap(), 2, DEFAULT_TOL).unwrap().ye_admissible);
        assert!(classify(&AdmissibleFunction::arctan(3).unwrap(), 2, DEFAULT_TOL).unwrap().ye_admissible);
    }
}
