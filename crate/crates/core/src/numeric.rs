//! Small numerical helpers shared by the geometry and evaluation modules.

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// Volume of the Euclidean unit ball in dimension `n`, via
/// `|B_n| = 2π/n · |B_{n-2}|`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Surface area of the unit sphere, `|∂B_n| = n|B_n|`.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// `count` log-spaced points covering `[lo, hi]` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|i| {
            let s = a + (b - a) * i as f64 / (count - 1) as f64;
            10f64.powf(s)
        })
        .collect()
}

/// Uniform periodic grid `θ_k = 2πk/n`.
pub fn angle_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
/// Returns `(argmin, min)`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // the bracket endpoints can beat the midpoint on V-shaped minima
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |best, cand| if cand.1 < best.1 { cand } else { best })
}

/// Minimum of a 2π-periodic function: coarse scan on `n` nodes, then
/// golden-section refinement around the `candidates` smallest nodes.
pub fn periodic_min(f: impl Fn(f64) -> f64, n: usize, candidates: usize) -> (f64, f64) {
    let step = 2.0 * PI / n as f64;
    let nodes: Vec<f64> = (0..n).map(|k| f(k as f64 * step)).collect();
    periodic_min_from(f, &nodes, candidates)
}

/// [`periodic_min`] with the coarse scan already evaluated at `2πk/n`.
pub fn periodic_min_from(f: impl Fn(f64) -> f64, nodes: &[f64], candidates: usize) -> (f64, f64) {
    let step = 2.0 * PI / nodes.len() as f64;
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| nodes[a].total_cmp(&nodes[b]).then(a.cmp(&b)));
    let mut best = (order[0] as f64 * step, nodes[order[0]]);
    for &k in order.iter().take(candidates.max(1)) {
        let center = k as f64 * step;
        let cand = golden_min(&f, center - step, center + step, 1e-13);
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}

/// Nonnegative extended real used for affine surface areas and bounds.
///
/// Zero and infinity are kept symbolic so that the polytope conventions never
/// leak IEEE infinities into reports. Serialized as `0`, a JSON number, or
/// the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended {
    Zero,
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn from_f64(x: f64) -> Self {
        if x.is_infinite() {
            Extended::Infinite
        } else if x == 0.0 {
            Extended::Zero
        } else {
            Extended::Finite(x)
        }
    }

    /// Numeric view; `Infinite` maps to `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        match self {
            Extended::Zero => 0.0,
            Extended::Finite(x) => x,
            Extended::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Infinite => None,
            other => Some(other.as_f64()),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinite)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Zero => write!(f, "0"),
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Zero => s.serialize_u64(0),
            Extended::Finite(x) => s.serialize_f64(*x),
            Extended::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ExtVisitor;
        impl Visitor<'_> for ExtVisitor {
            type Value = Extended;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Extended, E> {
                Ok(Extended::from_f64(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Extended, E> {
                Ok(Extended::from_f64(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Extended, E> {
                Ok(Extended::from_f64(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Extended, E> {
                match v {
                    "inf" => Ok(Extended::Infinite),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(ExtVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn log_grid_endpoints_and_symmetry() {
        let g = log_grid(1e-8, 1e8, 1000);
        assert_eq!(g.len(), 1000);
        assert!((g[0] - 1e-8).abs() < 1e-22);
        assert!((g[999] - 1e8).abs() < 1e-6);
        for i in 0..1000 {
            assert!((g[i] * g[999 - i] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn golden_finds_v_shaped_min() {
        let (x, fx) = golden_min(|t| (t - 0.3).abs() + 1.0, -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-9);
        assert!((fx - 1.0).abs() < 1e-9);
    }

    #[test]
    fn periodic_min_of_cosine() {
        let (x, fx) = periodic_min(|t| (t - 1.0).cos(), 16, 2);
        assert!((fx + 1.0).abs() < 1e-12);
        assert!((x - (1.0 + PI)).abs() < 1e-5);
    }

    #[test]
    fn extended_json() {
        let v = vec![Extended::Zero, Extended::Finite(2.5), Extended::Infinite];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[0,2.5,"inf"]"#);
        let back: Vec<Extended> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
