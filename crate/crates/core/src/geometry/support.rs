//! Planar convex bodies given by a smooth periodic support function.

use super::trig::{grid_angle, TrigSeries};
use crate::error::{Error, Result};
use crate::numeric::periodic_min_from;
use std::f64::consts::{FRAC_PI_2, PI};

/// Planar body with support function `h(θ)` and curvature radius
/// `ρ = h + h'' ≥ floor > 0`.
///
/// The body is carried by a trigonometric series. For Fourier specs the
/// series is the body itself; otherwise it is the trigonometric interpolant of
/// the `grid` support samples, so derivatives are spectral in both cases.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportBody2D {
    series: TrigSeries,
    grid: usize,
    h: Vec<f64>,
    exact: bool,
}

impl SupportBody2D {
    /// Body whose support function is exactly `series`.
    pub fn from_series(series: TrigSeries, grid: usize, floor: f64) -> Result<Self> {
        check_grid(grid)?;
        let h = series.sample(grid);
        let body = SupportBody2D {
            series,
            grid,
            h,
            exact: true,
        };
        body.validate(floor)?;
        Ok(body)
    }

    /// Body interpolating support samples on the uniform grid.
    pub fn from_samples(samples: Vec<f64>, floor: f64) -> Result<Self> {
        check_grid(samples.len())?;
        if let Some(bad) = samples.iter().find(|x| !x.is_finite()) {
            return Err(Error::Quadrature(format!("non-finite support sample {bad}")));
        }
        let series = TrigSeries::from_samples(&samples);
        let body = SupportBody2D {
            series,
            grid: samples.len(),
            h: samples,
            exact: false,
        };
        body.validate(floor)?;
        Ok(body)
    }

    /// Samples `support(θ)` on `grid` points and interpolates.
    pub fn from_support_fn(support: impl Fn(f64) -> f64, grid: usize, floor: f64) -> Result<Self> {
        check_grid(grid)?;
        let samples = (0..grid).map(|k| support(grid_angle(k, grid))).collect();
        Self::from_samples(samples, floor)
    }

    fn validate(&self, floor: f64) -> Result<()> {
        let min_h = self.min_support();
        if !(min_h > 0.0) {
            return Err(Error::NotStarShaped { min_h });
        }
        let min_rho = self.min_curvature_radius();
        if !(min_rho >= floor) {
            return Err(Error::Nonconvex { min_rho, floor });
        }
        Ok(())
    }

    pub fn series(&self) -> &TrigSeries {
        &self.series
    }

    /// The Fourier representation the body was built from, when it was
    /// constructed spectrally.
    pub fn fourier(&self) -> Option<&TrigSeries> {
        self.exact.then_some(&self.series)
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    /// Support samples on the body's own grid.
    pub fn samples(&self) -> &[f64] {
        &self.h
    }

    #[inline]
    pub fn support(&self, theta: f64) -> f64 {
        self.series.eval(theta)
    }

    /// `(h, h', h'')` at `theta`.
    #[inline]
    pub fn eval3(&self, theta: f64) -> [f64; 3] {
        self.series.eval3(theta)
    }

    pub fn curvature_radius(&self, theta: f64) -> f64 {
        self.series.curvature_radius(theta)
    }

    /// Boundary point with outer normal `u(θ)`: `x = h u + h' u⊥`.
    pub fn boundary_point(&self, theta: f64) -> [f64; 2] {
        let [h, d1, _] = self.eval3(theta);
        let (s, c) = theta.sin_cos();
        [h * c - d1 * s, h * s + d1 * c]
    }

    fn check_points(&self) -> usize {
        self.grid.max(4 * self.series.degree() + 16)
    }

    /// Refined minimum of `h` (inradius about the origin).
    pub fn min_support(&self) -> f64 {
        let h = self.series.sample(self.check_points());
        periodic_min_from(|t| self.support(t), &h, 4).1
    }

    /// Refined maximum of `h` (circumradius about the origin).
    pub fn max_support(&self) -> f64 {
        let neg: Vec<f64> = self.series.sample(self.check_points()).iter().map(|h| -h).collect();
        -periodic_min_from(|t| -self.support(t), &neg, 4).1
    }

    pub fn min_curvature_radius(&self) -> f64 {
        let (h, _, d2) = self.series.sample3(self.check_points());
        let rho: Vec<f64> = h.iter().zip(&d2).map(|(h, d2)| h + d2).collect();
        periodic_min_from(|t| self.curvature_radius(t), &rho, 4).1
    }

    /// Quadrature points sufficient to integrate cubic products of the
    /// series exactly.
    pub fn quadrature_points(&self) -> usize {
        let need = 3 * self.series.degree() + 2;
        let n = self.grid.max(need);
        n + (n % 2)
    }

    /// Area and centroid via `|K| = ½∮ h ρ dθ` and
    /// `∫_K x dx = ⅓∮ x h ρ dθ`.
    pub fn area_centroid(&self) -> (f64, [f64; 2]) {
        let m = self.quadrature_points();
        let w = 2.0 * PI / m as f64;
        let (hs, d1s, d2s) = self.series.sample3(m);
        let (mut area, mut gx, mut gy) = (0.0, 0.0, 0.0);
        for k in 0..m {
            let t = grid_angle(k, m);
            let (h, d1) = (hs[k], d1s[k]);
            let rho = h + d2s[k];
            let (s, c) = t.sin_cos();
            let x = [h * c - d1 * s, h * s + d1 * c];
            area += h * rho;
            gx += x[0] * h * rho;
            gy += x[1] * h * rho;
        }
        let area = 0.5 * area * w;
        (area, [gx * w / (3.0 * area), gy * w / (3.0 * area)])
    }

    /// Translate by `-g`: `h(u) ↦ h(u) - ⟨g, u⟩`, exact on the series.
    pub fn translated(&self, g: [f64; 2], floor: f64) -> Result<Self> {
        let mut series = self.series.clone();
        let (a1, b1) = (series.cos_coeff(1), series.sin_coeff(1));
        series.set_harmonic(1, a1 - g[0], b1 - g[1]);
        let h = series.sample(self.grid);
        let body = SupportBody2D {
            series,
            grid: self.grid,
            h,
            exact: self.exact,
        };
        body.validate(floor)?;
        Ok(body)
    }

    pub fn scaled(&self, s: f64) -> Self {
        SupportBody2D {
            series: self.series.scaled(s),
            grid: self.grid,
            h: self.h.iter().map(|x| x * s).collect(),
            exact: self.exact,
        }
    }

    /// Polar body on the same grid.
    ///
    /// The boundary point with normal angle θ sits at polar angle
    /// `β(θ) = θ + atan(h'/h)`, strictly increasing with `β' = hρ/|x|²`.
    /// For each grid angle β we invert this map by safeguarded Newton on
    /// the series and set `h°(β) = 1/|x(θ)|`.
    pub fn polar(&self, floor: f64) -> Result<Self> {
        let n = self.grid;
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let beta = grid_angle(k, n);
            let theta = self.invert_normal_angle(beta)?;
            let [h, d1, _] = self.eval3(theta);
            out.push(h.hypot(d1).recip());
        }
        Self::from_samples(out, floor)
    }

    /// Normal angle θ of the boundary point at polar angle `beta`.
    pub fn invert_normal_angle(&self, beta: f64) -> Result<f64> {
        let resid = |theta: f64| -> (f64, f64) {
            let [h, d1, d2] = self.eval3(theta);
            let f = theta + d1.atan2(h) - beta;
            let slope = h * (h + d2) / (h * h + d1 * d1);
            (f, slope)
        };
        let (mut lo, mut hi) = (beta - FRAC_PI_2, beta + FRAC_PI_2);
        let [h0, d0, _] = self.eval3(beta);
        let mut theta = beta - d0.atan2(h0);
        for _ in 0..100 {
            let (f, slope) = resid(theta);
            if !(slope > 0.0) {
                return Err(Error::Resampling(format!(
                    "boundary angle not increasing at θ = {theta}"
                )));
            }
            if f.abs() < 1e-15 {
                return Ok(theta);
            }
            if f > 0.0 {
                hi = hi.min(theta);
            } else {
                lo = lo.max(theta);
            }
            let mut next = theta - f / slope;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - theta).abs() < 1e-16 * (1.0 + theta.abs()) {
                return Ok(next);
            }
            theta = next;
        }
        let (f, _) = resid(theta);
        if f.abs() < 1e-12 {
            Ok(theta)
        } else {
            Err(Error::Resampling(format!("no convergence at β = {beta}")))
        }
    }
}

fn check_grid(n: usize) -> Result<()> {
    if n < 64 || !n.is_multiple_of(2) {
        return Err(Error::Parameter(format!("grid size must be even and ≥ 64, got {n}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLOOR: f64 = 1e-8;

    #[test]
    fn disk_area_and_centroid() {
        let b = SupportBody2D::from_series(TrigSeries::constant(1.0), 256, FLOOR).unwrap();
        let (a, g) = b.area_centroid();
        assert!((a - PI).abs() < 1e-14);
        assert!(g[0].abs() < 1e-15 && g[1].abs() < 1e-15);
    }

    #[test]
    fn offset_disk_centroid_is_its_center() {
        let s = TrigSeries::new(1.0, vec![0.3], vec![-0.2]);
        let b = SupportBody2D::from_series(s, 128, FLOOR).unwrap();
        let (a, g) = b.area_centroid();
        assert!((a - PI).abs() < 1e-13);
        assert!((g[0] - 0.3).abs() < 1e-14 && (g[1] + 0.2).abs() < 1e-14);
        let c = b.translated(g, FLOOR).unwrap();
        assert!((c.series().cos_coeff(1)).abs() < 1e-14);
        assert!((c.series().sin_coeff(1)).abs() < 1e-14);
    }

    #[test]
    fn nonconvex_and_non_star_shaped_are_rejected() {
        // ρ = 1 - 3·0.5 cos 2θ dips below zero
        let s = TrigSeries::new(1.0, vec![0.0, 0.5], vec![]);
        assert!(matches!(
            SupportBody2D::from_series(s, 256, FLOOR),
            Err(Error::Nonconvex { .. })
        ));
        let s = TrigSeries::new(0.5, vec![1.0], vec![]);
        assert!(matches!(
            SupportBody2D::from_series(s, 256, FLOOR),
            Err(Error::NotStarShaped { .. })
        ));
    }

    #[test]
    fn polar_of_disk_of_radius_two() {
        let b = SupportBody2D::from_series(TrigSeries::constant(2.0), 128, FLOOR).unwrap();
        let p = b.polar(FLOOR).unwrap();
        for x in p.samples() {
            assert!((x - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn polar_of_sampled_ellipse_is_reciprocal_ellipse() {
        let (a, b) = (2.0, 0.5);
        let e = SupportBody2D::from_support_fn(
            |t: f64| (a * a * t.cos().powi(2) + b * b * t.sin().powi(2)).sqrt(),
            512,
            FLOOR,
        )
        .unwrap();
        let p = e.polar(FLOOR).unwrap();
        for k in 0..512 {
            let t = grid_angle(k, 512);
            let want = (t.cos().powi(2) / (a * a) + t.sin().powi(2) / (b * b)).sqrt();
            assert!((p.samples()[k] - want).abs() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn odd_or_small_grids_are_rejected() {
        assert!(SupportBody2D::from_series(TrigSeries::constant(1.0), 63, FLOOR).is_err());
        assert!(SupportBody2D::from_series(TrigSeries::constant(1.0), 32, FLOOR).is_err());
    }
}
