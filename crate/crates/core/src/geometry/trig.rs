//! Real trigonometric polynomials `c0 + Σ_k (a_k cos kθ + b_k sin kθ)`.

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

/// Coefficients below this fraction of the largest one are dropped after a
/// transform.
const TRIM_RELATIVE: f64 = 1e-16;
/// Degree from which grid sampling goes through the FFT.
const FFT_MIN_DEGREE: usize = 24;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrigSeries {
    pub c0: f64,
    /// `cos[k-1]` multiplies `cos kθ`.
    pub cos: Vec<f64>,
    /// `sin[k-1]` multiplies `sin kθ`.
    pub sin: Vec<f64>,
}

impl TrigSeries {
    pub fn constant(c0: f64) -> Self {
        TrigSeries {
            c0,
            cos: Vec::new(),
            sin: Vec::new(),
        }
    }

    pub fn new(c0: f64, mut cos: Vec<f64>, mut sin: Vec<f64>) -> Self {
        let d = cos.len().max(sin.len());
        cos.resize(d, 0.0);
        sin.resize(d, 0.0);
        TrigSeries { c0, cos, sin }
    }

    pub fn degree(&self) -> usize {
        self.cos.len()
    }

    pub fn cos_coeff(&self, k: usize) -> f64 {
        if k == 0 {
            self.c0
        } else {
            self.cos.get(k - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn sin_coeff(&self, k: usize) -> f64 {
        self.sin.get(k.wrapping_sub(1)).copied().unwrap_or(0.0)
    }

    pub fn set_harmonic(&mut self, k: usize, a: f64, b: f64) {
        assert!(k >= 1);
        if self.cos.len() < k {
            self.cos.resize(k, 0.0);
            self.sin.resize(k, 0.0);
        }
        self.cos[k - 1] = a;
        self.sin[k - 1] = b;
    }

    pub fn scaled(&self, s: f64) -> Self {
        TrigSeries {
            c0: self.c0 * s,
            cos: self.cos.iter().map(|a| a * s).collect(),
            sin: self.sin.iter().map(|b| b * s).collect(),
        }
    }

    /// Value and first two derivatives at `theta`.
    pub fn eval3(&self, theta: f64) -> [f64; 3] {
        let step = Complex::new(theta.cos(), theta.sin());
        let mut z = Complex::new(1.0, 0.0);
        let (mut h, mut d1, mut d2) = (self.c0, 0.0, 0.0);
        for (i, (&a, &b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let k = (i + 1) as f64;
            // resynchronize the rotation periodically to bound drift
            z = if i % 64 == 63 {
                Complex::new((k * theta).cos(), (k * theta).sin())
            } else {
                z * step
            };
            let (c, s) = (z.re, z.im);
            h += a * c + b * s;
            d1 += k * (b * c - a * s);
            d2 -= k * k * (a * c + b * s);
        }
        [h, d1, d2]
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let step = Complex::new(theta.cos(), theta.sin());
        let mut z = Complex::new(1.0, 0.0);
        let mut h = self.c0;
        for (i, (&a, &b)) in self.cos.iter().zip(&self.sin).enumerate() {
            z = if i % 64 == 63 {
                let k = (i + 1) as f64;
                Complex::new((k * theta).cos(), (k * theta).sin())
            } else {
                z * step
            };
            h += a * z.re + b * z.im;
        }
        h
    }

    /// `h + h''` at `theta`.
    pub fn curvature_radius(&self, theta: f64) -> f64 {
        let [h, _, d2] = self.eval3(theta);
        h + d2
    }

    /// Values on the uniform grid of `n` points.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        if self.degree() >= FFT_MIN_DEGREE {
            return self.synthesize(n, 0);
        }
        (0..n).map(|k| self.eval(grid_angle(k, n))).collect()
    }

    /// `(h, h', h'')` on the uniform grid of `n` points.
    pub fn sample3(&self, n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        if self.degree() >= FFT_MIN_DEGREE {
            return (self.synthesize(n, 0), self.synthesize(n, 1), self.synthesize(n, 2));
        }
        let mut h = Vec::with_capacity(n);
        let mut d1 = Vec::with_capacity(n);
        let mut d2 = Vec::with_capacity(n);
        for k in 0..n {
            let [a, b, c] = self.eval3(grid_angle(k, n));
            h.push(a);
            d1.push(b);
            d2.push(c);
        }
        (h, d1, d2)
    }

    /// `order`-th derivative on the grid by one inverse FFT. Harmonics at or
    /// above `n` are folded onto their aliases, which is exact at the nodes.
    fn synthesize(&self, n: usize, order: u32) -> Vec<f64> {
        let mut buf = vec![Complex::new(0.0, 0.0); n];
        if order == 0 {
            buf[0].re = self.c0;
        }
        for (i, (&a, &b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let k = (i + 1) as f64;
            // Re((a - ib)(ik)^order e^{ikθ})
            let c = Complex::new(a, -b) * Complex::new(0.0, k).powu(order);
            buf[(i + 1) % n] += c;
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }

    /// Trigonometric interpolant of samples on the uniform grid. The Nyquist
    /// mode is discarded, so an even `n` yields degree at most `n/2 - 1`.
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        assert!(n >= 2, "need at least two samples");
        let mut buf: Vec<Complex<f64>> = samples.iter().map(|&x| Complex::new(x, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = 2.0 / n as f64;
        let top = (n - 1) / 2;
        let mut cos = Vec::with_capacity(top);
        let mut sin = Vec::with_capacity(top);
        for c in buf.iter().take(top + 1).skip(1) {
            // X_k = Σ x_j e^{-ikθ_j} = (n/2)(a_k - i b_k)
            cos.push(c.re * scale);
            sin.push(-c.im * scale);
        }
        let mut series = TrigSeries {
            c0: buf[0].re / n as f64,
            cos,
            sin,
        };
        series.trim(TRIM_RELATIVE);
        series
    }

    /// Drops trailing harmonics whose magnitude is below `rel` times the
    /// largest coefficient.
    pub fn trim(&mut self, rel: f64) {
        let big = self
            .cos
            .iter()
            .chain(&self.sin)
            .fold(self.c0.abs(), |m, x| m.max(x.abs()));
        let cut = big * rel;
        let mut d = self.cos.len();
        while d > 0 && self.cos[d - 1].abs() <= cut && self.sin[d - 1].abs() <= cut {
            d -= 1;
        }
        self.cos.truncate(d);
        self.sin.truncate(d);
    }

    /// Magnitude of the highest retained harmonic relative to `c0`; a cheap
    /// resolution indicator for interpolated series.
    pub fn tail_ratio(&self) -> f64 {
        match self.degree() {
            0 => 0.0,
            d => self.cos[d - 1].hypot(self.sin[d - 1]) / self.c0.abs().max(f64::MIN_POSITIVE),
        }
    }
}

#[inline]
pub fn grid_angle(k: usize, n: usize) -> f64 {
    2.0 * std::f64::consts::PI * k as f64 / n as f64
}
