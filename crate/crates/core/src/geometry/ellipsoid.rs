//! Origin-centered ellipsoids `R·diag(a)·B_n` in any dimension.

use crate::error::{Error, Result};
use crate::numeric::unit_ball_volume;

#[derive(Clone, Debug, PartialEq)]
pub struct EllipsoidN {
    axes: Vec<f64>,
    /// Row-major `n×n` orthogonal matrix whose columns are the principal
    /// directions.
    rotation: Vec<f64>,
    /// Planar rotation angle, kept for specs and reports.
    angle: Option<f64>,
}

impl EllipsoidN {
    pub fn new(axes: Vec<f64>, rotation: Option<Vec<Vec<f64>>>) -> Result<Self> {
        let n = axes.len();
        if n == 0 {
            return Err(Error::Parameter("ellipsoid needs at least one axis".into()));
        }
        if let Some(a) = axes.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::Parameter(format!("semi-axes must be positive, got {a}")));
        }
        let rotation = match rotation {
            None => identity(n),
            Some(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Parameter(format!("rotation must be {n}×{n}")));
                }
                let flat: Vec<f64> = rows.into_iter().flatten().collect();
                check_orthogonal(&flat, n)?;
                flat
            }
        };
        Ok(EllipsoidN {
            axes,
            rotation,
            angle: None,
        })
    }

    /// Planar ellipse with semi-axes `(a, b)`, the first along angle `angle`.
    pub fn planar(a: f64, b: f64, angle: f64) -> Result<Self> {
        let (s, c) = angle.sin_cos();
        let mut e = Self::new(vec![a, b], None)?;
        e.rotation = vec![c, -s, s, c];
        e.angle = Some(angle);
        Ok(e)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[f64] {
        &self.axes
    }

    pub fn angle(&self) -> Option<f64> {
        if self.dim() == 2 {
            Some(self.angle.unwrap_or_else(|| self.rotation[2].atan2(self.rotation[0])))
        } else {
            None
        }
    }

    pub fn rotation_rows(&self) -> Vec<Vec<f64>> {
        self.rotation.chunks(self.dim()).map(<[f64]>::to_vec).collect()
    }

    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.dim()) * self.axes.iter().product::<f64>()
    }

    pub fn min_axis(&self) -> f64 {
        self.axes.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_axis(&self) -> f64 {
        self.axes.iter().copied().fold(0.0, f64::max)
    }

    /// `h(u) = |diag(a) Rᵀ u|`.
    pub fn support_dir(&self, u: &[f64]) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|j| {
                let proj: f64 = (0..n).map(|i| self.rotation[i * n + j] * u[i]).sum();
                (self.axes[j] * proj).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn support(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.support_dir(&[c, s])
    }

    pub fn polar(&self) -> Self {
        EllipsoidN {
            axes: self.axes.iter().map(|a| a.recip()).collect(),
            rotation: self.rotation.clone(),
            angle: self.angle,
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        EllipsoidN {
            axes: self.axes.iter().map(|a| a * s).collect(),
            rotation: self.rotation.clone(),
            angle: self.angle,
        }
    }

    /// Image `A·E` of a planar ellipse, via the eigen-decomposition of
    /// `M Mᵀ` with `M = A R diag(a)`.
    pub fn mapped(&self, a: [[f64; 2]; 2]) -> Result<Self> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch(self.dim(), 2));
        }
        let r = &self.rotation;
        let m = [
            [
                (a[0][0] * r[0] + a[0][1] * r[2]) * self.axes[0],
                (a[0][0] * r[1] + a[0][1] * r[3]) * self.axes[1],
            ],
            [
                (a[1][0] * r[0] + a[1][1] * r[2]) * self.axes[0],
                (a[1][0] * r[1] + a[1][1] * r[3]) * self.axes[1],
            ],
        ];
        let p = m[0][0] * m[0][0] + m[0][1] * m[0][1];
        let q = m[0][0] * m[1][0] + m[0][1] * m[1][1];
        let w = m[1][0] * m[1][0] + m[1][1] * m[1][1];
        let (l1, l2, angle) = sym_eigen(p, q, w);
        Self::planar(l1.sqrt(), l2.sqrt(), angle)
    }
}

/// Eigenvalues `λ1 ≥ λ2` of `[[p, q], [q, w]]` and the angle of the first
/// eigenvector.
pub fn sym_eigen(p: f64, q: f64, w: f64) -> (f64, f64, f64) {
    let mean = 0.5 * (p + w);
    let rad = (0.5 * (p - w)).hypot(q);
    let angle = 0.5 * (2.0 * q).atan2(p - w);
    (mean + rad, mean - rad, angle)
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

fn check_orthogonal(r: &[f64], n: usize) -> Result<()> {
    for i in 0..n {
        for j in 0..n {
            let dot: f64 = (0..n).map(|k| r[k * n + i] * r[k * n + j]).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            if (dot - want).abs() > 1e-12 {
                return Err(Error::Parameter(format!(
                    "rotation is not orthogonal (RᵀR entry ({i},{j}) = {dot})"
                )));
            }
        }
    }
    Ok(())
}
