//! Convex polygons containing the origin.

use crate::error::{Error, Result};

/// Counterclockwise, strictly convex vertex list with the origin strictly
/// inside.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon2D {
    vertices: Vec<[f64; 2]>,
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

impl Polygon2D {
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        let m = vertices.len();
        if m < 3 {
            return Err(Error::Parameter(format!("polygon needs at least 3 vertices, got {m}")));
        }
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("non-finite polygon vertex".into()));
        }
        for i in 0..m {
            let c = cross(vertices[i], vertices[(i + 1) % m], vertices[(i + 2) % m]);
            if !(c > 0.0) {
                return Err(Error::Parameter(format!(
                    "vertices must be strictly convex and counterclockwise (turn {i} has cross product {c:e})"
                )));
            }
        }
        let p = Polygon2D { vertices };
        let worst = p
            .edge_offsets()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if !(worst > 0.0) {
            return Err(Error::OriginOutside(format!(
                "smallest edge offset is {worst:e}"
            )));
        }
        Ok(p)
    }

    /// Regular `m`-gon with circumradius `r`, first vertex at angle `phase`.
    pub fn regular(m: usize, r: f64, phase: f64) -> Result<Self> {
        let v = (0..m)
            .map(|k| {
                let t = phase + 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        Self::new(v)
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    /// Outer normals (unnormalized `(dy, -dx)`) paired with `⟨n, v_i⟩`.
    fn edges(&self) -> impl Iterator<Item = ([f64; 2], f64)> + '_ {
        let m = self.vertices.len();
        (0..m).map(move |i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % m];
            let n = [b[1] - a[1], a[0] - b[0]];
            (n, n[0] * a[0] + n[1] * a[1])
        })
    }

    /// Distance from the origin to each edge line.
    fn edge_offsets(&self) -> Vec<f64> {
        self.edges().map(|(n, c)| c / n[0].hypot(n[1])).collect()
    }

    /// Each edge as `(normal angle, distance to the origin)`, so that the
    /// polygon is `⋂ {x : ⟨x, u(θ_i)⟩ ≤ c_i}`.
    pub fn facets(&self) -> Vec<(f64, f64)> {
        self.edges()
            .map(|(n, c)| (n[1].atan2(n[0]), c / n[0].hypot(n[1])))
            .collect()
    }

    pub fn support(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.vertices
            .iter()
            .map(|v| v[0] * c + v[1] * s)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn area_centroid(&self) -> (f64, [f64; 2]) {
        let m = self.vertices.len();
        let (mut a, mut gx, mut gy) = (0.0, 0.0, 0.0);
        for i in 0..m {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % m];
            let w = p[0] * q[1] - q[0] * p[1];
            a += w;
            gx += (p[0] + q[0]) * w;
            gy += (p[1] + q[1]) * w;
        }
        let a = 0.5 * a;
        (a, [gx / (6.0 * a), gy / (6.0 * a)])
    }

    pub fn inradius(&self) -> f64 {
        self.edge_offsets().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn circumradius(&self) -> f64 {
        self.vertices.iter().map(|v| v[0].hypot(v[1])).fold(0.0, f64::max)
    }

    /// Dual polygon: edge `{⟨n, x⟩ = c}` maps to the vertex `n / c`.
    pub fn polar(&self) -> Result<Self> {
        Self::new(self.edges().map(|(n, c)| [n[0] / c, n[1] / c]).collect())
    }

    pub fn translated(&self, g: [f64; 2]) -> Result<Self> {
        Self::new(self.vertices.iter().map(|v| [v[0] - g[0], v[1] - g[1]]).collect())
    }

    pub fn mapped(&self, a: [[f64; 2]; 2]) -> Result<Self> {
        Self::new(
            self.vertices
                .iter()
                .map(|v| [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]])
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polygon2D {
        Polygon2D::new(vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]).unwrap()
    }

    #[test]
    fn square_moments_support_and_polar() {
        let s = square();
        let (a, g) = s.area_centroid();
        assert_eq!(a, 4.0);
        assert_eq!(g, [0.0, 0.0]);
        assert!((s.support(std::f64::consts::FRAC_PI_4) - 2f64.sqrt()).abs() < 1e-15);
        let p = s.polar().unwrap();
        // polar of the cube [-1,1]^2 is the cross-polytope |x|+|y| ≤ 1
        assert!((p.area_centroid().0 - 2.0).abs() < 1e-15);
        assert!((p.support(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_clockwise_and_origin_outside() {
        assert!(Polygon2D::new(vec![[1.0, 1.0], [1.0, -1.0], [-1.0, -1.0], [-1.0, 1.0]]).is_err());
        assert!(matches!(
            Polygon2D::new(vec![[1.0, 1.0], [2.0, 1.0], [2.0, 2.0]]),
            Err(Error::OriginOutside(_))
        ));
    }

    #[test]
    fn bipolar_is_identity() {
        let p = Polygon2D::regular(5, 1.3, 0.2).unwrap();
        let pp = p.polar().unwrap().polar().unwrap();
        // dualizing twice shifts the vertex labels by one
        let m = p.vertices().len();
        for i in 0..m {
            let (a, b) = (p.vertices()[(i + 1) % m], pp.vertices()[i]);
            assert!((a[0] - b[0]).abs() < 1e-14 && (a[1] - b[1]).abs() < 1e-14);
        }
    }
}
