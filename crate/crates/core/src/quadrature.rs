//! Quadrature rules: radial, boundary (sphere at infinity) and spectral grids.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{orthonormal_complement, BoundaryPoint, Dim, Vec3};

/// Gauss–Legendre nodes and weights on [-1, 1], nodes ascending.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    fn compute(n: usize) -> Self {
        assert!(n > 0);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[m - 1] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Cached rule of exactly `n` nodes.
    pub fn get(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("quadrature cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussLegendre::compute(n)))
            .clone()
    }

    /// Cached rule with at least `n` nodes, rounded up to a fixed ladder so the
    /// cache stays small.
    pub fn at_least(n: usize) -> Arc<GaussLegendre> {
        const LADDER: [usize; 16] = [
            8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512, 768, 1024, 1536,
        ];
        let size = LADDER.iter().copied().find(|&k| k >= n).unwrap_or(2048);
        Self::get(size)
    }

    /// Nodes and weights mapped affinely onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        (
            self.nodes.iter().map(|x| c + h * x).collect(),
            self.weights.iter().map(|w| h * w).collect(),
        )
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule for `dr` on `[start, end]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub start: f64,
    pub end: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RadialGrid {
    pub fn new(n: usize, start: f64, end: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("radial-nodes must be positive".into()));
        }
        if !(start >= 0.0 && end > start) {
            return Err(Error::Config(format!(
                "radial interval [{start}, {end}] is empty or negative"
            )));
        }
        let (nodes, weights) = GaussLegendre::get(n).mapped(start, end);
        Ok(Self {
            start,
            end,
            nodes,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Sizes of the uniform boundary grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundarySize {
    /// `M` equally spaced angles on the circle.
    Circle(usize),
    /// Gauss–Legendre in `cos θ` times uniform azimuth.
    Sphere { theta: usize, phi: usize },
}

impl BoundarySize {
    pub fn default_for(dim: Dim) -> Self {
        match dim {
            Dim::Two => BoundarySize::Circle(256),
            Dim::Three => BoundarySize::Sphere { theta: 48, phi: 96 },
        }
    }

    pub fn dim(&self) -> Dim {
        match self {
            BoundarySize::Circle(_) => Dim::Two,
            BoundarySize::Sphere { .. } => Dim::Three,
        }
    }

    /// Same layout scaled by `factor` in every direction.
    pub fn scaled(&self, factor: usize) -> Self {
        match *self {
            BoundarySize::Circle(m) => BoundarySize::Circle(m * factor),
            BoundarySize::Sphere { theta, phi } => BoundarySize::Sphere {
                theta: theta * factor,
                phi: phi * factor,
            },
        }
    }
}

/// Weighted point set on the sphere at infinity; weights sum to one, matching
/// the normalized measure `db`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryGrid {
    dim: Dim,
    points: Vec<BoundaryPoint>,
    weights: Vec<f64>,
}

impl BoundaryGrid {
    pub fn uniform(size: BoundarySize) -> Result<Self> {
        let dim = size.dim();
        let pole = match dim {
            Dim::Two => BoundaryPoint::e1(dim),
            Dim::Three => BoundaryPoint::new(dim, &[0.0, 0.0, 1.0])?,
        };
        Self::uniform_with_pole(size, &pole)
    }

    /// Uniform grid rotated so that its reference direction (angle zero for
    /// the circle, the `θ = 0` pole for the sphere) is `pole`.
    pub fn uniform_with_pole(size: BoundarySize, pole: &BoundaryPoint) -> Result<Self> {
        let dim = size.dim();
        if pole.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: pole.dim(),
            });
        }
        match size {
            BoundarySize::Circle(m) => {
                if m == 0 {
                    return Err(Error::Config("boundary-angles must be positive".into()));
                }
                let p = pole.coords();
                let base = p[1].atan2(p[0]);
                let mut points = Vec::with_capacity(m);
                for j in 0..m {
                    let t = base + 2.0 * PI * j as f64 / m as f64;
                    points.push(BoundaryPoint::from_vec3(dim, [t.cos(), t.sin(), 0.0])?);
                }
                Ok(Self {
                    dim,
                    points,
                    weights: vec![1.0 / m as f64; m],
                })
            }
            BoundarySize::Sphere { theta, phi } => {
                if theta == 0 || phi == 0 {
                    return Err(Error::Config(
                        "boundary-theta and boundary-phi must be positive".into(),
                    ));
                }
                let axis = *pole.coords();
                let (u, v) = orthonormal_complement(&axis);
                let gl = GaussLegendre::get(theta);
                let mut points = Vec::with_capacity(theta * phi);
                let mut weights = Vec::with_capacity(theta * phi);
                for (z, w) in gl.nodes.iter().zip(&gl.weights) {
                    let s = (1.0 - z * z).max(0.0).sqrt();
                    for k in 0..phi {
                        let a = 2.0 * PI * k as f64 / phi as f64;
                        let (sa, ca) = a.sin_cos();
                        let c = combine(&u, &v, &axis, s * ca, s * sa, *z);
                        points.push(BoundaryPoint::from_vec3(dim, c)?);
                        weights.push(0.5 * w / phi as f64);
                    }
                }
                Ok(Self {
                    dim,
                    points,
                    weights,
                })
            }
        }
    }

    /// Grid resolving a Poisson kernel peaked at `axis` with angular width
    /// `~e^{-t}`: the polar angle from `axis` is parametrized by
    /// `v = t + ln tan(θ / 2)` on `[v_lo, v(θ_split)]` and by `θ` itself on
    /// `[θ_split, π]`, each with Gauss–Legendre.
    pub fn focused(dim: Dim, axis: &BoundaryPoint, spec: &FocusedSpec) -> Result<Self> {
        if axis.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: axis.dim(),
            });
        }
        let split = spec.theta_split;
        let v_hi = spec.t + (0.5 * split).tan().ln();
        let v_lo = -spec.tail / (dim.as_usize() as f64 - 1.0);
        let mut thetas = Vec::new();
        let mut dtheta = Vec::new();
        if v_hi > v_lo {
            let (vs, ws) = GaussLegendre::at_least(spec.log_nodes).mapped(v_lo, v_hi);
            for (v, w) in vs.iter().zip(&ws) {
                let th = 2.0 * (v - spec.t).exp().atan();
                thetas.push(th);
                dtheta.push(w * th.sin());
            }
        }
        let (ts, ws) = GaussLegendre::at_least(spec.broad_nodes).mapped(split, PI);
        thetas.extend(ts);
        dtheta.extend(ws);

        let a = *axis.coords();
        let mut points = Vec::new();
        let mut weights = Vec::new();
        match dim {
            Dim::Two => {
                let perp = [-a[1], a[0], 0.0];
                for (th, w) in thetas.iter().zip(&dtheta) {
                    let (s, c) = th.sin_cos();
                    for sign in [1.0, -1.0] {
                        let p = [
                            c * a[0] + sign * s * perp[0],
                            c * a[1] + sign * s * perp[1],
                            0.0,
                        ];
                        points.push(BoundaryPoint::from_vec3(dim, p)?);
                        weights.push(w / (2.0 * PI));
                    }
                }
            }
            Dim::Three => {
                let (u, v) = orthonormal_complement(&a);
                let n_az = spec.azimuth_nodes.max(1);
                for (th, w) in thetas.iter().zip(&dtheta) {
                    let (s, c) = th.sin_cos();
                    for k in 0..n_az {
                        let phi = 2.0 * PI * (k as f64 + 0.5) / n_az as f64;
                        let (sp, cp) = phi.sin_cos();
                        let p = combine(&u, &v, &a, s * cp, s * sp, c);
                        points.push(BoundaryPoint::from_vec3(dim, p)?);
                        weights.push(w * s / (2.0 * n_az as f64));
                    }
                }
            }
        }
        Ok(Self {
            dim,
            points,
            weights,
        })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn points(&self) -> &[BoundaryPoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `∫_B F(b) db` for samples aligned with the grid points.
    pub fn integrate(&self, samples: &[Complex64]) -> Result<Complex64> {
        if samples.len() != self.len() {
            return Err(Error::Config(format!(
                "expected {} boundary samples, got {}",
                self.len(),
                samples.len()
            )));
        }
        Ok(samples.iter().zip(&self.weights).map(|(f, w)| f * *w).sum())
    }

    /// `∫_B F(b) db` for a function evaluated at the grid points.
    pub fn integrate_fn<F: FnMut(&BoundaryPoint) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(b, w)| f(b) * *w)
            .sum()
    }
}

#[inline]
fn combine(u: &Vec3, v: &Vec3, a: &Vec3, cu: f64, cv: f64, ca: f64) -> Vec3 {
    [
        cu * u[0] + cv * v[0] + ca * a[0],
        cu * u[1] + cv * v[1] + ca * a[1],
        cu * u[2] + cv * v[2] + ca * a[2],
    ]
}

/// Parameters of [`BoundaryGrid::focused`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FocusedSpec {
    /// Focus scale: the peak has angular width about `e^{-t}`.
    pub t: f64,
    pub theta_split: f64,
    /// The log part starts at `v = -tail / (d - 1)`.
    pub tail: f64,
    pub log_nodes: usize,
    pub broad_nodes: usize,
    pub azimuth_nodes: usize,
}

impl FocusedSpec {
    /// Sizes adequate for kernels `e^{(iλ + ρ) A(x, b)}` with `d(0, x) = t`
    /// against boundary densities of moderate angular content.
    pub fn auto(t: f64, lambda_abs: f64) -> Self {
        let span = t + 32.0;
        let log_nodes = (24.0 + span * (1.5 + 0.8 * lambda_abs)).ceil() as usize;
        Self {
            t,
            theta_split: 1.0,
            tail: 32.0,
            log_nodes,
            broad_nodes: 48,
            azimuth_nodes: 48,
        }
    }
}

/// Gauss–Legendre rule for `dλ` on `(0, Λ_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    pub lambda_max: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SpectralGrid {
    pub fn new(n: usize, lambda_max: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("spectral-nodes must be positive".into()));
        }
        if !(lambda_max > 0.0) {
            return Err(Error::Config("lambda-max must be positive".into()));
        }
        let (nodes, weights) = GaussLegendre::get(n).mapped(0.0, lambda_max);
        Ok(Self {
            lambda_max,
            nodes,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, values: &[Complex64]) -> Result<Complex64> {
        if values.len() != self.len() {
            return Err(Error::Config(format!(
                "expected {} spectral samples, got {}",
                self.len(),
                values.len()
            )));
        }
        Ok(values.iter().zip(&self.weights).map(|(f, w)| f * *w).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for n in [1, 2, 5, 16, 96, 200] {
            let gl = GaussLegendre::get(n);
            assert_abs_diff_eq!(gl.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            for k in 0..(2 * n).min(30) {
                let exact = if k % 2 == 1 {
                    0.0
                } else {
                    2.0 / (k as f64 + 1.0)
                };
                let q: f64 = gl
                    .nodes
                    .iter()
                    .zip(&gl.weights)
                    .map(|(x, w)| w * x.powi(k as i32))
                    .sum();
                assert_abs_diff_eq!(q, exact, epsilon = 1e-13);
            }
            assert!(gl.nodes.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn radial_weights_sum_to_length() {
        let g = RadialGrid::new(96, 0.0, 16.0).unwrap();
        assert_abs_diff_eq!(g.weights.iter().sum::<f64>(), 16.0, epsilon = 1e-12);
        assert!(g.nodes[0] > 0.0 && *g.nodes.last().unwrap() <= 16.0);
        assert!(RadialGrid::new(0, 0.0, 1.0).is_err());
    }

    #[test]
    fn boundary_weights_are_normalized() {
        for size in [
            BoundarySize::Circle(256),
            BoundarySize::Sphere { theta: 48, phi: 96 },
        ] {
            let g = BoundaryGrid::uniform(size).unwrap();
            assert_abs_diff_eq!(g.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-13);
            let one = vec![Complex64::new(1.0, 0.0); g.len()];
            assert_abs_diff_eq!(g.integrate(&one).unwrap().re, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn sphere_grid_integrates_low_harmonics() {
        let g = BoundaryGrid::uniform(BoundarySize::Sphere { theta: 12, phi: 24 }).unwrap();
        // mean of z^2 over S^2 is 1/3; of x*y is 0
        let z2 = g.integrate_fn(|b| Complex64::new(b.coords()[2].powi(2), 0.0));
        assert_abs_diff_eq!(z2.re, 1.0 / 3.0, epsilon = 1e-14);
        let x2 = g.integrate_fn(|b| Complex64::new(b.coords()[0].powi(2), 0.0));
        assert_abs_diff_eq!(x2.re, 1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn focused_grid_has_unit_mass() {
        for dim in [Dim::Two, Dim::Three] {
            let axis = match dim {
                Dim::Two => BoundaryPoint::new(dim, &[0.6, 0.8]).unwrap(),
                Dim::Three => BoundaryPoint::new(dim, &[0.0, 0.6, 0.8]).unwrap(),
            };
            for t in [0.0, 3.0, 10.0] {
                let g = BoundaryGrid::focused(dim, &axis, &FocusedSpec::auto(t, 1.0)).unwrap();
                assert_abs_diff_eq!(g.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn spectral_grid_integrates_constant() {
        let g = SpectralGrid::new(200, 24.0).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); 200];
        assert_abs_diff_eq!(g.integrate(&ones).unwrap().re, 24.0, epsilon = 1e-12);
        assert!(g.nodes.iter().all(|&l| l > 0.0));
    }
}
