//! Poincaré ball model of real hyperbolic space H^d for d = 2, 3.
//!
//! Curvature is fixed at -1, so the metric is `ds = 2|dx| / (1 - |x|^2)`.
//! Points are stored as 3-vectors; in dimension two the third coordinate is
//! identically zero, which lets every formula below run unchanged in both
//! dimensions.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points with `|x| >= 1 - BALL_MARGIN` are rejected.
pub const BALL_MARGIN: f64 = 1e-12;

/// Order of the Weyl group for a rank-one space.
pub const WEYL_ORDER: f64 = 2.0;

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn from_usize(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            _ => Err(Error::Config(format!("dim must be 2 or 3, got {d}"))),
        }
    }

    pub fn as_usize(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    /// Half the sum of positive roots with multiplicity: (d - 1) / 2.
    pub fn rho(self) -> f64 {
        match self {
            Dim::Two => 0.5,
            Dim::Three => 1.0,
        }
    }

    /// Surface area of the unit (d-1)-sphere.
    pub fn sphere_area(self) -> f64 {
        match self {
            Dim::Two => 2.0 * PI,
            Dim::Three => 4.0 * PI,
        }
    }

    fn check(self, other: Dim) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self,
                found: other,
            })
        }
    }
}

#[inline]
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm_sq(a: &Vec3) -> f64 {
    dot(a, a)
}

#[inline]
fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

fn transpose(m: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            t[j][i] = *v;
        }
    }
    t
}

/// Interior point of the ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    coords: Vec3,
    dim: Dim,
}

impl Point {
    pub fn new(dim: Dim, coords: &[f64]) -> Result<Self> {
        if coords.len() != dim.as_usize() {
            return Err(Error::Config(format!(
                "expected {} coordinates, got {}",
                dim.as_usize(),
                coords.len()
            )));
        }
        let mut c = [0.0; 3];
        c[..coords.len()].copy_from_slice(coords);
        Self::from_vec3(dim, c)
    }

    pub fn from_vec3(dim: Dim, mut coords: Vec3) -> Result<Self> {
        if dim == Dim::Two {
            coords[2] = 0.0;
        }
        if !(norm_sq(&coords).sqrt() < 1.0 - BALL_MARGIN) {
            return Err(Error::OutsideBall(coords));
        }
        Ok(Self { coords, dim })
    }

    pub fn origin(dim: Dim) -> Self {
        Self {
            coords: [0.0; 3],
            dim,
        }
    }

    #[inline]
    pub fn coords(&self) -> &Vec3 {
        &self.coords
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn norm(&self) -> f64 {
        norm_sq(&self.coords).sqrt()
    }

    /// Hyperbolic distance from the origin.
    pub fn radius(&self) -> f64 {
        2.0 * self.norm().atanh()
    }
}

/// Point of the sphere at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    coords: Vec3,
    dim: Dim,
}

impl BoundaryPoint {
    /// Renormalizes `coords` to unit length.
    pub fn new(dim: Dim, coords: &[f64]) -> Result<Self> {
        if coords.len() != dim.as_usize() {
            return Err(Error::Config(format!(
                "expected {} coordinates, got {}",
                dim.as_usize(),
                coords.len()
            )));
        }
        let mut c = [0.0; 3];
        c[..coords.len()].copy_from_slice(coords);
        Self::from_vec3(dim, c)
    }

    pub fn from_vec3(dim: Dim, mut coords: Vec3) -> Result<Self> {
        if dim == Dim::Two {
            coords[2] = 0.0;
        }
        let n = norm_sq(&coords).sqrt();
        if !(n > 1e-300) || !n.is_finite() {
            return Err(Error::Config(
                "boundary point needs a nonzero direction".into(),
            ));
        }
        Ok(Self {
            coords: scale(&coords, 1.0 / n),
            dim,
        })
    }

    /// First basis vector e_1.
    pub fn e1(dim: Dim) -> Self {
        Self {
            coords: [1.0, 0.0, 0.0],
            dim,
        }
    }

    #[inline]
    pub fn coords(&self) -> &Vec3 {
        &self.coords
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }
}

/// Hyperbolic distance between two interior points.
pub fn dist(x: &Point, y: &Point) -> Result<f64> {
    x.dim.check(y.dim)?;
    Ok(dist_unchecked(&x.coords, &y.coords))
}

/// `cosh d = 1 + delta` evaluated as `2 asinh(sqrt(delta / 2))` to keep short
/// distances accurate.
#[inline]
pub(crate) fn dist_unchecked(x: &Vec3, y: &Vec3) -> f64 {
    let diff = norm_sq(&sub(x, y));
    let delta = 2.0 * diff / ((1.0 - norm_sq(x)) * (1.0 - norm_sq(y)));
    2.0 * (0.5 * delta).sqrt().asinh()
}

/// Horocyclic bracket `A(x, b) = log((1 - |x|^2) / |x - b|^2)`.
pub fn busemann(x: &Point, b: &BoundaryPoint) -> Result<f64> {
    x.dim.check(b.dim)?;
    Ok(busemann_unchecked(&x.coords, &b.coords))
}

#[inline]
pub(crate) fn busemann_unchecked(x: &Vec3, b: &Vec3) -> f64 {
    // |x - b|^2 = 1 - 2<x, b> + |x|^2 using |b| = 1
    let xx = norm_sq(x);
    ((1.0 - xx) / (1.0 - 2.0 * dot(x, b) + xx)).ln()
}

/// `x = tanh(r / 2) * omega`.
pub fn polar_to_point(r: f64, omega: &BoundaryPoint) -> Result<Point> {
    if !(r >= 0.0) {
        return Err(Error::Config(format!("polar radius must be >= 0, got {r}")));
    }
    Point::from_vec3(omega.dim, scale(&omega.coords, (0.5 * r).tanh()))
}

/// Inverse of [`polar_to_point`]; the origin maps to `(0, e_1)`.
pub fn point_to_polar(x: &Point) -> (f64, BoundaryPoint) {
    let n = x.norm();
    if n == 0.0 {
        return (0.0, BoundaryPoint::e1(x.dim));
    }
    (
        2.0 * n.atanh(),
        BoundaryPoint {
            coords: scale(&x.coords, 1.0 / n),
            dim: x.dim,
        },
    )
}

/// Polar volume density `sinh^{d-1}(r)`.
pub fn volume_weight(dim: Dim, r: f64) -> f64 {
    match dim {
        Dim::Two => r.sinh(),
        Dim::Three => r.sinh().powi(2),
    }
}

/// Möbius translation carrying the origin to `a`, valid for `|x| <= 1`.
#[inline]
pub(crate) fn mobius_translate(a: &Vec3, x: &Vec3) -> Vec3 {
    let ax = dot(a, x);
    let aa = norm_sq(a);
    let xx = norm_sq(x);
    let num_a = 1.0 + 2.0 * ax + xx;
    let num_x = 1.0 - aa;
    let den = 1.0 + 2.0 * ax + aa * xx;
    [
        (num_a * a[0] + num_x * x[0]) / den,
        (num_a * a[1] + num_x * x[1]) / den,
        (num_a * a[2] + num_x * x[2]) / den,
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Primitive {
    /// Orthogonal matrix with determinant +1. In dimension two only the upper
    /// 2x2 block is meaningful and the (2, 2) entry is 1.
    Rotation(Mat3),
    /// Möbius translation; the vector is the image of the origin.
    Translation(Vec3),
}

impl Primitive {
    fn inverse(&self) -> Primitive {
        match self {
            Primitive::Rotation(m) => Primitive::Rotation(transpose(m)),
            Primitive::Translation(a) => Primitive::Translation(scale(a, -1.0)),
        }
    }

    #[inline]
    fn act(&self, x: &Vec3) -> Vec3 {
        match self {
            Primitive::Rotation(m) => mat_vec(m, x),
            Primitive::Translation(a) => mobius_translate(a, x),
        }
    }
}

/// Orientation-preserving isometry stored as a sequence of primitives.
/// Primitives act in order: the first element of the sequence is applied
/// first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    dim: Dim,
    steps: Vec<Primitive>,
}

impl Isometry {
    pub fn identity(dim: Dim) -> Self {
        Self {
            dim,
            steps: Vec::new(),
        }
    }

    pub fn translation(target: &Point) -> Self {
        Self {
            dim: target.dim,
            steps: vec![Primitive::Translation(target.coords)],
        }
    }

    /// Translation along `direction` by hyperbolic distance `r`.
    pub fn translation_by(r: f64, direction: &BoundaryPoint) -> Result<Self> {
        Ok(Self::translation(&polar_to_point(r, direction)?))
    }

    pub fn rotation(dim: Dim, m: Mat3) -> Result<Self> {
        let mut m = m;
        if dim == Dim::Two {
            m[0][2] = 0.0;
            m[1][2] = 0.0;
            m[2] = [0.0, 0.0, 1.0];
        }
        let mtm = mat_mul(&transpose(&m), &m);
        let mut err: f64 = 0.0;
        for (i, row) in mtm.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                err = err.max((v - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        if err > 1e-10 || det3(&m) < 0.0 {
            return Err(Error::Config(
                "rotation must be orthogonal with det +1".into(),
            ));
        }
        Ok(Self {
            dim,
            steps: vec![Primitive::Rotation(m)],
        })
    }

    /// Planar rotation by `angle` in the (e_1, e_2) plane.
    pub fn rotation_2d(dim: Dim, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            dim,
            steps: vec![Primitive::Rotation([
                [c, -s, 0.0],
                [s, c, 0.0],
                [0.0, 0.0, 1.0],
            ])],
        }
    }

    /// A rotation carrying the unit vector `from` to `to`.
    pub fn rotation_between(from: &BoundaryPoint, to: &BoundaryPoint) -> Result<Self> {
        from.dim.check(to.dim)?;
        let dim = from.dim;
        if dim == Dim::Two {
            let a = from.coords[1].atan2(from.coords[0]);
            let b = to.coords[1].atan2(to.coords[0]);
            return Ok(Self::rotation_2d(dim, b - a));
        }
        Ok(Self {
            dim,
            steps: vec![Primitive::Rotation(rotation_between_3d(
                &from.coords,
                &to.coords,
            ))],
        })
    }

    /// Random rotation, uniform with respect to Haar measure.
    pub fn random_rotation<R: Rng + ?Sized>(dim: Dim, rng: &mut R) -> Self {
        match dim {
            Dim::Two => Self::rotation_2d(dim, rng.gen_range(0.0..2.0 * PI)),
            Dim::Three => {
                // Uniform unit quaternion.
                let u1: f64 = rng.gen();
                let u2: f64 = rng.gen_range(0.0..2.0 * PI);
                let u3: f64 = rng.gen_range(0.0..2.0 * PI);
                let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
                let (w, x, y, z) = (a * u2.sin(), a * u2.cos(), b * u3.sin(), b * u3.cos());
                let m = [
                    [
                        1.0 - 2.0 * (y * y + z * z),
                        2.0 * (x * y - z * w),
                        2.0 * (x * z + y * w),
                    ],
                    [
                        2.0 * (x * y + z * w),
                        1.0 - 2.0 * (x * x + z * z),
                        2.0 * (y * z - x * w),
                    ],
                    [
                        2.0 * (x * z - y * w),
                        2.0 * (y * z + x * w),
                        1.0 - 2.0 * (x * x + y * y),
                    ],
                ];
                Self {
                    dim,
                    steps: vec![Primitive::Rotation(m)],
                }
            }
        }
    }

    /// Random rotation followed by a translation of hyperbolic length drawn
    /// uniformly from `[0, max_shift]` in a uniformly random direction.
    pub fn random<R: Rng + ?Sized>(dim: Dim, max_shift: f64, rng: &mut R) -> Self {
        let rot = Self::random_rotation(dim, rng);
        let dir = random_direction(dim, rng);
        let r = rng.gen_range(0.0..=max_shift);
        let shift = Self::translation_by(r, &dir).expect("finite shift stays inside the ball");
        rot.then(&shift)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Isometry) -> Isometry {
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        Isometry {
            dim: self.dim,
            steps,
        }
    }

    pub fn inverse(&self) -> Isometry {
        Isometry {
            dim: self.dim,
            steps: self.steps.iter().rev().map(Primitive::inverse).collect(),
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn steps(&self) -> &[Primitive] {
        &self.steps
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    /// Whether the isometry fixes the origin (to 1e-14).
    pub fn fixes_origin(&self) -> bool {
        norm_sq(&self.act_raw(&[0.0; 3])).sqrt() < 1e-14
    }

    #[inline]
    pub(crate) fn act_raw(&self, x: &Vec3) -> Vec3 {
        let mut y = *x;
        for p in &self.steps {
            y = p.act(&y);
        }
        y
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        self.dim.check(x.dim)?;
        let y = self.act_raw(&x.coords);
        let n = norm_sq(&y).sqrt();
        if n > 1.0 + 1e-10 || !n.is_finite() {
            return Err(Error::Escaped(n));
        }
        Point::from_vec3(self.dim, y)
    }

    /// Boundary action: the same Möbius formulas evaluated at `|x| = 1`.
    pub fn apply_boundary(&self, b: &BoundaryPoint) -> Result<BoundaryPoint> {
        self.dim.check(b.dim)?;
        let y = self.act_raw(&b.coords);
        let n = norm_sq(&y).sqrt();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::Escaped(n));
        }
        BoundaryPoint::from_vec3(self.dim, y)
    }

    /// Image of the origin.
    pub fn origin_image(&self) -> Point {
        Point {
            coords: self.act_raw(&[0.0; 3]),
            dim: self.dim,
        }
    }
}

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn det3(m: &Mat3) -> f64 {
    dot(&m[0], &cross(&m[1], &m[2]))
}

/// Rodrigues rotation taking unit `a` to unit `b`.
fn rotation_between_3d(a: &Vec3, b: &Vec3) -> Mat3 {
    let v = cross(a, b);
    let c = dot(a, b);
    if c < -1.0 + 1e-12 {
        // Half turn about any axis orthogonal to a.
        let (u, _) = orthonormal_complement(a);
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = 2.0 * u[i] * u[j] - if i == j { 1.0 } else { 0.0 };
            }
        }
        return m;
    }
    let k = 1.0 / (1.0 + c);
    let vx = [[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]];
    let vx2 = mat_mul(&vx, &vx);
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = if i == j { 1.0 } else { 0.0 } + vx[i][j] + k * vx2[i][j];
        }
    }
    m
}

/// Two unit vectors completing `a` to a right-handed orthonormal frame
/// `(u, v, a)`.
pub fn orthonormal_complement(a: &Vec3) -> (Vec3, Vec3) {
    let pick = if a[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let u = cross(&pick, a);
    let u = scale(&u, 1.0 / norm_sq(&u).sqrt());
    let v = cross(a, &u);
    (u, v)
}

pub fn random_direction<R: Rng + ?Sized>(dim: Dim, rng: &mut R) -> BoundaryPoint {
    match dim {
        Dim::Two => {
            let t: f64 = rng.gen_range(0.0..2.0 * PI);
            BoundaryPoint {
                coords: [t.cos(), t.sin(), 0.0],
                dim,
            }
        }
        Dim::Three => {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let t: f64 = rng.gen_range(0.0..2.0 * PI);
            let s = (1.0 - z * z).sqrt();
            BoundaryPoint {
                coords: [s * t.cos(), s * t.sin(), z],
                dim,
            }
        }
    }
}

/// Point at hyperbolic radius drawn uniformly from `[0, max_radius]`.
pub fn random_point<R: Rng + ?Sized>(dim: Dim, max_radius: f64, rng: &mut R) -> Point {
    let dir = random_direction(dim, rng);
    let r = rng.gen_range(0.0..=max_radius);
    polar_to_point(r, &dir).expect("bounded radius")
}
