//! Compactly supported test functions on X and the quadrature that integrates
//! them.
//!
//! A [`SampledFunction`] is a sum of patches. Each patch carries its own frame
//! isometry `h` and a polar product grid `(r_i, ω_j)` about the origin; its
//! nodes sit at `h · polar(r_i, ω_j)`. Since `dμ` is invariant, a patch
//! integrates exactly like a polar grid centred at `h · 0`, which lets a
//! shifted bump be sampled on a grid adapted to its own support.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    dist_unchecked, dot, norm_sq, orthonormal_complement, volume_weight, BoundaryPoint, Dim,
    Isometry, Point, Vec3,
};
use crate::quadrature::{
    BoundaryGrid, BoundarySize, FocusedSpec, GaussLegendre, RadialGrid, SpectralGrid,
};

/// Radial profile `β` of a bump, evaluated at `s = r / R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// `exp(-1 / (1 - s²))` on `s < 1`.
    Smooth,
    /// `1` on `s < 1`; used to exhibit slow spectral decay.
    Indicator,
}

impl Profile {
    #[inline]
    pub fn eval(self, s: f64) -> f64 {
        if !(s < 1.0) {
            return 0.0;
        }
        match self {
            Profile::Smooth => (-1.0 / (1.0 - s * s)).exp(),
            Profile::Indicator => 1.0,
        }
    }
}

/// Analytic bump `x ↦ β(d(g₀·0, x) / R) · (1 + α s ⟨ω, v⟩)` where
/// `(R s, ω)` are polar coordinates of `g₀⁻¹ x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BumpSpec {
    radius: f64,
    center: Isometry,
    alpha: f64,
    axis: BoundaryPoint,
    profile: Profile,
    #[serde(skip)]
    inverse: Isometry,
}

impl BumpSpec {
    pub fn new(
        radius: f64,
        center: Isometry,
        alpha: f64,
        axis: BoundaryPoint,
        profile: Profile,
    ) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Config(format!(
                "bump radius must be positive, got {radius}"
            )));
        }
        if !(alpha.abs() <= 1.0) {
            return Err(Error::Config(format!(
                "bump alpha must lie in [-1, 1], got {alpha}"
            )));
        }
        if center.dim() != axis.dim() {
            return Err(Error::DimensionMismatch {
                expected: center.dim(),
                found: axis.dim(),
            });
        }
        let inverse = center.inverse();
        Ok(Self {
            radius,
            center,
            alpha,
            axis,
            profile,
            inverse,
        })
    }

    /// Smooth radial bump of radius `radius` about the origin.
    pub fn centered(dim: Dim, radius: f64) -> Result<Self> {
        Self::new(
            radius,
            Isometry::identity(dim),
            0.0,
            BoundaryPoint::e1(dim),
            Profile::Smooth,
        )
    }

    pub fn with_profile(mut self, profile: Profile) -> Self {
        self.profile = profile;
        self
    }

    pub fn dim(&self) -> Dim {
        self.center.dim()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center(&self) -> &Isometry {
        &self.center
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn axis(&self) -> &BoundaryPoint {
        &self.axis
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn center_point(&self) -> Point {
        self.center.origin_image()
    }

    /// Radius of the smallest origin-centred ball containing the support.
    pub fn support_radius(&self) -> f64 {
        self.center_point().radius() + self.radius
    }

    /// Whether the bump is invariant under rotations about the origin.
    pub fn is_k_invariant(&self) -> bool {
        self.alpha == 0.0 && self.center.fixes_origin()
    }

    fn inverse(&self) -> &Isometry {
        &self.inverse
    }

    pub fn eval(&self, x: &Point) -> Result<f64> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        Ok(self.eval_raw(x.coords()))
    }

    #[inline]
    pub(crate) fn eval_raw(&self, x: &Vec3) -> f64 {
        self.eval_local(&self.inverse().act_raw(x))
    }

    /// Value at `y` given in the bump's own frame (`y = g₀⁻¹ x`).
    #[inline]
    pub(crate) fn eval_local(&self, y: &Vec3) -> f64 {
        let n = norm_sq(y).sqrt();
        let s = 2.0 * n.atanh() / self.radius;
        let base = self.profile.eval(s);
        if base == 0.0 || self.alpha == 0.0 || n == 0.0 {
            return base;
        }
        base * (1.0 + self.alpha * s * dot(y, self.axis.coords()) / n)
    }
}

/// How a bump is laid out on a patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Centering {
    /// Polar grid about the bump centre, radial nodes on `[0, R]`.
    Bump,
    /// Polar grid about the origin, radial nodes on `[0, R_f]`.
    Origin,
}

/// Patch grid sizes used by [`sample_bump`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingGrids {
    pub radial_nodes: usize,
    pub angular: BoundarySize,
    pub centering: Centering,
    /// Validity cap for the declared support radius.
    pub r_max: f64,
}

impl SamplingGrids {
    pub fn default_for(dim: Dim) -> Self {
        Self {
            radial_nodes: 48,
            angular: match dim {
                Dim::Two => BoundarySize::Circle(80),
                Dim::Three => BoundarySize::Sphere { theta: 20, phi: 40 },
            },
            centering: Centering::Bump,
            r_max: 16.0,
        }
    }

    /// Grids resolving `e^{-iλ A(x, b)}` over a bump of radius `radius` for
    /// `|λ| ≤ lambda_max`. On the sphere of radius `r` the phase has angular
    /// slope up to `λ sinh r` and Fourier tail `tanh(r/2)^k`.
    pub fn resolving(dim: Dim, lambda_max: f64, radius: f64) -> Self {
        let tail = 30.0 / -(0.5 * radius).tanh().ln();
        let n = (lambda_max * radius.sinh() + tail).ceil() as usize + 16;
        Self {
            radial_nodes: 40 + (0.6 * lambda_max * radius).ceil() as usize,
            angular: match dim {
                Dim::Two => BoundarySize::Circle(n),
                Dim::Three => BoundarySize::Sphere {
                    theta: n / 2 + 4,
                    phi: n,
                },
            },
            centering: Centering::Bump,
            r_max: 16.0,
        }
    }

    pub fn dim(&self) -> Dim {
        self.angular.dim()
    }

    /// Same grids with every node count multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            radial_nodes: self.radial_nodes * factor,
            angular: self.angular.scaled(factor),
            ..*self
        }
    }
}

/// One polar product grid with its frame, samples and precomputed geometry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Patch {
    frame: Isometry,
    radial: RadialGrid,
    angular: BoundaryGrid,
    values: Vec<Complex64>,
    #[serde(skip)]
    positions: Vec<Vec3>,
    #[serde(skip)]
    measure: Vec<f64>,
}

impl Patch {
    /// Patch from samples in row-major order (radial index outer).
    pub fn new(
        frame: Isometry,
        radial: RadialGrid,
        angular: BoundaryGrid,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        let dim = frame.dim();
        if angular.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: angular.dim(),
            });
        }
        let n = radial.len() * angular.len();
        if values.len() != n {
            return Err(Error::Config(format!(
                "patch expects {n} samples, got {}",
                values.len()
            )));
        }
        let area = dim.sphere_area();
        let mut positions = Vec::with_capacity(n);
        let mut measure = Vec::with_capacity(n);
        for (r, wr) in radial.nodes.iter().zip(&radial.weights) {
            let t = (0.5 * r).tanh();
            let vol = wr * area * volume_weight(dim, *r);
            for (b, wb) in angular.points().iter().zip(angular.weights()) {
                let c = b.coords();
                positions.push(frame.act_raw(&[t * c[0], t * c[1], t * c[2]]));
                measure.push(vol * wb);
            }
        }
        Ok(Self {
            frame,
            radial,
            angular,
            values,
            positions,
            measure,
        })
    }

    pub fn frame(&self) -> &Isometry {
        &self.frame
    }

    pub fn radial(&self) -> &RadialGrid {
        &self.radial
    }

    pub fn angular(&self) -> &BoundaryGrid {
        &self.angular
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Node positions in ball coordinates.
    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    /// Quadrature weight of each node for `dμ`.
    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    fn scaled(&self, c: Complex64) -> Patch {
        Patch {
            values: self.values.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }
}

/// Compactly supported function on X, stored as samples on one or more
/// patches, optionally with the analytic bumps it was sampled from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledFunction {
    dim: Dim,
    patches: Vec<Patch>,
    support_radius: f64,
    analytic: Option<Vec<(Complex64, BumpSpec)>>,
}

impl SampledFunction {
    pub fn zero(dim: Dim) -> Self {
        Self {
            dim,
            patches: Vec::new(),
            support_radius: 0.0,
            analytic: Some(Vec::new()),
        }
    }

    /// Function known only through samples; off-grid evaluation is an error.
    pub fn from_patches(dim: Dim, patches: Vec<Patch>, support_radius: f64) -> Result<Self> {
        for p in &patches {
            if p.frame.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.frame.dim(),
                });
            }
        }
        Ok(Self {
            dim,
            patches,
            support_radius,
            analytic: None,
        })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn patches(&self) -> &[Patch] {
        &self.patches
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn analytic(&self) -> Option<&[(Complex64, BumpSpec)]> {
        self.analytic.as_deref()
    }

    pub fn node_count(&self) -> usize {
        self.patches.iter().map(|p| p.values.len()).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            patches: self.patches.iter().map(|p| p.scaled(c)).collect(),
            support_radius: self.support_radius,
            analytic: self
                .analytic
                .as_ref()
                .map(|terms| terms.iter().map(|(k, b)| (k * c, b.clone())).collect()),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut patches = self.patches.clone();
        patches.extend(other.patches.iter().cloned());
        let analytic = match (&self.analytic, &other.analytic) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Ok(Self {
            dim: self.dim,
            patches,
            support_radius: self.support_radius.max(other.support_radius),
            analytic,
        })
    }

    /// Exact value from the analytic descriptor.
    pub fn eval(&self, x: &Point) -> Result<Complex64> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        self.eval_raw(x.coords())
    }

    pub(crate) fn eval_raw(&self, x: &Vec3) -> Result<Complex64> {
        let terms = self.analytic.as_ref().ok_or(Error::NoAnalyticForm)?;
        Ok(terms.iter().map(|(c, b)| c * b.eval_raw(x)).sum())
    }

    /// Spread of samples across the angular index, relative to the largest
    /// sample; zero for K-invariant data on origin-fixing frames.
    pub fn angular_spread(&self) -> f64 {
        let mut spread: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for p in &self.patches {
            if !p.frame.fixes_origin() {
                return f64::INFINITY;
            }
            let nb = p.angular.len();
            for row in p.values.chunks(nb) {
                let first = row[0];
                for v in row {
                    spread = spread.max((v - first).norm());
                    scale = scale.max(v.norm());
                }
            }
        }
        if scale == 0.0 {
            0.0
        } else {
            spread / scale
        }
    }

    /// Iterate `(position, dμ weight, value)` over every node.
    pub fn nodes(&self) -> impl Iterator<Item = (&Vec3, f64, Complex64)> + '_ {
        self.patches.iter().flat_map(|p| {
            p.positions
                .iter()
                .zip(&p.measure)
                .zip(&p.values)
                .map(|((x, m), v)| (x, *m, *v))
        })
    }
}

fn check_support(spec: &BumpSpec, r_max: f64) -> Result<()> {
    let rf = spec.support_radius();
    if rf > r_max {
        return Err(Error::Config(format!(
            "bump support radius {rf:.4} exceeds r-max {r_max}"
        )));
    }
    Ok(())
}

/// Sample a bump on a single patch.
pub fn sample_bump(spec: &BumpSpec, grids: &SamplingGrids) -> Result<SampledFunction> {
    let dim = spec.dim();
    if grids.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: grids.dim(),
        });
    }
    check_support(spec, grids.r_max)?;
    let (frame, end) = match grids.centering {
        Centering::Bump => (spec.center.clone(), spec.radius),
        Centering::Origin => (Isometry::identity(dim), spec.support_radius()),
    };
    let radial = RadialGrid::new(grids.radial_nodes, 0.0, end)?;
    let angular = BoundaryGrid::uniform(grids.angular)?;
    sample_on(spec, frame, radial, angular, grids.centering)
}

/// Sample a bump on a patch whose angular grid concentrates toward the
/// direction in which `A(·, b)` grows fastest over the support. Used where
/// the integrand carries `e^{σ A(x, b)}` with large `σ`.
pub fn sample_bump_focused(
    spec: &BumpSpec,
    radial_nodes: usize,
    b: &BoundaryPoint,
    focus: &FocusedSpec,
) -> Result<SampledFunction> {
    let dim = spec.dim();
    let local_b = spec.inverse().apply_boundary(b)?;
    let radial = RadialGrid::new(radial_nodes, 0.0, spec.radius)?;
    let angular = BoundaryGrid::focused(dim, &local_b, focus)?;
    sample_on(spec, spec.center.clone(), radial, angular, Centering::Bump)
}

fn sample_on(
    spec: &BumpSpec,
    frame: Isometry,
    radial: RadialGrid,
    angular: BoundaryGrid,
    centering: Centering,
) -> Result<SampledFunction> {
    let dim = spec.dim();
    let mut values = Vec::with_capacity(radial.len() * angular.len());
    for r in &radial.nodes {
        let t = (0.5 * r).tanh();
        for b in angular.points() {
            let c = b.coords();
            let y = [t * c[0], t * c[1], t * c[2]];
            let v = match centering {
                Centering::Bump => spec.eval_local(&y),
                Centering::Origin => spec.eval_raw(&y),
            };
            values.push(Complex64::new(v, 0.0));
        }
    }
    let patch = Patch::new(frame, radial, angular, values)?;
    Ok(SampledFunction {
        dim,
        patches: vec![patch],
        support_radius: spec.support_radius(),
        analytic: Some(vec![(Complex64::new(1.0, 0.0), spec.clone())]),
    })
}

/// Sample a linear combination of bumps, one patch per bump.
pub fn sample_bumps(
    terms: &[(Complex64, BumpSpec)],
    grids: &SamplingGrids,
) -> Result<SampledFunction> {
    let mut acc = SampledFunction::zero(grids.dim());
    for (c, spec) in terms {
        acc = acc.add(&sample_bump(spec, grids)?.scale(*c))?;
    }
    Ok(acc)
}

/// `∫_X f dμ`.
pub fn integrate_x(f: &SampledFunction) -> Complex64 {
    f.nodes().map(|(_, m, v)| v * m).sum()
}

/// `∫_X |f|² dμ`.
pub fn integrate_x_abs2(f: &SampledFunction) -> f64 {
    f.nodes().map(|(_, m, v)| v.norm_sqr() * m).sum()
}

/// `∫_B F db` with the normalized measure.
pub fn integrate_b(grid: &BoundaryGrid, samples: &[Complex64]) -> Result<Complex64> {
    grid.integrate(samples)
}

/// `∫_0^{Λ_max} F(λ) dλ`.
pub fn integrate_spectrum(grid: &SpectralGrid, values: &[Complex64]) -> Result<Complex64> {
    grid.integrate(values)
}

/// Node counts for spherical means over a cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapSpec {
    pub theta_nodes: usize,
    /// Ignored in dimension two.
    pub azimuth_nodes: usize,
}

impl Default for CapSpec {
    fn default() -> Self {
        Self {
            theta_nodes: 32,
            azimuth_nodes: 32,
        }
    }
}

/// Normalized mean of a single bump over the geodesic sphere
/// `{frame · polar(s, ω)}`. Only the cap of directions that meet the support
/// is integrated, so the integrand is smooth on the quadrature domain.
pub(crate) fn bump_sphere_mean(spec: &BumpSpec, frame: &Isometry, s: f64, cap: &CapSpec) -> f64 {
    let to_local = frame.then(spec.inverse());
    if s <= 0.0 {
        return spec.eval_local(&to_local.act_raw(&[0.0; 3]));
    }
    let q = frame.inverse().act_raw(spec.center_point().coords());
    let qn = norm_sq(&q).sqrt();
    let d0 = 2.0 * qn.atanh();
    let r = spec.radius;
    let cos_max = if qn < 1e-14 {
        if s < r {
            -1.0
        } else {
            return 0.0;
        }
    } else {
        (s.cosh() * d0.cosh() - r.cosh()) / (s.sinh() * d0.sinh())
    };
    if cos_max >= 1.0 {
        return 0.0;
    }
    let theta_max = cos_max.max(-1.0).acos();
    let axis = if qn < 1e-14 {
        [1.0, 0.0, 0.0]
    } else {
        [q[0] / qn, q[1] / qn, q[2] / qn]
    };
    let t = (0.5 * s).tanh();
    let gl = GaussLegendre::get(cap.theta_nodes.max(1));
    let (thetas, wts) = gl.mapped(0.0, theta_max);
    let dim = frame.dim();
    let mut acc = 0.0;
    match dim {
        Dim::Two => {
            let perp = [-axis[1], axis[0], 0.0];
            for (th, w) in thetas.iter().zip(&wts) {
                let (sn, cs) = th.sin_cos();
                let mut pair = 0.0;
                for sign in [1.0, -1.0] {
                    let y = [
                        t * (cs * axis[0] + sign * sn * perp[0]),
                        t * (cs * axis[1] + sign * sn * perp[1]),
                        0.0,
                    ];
                    pair += spec.eval_local(&to_local.act_raw(&y));
                }
                acc += w * pair;
            }
            acc / (2.0 * PI)
        }
        Dim::Three => {
            let (u, v) = orthonormal_complement(&axis);
            let n_az = cap.azimuth_nodes.max(1);
            for (th, w) in thetas.iter().zip(&wts) {
                let (sn, cs) = th.sin_cos();
                let mut ring = 0.0;
                for k in 0..n_az {
                    let phi = 2.0 * PI * (k as f64 + 0.5) / n_az as f64;
                    let (sp, cp) = phi.sin_cos();
                    let mut y = [0.0; 3];
                    for i in 0..3 {
                        y[i] = t * (sn * cp * u[i] + sn * sp * v[i] + cs * axis[i]);
                    }
                    ring += spec.eval_local(&to_local.act_raw(&y));
                }
                acc += w * sn * ring;
            }
            acc / (2.0 * n_az as f64)
        }
    }
}

/// Radii of spheres about `frame · 0` that meet the bump's support, split
/// where the sphere stops lying entirely inside the support so that the
/// mean is smooth on each piece.
pub(crate) fn bump_shell(spec: &BumpSpec, frame: &Isometry) -> Vec<(f64, f64)> {
    let d = dist_unchecked(frame.origin_image().coords(), spec.center_point().coords());
    let r = spec.radius;
    if d < r && d > 1e-12 {
        vec![(0.0, r - d), (r - d, r + d)]
    } else {
        vec![((d - r).max(0.0), d + r)]
    }
}

/// Normalized spherical mean `∫_B f(frame · polar(s, b)) db`.
pub fn spherical_mean(
    f: &SampledFunction,
    frame: &Isometry,
    s: f64,
    cap: &CapSpec,
) -> Result<Complex64> {
    let terms = f.analytic().ok_or(Error::NoAnalyticForm)?;
    Ok(terms
        .iter()
        .map(|(c, spec)| c * bump_sphere_mean(spec, frame, s, cap))
        .sum())
}

/// `∫_K f(g k x) dk`. Because `k ↦ k·x` pushes Haar measure forward to the
/// normalized measure on the sphere of radius `d(0, x)`, this is the
/// spherical mean about `g·0`.
pub fn k_average(f: &SampledFunction, g: &Isometry, x: &Point, cap: &CapSpec) -> Result<Complex64> {
    if x.dim() != f.dim() || g.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: x.dim(),
        });
    }
    spherical_mean(f, g, x.radius(), cap)
}

/// `∫_K f(g k x) dk` with `k` running over the rotations attached to a
/// boundary grid: in H^2 the grid angles, in H^3 rotations taking `e₁` to
/// each grid point. Works for sampled data without an analytic descriptor
/// only if `f` can be evaluated, so it still requires one.
pub fn k_average_on_grid(
    f: &SampledFunction,
    g: &Isometry,
    x: &Point,
    grid: &BoundaryGrid,
) -> Result<Complex64> {
    let r = x.radius();
    let t = (0.5 * r).tanh();
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, w) in grid.points().iter().zip(grid.weights()) {
        let c = b.coords();
        let y = g.act_raw(&[t * c[0], t * c[1], t * c[2]]);
        acc += f.eval_raw(&y)? * *w;
    }
    Ok(acc)
}

/// The K-average `x ↦ ∫_K f(g k x) dk` materialized as a K-invariant
/// sampled function: one radial patch per analytic term, each spanning the
/// shell of radii where that term is nonzero.
pub fn materialize_k_average(
    f: &SampledFunction,
    g: &Isometry,
    radial_nodes: usize,
    cap: &CapSpec,
) -> Result<SampledFunction> {
    let dim = f.dim();
    let terms = f.analytic().ok_or(Error::NoAnalyticForm)?;
    let angular_size = match dim {
        Dim::Two => BoundarySize::Circle(4),
        Dim::Three => BoundarySize::Sphere { theta: 2, phi: 4 },
    };
    let angular = BoundaryGrid::uniform(angular_size)?;
    let mut patches = Vec::with_capacity(terms.len());
    let mut support: f64 = 0.0;
    for (c, spec) in terms {
        for (lo, hi) in bump_shell(spec, g) {
            support = support.max(hi);
            let radial = RadialGrid::new(radial_nodes, lo, hi)?;
            let mut values = Vec::with_capacity(radial.len() * angular.len());
            for r in &radial.nodes {
                let m = c * bump_sphere_mean(spec, g, *r, cap);
                values.extend(std::iter::repeat(m).take(angular.len()));
            }
            patches.push(Patch::new(
                Isometry::identity(dim),
                radial,
                angular.clone(),
                values,
            )?);
        }
    }
    SampledFunction::from_patches(dim, patches, support)
}
