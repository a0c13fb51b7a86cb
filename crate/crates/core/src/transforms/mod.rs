//! Helgason, Poisson and joint-eigenspace transforms.
//!
//! `jeft` is computed as the Poisson transform of the Helgason slice
//! `b ↦ f̂(λ, b)`; `jeft_direct` integrates `f(y) φ_λ(d(x, y))` in geodesic
//! polar coordinates about `x`. The two share no code beyond the spherical
//! functions, so their agreement is a real check.

mod checks;
mod field;
mod inversion;

pub use checks::{
    asymptotic_limit_residual, eigen_equation_residual, functional_equation_residual,
    helgason_e_mismatch, kaverage_bridge_residual, kernel_eigen_residual, AsymptoticReport,
    BridgeReport, EigenResidual,
};
pub use field::{helgason_field, jeft_field, JeftField, TransformField};
pub use inversion::{
    calibrate_kappa, invert, invert_with_means, kappa_analytic, plancherel, plancherel_residual,
    Calibration, InversionResult, PlancherelReport,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    dist_unchecked, dot, norm_sq, volume_weight, BoundaryPoint, Dim, Isometry, Point, Vec3,
};
use crate::quadrature::{BoundaryGrid, BoundarySize, GaussLegendre};
use crate::sampling::{bump_shell, bump_sphere_mean, CapSpec, SampledFunction};
use crate::spectral::spherical_phi;

/// Nonzero quadrature nodes of `f` with the pieces of `A(y, b)` that do not
/// depend on `b`.
pub(crate) struct KernelNodes {
    pos: Vec<Vec3>,
    yy: Vec<f64>,
    /// `1 - |y|²`.
    num: Vec<f64>,
    fm: Vec<Complex64>,
}

impl KernelNodes {
    pub(crate) fn new(f: &SampledFunction) -> Self {
        let n = f.node_count();
        let mut out = Self {
            pos: Vec::with_capacity(n),
            yy: Vec::with_capacity(n),
            num: Vec::with_capacity(n),
            fm: Vec::with_capacity(n),
        };
        for (x, m, v) in f.nodes() {
            if v == Complex64::new(0.0, 0.0) || m == 0.0 {
                continue;
            }
            let yy = norm_sq(x);
            out.pos.push(*x);
            out.yy.push(yy);
            out.num.push(1.0 - yy);
            out.fm.push(v * m);
        }
        out
    }

    /// `e^{A(y_k, b)}`.
    #[inline]
    fn ratio(&self, k: usize, b: &Vec3) -> f64 {
        self.num[k] / (1.0 - 2.0 * dot(&self.pos[k], b) + self.yy[k])
    }

    #[inline]
    fn busemann(&self, k: usize, b: &Vec3) -> f64 {
        self.ratio(k, b).ln()
    }

    /// `Σ f m e^{z A(y, b)}`.
    pub(crate) fn sum(&self, b: &Vec3, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        // e^{ρA} is w or √w for the two values of ρ; skip the exp there.
        let pow: fn(f64, f64) -> f64 = if z.re == 1.0 {
            |w, _| w
        } else if z.re == 0.5 {
            |w, _| w.sqrt()
        } else {
            |w, e| w.powf(e)
        };
        for k in 0..self.fm.len() {
            let w = self.ratio(k, b);
            let mag = pow(w, z.re);
            let (s, c) = (z.im * w.ln()).sin_cos();
            acc += self.fm[k] * Complex64::new(mag * c, mag * s);
        }
        acc
    }

    /// `Σ f m e^{z A(y, b)}` returned as `(mantissa, log scale)` so large
    /// exponents cannot overflow.
    pub(crate) fn sum_scaled(&self, b: &Vec3, z: Complex64) -> (Complex64, f64) {
        let mut top = f64::NEG_INFINITY;
        let mut expo = Vec::with_capacity(self.fm.len());
        for k in 0..self.fm.len() {
            let a = self.busemann(k, b);
            top = top.max(z.re * a);
            expo.push(a);
        }
        if !top.is_finite() {
            return (Complex64::new(0.0, 0.0), 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        if z.im == 0.0 {
            for (k, a) in expo.iter().enumerate() {
                acc += self.fm[k] * (z.re * a - top).exp();
            }
            return (acc, top);
        }
        for (k, a) in expo.iter().enumerate() {
            let mag = (z.re * a - top).exp();
            let (s, c) = (z.im * a).sin_cos();
            acc += self.fm[k] * Complex64::new(mag * c, mag * s);
        }
        (acc, top)
    }

    /// `Σ f m e^{(-iλ_k + ρ) A(y, b)}` for several real `λ_k` at once.
    pub(crate) fn sum_many(&self, b: &Vec3, lambdas: &[f64], rho: f64, out: &mut [Complex64]) {
        out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for k in 0..self.fm.len() {
            let a = self.busemann(k, b);
            let base = self.fm[k] * (rho * a).exp();
            for (o, l) in out.iter_mut().zip(lambdas) {
                let (s, c) = (l * a).sin_cos();
                *o += base * Complex64::new(c, -s);
            }
        }
    }
}

#[inline]
fn helgason_exponent(dim: Dim, lambda: Complex64) -> Complex64 {
    Complex64::new(dim.rho(), 0.0) - Complex64::i() * lambda
}

#[inline]
fn poisson_exponent(dim: Dim, lambda: Complex64) -> Complex64 {
    Complex64::new(dim.rho(), 0.0) + Complex64::i() * lambda
}

fn check_dim(expected: Dim, found: Dim) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `f̂(λ, b) = ∫_X f(x) e^{(-iλ+ρ) A(x, b)} dx`.
pub fn helgason_forward(
    f: &SampledFunction,
    lambda: Complex64,
    b: &BoundaryPoint,
) -> Result<Complex64> {
    check_dim(f.dim(), b.dim())?;
    Ok(KernelNodes::new(f).sum(b.coords(), helgason_exponent(f.dim(), lambda)))
}

/// `b ↦ f̂(λ, b)` on every point of `grid`.
pub fn helgason_slice(
    f: &SampledFunction,
    lambda: Complex64,
    grid: &BoundaryGrid,
) -> Result<Vec<Complex64>> {
    check_dim(f.dim(), grid.dim())?;
    let nodes = KernelNodes::new(f);
    let z = helgason_exponent(f.dim(), lambda);
    Ok(grid
        .points()
        .iter()
        .map(|b| nodes.sum(b.coords(), z))
        .collect())
}

/// `P_λ F(x) = ∫_B e^{(iλ+ρ) A(x, b)} F(b) db` for samples on `grid`.
pub fn poisson(
    grid: &BoundaryGrid,
    samples: &[Complex64],
    lambda: Complex64,
    x: &Point,
) -> Result<Complex64> {
    check_dim(grid.dim(), x.dim())?;
    if samples.len() != grid.len() {
        return Err(Error::Config(format!(
            "expected {} boundary samples, got {}",
            grid.len(),
            samples.len()
        )));
    }
    Ok(poisson_raw(
        grid,
        samples,
        poisson_exponent(grid.dim(), lambda),
        x.coords(),
    ))
}

fn poisson_raw(grid: &BoundaryGrid, weighted: &[Complex64], z: Complex64, x: &Vec3) -> Complex64 {
    let xx = norm_sq(x);
    let ln_w = (1.0 - xx).ln();
    let mut acc = Complex64::new(0.0, 0.0);
    for ((b, w), v) in grid.points().iter().zip(grid.weights()).zip(weighted) {
        let a = ln_w - (1.0 - 2.0 * dot(x, b.coords()) + xx).ln();
        acc += v * *w * (z * a).exp();
    }
    acc
}

/// Boundary grid adequate for a Poisson integral whose kernel and density
/// both live within hyperbolic radius `reach` of the origin. Harmonic
/// content of such kernels decays like `tanh(reach/2)^ℓ`; the node count
/// resolves degree `ℓ` down to about 1e-11 plus the oscillation of
/// `e^{iλA}`.
pub fn poisson_grid(
    dim: Dim,
    pole: &BoundaryPoint,
    lambda_abs: f64,
    reach: f64,
) -> Result<BoundaryGrid> {
    let q = (0.5 * reach.max(0.05)).tanh();
    let degree = (-20.0 / q.ln()).ceil() + (2.0 * (lambda_abs + 1.0) * reach).ceil() + 8.0;
    let degree = degree.min(400.0) as usize;
    let size = match dim {
        Dim::Two => BoundarySize::Circle(degree + 8),
        Dim::Three => BoundarySize::Sphere {
            theta: degree / 2 + 4,
            phi: degree + 8,
        },
    };
    BoundaryGrid::uniform_with_pole(size, pole)
}

/// The factorized transform at a fixed `λ`: the Helgason slice is computed
/// once on a boundary grid and the Poisson integral is then cheap to
/// evaluate at many points.
#[derive(Debug, Clone)]
pub struct JeftEvaluator {
    dim: Dim,
    lambda: Complex64,
    grid: BoundaryGrid,
    slice: Vec<Complex64>,
}

impl JeftEvaluator {
    pub fn new(f: &SampledFunction, lambda: Complex64, grid: BoundaryGrid) -> Result<Self> {
        let slice = helgason_slice(f, lambda, &grid)?;
        Ok(Self {
            dim: f.dim(),
            lambda,
            grid,
            slice,
        })
    }

    /// Evaluator with a grid from [`poisson_grid`] covering points out to
    /// hyperbolic radius `reach`.
    pub fn for_reach(f: &SampledFunction, lambda: Complex64, reach: f64) -> Result<Self> {
        let grid = poisson_grid(
            f.dim(),
            &BoundaryPoint::e1(f.dim()),
            lambda.norm(),
            reach.max(f.support_radius()),
        )?;
        Self::new(f, lambda, grid)
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }

    pub fn slice(&self) -> &[Complex64] {
        &self.slice
    }

    pub fn eval(&self, x: &Point) -> Result<Complex64> {
        check_dim(self.dim, x.dim())?;
        Ok(self.eval_raw(x.coords()))
    }

    pub(crate) fn eval_raw(&self, x: &Vec3) -> Complex64 {
        poisson_raw(
            &self.grid,
            &self.slice,
            poisson_exponent(self.dim, self.lambda),
            x,
        )
    }
}

/// `(H_x f)(λ)` as the Poisson transform of `b ↦ f̂(λ, b)`.
pub fn jeft(f: &SampledFunction, lambda: Complex64, x: &Point) -> Result<Complex64> {
    check_dim(f.dim(), x.dim())?;
    let (r, dir) = crate::geometry::point_to_polar(x);
    let grid = poisson_grid(f.dim(), &dir, lambda.norm(), r.max(f.support_radius()))?;
    JeftEvaluator::new(f, lambda, grid)?.eval(x)
}

/// Node counts for [`jeft_direct`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectConfig {
    /// Radial nodes per analytic term before scaling with `λ`.
    pub radial_nodes: usize,
    pub cap: CapSpec,
}

impl Default for DirectConfig {
    fn default() -> Self {
        Self {
            radial_nodes: 48,
            cap: CapSpec::default(),
        }
    }
}

/// Spherical means of `f` about a point `x`, stored with their radial
/// quadrature weights so that `(f × φ_λ)(x)` is a single sum over radii.
#[derive(Debug, Clone)]
pub struct SphericalMeans {
    dim: Dim,
    radii: Vec<f64>,
    weighted: Vec<Complex64>,
}

impl SphericalMeans {
    /// Means for all spectral parameters with `|λ| ≤ lambda_max`; the radial
    /// grid is refined so `φ_λ` stays resolved up to that bound.
    pub fn new(
        f: &SampledFunction,
        x: &Point,
        cfg: &DirectConfig,
        lambda_max: f64,
    ) -> Result<Self> {
        check_dim(f.dim(), x.dim())?;
        let dim = f.dim();
        let terms = f.analytic().ok_or(Error::NoAnalyticForm)?;
        let frame = Isometry::translation(x);
        let area = dim.sphere_area();
        let mut radii = Vec::new();
        let mut weighted = Vec::new();
        for (c, spec) in terms {
            for (lo, hi) in bump_shell(spec, &frame) {
                let n = cfg.radial_nodes as f64 + 0.7 * lambda_max * (hi - lo);
                let gl = GaussLegendre::at_least(n.ceil() as usize);
                let (ss, ws) = gl.mapped(lo, hi);
                for (s, w) in ss.iter().zip(&ws) {
                    let m = bump_sphere_mean(spec, &frame, *s, &cfg.cap);
                    if m == 0.0 {
                        continue;
                    }
                    radii.push(*s);
                    weighted.push(c * (w * area * volume_weight(dim, *s) * m));
                }
            }
        }
        Ok(Self {
            dim,
            radii,
            weighted,
        })
    }

    pub fn jeft(&self, lambda: Complex64) -> Complex64 {
        self.radii
            .iter()
            .zip(&self.weighted)
            .map(|(s, w)| w * spherical_phi(self.dim, lambda, *s))
            .sum()
    }
}

/// `(f × φ_λ)(x) = ∫_X f(y) φ_λ(d(x, y)) dy`. Uses spherical means of the
/// analytic descriptor when available and the native sample grid otherwise.
pub fn jeft_direct(f: &SampledFunction, lambda: Complex64, x: &Point) -> Result<Complex64> {
    jeft_direct_with(f, lambda, x, &DirectConfig::default())
}

pub fn jeft_direct_with(
    f: &SampledFunction,
    lambda: Complex64,
    x: &Point,
    cfg: &DirectConfig,
) -> Result<Complex64> {
    check_dim(f.dim(), x.dim())?;
    if f.analytic().is_some() {
        return Ok(SphericalMeans::new(f, x, cfg, lambda.norm())?.jeft(lambda));
    }
    let dim = f.dim();
    Ok(f.nodes()
        .map(|(y, m, v)| v * m * spherical_phi(dim, lambda, dist_unchecked(x.coords(), y)))
        .sum())
}

/// `f̃(λ) = ∫_X f(x) φ_{-λ}(x) dx` for K-invariant `f`.
pub fn spherical_transform(f: &SampledFunction, lambda: Complex64) -> Result<Complex64> {
    let spread = f.angular_spread();
    if spread > 1e-10 {
        return Err(Error::NotKInvariant(spread));
    }
    let dim = f.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for p in f.patches() {
        let nb = p.angular().len();
        for ((r, vals), ms) in p
            .radial()
            .nodes
            .iter()
            .zip(p.values().chunks(nb))
            .zip(p.measure().chunks(nb))
        {
            let row: Complex64 = vals.iter().zip(ms).map(|(v, m)| v * m).sum();
            acc += row * spherical_phi(dim, -lambda, *r);
        }
    }
    Ok(acc)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::geometry::{polar_to_point, random_direction, random_point};
    use crate::quadrature::FocusedSpec;
    use crate::sampling::{sample_bump, BumpSpec, Centering, Profile, SamplingGrids};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for k in 1..n {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + k as f64 * h);
        }
        s * h / 3.0
    }

    pub(crate) fn modulated(dim: Dim, rng: &mut ChaCha8Rng) -> BumpSpec {
        let g = Isometry::random(dim, 1.0, rng);
        let axis = random_direction(dim, rng);
        let radius = rng.gen_range(0.6..1.2);
        let alpha = rng.gen_range(-1.0..1.0);
        BumpSpec::new(radius, g, alpha, axis, Profile::Smooth).unwrap()
    }

    #[test]
    fn zero_function_transforms_to_zero() {
        for dim in [Dim::Two, Dim::Three] {
            let f = SampledFunction::zero(dim);
            let x = Point::origin(dim);
            let b = BoundaryPoint::e1(dim);
            assert_eq!(helgason_forward(&f, c(1.0), &b).unwrap(), c(0.0));
            assert_eq!(jeft_direct(&f, c(1.0), &x).unwrap(), c(0.0));
            assert_eq!(jeft(&f, c(1.0), &x).unwrap(), c(0.0));
        }
    }

    #[test]
    fn poisson_of_one_is_phi() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for dim in [Dim::Two, Dim::Three] {
            let x = random_point(dim, 1.5, &mut rng);
            let dir = crate::geometry::point_to_polar(&x).1;
            let grid = poisson_grid(dim, &dir, 2.0, 1.5).unwrap();
            let ones = vec![c(1.0); grid.len()];
            for lam in [0.5, 2.0] {
                let p = poisson(&grid, &ones, c(lam), &x).unwrap();
                let phi = spherical_phi(dim, c(lam), x.radius());
                assert!(
                    (p - phi).norm() < 1e-9,
                    "{dim:?} {lam} {}",
                    (p - phi).norm()
                );
            }
            // φ_{-iρ} = 1, and with the kernel e^{(iλ+ρ)A} it is λ = iρ that
            // makes the kernel itself identically one.
            let p = poisson(&grid, &ones, Complex64::new(0.0, -dim.rho()), &x).unwrap();
            assert!((p - c(1.0)).norm() < 1e-9);
            let f: Vec<Complex64> = grid
                .points()
                .iter()
                .map(|b| c(1.0 + b.coords()[0]))
                .collect();
            let want = grid.integrate(&f).unwrap();
            let got = poisson(&grid, &f, Complex64::new(0.0, dim.rho()), &x).unwrap();
            assert!((got - want).norm() < 1e-12);
            let at0 = poisson(&grid, &f, c(1.3), &Point::origin(dim)).unwrap();
            assert!((at0 - want).norm() < 1e-12);
        }
    }

    #[test]
    fn poisson_of_one_far_out_on_focused_grid() {
        for dim in [Dim::Two, Dim::Three] {
            let b0 = BoundaryPoint::e1(dim);
            let t = 10.0;
            let grid = BoundaryGrid::focused(dim, &b0, &FocusedSpec::auto(t, 1.0)).unwrap();
            let ones = vec![c(1.0); grid.len()];
            let x = polar_to_point(t, &b0).unwrap();
            let p = poisson(&grid, &ones, c(1.0), &x).unwrap();
            let phi = spherical_phi(dim, c(1.0), t);
            // φ is small here through cancellation; the kernel has unit mass.
            assert!((p - phi).norm() < 1e-10, "{dim:?}");
        }
    }

    #[test]
    fn radial_bump_transform_is_b_independent_and_spherical() {
        for dim in [Dim::Two, Dim::Three] {
            let spec = BumpSpec::centered(dim, 1.5).unwrap();
            let f = sample_bump(&spec, &SamplingGrids::default_for(dim)).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let st = spherical_transform(&f, c(1.7)).unwrap();
            for _ in 0..5 {
                let b = random_direction(dim, &mut rng);
                let h = helgason_forward(&f, c(1.7), &b).unwrap();
                assert!((h - st).norm() < 1e-9, "{dim:?} {}", (h - st).norm());
            }
            let j0 = jeft(&f, c(1.7), &Point::origin(dim)).unwrap();
            assert!((j0 - st).norm() < 1e-9);
            let jd = jeft_direct(&f, c(1.7), &Point::origin(dim)).unwrap();
            assert!((jd - st).norm() < 1e-9);
        }
    }

    #[test]
    fn spherical_transform_matches_sine_reduction_in_h3() {
        let spec = BumpSpec::centered(Dim::Three, 1.0).unwrap();
        let f = sample_bump(&spec, &SamplingGrids::default_for(Dim::Three)).unwrap();
        for lam in [0.5, 2.0, 6.0] {
            let oracle = 4.0 * PI / lam
                * simpson(
                    |r| Profile::Smooth.eval(r) * (lam * r).sin() * r.sinh(),
                    0.0,
                    1.0,
                    20000,
                );
            let got = spherical_transform(&f, c(lam)).unwrap();
            assert!((got.re - oracle).abs() < 1e-8 * oracle.abs().max(1e-3));
            assert!(got.im.abs() < 1e-14);
        }
    }

    #[test]
    fn spherical_transform_rejects_shifted_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let spec = modulated(Dim::Two, &mut rng);
        let f = sample_bump(&spec, &SamplingGrids::default_for(Dim::Two)).unwrap();
        assert!(matches!(
            spherical_transform(&f, c(1.0)),
            Err(Error::NotKInvariant(_))
        ));
    }

    #[test]
    fn translation_covariance_of_helgason_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for dim in [Dim::Two, Dim::Three] {
            let spec = modulated(dim, &mut rng);
            let mut grids = SamplingGrids::default_for(dim);
            let f = sample_bump(&spec, &grids).unwrap();
            let g = Isometry::translation(&random_point(dim, 0.8, &mut rng));
            let moved = BumpSpec::new(
                spec.radius(),
                spec.center().then(&g),
                spec.alpha(),
                *spec.axis(),
                spec.profile(),
            )
            .unwrap();
            // Independent sample layout for the translated function.
            grids = grids.refined(2);
            grids.centering = Centering::Bump;
            let fg = sample_bump(&moved, &grids).unwrap();
            let lam = c(1.3);
            for _ in 0..3 {
                let b = random_direction(dim, &mut rng);
                let lhs = helgason_forward(&fg, lam, &b).unwrap();
                let gb = g.inverse().apply_boundary(&b).unwrap();
                let shift = crate::geometry::busemann(&g.origin_image(), &b).unwrap();
                let rhs = (helgason_exponent(dim, lam) * shift).exp()
                    * helgason_forward(&f, lam, &gb).unwrap();
                assert!((lhs - rhs).norm() < 1e-7 * rhs.norm(), "{dim:?}");
            }
        }
    }

    #[test]
    fn factorized_and_direct_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for dim in [Dim::Two, Dim::Three] {
            let spec = modulated(dim, &mut rng);
            let f = sample_bump(&spec, &SamplingGrids::default_for(dim)).unwrap();
            let lam = c(rng.gen_range(0.5..4.0));
            let eval = JeftEvaluator::for_reach(&f, lam, 1.0).unwrap();
            for _ in 0..3 {
                let x = random_point(dim, 1.0, &mut rng);
                let a = eval.eval(&x).unwrap();
                let b = jeft_direct(&f, lam, &x).unwrap();
                assert!((a - b).norm() < 1e-6 * b.norm(), "{dim:?} {} {}", a, b);
                let w = eval_neg(&f, lam, &x);
                assert!((w - a).norm() < 1e-8 * a.norm().max(1e-3));
            }
        }
    }

    fn eval_neg(f: &SampledFunction, lam: Complex64, x: &Point) -> Complex64 {
        JeftEvaluator::for_reach(f, -lam, 1.0)
            .unwrap()
            .eval(x)
            .unwrap()
    }

    #[test]
    fn direct_route_falls_back_to_native_grid() {
        let spec = BumpSpec::centered(Dim::Two, 1.0).unwrap();
        let f = sample_bump(&spec, &SamplingGrids::default_for(Dim::Two)).unwrap();
        let raw = SampledFunction::from_patches(Dim::Two, f.patches().to_vec(), 1.0).unwrap();
        let x = Point::new(Dim::Two, &[0.2, 0.1]).unwrap();
        let a = jeft_direct(&raw, c(1.0), &x).unwrap();
        let b = jeft_direct(&f, c(1.0), &x).unwrap();
        assert!((a - b).norm() < 1e-8 * b.norm());
    }

    #[test]
    fn transforms_are_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let dim = Dim::Two;
        let grids = SamplingGrids::default_for(dim);
        let f = sample_bump(&modulated(dim, &mut rng), &grids).unwrap();
        let g = sample_bump(&modulated(dim, &mut rng), &grids).unwrap();
        let a = Complex64::new(0.7, -1.2);
        let h = f.scale(a).add(&g).unwrap();
        let b = random_direction(dim, &mut rng);
        let x = random_point(dim, 1.0, &mut rng);
        let lam = c(2.1);
        let lin = |t: &dyn Fn(&SampledFunction) -> Complex64| {
            let want = a * t(&f) + t(&g);
            (t(&h) - want).norm() / want.norm().max(1e-300)
        };
        assert!(lin(&|u| helgason_forward(u, lam, &b).unwrap()) < 1e-12);
        assert!(lin(&|u| jeft_direct(u, lam, &x).unwrap()) < 1e-12);
        assert!(lin(&|u| jeft(u, lam, &x).unwrap()) < 1e-12);
    }
}
