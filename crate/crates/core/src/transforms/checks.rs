//! Residuals of the identities satisfied by the joint-eigenspace transform.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{helgason_forward, jeft, poisson_grid, spherical_transform, JeftEvaluator};
use crate::error::{Error, Result};
use crate::geometry::{
    orthonormal_complement, point_to_polar, polar_to_point, BoundaryPoint, Dim, Isometry, Point,
    Vec3,
};
use crate::quadrature::{BoundaryGrid, FocusedSpec, SpectralGrid};
use crate::sampling::{materialize_k_average, CapSpec, SampledFunction};
use crate::spectral::{c_function, eigenvalue_of, spherical_phi, CFitConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeReport {
    /// `max_k |lhs_k - rhs_k| / (1 + |lhs_k|)`.
    pub residual: f64,
    pub lambdas: Vec<f64>,
    pub lhs: Vec<Complex64>,
    pub rhs: Vec<Complex64>,
}

/// Compare `(H_{g·0} f)(λ)` from the factorized transform with the spherical
/// transform of the materialized K-average `h ↦ ∫_K f(g k h) dk`.
pub fn kaverage_bridge_residual(
    f: &SampledFunction,
    g: &Isometry,
    spectral: &SpectralGrid,
    radial_nodes: usize,
    cap: &CapSpec,
) -> Result<BridgeReport> {
    let dim = f.dim();
    let x = g.origin_image();
    let avg = materialize_k_average(f, g, radial_nodes, cap)?;
    let (r, dir) = point_to_polar(&x);
    let mut lhs = Vec::with_capacity(spectral.len());
    let mut rhs = Vec::with_capacity(spectral.len());
    let mut residual: f64 = 0.0;
    for l in &spectral.nodes {
        let lam = Complex64::new(*l, 0.0);
        let grid = poisson_grid(dim, &dir, *l, r.max(f.support_radius()))?;
        let a = JeftEvaluator::new(f, lam, grid)?.eval(&x)?;
        let b = spherical_transform(&avg, lam)?;
        residual = residual.max((a - b).norm() / (1.0 + a.norm()));
        lhs.push(a);
        rhs.push(b);
    }
    Ok(BridgeReport {
        residual,
        lambdas: spectral.nodes.clone(),
        lhs,
        rhs,
    })
}

/// `|∫_K (H_{g k x} f)(λ) dk - φ_λ(x) (H_{g·0} f)(λ)| / |φ_λ(x) (H_{g·0} f)(λ)|`.
/// The K-integral runs over `kx = polar(d(0, x), b)` for `b` in `k_grid`.
pub fn functional_equation_residual(
    eval: &JeftEvaluator,
    g: &Isometry,
    x: &Point,
    k_grid: &BoundaryGrid,
) -> Result<f64> {
    let dim = x.dim();
    if k_grid.dim() != dim || g.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: k_grid.dim(),
        });
    }
    let r = x.radius();
    let mut lhs = Complex64::new(0.0, 0.0);
    for (b, w) in k_grid.points().iter().zip(k_grid.weights()) {
        let y = g.apply(&polar_to_point(r, b)?)?;
        lhs += eval.eval(&y)? * *w;
    }
    let rhs = spherical_phi(dim, eval.lambda(), r) * eval.eval(&g.origin_image())?;
    let diff = (lhs - rhs).norm();
    Ok(if rhs.norm() == 0.0 {
        diff
    } else {
        diff / rhs.norm()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub lambda: Complex64,
    pub c: Complex64,
    /// `c(λ) f̂(λ, b₀)`.
    pub target: Complex64,
    pub t: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Residuals divided by `|target|` (zero when the target vanishes).
    pub relative: Vec<f64>,
}

/// `|e^{(-iλ+ρ)t} (H_{a_t·o} f)(λ) - c(λ) f̂(λ, b₀)|` for each `t`, with
/// `a_t·o = polar(t, b₀)`. The Helgason slice is computed once on a grid
/// focused at `b₀`, which resolves the Poisson kernel for every `t` up to
/// the largest requested.
pub fn asymptotic_limit_residual(
    f: &SampledFunction,
    lambda: Complex64,
    b0: &BoundaryPoint,
    t_list: &[f64],
    r_max: f64,
    cfit: &CFitConfig,
) -> Result<AsymptoticReport> {
    let dim = f.dim();
    let t_top = t_list.iter().copied().fold(0.0, f64::max);
    if t_top > r_max {
        return Err(Error::Config(format!(
            "asymptotic radius {t_top} exceeds r-max {r_max}"
        )));
    }
    let grid = BoundaryGrid::focused(dim, b0, &FocusedSpec::auto(t_top, lambda.norm()))?;
    let eval = JeftEvaluator::new(f, lambda, grid)?;
    let c = c_function(dim, lambda, cfit)?.c;
    let target = c * helgason_forward(f, lambda, b0)?;
    let z = Complex64::new(dim.rho(), 0.0) - Complex64::i() * lambda;
    let mut residuals = Vec::with_capacity(t_list.len());
    let mut relative = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let x = polar_to_point(t, b0)?;
        let scaled = (z * t).exp() * eval.eval(&x)?;
        let res = (scaled - target).norm();
        residuals.push(res);
        relative.push(if target.norm() == 0.0 {
            0.0
        } else {
            res / target.norm()
        });
    }
    Ok(AsymptoticReport {
        lambda,
        c,
        target,
        t: t_list.to_vec(),
        residuals,
        relative,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenResidual {
    pub residual: f64,
    /// `|u(x)|` was below 1e-12; the residual is not meaningful.
    pub skipped: bool,
}

const EIGEN_STEP: f64 = 1e-3;

/// Polar-coordinate Laplace–Beltrami operator at `x` by central differences
/// with step `h`.
fn polar_laplacian<F: Fn(&Vec3) -> Complex64>(
    dim: Dim,
    u: &F,
    x: &Point,
    h: f64,
) -> Result<Complex64> {
    let (r, omega) = point_to_polar(x);
    let w = *omega.coords();
    let at = |rr: f64, dir: Vec3| -> Vec3 {
        let t = (0.5 * rr).tanh();
        [t * dir[0], t * dir[1], t * dir[2]]
    };
    let u0 = u(&at(r, w));
    let up = u(&at(r + h, w));
    let um = u(&at(r - h, w));
    let drift = (dim.as_usize() - 1) as f64 / r.tanh();
    let radial = (up - 2.0 * u0 + um) / (h * h) + drift * (up - um) / (2.0 * h);
    let (sh, ch) = h.sin_cos();
    let angular = match dim {
        Dim::Two => {
            let perp = [-w[1], w[0], 0.0];
            let rot = |s: f64| {
                [
                    ch * w[0] + s * sh * perp[0],
                    ch * w[1] + s * sh * perp[1],
                    0.0,
                ]
            };
            (u(&at(r, rot(1.0))) - 2.0 * u0 + u(&at(r, rot(-1.0)))) / (h * h)
        }
        Dim::Three => {
            // With the pole along q, x sits on the equator where the sphere
            // Laplacian reduces to u_θθ + u_φφ.
            let (p, q) = orthonormal_complement(&w);
            let tilt = |axis: &Vec3, s: f64| -> Vec3 {
                [
                    ch * w[0] + s * sh * axis[0],
                    ch * w[1] + s * sh * axis[1],
                    ch * w[2] + s * sh * axis[2],
                ]
            };
            let theta = u(&at(r, tilt(&q, 1.0))) - 2.0 * u0 + u(&at(r, tilt(&q, -1.0)));
            let phi = u(&at(r, tilt(&p, 1.0))) - 2.0 * u0 + u(&at(r, tilt(&p, -1.0)));
            (theta + phi) / (h * h)
        }
    };
    Ok(radial + angular / r.sinh().powi(2))
}

fn eigen_residual_of<F: Fn(&Vec3) -> Complex64>(
    dim: Dim,
    u: F,
    lambda: f64,
    x: &Point,
) -> Result<EigenResidual> {
    if x.radius() < 0.1 {
        return Err(Error::Config("eigen stencil needs d(0, x) >= 0.1".into()));
    }
    let u0 = u(x.coords());
    if u0.norm() < 1e-12 {
        return Ok(EigenResidual {
            residual: 0.0,
            skipped: true,
        });
    }
    let h = EIGEN_STEP;
    let lap = (4.0 * polar_laplacian(dim, &u, x, h)? - polar_laplacian(dim, &u, x, 2.0 * h)?) / 3.0;
    let mu = eigenvalue_of(dim, Complex64::new(lambda, 0.0));
    Ok(EigenResidual {
        residual: (lap - mu * u0).norm() / u0.norm(),
        skipped: false,
    })
}

/// `|Δu(x) - (-(λ²+ρ²)) u(x)| / |u(x)|` for `u = (H_· f)(λ)`.
pub fn eigen_equation_residual(eval: &JeftEvaluator, x: &Point) -> Result<EigenResidual> {
    let lambda = eval.lambda();
    if lambda.im != 0.0 {
        return Err(Error::Config("eigen residual needs real lambda".into()));
    }
    eigen_residual_of(x.dim(), |y| eval.eval_raw(y), lambda.re, x)
}

/// Control case: the plane wave `e^{(iλ+ρ) A(·, b)}` itself.
pub fn kernel_eigen_residual(lambda: f64, b: &BoundaryPoint, x: &Point) -> Result<EigenResidual> {
    let dim = x.dim();
    let z = Complex64::new(dim.rho(), lambda);
    let bc = *b.coords();
    eigen_residual_of(
        dim,
        move |y| (z * crate::geometry::busemann_unchecked(y, &bc)).exp(),
        lambda,
        x,
    )
}

/// `|(H_0 f)(λ) - f̂(λ, b)|`; vanishes for K-invariant `f` and generally
/// not otherwise.
pub fn helgason_e_mismatch(
    f: &SampledFunction,
    lambda: Complex64,
    b: &BoundaryPoint,
) -> Result<f64> {
    let origin = Point::origin(f.dim());
    Ok((jeft(f, lambda, &origin)? - helgason_forward(f, lambda, b)?).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{random_direction, random_point};
    use crate::quadrature::BoundarySize;
    use crate::sampling::{sample_bump, BumpSpec, Profile, SamplingGrids};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn shifted(dim: Dim) -> SampledFunction {
        let dir = BoundaryPoint::e1(dim);
        let g = Isometry::translation_by(0.7, &dir).unwrap();
        let axis = random_direction(dim, &mut ChaCha8Rng::seed_from_u64(1));
        let spec = BumpSpec::new(1.0, g, 0.5, axis, Profile::Smooth).unwrap();
        sample_bump(&spec, &SamplingGrids::default_for(dim)).unwrap()
    }

    #[test]
    fn kernel_is_an_exact_eigenfunction() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for dim in [Dim::Two, Dim::Three] {
            for _ in 0..3 {
                let b = random_direction(dim, &mut rng);
                let x = polar_to_point(1.0, &random_direction(dim, &mut rng)).unwrap();
                let r = kernel_eigen_residual(1.5, &b, &x).unwrap();
                assert!(r.residual < 1e-6, "{dim:?} {r:?}");
            }
        }
    }

    #[test]
    fn eigen_residual_for_centered_bumps() {
        for (dim, lam) in [(Dim::Three, 1.0), (Dim::Two, 2.0)] {
            let f = sample_bump(
                &BumpSpec::centered(dim, 1.0).unwrap(),
                &SamplingGrids::default_for(dim),
            )
            .unwrap();
            let eval = JeftEvaluator::for_reach(&f, c(lam), 1.0).unwrap();
            let x = polar_to_point(1.0, &BoundaryPoint::e1(dim)).unwrap();
            let r = eigen_equation_residual(&eval, &x).unwrap();
            assert!(!r.skipped && r.residual < 1e-4, "{dim:?} {r:?}");
        }
    }

    #[test]
    fn eigen_stencil_rejects_points_near_origin() {
        let x = Point::new(Dim::Two, &[0.01, 0.0]).unwrap();
        assert!(kernel_eigen_residual(1.0, &BoundaryPoint::e1(Dim::Two), &x).is_err());
    }

    #[test]
    fn functional_equation_trivial_cases() {
        for dim in [Dim::Two, Dim::Three] {
            let f = shifted(dim);
            let eval = JeftEvaluator::for_reach(&f, c(1.2), 2.0).unwrap();
            let g = Isometry::translation_by(0.5, &BoundaryPoint::e1(dim)).unwrap();
            let k_grid = BoundaryGrid::uniform(BoundarySize::default_for(dim)).unwrap();
            let r = functional_equation_residual(&eval, &g, &Point::origin(dim), &k_grid).unwrap();
            assert!(r < 1e-10);
            let x = random_point(dim, 0.8, &mut ChaCha8Rng::seed_from_u64(2));
            let r = functional_equation_residual(&eval, &g, &x, &k_grid).unwrap();
            assert!(r < 1e-5, "{dim:?} {r}");
        }
    }

    #[test]
    fn bridge_identity_collapses_for_radial_input() {
        let dim = Dim::Two;
        let f = sample_bump(
            &BumpSpec::centered(dim, 1.0).unwrap(),
            &SamplingGrids::default_for(dim),
        )
        .unwrap();
        let rep = kaverage_bridge_residual(
            &f,
            &Isometry::identity(dim),
            &SpectralGrid::new(6, 6.0).unwrap(),
            48,
            &CapSpec::default(),
        )
        .unwrap();
        assert!(rep.residual < 1e-9, "{}", rep.residual);
    }

    #[test]
    fn mismatch_vanishes_only_for_radial_input() {
        let dim = Dim::Two;
        let b = BoundaryPoint::e1(dim);
        let radial = sample_bump(
            &BumpSpec::centered(dim, 1.0).unwrap(),
            &SamplingGrids::default_for(dim),
        )
        .unwrap();
        assert!(helgason_e_mismatch(&radial, c(1.0), &b).unwrap() < 1e-8);
        assert!(helgason_e_mismatch(&shifted(dim), c(1.0), &b).unwrap() > 1e-3);
        assert_eq!(
            helgason_e_mismatch(&SampledFunction::zero(dim), c(1.0), &b).unwrap(),
            0.0
        );
    }

    #[test]
    fn asymptotic_residual_decreases() {
        let dim = Dim::Three;
        let f = sample_bump(
            &BumpSpec::centered(dim, 1.0).unwrap(),
            &SamplingGrids::default_for(dim),
        )
        .unwrap();
        let rep = asymptotic_limit_residual(
            &f,
            Complex64::new(1.0, -0.5),
            &BoundaryPoint::e1(dim),
            &[6.0, 8.0, 10.0],
            16.0,
            &CFitConfig::default(),
        )
        .unwrap();
        assert!(rep.residuals.windows(2).all(|w| w[1] < w[0]), "{rep:?}");
        assert!(rep.relative[2] < 1e-3, "{rep:?}");
    }
}
