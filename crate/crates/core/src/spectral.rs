//! Elementary spherical functions, the Harish-Chandra c-function and the
//! Plancherel density for H^2 and H^3.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Dim;
use crate::quadrature::GaussLegendre;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Spherical function `φ_λ(r)`, normalized so that `φ_λ(0) = 1`.
///
/// In H^3 this is the closed form `sin(λr) / (λ sinh r)`. In H^2 it is the
/// conical function `P_{-1/2+iλ}(cosh r)`, evaluated through the
/// Mehler–Dirichlet integral
/// `(√2/π) ∫_0^r cos(λs) / sqrt(cosh r - cosh s) ds`
/// after the substitution `s = r(1 - t²)`, which removes the endpoint
/// singularity and leaves an analytic integrand on `[0, 1]`.
pub fn spherical_phi(dim: Dim, lambda: Complex64, r: f64) -> Complex64 {
    match dim {
        Dim::Three => phi_h3(lambda, r),
        Dim::Two => phi_h2(lambda, r),
    }
}

fn phi_h3(lambda: Complex64, r: f64) -> Complex64 {
    if r < 1e-6 {
        return Complex64::new(1.0, 0.0) - (lambda * lambda + 1.0) * (r * r / 6.0);
    }
    sinc(lambda * r) * (r / r.sinh())
}

fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        Complex64::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

fn phi_h2(lambda: Complex64, r: f64) -> Complex64 {
    if r < 1e-6 {
        return Complex64::new(1.0, 0.0) - (lambda * lambda + 0.25) * (r * r / 4.0);
    }
    let n = mehler_nodes(lambda, r);
    let gl = GaussLegendre::at_least(n);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in gl.nodes.iter().zip(&gl.weights) {
        let t = 0.5 * (x + 1.0);
        let t2 = t * t;
        let den = ((0.5 * r * (2.0 - t2)).sinh() * (0.5 * r * t2).sinh()).sqrt();
        let g = r * t / den;
        acc += (lambda * (r * (1.0 - t2))).cos() * (0.5 * w * g);
    }
    acc * (2.0 / PI)
}

/// Node count for the Mehler integral: the cosine runs through `|λ| r / π`
/// half-periods and the weight has a feature of width `~1/sqrt(r)` near
/// `t = 0`.
fn mehler_nodes(lambda: Complex64, r: f64) -> usize {
    let osc = lambda.norm() * r;
    (28.0 + 0.75 * osc + 3.0 * r).ceil() as usize
}

/// Which route produced a c-function value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CMethod {
    ClosedFormD3,
    AsymptoticFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CFunctionValue {
    pub lambda: Complex64,
    pub c: Complex64,
    pub method: CMethod,
}

/// Radii used by the asymptotic fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CFitConfig {
    pub r1: f64,
    pub r2: f64,
}

impl Default for CFitConfig {
    fn default() -> Self {
        Self { r1: 12.0, r2: 14.0 }
    }
}

/// Determinants below this are treated as singular.
const FIT_DET_FLOOR: f64 = 1e-8;
/// Relative conditioning below which the second radius is shifted.
const FIT_COND_SHIFT: f64 = 0.15;

/// Harish-Chandra c-function. H^3 uses the closed form `1/(iλ)`; H^2 uses
/// [`c_function_fit`], shifting the outer radius by a quarter period when the
/// two sample radii are nearly a multiple of `π/λ` apart.
pub fn c_function(dim: Dim, lambda: Complex64, cfg: &CFitConfig) -> Result<CFunctionValue> {
    if lambda.norm() == 0.0 {
        return Err(Error::Pole);
    }
    match dim {
        Dim::Three => Ok(CFunctionValue {
            lambda,
            c: 1.0 / (I * lambda),
            method: CMethod::ClosedFormD3,
        }),
        Dim::Two => c_function_fitted(dim, lambda, cfg),
    }
}

/// The asymptotic fit in any dimension, with the same radius shift as
/// [`c_function`] applies in H^2.
pub fn c_function_fitted(dim: Dim, lambda: Complex64, cfg: &CFitConfig) -> Result<CFunctionValue> {
    let mut r2 = cfg.r2;
    let cond = fit_conditioning(lambda, cfg.r1, r2);
    if cond < FIT_COND_SHIFT && lambda.re.abs() * (r2 - cfg.r1) > 0.5 {
        r2 += 0.5 * PI / lambda.re.abs();
    }
    c_function_fit(dim, lambda, cfg.r1, r2)
}

fn fit_conditioning(lambda: Complex64, r1: f64, r2: f64) -> f64 {
    let a = (I * lambda * (r1 - r2)).exp();
    let b = (-I * lambda * (r1 - r2)).exp();
    (a - b).norm() / (a.norm() + b.norm())
}

/// Asymptotic-fit oracle: with `u(r) = φ_λ(r) e^{ρr}`, solve
/// `u(r_k) = c₊ e^{iλ r_k} + c₋ e^{-iλ r_k}` for `k = 1, 2` and return `c₊`.
pub fn c_function_fit(dim: Dim, lambda: Complex64, r1: f64, r2: f64) -> Result<CFunctionValue> {
    if lambda.norm() == 0.0 {
        return Err(Error::Pole);
    }
    let rho = dim.rho();
    let u1 = spherical_phi(dim, lambda, r1) * (rho * r1).exp();
    let u2 = spherical_phi(dim, lambda, r2) * (rho * r2).exp();
    let p1 = (I * lambda * r1).exp();
    let m1 = (-I * lambda * r1).exp();
    let p2 = (I * lambda * r2).exp();
    let m2 = (-I * lambda * r2).exp();
    let det = p1 * m2 - m1 * p2;
    if det.norm() < FIT_DET_FLOOR {
        return Err(Error::FitIllConditioned {
            det: det.norm(),
            r1,
            r2,
        });
    }
    Ok(CFunctionValue {
        lambda,
        c: (u1 * m2 - m1 * u2) / det,
        method: CMethod::AsymptoticFit,
    })
}

/// Plancherel density `|c(λ)|^{-2}` for real `λ > 0`.
pub fn plancherel_density(dim: Dim, lambda: f64, cfg: &CFitConfig) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Config(format!(
            "plancherel density needs lambda > 0, got {lambda}"
        )));
    }
    let c = c_function(dim, Complex64::new(lambda, 0.0), cfg)?;
    Ok(1.0 / c.c.norm_sqr())
}

/// Laplace–Beltrami eigenvalue `-(λ² + ρ²)` of `e_{λ,b}` and `φ_λ`.
pub fn eigenvalue_of(dim: Dim, lambda: Complex64) -> Complex64 {
    let rho = dim.rho();
    -(lambda * lambda + rho * rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Reference values of `P_{-1/2+iλ}(cosh r)` from mpmath.legenp at 30 digits.
    const CONICAL: [(f64, f64, f64); 6] = [
        (1.0, 1.0, 0.722_075_228_279_374_6),
        (2.0, 0.5, 0.753_990_778_459_713_4),
        (0.5, 3.0, 0.337_325_689_688_514_9),
        (5.0, 2.0, -0.182_133_802_279_848_54),
        (0.1, 10.0, 0.039_539_871_663_423_77),
        (10.0, 4.0, 0.003_273_124_516_623_520_2),
    ];

    #[test]
    fn h2_matches_conical_function() {
        for (lam, r, want) in CONICAL {
            let got = spherical_phi(Dim::Two, c(lam), r);
            assert_abs_diff_eq!(got.re, want, epsilon = 1e-12);
            assert_abs_diff_eq!(got.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn phi_at_origin_is_one() {
        for dim in [Dim::Two, Dim::Three] {
            for lam in [0.0, 0.7, 3.0] {
                let v = spherical_phi(dim, c(lam), 0.0);
                assert_eq!(v, c(1.0));
            }
        }
    }

    #[test]
    fn h3_closed_form() {
        assert_abs_diff_eq!(
            spherical_phi(Dim::Three, c(1.0), 1.0).re,
            1f64.sin() / 1f64.sinh(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            spherical_phi(Dim::Three, c(1.0), 1.0).re,
            0.716_023,
            epsilon = 1e-6
        );
        // lambda -> 0 limit is r / sinh r
        assert_abs_diff_eq!(
            spherical_phi(Dim::Three, c(0.0), 2.0).re,
            2.0 / 2f64.sinh(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn series_branches_are_continuous() {
        for dim in [Dim::Two, Dim::Three] {
            for lam in [0.0, 1.3, 4.0] {
                let below = spherical_phi(dim, c(lam), 0.999e-6);
                let above = spherical_phi(dim, c(lam), 1.001e-6);
                assert!((below - above).norm() < 1e-11, "{dim:?} {lam}");
            }
        }
        let a = spherical_phi(Dim::Three, c(0.999e-4), 1.0);
        let b = spherical_phi(Dim::Three, c(1.001e-4), 1.0);
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn weyl_symmetry() {
        for dim in [Dim::Two, Dim::Three] {
            for lam in [0.3, 1.0, 2.5, 7.0] {
                for r in [0.1, 1.0, 4.0, 9.0] {
                    let a = spherical_phi(dim, c(lam), r);
                    let b = spherical_phi(dim, c(-lam), r);
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn c_function_examples() {
        let v = c_function(Dim::Three, c(2.0), &CFitConfig::default()).unwrap();
        assert_abs_diff_eq!(v.c.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.c.im, -0.5, epsilon = 1e-15);
        assert_eq!(v.method, CMethod::ClosedFormD3);
        assert_abs_diff_eq!(
            plancherel_density(Dim::Three, 2.0, &CFitConfig::default()).unwrap(),
            4.0,
            epsilon = 1e-13
        );
        assert_eq!(
            c_function(Dim::Two, c(0.0), &CFitConfig::default()),
            Err(Error::Pole)
        );
        assert!(plancherel_density(Dim::Two, -1.0, &CFitConfig::default()).is_err());
    }

    #[test]
    fn fit_degenerate_radii_error() {
        // λ (r2 - r1) = π makes the 2x2 system singular.
        let lam = PI / 2.0;
        let err = c_function_fit(Dim::Three, c(lam), 12.0, 14.0).unwrap_err();
        assert!(matches!(err, Error::FitIllConditioned { .. }));
        // the public entry point shifts the radius instead
        let v = c_function(Dim::Two, c(lam), &CFitConfig::default()).unwrap();
        assert!(v.c.norm().is_finite());
    }

    #[test]
    fn h2_density_matches_gamma_closed_form() {
        // |Γ(iλ)|^2 / (π |Γ(1/2 + iλ)|^2) = 1 / (π λ tanh(πλ))
        for lam in [0.05, 0.5, 1.0, 2.0, 5.0, 11.3, 23.0] {
            let d = plancherel_density(Dim::Two, lam, &CFitConfig::default()).unwrap();
            let want = PI * lam * (PI * lam).tanh();
            assert!((d / want - 1.0).abs() < 1e-8, "lambda={lam}: {d} vs {want}");
        }
    }

    #[test]
    fn eigenvalues() {
        assert_eq!(eigenvalue_of(Dim::Two, c(0.0)), c(-0.25));
        assert_eq!(eigenvalue_of(Dim::Three, c(1.0)), c(-2.0));
        assert_eq!(
            eigenvalue_of(Dim::Two, c(1.7)),
            eigenvalue_of(Dim::Two, c(-1.7))
        );
    }
}
