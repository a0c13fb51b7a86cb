use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{DirectConfig, KernelNodes, SphericalMeans};
use crate::error::{Error, Result};
use crate::geometry::{Dim, Point};
use crate::quadrature::{BoundaryGrid, SpectralGrid};
use crate::sampling::{integrate_x_abs2, SampledFunction};
use crate::spectral::{plancherel_density, CFitConfig};

/// Closed-form inversion constant. In H^3 the sine-transform reduction gives
/// `1 / (2π²)`; H^2 has no closed form here and is calibrated instead.
pub fn kappa_analytic(dim: Dim) -> Option<f64> {
    match dim {
        Dim::Three => Some(1.0 / (2.0 * PI * PI)),
        Dim::Two => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversionResult {
    pub value: Complex64,
    /// Size of the integrand near `Λ_max`, scaled by `κ Λ_max / 10`.
    pub tail: f64,
    pub warning: Option<String>,
}

fn densities(dim: Dim, spectral: &SpectralGrid, cfit: &CFitConfig) -> Result<Vec<f64>> {
    spectral
        .nodes
        .iter()
        .map(|l| plancherel_density(dim, *l, cfit))
        .collect()
}

/// `f(x) ≈ κ ∫_0^{Λ} (H_x f)(λ) |c(λ)|^{-2} dλ`, with `H_x f` taken from
/// precomputed spherical means about `x`.
pub fn invert_with_means(
    dim: Dim,
    means: &SphericalMeans,
    spectral: &SpectralGrid,
    kappa: f64,
    cfit: &CFitConfig,
    tail_tol: f64,
) -> Result<InversionResult> {
    let dens = densities(dim, spectral, cfit)?;
    let mut integrand = Vec::with_capacity(spectral.len());
    for (l, d) in spectral.nodes.iter().zip(&dens) {
        integrand.push(means.jeft(Complex64::new(*l, 0.0)) * *d);
    }
    let value = spectral.integrate(&integrand)? * kappa;
    let cut = 0.9 * spectral.lambda_max;
    let peak = spectral
        .nodes
        .iter()
        .zip(&integrand)
        .filter(|(l, _)| **l >= cut)
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    let tail = kappa * peak * spectral.lambda_max / 10.0;
    let warning = (tail > tail_tol * value.norm().max(1e-300)).then(|| {
        format!(
            "spectral truncation: integrand near lambda-max {} is {:.3e} of the result",
            spectral.lambda_max,
            tail / value.norm().max(1e-300)
        )
    });
    Ok(InversionResult {
        value,
        tail,
        warning,
    })
}

/// Pointwise inversion at `x`.
pub fn invert(
    f: &SampledFunction,
    x: &Point,
    spectral: &SpectralGrid,
    kappa: f64,
    cfit: &CFitConfig,
    cfg: &DirectConfig,
    tail_tol: f64,
) -> Result<InversionResult> {
    if f.analytic().is_some_and(|t| t.is_empty()) {
        return Ok(InversionResult {
            value: Complex64::new(0.0, 0.0),
            tail: 0.0,
            warning: None,
        });
    }
    let means = SphericalMeans::new(f, x, cfg, spectral.lambda_max)?;
    invert_with_means(f.dim(), &means, spectral, kappa, cfit, tail_tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub kappa: f64,
    /// `κ` implied by each held-out reconstruction.
    pub held_out: Vec<f64>,
    /// `max |κ_i / κ - 1|`.
    pub spread: f64,
}

/// Choose `κ` so that `reference` is reconstructed exactly at the origin,
/// then report the `κ` each held-out `(f, x)` pair would need.
pub fn calibrate_kappa(
    reference: &SampledFunction,
    held_out: &[(SampledFunction, Point)],
    spectral: &SpectralGrid,
    cfit: &CFitConfig,
    cfg: &DirectConfig,
) -> Result<Calibration> {
    let implied = |f: &SampledFunction, x: &Point| -> Result<f64> {
        let raw = invert(f, x, spectral, 1.0, cfit, cfg, f64::INFINITY)?.value;
        let truth = f.eval(x)?;
        if raw.norm() == 0.0 {
            return Err(Error::Fit("calibration integral vanished".into()));
        }
        Ok((truth / raw).re)
    };
    let kappa = implied(reference, &Point::origin(reference.dim()))?;
    let held: Vec<f64> = held_out
        .iter()
        .map(|(f, x)| implied(f, x))
        .collect::<Result<_>>()?;
    let spread = held
        .iter()
        .map(|k| (k / kappa - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(Calibration {
        kappa,
        held_out: held,
        spread,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlancherelReport {
    /// `∫_X |f|²`.
    pub lhs: f64,
    /// `∫∫ |f̂|² |c|^{-2} dλ db`.
    pub rhs: f64,
    pub kappa: f64,
    /// `lhs / rhs`.
    pub kappa_prime: f64,
    pub residual: f64,
}

/// Both sides of the Plancherel identity by independent quadrature.
pub fn plancherel(
    f: &SampledFunction,
    spectral: &SpectralGrid,
    boundary: &BoundaryGrid,
    kappa: f64,
    cfit: &CFitConfig,
) -> Result<PlancherelReport> {
    let dim = f.dim();
    if boundary.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: boundary.dim(),
        });
    }
    let lhs = integrate_x_abs2(f);
    let dens = densities(dim, spectral, cfit)?;
    let nodes = KernelNodes::new(f);
    let mut per_lambda = vec![0.0; spectral.len()];
    let mut buf = vec![Complex64::new(0.0, 0.0); spectral.len()];
    for (b, w) in boundary.points().iter().zip(boundary.weights()) {
        nodes.sum_many(b.coords(), &spectral.nodes, dim.rho(), &mut buf);
        for (acc, v) in per_lambda.iter_mut().zip(&buf) {
            *acc += w * v.norm_sqr();
        }
    }
    let rhs: f64 = per_lambda
        .iter()
        .zip(&dens)
        .zip(&spectral.weights)
        .map(|((a, d), w)| a * d * w)
        .sum();
    let (kappa_prime, residual) = if lhs == 0.0 {
        (kappa, (kappa * rhs).abs())
    } else {
        (lhs / rhs, (lhs - kappa * rhs).abs() / lhs)
    };
    Ok(PlancherelReport {
        lhs,
        rhs,
        kappa,
        kappa_prime,
        residual,
    })
}

pub fn plancherel_residual(
    f: &SampledFunction,
    spectral: &SpectralGrid,
    boundary: &BoundaryGrid,
    kappa: f64,
    cfit: &CFitConfig,
) -> Result<f64> {
    Ok(plancherel(f, spectral, boundary, kappa, cfit)?.residual)
}
