//! Exponential type, decay and holomorphy of the Helgason transform.
//!
//! The type is read off the imaginary axis: `f̂(iσ, b)` carries the kernel
//! `e^{(σ + ρ) A(x, b)}`, so `log |f̂(iσ, b)|` grows like `σ sup_x A(x, b)`
//! over the support. The bump profile adds sub-linear terms, so the slope is
//! fitted jointly with `√σ`, `ln σ` and `1/√σ` corrections.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{orthonormal_complement, BoundaryPoint, Dim, Point, Vec3};
use crate::quadrature::{BoundaryGrid, BoundarySize, FocusedSpec};
use crate::sampling::{sample_bump_focused, sample_bumps, SampledFunction, SamplingGrids};
use crate::transforms::{eigen_equation_residual, helgason_forward, JeftEvaluator, KernelNodes};

/// Largest `|Im λ| R_f` accepted by [`complex_transform`].
pub const EXPONENT_GUARD: f64 = 40.0;

/// `f̂(λ, b)` at complex `λ`.
pub fn complex_transform(
    f: &SampledFunction,
    lambda: Complex64,
    b: &BoundaryPoint,
) -> Result<Complex64> {
    let e = lambda.im.abs() * f.support_radius();
    if e > EXPONENT_GUARD {
        return Err(Error::Range(e));
    }
    helgason_forward(f, lambda, b)
}

/// `|mean of f̂ over the circle |λ - center| = radius| - f̂(center)|`,
/// relative to `max(|f̂(center)|, 1e-300)`.
pub fn holomorphy_residual(
    f: &SampledFunction,
    center: Complex64,
    b: &BoundaryPoint,
    radius: f64,
    nodes: usize,
) -> Result<f64> {
    let mid = complex_transform(f, center, b)?;
    let mut mean = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        let a = 2.0 * PI * k as f64 / nodes as f64;
        mean += complex_transform(f, center + Complex64::from_polar(radius, a), b)?;
    }
    mean /= nodes as f64;
    Ok((mean - mid).norm() / mid.norm().max(1e-300))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeConfig {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub n_sigma: usize,
    /// Smallest window the fit may shrink to.
    pub min_window: usize,
    pub fit_tol: f64,
    /// Radial nodes of the resampled patch when `f` has a descriptor.
    pub radial_nodes: usize,
    /// Coarse boundary sample for the global estimate.
    pub search: BoundarySize,
    pub refine_steps: usize,
    /// Pattern-search step (radians) at which refinement stops.
    pub min_step: f64,
}

impl TypeConfig {
    pub fn default_for(dim: Dim) -> Self {
        Self {
            sigma_min: 1.0,
            sigma_max: 40.0,
            n_sigma: 16,
            min_window: 8,
            fit_tol: 1e-2,
            radial_nodes: 64,
            search: match dim {
                Dim::Two => BoundarySize::Circle(12),
                Dim::Three => BoundarySize::Sphere { theta: 4, phi: 8 },
            },
            refine_steps: 32,
            min_step: 2e-3,
        }
    }

    fn sigmas(&self) -> Vec<f64> {
        let n = self.n_sigma.max(2);
        (0..n)
            .map(|k| self.sigma_min + (self.sigma_max - self.sigma_min) * k as f64 / (n - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub b: Vec3,
    pub sigma: Vec<f64>,
    pub log_abs: Vec<f64>,
    /// Index of the first `σ` in the accepted window.
    pub window_start: usize,
    pub slope: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeEstimate {
    pub fits: Vec<SlopeFit>,
    /// Index into `fits` of the maximizing direction.
    pub best: usize,
    pub r_hat: f64,
}

/// Least squares by Householder QR; returns the coefficients and the rms
/// residual.
fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Option<(Vec<f64>, f64)> {
    let m = rows.len();
    let n = rows.first()?.len();
    if m < n {
        return None;
    }
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut rhs = y.to_vec();
    for j in 0..n {
        let norm = (j..m).map(|i| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..m).map(|i| a[i][j]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|t| t * t).sum();
        if vv == 0.0 {
            continue;
        }
        for k in j..n {
            let s: f64 = (j..m).map(|i| v[i - j] * a[i][k]).sum::<f64>() * 2.0 / vv;
            for i in j..m {
                a[i][k] -= s * v[i - j];
            }
        }
        let s: f64 = (j..m).map(|i| v[i - j] * rhs[i]).sum::<f64>() * 2.0 / vv;
        for i in j..m {
            rhs[i] -= s * v[i - j];
        }
    }
    let mut x = vec![0.0; n];
    for j in (0..n).rev() {
        let s: f64 = (j + 1..n).map(|k| a[j][k] * x[k]).sum();
        if a[j][j].abs() < 1e-14 * a[0][0].abs() {
            return None;
        }
        x[j] = (rhs[j] - s) / a[j][j];
    }
    let rms = ((n..m).map(|i| rhs[i] * rhs[i]).sum::<f64>() / m as f64).sqrt();
    Some((x, rms))
}

fn basis(sigma: f64) -> Vec<f64> {
    let r = sigma.sqrt();
    vec![1.0, sigma, r, sigma.ln(), 1.0 / r]
}

/// Fit over the largest trailing window with rms residual `≤ tol`; falls
/// back to the best-residual window when none qualifies.
fn fit_slope(
    sigma: &[f64],
    log_abs: &[f64],
    min_window: usize,
    tol: f64,
) -> Result<(usize, f64, f64)> {
    let n = sigma.len();
    let min_window = min_window.clamp(6, n);
    let mut fallback: Option<(usize, f64, f64)> = None;
    for start in 0..=n - min_window {
        let rows: Vec<Vec<f64>> = sigma[start..].iter().map(|s| basis(*s)).collect();
        let Some((c, rms)) = least_squares(&rows, &log_abs[start..]) else {
            continue;
        };
        if rms <= tol {
            return Ok((start, c[1], rms));
        }
        if fallback.map_or(true, |f| rms < f.2) {
            fallback = Some((start, c[1], rms));
        }
    }
    fallback.ok_or_else(|| Error::Fit("no fitting window".into()))
}

/// `log |f̂(iσ, b)|` for each `σ`, computed in scaled form.
fn log_profile(
    f: &SampledFunction,
    b: &BoundaryPoint,
    sigma: &[f64],
    cfg: &TypeConfig,
) -> Result<Vec<f64>> {
    let focused;
    let src = match f.analytic() {
        Some(terms) if !terms.is_empty() => {
            let top = sigma.iter().copied().fold(1.0, f64::max);
            let focus = FocusedSpec {
                t: 0.5 * top.ln() + 0.5,
                theta_split: 1.0,
                tail: 4.0,
                log_nodes: 48,
                broad_nodes: 32,
                azimuth_nodes: 32,
            };
            let mut acc = SampledFunction::zero(f.dim());
            for (c, spec) in terms {
                acc =
                    acc.add(&sample_bump_focused(spec, cfg.radial_nodes, b, &focus)?.scale(*c))?;
            }
            focused = acc;
            &focused
        }
        _ => f,
    };
    let nodes = KernelNodes::new(src);
    let rho = f.dim().rho();
    sigma
        .iter()
        .map(|s| {
            let (m, scale) = nodes.sum_scaled(b.coords(), Complex64::new(s + rho, 0.0));
            if m.norm() == 0.0 || !m.norm().is_finite() {
                Err(Error::Fit(format!("|f̂(iσ, b)| vanished at σ = {s}")))
            } else {
                Ok(m.norm().ln() + scale)
            }
        })
        .collect()
}

/// Type slope of `σ ↦ log |f̂(iσ, b)|` at one boundary point.
pub fn estimate_slope(
    f: &SampledFunction,
    b: &BoundaryPoint,
    cfg: &TypeConfig,
) -> Result<SlopeFit> {
    let sigma = cfg.sigmas();
    let log_abs = log_profile(f, b, &sigma, cfg)?;
    let (window_start, slope, residual) = fit_slope(&sigma, &log_abs, cfg.min_window, cfg.fit_tol)?;
    Ok(SlopeFit {
        b: *b.coords(),
        sigma,
        log_abs,
        window_start,
        slope: slope.max(0.0),
        residual,
    })
}

fn tilt(dim: Dim, b: &Vec3, dir: usize, step: f64) -> Result<BoundaryPoint> {
    let (p, q) = orthonormal_complement(b);
    let axis = if dim == Dim::Two || dir == 0 { p } else { q };
    let (s, c) = step.sin_cos();
    BoundaryPoint::from_vec3(
        dim,
        [
            c * b[0] + s * axis[0],
            c * b[1] + s * axis[1],
            c * b[2] + s * axis[2],
        ],
    )
}

/// Global type `R̂ = max_b R̂_b`: a coarse boundary sample followed by a
/// pattern search about the best direction.
pub fn estimate_type(f: &SampledFunction, cfg: &TypeConfig) -> Result<TypeEstimate> {
    let dim = f.dim();
    if f.analytic().is_some_and(|t| t.is_empty()) {
        return Ok(TypeEstimate {
            fits: Vec::new(),
            best: 0,
            r_hat: 0.0,
        });
    }
    let coarse = BoundaryGrid::uniform(cfg.search)?;
    let mut fits = Vec::new();
    for b in coarse.points() {
        fits.push(estimate_slope(f, b, cfg)?);
    }
    let mut best = argmax(&fits);
    let mut step = match cfg.search {
        BoundarySize::Circle(n) => PI / n as f64,
        BoundarySize::Sphere { theta, .. } => 0.5 * PI / theta as f64,
    };
    let dirs = if dim == Dim::Two { 1 } else { 2 };
    for _ in 0..cfg.refine_steps {
        let centre = fits[best].b;
        let mut moved = false;
        for dir in 0..dirs {
            for sign in [1.0, -1.0] {
                let b = tilt(dim, &centre, dir, sign * step)?;
                let fit = estimate_slope(f, &b, cfg)?;
                if fit.slope > fits[best].slope {
                    fits.push(fit);
                    best = fits.len() - 1;
                    moved = true;
                } else {
                    fits.push(fit);
                }
            }
        }
        if !moved {
            step *= 0.5;
            if step < cfg.min_step {
                break;
            }
        }
    }
    Ok(TypeEstimate {
        r_hat: fits[best].slope,
        best,
        fits,
    })
}

fn argmax(fits: &[SlopeFit]) -> usize {
    let mut best = 0;
    for (k, f) in fits.iter().enumerate() {
        if f.slope > fits[best].slope {
            best = k;
        }
    }
    best
}

impl TypeEstimate {
    /// RFC 4180 CSV with header `b_index,sigma,log_abs`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Config(format!("csv write failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["b_index", "sigma", "log_abs"])
            .map_err(io)?;
        for (j, fit) in self.fits.iter().enumerate() {
            for (s, v) in fit.sigma.iter().zip(&fit.log_abs) {
                w.write_record([j.to_string(), s.to_string(), v.to_string()])
                    .map_err(io)?;
            }
        }
        w.flush()
            .map_err(|e| Error::Config(format!("csv write failed: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub n: u32,
    /// `sup (1 + λ)^N |f̂(λ, b)|` over `[Λ/4, Λ/2]` and `[Λ/2, Λ]`.
    pub window_sups: [f64; 2],
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub b: Vec3,
    pub lambda_max: f64,
    pub rows: Vec<DecayRow>,
}

impl DecayReport {
    pub fn passes_all(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// Smallest `N` whose verdict is fail.
    pub fn first_failure(&self) -> Option<u32> {
        self.rows.iter().find(|r| !r.pass).map(|r| r.n)
    }
}

/// Polynomial decay of `λ ↦ f̂(λ, b)` on `[Λ/4, Λ]`, sampled every
/// `step` in `λ`. Functions with a descriptor are resampled on grids that
/// resolve the kernel up to `Λ`.
pub fn decay_report(
    f: &SampledFunction,
    b: &BoundaryPoint,
    n_max: u32,
    lambda_max: f64,
    step: f64,
) -> Result<DecayReport> {
    let lo = 0.25 * lambda_max;
    let count = ((lambda_max - lo) / step).ceil() as usize + 1;
    let lambdas: Vec<f64> = (0..count)
        .map(|k| lo + (lambda_max - lo) * k as f64 / (count - 1) as f64)
        .collect();
    let mut values = vec![Complex64::new(0.0, 0.0); count];
    let resampled;
    let src = match f.analytic() {
        Some(terms) if !terms.is_empty() => {
            let radius = terms.iter().map(|(_, s)| s.radius()).fold(0.0, f64::max);
            resampled = sample_bumps(
                terms,
                &SamplingGrids::resolving(f.dim(), lambda_max, radius),
            )?;
            &resampled
        }
        _ => f,
    };
    KernelNodes::new(src).sum_many(b.coords(), &lambdas, f.dim().rho(), &mut values);
    let mid = 0.5 * lambda_max;
    let rows = (0..=n_max)
        .map(|n| {
            let mut sups = [0.0f64; 2];
            for (l, v) in lambdas.iter().zip(&values) {
                let w = (1.0 + l).powi(n as i32) * v.norm();
                let k = usize::from(*l > mid);
                sups[k] = sups[k].max(w);
            }
            DecayRow {
                n,
                window_sups: sups,
                pass: sups[1] <= sups[0],
            }
        })
        .collect();
    Ok(DecayReport {
        b: *b.coords(),
        lambda_max,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubCheck {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl SubCheck {
    fn new(name: &str, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tol,
            pass: value.is_finite() && value <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub lambda: f64,
    /// True when `f` is identically zero; every check passes vacuously.
    pub zero: bool,
    pub checks: Vec<SubCheck>,
    pub type_estimate: Option<TypeEstimate>,
    pub decay: Option<DecayReport>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipConfig {
    pub eigen_tol: f64,
    /// Allowed relative excess of `R̂` over the declared support radius.
    pub type_tol: f64,
    pub decay_lambda_max: f64,
    pub decay_step: f64,
    pub decay_n_max: u32,
    pub boundary: BoundarySize,
}

impl MembershipConfig {
    pub fn default_for(dim: Dim) -> Self {
        Self {
            eigen_tol: 1e-4,
            type_tol: 0.05,
            decay_lambda_max: 64.0,
            decay_step: 0.1,
            decay_n_max: 4,
            boundary: BoundarySize::default_for(dim),
        }
    }
}

/// Necessary conditions for `λ ↦ H f(λ)` to lie in the Paley–Wiener image:
/// the output is a `Δ`-eigenfunction, the boundary density has exponential
/// type at most `R_f` and is square integrable, and `f̂` decays faster than
/// any polynomial. Sub-check failures are reported, not raised.
pub fn pw_membership_report(
    f: &SampledFunction,
    lambda: f64,
    x: &Point,
    cfg: &MembershipConfig,
    type_cfg: &TypeConfig,
) -> Result<MembershipReport> {
    if lambda == 0.0 {
        return Err(Error::Pole);
    }
    let dim = f.dim();
    let zero = f.analytic().map_or(f.node_count() == 0, |t| t.is_empty());
    if zero {
        let checks = ["eigenfunction", "exponential-type", "boundary-l2", "decay"]
            .iter()
            .map(|n| SubCheck::new(n, 0.0, 0.0))
            .collect();
        return Ok(MembershipReport {
            lambda,
            zero,
            checks,
            type_estimate: None,
            decay: None,
            pass: true,
        });
    }
    let lam = Complex64::new(lambda, 0.0);
    let eval = JeftEvaluator::for_reach(f, lam, x.radius().max(f.support_radius()))?;
    let eigen = eigen_equation_residual(&eval, x)?;
    let mut checks = vec![SubCheck::new(
        "eigenfunction",
        eigen.residual,
        cfg.eigen_tol,
    )];

    let rf = f.support_radius();
    let (type_check, type_estimate) = match estimate_type(f, type_cfg) {
        Ok(t) => (
            SubCheck::new("exponential-type", t.r_hat / rf - 1.0, cfg.type_tol),
            Some(t),
        ),
        Err(_) => (
            SubCheck::new("exponential-type", f64::NAN, cfg.type_tol),
            None,
        ),
    };
    checks.push(type_check);

    let grid = BoundaryGrid::uniform(cfg.boundary)?;
    let l2 = grid
        .integrate_fn(|b| {
            Complex64::new(
                helgason_forward(f, lam, b).map_or(f64::NAN, |v| v.norm_sqr()),
                0.0,
            )
        })
        .re;
    let mut l2_check = SubCheck::new("boundary-l2", l2, f64::INFINITY);
    l2_check.pass = l2.is_finite();
    checks.push(l2_check);

    let b = type_estimate
        .as_ref()
        .map(|t| BoundaryPoint::from_vec3(dim, t.fits[t.best].b))
        .transpose()?
        .unwrap_or_else(|| BoundaryPoint::e1(dim));
    let decay = decay_report(f, &b, cfg.decay_n_max, cfg.decay_lambda_max, cfg.decay_step)?;
    let failed = decay.rows.iter().filter(|r| !r.pass).count();
    checks.push(SubCheck::new("decay", failed as f64, 0.0));

    let pass = checks.iter().all(|c| c.pass);
    Ok(MembershipReport {
        lambda,
        zero,
        checks,
        type_estimate,
        decay: Some(decay),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Isometry;
    use crate::sampling::{sample_bump, BumpSpec, Profile};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bump(dim: Dim, radius: f64, shift: f64, profile: Profile) -> SampledFunction {
        let b = BoundaryPoint::e1(dim);
        let g = Isometry::translation_by(shift, &b).unwrap();
        let spec = BumpSpec::new(radius, g, 0.0, b, profile).unwrap();
        sample_bump(&spec, &SamplingGrids::default_for(dim)).unwrap()
    }

    fn modulated(dim: Dim) -> SampledFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spec = crate::transforms::tests::modulated(dim, &mut rng);
        sample_bump(&spec, &SamplingGrids::default_for(dim)).unwrap()
    }

    #[test]
    fn least_squares_recovers_exact_model() {
        let sigma: Vec<f64> = (0..12).map(|k| 1.0 + 3.0 * k as f64).collect();
        let want = [0.3, 1.7, -0.8, 0.25, 0.4];
        let rows: Vec<Vec<f64>> = sigma.iter().map(|s| basis(*s)).collect();
        let y: Vec<f64> = rows
            .iter()
            .map(|r| r.iter().zip(&want).map(|(a, c)| a * c).sum())
            .collect();
        let (got, rms) = least_squares(&rows, &y).unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-9, "{got:?}");
        }
        assert!(rms < 1e-12);
    }

    #[test]
    fn complex_transform_guard_and_real_axis() {
        let dim = Dim::Two;
        let f = bump(dim, 2.0, 0.0, Profile::Smooth);
        let b = BoundaryPoint::e1(dim);
        let lam = Complex64::new(1.3, 0.0);
        assert_eq!(
            complex_transform(&f, lam, &b).unwrap(),
            helgason_forward(&f, lam, &b).unwrap()
        );
        assert!(matches!(
            complex_transform(&f, Complex64::new(0.0, 20.5), &b),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn conjugation_symmetry_for_real_f() {
        for dim in [Dim::Two, Dim::Three] {
            let f = modulated(dim);
            let b = BoundaryPoint::e1(dim);
            let lam = Complex64::new(1.7, 0.6);
            let a = complex_transform(&f, -lam.conj(), &b).unwrap();
            let c = complex_transform(&f, lam, &b).unwrap().conj();
            assert!((a - c).norm() < 1e-10 * (1.0 + c.norm()));
        }
    }

    #[test]
    fn mean_value_on_small_circles() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for dim in [Dim::Two, Dim::Three] {
            let f = modulated(dim);
            let b = BoundaryPoint::e1(dim);
            for _ in 0..10 {
                let c = Complex64::new(rng.gen_range(-6.0..6.0), rng.gen_range(-2.0..2.0));
                let r = holomorphy_residual(&f, c, &b, 0.1, 32).unwrap();
                assert!(r < 1e-8, "{dim:?} {c} {r:e}");
            }
        }
    }

    #[test]
    fn type_of_centered_and_shifted_bumps_in_h2() {
        let dim = Dim::Two;
        let cfg = TypeConfig::default_for(dim);
        let centered = estimate_type(&bump(dim, 2.0, 0.0, Profile::Smooth), &cfg).unwrap();
        assert!((1.9..=2.1).contains(&centered.r_hat), "{}", centered.r_hat);
        let shifted = estimate_type(&bump(dim, 1.0, 1.0, Profile::Smooth), &cfg).unwrap();
        assert!((1.9..=2.1).contains(&shifted.r_hat), "{}", shifted.r_hat);
        let small = estimate_type(&bump(dim, 1.0, 0.0, Profile::Smooth), &cfg).unwrap();
        assert!(small.r_hat < centered.r_hat);
    }

    #[test]
    fn type_is_scale_invariant() {
        let dim = Dim::Two;
        let cfg = TypeConfig::default_for(dim);
        let f = bump(dim, 1.5, 0.5, Profile::Smooth);
        let a = estimate_type(&f, &cfg).unwrap().r_hat;
        let b = estimate_type(&f.scale(Complex64::new(10.0, 0.0)), &cfg)
            .unwrap()
            .r_hat;
        assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn type_csv_rows() {
        let dim = Dim::Two;
        let mut cfg = TypeConfig::default_for(dim);
        cfg.refine_steps = 0;
        let t = estimate_type(&bump(dim, 1.0, 0.0, Profile::Smooth), &cfg).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("b_index,sigma,log_abs"));
        assert_eq!(text.lines().count(), 1 + 12 * 16);
    }

    #[test]
    fn smooth_bump_decays_and_indicator_does_not() {
        let dim = Dim::Two;
        let b = BoundaryPoint::e1(dim);
        let smooth = decay_report(&bump(dim, 1.0, 0.0, Profile::Smooth), &b, 4, 64.0, 0.1).unwrap();
        assert!(smooth.passes_all(), "{smooth:?}");
        let rough =
            decay_report(&bump(dim, 1.0, 0.0, Profile::Indicator), &b, 4, 64.0, 0.1).unwrap();
        assert!(rough.first_failure().is_some_and(|n| n <= 4));
        let zero = decay_report(&SampledFunction::zero(dim), &b, 4, 64.0, 0.1).unwrap();
        assert!(zero.passes_all());
    }

    #[test]
    fn membership_of_centered_bump_in_h3() {
        let dim = Dim::Three;
        let f = bump(dim, 1.0, 0.0, Profile::Smooth);
        let x = Point::new(dim, &[0.2, 0.1, -0.15]).unwrap();
        let rep = pw_membership_report(
            &f,
            1.0,
            &x,
            &MembershipConfig::default_for(dim),
            &TypeConfig::default_for(dim),
        )
        .unwrap();
        assert!(rep.pass, "{:?}", rep.checks);
    }

    #[test]
    fn membership_of_rough_profile_fails_partially() {
        let dim = Dim::Two;
        let f = bump(dim, 1.0, 0.0, Profile::Indicator);
        let x = Point::new(dim, &[0.3, 0.1]).unwrap();
        let rep = pw_membership_report(
            &f,
            1.0,
            &x,
            &MembershipConfig::default_for(dim),
            &TypeConfig::default_for(dim),
        )
        .unwrap();
        assert!(!rep.pass);
        assert!(rep.checks[0].pass, "{:?}", rep.checks);
        assert!(!rep.checks[3].pass);
    }

    #[test]
    fn membership_of_zero_is_vacuous() {
        let dim = Dim::Two;
        let rep = pw_membership_report(
            &SampledFunction::zero(dim),
            1.0,
            &Point::origin(dim),
            &MembershipConfig::default_for(dim),
            &TypeConfig::default_for(dim),
        )
        .unwrap();
        assert!(rep.pass && rep.zero);
        assert!(rep.checks.iter().all(|c| c.value == 0.0));
    }
}
