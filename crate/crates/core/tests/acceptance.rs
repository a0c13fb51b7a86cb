//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs every scenario at its defaults in both dimensions, then the geometry
//! sweeps and the reproducibility checks. Exits non-zero if any criterion
//! fails.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use jeft_core::geometry::{busemann, dist, random_direction, random_point, Dim, Isometry};
use jeft_core::quadrature::{BoundaryGrid, BoundarySize};
use jeft_core::sampling::{sample_bump, BumpSpec, Profile, SamplingGrids};
use jeft_core::scenario::{run_scenario, ScenarioConfig, ScenarioOutput};
use jeft_core::transforms::helgason_forward;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Line {
    pass: bool,
    text: String,
}

struct Run {
    output: Result<ScenarioOutput, String>,
    seconds: f64,
}

fn run(name: &str, cfg: &ScenarioConfig) -> Run {
    let t = Instant::now();
    let output = run_scenario(name, cfg).map_err(|e| e.to_string());
    Run {
        output,
        seconds: t.elapsed().as_secs_f64(),
    }
}

/// Verdict from every check of a scenario, plus an optional runtime limit.
fn scenario_line(run: &Run, limit: Option<f64>) -> Line {
    let out = match &run.output {
        Ok(o) => o,
        Err(e) => {
            return Line {
                pass: false,
                text: format!("error: {e}"),
            }
        }
    };
    let checks = &out.report.checks;
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    let mut parts = Vec::new();
    for c in checks.iter().filter(|c| c.tol > 0.0 && c.tol.is_finite()) {
        parts.push(format!("{}={:.2e}/{:.0e}", c.name, c.value, c.tol));
    }
    let mut pass = failed.is_empty() && !checks.is_empty();
    let mut timing = format!("{:.1} s", run.seconds);
    if let Some(limit) = limit {
        pass &= run.seconds <= limit;
        timing = format!("{timing} (limit {limit:.0} s)");
    }
    let mut text = format!(
        "{}/{} checks, {}",
        checks.len() - failed.len(),
        checks.len(),
        timing
    );
    if !failed.is_empty() {
        text.push_str(&format!(", failed: {}", failed.join(" ")));
    }
    if !parts.is_empty() {
        text.push_str(&format!("; {}", parts.join(" ")));
    }
    Line { pass, text }
}

fn geometry_line() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut cocycle, mut invariance, mut inverse) = (0.0f64, 0.0f64, 0.0f64);
    let cases = 1000;
    for dim in [Dim::Two, Dim::Three] {
        for _ in 0..cases {
            let g = Isometry::random(dim, 3.0, &mut rng);
            let x = random_point(dim, 3.0, &mut rng);
            let y = random_point(dim, 3.0, &mut rng);
            let b = random_direction(dim, &mut rng);
            let (gx, gy) = (g.apply(&x).unwrap(), g.apply(&y).unwrap());
            let gb = g.apply_boundary(&b).unwrap();
            let lhs = busemann(&gx, &gb).unwrap();
            let rhs = busemann(&x, &b).unwrap() + busemann(&g.origin_image(), &gb).unwrap();
            cocycle = cocycle.max((lhs - rhs).abs());
            let d = dist(&x, &y).unwrap();
            invariance = invariance.max((dist(&gx, &gy).unwrap() - d).abs() / d.max(1.0));
            let back = g.inverse().apply(&gx).unwrap();
            inverse = inverse.max(dist(&back, &x).unwrap());
        }
    }
    let doubling = grid_doubling(&mut rng);
    let worst = cocycle.max(invariance).max(inverse);
    Line {
        pass: worst <= 1e-10 && doubling <= 1e-9,
        text: format!(
            "{} cases per dimension: cocycle {cocycle:.1e}, distance invariance {invariance:.1e}, \
             inverse {inverse:.1e} (tol 1e-10); grid doubling {doubling:.1e} (tol 1e-9)",
            cases
        ),
    }
}

/// Relative change of the Helgason transform and of boundary Poisson
/// integrals when every grid is doubled.
fn grid_doubling(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0f64;
    for dim in [Dim::Two, Dim::Three] {
        let grids = SamplingGrids::default_for(dim);
        let fine = grids.refined(2);
        for shift in [0.0, 0.5] {
            let center = Isometry::translation_by(shift, &random_direction(dim, rng)).unwrap();
            let spec = BumpSpec::new(
                1.0,
                center,
                0.5,
                random_direction(dim, rng),
                Profile::Smooth,
            )
            .unwrap();
            let coarse_f = sample_bump(&spec, &grids).unwrap();
            let fine_f = sample_bump(&spec, &fine).unwrap();
            for lambda in [0.5, 2.0, 5.0] {
                let lam = Complex64::new(lambda, 0.0);
                let b = random_direction(dim, rng);
                let a = helgason_forward(&coarse_f, lam, &b).unwrap();
                let c = helgason_forward(&fine_f, lam, &b).unwrap();
                worst = worst.max((a - c).norm() / c.norm());
            }
        }
        let size = BoundarySize::default_for(dim);
        let coarse = BoundaryGrid::uniform(size).unwrap();
        let fine = BoundaryGrid::uniform(size.scaled(2)).unwrap();
        for _ in 0..5 {
            let x = random_point(dim, 1.0, rng);
            let lam = Complex64::new(rng.gen_range(0.5..5.0), 0.0);
            let kernel =
                |b: &_| ((Complex64::i() * lam + dim.rho()) * busemann(&x, b).unwrap()).exp();
            let a = coarse.integrate_fn(kernel);
            let c = fine.integrate_fn(kernel);
            worst = worst.max((a - c).norm() / c.norm());
        }
    }
    worst
}

fn output_bytes(out: &ScenarioOutput, dir: &PathBuf) -> Vec<(String, Vec<u8>)> {
    fs::remove_dir_all(dir).ok();
    out.write(dir).unwrap();
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "timings.json")
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn reproducibility_line(first: &[(&str, &Run)], cfg: &ScenarioConfig, suite_seconds: f64) -> Line {
    let dir = std::env::temp_dir().join(format!("jeft-acceptance-{}", std::process::id()));
    let mut identical = true;
    let mut compared = Vec::new();
    for (name, earlier) in first {
        let Ok(a) = &earlier.output else {
            identical = false;
            continue;
        };
        let again = run(name, cfg);
        let Ok(b) = &again.output else {
            identical = false;
            continue;
        };
        let same = output_bytes(a, &dir) == output_bytes(b, &dir);
        identical &= same;
        compared.push(format!(
            "{name}={}",
            if same { "identical" } else { "DIFFERENT" }
        ));
    }
    fs::remove_dir_all(&dir).ok();
    let limit = 600.0;
    Line {
        pass: identical && suite_seconds <= limit,
        text: format!(
            "reruns {}; full default suite {suite_seconds:.1} s (limit {limit:.0} s)",
            compared.join(" ")
        ),
    }
}

fn main() -> ExitCode {
    let cfg = ScenarioConfig::default();
    let names = [
        "calibrate",
        "c-table",
        "jeft-equivalence",
        "inversion",
        "plancherel",
        "kaverage-bridge",
        "functional-equation",
        "eigen",
        "asymptotic",
        "pw-recovery",
    ];
    let mut runs = Vec::new();
    for name in names {
        let r = run(name, &cfg);
        eprintln!("  ran {name} in {:.1} s", r.seconds);
        runs.push((name, r));
    }
    let suite_seconds: f64 = runs.iter().map(|(_, r)| r.seconds).sum();
    let get = |n: &str| &runs.iter().find(|(name, _)| *name == n).unwrap().1;

    let mut lines = vec![
        (
            "factorization",
            scenario_line(get("jeft-equivalence"), Some(60.0)),
        ),
        ("inversion", scenario_line(get("inversion"), Some(120.0))),
        ("plancherel", {
            let mut l = scenario_line(get("plancherel"), None);
            let cal = scenario_line(get("calibrate"), None);
            l.pass &= cal.pass;
            l.text = format!("{}; calibration {}", l.text, cal.text);
            l
        }),
        (
            "k-average bridge",
            scenario_line(get("kaverage-bridge"), None),
        ),
        (
            "functional equation",
            scenario_line(get("functional-equation"), None),
        ),
        ("eigen-equation", scenario_line(get("eigen"), None)),
        ("asymptotics", scenario_line(get("asymptotic"), None)),
        ("paley-wiener", scenario_line(get("pw-recovery"), None)),
        ("c-function coherence", scenario_line(get("c-table"), None)),
        ("geometry substrate", geometry_line()),
    ];
    let reruns: Vec<(&str, &Run)> = ["c-table", "inversion", "eigen"]
        .iter()
        .map(|n| (*n, get(n)))
        .collect();
    lines.push((
        "reproducibility",
        reproducibility_line(&reruns, &cfg, suite_seconds),
    ));

    let mut failures = 0;
    for (i, (name, line)) in lines.iter().enumerate() {
        let verdict = if line.pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] {:>2} {name}: {}", i + 1, line.text);
        failures += usize::from(!line.pass);
    }
    println!(
        "acceptance: {}/{} criteria passed",
        lines.len() - failures,
        lines.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
