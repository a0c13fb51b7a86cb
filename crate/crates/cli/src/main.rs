use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};
use jeft_core::scenario::{is_scenario, run_scenario, ScenarioConfig, KEYS, SCENARIOS};
use jeft_core::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "jeft",
    version,
    about = "Transform verification scenarios on hyperbolic space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List scenarios and config keys.
    List,
    /// Run a scenario and write results.json, timings.json and CSVs.
    ///
    /// Exit status is 0 when every check passes, 1 when a check fails and
    /// 2 on a configuration or usage error. Flags override the config file.
    Run(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// Scenario name (see `jeft list`).
    scenario: String,
    /// Flat `key = value` config file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// 2, 3 or both [default: both]
    #[arg(long)]
    dim: Option<String>,
    /// RNG seed for randomized sweeps [default: 1]
    #[arg(long)]
    seed: Option<String>,
    /// Output directory [default: jeft-out]
    #[arg(long, value_name = "DIR")]
    out: Option<String>,
    /// Randomized cases per dimension [default: per scenario]
    #[arg(long)]
    samples: Option<String>,
    /// Radial Gauss-Legendre nodes per patch [default: 48]
    #[arg(long)]
    radial_nodes: Option<String>,
    /// Patch angular nodes: circle size, or sphere theta nodes [default: 80 / 20]
    #[arg(long)]
    angular_nodes: Option<String>,
    /// Radial validity cap [default: 16]
    #[arg(long)]
    r_max: Option<String>,
    /// Boundary grid size: circle size, or sphere theta nodes [default: per scenario]
    #[arg(long)]
    boundary_nodes: Option<String>,
    /// Spectral Gauss-Legendre nodes [default: per scenario]
    #[arg(long)]
    spectral_nodes: Option<String>,
    /// Spectral cutoff [default: per scenario]
    #[arg(long)]
    lambda_max: Option<String>,
    /// Test functions `radius,shift[,alpha[,smooth|indicator]]` separated by `;`
    #[arg(long)]
    bumps: Option<String>,
    /// Record per-check seconds in results.json
    #[arg(long)]
    timings: bool,
    /// Tolerance override, repeatable
    #[arg(long = "tol", value_name = "CHECK=VALUE")]
    tol: Vec<String>,
}

impl RunArgs {
    fn config(&self) -> Result<ScenarioConfig, Error> {
        let mut cfg = ScenarioConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_text(&text)
                .map_err(|e| Error::Config(format!("{}: {}", path.display(), strip(&e))))?;
        }
        let flags = [
            ("dim", &self.dim),
            ("seed", &self.seed),
            ("out", &self.out),
            ("samples", &self.samples),
            ("radial-nodes", &self.radial_nodes),
            ("angular-nodes", &self.angular_nodes),
            ("r-max", &self.r_max),
            ("boundary-nodes", &self.boundary_nodes),
            ("spectral-nodes", &self.spectral_nodes),
            ("lambda-max", &self.lambda_max),
            ("bumps", &self.bumps),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if self.timings {
            cfg.set("timings", "true")?;
        }
        for t in &self.tol {
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--tol: expected CHECK=VALUE, got '{t}'")))?;
            cfg.set(&format!("tol.{}", k.trim()), v)?;
        }
        Ok(cfg)
    }
}

fn strip(e: &Error) -> String {
    match e {
        Error::Config(msg) => msg.clone(),
        other => other.to_string(),
    }
}

fn list() {
    println!("scenarios:");
    for (name, about) in SCENARIOS {
        println!("  {name:<20} {about}");
    }
    println!("\nconfig keys (file `key = value`, or --key flags):");
    for (key, about) in KEYS {
        println!("  {key:<16} {about}");
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}\n");
    eprintln!("{}", Cli::command().render_usage());
    ExitCode::from(EXIT_USAGE)
}

fn run(args: &RunArgs) -> ExitCode {
    if !is_scenario(&args.scenario) {
        let names: Vec<&str> = SCENARIOS.iter().map(|(n, _)| *n).collect();
        return usage_error(&format!(
            "unknown scenario '{}' (expected one of: {})",
            args.scenario,
            names.join(", ")
        ));
    }
    let cfg = match args.config() {
        Ok(c) => c,
        Err(e) => return usage_error(&strip(&e)),
    };
    let output = match run_scenario(&args.scenario, &cfg) {
        Ok(o) => o,
        Err(e) => return usage_error(&strip(&e)),
    };
    if let Err(e) = output.write(&cfg.out) {
        eprintln!("error: {}", strip(&e));
        return ExitCode::from(EXIT_USAGE);
    }

    let report = &output.report;
    for c in &report.checks {
        let status = if c.pass { "pass" } else { "FAIL" };
        let tol = if c.tol.is_finite() {
            format!("{:.3e}", c.tol)
        } else {
            "-".into()
        };
        println!("{status}  {:<32} {:>11.4e}  tol {tol}", c.name, c.value);
        if let Some(d) = &c.detail {
            if !c.pass {
                println!("      {d}");
            }
        }
    }
    let s = &report.summary;
    println!(
        "{}: {}/{} checks passed, results in {}",
        report.scenario,
        s.passed,
        s.total,
        cfg.out.display()
    );
    if s.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match &cli.command {
        Command::List => {
            list();
            ExitCode::SUCCESS
        }
        Command::Run(args) => run(args),
    }
}
