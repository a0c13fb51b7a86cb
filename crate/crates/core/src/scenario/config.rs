use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryPoint, Dim, Isometry};
use crate::quadrature::BoundarySize;
use crate::sampling::{BumpSpec, Profile, SamplingGrids};

/// One entry of the `bumps` key: `radius,shift[,alpha[,profile]]`. The centre
/// is moved `shift` along the first axis; the modulation axis is the second.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BumpConfig {
    pub radius: f64,
    pub shift: f64,
    pub alpha: f64,
    pub profile: Profile,
}

impl BumpConfig {
    pub fn to_spec(&self, dim: Dim) -> Result<BumpSpec> {
        let g = Isometry::translation_by(self.shift, &BoundaryPoint::e1(dim))?;
        let axis = BoundaryPoint::new(dim, &[0.0, 1.0, 0.0][..dim.as_usize()])?;
        BumpSpec::new(self.radius, g, self.alpha, axis, self.profile)
    }

    fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bumps: malformed entry '{text}'"));
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() < 2 || parts.len() > 4 {
            return Err(bad());
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
        let radius = num(parts[0])?;
        let shift = num(parts[1])?;
        let alpha = parts.get(2).map_or(Ok(0.0), |s| num(s))?;
        let profile = match parts.get(3).copied() {
            None | Some("smooth") => Profile::Smooth,
            Some("indicator") => Profile::Indicator,
            Some(_) => return Err(bad()),
        };
        if !(radius > 0.0) || shift < 0.0 || alpha.abs() > 1.0 {
            return Err(bad());
        }
        Ok(Self {
            radius,
            shift,
            alpha,
            profile,
        })
    }
}

/// Scenario settings. Unset grid and spectral fields fall back to each
/// scenario's own defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Dimensions to run; both unless `dim` is given.
    pub dims: Vec<Dim>,
    pub seed: u64,
    pub out: PathBuf,
    pub samples: Option<usize>,
    pub radial_nodes: Option<usize>,
    pub angular_nodes: Option<usize>,
    pub r_max: f64,
    pub boundary_nodes: Option<usize>,
    pub spectral_nodes: Option<usize>,
    pub lambda_max: Option<f64>,
    pub bumps: Option<Vec<BumpConfig>>,
    pub tolerances: BTreeMap<String, f64>,
    /// Record wall-clock seconds in results.json (breaks byte-identity).
    pub timings: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            dims: vec![Dim::Two, Dim::Three],
            seed: 1,
            out: PathBuf::from("jeft-out"),
            samples: None,
            radial_nodes: None,
            angular_nodes: None,
            r_max: 16.0,
            boundary_nodes: None,
            spectral_nodes: None,
            lambda_max: None,
            bumps: None,
            tolerances: BTreeMap::new(),
            timings: false,
        }
    }
}

/// Keys accepted in config files, with their documentation.
pub const KEYS: &[(&str, &str)] = &[
    ("dim", "2, 3 or both (default both)"),
    ("seed", "RNG seed for randomized sweeps (default 1)"),
    ("out", "output directory (default jeft-out)"),
    (
        "samples",
        "randomized cases per dimension (scenario default)",
    ),
    (
        "radial-nodes",
        "radial Gauss-Legendre nodes per patch (default 48)",
    ),
    (
        "angular-nodes",
        "patch angular nodes: circle size, or sphere theta nodes with phi = 2 theta",
    ),
    (
        "r-max",
        "radial validity cap; bumps need support + 4 <= r-max (default 16)",
    ),
    (
        "boundary-nodes",
        "boundary grid: circle size, or sphere theta nodes with phi = 2 theta",
    ),
    ("spectral-nodes", "Gauss-Legendre nodes on (0, lambda-max]"),
    ("lambda-max", "spectral cutoff"),
    (
        "bumps",
        "test functions 'radius,shift[,alpha[,smooth|indicator]]' separated by ';'",
    ),
    (
        "timings",
        "true to record per-check seconds in results.json",
    ),
    ("tol.<check>", "tolerance override for a check"),
];

fn positive<T: std::str::FromStr + PartialOrd + Default>(key: &str, value: &str) -> Result<T> {
    match value.trim().parse::<T>() {
        Ok(v) if v > T::default() => Ok(v),
        _ => Err(Error::Config(format!(
            "{key}: expected a positive number, got '{value}'"
        ))),
    }
}

fn size_of(dim: Dim, n: usize) -> BoundarySize {
    match dim {
        Dim::Two => BoundarySize::Circle(n),
        Dim::Three => BoundarySize::Sphere {
            theta: n,
            phi: 2 * n,
        },
    }
}

impl ScenarioConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        let value = value.trim();
        match key {
            "dim" => {
                self.dims = match value {
                    "2" => vec![Dim::Two],
                    "3" => vec![Dim::Three],
                    "both" => vec![Dim::Two, Dim::Three],
                    _ => {
                        return Err(Error::Config(format!(
                            "dim: expected 2, 3 or both, got '{value}'"
                        )))
                    }
                }
            }
            "seed" => {
                self.seed = value.parse().map_err(|_| {
                    Error::Config(format!("seed: expected an integer, got '{value}'"))
                })?
            }
            "out" => {
                if value.is_empty() {
                    return Err(Error::Config("out: empty path".into()));
                }
                self.out = PathBuf::from(value)
            }
            "samples" => self.samples = Some(positive(key, value)?),
            "radial-nodes" => self.radial_nodes = Some(positive(key, value)?),
            "angular-nodes" => self.angular_nodes = Some(positive(key, value)?),
            "r-max" => self.r_max = positive(key, value)?,
            "boundary-nodes" => self.boundary_nodes = Some(positive(key, value)?),
            "spectral-nodes" => self.spectral_nodes = Some(positive(key, value)?),
            "lambda-max" => self.lambda_max = Some(positive(key, value)?),
            "bumps" => {
                let list = value
                    .split(';')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(BumpConfig::parse)
                    .collect::<Result<Vec<_>>>()?;
                if list.is_empty() {
                    return Err(Error::Config("bumps: empty list".into()));
                }
                self.bumps = Some(list)
            }
            "timings" => {
                self.timings = value.parse().map_err(|_| {
                    Error::Config(format!("timings: expected true or false, got '{value}'"))
                })?
            }
            _ => match key.strip_prefix("tol.") {
                Some(name) if !name.is_empty() => {
                    let v: f64 =
                        value
                            .parse()
                            .ok()
                            .filter(|v: &f64| *v >= 0.0)
                            .ok_or_else(|| {
                                Error::Config(format!(
                                    "{key}: expected a non-negative number, got '{value}'"
                                ))
                            })?;
                    self.tolerances.insert(name.to_string(), v);
                }
                _ => return Err(Error::Config(format!("unknown key '{key}'"))),
            },
        }
        Ok(())
    }

    /// Apply a flat `key = value` file. Blank lines and `#` comments are
    /// skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// Sampling grids for `dim`, with overrides applied to `base`.
    pub fn grids(&self, base: SamplingGrids) -> SamplingGrids {
        let mut g = base;
        if let Some(n) = self.radial_nodes {
            g.radial_nodes = n;
        }
        if let Some(n) = self.angular_nodes {
            g.angular = size_of(g.dim(), n);
        }
        g.r_max = self.r_max;
        g
    }

    pub fn boundary(&self, dim: Dim, default: BoundarySize) -> BoundarySize {
        self.boundary_nodes.map_or(default, |n| size_of(dim, n))
    }

    /// Settings in file syntax, for results.json.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let dims = match self.dims.as_slice() {
            [d] => d.as_usize().to_string(),
            _ => "both".into(),
        };
        m.insert("dim".into(), dims);
        m.insert("seed".into(), self.seed.to_string());
        m.insert("out".into(), self.out.display().to_string());
        m.insert("r-max".into(), self.r_max.to_string());
        m.insert("timings".into(), self.timings.to_string());
        let opt = |v: Option<String>| v.unwrap_or_else(|| "default".into());
        m.insert("samples".into(), opt(self.samples.map(|v| v.to_string())));
        m.insert(
            "radial-nodes".into(),
            opt(self.radial_nodes.map(|v| v.to_string())),
        );
        m.insert(
            "angular-nodes".into(),
            opt(self.angular_nodes.map(|v| v.to_string())),
        );
        m.insert(
            "boundary-nodes".into(),
            opt(self.boundary_nodes.map(|v| v.to_string())),
        );
        m.insert(
            "spectral-nodes".into(),
            opt(self.spectral_nodes.map(|v| v.to_string())),
        );
        m.insert(
            "lambda-max".into(),
            opt(self.lambda_max.map(|v| v.to_string())),
        );
        m.insert(
            "bumps".into(),
            opt(self.bumps.as_ref().map(|list| {
                list.iter()
                    .map(|b| {
                        let p = match b.profile {
                            Profile::Smooth => "smooth",
                            Profile::Indicator => "indicator",
                        };
                        format!("{},{},{},{p}", b.radius, b.shift, b.alpha)
                    })
                    .collect::<Vec<_>>()
                    .join(";")
            })),
        );
        for (k, v) in &self.tolerances {
            m.insert(format!("tol.{k}"), v.to_string());
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(
            ScenarioConfig::from_text("").unwrap(),
            ScenarioConfig::default()
        );
        assert_eq!(
            ScenarioConfig::from_text("# nothing\n\n").unwrap(),
            ScenarioConfig::default()
        );
    }

    #[test]
    fn later_settings_override_earlier_ones() {
        let mut cfg = ScenarioConfig::from_text("dim = 2\nseed = 7").unwrap();
        assert_eq!(cfg.dims, vec![Dim::Two]);
        cfg.set("dim", "3").unwrap();
        assert_eq!(cfg.dims, vec![Dim::Three]);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn errors_name_the_key() {
        let err = ScenarioConfig::from_text("radial-nodes = 0").unwrap_err();
        assert!(err.to_string().contains("radial-nodes"), "{err}");
        let err = ScenarioConfig::from_text("colour = blue").unwrap_err();
        assert!(err.to_string().contains("colour"), "{err}");
        let err = ScenarioConfig::from_text("lambda-max = abc").unwrap_err();
        assert!(err.to_string().contains("lambda-max"), "{err}");
        assert!(ScenarioConfig::from_text("just words").is_err());
    }

    #[test]
    fn bump_lists_and_tolerances() {
        let cfg =
            ScenarioConfig::from_text("bumps = 1,0 ; 2,0.5,0.3,indicator\ntol.rel-error-d3 = 1e-4")
                .unwrap();
        let bumps = cfg.bumps.unwrap();
        assert_eq!(bumps.len(), 2);
        assert_eq!(bumps[1].profile, Profile::Indicator);
        assert_eq!(cfg.tolerances["rel-error-d3"], 1e-4);
        assert!(ScenarioConfig::from_text("bumps = 1").is_err());
        assert!(ScenarioConfig::from_text("bumps = 1,0,2").is_err());
    }

    #[test]
    fn bump_config_builds_specs() {
        let b = BumpConfig {
            radius: 1.0,
            shift: 0.5,
            alpha: 0.2,
            profile: Profile::Smooth,
        };
        for dim in [Dim::Two, Dim::Three] {
            let s = b.to_spec(dim).unwrap();
            assert!((s.support_radius() - 1.5).abs() < 1e-12);
        }
    }
}
