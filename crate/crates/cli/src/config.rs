//! Run configuration and its flat `key = value` text form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use hyd2d_core::eigen::Target;
use hyd2d_core::params::PROTON_MASS;
use hyd2d_core::MassMode;

use crate::error::CliError;

/// Mass model as written in configs and on the command line:
/// `infinite`, `finite` or `finite:<m_p>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MassSpec {
    Infinite,
    Finite(f64),
}

impl MassSpec {
    pub fn mode(self) -> MassMode {
        match self {
            MassSpec::Infinite => MassMode::InfiniteProton,
            MassSpec::Finite(m) => MassMode::FiniteProton(m),
        }
    }
}

impl fmt::Display for MassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MassSpec::Infinite => f.write_str("infinite"),
            MassSpec::Finite(m) => write!(f, "finite:{m}"),
        }
    }
}

impl FromStr for MassSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "infinite" => Ok(MassSpec::Infinite),
            "finite" => Ok(MassSpec::Finite(PROTON_MASS)),
            other => {
                let value = other.strip_prefix("finite:").ok_or_else(|| {
                    format!("unknown mass model '{other}' (infinite, finite, finite:<m_p>)")
                })?;
                let m: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad proton mass '{value}'"))?;
                if !(m > 0.0) || !m.is_finite() {
                    return Err(format!("proton mass must be positive, got {m}"));
                }
                Ok(MassSpec::Finite(m))
            }
        }
    }
}

/// State selector: `ground`, `near:<E>`, `level:<n>,<l>` or
/// `level:<n>,<l>@<shift>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetSpec {
    Ground,
    Near(f64),
    Level { n: u32, l: i32, shift: Option<f64> },
}

impl TargetSpec {
    pub fn target(self) -> Target {
        match self {
            TargetSpec::Ground => Target::GroundState,
            TargetSpec::Near(e) => Target::NearEnergy(e),
            TargetSpec::Level { n, l, shift } => Target::Level { n, l, shift },
        }
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSpec::Ground => f.write_str("ground"),
            TargetSpec::Near(e) => write!(f, "near:{e}"),
            TargetSpec::Level { n, l, shift: None } => write!(f, "level:{n},{l}"),
            TargetSpec::Level {
                n,
                l,
                shift: Some(s),
            } => write!(f, "level:{n},{l}@{s}"),
        }
    }
}

impl FromStr for TargetSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "ground" {
            return Ok(TargetSpec::Ground);
        }
        if let Some(e) = s.strip_prefix("near:") {
            return e
                .trim()
                .parse()
                .map(TargetSpec::Near)
                .map_err(|_| format!("bad energy in '{s}'"));
        }
        let body = s.strip_prefix("level:").ok_or_else(|| {
            format!("unknown target '{s}' (ground, near:<E>, level:<n>,<l>[@<shift>])")
        })?;
        let (levels, shift) = match body.split_once('@') {
            Some((a, b)) => (
                a,
                Some(
                    b.trim()
                        .parse::<f64>()
                        .map_err(|_| format!("bad shift in '{s}'"))?,
                ),
            ),
            None => (body, None),
        };
        let (n, l) = levels
            .split_once(',')
            .ok_or_else(|| format!("expected level:<n>,<l> in '{s}'"))?;
        let n = n.trim().parse().map_err(|_| format!("bad n in '{s}'"))?;
        let l = l.trim().parse().map_err(|_| format!("bad l in '{s}'"))?;
        Ok(TargetSpec::Level { n, l, shift })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    JsonLines,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::JsonLines => "json-lines",
        })
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json-lines" => Ok(Format::JsonLines),
            other => Err(format!("unknown format '{other}' (csv, json-lines)")),
        }
    }
}

/// Everything a command needs. Numerics left unset fall back to the
/// resolution ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Field magnitudes in atomic units; `solve` and `export` use the first.
    pub b: Vec<f64>,
    pub alpha_degrees: Vec<f64>,
    pub mass: MassSpec,
    pub n: Option<usize>,
    pub rho_n: Option<f64>,
    pub m: Option<usize>,
    /// Energy agreement required between ladder rungs.
    pub tol: Option<f64>,
    pub target: TargetSpec,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Half side of exported grids.
    pub extent: Option<f64>,
    /// Points per side of exported grids.
    pub resolution: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            b: vec![0.0],
            alpha_degrees: vec![0.0],
            mass: MassSpec::Infinite,
            n: None,
            rho_n: None,
            m: None,
            tol: None,
            target: TargetSpec::Ground,
            jobs: None,
            out: None,
            format: Format::Csv,
            extent: None,
            resolution: 201,
        }
    }
}

fn list<T: FromStr>(value: &str) -> Result<Vec<T>, String> {
    value
        .split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| format!("bad list entry '{}'", v.trim()))
        })
        .collect()
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn scalar<T: FromStr>(value: &str) -> Result<T, String> {
    value
        .trim()
        .parse()
        .map_err(|_| format!("bad value '{}'", value.trim()))
}

impl RunConfig {
    /// Reads `key = value` lines; `#` starts a comment. Unknown keys are
    /// errors, missing keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::Config {
                line: k + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got '{line}'")))?;
            let value = value.trim();
            match key.trim() {
                "B" => cfg.b = list(value).map_err(err)?,
                "alpha" => cfg.alpha_degrees = list(value).map_err(err)?,
                "mass" => cfg.mass = value.parse().map_err(err)?,
                "N" => cfg.n = Some(scalar(value).map_err(err)?),
                "rhoN" => cfg.rho_n = Some(scalar(value).map_err(err)?),
                "M" => cfg.m = Some(scalar(value).map_err(err)?),
                "tol" => cfg.tol = Some(scalar(value).map_err(err)?),
                "target" => cfg.target = value.parse().map_err(err)?,
                "jobs" => cfg.jobs = Some(scalar(value).map_err(err)?),
                "out" => cfg.out = Some(PathBuf::from(value)),
                "format" => cfg.format = value.parse().map_err(err)?,
                "extent" => cfg.extent = Some(scalar(value).map_err(err)?),
                "resolution" => cfg.resolution = scalar(value).map_err(err)?,
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Inverse of [`RunConfig::parse`]. Floats use the shortest text that
    /// reads back to the same value.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut put = |key: &str, value: String| {
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(&value);
            out.push('\n');
        };
        put("B", join(&self.b));
        put("alpha", join(&self.alpha_degrees));
        put("mass", self.mass.to_string());
        if let Some(n) = self.n {
            put("N", n.to_string());
        }
        if let Some(r) = self.rho_n {
            put("rhoN", r.to_string());
        }
        if let Some(m) = self.m {
            put("M", m.to_string());
        }
        if let Some(t) = self.tol {
            put("tol", t.to_string());
        }
        put("target", self.target.to_string());
        if let Some(j) = self.jobs {
            put("jobs", j.to_string());
        }
        if let Some(p) = &self.out {
            put("out", p.display().to_string());
        }
        put("format", self.format.to_string());
        if let Some(e) = self.extent {
            put("extent", e.to_string());
        }
        put("resolution", self.resolution.to_string());
        out
    }

    /// Checks that do not need the solver.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |message: String| Err(CliError::Invalid(message));
        if self.b.is_empty() || self.alpha_degrees.is_empty() {
            return bad("B and alpha lists must not be empty".into());
        }
        if let Some(b) = self.b.iter().find(|b| !(**b >= 0.0) || !b.is_finite()) {
            return bad(format!("B must be finite and >= 0, got {b}"));
        }
        if let Some(a) = self
            .alpha_degrees
            .iter()
            .find(|a| !(0.0..=90.0).contains(*a))
        {
            return bad(format!("alpha must lie in [0, 90] degrees, got {a}"));
        }
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1".into());
        }
        if self.resolution < 2 {
            return bad(format!(
                "resolution must be at least 2, got {}",
                self.resolution
            ));
        }
        Ok(())
    }
}
