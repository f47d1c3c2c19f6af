//! The `solve`, `scan` and `export` commands.

use std::fs;
use std::io::Write;
use std::path::Path;

use hyd2d_core::eigen::{box_radius, Ladder};
use hyd2d_core::observables::{potential_surface, Field2D};
use hyd2d_core::reference::{strong_field_energy, weak_field_energy};
use hyd2d_core::{
    converge_with, solve_target, Error as CoreError, PhysicalConfig, Resolution, SolveOptions,
    SolveResult, Target,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

/// Ladder agreement used when the config sets no `tol`.
pub const DEFAULT_TOL: f64 = 1e-7;
/// Radial intervals used when only some numerics are fixed.
pub const DEFAULT_N: usize = 1600;
/// Angular cutoff used when only some numerics are fixed and `l` is not sharp.
pub const DEFAULT_M: usize = 16;

/// Column order of `solve` output.
pub const SOLVE_COLUMNS: &[&str] = &[
    "B",
    "alpha_degrees",
    "mass_mode",
    "E",
    "residual",
    "N",
    "rho_N",
    "M",
    "iterations",
    "status",
];
/// Column order of `scan` output.
pub const SCAN_COLUMNS: &[&str] = &[
    "B",
    "alpha_degrees",
    "mass_mode",
    "E",
    "residual",
    "N",
    "rho_N",
    "M",
    "iterations",
    "E_weak",
    "E_strong",
    "status",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveRecord {
    #[serde(rename = "B")]
    pub b: f64,
    pub alpha_degrees: f64,
    pub mass_mode: String,
    #[serde(rename = "E")]
    pub energy: Option<f64>,
    pub residual: Option<f64>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    #[serde(rename = "rho_N")]
    pub rho_n: Option<f64>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub iterations: Option<usize>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    #[serde(rename = "B")]
    pub b: f64,
    pub alpha_degrees: f64,
    pub mass_mode: String,
    #[serde(rename = "E")]
    pub energy: Option<f64>,
    pub residual: Option<f64>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    #[serde(rename = "rho_N")]
    pub rho_n: Option<f64>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub iterations: Option<usize>,
    #[serde(rename = "E_weak")]
    pub weak: f64,
    #[serde(rename = "E_strong")]
    pub strong: Option<f64>,
    pub status: String,
}

impl SolveRecord {
    pub fn converged(&self) -> bool {
        self.status == "ok"
    }

    fn from_outcome(
        config: &PhysicalConfig,
        cfg: &RunConfig,
        outcome: &Result<SolveResult, CoreError>,
    ) -> Self {
        let mut record = Self {
            b: config.b(),
            alpha_degrees: config.alpha_degrees(),
            mass_mode: cfg.mass.to_string(),
            energy: None,
            residual: None,
            n: None,
            rho_n: None,
            m: None,
            iterations: None,
            status: "ok".into(),
        };
        match outcome {
            Ok(r) => {
                record.energy = Some(r.energy);
                record.residual = Some(r.residual);
                record.n = Some(r.resolution.n);
                record.rho_n = Some(r.resolution.rho_max);
                record.m = Some(r.resolution.m_max);
                record.iterations = Some(r.iterations);
            }
            Err(e) => {
                // keep the last energy seen, if any
                record.energy = match e {
                    CoreError::NotConverged { history, .. } => history.last().copied(),
                    CoreError::LadderExhausted { energies } => energies.last().copied(),
                    _ => None,
                };
                if let CoreError::NotConverged { residual, .. } = e {
                    record.residual = residual.is_finite().then_some(*residual);
                }
                record.status = format!("error: {e}");
            }
        }
        record
    }

    fn with_asymptotes(self, m_r: f64) -> ScanRecord {
        ScanRecord {
            b: self.b,
            alpha_degrees: self.alpha_degrees,
            mass_mode: self.mass_mode,
            energy: self.energy,
            residual: self.residual,
            n: self.n,
            rho_n: self.rho_n,
            m: self.m,
            iterations: self.iterations,
            weak: weak_field_energy(self.b, m_r),
            strong: strong_field_energy(self.b, m_r).ok(),
            status: self.status,
        }
    }
}

pub fn physical(cfg: &RunConfig, b: f64, alpha_degrees: f64) -> Result<PhysicalConfig, CliError> {
    Ok(PhysicalConfig::from_degrees(
        b,
        alpha_degrees,
        cfg.mass.mode(),
    )?)
}

/// Fixed resolution if the config pins any of `N`, `rhoN`, `M`, with the
/// others filled in from the defaults.
pub fn fixed_resolution(cfg: &RunConfig, config: &PhysicalConfig) -> Option<Resolution> {
    if cfg.n.is_none() && cfg.rho_n.is_none() && cfg.m.is_none() {
        return None;
    }
    let target = cfg.target.target();
    let m_default = match target {
        Target::Level { l, .. } if config.lz_is_sharp() => l.unsigned_abs() as usize,
        _ if config.lz_is_sharp() => 0,
        _ => DEFAULT_M,
    };
    Some(Resolution::new(
        cfg.n.unwrap_or(DEFAULT_N),
        cfg.rho_n.unwrap_or_else(|| box_radius(config, target)),
        cfg.m.unwrap_or(m_default),
    ))
}

/// Solves one physical point: at the pinned resolution, or up the ladder
/// until successive rungs agree within `tol`.
pub fn solve_point(cfg: &RunConfig, config: &PhysicalConfig) -> Result<SolveResult, CoreError> {
    let target = cfg.target.target();
    let opts = SolveOptions::default();
    match fixed_resolution(cfg, config) {
        Some(res) => solve_target(config, target, res, &opts),
        None => {
            let ladder = Ladder::standard(config, target);
            converge_with(
                config,
                target,
                cfg.tol.unwrap_or(DEFAULT_TOL),
                &ladder,
                &opts,
            )
        }
    }
}

/// `solve`: one record for the first `B` and `alpha` of the config.
pub fn solve(cfg: &RunConfig) -> Result<SolveRecord, CliError> {
    cfg.validate()?;
    let config = physical(cfg, cfg.b[0], cfg.alpha_degrees[0])?;
    let outcome = solve_point(cfg, &config);
    Ok(SolveRecord::from_outcome(&config, cfg, &outcome))
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j);
    }
    Ok(builder.build()?)
}

/// `scan`: every `(B, alpha)` pair, `B` outermost, in input order. Failed
/// points are reported in the status column.
pub fn scan(cfg: &RunConfig) -> Result<Vec<ScanRecord>, CliError> {
    cfg.validate()?;
    let points: Vec<(f64, f64)> = cfg
        .b
        .iter()
        .flat_map(|&b| cfg.alpha_degrees.iter().map(move |&a| (b, a)))
        .collect();
    let m_r = hyd2d_core::params::reduced_masses(cfg.mass.mode())?.m_r;
    let records = pool(cfg.jobs)?.install(|| {
        points
            .par_iter()
            .map(|&(b, a)| -> Result<ScanRecord, CliError> {
                let config = physical(cfg, b, a)?;
                let outcome = solve_point(cfg, &config);
                Ok(SolveRecord::from_outcome(&config, cfg, &outcome).with_asymptotes(m_r))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(records)
}

/// Writes records as CSV with a header row, or one JSON object per line.
pub fn write_records<T: Serialize>(
    records: &[T],
    format: Format,
    out: impl Write,
) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::JsonLines => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

/// Writes to the config's output path, or to stdout.
pub fn emit<T: Serialize>(records: &[T], cfg: &RunConfig) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
            write_records(records, cfg.format, std::io::BufWriter::new(file))
        }
        None => write_records(records, cfg.format, std::io::stdout().lock()),
    }
}

/// What `export` tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportKind {
    Density,
    Potential,
}

/// Default half side of density grids, in units of `sqrt(<rho^2>)`.
const DENSITY_EXTENT: f64 = 4.0;
/// Default half side of potential grids.
const POTENTIAL_EXTENT: f64 = 4.0;

/// `export`: the density of the targeted state or the potential surface at
/// the first `B` and `alpha` of the config.
pub fn export(kind: ExportKind, cfg: &RunConfig) -> Result<Field2D, CliError> {
    cfg.validate()?;
    let config = physical(cfg, cfg.b[0], cfg.alpha_degrees[0])?;
    match kind {
        ExportKind::Potential => Ok(potential_surface(
            config.b(),
            config.alpha(),
            cfg.extent.unwrap_or(POTENTIAL_EXTENT),
            cfg.resolution,
        )?),
        ExportKind::Density => {
            let r = solve_point(cfg, &config)?;
            let extent = cfg.extent.unwrap_or_else(|| {
                let (x2, y2) = r.wavefunction.second_moments();
                DENSITY_EXTENT * (x2 + y2).sqrt()
            });
            Ok(r.wavefunction.density_cartesian(extent, cfg.resolution)?)
        }
    }
}

/// Grid file text: a comment header naming the fields, the bounds and sizes,
/// then `ny` rows of `nx` values with `y` increasing.
pub fn render_grid(field: &Field2D) -> String {
    let mut s = String::from("# x_min x_max y_min y_max nx ny\n");
    s.push_str(&format!(
        "# {:e} {:e} {:e} {:e} {} {}\n",
        field.x_min, field.x_max, field.y_min, field.y_max, field.nx, field.ny
    ));
    for row in field.values.chunks(field.nx) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// Reads a grid file written by [`render_grid`].
pub fn parse_grid(text: &str) -> Result<Field2D, CliError> {
    let bad = |line: usize, message: &str| CliError::Config {
        line,
        message: message.into(),
    };
    let mut lines = text.lines().enumerate();
    lines.next().ok_or_else(|| bad(1, "empty grid file"))?;
    let (_, head) = lines.next().ok_or_else(|| bad(2, "missing grid header"))?;
    let head: Vec<&str> = head.trim_start_matches('#').split_whitespace().collect();
    if head.len() != 6 {
        return Err(bad(2, "grid header needs six fields"));
    }
    let f = |k: usize| {
        head[k]
            .parse::<f64>()
            .map_err(|_| bad(2, "bad bound in grid header"))
    };
    let u = |k: usize| {
        head[k]
            .parse::<usize>()
            .map_err(|_| bad(2, "bad size in grid header"))
    };
    let (nx, ny) = (u(4)?, u(5)?);
    let mut values = Vec::with_capacity(nx * ny);
    for (k, line) in lines {
        let row: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse).collect();
        let row = row.map_err(|_| bad(k + 1, "bad value"))?;
        if row.len() != nx {
            return Err(bad(k + 1, "row length differs from nx"));
        }
        values.extend(row);
    }
    if values.len() != nx * ny {
        return Err(bad(text.lines().count(), "row count differs from ny"));
    }
    Ok(Field2D {
        x_min: f(0)?,
        x_max: f(1)?,
        y_min: f(2)?,
        y_max: f(3)?,
        nx,
        ny,
        values,
    })
}

pub fn write_grid(field: &Field2D, path: &Path) -> Result<(), CliError> {
    fs::write(path, render_grid(field)).map_err(|e| CliError::io(path, e))
}
