use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyd2d::run::{self, ExportKind};
use hyd2d::verify::{self, Selection, VerifyOptions};
use hyd2d::{CliError, Format, MassSpec, RunConfig, TargetSpec};

const AFTER_HELP: &str = "\
Units: atomic units throughout; 1 a.u. of magnetic field = 2.35e5 T. Angles in degrees.

Output columns (CSV header row, or the same keys per JSON line):
  solve: B,alpha_degrees,mass_mode,E,residual,N,rho_N,M,iterations,status
  scan:  B,alpha_degrees,mass_mode,E,residual,N,rho_N,M,iterations,E_weak,E_strong,status
E_weak and E_strong are the weak- and strong-field asymptotes of the ground
energy (E_strong is empty at B = 0). status is `ok` or `error: <reason>`.

Unless N, rhoN or M is given, each point is solved on the ladder
N = 800, 1600, 3200 with M = 8, 16, 32 (M = |l| when l is sharp) until two
successive energies agree within --tol.";

#[derive(Parser)]
#[command(name = "hyd2d", version, about = "2D hydrogen atom in a tilted magnetic field", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one (B, alpha) point and write one record.
    Solve(Opts),
    /// Solve every (B, alpha) pair of the lists, in input order.
    Scan(Opts),
    /// Recompute the published tables and report each row.
    Verify {
        /// table1 .. table6 or all.
        table: Selection,
        /// Flip the sign of the Zeeman term (fault injection).
        #[arg(long)]
        reverse_zeeman: bool,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Write a density or potential grid file.
    Export {
        kind: Kind,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Density,
    Potential,
}

#[derive(Args)]
struct Opts {
    /// key = value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Field magnitude(s) in atomic units, comma separated.
    #[arg(long = "B", value_delimiter = ',', allow_negative_numbers = true)]
    b: Option<Vec<f64>>,
    /// Tilt angle(s) in degrees, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Option<Vec<f64>>,
    /// infinite | finite | finite:<m_p>
    #[arg(long)]
    mass: Option<MassSpec>,
    /// Radial intervals.
    #[arg(long = "N")]
    n: Option<usize>,
    /// Box radius in atomic units.
    #[arg(long = "rhoN")]
    rho_n: Option<f64>,
    /// Angular cutoff: channels -M..M.
    #[arg(long = "M")]
    m: Option<usize>,
    /// Energy agreement between ladder rungs.
    #[arg(long)]
    tol: Option<f64>,
    /// ground | near:<E> | level:<n>,<l>[@<shift>]
    #[arg(long, allow_hyphen_values = true)]
    target: Option<TargetSpec>,
    /// Worker threads for scans (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json-lines
    #[arg(long)]
    format: Option<Format>,
    /// Half side of exported grids in atomic units.
    #[arg(long)]
    extent: Option<f64>,
    /// Points per side of exported grids.
    #[arg(long)]
    resolution: Option<usize>,
}

impl Opts {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::parse(
                &std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?,
            )?,
            None => RunConfig::default(),
        };
        if let Some(b) = self.b {
            cfg.b = b;
        }
        if let Some(a) = self.alpha {
            cfg.alpha_degrees = a;
        }
        if let Some(m) = self.mass {
            cfg.mass = m;
        }
        cfg.n = self.n.or(cfg.n);
        cfg.rho_n = self.rho_n.or(cfg.rho_n);
        cfg.m = self.m.or(cfg.m);
        cfg.tol = self.tol.or(cfg.tol);
        if let Some(t) = self.target {
            cfg.target = t;
        }
        cfg.jobs = self.jobs.or(cfg.jobs);
        cfg.out = self.out.or(cfg.out);
        if let Some(f) = self.format {
            cfg.format = f;
        }
        cfg.extent = self.extent.or(cfg.extent);
        if let Some(r) = self.resolution {
            cfg.resolution = r;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn execute(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Solve(opts) => {
            let cfg = opts.into_config()?;
            let record = run::solve(&cfg)?;
            run::emit(std::slice::from_ref(&record), &cfg)?;
            if !record.converged() {
                eprintln!("hyd2d: {}", record.status);
            }
            Ok(record.converged())
        }
        Command::Scan(opts) => {
            let cfg = opts.into_config()?;
            let records = run::scan(&cfg)?;
            run::emit(&records, &cfg)?;
            Ok(true)
        }
        Command::Verify {
            table,
            reverse_zeeman,
            jobs,
        } => {
            let checks = verify::verify(
                &table.0,
                &VerifyOptions {
                    reverse_zeeman,
                    jobs,
                },
            )?;
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.pass()).count();
            println!("{} checks, {} failed", checks.len(), failed);
            Ok(failed == 0)
        }
        Command::Export { kind, opts } => {
            let cfg = opts.into_config()?;
            let kind = match kind {
                Kind::Density => ExportKind::Density,
                Kind::Potential => ExportKind::Potential,
            };
            let field = run::export(kind, &cfg)?;
            match &cfg.out {
                Some(path) => run::write_grid(&field, path)?,
                None => print!("{}", run::render_grid(&field)),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("hyd2d: {e}");
            ExitCode::from(2)
        }
    }
}
