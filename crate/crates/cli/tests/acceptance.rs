//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//!
//! `cargo test -p hyd2d --test acceptance`

use std::process::{Command, ExitCode};
use std::time::Instant;

use hyd2d::verify::{verify, Check, Table, VerifyOptions};
use hyd2d_core::reference::{strong_field_energy, weak_field_energy};
use hyd2d_core::{
    converge, inverse_iteration, solve_target, AngularBasis, Complex64, DerivativeStencils,
    DiscreteHamiltonian, MassMode, PhysicalConfig, RadialGrid, RadialScheme, Resolution,
    SolveOptions, Target,
};
use nalgebra::DMatrix;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

const ALPHAS: [f64; 5] = [0.0, 30.0, 45.0, 60.0, 90.0];
const ANISOTROPY_ALPHAS: [f64; 3] = [0.0, 45.0, 80.0];
// Strong-field resolution: the state lives within rho ~ 0.3 at B = 1e3.
const STRONG_RESOLUTION: Resolution = Resolution {
    n: 150,
    rho_max: 0.9,
    m_max: 48,
};

/// Energy and <x^2>/<y^2>, or why the solve failed.
type Shape = Result<(f64, f64), String>;

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

fn from_checks(checks: Vec<Check>) -> Outcome {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.pass())
        .map(|c| c.to_string())
        .collect();
    let worst = checks
        .iter()
        .filter_map(|c| {
            let x = c.computed.as_ref().ok()?;
            c.criteria
                .iter()
                .filter_map(|k| match *k {
                    hyd2d::verify::Criterion::Near {
                        value, tolerance, ..
                    } => Some((x - value).abs() / tolerance),
                    _ => None,
                })
                .reduce(f64::max)
        })
        .fold(0.0, f64::max);
    Outcome {
        pass: failed.is_empty(),
        summary: format!(
            "{} checks, {} failed, worst |d|/tol = {worst:.3}",
            checks.len(),
            failed.len()
        ),
        details: failed,
    }
}

fn tables(t: &[Table]) -> Outcome {
    match verify(t, &VerifyOptions::default()) {
        Ok(checks) => from_checks(checks),
        Err(e) => Outcome {
            pass: false,
            summary: format!("error: {e}"),
            details: vec![],
        },
    }
}

fn ground(b: f64, alpha: f64, mode: MassMode, tol: f64) -> Result<f64, String> {
    let c = PhysicalConfig::from_degrees(b, alpha, mode).map_err(|e| e.to_string())?;
    converge(&c, Target::GroundState, tol)
        .map(|r| r.energy)
        .map_err(|e| e.to_string())
}

fn asymptotes() -> Outcome {
    let run = || -> Result<(bool, String), String> {
        let d01 = ground(0.1, 0.0, MassMode::InfiniteProton, 1e-8)? - weak_field_energy(0.1, 1.0);
        let d025 =
            ground(0.25, 0.0, MassMode::InfiniteProton, 1e-8)? - weak_field_energy(0.25, 1.0);
        let ratio = d025 / d01;
        let quartic = 2.5f64.powi(4);
        let e = ground(1e4, 0.0, MassMode::InfiniteProton, 1e-7)?;
        let s = strong_field_energy(1e4, 1.0).map_err(|e| e.to_string())?;
        let rel = ((e - s) / s).abs();
        let pass = ratio >= quartic / 2.0 && rel <= 0.01;
        Ok((
            pass,
            format!(
                "weak residuals {d01:.3e} (B=0.1), {d025:.3e} (B=0.25), ratio {ratio:.2} vs 2.5^4/2 = {:.2}; \
                 B=1e4 E={e:.4} strong={s:.4} rel {rel:.2e}",
                quartic / 2.0
            ),
        ))
    };
    match run() {
        Ok((pass, summary)) => Outcome {
            pass,
            summary,
            details: vec![],
        },
        Err(e) => Outcome {
            pass: false,
            summary: format!("error: {e}"),
            details: vec![],
        },
    }
}

fn strong_state(alpha: f64) -> Shape {
    let c = PhysicalConfig::from_degrees(1e3, alpha, MassMode::finite_default())
        .map_err(|e| e.to_string())?;
    let r = solve_target(
        &c,
        Target::GroundState,
        STRONG_RESOLUTION,
        &SolveOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let (x2, y2) = r.wavefunction.second_moments();
    Ok((r.energy, x2 / y2))
}

fn anisotropy() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    let mode = |finite: bool| {
        if finite {
            MassMode::finite_default()
        } else {
            MassMode::InfiniteProton
        }
    };
    let moderate: Vec<_> = [1.0, 1.5, 4.0]
        .into_iter()
        .flat_map(|b| [false, true].map(|f| (b, f)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, finite)| (b, finite, ALPHAS.map(|a| ground(b, a, mode(finite), 1e-7))))
        .collect();
    for (b, finite, energies) in moderate {
        let e: Result<Vec<f64>, String> = energies.into_iter().collect();
        let ok = e.as_ref().is_ok_and(|e| e.windows(2).all(|w| w[1] < w[0]));
        pass &= ok;
        let shown = match &e {
            Ok(e) => format!("{e:.8?}"),
            Err(err) => err.clone(),
        };
        details.push(format!(
            "{} B={b} {}: E(alpha) = {shown}",
            if ok { "ok  " } else { "FAIL" },
            if finite { "finite" } else { "infinite" }
        ));
    }
    let mut alphas: Vec<f64> = ALPHAS.into_iter().chain(ANISOTROPY_ALPHAS).collect();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    let strong: Vec<(f64, Shape)> = alphas.par_iter().map(|&a| (a, strong_state(a))).collect();
    let lookup = |a: f64| {
        strong
            .iter()
            .find(|s| s.0 == a)
            .map(|s| s.1.clone())
            .unwrap()
    };
    let energies: Result<Vec<f64>, String> =
        ALPHAS.iter().map(|&a| lookup(a).map(|s| s.0)).collect();
    let shapes: Result<Vec<f64>, String> = ANISOTROPY_ALPHAS
        .iter()
        .map(|&a| lookup(a).map(|s| s.1))
        .collect();
    match (energies, shapes) {
        (Ok(e), Ok(s)) => {
            let decreasing = e.windows(2).all(|w| w[1] < w[0]);
            let ratio = e[0] / e[4];
            let bracket = (1.3..=2.0).contains(&ratio);
            let elongating = s.windows(2).all(|w| w[1] > w[0]);
            pass &= decreasing && bracket && elongating;
            details.push(format!(
                "{} B=1e3 finite: E(alpha) = {e:.4?}, E(0)/E(90) = {ratio:.4}",
                if decreasing && bracket {
                    "ok  "
                } else {
                    "FAIL"
                }
            ));
            details.push(format!(
                "{} B=1e3 <x^2>/<y^2> at alpha 0, 45, 80 = {s:.4?}",
                if elongating { "ok  " } else { "FAIL" }
            ));
        }
        (Err(e), _) | (_, Err(e)) => {
            pass = false;
            details.push(format!("FAIL B=1e3: {e}"));
        }
    }
    let summary = details.iter().filter(|d| d.starts_with("ok")).count();
    Outcome {
        pass,
        summary: format!("{summary}/{} series as required", details.len()),
        details,
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    let mut unit = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
    (0..len).map(|_| c(unit(), unit())).collect()
}

fn hamiltonian(
    b: f64,
    alpha: f64,
    finite: bool,
    n: usize,
    rho: f64,
    m: usize,
) -> DiscreteHamiltonian {
    let mode = if finite {
        MassMode::finite_default()
    } else {
        MassMode::InfiniteProton
    };
    let config = PhysicalConfig::from_degrees(b, alpha, mode).unwrap();
    let grid = RadialGrid::new(n, rho).unwrap();
    DiscreteHamiltonian::assemble(
        &config,
        &grid,
        &AngularBasis::new(m),
        RadialScheme::Symmetric,
    )
    .unwrap()
}

const PROBE_CASES: [(f64, f64, bool, usize); 6] = [
    (0.0, 0.0, false, 0),
    (1.0, 0.0, true, 1),
    (1.5, 45.0, false, 2),
    (4.0, 90.0, true, 2),
    (0.3, 20.0, false, 1),
    (3.0, 70.0, true, 0),
];

fn hermiticity() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for (b, a, finite, m) in PROBE_CASES {
        let h = hamiltonian(b, a, finite, 40, 15.0, m);
        for _ in 0..20 {
            let u = random_vector(&mut rng, h.dim());
            let v = random_vector(&mut rng, h.dim());
            let huv = h.inner(&u, &h.apply(&v).unwrap());
            let hvu = h.inner(&v, &h.apply(&u).unwrap());
            worst = worst
                .max((huv - hvu.conj()).norm() / (h.max_abs_entry() * h.norm(&u) * h.norm(&v)));
            pairs += 1;
        }
    }
    (
        worst <= 1e-13,
        format!("hermiticity {pairs} pairs, worst {worst:.1e}"),
    )
}

fn eigenrelations() -> (bool, String) {
    let mut worst = 0.0f64;
    for m_max in 0..=8 {
        let basis = AngularBasis::new(m_max);
        let n = basis.n_ang();
        let mut out = vec![c(0.0, 0.0); n];
        for m in -(m_max as i64)..=m_max as i64 {
            let e = basis.channel_samples(m);
            for (mat, factor) in [(basis.h0(), -((m * m) as f64)), (basis.h1(), m as f64)] {
                AngularBasis::mul(mat, &e, &mut out);
                for (o, x) in out.iter().zip(&e) {
                    worst = worst.max((o - x * factor).norm());
                }
            }
        }
    }
    (
        worst <= 1e-12,
        format!("eigenrelations M<=8 worst {worst:.1e}"),
    )
}

/// Error of the radial second derivative on `sqrt(rho/rho_N) e^{-rho}`,
/// weighted by `rho^{3/2}` to remove the integrable singularity at 0.
fn fd_error(n: usize) -> f64 {
    let rn = 40.0;
    let g = RadialGrid::new(n, rn).unwrap();
    let s = DerivativeStencils::new(&g);
    let v: Vec<f64> = (0..=n)
        .map(|k| {
            let t = k as f64 / n as f64;
            t * (-rn * t * t).exp()
        })
        .collect();
    s.second_rho
        .iter()
        .zip(g.rho())
        .map(|(row, &r)| {
            let exact = (-r).exp() / rn.sqrt() * (-0.25 * r.powf(-1.5) - r.powf(-0.5) + r.sqrt());
            (row.apply(&v) - exact).abs() * r.powf(1.5)
        })
        .fold(0.0, f64::max)
}

fn fd_order() -> (bool, String) {
    let e = [fd_error(200), fd_error(400), fd_error(800)];
    let order = e
        .windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .fold(f64::INFINITY, f64::min);
    (order >= 5.5, format!("FD order {order:.2}"))
}

fn dense_lowest(h: &DiscreteHamiltonian) -> f64 {
    let dim = h.dim();
    let n = h.n_ang();
    let w: Vec<f64> = (0..dim)
        .map(|k| (h.weights()[k / n] * h.basis().weight()).sqrt())
        .collect();
    let mut a = DMatrix::<Complex64>::zeros(dim, dim);
    let mut e = vec![c(0.0, 0.0); dim];
    for col in 0..dim {
        e.fill(c(0.0, 0.0));
        e[col] = c(1.0, 0.0);
        for (row, v) in h.apply(&e).unwrap().iter().enumerate() {
            a[(row, col)] = v * (w[row] / w[col]);
        }
    }
    let sym = (&a + a.adjoint()) * c(0.5, 0.0);
    sym.symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

fn dense_oracle() -> (bool, String) {
    let mut worst = 0.0f64;
    let sizes = [20, 33, 47, 60, 60, 25];
    for ((b, a, finite, m), n) in PROBE_CASES.into_iter().zip(sizes) {
        let h = hamiltonian(b, a, finite, n, 12.0, m);
        let opts = SolveOptions {
            shift_update: true,
            ..SolveOptions::default()
        };
        let e = inverse_iteration(&h, -2.1 * h.config().m_r(), &opts)
            .map(|r| r.energy)
            .unwrap_or(f64::NAN);
        worst = worst.max((e - dense_lowest(&h)).abs());
    }
    (worst <= 1e-9, format!("dense oracle worst {worst:.1e}"))
}

fn quadrature() -> (bool, String) {
    let mut worst = 0.0f64;
    for (n, rho) in [(14, 1.0), (100, 40.0), (777, 0.3)] {
        let grid = RadialGrid::new(n, rho).unwrap();
        for p in 0..=2 {
            let exact = 2.0 * rho / (p as f64 + 2.0);
            let sum: f64 = grid
                .quad()
                .iter()
                .zip(grid.t())
                .map(|(q, t)| q * t.powi(p))
                .sum();
            worst = worst.max((sum - exact).abs() / exact);
        }
    }
    (worst <= 1e-12, format!("quadrature worst {worst:.1e}"))
}

fn run_twice(args: &[&str]) -> Result<bool, String> {
    let dir = std::env::temp_dir().join(format!("hyd2d-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let path = dir.join(format!("out{k}"));
        let status = Command::new(env!("CARGO_BIN_EXE_hyd2d"))
            .args(args)
            .arg("--out")
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("{args:?} exited with {status}"));
        }
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    Ok(outputs[0] == outputs[1] && !outputs[0].is_empty())
}

fn determinism() -> (bool, String) {
    let commands: [&[&str]; 5] = [
        &[
            "solve", "--B", "1.5", "--alpha", "45", "--N", "400", "--rhoN", "30", "--M", "4",
        ],
        &[
            "scan",
            "--B",
            "0,1",
            "--alpha",
            "0,60",
            "--N",
            "300",
            "--M",
            "2",
            "--jobs",
            "3",
            "--format",
            "json-lines",
        ],
        &[
            "export",
            "density",
            "--B",
            "1",
            "--alpha",
            "45",
            "--N",
            "300",
            "--rhoN",
            "30",
            "--M",
            "4",
            "--resolution",
            "41",
        ],
        &[
            "export",
            "potential",
            "--B",
            "2",
            "--alpha",
            "30",
            "--resolution",
            "41",
        ],
        &[
            "scan", "--B", "0.5", "--alpha", "10,20", "--N", "300", "--M", "2", "--jobs", "1",
        ],
    ];
    let mut bad = Vec::new();
    for args in commands {
        match run_twice(args) {
            Ok(true) => {}
            Ok(false) => bad.push(format!("{} differs", args[..2].join(" "))),
            Err(e) => bad.push(e),
        }
    }
    (
        bad.is_empty(),
        format!(
            "file outputs byte-identical on rerun ({} commands){}",
            commands.len(),
            bad.join("; ")
        ),
    )
}

fn properties() -> Outcome {
    let results = [
        hermiticity(),
        eigenrelations(),
        fd_order(),
        dense_oracle(),
        quadrature(),
        determinism(),
    ];
    Outcome {
        pass: results.iter().all(|r| r.0),
        summary: results
            .iter()
            .map(|r| r.1.clone())
            .collect::<Vec<_>>()
            .join("; "),
        details: results
            .iter()
            .filter(|r| !r.0)
            .map(|r| r.1.clone())
            .collect(),
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("zero-field levels", || tables(&[Table::T1])),
        ("dipole elements", || tables(&[Table::T2])),
        ("perpendicular-field ground state", || tables(&[Table::T3])),
        ("quasi-exact levels and <Lz>", || {
            tables(&[Table::T4, Table::T5])
        }),
        ("tilted-field ground state, both masses", || {
            tables(&[Table::T6])
        }),
        ("weak- and strong-field asymptotes", asymptotes),
        ("anisotropy", anisotropy),
        ("property suite", properties),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {}: {name}: {} [{:.1}s]",
            k + 1,
            outcome.summary,
            start.elapsed().as_secs_f64()
        );
        for line in &outcome.details {
            println!("    {line}");
        }
        failures += usize::from(!outcome.pass);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
