//! Shifted inverse iteration, state targeting and the resolution ladder.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::angular::AngularBasis;
use crate::error::{invalid, Error, Result};
use crate::hamiltonian::{DiscreteHamiltonian, RadialScheme};
use crate::observables::Wavefunction;
use crate::params::PhysicalConfig;
use crate::radial::{default_box_radius, RadialGrid};
use crate::reference::analytic_energy;
use crate::sweep::{seeded_vector, Factorization};

/// Largest tolerated `|<L_z> - l|` for a level of sharp `l`.
pub const LZ_TOLERANCE: f64 = 1e-6;

/// Iterations before the first shift update.
const SHIFT_UPDATE_AFTER: usize = 3;

/// Ground-state shift in units of `m_r`; the 2D ground energy is `-2 m_r` at
/// zero field and only rises with `B`.
const GROUND_SHIFT: f64 = -2.1;

/// Refactorization attempts when a shift lands on an eigenvalue.
const SHIFT_RETRIES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Stop once successive Rayleigh quotients differ by at most this.
    pub tol: f64,
    pub max_iter: usize,
    /// Required `|Hx - Ex| / max(1, |E|)` at convergence.
    pub residual_tol: f64,
    /// Raise the shift towards the Rayleigh quotient from below.
    pub shift_update: bool,
    pub seed: u64,
    /// Keep the iterate in the Fourier channel `m`.
    pub channel: Option<i64>,
    pub max_refactorizations: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 200,
            residual_tol: 1e-8,
            shift_update: false,
            seed: 0x2d_4879,
            channel: None,
            max_refactorizations: 8,
        }
    }
}

/// Discretization parameters: radial intervals, box radius, angular cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolution {
    pub n: usize,
    pub rho_max: f64,
    pub m_max: usize,
}

impl Resolution {
    pub fn new(n: usize, rho_max: f64, m_max: usize) -> Self {
        Self { n, rho_max, m_max }
    }
}

/// Which eigenstate to compute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    GroundState,
    /// The level nearest to the given energy.
    NearEnergy(f64),
    /// Level `n` with magnetic quantum number `l`, only where `l` is sharp
    /// (`B = 0` or `alpha = 0`). At `B > 0` the shift must be supplied.
    Level {
        n: u32,
        l: i32,
        shift: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub energy: f64,
    pub wavefunction: Wavefunction,
    /// `|Hx - Ex|` in the quadrature norm, with `x` normalized.
    pub residual: f64,
    pub iterations: usize,
    /// Rayleigh quotient after each iteration.
    pub history: Vec<f64>,
    pub resolution: Resolution,
    /// Shift of the last factorization.
    pub shift: f64,
}

fn factor_near(h: &DiscreteHamiltonian, sigma: f64) -> Result<Factorization> {
    let mut s = sigma;
    for _ in 0..SHIFT_RETRIES {
        match Factorization::new(h, s) {
            Err(Error::ShiftHitsEigenvalue { .. }) => s -= 1e-6 * s.abs().max(1.0),
            other => return other,
        }
    }
    Factorization::new(h, s)
}

fn project(basis: &AngularBasis, x: &mut [Complex64], m: i64) {
    for node in x.chunks_mut(basis.n_ang()) {
        basis.project_channel(node, m);
    }
}

fn scale(x: &mut [Complex64], s: f64) {
    x.iter_mut().for_each(|z| *z *= s);
}

/// Shifted inverse iteration `x <- (H - sigma)^{-1} x / |.|` from a seeded
/// start vector. With `opts.shift_update` the shift is raised to
/// `E - 2|r|` (never lowered) once the residual has dropped tenfold since
/// the last factorization; the Rayleigh quotient of the lowest state
/// approaches from above, so this stays below it.
pub fn inverse_iteration(
    h: &DiscreteHamiltonian,
    sigma: f64,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    if !sigma.is_finite() {
        return Err(invalid("sigma", sigma, "shift must be finite"));
    }
    let basis = h.basis();
    let mut fact = factor_near(h, sigma)?;
    let mut x = seeded_vector(opts.seed, h.dim());
    if let Some(m) = opts.channel {
        if m.unsigned_abs() as usize > basis.m_max() {
            return Err(invalid("channel", m as f64, "outside the angular basis"));
        }
        project(basis, &mut x, m);
    }
    let n0 = h.norm(&x);
    if !(n0 > 0.0) {
        return Err(Error::ZeroVector);
    }
    scale(&mut x, 1.0 / n0);

    let mut history = Vec::new();
    let mut hx = vec![Complex64::new(0.0, 0.0); x.len()];
    let mut refactors = 0;
    let mut residual_at_factor = f64::INFINITY;
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_iter {
        let (mut y, _) = fact.solve_refined(h, &x)?;
        if let Some(m) = opts.channel {
            project(basis, &mut y, m);
        }
        let ny = h.norm(&y);
        if !(ny > 0.0) || !ny.is_finite() {
            return Err(Error::NotConverged { history, residual });
        }
        scale(&mut y, 1.0 / ny);
        x = y;
        h.apply_into(&x, &mut hx);
        let energy = h.inner(&x, &hx).re;
        let r: Vec<Complex64> = hx.iter().zip(&x).map(|(a, b)| a - b * energy).collect();
        residual = h.norm(&r);
        let prev = history.last().copied();
        history.push(energy);
        if residual_at_factor.is_infinite() {
            residual_at_factor = residual;
        }

        let settled = prev.is_some_and(|p| libm::fabs(energy - p) <= opts.tol);
        if settled && residual <= opts.residual_tol * energy.abs().max(1.0) {
            let wavefunction =
                Wavefunction::new(x, h.grid().clone(), basis.clone())?.normalize()?;
            return Ok(SolveResult {
                energy,
                wavefunction,
                residual,
                iterations: it,
                history,
                resolution: Resolution::new(h.grid().n(), h.grid().rho_max(), basis.m_max()),
                shift: fact.shift(),
            });
        }

        if opts.shift_update
            && it >= SHIFT_UPDATE_AFTER
            && refactors < opts.max_refactorizations
            && residual * 10.0 <= residual_at_factor
        {
            let candidate = energy - 2.0 * residual;
            if candidate > fact.shift() {
                match factor_near(h, candidate) {
                    Ok(f) => {
                        fact = f;
                        refactors += 1;
                        residual_at_factor = residual;
                    }
                    // keep iterating with the old factors
                    Err(Error::ShiftHitsEigenvalue { .. }) => refactors = opts.max_refactorizations,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Err(Error::NotConverged { history, residual })
}

/// Builds the Hamiltonian at `resolution`, picks the shift for `target`, runs
/// inverse iteration and checks `<L_z>` for level targets.
pub fn solve_target(
    config: &PhysicalConfig,
    target: Target,
    resolution: Resolution,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    let grid = RadialGrid::new(resolution.n, resolution.rho_max)?;
    let basis = AngularBasis::new(resolution.m_max);
    let h = DiscreteHamiltonian::assemble(config, &grid, &basis, RadialScheme::Symmetric)?;
    let mut opts = *opts;
    let sigma = match target {
        Target::GroundState => {
            opts.shift_update = true;
            GROUND_SHIFT * config.m_r()
        }
        Target::NearEnergy(e) => e,
        Target::Level { n, l, shift } => {
            if !config.lz_is_sharp() {
                return Err(Error::UnsupportedTarget(
                    "level targets need B = 0 or alpha = 0",
                ));
            }
            if n == 0 || l.unsigned_abs() >= n {
                return Err(invalid("l", l as f64, "need |l| < n"));
            }
            if l.unsigned_abs() as usize > resolution.m_max {
                return Err(invalid(
                    "M",
                    resolution.m_max as f64,
                    "angular basis must contain channel l",
                ));
            }
            opts.channel = Some(l as i64);
            match shift {
                Some(s) => s,
                None if config.b() == 0.0 => analytic_energy(n, config.m_r())? * 1.01,
                None => {
                    return Err(Error::UnsupportedTarget(
                        "level targets at B > 0 need an explicit shift",
                    ))
                }
            }
        }
    };
    let result = inverse_iteration(&h, sigma, &opts)?;
    if let Target::Level { l, .. } = target {
        let lz = result.wavefunction.lz_expectation();
        if libm::fabs(lz - l as f64) > LZ_TOLERANCE {
            return Err(Error::Classification {
                expected: l,
                measured_lz: lz,
            });
        }
    }
    Ok(result)
}

/// Sequence of resolutions tried by [`converge_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct Ladder {
    pub rungs: Vec<Resolution>,
}

impl Ladder {
    /// `N` in {800, 1600, 3200} with `M` in {8, 16, 32}, or `M = |l|` when
    /// `l` is sharp; the box radius `rho` on the first rung and `1.5 rho` after.
    pub fn standard(config: &PhysicalConfig, target: Target) -> Self {
        let rho = box_radius(config, target);
        let sharp = config.lz_is_sharp();
        let l = match target {
            Target::Level { l, .. } => l.unsigned_abs() as usize,
            _ => 0,
        };
        let rungs = [(800, 8, 1.0), (1600, 16, 1.5), (3200, 32, 1.5)]
            .into_iter()
            .map(|(n, m, f)| Resolution::new(n, f * rho, if sharp { l } else { m }))
            .collect();
        Self { rungs }
    }
}

/// Box radius for a target: the field default, widened for extended
/// zero-field levels and for levels whose classical turning point lies
/// further out.
pub fn box_radius(config: &PhysicalConfig, target: Target) -> f64 {
    let b = config.b();
    let base = default_box_radius(b);
    let (n, energy) = match target {
        Target::GroundState => return base,
        Target::NearEnergy(e) => (1, e),
        Target::Level { n, shift, .. } => (n, shift.unwrap_or(0.0)),
    };
    let d = 2.0 * n as f64 - 1.0;
    let coulomb = base.max(2.0 * d * d);
    if b == 0.0 {
        return coulomb;
    }
    // where the diamagnetic term reaches the level energy, plus a decay length
    let turning = libm::sqrt(8.0 * config.m_r() * energy.max(0.0)) / b;
    let field = turning + 40.0 / libm::sqrt(b);
    coulomb.min(field).max(base)
}

/// [`converge_with`] on the standard ladder and default options.
pub fn converge(config: &PhysicalConfig, target: Target, tol: f64) -> Result<SolveResult> {
    converge_with(
        config,
        target,
        tol,
        &Ladder::standard(config, target),
        &SolveOptions::default(),
    )
}

/// Solves on each rung in turn and returns the first result whose energy
/// agrees with the previous rung within `tol`.
pub fn converge_with(
    config: &PhysicalConfig,
    target: Target,
    tol: f64,
    ladder: &Ladder,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    if !(tol >= 1e-8) {
        return Err(invalid(
            "tol",
            tol,
            "convergence tolerance must be at least 1e-8",
        ));
    }
    let mut energies = Vec::new();
    for &rung in &ladder.rungs {
        let result = solve_target(config, target, rung, opts)?;
        let prev = energies.last().copied();
        energies.push(result.energy);
        if prev.is_some_and(|p: f64| libm::fabs(result.energy - p) <= tol) {
            return Ok(result);
        }
    }
    Err(Error::LadderExhausted { energies })
}
