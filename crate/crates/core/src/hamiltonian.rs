//! Discrete Hamiltonian of the coupled radial system on the DVR grid.
//!
//! Unknowns are `psi_j(rho_i) = sqrt(rho_i) Psi(rho_i, phi_j)` at the radial
//! nodes `i = 1..N-1`, stacked as `index = (i - 1) * n_ang + j`. The operator
//! is `(1/2m_r) [-d^2/drho^2 - 1/(4 rho^2) - h0/rho^2 + V]`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::angular::AngularBasis;
use crate::error::{invalid, Error, Result};
use crate::params::PhysicalConfig;
use crate::radial::{DerivativeStencils, RadialGrid};

/// How the radial kinetic operator is discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RadialScheme {
    /// Quadratic-form discretization of `int rho |dPsi/drho|^2`: sixth-order
    /// staggered differences of `psi/t` with even reflection at the origin.
    /// Hermitian in the quadrature inner product.
    #[default]
    Symmetric,
    /// Row-wise chain-rule collocation with the 7-point stencils. Same order
    /// of accuracy, but not Hermitian; kept as a cross-check.
    Collocation,
}

/// Diamagnetic term `(1/4) B^2 rho^2 (1 - sin^2(alpha) cos^2(phi))`.
pub fn quadratic_term(b: f64, alpha: f64, rho: f64, phi: f64) -> f64 {
    let s = libm::sin(alpha);
    let c = libm::cos(phi);
    0.25 * b * b * rho * rho * (1.0 - s * s * c * c)
}

/// Potential matrix on the angular grid at radius `rho`:
/// `-2 m_r/rho + (mu_p - mu_e) B cos(alpha) h1 + quadratic term`.
pub fn potential_block(
    config: &PhysicalConfig,
    basis: &AngularBasis,
    rho: f64,
) -> Result<Vec<Complex64>> {
    if !(rho > 0.0) {
        return Err(invalid(
            "rho",
            rho,
            "potential is evaluated at rho > 0 only",
        ));
    }
    let n = basis.n_ang();
    let zeeman = config.zeeman_coefficient();
    let mut v: Vec<Complex64> = if zeeman == 0.0 {
        vec![Complex64::new(0.0, 0.0); n * n]
    } else {
        basis.h1().iter().map(|h| h * zeeman).collect()
    };
    let s2 = config.sin_alpha() * config.sin_alpha();
    let b2 = config.b() * config.b();
    for (j, &phi) in basis.phi().iter().enumerate() {
        let c = libm::cos(phi);
        let quad = 0.25 * b2 * rho * rho * (1.0 - s2 * c * c);
        v[j * n + j] += -2.0 * config.m_r() / rho + quad;
    }
    Ok(v)
}

// Sixth-order first derivative at a midpoint from the nodes k-2..k+3.
const MID_STENCIL: [f64; 6] = [
    -3.0 / 640.0,
    25.0 / 384.0,
    -75.0 / 64.0,
    75.0 / 64.0,
    -25.0 / 384.0,
    3.0 / 640.0,
];
// Midpoint-rule corrections near t = 0 for integrands odd in t.
const MID_CORRECTION: [f64; 3] = [-26279.0 / 241920.0, 4691.0 / 483840.0, -367.0 / 483840.0];
// Nodes used to extrapolate the even function psi/t to t = 0.
const ORIGIN_NODES: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteHamiltonian {
    config: PhysicalConfig,
    grid: RadialGrid,
    basis: AngularBasis,
    scheme: RadialScheme,
    n_rad: usize,
    n_ang: usize,
    half_band: usize,
    // coupling[i * (2hb+1) + hb + d] multiplies the identity block (i, i+d)
    coupling: Vec<f64>,
    diag: Vec<Complex64>,
    weights: Vec<f64>,
}

impl DiscreteHamiltonian {
    pub fn assemble(
        config: &PhysicalConfig,
        grid: &RadialGrid,
        basis: &AngularBasis,
        scheme: RadialScheme,
    ) -> Result<Self> {
        match scheme {
            RadialScheme::Symmetric => Self::assemble_symmetric(config, grid, basis),
            RadialScheme::Collocation => {
                Self::assemble_collocation(config, grid, basis, &DerivativeStencils::new(grid))
            }
        }
    }

    fn empty(
        config: &PhysicalConfig,
        grid: &RadialGrid,
        basis: &AngularBasis,
        scheme: RadialScheme,
        hb: usize,
    ) -> Self {
        let n_rad = grid.n_unknowns();
        let n_ang = basis.n_ang();
        Self {
            config: *config,
            grid: grid.clone(),
            basis: basis.clone(),
            scheme,
            n_rad,
            n_ang,
            half_band: hb,
            coupling: vec![0.0; n_rad * (2 * hb + 1)],
            diag: vec![Complex64::new(0.0, 0.0); n_rad * n_ang * n_ang],
            weights: grid.state_quad()[..n_rad].to_vec(),
        }
    }

    /// Adds `(1/2m_r)(scalar - h0/rho^2 + V(rho))` to the diagonal block of node `i`.
    fn fill_diagonal(&mut self, i: usize, scalar: f64) -> Result<()> {
        let n = self.n_ang;
        let rho = self.grid.rho()[i];
        let v = potential_block(&self.config, &self.basis, rho)?;
        let inv = 0.5 / self.config.m_r();
        let block = &mut self.diag[i * n * n..(i + 1) * n * n];
        for (k, (b, (v, h0))) in block
            .iter_mut()
            .zip(v.iter().zip(self.basis.h0()))
            .enumerate()
        {
            *b = (v - h0 / (rho * rho)) * inv;
            if k % (n + 1) == 0 {
                b.re += scalar * inv;
            }
        }
        Ok(())
    }

    fn assemble_symmetric(
        config: &PhysicalConfig,
        grid: &RadialGrid,
        basis: &AngularBasis,
    ) -> Result<Self> {
        let hb = 5;
        let mut h = Self::empty(config, grid, basis, RadialScheme::Symmetric, hb);
        let n = grid.n();
        let n_rad = h.n_rad;
        let step = grid.step();
        let t = |k: usize| k as f64 * step;

        // g = psi/t at extended node e as a combination of unknowns
        let mut origin = [(0usize, 0.0f64); ORIGIN_NODES];
        for (a, slot) in origin.iter_mut().enumerate() {
            let sa = ((a + 1) * (a + 1)) as f64;
            let mut c = 1.0;
            for b in 0..ORIGIN_NODES {
                if b != a {
                    let sb = ((b + 1) * (b + 1)) as f64;
                    c *= sb / (sb - sa);
                }
            }
            *slot = (a, c / t(a + 1));
        }
        let expand = |e: i64, out: &mut Vec<(usize, f64)>| {
            let e = e.unsigned_abs() as usize;
            if e == 0 {
                out.extend_from_slice(&origin);
            } else if e < n {
                out.push((e - 1, 1.0 / t(e)));
            }
        };

        // symmetric band of the kinetic form, upper part
        let mut s = vec![0.0; n_rad * (hb + 1)];
        let mut terms: Vec<(usize, f64)> = Vec::new();
        let mut row: Vec<(usize, f64)> = Vec::new();
        let scale = 1.0 / (2.0 * grid.rho_max());
        for k in 0..n {
            terms.clear();
            for (o, w) in MID_STENCIL.iter().enumerate() {
                let before = terms.len();
                expand(k as i64 + o as i64 - 2, &mut terms);
                for term in &mut terms[before..] {
                    term.1 *= w / step;
                }
            }
            row.clear();
            for &(u, c) in &terms {
                match row.iter_mut().find(|(v, _)| *v == u) {
                    Some(entry) => entry.1 += c,
                    None => row.push((u, c)),
                }
            }
            let corr = MID_CORRECTION.get(k).copied().unwrap_or(0.0);
            let t_mid = (k as f64 + 0.5) * step;
            let weight = step * (1.0 + corr) * t_mid * scale;
            for &(u, cu) in &row {
                for &(v, cv) in &row {
                    if v >= u {
                        s[u * (hb + 1) + (v - u)] += weight * cu * cv;
                    }
                }
            }
        }

        let inv = 0.5 / config.m_r();
        let width = 2 * hb + 1;
        for i in 0..n_rad {
            let q = h.weights[i];
            for d in 1..=hb {
                if i + d < n_rad {
                    let c = s[i * (hb + 1) + d] * inv;
                    h.coupling[i * width + hb + d] = c / q;
                    h.coupling[(i + d) * width + hb - d] = c / h.weights[i + d];
                }
            }
            h.fill_diagonal(i, s[i * (hb + 1)] / q)?;
        }
        Ok(h)
    }

    /// Chain-rule collocation with caller-supplied stencils.
    pub fn assemble_collocation(
        config: &PhysicalConfig,
        grid: &RadialGrid,
        basis: &AngularBasis,
        stencils: &DerivativeStencils,
    ) -> Result<Self> {
        if stencils.len() != grid.n_unknowns() {
            return Err(Error::DimensionMismatch {
                expected: grid.n_unknowns(),
                found: stencils.len(),
            });
        }
        let n = grid.n();
        let hb = stencils
            .second_rho
            .iter()
            .enumerate()
            .flat_map(|(i, r)| [r.start.abs_diff(i + 1), (r.start + 6).abs_diff(i + 1)])
            .max()
            .unwrap_or(0);
        let mut h = Self::empty(config, grid, basis, RadialScheme::Collocation, hb);
        let width = 2 * hb + 1;
        let inv = 0.5 / config.m_r();
        for (i, row) in stencils.second_rho.iter().enumerate() {
            let node = i + 1;
            let mut centre = 0.0;
            for (o, w) in row.weights.iter().enumerate() {
                let j = row.start + o;
                if j == 0 || j == n {
                    continue;
                }
                if j == node {
                    centre = -w;
                } else {
                    let d = j as i64 - node as i64;
                    h.coupling[i * width + (hb as i64 + d) as usize] = -w * inv;
                }
            }
            let rho = grid.rho()[i];
            h.fill_diagonal(i, centre - 0.25 / (rho * rho))?;
        }
        Ok(h)
    }

    pub fn dim(&self) -> usize {
        self.n_rad * self.n_ang
    }

    /// Radial unknowns per angular channel, `N - 1`.
    pub fn n_rad(&self) -> usize {
        self.n_rad
    }

    pub fn n_ang(&self) -> usize {
        self.n_ang
    }

    /// Largest radial offset coupled by the operator.
    pub fn half_band(&self) -> usize {
        self.half_band
    }

    pub fn scheme(&self) -> RadialScheme {
        self.scheme
    }

    pub fn config(&self) -> &PhysicalConfig {
        &self.config
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn basis(&self) -> &AngularBasis {
        &self.basis
    }

    /// Radial inner-product weights of the unknown nodes.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Scalar multiplying the identity in block `(i, i + d)`, `d != 0`.
    pub fn coupling(&self, i: usize, d: i64) -> f64 {
        let hb = self.half_band as i64;
        if d == 0 || d.abs() > hb {
            return 0.0;
        }
        let j = i as i64 + d;
        if j < 0 || j >= self.n_rad as i64 {
            return 0.0;
        }
        self.coupling[i * (2 * self.half_band + 1) + (hb + d) as usize]
    }

    /// Dense diagonal block of node `i`, row-major `n_ang x n_ang`.
    pub fn diag_block(&self, i: usize) -> &[Complex64] {
        let n2 = self.n_ang * self.n_ang;
        &self.diag[i * n2..(i + 1) * n2]
    }

    /// Largest entry magnitude of the operator.
    pub fn max_abs_entry(&self) -> f64 {
        let d = self.diag.iter().map(|z| z.norm()).fold(0.0, f64::max);
        self.coupling.iter().map(|c| c.abs()).fold(d, f64::max)
    }

    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let mut y = vec![Complex64::new(0.0, 0.0); x.len()];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    /// `y = H x` without size checks.
    pub(crate) fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        let n = self.n_ang;
        let hb = self.half_band;
        let width = 2 * hb + 1;
        for i in 0..self.n_rad {
            let yi = &mut y[i * n..(i + 1) * n];
            AngularBasis::mul(self.diag_block(i), &x[i * n..(i + 1) * n], yi);
            let lo = i.saturating_sub(hb);
            let hi = (i + hb).min(self.n_rad - 1);
            for j in lo..=hi {
                if j == i {
                    continue;
                }
                let c = self.coupling[i * width + hb + j - i];
                if c != 0.0 {
                    for (a, b) in yi.iter_mut().zip(&x[j * n..(j + 1) * n]) {
                        *a += b * c;
                    }
                }
            }
        }
    }

    /// `<u, v> = sum (2 pi / n_ang) q_i conj(u) v`.
    pub fn inner(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let n = self.n_ang;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, q) in self.weights.iter().enumerate() {
            let s: Complex64 = u[i * n..(i + 1) * n]
                .iter()
                .zip(&v[i * n..(i + 1) * n])
                .map(|(a, b)| a.conj() * b)
                .sum();
            acc += s * q;
        }
        acc * self.basis.weight()
    }

    pub fn norm(&self, x: &[Complex64]) -> f64 {
        libm::sqrt(self.inner(x, x).re.max(0.0))
    }
}
