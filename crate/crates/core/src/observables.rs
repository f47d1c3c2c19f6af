//! Quantities evaluated from a discrete state: norm, `<L_z>`, dipole
//! elements, second moments and Cartesian fields.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::angular::AngularBasis;
use crate::error::{invalid, Error, Result};
use crate::hamiltonian::quadratic_term;
use crate::radial::{fd_weights, RadialGrid};

/// Radius below which [`potential_surface`] clamps the Coulomb term.
pub const COULOMB_CLAMP: f64 = 1e-3;

// Points used by the radial interpolation in `t`.
const INTERP_POINTS: usize = 6;

/// Samples `psi_j(rho_i) = sqrt(rho_i) Psi(rho_i, phi_j)` on the unknown
/// nodes, in the layout of the Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    samples: Vec<Complex64>,
    grid: RadialGrid,
    basis: AngularBasis,
    normalized: bool,
}

impl Wavefunction {
    pub fn new(samples: Vec<Complex64>, grid: RadialGrid, basis: AngularBasis) -> Result<Self> {
        let expected = grid.n_unknowns() * basis.n_ang();
        if samples.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: samples.len(),
            });
        }
        Ok(Self {
            samples,
            grid,
            basis,
            normalized: false,
        })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn basis(&self) -> &AngularBasis {
        &self.basis
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    fn n_ang(&self) -> usize {
        self.basis.n_ang()
    }

    /// Quadrature sum `sum_ij w q_i f(i, j) conj(a_ij) b_ij`.
    fn form(&self, a: &[Complex64], b: &[Complex64], f: impl Fn(usize, usize) -> f64) -> Complex64 {
        let n = self.n_ang();
        let q = self.grid.state_quad();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.grid.n_unknowns() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                s += a[i * n + j].conj() * b[i * n + j] * f(i, j);
            }
            acc += s * q[i];
        }
        acc * self.basis.weight()
    }

    /// `<Psi|Psi>`; the factors `sqrt(rho)` and the area element cancel.
    pub fn norm_squared(&self) -> f64 {
        self.form(&self.samples, &self.samples, |_, _| 1.0).re
    }

    /// Unit norm, with the largest-magnitude sample made real and positive.
    pub fn normalize(mut self) -> Result<Self> {
        let norm = libm::sqrt(self.norm_squared());
        let peak = self
            .samples
            .iter()
            .copied()
            .reduce(|best, z| if z.norm() > best.norm() { z } else { best })
            .unwrap_or_default();
        if !(norm > 0.0) || !norm.is_finite() || peak.norm() == 0.0 {
            return Err(Error::ZeroVector);
        }
        let scale = peak.conj() / (peak.norm() * norm);
        for z in &mut self.samples {
            *z *= scale;
        }
        self.normalized = true;
        Ok(self)
    }

    /// `<L_z>` from the grid representation of `-i d/dphi`, applied node by node.
    pub fn lz_expectation(&self) -> f64 {
        let n = self.n_ang();
        let q = self.grid.state_quad();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.samples.chunks_exact(n).zip(q) {
            AngularBasis::mul(self.basis.h1(), x, &mut out);
            let s: Complex64 = x.iter().zip(&out).map(|(a, b)| a.conj() * b).sum();
            acc += s * w;
        }
        // h1 is Hermitian, so the imaginary part is round-off
        acc.re * self.basis.weight()
    }

    /// `(<x^2>, <y^2>)` with `x = rho cos(phi)`, `y = rho sin(phi)`.
    pub fn second_moments(&self) -> (f64, f64) {
        let rho = self.grid.rho();
        let phi = self.basis.phi();
        let x2 = self.form(&self.samples, &self.samples, |i, j| {
            let c = rho[i] * libm::cos(phi[j]);
            c * c
        });
        let y2 = self.form(&self.samples, &self.samples, |i, j| {
            let s = rho[i] * libm::sin(phi[j]);
            s * s
        });
        (x2.re, y2.re)
    }

    /// `|Psi(x, y)|^2` at arbitrary points. Angular dependence is the
    /// trigonometric interpolant of the grid samples; radially `psi` is
    /// interpolated in `t` by a 6-point polynomial, odd about `t = 0`. Points
    /// beyond the box radius give zero.
    pub fn density_at(&self, points: &[(f64, f64)]) -> Vec<f64> {
        let mut f = self.density_sampler();
        points.iter().map(|&(x, y)| f(x, y)).collect()
    }

    /// [`Self::density_at`] on a centred square grid with `resolution`
    /// points per side.
    pub fn density_cartesian(&self, half_extent: f64, resolution: usize) -> Result<Field2D> {
        if resolution < 2 {
            return Err(invalid(
                "resolution",
                resolution as f64,
                "at least 2 points per side",
            ));
        }
        if !(half_extent > 0.0) || !half_extent.is_finite() {
            return Err(invalid(
                "half_extent",
                half_extent,
                "must be positive and finite",
            ));
        }
        let f = self.density_sampler();
        Ok(Field2D::tabulate(
            -half_extent,
            half_extent,
            -half_extent,
            half_extent,
            resolution,
            resolution,
            f,
        ))
    }

    fn density_sampler(&self) -> impl FnMut(f64, f64) -> f64 + '_ {
        let n = self.n_ang();
        let n_rad = self.grid.n();
        let h = self.grid.step();
        let rho_max = self.grid.rho_max();
        // Fourier coefficients at nodes 0..=N; the end nodes vanish
        let mut fourier = vec![vec![Complex64::new(0.0, 0.0); n]; n_rad + 1];
        for (k, c) in fourier.iter_mut().enumerate().take(n_rad).skip(1) {
            *c = self.basis.to_fourier(&self.samples[(k - 1) * n..k * n]);
        }
        let scale = 1.0 / libm::sqrt(rho_max);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        move |x, y| {
            let rho = libm::hypot(x, y);
            if rho > rho_max {
                return 0.0;
            }
            let t = libm::sqrt(rho / rho_max);
            let k0 = libm::floor(t / h) as i64;
            let start = (k0 - 2).min(n_rad as i64 + 1 - INTERP_POINTS as i64);
            let nodes: Vec<f64> = (0..INTERP_POINTS)
                .map(|a| (start + a as i64) as f64 * h)
                .collect();
            // psi(t)/t: interpolation divided by t, or the slope at the origin
            let near_origin = t < 1e-3 * h;
            let w = fd_weights(t, &nodes, 1);
            let w = if near_origin { &w[1] } else { &w[0] };
            coeffs
                .iter_mut()
                .for_each(|c| *c = Complex64::new(0.0, 0.0));
            for (a, wa) in w.iter().enumerate() {
                let k = start + a as i64;
                let sign = if k < 0 { -1.0 } else { 1.0 };
                for (c, v) in coeffs.iter_mut().zip(&fourier[k.unsigned_abs() as usize]) {
                    *c += v * (sign * wa);
                }
            }
            let g = if near_origin { 1.0 } else { 1.0 / t };
            let psi = self.basis.evaluate(&coeffs, libm::atan2(y, x)) * (g * scale);
            psi.norm_sqr()
        }
    }
}

/// `2 |<b| rho cos(phi) |a>|`. For states of sharp `l` this is the circular
/// component `|<b| rho e^{i phi} |a>|` of the transition dipole.
pub fn dipole_element(a: &Wavefunction, b: &Wavefunction) -> Result<f64> {
    if a.grid != b.grid || a.basis.m_max() != b.basis.m_max() {
        return Err(Error::GridMismatch);
    }
    let rho = a.grid.rho();
    let phi = a.basis.phi();
    let z = a.form(&b.samples, &a.samples, |i, j| rho[i] * libm::cos(phi[j]));
    Ok(2.0 * z.norm())
}

/// `U = -1/rho + (1/4) B^2 rho^2 (1 - sin^2(alpha) cos^2(phi))` on a centred
/// square grid, with `rho` clamped to [`COULOMB_CLAMP`] in the Coulomb term.
pub fn potential_surface(
    b: f64,
    alpha: f64,
    half_extent: f64,
    resolution: usize,
) -> Result<Field2D> {
    if resolution < 2 {
        return Err(invalid(
            "resolution",
            resolution as f64,
            "at least 2 points per side",
        ));
    }
    if !(half_extent > 0.0) || !half_extent.is_finite() {
        return Err(invalid(
            "half_extent",
            half_extent,
            "must be positive and finite",
        ));
    }
    Ok(Field2D::tabulate(
        -half_extent,
        half_extent,
        -half_extent,
        half_extent,
        resolution,
        resolution,
        |x, y| {
            let rho = libm::hypot(x, y);
            -1.0 / rho.max(COULOMB_CLAMP) + quadratic_term(b, alpha, rho, libm::atan2(y, x))
        },
    ))
}

/// Scalar field on a rectangular grid, row-major with `y` increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl Field2D {
    fn tabulate(
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        nx: usize,
        ny: usize,
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> Self {
        let mut field = Self {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
            values: Vec::with_capacity(nx * ny),
        };
        for iy in 0..ny {
            let y = field.y(iy);
            for ix in 0..nx {
                field.values.push(f(field.x(ix), y));
            }
        }
        field
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.x_min + (self.x_max - self.x_min) * ix as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.y_min + (self.y_max - self.y_min) * iy as f64 / (self.ny - 1) as f64
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    /// Cell sum times cell area.
    pub fn integrate(&self) -> f64 {
        let dx = (self.x_max - self.x_min) / (self.nx - 1) as f64;
        let dy = (self.y_max - self.y_min) / (self.ny - 1) as f64;
        self.values.iter().sum::<f64>() * dx * dy
    }
}
