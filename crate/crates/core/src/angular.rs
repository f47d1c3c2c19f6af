//! Fourier discrete-variable representation on a uniform angular grid.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

/// Angular grid `phi_j = 2 pi j / (2M+1)` with the transforms between grid
/// samples and Fourier coefficients, and the grid matrices of `d^2/dphi^2`
/// (`h0`) and `L_z` (`h1`). Matrices are row-major `n_ang x n_ang`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularBasis {
    m_max: usize,
    phi: Vec<f64>,
    xi: Vec<Complex64>,
    xi_inv: Vec<Complex64>,
    h0: Vec<Complex64>,
    h1: Vec<Complex64>,
}

impl AngularBasis {
    pub fn new(m_max: usize) -> Self {
        let n = 2 * m_max + 1;
        let phi: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        let m_of = |k: usize| k as i64 - m_max as i64;
        let sqrt_2pi = libm::sqrt(2.0 * PI);

        // xi[j][k] = (-1)^m e^{i m phi_j} / sqrt(2 pi), column k holds m = k - M
        let mut xi = vec![Complex64::new(0.0, 0.0); n * n];
        let mut xi_inv = vec![Complex64::new(0.0, 0.0); n * n];
        for (j, &p) in phi.iter().enumerate() {
            for k in 0..n {
                let m = m_of(k);
                let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let e = Complex64::from_polar(1.0, m as f64 * p);
                xi[j * n + k] = e * (sign / sqrt_2pi);
                // xi_inv[m][j] = sqrt(2 pi)/(2M+1) e^{-i m (phi_j - pi)}
                xi_inv[k * n + j] = e.conj() * (sign * sqrt_2pi / n as f64);
            }
        }

        // sum_m xi[j][m] f(m) xi_inv[m][j'] = (1/n) sum_m f(m) e^{2 pi i m (j - j') / n},
        // with the phase index reduced mod n so every exponential is exact to
        // rounding
        let spectral = |f: &dyn Fn(i64) -> f64| {
            let unit: Vec<Complex64> = (0..n)
                .map(|r| Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64))
                .collect();
            let mut out = vec![Complex64::new(0.0, 0.0); n * n];
            for j in 0..n {
                for jp in 0..n {
                    let d = j as i64 - jp as i64;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        let m = m_of(k);
                        acc += unit[(m * d).rem_euclid(n as i64) as usize] * f(m);
                    }
                    out[j * n + jp] = acc / n as f64;
                }
            }
            hermitize(&mut out, n);
            out
        };
        let h0 = spectral(&|m| -((m * m) as f64));
        let mut h1 = spectral(&|m| m as f64);
        for j in 0..n {
            h1[j * n + j] = Complex64::new(0.0, 0.0);
        }
        Self {
            m_max,
            phi,
            xi,
            xi_inv,
            h0,
            h1,
        }
    }

    /// Truncation index `M`.
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// Grid size `2M + 1`.
    pub fn n_ang(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Quadrature weight of each grid angle, `2 pi / (2M+1)`.
    pub fn weight(&self) -> f64 {
        2.0 * PI / self.n_ang() as f64
    }

    pub fn xi(&self) -> &[Complex64] {
        &self.xi
    }

    pub fn xi_inv(&self) -> &[Complex64] {
        &self.xi_inv
    }

    pub fn h0(&self) -> &[Complex64] {
        &self.h0
    }

    pub fn h1(&self) -> &[Complex64] {
        &self.h1
    }

    /// Grid samples of `e^{i m phi}`.
    pub fn channel_samples(&self, m: i64) -> Vec<Complex64> {
        self.phi
            .iter()
            .map(|&p| Complex64::from_polar(1.0, m as f64 * p))
            .collect()
    }

    /// Fourier coefficients `c_m = sum_j xi_inv[m][j] f_j`, indexed by `m + M`.
    pub fn to_fourier(&self, samples: &[Complex64]) -> Vec<Complex64> {
        let n = self.n_ang();
        (0..n)
            .map(|k| (0..n).map(|j| self.xi_inv[k * n + j] * samples[j]).sum())
            .collect()
    }

    /// Trigonometric interpolation `sum_m c_m xi_m(phi)` of Fourier coefficients.
    pub fn evaluate(&self, coefficients: &[Complex64], phi: f64) -> Complex64 {
        let sqrt_2pi = libm::sqrt(2.0 * PI);
        let m0 = self.m_max as i64;
        coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let m = k as i64 - m0;
                let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                c * Complex64::from_polar(sign / sqrt_2pi, m as f64 * phi)
            })
            .sum()
    }

    /// Removes every Fourier component of the grid samples except `m`.
    pub fn project_channel(&self, samples: &mut [Complex64], m: i64) {
        let n = self.n_ang() as f64;
        let e = self.channel_samples(m);
        let c: Complex64 = e
            .iter()
            .zip(samples.iter())
            .map(|(e, s)| e.conj() * s)
            .sum::<Complex64>()
            / n;
        for (s, e) in samples.iter_mut().zip(e) {
            *s = c * e;
        }
    }

    /// `out = mat * x` for one of the grid matrices.
    pub fn mul(mat: &[Complex64], x: &[Complex64], out: &mut [Complex64]) {
        let n = x.len();
        for (j, o) in out.iter_mut().enumerate() {
            *o = mat[j * n..(j + 1) * n]
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum();
        }
    }
}

/// Replaces `a` by `(a + a^H) / 2`.
fn hermitize(a: &mut [Complex64], n: usize) {
    for j in 0..n {
        a[j * n + j].im = 0.0;
        for k in j + 1..n {
            let v = (a[j * n + k] + a[k * n + j].conj()) * 0.5;
            a[j * n + k] = v;
            a[k * n + j] = v.conj();
        }
    }
}
