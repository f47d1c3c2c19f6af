//! Block-tridiagonal sweep for `(H - sigma) x = b`.
//!
//! Consecutive radial nodes are grouped into super-blocks as wide as the
//! radial half-bandwidth, which makes the banded operator block-tridiagonal
//! with dense blocks. Forward elimination keeps the LU factors of the
//! modified diagonal blocks `D'_k = A_kk - A_k,k-1 D'_{k-1}^{-1} A_k-1,k`
//! together with `C_k = D'_k^{-1} A_k,k+1`; back substitution then needs
//! only matrix-vector products.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::dense::Lu;
use crate::error::{Error, Result};
use crate::hamiltonian::DiscreteHamiltonian;

/// A shift closer than this (relative to `max(1, |sigma|)`) to an eigenvalue
/// is treated as singular.
pub const SINGULAR_SHIFT: f64 = 1e-10;

/// Residual bound of [`Factorization::solve_refined`], relative to `|b|`.
pub const SOLVE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
struct Block {
    first: usize,
    nodes: usize,
    lu: Lu,
    // C_k, rows of this block by columns of the next one
    upper: Vec<Complex64>,
}

/// Factors of `H - sigma` over the super-block partition.
#[derive(Debug, Clone)]
pub struct Factorization {
    shift: f64,
    n_ang: usize,
    dim: usize,
    blocks: Vec<Block>,
    // A_k,k-1 couplings: lower[i * hb + (d - 1)] couples node i to i - d
    lower: Vec<f64>,
    half_band: usize,
}

impl Factorization {
    /// Factors `H - sigma`. Fails with [`Error::ShiftHitsEigenvalue`] when a
    /// pivot collapses or `sigma` lies within [`SINGULAR_SHIFT`] of an
    /// eigenvalue.
    pub fn new(h: &DiscreteHamiltonian, sigma: f64) -> Result<Self> {
        let f = Self::factor(h, sigma)?;
        f.probe(h)?;
        Ok(f)
    }

    fn factor(h: &DiscreteHamiltonian, sigma: f64) -> Result<Self> {
        let n_ang = h.n_ang();
        let n_rad = h.n_rad();
        let hb = h.half_band().max(1);
        let scale = h.max_abs_entry() + sigma.abs();
        let mut blocks: Vec<Block> = Vec::with_capacity(n_rad.div_ceil(hb));
        let mut first = 0;
        while first < n_rad {
            let nodes = hb.min(n_rad - first);
            let b = nodes * n_ang;
            let mut d = vec![Complex64::new(0.0, 0.0); b * b];
            for a in 0..nodes {
                let i = first + a;
                let block = h.diag_block(i);
                for j in 0..n_ang {
                    let row = &mut d[(a * n_ang + j) * b..(a * n_ang + j + 1) * b];
                    row[a * n_ang..(a + 1) * n_ang]
                        .copy_from_slice(&block[j * n_ang..(j + 1) * n_ang]);
                    row[a * n_ang + j] -= sigma;
                    for ap in 0..nodes {
                        if ap != a {
                            row[ap * n_ang + j] += h.coupling(i, ap as i64 - a as i64);
                        }
                    }
                }
            }
            if let Some(prev) = blocks.last() {
                for a in 0..nodes {
                    let i = first + a;
                    for ap in 0..prev.nodes {
                        let c = h.coupling(i, (prev.first + ap) as i64 - i as i64);
                        if c == 0.0 {
                            continue;
                        }
                        for j in 0..n_ang {
                            let src = &prev.upper[(ap * n_ang + j) * b..(ap * n_ang + j + 1) * b];
                            let dst = &mut d[(a * n_ang + j) * b..(a * n_ang + j + 1) * b];
                            for (x, s) in dst.iter_mut().zip(src) {
                                *x -= s * c;
                            }
                        }
                    }
                }
            }
            let lu = Lu::factor(d, b);
            if !(lu.min_pivot > f64::EPSILON * scale) {
                return Err(Error::ShiftHitsEigenvalue { shift: sigma });
            }
            let next = first + nodes;
            let mut upper = Vec::new();
            if next < n_rad {
                let nn = hb.min(n_rad - next);
                let nb = nn * n_ang;
                upper = vec![Complex64::new(0.0, 0.0); b * nb];
                for a in 0..nodes {
                    let i = first + a;
                    for ap in 0..nn {
                        let c = h.coupling(i, (next + ap) as i64 - i as i64);
                        if c != 0.0 {
                            for j in 0..n_ang {
                                upper[(a * n_ang + j) * nb + ap * n_ang + j] =
                                    Complex64::new(c, 0.0);
                            }
                        }
                    }
                }
                lu.solve_many(&mut upper, nb);
            }
            blocks.push(Block {
                first,
                nodes,
                lu,
                upper,
            });
            first = next;
        }

        let mut lower = vec![0.0; n_rad * hb];
        for i in 0..n_rad {
            for d in 1..=hb {
                lower[i * hb + d - 1] = h.coupling(i, -(d as i64));
            }
        }
        Ok(Self {
            shift: sigma,
            n_ang,
            dim: h.dim(),
            blocks,
            lower,
            half_band: hb,
        })
    }

    /// Inverse-Rayleigh estimate of the distance from `sigma` to the nearest
    /// eigenvalue, from one solve with a fixed vector.
    fn probe(&self, h: &DiscreteHamiltonian) -> Result<()> {
        let b = seeded_vector(0x5eed, self.dim);
        let x = self.solve(&b)?;
        let xx = h.inner(&x, &x).re;
        let distance = h.inner(&x, &b).norm() / xx;
        if !xx.is_finite() || !(distance > SINGULAR_SHIFT * self.shift.abs().max(1.0)) {
            return Err(Error::ShiftHitsEigenvalue { shift: self.shift });
        }
        Ok(())
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of super-blocks in the sweep.
    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Solves `(H - sigma) x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        if b.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: b.len(),
            });
        }
        let n = self.n_ang;
        let hb = self.half_band;
        let mut y = b.to_vec();
        for (k, blk) in self.blocks.iter().enumerate() {
            let lo = blk.first * n;
            if k > 0 {
                let prev = &self.blocks[k - 1];
                for a in 0..blk.nodes {
                    let i = blk.first + a;
                    for d in a + 1..=hb {
                        let Some(ip) = i.checked_sub(d) else { break };
                        if ip < prev.first {
                            break;
                        }
                        let c = self.lower[i * hb + d - 1];
                        if c != 0.0 {
                            let (head, tail) = y.split_at_mut(i * n);
                            for (t, s) in tail[..n].iter_mut().zip(&head[ip * n..(ip + 1) * n]) {
                                *t -= s * c;
                            }
                        }
                    }
                }
            }
            blk.lu.solve(&mut y[lo..lo + blk.nodes * n]);
        }
        for k in (0..self.blocks.len().saturating_sub(1)).rev() {
            let blk = &self.blocks[k];
            let next = &self.blocks[k + 1];
            let nb = next.nodes * n;
            let (head, tail) = y.split_at_mut(next.first * n);
            let xn = &tail[..nb];
            let lo = blk.first * n;
            for (r, yr) in head[lo..lo + blk.nodes * n].iter_mut().enumerate() {
                let row = &blk.upper[r * nb..(r + 1) * nb];
                let s: Complex64 = row.iter().zip(xn).map(|(c, x)| c * x).sum();
                *yr -= s;
            }
        }
        Ok(y)
    }

    /// Solves and applies one step of iterative refinement when the residual
    /// exceeds `SOLVE_TOLERANCE |b|`. Returns the solution and the final
    /// relative residual.
    pub fn solve_refined(
        &self,
        h: &DiscreteHamiltonian,
        b: &[Complex64],
    ) -> Result<(Vec<Complex64>, f64)> {
        let mut x = self.solve(b)?;
        let bnorm = euclid(b).max(f64::MIN_POSITIVE);
        let mut r = self.residual(h, &x, b);
        let mut rel = euclid(&r) / bnorm;
        if rel > SOLVE_TOLERANCE {
            let dx = self.solve(&r)?;
            for (a, d) in x.iter_mut().zip(dx) {
                *a += d;
            }
            r = self.residual(h, &x, b);
            rel = euclid(&r) / bnorm;
        }
        Ok((x, rel))
    }

    /// `b - (H - sigma) x`.
    fn residual(
        &self,
        h: &DiscreteHamiltonian,
        x: &[Complex64],
        b: &[Complex64],
    ) -> Vec<Complex64> {
        let mut hx = vec![Complex64::new(0.0, 0.0); x.len()];
        h.apply_into(x, &mut hx);
        b.iter()
            .zip(hx.iter().zip(x))
            .map(|(b, (hx, x))| b - (hx - x * self.shift))
            .collect()
    }
}

/// Deterministic complex vector with entries uniform in `[-1/2, 1/2)^2`.
pub(crate) fn seeded_vector(seed: u64, len: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
    (0..len).map(|_| Complex64::new(u(), u())).collect()
}

pub(crate) fn euclid(x: &[Complex64]) -> f64 {
    libm::sqrt(x.iter().map(|z| z.norm_sqr()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::AngularBasis;
    use crate::hamiltonian::RadialScheme;
    use crate::params::{MassMode, PhysicalConfig};
    use crate::radial::RadialGrid;

    fn random(seed: u64, n: usize) -> Vec<Complex64> {
        seeded_vector(seed, n)
    }

    fn hamiltonian(
        b: f64,
        alpha: f64,
        m: usize,
        n: usize,
        rho: f64,
        scheme: RadialScheme,
    ) -> DiscreteHamiltonian {
        let c = PhysicalConfig::new(b, alpha, MassMode::InfiniteProton).unwrap();
        let g = RadialGrid::new(n, rho).unwrap();
        DiscreteHamiltonian::assemble(&c, &g, &AngularBasis::new(m), scheme).unwrap()
    }

    #[test]
    fn solve_meets_residual_contract() {
        for (scheme, m, b, alpha) in [
            (RadialScheme::Symmetric, 0, 0.0, 0.0),
            (RadialScheme::Symmetric, 3, 4.0, 0.7),
            (RadialScheme::Collocation, 2, 1.0, 0.3),
        ] {
            let h = hamiltonian(b, alpha, m, 400, 40.0, scheme);
            let f = Factorization::new(&h, -2.1).unwrap();
            let rhs = random(5, h.dim());
            let (_, rel) = f.solve_refined(&h, &rhs).unwrap();
            assert!(rel <= SOLVE_TOLERANCE, "{scheme:?}: {rel}");
        }
    }

    #[test]
    fn round_trip_recovers_known_solution() {
        let h = hamiltonian(1.5, 1.0, 4, 200, 30.0, RadialScheme::Symmetric);
        let sigma = -2.3;
        let f = Factorization::new(&h, sigma).unwrap();
        let x0 = random(9, h.dim());
        let hx = h.apply(&x0).unwrap();
        let b: Vec<Complex64> = hx.iter().zip(&x0).map(|(a, x)| a - x * sigma).collect();
        let x = f.solve(&b).unwrap();
        let err: Vec<Complex64> = x.iter().zip(&x0).map(|(a, b)| a - b).collect();
        assert!(
            euclid(&err) <= 1e-8 * euclid(&x0),
            "{}",
            euclid(&err) / euclid(&x0)
        );
    }

    #[test]
    fn exact_eigenvalue_is_rejected() {
        let h = hamiltonian(0.0, 0.0, 0, 2000, 40.0, RadialScheme::Symmetric);
        assert!(matches!(
            Factorization::new(&h, -2.0),
            Err(Error::ShiftHitsEigenvalue { .. })
        ));
        assert!(Factorization::new(&h, -2.0 - 1e-6 * 2.0).is_ok());
    }

    #[test]
    fn block_count() {
        let h = hamiltonian(0.0, 0.0, 1, 30, 10.0, RadialScheme::Symmetric);
        let f = Factorization::new(&h, -3.0).unwrap();
        assert_eq!(f.n_blocks(), 29usize.div_ceil(5));
        assert!(f.solve(&[Complex64::new(0.0, 0.0)]).is_err());
    }
}
