//! Closed-form reference quantities: zero-field spectrum, field asymptotes,
//! radial eigenfunctions, the dipole oracle and quasi-exact states.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{invalid, Result};

pub mod tables;

/// Zero-field level `n >= 1`: `-2 m_r / (2n - 1)^2`.
pub fn analytic_energy(n: u32, m_r: f64) -> Result<f64> {
    if n < 1 {
        return Err(invalid("n", n as f64, "level index starts at 1"));
    }
    let d = 2.0 * n as f64 - 1.0;
    Ok(-2.0 * m_r / (d * d))
}

/// Two-term weak-field expansion of the ground energy. Not exact: the next
/// correction is of order `B^4`.
pub fn weak_field_energy(b: f64, m_r: f64) -> f64 {
    -2.0 * m_r + 3.0 / (64.0 * m_r * m_r * m_r) * b * b
}

/// Strong-field (Landau + first order Coulomb) ground energy, `B > 0`.
pub fn strong_field_energy(b: f64, m_r: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(invalid("B", b, "strong-field asymptote needs B > 0"));
    }
    Ok(b / (2.0 * m_r) - libm::sqrt(PI * b / 2.0))
}

/// Generalized Laguerre polynomial `L_k^(a)(x)` by the three-term recurrence.
pub fn laguerre(k: usize, a: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + a - x) * cur - (jf + a) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Unnormalized zero-field radial function of level `n`, orbital number `l`
/// (infinite proton mass): `rho^|l| e^{-k rho} L_{n-|l|-1}^{(2|l|)}(2 k rho)`,
/// `k = 2/(2n-1)`.
pub fn hydrogen_radial_shape(n: u32, l: i32, rho: f64) -> f64 {
    let s = l.unsigned_abs() as usize;
    let kappa = 2.0 / (2.0 * n as f64 - 1.0);
    let k = n as usize - s - 1;
    libm::pow(rho, s as f64)
        * libm::exp(-kappa * rho)
        * laguerre(k, 2.0 * s as f64, 2.0 * kappa * rho)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                z
            } else {
                p1
            };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite Gauss-Legendre integral of `f` over `[0, upper]`.
fn integrate_half_line(upper: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre(20);
    let width = upper / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = p as f64 * width;
        for (xi, wi) in x.iter().zip(&w) {
            total += wi * f(a + 0.5 * width * (xi + 1.0));
        }
    }
    0.5 * width * total
}

/// Zero-field dipole element between the ground state and level `n`, `l = 1`:
/// the radial integral `int R_{n,1} R_{1,0} rho^2 drho` with both radial
/// functions normalized as `int R^2 rho drho = 1`. This is the circular
/// component `|<n,1| rho e^{i phi} |1,0>|`, which equals twice the Cartesian
/// element `|<n,1| rho cos(phi) |1,0>|`.
pub fn analytic_dipole_oracle(n: u32) -> Result<f64> {
    if !(2..=5).contains(&n) {
        return Err(invalid(
            "n",
            n as f64,
            "dipole oracle is validated for n in 2..=5",
        ));
    }
    let upper = 60.0 * (2.0 * n as f64 - 1.0);
    let panels = upper as usize;
    let norm = |n: u32, l: i32| {
        libm::sqrt(integrate_half_line(upper, panels, |r| {
            let v = hydrogen_radial_shape(n, l, r);
            v * v * r
        }))
    };
    let (na, nb) = (norm(n, 1), norm(1, 0));
    let overlap = integrate_half_line(upper, panels, |r| {
        hydrogen_radial_shape(n, 1, r) * hydrogen_radial_shape(1, 0, r) * r * r
    });
    Ok((overlap / (na * nb)).abs())
}

/// A quasi-exactly solvable state at a discrete field value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiExact {
    /// Number of terms in the terminating series (polynomial degree + 1).
    pub order: u32,
    pub l: i32,
    /// Field at which the polynomial series terminates.
    pub b: f64,
    /// `(B/2)(order + |l| + l)`.
    pub energy: f64,
}

/// Series coefficient `a_{K+1}(w)` and its `w`-derivative for the ansatz
/// `rho^s e^{-w rho^2/2} sum_k a_k rho^k`, `a_0 = 1`, with the energy fixed so
/// the series would stop at degree `K`.
fn termination_residual(k_deg: usize, s: usize, w: f64) -> (f64, f64) {
    // (k+1)(k+2s+1) a_{k+1} = -2 a_k - 2w(K+1-k) a_{k-1}
    let (mut am1, mut a0) = (0.0_f64, 1.0_f64);
    let (mut dm1, mut d0) = (0.0_f64, 0.0_f64);
    for k in 0..=k_deg {
        let kf = k as f64;
        let denom = (kf + 1.0) * (kf + 2.0 * s as f64 + 1.0);
        let c = 2.0 * (k_deg as f64 + 1.0 - kf);
        let a1 = (-2.0 * a0 - w * c * am1) / denom;
        let d1 = (-2.0 * d0 - c * am1 - w * c * dm1) / denom;
        am1 = a0;
        a0 = a1;
        dm1 = d0;
        d0 = d1;
    }
    (a0, d0)
}

/// Refines `b_guess` to the nearest field at which a state with orbital
/// number `l` is quasi-exact with a series of `order` terms (infinite proton
/// mass, perpendicular field). The energy is then `(B/2)(order + |l| + l)`.
///
/// The level label `n` of a tabulated state is not the series order in
/// general; [`series_order`] recovers the order from a tabulated `(B, E)`.
pub fn quasi_exact_state(order: u32, l: i32, b_guess: f64) -> Result<QuasiExact> {
    if order < 2 {
        return Err(invalid(
            "order",
            order as f64,
            "quasi-exact states need order >= 2",
        ));
    }
    if !(b_guess > 0.0) {
        return Err(invalid("B", b_guess, "field guess must be positive"));
    }
    let k_deg = order as usize - 1;
    let s = l.unsigned_abs() as usize;
    let f = |w: f64| termination_residual(k_deg, s, w).0;
    // Bracket the root nearest the guess, then polish with Newton.
    let w0 = 0.5 * b_guess;
    let mut bracket = None;
    let mut inner = 0.0;
    'scan: for step in 1..=300 {
        let outer = w0 * 1e-7 * libm::pow(1.06, step as f64);
        for (lo, hi) in [(w0 - outer, w0 - inner), (w0 + inner, w0 + outer)] {
            if lo > 0.0 && f(lo) * f(hi) <= 0.0 {
                bracket = Some((lo, hi));
                break 'scan;
            }
        }
        inner = outer;
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Err(invalid("B", b_guess, "no quasi-exact field near the guess"));
    };
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut w = 0.5 * (lo + hi);
    for _ in 0..3 {
        let (f, df) = termination_residual(k_deg, s, w);
        let next = w - f / df;
        if !(next >= lo && next <= hi) {
            break;
        }
        w = next;
    }
    let energy = w * (order as f64 + s as f64 + l as f64);
    Ok(QuasiExact {
        order,
        l,
        b: 2.0 * w,
        energy,
    })
}

/// If the tabulated field is the 7-decimal rendering (rounded or truncated)
/// of a quasi-exact root, returns that exact state. Rows whose field is not
/// such a rendering were computed at the field as printed.
pub fn quasi_exact_match(row: &tables::QuasiExactRow) -> Option<QuasiExact> {
    let order = series_order(row.l, row.b, row.energy);
    let q = quasi_exact_state(order, row.l, row.b).ok()?;
    let scaled = q.b * 1e7;
    let renders = [libm::round(scaled), libm::trunc(scaled)]
        .iter()
        .any(|r| (r * 1e-7 - row.b).abs() < 1e-12);
    renders.then_some(q)
}

/// Series order of a tabulated quasi-exact state, `2E/B - |l| - l` rounded.
pub fn series_order(l: i32, b: f64, energy: f64) -> u32 {
    let k = libm::round(2.0 * energy / b) as i64 - l.abs() as i64 - l as i64;
    k.max(0) as u32
}
