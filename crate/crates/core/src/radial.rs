//! Quadratically mapped radial grid `rho = rho_N t^2`, quadrature weights and
//! finite-difference stencils in the uniform coordinate `t`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};

/// Smallest admissible number of radial intervals.
pub const MIN_NODES: usize = 14;

/// Fornberg's recursion: weights `c[d][i]` of the `d`-th derivative at `z`
/// from values at the nodes `x`, for `d = 0..=order`.
pub fn fd_weights(z: f64, x: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Mapped nodes `rho_j = rho_max (j/n)^2` for `j = 1..=n`.
pub fn map_nodes(n: usize, rho_max: f64) -> Vec<f64> {
    (1..=n)
        .map(|j| {
            let t = j as f64 / n as f64;
            rho_max * t * t
        })
        .collect()
}

/// Default box radius for field `b`: `40 / max(1, sqrt(b))`.
pub fn default_box_radius(b: f64) -> f64 {
    40.0 / libm::sqrt(b).max(1.0)
}

// Trapezoid end corrections (in units of h). LEFT_ODD makes the rule exact on
// t, t^3, t^5; products of two states times the Jacobian are always odd in t,
// so this set is used for every state integral. LEFT_ANY is exact on t..t^5
// regardless of parity, for general integrands.
const LEFT_ODD: [f64; 3] = [7843.0 / 60480.0, -211.0 / 7560.0, 191.0 / 60480.0];
const LEFT_ANY: [f64; 5] = [
    23719.0 / 60480.0,
    -11371.0 / 30240.0,
    7381.0 / 30240.0,
    -5449.0 / 60480.0,
    863.0 / 60480.0,
];
const RIGHT_WEIGHTS: [f64; 6] = [
    19087.0 / 60480.0,
    84199.0 / 60480.0,
    18869.0 / 30240.0,
    37621.0 / 30240.0,
    55031.0 / 60480.0,
    61343.0 / 60480.0,
];

/// Radial grid with nodes `t_j = j/N`, `j = 1..=N`. The state vanishes at
/// `t = 0` and at `t = 1`, so only nodes `1..N-1` carry unknowns.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    n: usize,
    rho_max: f64,
    t: Vec<f64>,
    rho: Vec<f64>,
    jac: Vec<f64>,
    quad: Vec<f64>,
    state_quad: Vec<f64>,
}

impl RadialGrid {
    pub fn new(n: usize, rho_max: f64) -> Result<Self> {
        if n < MIN_NODES {
            return Err(invalid(
                "N",
                n as f64,
                "at least 14 radial intervals are required",
            ));
        }
        if !(rho_max > 0.0) || !rho_max.is_finite() {
            return Err(invalid(
                "rho_N",
                rho_max,
                "box radius must be positive and finite",
            ));
        }
        let h = 1.0 / n as f64;
        let t: Vec<f64> = (1..=n).map(|j| j as f64 * h).collect();
        let rho = map_nodes(n, rho_max);
        let jac: Vec<f64> = t.iter().map(|t| 2.0 * rho_max * t).collect();
        let weights = |left: &[f64]| -> Vec<f64> {
            let mut w = vec![h; n];
            for (w, c) in w.iter_mut().zip(left) {
                *w = h * (1.0 + c);
            }
            for (k, c) in RIGHT_WEIGHTS.iter().enumerate() {
                w[n - 1 - k] = h * c;
            }
            w.iter().zip(&jac).map(|(w, j)| w * j).collect()
        };
        let quad = weights(&LEFT_ANY);
        let state_quad = weights(&LEFT_ODD);
        Ok(Self {
            n,
            rho_max,
            t,
            rho,
            jac,
            quad,
            state_quad,
        })
    }

    /// Number of intervals `N` (nodes `1..=N`).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of interior nodes carrying unknowns, `N - 1`.
    pub fn n_unknowns(&self) -> usize {
        self.n - 1
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    pub fn step(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// `t_j` for `j = 1..=N` (index `j - 1`).
    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    /// `d rho / d t = 2 rho_N t` at the nodes.
    pub fn jac(&self) -> &[f64] {
        &self.jac
    }

    /// Weights `q_j` for `int_0^{rho_N} f(rho) drho ~ sum q_j f(rho_j)`,
    /// exact when `f(rho(t)) jac(t)` is a polynomial in `t` of degree <= 5.
    pub fn quad(&self) -> &[f64] {
        &self.quad
    }

    /// Weights for integrands odd in `t`, which includes `f(rho)` smooth in
    /// `rho` and every product of two states. Norms, matrix elements and the
    /// Hamiltonian all use these.
    pub fn state_quad(&self) -> &[f64] {
        &self.state_quad
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.quad
            .iter()
            .zip(&self.rho)
            .map(|(q, r)| q * f(*r))
            .sum()
    }
}

/// One 7-point stencil row on the nodes `start..start+7` of the full node
/// set `0..=N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilRow {
    pub start: usize,
    pub weights: [f64; 7],
}

impl StencilRow {
    /// Applies the row to values given at nodes `0..=N`.
    pub fn apply(&self, values: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(&values[self.start..self.start + 7])
            .map(|(w, v)| w * v)
            .sum()
    }
}

/// Seven-point derivative rows for the interior nodes `1..=N-1`: central
/// where the window fits, one-sided otherwise. Values at `t = 0` and `t = 1`
/// are zero for states, so those columns drop out of the operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeStencils {
    /// `d/dt`.
    pub first: Vec<StencilRow>,
    /// `d^2/dt^2`.
    pub second: Vec<StencilRow>,
    /// `d^2/drho^2 = jac^-2 d^2/dt^2 - jac' jac^-3 d/dt`.
    pub second_rho: Vec<StencilRow>,
}

impl DerivativeStencils {
    pub fn new(grid: &RadialGrid) -> Self {
        let n = grid.n();
        let h = grid.step();
        let jac_prime = 2.0 * grid.rho_max();
        let mut first = Vec::with_capacity(n - 1);
        let mut second = Vec::with_capacity(n - 1);
        let mut second_rho = Vec::with_capacity(n - 1);
        for k in 1..n {
            let start = k.saturating_sub(3).min(n - 6);
            let x: Vec<f64> = (start..start + 7).map(|j| j as f64 * h).collect();
            let c = fd_weights(k as f64 * h, &x, 2);
            let mut w1 = [0.0; 7];
            let mut w2 = [0.0; 7];
            w1.copy_from_slice(&c[1]);
            w2.copy_from_slice(&c[2]);
            let jac = grid.jac()[k - 1];
            let mut wr = [0.0; 7];
            for i in 0..7 {
                wr[i] = w2[i] / (jac * jac) - jac_prime / (jac * jac * jac) * w1[i];
            }
            first.push(StencilRow { start, weights: w1 });
            second.push(StencilRow { start, weights: w2 });
            second_rho.push(StencilRow { start, weights: wr });
        }
        Self {
            first,
            second,
            second_rho,
        }
    }

    /// Number of rows (interior nodes).
    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }
}
