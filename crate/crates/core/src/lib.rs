//! Bound states of the two-dimensional hydrogen atom in a uniform magnetic
//! field tilted by an angle `alpha` from the normal of the plane of motion.
//!
//! The wavefunction is sampled on a Fourier DVR grid in the polar angle and a
//! quadratically mapped grid `rho = rho_N * t^2` in the radius. The resulting
//! banded-block Hamiltonian is diagonalized near a shift by inverse iteration,
//! with a block-tridiagonal sweep as the linear solver.
//!
//! The crate is `no_std` (it needs `alloc`). The `std` feature only enables
//! runtime CPU feature detection in the dense matrix kernels.
#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` guards reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod angular;
mod dense;
pub mod eigen;
pub mod error;
pub mod hamiltonian;
pub mod observables;
pub mod params;
pub mod radial;
pub mod reference;
pub mod sweep;

pub use num_complex::Complex64;

pub use angular::AngularBasis;
pub use eigen::{
    converge, converge_with, inverse_iteration, solve_target, Ladder, Resolution, SolveOptions,
    SolveResult, Target,
};
pub use error::{Error, Result};
pub use hamiltonian::{DiscreteHamiltonian, RadialScheme};
pub use observables::{Field2D, Wavefunction};
pub use params::{MassMode, PhysicalConfig, ReducedMasses};
pub use radial::{DerivativeStencils, RadialGrid};
pub use sweep::Factorization;
