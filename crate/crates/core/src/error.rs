use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar argument is outside its admissible range.
    InvalidArgument {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// Vector or operator sizes do not agree.
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// Two states live on different grids or bases.
    GridMismatch,
    /// `H - sigma` is numerically singular.
    ShiftHitsEigenvalue {
        shift: f64,
    },
    /// Inverse iteration ran out of iterations.
    NotConverged {
        history: Vec<f64>,
        residual: f64,
    },
    /// The resolution ladder ended without two agreeing energies.
    LadderExhausted {
        energies: Vec<f64>,
    },
    /// The converged state is not in the requested symmetry sector.
    Classification {
        expected: i32,
        measured_lz: f64,
    },
    /// The requested target cannot be addressed for this configuration.
    UnsupportedTarget(&'static str),
    ZeroVector,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument { name, value, reason } => {
                write!(f, "invalid {name} = {value}: {reason}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::GridMismatch => f.write_str("states are defined on different grids"),
            Error::ShiftHitsEigenvalue { shift } => {
                write!(f, "shift {shift} hits an eigenvalue (pivot collapse)")
            }
            Error::NotConverged { history, residual } => write!(
                f,
                "inverse iteration did not converge after {} iterations (last E = {:?}, residual {residual:.3e})",
                history.len(),
                history.last()
            ),
            Error::LadderExhausted { energies } => {
                write!(f, "resolution ladder exhausted without agreement: {energies:?}")
            }
            Error::Classification { expected, measured_lz } => write!(
                f,
                "state classification failed: expected l = {expected}, measured <Lz> = {measured_lz}"
            ),
            Error::UnsupportedTarget(why) => write!(f, "unsupported target: {why}"),
            Error::ZeroVector => f.write_str("zero state vector"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidArgument {
        name,
        value,
        reason,
    }
}
