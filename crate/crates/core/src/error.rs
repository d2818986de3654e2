use core::fmt;

/// Errors raised by the exact and floating-point routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violated a documented precondition.
    InvalidArgument(&'static str),
    /// Two sequences that must share an index range did not.
    LengthMismatch { left: usize, right: usize },
    /// An axis index was not below the dimension.
    AxisOutOfRange { axis: usize, dim: usize },
    /// Regions or decompositions of different dimensions were combined.
    DimensionMismatch { expected: usize, found: usize },
    /// A region was not contained in the region it was required to lie in.
    NotContained,
    /// A region crosses the boundary of the cell it is being restricted to.
    Straddling,
    /// A fraction was malformed or outside `[0, 1]`.
    InvalidFraction,
    /// An exact intermediate did not fit the fixed-width representation.
    Overflow,
    /// A floating-point evaluation point is outside the range where the
    /// certified tail bound holds.
    OutOfCertifiedRange,
    /// No sign change of `M_d'` could be certified.
    BracketNotFound,
    /// The involution is undefined on sequences without an even set or an
    /// odd-ascending-repetitive run.
    InvolutionUndefined,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::LengthMismatch { left, right } => {
                write!(f, "sequence lengths differ ({left} vs {right})")
            }
            Error::AxisOutOfRange { axis, dim } => {
                write!(f, "axis {axis} out of range for dimension {dim}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotContained => f.write_str("region is not contained in the source region"),
            Error::Straddling => f.write_str("region straddles the cell boundary"),
            Error::InvalidFraction => f.write_str("malformed fraction or value outside [0, 1]"),
            Error::Overflow => f.write_str("exact arithmetic overflowed 64-bit storage"),
            Error::OutOfCertifiedRange => {
                f.write_str("evaluation point outside the certified tail-bound range")
            }
            Error::BracketNotFound => f.write_str("could not bracket the saddle point"),
            Error::InvolutionUndefined => {
                f.write_str("sequence has neither an even set nor an OAR run")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
