use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every failure the algebra can report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Operands carry different modulus, precision or degree bound.
    ContextMismatch { what: &'static str },
    /// Invalid truncation context (for instance `K < L`).
    InvalidContext(String),
    /// Scalar or series is not invertible.
    NonUnit,
    /// Every coefficient is divisible by the prime.
    AllDivisible,
    /// Relator is not of the shape `m - q x^j`.
    BadRelator(String),
    /// A constant exponent does not give a convergent power at this depth.
    ExponentNotStabilized { depth: u32 },
    /// Requested depth is beyond what the data determines.
    DepthExceeded { requested: u32, available: u32 },
    /// Generator system or expression is malformed.
    Malformed(String),
    /// Generator or name is unknown.
    Unknown(String),
    /// Saturation did not close within the cap.
    SaturationOverflow { cap: usize },
    /// Permutation is outside the group generated by the presentation.
    PermSolveFail,
    /// The system is not abelian (or the residual is not diagonal) to depth.
    NotAbelian,
    /// Orbit is not invariant under the first-level permutation group.
    NotInvariant,
    /// `z^m` is the identity to the available depth.
    Unbounded { depth: u32 },
    /// Finite-index, transversal or homomorphism data is inconsistent.
    BadTriple(String),
    /// `f` is not well defined on `H`.
    IllDefined,
    /// The sum of the exponents is not `q x^(j-1)` with `q` invertible.
    NonUnitSum,
    /// Integer arithmetic overflowed a fixed-width routine.
    Overflow,
    /// A resource cap was hit.
    CapExceeded { what: &'static str, cap: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ContextMismatch { what } => write!(f, "context mismatch: {what}"),
            Error::InvalidContext(s) => write!(f, "invalid context: {s}"),
            Error::NonUnit => f.write_str("element is not a unit"),
            Error::AllDivisible => f.write_str("every coefficient is divisible by p"),
            Error::BadRelator(s) => write!(f, "bad relator: {s}"),
            Error::ExponentNotStabilized { depth } => {
                write!(f, "m-adic exponent does not stabilize at depth {depth}")
            }
            Error::DepthExceeded { requested, available } => {
                write!(f, "depth {requested} exceeds available truncation {available}")
            }
            Error::Malformed(s) => write!(f, "malformed: {s}"),
            Error::Unknown(s) => write!(f, "unknown name: {s}"),
            Error::SaturationOverflow { cap } => write!(f, "state saturation exceeded {cap} states"),
            Error::PermSolveFail => f.write_str("permutation not in the presented group"),
            Error::NotAbelian => f.write_str("system is not abelian to the requested depth"),
            Error::NotInvariant => f.write_str("orbit is not invariant"),
            Error::Unbounded { depth } => write!(f, "z^m is trivial to depth {depth} (>= {depth})"),
            Error::BadTriple(s) => write!(f, "bad triple: {s}"),
            Error::IllDefined => f.write_str("homomorphism is not well defined on H"),
            Error::NonUnitSum => f.write_str("exponent sum is not q x^(j-1) with q a unit"),
            Error::Overflow => f.write_str("integer overflow"),
            Error::CapExceeded { what, cap } => write!(f, "{what} exceeded cap {cap}"),
        }
    }
}

impl core::error::Error for Error {}
