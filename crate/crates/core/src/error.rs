use alloc::string::String;
use core::fmt;

/// Errors raised by the kernel. Every variant describes a violated
/// precondition; none of them is transient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two integers that must be coprime share a factor.
    NotCoprime { a: i64, b: i64 },
    /// A modulus, order or denominator that must be positive is not.
    NonPositive { what: &'static str, value: i64 },
    /// `a` has no inverse modulo `modulus`.
    NotAUnit { a: i64, modulus: i64 },
    DivisionByZero,
    /// Torsion data violating `t_i >= 0`, `t_i >= t_{i+1} >= t_i - 1`.
    NotLSpaceTorsion,
    /// A polynomial whose value at 1 is not +-1.
    NotNormalized { value_at_one: i64 },
    /// The torus-knot closed form was asked for `n` outside `{m, m+1}`.
    ClosedFormRange { m: i64, n: i64 },
    InvalidPrism { n: i64, m: i64 },
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotCoprime { a, b } => write!(f, "not coprime: gcd({a}, {b}) != 1"),
            Error::NonPositive { what, value } => write!(f, "{what} must be positive, got {value}"),
            Error::NotAUnit { a, modulus } => write!(f, "not a unit: {a} mod {modulus}"),
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::NotLSpaceTorsion => f.write_str("not an L-space torsion sequence"),
            Error::NotNormalized { value_at_one } => {
                write!(f, "polynomial cannot be normalized: value at 1 is {value_at_one}")
            }
            Error::ClosedFormRange { m, n } => write!(
                f,
                "closed form only valid for n=m or m+1 (got m={m}, n={n})"
            ),
            Error::InvalidPrism { n, m } => {
                write!(f, "invalid prism manifold P({n},{m}): need n > 1 and gcd(n,m) = 1")
            }
            Error::InvalidArgument(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
