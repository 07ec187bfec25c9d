//! Casson-Walker invariants of knot surgeries and prism manifolds.
//!
//! The comparisons made here are exact rational equalities of absolute
//! values; orientation is never pinned down.

use core::fmt;

use crate::arith::{dedekind_sum, gcd, require_coprime, Rational};
use crate::error::{Error, Result};

/// The prism manifold `P(n, m)` with Seifert invariants
/// `(-1; (2,1), (2,1), (n,m))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrismDesc {
    n: i64,
    m: i64,
}

impl PrismDesc {
    pub fn new(n: i64, m: i64) -> Result<Self> {
        if n <= 1 || m == 0 || gcd(n, m) != 1 {
            return Err(Error::InvalidPrism { n, m });
        }
        Ok(PrismDesc { n, m })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// `|H_1(P(n,m))| = |4m|`.
    pub fn h1_order(&self) -> u64 {
        4 * self.m.unsigned_abs()
    }

    /// `P(n, -m) = -P(n, m)`.
    pub fn reversed(&self) -> PrismDesc {
        PrismDesc { n: self.n, m: -self.m }
    }
}

impl fmt::Display for PrismDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({},{})", self.n, self.m)
    }
}

/// `lambda(S^3_K(p/q)) = -s(q, p) + (q/p) Delta''_K(1)`; negative `p` goes
/// through `lambda(-Y) = -lambda(Y)` and the mirror.
pub fn lambda_surgery(ddelta: i64, p: i64, q: i64) -> Result<Rational> {
    if p == 0 {
        return Err(Error::InvalidArgument("surgery coefficient p must be nonzero".into()));
    }
    if q <= 0 {
        return Err(Error::NonPositive { what: "q", value: q });
    }
    require_coprime(p, q)?;
    if p < 0 {
        return Ok(-lambda_surgery(ddelta, -p, q)?);
    }
    Ok(Rational::ratio(q, p).scale_int(ddelta) - dedekind_sum(q, p)?)
}

/// `lambda(-P(n,m))`, for `m > 0`:
/// `-(1/12) (-(n/m)(1/n^2 - 1/2) - m/n + 3 + 12 s(m, n))`.
/// For `m < 0` the value is `-lambda(-P(n,-m))`.
pub fn lambda_prism(prism: &PrismDesc) -> Result<Rational> {
    let (n, m) = (prism.n, prism.m);
    if m < 0 {
        return Ok(-lambda_prism(&prism.reversed())?);
    }
    // -(n/m)(1/n^2 - 1/2) = (n^2 - 2) / (2mn)
    let first = Rational::ratio(n * n - 2, 2 * m * n);
    let inner = first - Rational::ratio(m, n)
        + Rational::from_integer(3)
        + dedekind_sum(m, n)?.scale_int(12);
    Ok(-(inner * Rational::ratio(1, 12)))
}

/// Whether `|lambda(S^3_K(4m))| = |lambda(-P(n, m))|` for a knot with
/// `Delta''_K(1) = ddelta`.
pub fn lambda_match(ddelta: i64, m: i64, n: i64) -> Result<bool> {
    let prism = PrismDesc::new(n, m)?;
    let surgery = lambda_surgery(ddelta, 4 * m, 1)?;
    Ok(surgery.abs() == lambda_prism(&prism)?.abs())
}
