//! Exact rational arithmetic, residues and Dedekind sums.
//!
//! Nothing in this crate touches floating point. [`Rational`] wraps an
//! arbitrary-precision fraction that is always kept in lowest terms with a
//! positive denominator.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`, reduced. Fails when `den == 0`.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        Self::from_big(BigInt::from(num), BigInt::from(den))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    /// Shorthand for fractions whose denominator is known to be nonzero.
    pub(crate) fn ratio(num: i64, den: i64) -> Self {
        debug_assert!(den != 0);
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Greatest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// `self - floor(self)`, in `[0, 1)`.
    pub fn fract(&self) -> Self {
        Rational(&self.0 - self.0.floor())
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// The value as an `i64` when it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub(crate) fn scale_int(&self, k: i64) -> Self {
        Rational(&self.0 * BigInt::from(k))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

/// An element of `Z/nZ` stored by its least nonnegative representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: i64) -> Result<Self> {
        if modulus <= 0 {
            return Err(Error::NonPositive { what: "modulus", value: modulus });
        }
        Ok(Residue {
            value: value.rem_euclid(modulus) as u64,
            modulus: modulus as u64,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Fails with [`Error::NotCoprime`] unless `gcd(a, b) == 1`.
pub fn require_coprime(a: i64, b: i64) -> Result<()> {
    if gcd(a, b) == 1 {
        Ok(())
    } else {
        Err(Error::NotCoprime { a, b })
    }
}

/// The sawtooth function `((x))`: `{x} - 1/2` off the integers, `0` on them.
pub fn sawtooth(x: &Rational) -> Rational {
    if x.is_integer() {
        Rational::zero()
    } else {
        x.fract() - Rational::ratio(1, 2)
    }
}

/// Dedekind sum `s(q, p) = sum_{i=1}^{p-1} ((i/p)) ((iq/p))`.
///
/// Evaluated through the reciprocity law along the Euclidean algorithm,
/// so the cost is `O(log p)` rational operations.
pub fn dedekind_sum(q: i64, p: i64) -> Result<Rational> {
    if p <= 0 {
        return Err(Error::NonPositive { what: "p", value: p });
    }
    require_coprime(q, p)?;
    // s(h, k) = R(h, k) - s(k mod h, h) with
    // R(h, k) = (h^2 + k^2 + 1 - 3hk) / (12hk).
    let mut h = BigInt::from(q.rem_euclid(p));
    let mut k = BigInt::from(p);
    let mut acc = BigRational::zero();
    let mut positive = true;
    while !h.is_zero() {
        let hk = &h * &k;
        let num = &h * &h + &k * &k + BigInt::one() - BigInt::from(3) * &hk;
        let term = BigRational::new(num, BigInt::from(12) * hk);
        if positive {
            acc += term;
        } else {
            acc -= term;
        }
        positive = !positive;
        let r = &k % &h;
        k = core::mem::replace(&mut h, r);
    }
    Ok(Rational(acc))
}

/// The defining `O(p)` sum for [`dedekind_sum`]; kept as an independent
/// reference evaluation.
pub fn dedekind_sum_direct(q: i64, p: i64) -> Result<Rational> {
    if p <= 0 {
        return Err(Error::NonPositive { what: "p", value: p });
    }
    require_coprime(q, p)?;
    let mut acc = Rational::zero();
    for i in 1..p {
        let a = sawtooth(&Rational::ratio(i, p));
        let b = sawtooth(&Rational::ratio(i * q, p));
        acc += &(a * b);
    }
    Ok(acc)
}

/// The inverse of `a` in `Z/pZ`.
pub fn mod_inverse(a: i64, p: i64) -> Result<Residue> {
    if p <= 0 {
        return Err(Error::NonPositive { what: "modulus", value: p });
    }
    let (mut old_r, mut r) = (a.rem_euclid(p) as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 && p != 1 {
        return Err(Error::NotAUnit { a, modulus: p });
    }
    Residue::new((old_s.rem_euclid(p as i128)) as i64, p)
}

/// Least common multiple of the denominators of `values`.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}
