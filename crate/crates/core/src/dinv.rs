//! Heegaard Floer correction terms of lens spaces, of surgeries on knots
//! with L-space surgeries, and of Dehn fillings of the trefoil exterior.
//!
//! Every vector is indexed by `Z/pZ` in the labeling produced by the lens
//! space recursion: `d(L(p,q), i)` for `0 <= i < p`, and for a surgery
//! `d(S^3_K(p/q), i) = d(L(p,q), i) - 2 t_{k(i)}` with
//! `k(i) = min(floor(i/q), floor((p+q-1-i)/q))`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;

use crate::alexander::TorsionSeq;
use crate::arith::{require_coprime, Rational};
use crate::error::{Error, Result};

/// Correction terms of a rational homology sphere with `H_1 = Z/pZ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DVector {
    values: Vec<Rational>,
}

impl DVector {
    /// Wraps `values` indexed by `0..p`; `p = values.len()` must be positive.
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NonPositive { what: "order of H_1", value: 0 });
        }
        Ok(DVector { values })
    }

    pub fn p(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    /// Pointwise negation; the correction terms of the orientation reversal.
    pub fn negated(&self) -> DVector {
        DVector {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// Values sorted ascending; compares vectors up to relabeling.
    pub fn sorted_values(&self) -> Vec<Rational> {
        let mut v = self.values.clone();
        v.sort();
        v
    }
}

impl fmt::Display for DVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

fn check_slope(p: i64, q: i64) -> Result<()> {
    if p <= 0 {
        return Err(Error::NonPositive { what: "p", value: p });
    }
    if q <= 0 {
        return Err(Error::NonPositive { what: "q", value: q });
    }
    require_coprime(p, q)
}

/// `-1/4 + (2i + 1 - p - q)^2 / (4pq)`
fn lens_leading_term(i: i64, p: i64, q: i64) -> Rational {
    let (i, p, q) = (i as i128, p as i128, q as i128);
    let s = 2 * i + 1 - p - q;
    let num = s * s - p * q;
    Rational::from_big(BigInt::from(num), BigInt::from(4 * p * q)).expect("4pq > 0")
}

/// One level of the recursion, given the vector of `L(q, p mod q)`.
fn lens_level(p: i64, q: i64, child: &DVector) -> DVector {
    let values = (0..p)
        .map(|i| lens_leading_term(i, p, q) - child.get((i % q) as usize))
        .collect();
    DVector { values }
}

/// Correction terms of `L(p, q)`:
/// `d(L(p,q), i) = -1/4 + (2i+1-p-q)^2/(4pq) - d(L(q, r), j)` with
/// `r = p mod q`, `j = i mod q`, and `d(S^3, 0) = 0`.
pub fn d_lens(p: i64, q: i64) -> Result<DVector> {
    check_slope(p, q)?;
    let mut chain = Vec::new();
    let (mut a, mut b) = (p, q);
    while a > 1 {
        chain.push((a, b));
        (a, b) = (b, a % b);
    }
    let mut current = DVector { values: vec![Rational::zero()] };
    for &(a, b) in chain.iter().rev() {
        current = lens_level(a, b, &current);
    }
    Ok(current)
}

/// Memo table for [`d_lens`] keyed by `(p, q)`, caching every level of the
/// recursion it passes through. Intended to be owned by a single worker.
#[derive(Default, Debug)]
pub struct LensCache {
    map: BTreeMap<(i64, i64), Arc<DVector>>,
}

impl LensCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&mut self, p: i64, q: i64) -> Result<Arc<DVector>> {
        check_slope(p, q)?;
        Ok(self.get_unchecked(p, q))
    }

    fn get_unchecked(&mut self, p: i64, q: i64) -> Arc<DVector> {
        if let Some(v) = self.map.get(&(p, q)) {
            return v.clone();
        }
        let v = if p == 1 {
            Arc::new(DVector { values: vec![Rational::zero()] })
        } else {
            let child = self.get_unchecked(q, p % q);
            Arc::new(lens_level(p, q, &child))
        };
        self.map.insert((p, q), v.clone());
        v
    }
}

/// The torsion index `min(floor(i/q), floor((p+q-1-i)/q))` attached to the
/// label `i` of a `p/q` surgery.
pub fn surgery_index(i: usize, p: usize, q: usize) -> usize {
    core::cmp::min(i / q, (p + q - 1 - i) / q)
}

/// Whether `p/q >= 2g - 1`, the range where a knot of genus `g` with an
/// L-space surgery has L-space surgeries and the surgery formula applies.
pub fn slope_in_lspace_range(genus: usize, p: i64, q: i64) -> bool {
    genus == 0 || p >= q * (2 * genus as i64 - 1)
}

/// Subtracts `2 t_{k(i)}` from the lens vector `lens` of `L(p, q)`.
pub fn apply_torsion(lens: &DVector, t: &TorsionSeq, q: i64) -> DVector {
    let p = lens.p();
    let values = lens
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let k = surgery_index(i, p, q as usize);
            v - Rational::from_integer(2 * t.get(k))
        })
        .collect();
    DVector { values }
}

/// Correction terms of `p/q` surgery on a knot with torsion coefficients `t`.
///
/// The formula assumes `p/q >= 2g - 1`; the caller decides what to do
/// outside that range (see [`slope_in_lspace_range`]).
pub fn d_surgery(t: &TorsionSeq, p: i64, q: i64) -> Result<DVector> {
    let lens = d_lens(p, q)?;
    Ok(apply_torsion(&lens, t, q))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Positive,
    Negative,
}

/// `+T(a/b)` or `-T(a/b)`: the `a/b` Dehn filling of the right-handed
/// trefoil exterior, with a choice of orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FillingDesc {
    pub sign: Orientation,
    pub a: i64,
    pub b: i64,
}

impl FillingDesc {
    pub fn new(sign: Orientation, a: i64, b: i64) -> Result<Self> {
        check_slope(a, b)?;
        Ok(FillingDesc { sign, a, b })
    }
}

impl fmt::Display for FillingDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.sign {
            Orientation::Positive => "",
            Orientation::Negative => "-",
        };
        if self.b == 1 {
            write!(f, "{sign}T({})", self.a)
        } else {
            write!(f, "{sign}T({}/{})", self.a, self.b)
        }
    }
}

impl FromStr for FillingDesc {
    type Err = Error;

    /// Accepts `T(a/b)`, `T(a)`, `-T(a/b)` and `+T(a/b)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("malformed filling descriptor {s:?}"));
        let s = s.trim();
        let (sign, rest) = if let Some(r) = s.strip_prefix('-') {
            (Orientation::Negative, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Orientation::Positive, r)
        } else {
            (Orientation::Positive, s)
        };
        let inner = rest
            .trim()
            .strip_prefix("T(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (a, b) = match inner.split_once('/') {
            Some((a, b)) => (a, b),
            None => (inner, "1"),
        };
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        FillingDesc::new(sign, a, b)
    }
}

/// Correction terms of `+-T(a/b)`, computed as `a/b` surgery on the
/// right-handed trefoil; the negative orientation negates every value
/// without relabeling.
pub fn d_filling(desc: &FillingDesc) -> Result<DVector> {
    let d = d_surgery(&TorsionSeq::new(vec![1]), desc.a, desc.b)?;
    Ok(match desc.sign {
        Orientation::Positive => d,
        Orientation::Negative => d.negated(),
    })
}

/// Closed form for `d(S^3_{T(2m+1,2)}(4n), i)` when `n` is `m` or `m + 1`.
/// With `z = n - m` and `theta` the parity:
///
/// * `0 <= i < n`: `-1/4 + i^2/(4n) + z - theta(n - z - i)`
/// * `n <= i <= 2n`: `-1/4 + (2n - i)^2/(4n)`
/// * `2n < i < 4n`: the value at `4n - i`
pub fn d_torus_closed_form(m: i64, n: i64) -> Result<DVector> {
    if m < 1 {
        return Err(Error::NonPositive { what: "m", value: m });
    }
    if n != m && n != m + 1 {
        return Err(Error::ClosedFormRange { m, n });
    }
    let zeta = n - m;
    let quarter = Rational::ratio(-1, 4);
    let value = |i: i64| -> Rational {
        if i < n {
            let theta = (n - zeta - i).rem_euclid(2);
            &quarter + Rational::ratio(i * i, 4 * n) + Rational::from_integer(zeta - theta)
        } else {
            &quarter + Rational::ratio((2 * n - i) * (2 * n - i), 4 * n)
        }
    };
    let values = (0..4 * n)
        .map(|i| if i <= 2 * n { value(i) } else { value(4 * n - i) })
        .collect();
    Ok(DVector { values })
}

/// Every `s` in `0..p` with `d[i] = d[(s - i) mod p]` for all `i`. The
/// conjugation of Spin^c structures is always among them.
pub fn conjugation_involutions(d: &DVector) -> Vec<usize> {
    let p = d.p();
    (0..p)
        .filter(|&s| (0..p).all(|i| d.values[i] == d.values[(s + p - i) % p]))
        .collect()
}
