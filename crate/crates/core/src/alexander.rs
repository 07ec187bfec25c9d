//! Symmetric Alexander polynomials, torsion coefficients and the
//! constraints satisfied by knots with L-space surgeries.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::require_coprime;
use crate::error::{Error, Result};

/// A symmetric Laurent polynomial `a_0 + sum_{i>=1} a_i (t^i + t^-i)`
/// normalized so that its value at `t = 1` is `1`.
///
/// Only `a_0, ..., a_g` are stored; `a_g != 0` unless `g = 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymLaurentPoly {
    coeffs: Vec<i64>,
}

/// Seifert genus, determinant and second derivative at 1, as read off a
/// normalized Alexander polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassicalInvariants {
    pub genus: u64,
    pub det: u64,
    pub ddelta: i64,
}

impl SymLaurentPoly {
    /// The polynomial of the unknot.
    pub fn one() -> Self {
        SymLaurentPoly { coeffs: vec![1] }
    }

    /// Builds from `a_0, a_1, ..., a_g`. A polynomial taking the value `-1`
    /// at `t = 1` has its sign flipped; any other value is rejected.
    pub fn from_half(mut coeffs: Vec<i64>) -> Result<Self> {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        let at_one = coeffs[0] + 2 * coeffs[1..].iter().sum::<i64>();
        match at_one {
            1 => Ok(SymLaurentPoly { coeffs }),
            -1 => Ok(SymLaurentPoly {
                coeffs: coeffs.into_iter().map(|c| -c).collect(),
            }),
            v => Err(Error::NotNormalized { value_at_one: v }),
        }
    }

    /// Builds from the coefficient list of an ordinary palindromic
    /// polynomial `c_0 + c_1 t + ... + c_{2g} t^{2g}`, re-centred at `t^g`.
    pub fn from_palindromic(full: &[i64]) -> Result<Self> {
        let start = full.iter().position(|&c| c != 0);
        let end = full.iter().rposition(|&c| c != 0);
        let (start, end) = match (start, end) {
            (Some(s), Some(e)) => (s, e),
            _ => return Self::from_half(vec![0]),
        };
        let body = &full[start..=end];
        if body.len().is_multiple_of(2) || body.iter().ne(body.iter().rev()) {
            return Err(Error::InvalidArgument(String::from(
                "polynomial is not symmetric under t -> 1/t",
            )));
        }
        let mid = body.len() / 2;
        Self::from_half(body[mid..].to_vec())
    }

    /// `a_0, ..., a_g`.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Top degree `g`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^i` for any integer `i`.
    pub fn coeff(&self, i: i64) -> i64 {
        self.coeffs
            .get(i.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0)
    }

    /// Coefficients of `t^-g, ..., t^g`.
    pub fn to_laurent(&self) -> Vec<i64> {
        let g = self.degree();
        let mut full = Vec::with_capacity(2 * g + 1);
        full.extend(self.coeffs.iter().rev());
        full.extend(self.coeffs[1..].iter());
        full
    }

    pub fn mul(&self, other: &SymLaurentPoly) -> SymLaurentPoly {
        let a = self.to_laurent();
        let b = other.to_laurent();
        let mut prod = vec![0i64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        let mid = (prod.len() - 1) / 2;
        // both factors evaluate to 1 at t = 1, so the product does too
        SymLaurentPoly::from_half(prod[mid..].to_vec()).expect("product of normalized polynomials")
    }

    /// `Delta(t^k)`.
    pub fn substitute_power(&self, k: usize) -> SymLaurentPoly {
        assert!(k >= 1, "power substitution needs k >= 1");
        let mut coeffs = vec![0i64; self.degree() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = *c;
        }
        SymLaurentPoly { coeffs }
    }

    pub fn eval_at_minus_one(&self) -> i64 {
        self.coeffs[0]
            + 2 * self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| if i % 2 == 0 { *c } else { -*c })
                .sum::<i64>()
    }
}

impl fmt::Display for SymLaurentPoly {
    /// Renders as e.g. `t - 1 + t^-1`, highest power first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.degree() as i64;
        let mut first = true;
        for e in (-g..=g).rev() {
            let c = self.coeff(e);
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            first = false;
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => f.write_str("t")?,
                (1, m) => write!(f, "{m}t")?,
                (e, 1) => write!(f, "t^{e}")?,
                (e, m) => write!(f, "{m}t^{e}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SymLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymLaurentPoly({:?})", self.coeffs)
    }
}

/// Torsion coefficients `t_0, t_1, ...`; entries past the stored prefix are
/// zero and the stored prefix carries no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionSeq {
    t: Vec<i64>,
}

impl TorsionSeq {
    pub fn new(mut t: Vec<i64>) -> Self {
        while t.last() == Some(&0) {
            t.pop();
        }
        TorsionSeq { t }
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.t
    }

    /// Index of the first persistent zero.
    pub fn genus(&self) -> usize {
        self.t.len()
    }

    pub fn get(&self, i: usize) -> i64 {
        self.t.get(i).copied().unwrap_or(0)
    }

    /// `t_i >= 0` and `t_i >= t_{i+1} >= t_i - 1` for all `i`.
    pub fn is_lspace_valid(&self) -> bool {
        (0..self.t.len()).all(|i| {
            let step = self.t[i] - self.get(i + 1);
            self.t[i] >= 0 && (step == 0 || step == 1)
        })
    }
}

/// How a sample knot is specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnotDesc {
    Torus { p: i64, q: i64 },
    /// The `(p, q)`-cable of `companion`, `q` being the winding number.
    Cable { p: i64, q: i64, companion: Box<KnotDesc> },
    Explicit { poly: SymLaurentPoly, name: String },
}

impl KnotDesc {
    pub fn polynomial(&self) -> Result<SymLaurentPoly> {
        match self {
            KnotDesc::Torus { p, q } => torus_alexander(*p, *q),
            KnotDesc::Cable { p, q, companion } => cable_alexander(*p, *q, &companion.polynomial()?),
            KnotDesc::Explicit { poly, .. } => Ok(poly.clone()),
        }
    }

    /// The pretzel knot `P(-2,3,7)`.
    pub fn pretzel_2_3_7() -> Self {
        KnotDesc::Explicit {
            poly: SymLaurentPoly { coeffs: vec![1, -1, 1, 0, -1, 1] },
            name: String::from("P(-2,3,7)"),
        }
    }

    /// The pretzel knot `P(-2,3,9)`.
    pub fn pretzel_2_3_9() -> Self {
        KnotDesc::Explicit {
            poly: SymLaurentPoly { coeffs: vec![-1, 1, -1, 1, 0, -1, 1] },
            name: String::from("P(-2,3,9)"),
        }
    }
}

/// Exact division of `poly` (ascending coefficients) by `t^k - 1`.
fn div_by_binomial(poly: &[i64], k: usize) -> Vec<i64> {
    let mut rem = poly.to_vec();
    let deg = rem.len() - 1;
    let mut quot = vec![0i64; deg + 1 - k];
    for i in (k..=deg).rev() {
        let c = rem[i];
        quot[i - k] = c;
        rem[i] = 0;
        rem[i - k] += c;
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "t^{k} - 1 does not divide");
    quot
}

/// `(t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))`, symmetrized.
pub fn torus_alexander(p: i64, q: i64) -> Result<SymLaurentPoly> {
    require_coprime(p, q)?;
    let (p, q) = (p.unsigned_abs() as usize, q.unsigned_abs() as usize);
    if p <= 1 || q <= 1 {
        return Ok(SymLaurentPoly::one());
    }
    let n = p * q;
    // (t^n - 1)(t - 1) = t^{n+1} - t^n - t + 1
    let mut num = vec![0i64; n + 2];
    num[n + 1] = 1;
    num[n] -= 1;
    num[1] -= 1;
    num[0] += 1;
    let quot = div_by_binomial(&div_by_binomial(&num, p), q);
    SymLaurentPoly::from_palindromic(&quot)
}

/// Alexander polynomial of the `(p, q)`-cable of a knot with polynomial
/// `companion`: `Delta_{T(p,q)}(t) * Delta_C(t^q)`.
pub fn cable_alexander(p: i64, q: i64, companion: &SymLaurentPoly) -> Result<SymLaurentPoly> {
    require_coprime(p, q)?;
    if q == 0 {
        return Err(Error::InvalidArgument(String::from("cable winding number must be nonzero")));
    }
    let pattern = torus_alexander(p, q)?;
    Ok(pattern.mul(&companion.substitute_power(q.unsigned_abs() as usize)))
}

pub fn classical_invariants(poly: &SymLaurentPoly) -> ClassicalInvariants {
    let ddelta = 2 * poly
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| (i * i) as i64 * c)
        .sum::<i64>();
    ClassicalInvariants {
        genus: poly.degree() as u64,
        det: poly.eval_at_minus_one().unsigned_abs(),
        ddelta,
    }
}

/// `t_i = sum_{j>=1} j a_{i+j}` for `0 <= i < g`.
pub fn torsion_coefficients(poly: &SymLaurentPoly) -> TorsionSeq {
    let g = poly.degree();
    let t = (0..g)
        .map(|i| {
            (1..=g - i)
                .map(|j| j as i64 * poly.coeffs[i + j])
                .sum::<i64>()
        })
        .collect();
    TorsionSeq::new(t)
}

/// Inverts [`torsion_coefficients`] on L-space torsion data:
/// `a_i = t_{i-1} - 2 t_i + t_{i+1}` for `i >= 1`, `a_0` fixed by `Delta(1) = 1`.
pub fn reconstruct_alexander(t: &TorsionSeq) -> Result<SymLaurentPoly> {
    if !t.is_lspace_valid() {
        return Err(Error::NotLSpaceTorsion);
    }
    let g = t.genus();
    let mut coeffs = vec![0i64; g + 1];
    for (i, slot) in coeffs.iter_mut().enumerate().skip(1) {
        *slot = t.get(i - 1) - 2 * t.get(i) + t.get(i + 1);
    }
    coeffs[0] = 1 - 2 * coeffs[1..].iter().sum::<i64>();
    SymLaurentPoly::from_half(coeffs)
}

/// Whether `poly` has the shape forced on knots with L-space surgeries:
/// nonzero coefficients are `+-1`, alternate in sign starting from `+1` at
/// the top degree, and the torsion coefficients satisfy
/// `t_i >= 0`, `t_i >= t_{i+1} >= t_i - 1`.
pub fn lspace_check(poly: &SymLaurentPoly) -> bool {
    let nonzero: Vec<i64> = poly.to_laurent().into_iter().rev().filter(|&c| c != 0).collect();
    let alternating = nonzero.first() == Some(&1)
        && nonzero.windows(2).all(|w| w[0] == -w[1])
        && nonzero.iter().all(|c| c.abs() == 1);
    alternating && torsion_coefficients(poly).is_lspace_valid()
}
