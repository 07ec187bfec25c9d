//! Realizability of a correction-term vector by `p/q` surgery on a knot in
//! `S^3`.
//!
//! A target vector `d_Y` is realizable when there are L-space torsion
//! coefficients `t` and a symmetric affine bijection `phi(i) = a i + b` of
//! `Z/pZ` with
//!
//! ```text
//! d_Y(phi(i)) = d(L(p,q), i) - 2 t_{k(i)}    for all i,
//! ```
//!
//! where symmetric means `phi` intertwines the conjugations of the two
//! sides. The conjugations are detected from the vectors themselves
//! ([`conjugation_involutions`]), so for a detected pair `(s, s')` the
//! condition reads `2b = s' - a s (mod p)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::alexander::{
    classical_invariants, lspace_check, reconstruct_alexander, ClassicalInvariants,
    SymLaurentPoly, TorsionSeq,
};
use crate::arith::{common_denominator, gcd, require_coprime};
use crate::dinv::{conjugation_involutions, d_lens, slope_in_lspace_range, surgery_index, DVector};
use crate::error::{Error, Result};

/// `i -> a i + b (mod p)` with `a` a unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineIso {
    pub a: u64,
    pub b: u64,
    pub p: u64,
}

impl AffineIso {
    pub fn apply(&self, i: u64) -> u64 {
        ((self.a as u128 * i as u128 + self.b as u128) % self.p as u128) as u64
    }
}

impl fmt::Display for AffineIso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i -> {}i + {} (mod {})", self.a, self.b, self.p)
    }
}

/// Torsion coefficients satisfying the realizability condition, with the
/// polynomial they determine and every affine bijection witnessing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizabilitySolution {
    pub phis: Vec<AffineIso>,
    pub t: TorsionSeq,
    pub poly: SymLaurentPoly,
    pub invariants: ClassicalInvariants,
    /// The condition pinned `t` only up to its last constrained index,
    /// which was still positive; `t` is the minimal completion.
    pub underdetermined: bool,
}

impl RealizabilitySolution {
    pub fn genus(&self) -> u64 {
        self.invariants.genus
    }

    pub fn det(&self) -> u64 {
        self.invariants.det
    }

    pub fn ddelta(&self) -> i64 {
        self.invariants.ddelta
    }
}

/// Exact values rescaled to integers over a shared denominator `D`, so
/// each comparison is integer arithmetic.
trait Scaled: Clone {
    /// `(src - tgt) / (2D)` when that is a nonnegative integer.
    fn torsion(src: &Self, tgt: &Self, two_d: &Self) -> Option<i64>;
}

impl Scaled for i64 {
    fn torsion(src: &i64, tgt: &i64, two_d: &i64) -> Option<i64> {
        let diff = *src as i128 - *tgt as i128;
        let two_d = *two_d as i128;
        if diff < 0 || diff % two_d != 0 {
            return None;
        }
        i64::try_from(diff / two_d).ok()
    }
}

impl Scaled for BigInt {
    fn torsion(src: &BigInt, tgt: &BigInt, two_d: &BigInt) -> Option<i64> {
        let diff = src - tgt;
        if diff.is_negative() {
            return None;
        }
        let (quot, rem) = diff.div_rem(two_d);
        if !rem.is_zero() {
            return None;
        }
        quot.to_i64()
    }
}

struct Instance<'a, T> {
    p: usize,
    q: usize,
    src: Vec<T>,
    tgt: Vec<T>,
    two_d: T,
    /// Labels ordered by decreasing torsion index.
    order: &'a [usize],
    max_index: usize,
}

enum Outcome {
    Reject,
    Accept(TorsionSeq, bool),
}

impl<T: Scaled> Instance<'_, T> {
    fn attempt(&self, phi: &AffineIso) -> Outcome {
        let mut t: Vec<Option<i64>> = vec![None; self.max_index + 1];
        for &i in self.order {
            let j = phi.apply(i as u64) as usize;
            let Some(v) = T::torsion(&self.src[i], &self.tgt[j], &self.two_d) else {
                return Outcome::Reject;
            };
            let k = surgery_index(i, self.p, self.q);
            match t[k] {
                Some(prev) if prev != v => return Outcome::Reject,
                Some(_) => {}
                None => {
                    // every label with index k + 1 was visited before any with index k
                    if k < self.max_index {
                        let step = v - t[k + 1].expect("visited in decreasing index order");
                        if step != 0 && step != 1 {
                            return Outcome::Reject;
                        }
                    }
                    t[k] = Some(v);
                }
            }
        }
        let mut seq: Vec<i64> = t.into_iter().map(|v| v.expect("every index is hit")).collect();
        let last = *seq.last().unwrap();
        let underdetermined = last > 0;
        seq.extend((0..last).rev());
        Outcome::Accept(TorsionSeq::new(seq), underdetermined)
    }
}

fn scale(values: &[crate::arith::Rational], d: &BigInt) -> Vec<BigInt> {
    values
        .iter()
        .map(|v| v.numer() * (d / v.denom()))
        .collect()
}

/// Symmetric affine bijections of `Z/pZ` relative to the detected
/// conjugations of source and target.
fn symmetric_candidates(p: usize, src_invs: &[usize], tgt_invs: &[usize]) -> BTreeSet<(u64, u64)> {
    let mut out = BTreeSet::new();
    let pi = p as i64;
    if p == 1 {
        if !src_invs.is_empty() && !tgt_invs.is_empty() {
            out.insert((0, 0));
        }
        return out;
    }
    let half_inv = if p % 2 == 1 { Some((pi + 1) / 2) } else { None };
    for a in 1..pi {
        if gcd(a, pi) != 1 {
            continue;
        }
        for &s in src_invs {
            for &s2 in tgt_invs {
                let rhs = (s2 as i64 - a * s as i64).rem_euclid(pi);
                match half_inv {
                    Some(h) => {
                        let b = ((rhs as i128 * h as i128) % pi as i128) as u64;
                        out.insert((a as u64, b));
                    }
                    None => {
                        if rhs % 2 == 0 {
                            out.insert((a as u64, (rhs / 2) as u64));
                            out.insert((a as u64, (rhs / 2 + pi / 2) as u64));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Solves the realizability condition for `target` against the lens space
/// vector `source` of `L(p, q)`. With `first_only` the search stops at the
/// first surviving solution.
pub fn solve_with_source(
    source: &DVector,
    target: &DVector,
    q: i64,
    first_only: bool,
) -> Result<Vec<RealizabilitySolution>> {
    let p = target.p();
    if source.p() != p {
        return Err(Error::InvalidArgument(alloc::format!(
            "source has order {} but target has order {p}",
            source.p()
        )));
    }
    if q <= 0 {
        return Err(Error::NonPositive { what: "q", value: q });
    }
    require_coprime(p as i64, q)?;
    let qu = q as usize;
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by_key(|&i| core::cmp::Reverse(surgery_index(i, p, qu)));
    let max_index = surgery_index(order[0], p, qu);

    let candidates = symmetric_candidates(
        p,
        &conjugation_involutions(source),
        &conjugation_involutions(target),
    );

    let d = common_denominator(source.values().iter().chain(target.values()));
    let src = scale(source.values(), &d);
    let tgt = scale(target.values(), &d);
    let two_d = &d * 2;
    let small = src.iter().chain(&tgt).chain(core::iter::once(&two_d)).all(|v| v.to_i64().is_some());
    if small {
        let to_small = |v: &[BigInt]| v.iter().map(|x| x.to_i64().unwrap()).collect();
        let inst = Instance {
            p,
            q: qu,
            src: to_small(&src),
            tgt: to_small(&tgt),
            two_d: two_d.to_i64().unwrap(),
            order: &order,
            max_index,
        };
        collect(&inst, &candidates, q, first_only)
    } else {
        let inst = Instance { p, q: qu, src, tgt, two_d, order: &order, max_index };
        collect(&inst, &candidates, q, first_only)
    }
}

fn collect<T: Scaled>(
    inst: &Instance<'_, T>,
    candidates: &BTreeSet<(u64, u64)>,
    q: i64,
    first_only: bool,
) -> Result<Vec<RealizabilitySolution>> {
    let p = inst.p as u64;
    let mut found: BTreeMap<(u64, TorsionSeq), RealizabilitySolution> = BTreeMap::new();
    for &(a, b) in candidates {
        let phi = AffineIso { a, b, p };
        let Outcome::Accept(t, underdetermined) = inst.attempt(&phi) else {
            continue;
        };
        if !slope_in_lspace_range(t.genus(), p as i64, q) {
            continue;
        }
        let key = (t.genus() as u64, t.clone());
        if let Some(sol) = found.get_mut(&key) {
            sol.phis.push(phi);
            continue;
        }
        let poly = reconstruct_alexander(&t)?;
        if !lspace_check(&poly) {
            continue;
        }
        let invariants = classical_invariants(&poly);
        found.insert(
            key,
            RealizabilitySolution { phis: vec![phi], t, poly, invariants, underdetermined },
        );
        if first_only {
            break;
        }
    }
    Ok(found.into_values().collect())
}

/// Every solution of the realizability condition for `target` at slope
/// `p/q`, `p = target.p()`, deduplicated by torsion sequence and sorted by
/// `(genus, t)`. An empty list means the condition fails.
pub fn check_condition_corr(target: &DVector, q: i64) -> Result<Vec<RealizabilitySolution>> {
    let source = d_lens(target.p() as i64, q)?;
    solve_with_source(&source, target, q, false)
}

/// Whether [`check_condition_corr`] has any solution; stops at the first.
pub fn is_realizable(target: &DVector, q: i64) -> Result<bool> {
    let source = d_lens(target.p() as i64, q)?;
    Ok(!solve_with_source(&source, target, q, true)?.is_empty())
}
