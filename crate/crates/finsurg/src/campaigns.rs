//! Parameter sweeps over lens spaces, census rows and prism manifolds.
//!
//! Every sweep shards its work (by `p` or by table row) over the current
//! rayon pool, gives each worker its own [`LensCache`], and assembles hits
//! in a fixed order, so reports do not depend on the thread count. A
//! [`Budget`] bounds wall-clock time; an exhausted budget yields a partial
//! report with `complete = false`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use finsurg_core::alexander::classical_invariants;
use finsurg_core::arith::gcd;
use finsurg_core::realize::solve_with_source;
use finsurg_core::{
    d_filling, lambda_match, lambda_prism, lambda_surgery, LensCache, PrismDesc, Rational,
    SymLaurentPoly,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tables::{TableId, TableRow};

/// Largest lens-space order considered by the distance-two sweep.
pub const DISTANCE_TWO_P_MAX: i64 = 223;

/// Optional wall-clock limit shared by the workers of one sweep.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn new(limit: Option<Duration>) -> Self {
        Budget { deadline: limit.map(|d| Instant::now() + d) }
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport<H> {
    pub campaign: String,
    pub parameters: BTreeMap<String, String>,
    pub hits: Vec<H>,
    /// False when the budget ran out before every shard was processed.
    pub complete: bool,
    pub runtime_ms: u64,
}

impl<H: Serialize + fmt::Display> SweepReport<H> {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Human-readable summary; omits the runtime so that it is reproducible.
    pub fn summary(&self) -> String {
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let mut out = format!(
            "campaign {} ({}): {} hit(s){}\n",
            self.campaign,
            params.join(", "),
            self.hits.len(),
            if self.complete { "" } else { ", INCOMPLETE (budget exhausted)" }
        );
        for h in &self.hits {
            out.push_str(&format!("  {h}\n"));
        }
        out
    }
}

impl<H> SweepReport<H> {
    /// Same campaign, parameters, hits and completeness; runtime ignored.
    pub fn same_outcome(&self, other: &Self) -> bool
    where
        H: PartialEq,
    {
        self.campaign == other.campaign
            && self.parameters == other.parameters
            && self.hits == other.hits
            && self.complete == other.complete
    }
}

fn report<H>(
    campaign: &str,
    parameters: &[(&str, String)],
    hits: Vec<H>,
    complete: bool,
    start: Instant,
) -> SweepReport<H> {
    SweepReport {
        campaign: campaign.to_string(),
        parameters: parameters.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        hits,
        complete,
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

/// Maps `f` over `items` in parallel with one cache per worker. Items whose
/// turn comes after the budget expires are dropped; the flag reports
/// whether every item was processed. Output order follows `items`.
fn sharded<I, T, F>(items: &[I], budget: &Budget, f: F) -> Result<(Vec<(I, T)>, bool)>
where
    I: Sync + Send + Clone,
    T: Send,
    F: Fn(&mut LensCache, &I) -> Result<T> + Sync,
{
    let out: Vec<Option<Result<T>>> = items
        .par_iter()
        .map_init(LensCache::new, |cache, item| (!budget.expired()).then(|| f(cache, item)))
        .collect();
    let complete = out.iter().all(Option::is_some);
    let mut done = Vec::with_capacity(out.len());
    for (item, r) in items.iter().zip(out) {
        if let Some(r) = r {
            done.push((item.clone(), r?));
        }
    }
    Ok((done, complete))
}

/// A recovered Alexander polynomial with its classical invariants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PolyInfo {
    pub alexander: String,
    /// `a_0, ..., a_g` of `a_0 + sum a_i (t^i + t^-i)`.
    pub coeffs: Vec<i64>,
    pub genus: u64,
    pub det: u64,
    pub ddelta: i64,
}

impl From<&SymLaurentPoly> for PolyInfo {
    fn from(poly: &SymLaurentPoly) -> Self {
        let inv = classical_invariants(poly);
        PolyInfo {
            alexander: poly.to_string(),
            coeffs: poly.coeffs().to_vec(),
            genus: inv.genus,
            det: inv.det,
            ddelta: inv.ddelta,
        }
    }
}

impl fmt::Display for PolyInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (g={}, det={}, d2={})", self.alexander, self.genus, self.det, self.ddelta)
    }
}

/// Every polynomial recovered from `L(p, q)` at slope `p`, over all `q`
/// coprime to `p`, with the smallest witnessing `q` for each.
pub fn lens_polynomials(cache: &mut LensCache, p: i64) -> Result<BTreeMap<SymLaurentPoly, i64>> {
    let source = cache.get(p, 1)?;
    let mut out = BTreeMap::new();
    for q in 1..p.max(2) {
        if gcd(p, q) != 1 {
            continue;
        }
        let target = cache.get(p, q)?;
        for sol in solve_with_source(&source, &target, 1, false)? {
            out.entry(sol.poly).or_insert(q);
        }
    }
    Ok(out)
}

/// Whether `poly` is recovered from `L(p, q)` at slope `p`.
pub fn lens_realizes(p: i64, q: i64, poly: &SymLaurentPoly) -> Result<bool> {
    let mut cache = LensCache::new();
    let source = cache.get(p, 1)?;
    let target = cache.get(p, q)?;
    Ok(solve_with_source(&source, &target, 1, false)?.iter().any(|s| &s.poly == poly))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SharedPoly {
    pub poly: PolyInfo,
    /// `L(p, q1)` realizes the polynomial at slope `p`.
    pub q1: i64,
    /// `L(p + 1, q2)` realizes it at slope `p + 1`.
    pub q2: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsecutiveHit {
    pub p: i64,
    pub shared: Vec<SharedPoly>,
    pub distinct_polynomials: usize,
}

impl fmt::Display for ConsecutiveHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} ({} polynomial(s))", self.p, self.distinct_polynomials)?;
        for s in &self.shared {
            write!(f, "; L({},{}) and L({},{}): {}", self.p, s.q1, self.p + 1, s.q2, s.poly)?;
        }
        Ok(())
    }
}

impl ConsecutiveHit {
    /// Re-runs the two single realizability checks behind every witness.
    pub fn reverify(&self) -> Result<bool> {
        for s in &self.shared {
            let poly = SymLaurentPoly::from_half(s.poly.coeffs.clone())?;
            if !lens_realizes(self.p, s.q1, &poly)? || !lens_realizes(self.p + 1, s.q2, &poly)? {
                return Ok(false);
            }
        }
        Ok(!self.shared.is_empty())
    }
}

/// All `p <= p_max` such that some nontrivial Alexander polynomial is
/// recovered both from a lens space `L(p, q1)` at slope `p` and from a lens
/// space `L(p + 1, q2)` at slope `p + 1`.
pub fn sweep_consecutive_lens(p_max: i64, budget: &Budget) -> Result<SweepReport<ConsecutiveHit>> {
    if p_max < 2 {
        return Err(Error::Usage(format!("p_max must be at least 2, got {p_max}")));
    }
    let start = Instant::now();
    let ps: Vec<i64> = (2..=p_max + 1).collect();
    let (done, complete) = sharded(&ps, budget, |cache, &p| {
        let mut polys = lens_polynomials(cache, p)?;
        polys.remove(&SymLaurentPoly::one());
        Ok(polys)
    })?;
    let by_p: BTreeMap<i64, BTreeMap<SymLaurentPoly, i64>> = done.into_iter().collect();
    let mut hits = Vec::new();
    for (&p, here) in &by_p {
        let Some(next) = by_p.get(&(p + 1)) else { continue };
        let shared: Vec<SharedPoly> = here
            .iter()
            .filter_map(|(poly, &q1)| {
                next.get(poly).map(|&q2| SharedPoly { poly: PolyInfo::from(poly), q1, q2 })
            })
            .collect();
        if !shared.is_empty() {
            hits.push(ConsecutiveHit { p, distinct_polynomials: shared.len(), shared });
        }
    }
    Ok(report("consecutive-lens", &[("p_max", p_max.to_string())], hits, complete, start))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LensWitness {
    pub poly: PolyInfo,
    pub q: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceTwoHit {
    pub knot: String,
    pub alpha: i64,
    pub filling: String,
    pub p: i64,
    /// Polynomials recovered on both sides, each with a lens witness `q`.
    pub common: Vec<LensWitness>,
}

impl fmt::Display for DistanceTwoHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {} and L({},q) at {}:", self.filling, self.alpha, self.p, self.p)?;
        for w in &self.common {
            write!(f, " q={} {};", w.q, w.poly)?;
        }
        write!(f, " sample {}", self.knot)
    }
}

impl DistanceTwoHit {
    pub fn reverify(&self) -> Result<bool> {
        let fill = self.filling.parse()?;
        let mut cache = LensCache::new();
        let alpha_source = cache.get(self.alpha, 1)?;
        let alpha_side = solve_with_source(&alpha_source, &d_filling(&fill)?, 1, false)?;
        for w in &self.common {
            let poly = SymLaurentPoly::from_half(w.poly.coeffs.clone())?;
            if !alpha_side.iter().any(|s| s.poly == poly) || !lens_realizes(self.p, w.q, &poly)? {
                return Ok(false);
            }
        }
        Ok(!self.common.is_empty())
    }
}

/// For each integral census row of the T and I tables, compares the
/// polynomials recovered from its filling at slope `alpha` with those
/// recovered from lens spaces `L(p, q)`, `p = alpha +- 2 <= 223`, at slope
/// `p`. Hits are sorted by sample knot, then `(alpha, p)`.
pub fn sweep_distance_two(rows: &[TableRow], budget: &Budget) -> Result<SweepReport<DistanceTwoHit>> {
    let start = Instant::now();
    let rows: Vec<TableRow> = rows
        .iter()
        .filter(|r| matches!(r.table, TableId::T | TableId::I) && r.slope.q == 1 && r.filling.is_some())
        .cloned()
        .collect();
    let ps: Vec<i64> = rows
        .iter()
        .flat_map(|r| [r.slope.p - 2, r.slope.p + 2])
        .filter(|&p| (1..=DISTANCE_TWO_P_MAX).contains(&p))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let (lens, lens_complete) = sharded(&ps, budget, |cache, &p| lens_polynomials(cache, p))?;
    let lens: BTreeMap<i64, BTreeMap<SymLaurentPoly, i64>> = lens.into_iter().collect();

    let (alpha_side, rows_complete) = sharded(&rows, budget, |cache, row| {
        let fill = row.filling.as_ref().expect("filtered on filling");
        let source = cache.get(row.slope.p, 1)?;
        let sols = solve_with_source(&source, &d_filling(fill)?, 1, false)?;
        Ok(sols.into_iter().map(|s| s.poly).collect::<BTreeSet<_>>())
    })?;

    let mut hits = Vec::new();
    for (row, polys) in &alpha_side {
        let alpha = row.slope.p;
        for p in [alpha - 2, alpha + 2] {
            let Some(lens_polys) = lens.get(&p) else { continue };
            let common: Vec<LensWitness> = polys
                .iter()
                .filter_map(|poly| lens_polys.get(poly).map(|&q| LensWitness { poly: poly.into(), q }))
                .collect();
            if !common.is_empty() {
                hits.push(DistanceTwoHit {
                    knot: row.knot_name.clone(),
                    alpha,
                    filling: row.filling.expect("filtered on filling").to_string(),
                    p,
                    common,
                });
            }
        }
    }
    hits.sort_by(|a, b| (&a.knot, a.alpha, a.p).cmp(&(&b.knot, b.alpha, b.p)));
    hits.dedup();
    let params = [
        ("rows", rows.len().to_string()),
        ("p_max", DISTANCE_TWO_P_MAX.to_string()),
    ];
    Ok(report("distance-two", &params, hits, lens_complete && rows_complete, start))
}

/// A census row whose Casson-Walker invariant at a D-type slope `4m`
/// agrees in absolute value with that of the prism manifold `P(n, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrismHit {
    pub knot: String,
    pub alpha: i64,
    pub d_slope: i64,
    pub m: i64,
    pub n: i64,
    pub lambda: String,
    /// For `4m <= 32`: whether the D-type table lists this knot at `4m`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_d_table: Option<bool>,
}

impl fmt::Display for PrismHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}, {}, {}}} m={} |lambda|={} vs P({},{})",
            self.alpha, self.d_slope, self.knot, self.m, self.lambda, self.n, self.m
        )?;
        if let Some(listed) = self.in_d_table {
            write!(f, ", D table {}", if listed { "lists it" } else { "does not list it" })?;
        }
        Ok(())
    }
}

impl PrismHit {
    pub fn reverify(&self, ddelta: i64) -> Result<bool> {
        Ok(lambda_match(ddelta, self.m, self.n)?)
    }
}

fn prism_hit(row: &TableRow, ddelta: i64, m: i64, n: i64) -> Result<Option<PrismHit>> {
    if m < 1 || n < 2 || gcd(n, m) != 1 {
        return Ok(None);
    }
    if !lambda_match(ddelta, m, n)? {
        return Ok(None);
    }
    Ok(Some(PrismHit {
        knot: row.knot_name.clone(),
        alpha: row.slope.p,
        d_slope: 4 * m,
        m,
        n,
        lambda: lambda_surgery(ddelta, 4 * m, 1)?.abs().to_string(),
        in_d_table: None,
    }))
}

/// O-type rows `alpha = 4m + 2` against the D-type slopes `4m` and
/// `4m + 4` with the prism manifolds `P(3, m)` and `P(3, m + 1)`.
pub fn sweep_dtype_neighbors(rows: &[TableRow], budget: &Budget) -> Result<SweepReport<PrismHit>> {
    let start = Instant::now();
    let rows: Vec<TableRow> = rows.iter().filter(|r| r.table == TableId::O).cloned().collect();
    let (done, complete) = sharded(&rows, budget, |_, row| {
        let Some(ddelta) = row.ddelta else { return Ok(Vec::new()) };
        let m = (row.slope.p - 2) / 4;
        let mut out = Vec::new();
        for mm in [m, m + 1] {
            out.extend(prism_hit(row, ddelta, mm, 3)?);
        }
        Ok(out)
    })?;
    let hits = done.into_iter().flat_map(|(_, h)| h).collect();
    Ok(report("dtype-neighbors", &[("rows", rows.len().to_string()), ("n", "3".into())], hits, complete, start))
}

/// Integral I-type rows with `det > 1`, `alpha = 4m + 3` or `4m - 3`,
/// against `P(det, m)` at the D-type slope `4m`. Hits with `4m <= 32` are
/// cross-checked against the D-type rows in `d_rows`.
pub fn sweep_dtype_distance3(
    rows: &[TableRow],
    d_rows: &[TableRow],
    budget: &Budget,
) -> Result<SweepReport<PrismHit>> {
    let start = Instant::now();
    let rows: Vec<TableRow> = rows
        .iter()
        .filter(|r| r.table == TableId::I && r.slope.q == 1 && r.det.is_some_and(|d| d > 1))
        .cloned()
        .collect();
    let (done, complete) = sharded(&rows, budget, |_, row| {
        let (Some(ddelta), Some(det)) = (row.ddelta, row.det) else { return Ok(Vec::new()) };
        let alpha = row.slope.p;
        let mut out = Vec::new();
        for (num, sign) in [(alpha - 3, 1), (alpha + 3, -1)] {
            if num % 4 != 0 || 4 * (num / 4) + 3 * sign != alpha {
                continue;
            }
            out.extend(prism_hit(row, ddelta, num / 4, det as i64)?);
        }
        Ok(out)
    })?;
    let mut hits: Vec<PrismHit> = done.into_iter().flat_map(|(_, h)| h).collect();
    for h in &mut hits {
        if h.d_slope <= 32 {
            h.in_d_table = Some(d_rows.iter().any(|r| {
                r.table == TableId::D && r.slope.p == h.d_slope && r.knot_name == h.knot
            }));
        }
    }
    let params = [("rows", rows.len().to_string()), ("table5_cutoff", "32".to_string())];
    Ok(report("dtype-distance3", &params, hits, complete, start))
}

/// A value of `m` at which the forced polynomial of the `n = 4m + 1` case
/// fails one of the checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetBoundCounterexample {
    pub m: i64,
    pub reason: String,
}

impl fmt::Display for DetBoundCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}: {}", self.m, self.reason)
    }
}

/// `1 + sum_{i=1}^{2m} (-1)^i (t^i + t^-i)`.
pub fn forced_polynomial(m: i64) -> Result<SymLaurentPoly> {
    let coeffs = (0..=2 * m).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    Ok(SymLaurentPoly::from_half(coeffs)?)
}

fn det_bound_check(m: i64) -> Result<Option<String>> {
    let poly = forced_polynomial(m)?;
    let inv = classical_invariants(&poly);
    let ddelta = 4 * m * m + 2 * m;
    if inv.ddelta != ddelta {
        return Ok(Some(format!("Delta''(1) = {}, expected {ddelta}", inv.ddelta)));
    }
    if inv.det != (4 * m + 1) as u64 {
        return Ok(Some(format!("det = {}, expected {}", inv.det, 4 * m + 1)));
    }
    let surgery = lambda_surgery(ddelta, 4 * m, 1)?;
    let expected = Rational::new(16 * m * m + 18 * m - 1, 24 * m)?;
    if surgery != expected {
        return Ok(Some(format!("lambda(S^3_K(4m)) = {surgery}, closed form {expected}")));
    }
    let prism = lambda_prism(&PrismDesc::new(4 * m + 1, m)?)?;
    let expected = Rational::new(2 * m * m - 18 * m + 1, 24 * m)?;
    if prism != expected {
        return Ok(Some(format!("lambda(-P(4m+1,m)) = {prism}, closed form {expected}")));
    }
    if lambda_match(ddelta, m, 4 * m + 1)? {
        return Ok(Some(format!("|{surgery}| = |{prism}|")));
    }
    Ok(None)
}

/// For every `m <= m_max`: the forced polynomial has `Delta''(1) = 4m^2+2m`
/// and determinant `4m + 1`, both Casson-Walker closed forms hold, and
/// `|lambda(S^3_K(4m))| != |lambda(-P(4m+1, m))|`. Hits are failures.
pub fn sweep_prism_det_bound(m_max: i64, budget: &Budget) -> Result<SweepReport<DetBoundCounterexample>> {
    if m_max < 1 {
        return Err(Error::Usage(format!("m_max must be at least 1, got {m_max}")));
    }
    let start = Instant::now();
    let ms: Vec<i64> = (1..=m_max).collect();
    let (done, complete) = sharded(&ms, budget, |_, &m| det_bound_check(m))?;
    let hits = done
        .into_iter()
        .filter_map(|(m, r)| r.map(|reason| DetBoundCounterexample { m, reason }))
        .collect();
    Ok(report("prism-det-bound", &[("m_max", m_max.to_string())], hits, complete, start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::bundled_tables;

    #[test]
    fn consecutive_small() {
        let r = sweep_consecutive_lens(17, &Budget::unlimited()).unwrap();
        assert!(r.hits.is_empty());
        assert!(r.complete);
        let r = sweep_consecutive_lens(31, &Budget::unlimited()).unwrap();
        let ps: Vec<i64> = r.hits.iter().map(|h| h.p).collect();
        assert_eq!(ps, [18, 30, 31]);
        for h in &r.hits {
            assert!(h.reverify().unwrap());
        }
        assert!(sweep_consecutive_lens(1, &Budget::unlimited()).is_err());
    }

    #[test]
    fn exhausted_budget_is_incomplete() {
        let budget = Budget::new(Some(Duration::ZERO));
        let r = sweep_consecutive_lens(50, &budget).unwrap();
        assert!(!r.complete);
        assert!(r.summary().contains("INCOMPLETE"));
    }

    #[test]
    fn neighbors_and_det_bound() {
        let rows = bundled_tables().unwrap();
        let r = sweep_dtype_neighbors(&rows, &Budget::unlimited()).unwrap();
        let pairs: Vec<(i64, i64)> = r.hits.iter().map(|h| (h.alpha, h.d_slope)).collect();
        // (10, 8): T(3,2) at 8 against P(3,2), both |lambda| = 3/16
        assert_eq!(pairs, [(2, 4), (10, 8), (50, 52), (58, 56)]);
        let r = sweep_prism_det_bound(20, &Budget::unlimited()).unwrap();
        assert!(r.hits.is_empty() && r.complete);
    }

    #[test]
    fn forced_polynomial_small() {
        let p = forced_polynomial(1).unwrap();
        assert_eq!(p.to_string(), "t^2 - t + 1 - t^-1 + t^-2");
        let inv = classical_invariants(&p);
        assert_eq!((inv.det, inv.ddelta), (5, 6));
        assert_eq!(lambda_surgery(6, 4, 1).unwrap(), Rational::new(11, 8).unwrap());
        let prism = lambda_prism(&PrismDesc::new(5, 1).unwrap()).unwrap();
        assert_eq!(prism, Rational::new(-5, 8).unwrap());
        assert_eq!(lambda_surgery(20, 8, 1).unwrap(), Rational::new(33, 16).unwrap());
    }

    #[test]
    fn json_shape() {
        let r = sweep_prism_det_bound(3, &Budget::unlimited()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(v["campaign"], "prism-det-bound");
        assert_eq!(v["parameters"]["m_max"], "3");
        assert!(v["hits"].as_array().unwrap().is_empty());
        assert_eq!(v["complete"], true);
        assert!(v["runtime_ms"].is_u64());
    }
}
