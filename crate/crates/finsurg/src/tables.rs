//! The finite surgery census (T, O, I, half-integral and D-type tables):
//! CSV ingestion and per-row validation.
//!
//! CSV dialect: header `table,slope,filling,knot,genus,det,ddelta`, `#`
//! comment lines, slope as `p` or `p/2`, filling as `T(a/b)`, `-T(a/b)` or
//! empty, knot names with spaces in place of commas (`[11 2;3 2]`).

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use finsurg_core::alexander::{classical_invariants, lspace_check, torsion_coefficients};
use finsurg_core::arith::gcd;
use finsurg_core::{
    check_condition_corr, d_filling, d_surgery, d_torus_closed_form, lambda_match,
    ClassicalInvariants, DVector, FillingDesc, KnotDesc, RealizabilitySolution, SymLaurentPoly,
};
use serde::Serialize;

use crate::error::{Error, Result};

/// The five bundled census tables, in order.
pub const BUNDLED: [(&str, &str); 5] = [
    ("table_T.csv", include_str!("../../../data/table_T.csv")),
    ("table_O.csv", include_str!("../../../data/table_O.csv")),
    ("table_I.csv", include_str!("../../../data/table_I.csv")),
    ("table_half.csv", include_str!("../../../data/table_half.csv")),
    ("table_D.csv", include_str!("../../../data/table_D.csv")),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TableId {
    T,
    O,
    I,
    Half,
    D,
}

impl FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "T" => Ok(TableId::T),
            "O" => Ok(TableId::O),
            "I" => Ok(TableId::I),
            "Half" => Ok(TableId::Half),
            "D" => Ok(TableId::D),
            other => Err(format!("unknown table id {other:?}")),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TableId::T => "T",
            TableId::O => "O",
            TableId::I => "I",
            TableId::Half => "Half",
            TableId::D => "D",
        };
        f.write_str(s)
    }
}

/// A surgery slope `p/q` with `q > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

impl FromStr for Slope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("malformed slope {s:?}");
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: i64 = p.parse().map_err(|_| bad())?;
        let q: i64 = q.parse().map_err(|_| bad())?;
        if q <= 0 || gcd(p, q) != 1 {
            return Err(bad());
        }
        Ok(Slope { p, q })
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub table: TableId,
    pub slope: Slope,
    pub filling: Option<FillingDesc>,
    pub knot_name: String,
    /// Present when the sample knot is a torus knot, a cable of a torus
    /// knot, or one of the two pretzel knots (mirrors included).
    pub knot: Option<KnotDesc>,
    pub genus: u64,
    pub det: Option<u64>,
    pub ddelta: Option<i64>,
    /// 1-based line in the source.
    pub line: usize,
}

impl TableRow {
    /// Columns populated for this row, as a partial invariant triple.
    pub fn matches(&self, inv: &ClassicalInvariants) -> bool {
        inv.genus == self.genus
            && self.det.is_none_or(|d| d == inv.det)
            && self.ddelta.is_none_or(|d| d == inv.ddelta)
    }

    pub fn label(&self) -> String {
        format!("{} {} {}", self.table, self.slope, self.knot_name)
    }
}

fn parse_pair(body: &str) -> Option<(i64, i64)> {
    let mut it = body.split_whitespace().map(|x| x.parse::<i64>());
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Some((a, b)),
        _ => None,
    }
}

/// Resolves a sample-knot name to a constructible description, or `None`
/// when no polynomial is available for it. A leading `-` (mirror image)
/// does not change the Alexander polynomial.
pub fn resolve_knot(name: &str) -> Option<KnotDesc> {
    let name = name.trim();
    let name = name.strip_prefix('-').unwrap_or(name).trim();
    if let Some(body) = name.strip_prefix("T(").and_then(|r| r.strip_suffix(')')) {
        let (p, q) = parse_pair(body)?;
        return (gcd(p, q) == 1).then_some(KnotDesc::Torus { p, q });
    }
    if let Some(body) = name.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let (cable, companion) = body.split_once(';')?;
        let (p, q) = parse_pair(cable)?;
        let (r, s) = parse_pair(companion)?;
        if gcd(p, q) != 1 || gcd(r, s) != 1 {
            return None;
        }
        return Some(KnotDesc::Cable { p, q, companion: Box::new(KnotDesc::Torus { p: r, q: s }) });
    }
    match name.split_whitespace().collect::<String>().as_str() {
        "P(-237)" => Some(KnotDesc::pretzel_2_3_7()),
        "P(-239)" => Some(KnotDesc::pretzel_2_3_9()),
        _ => None,
    }
}

fn opt_field<T: FromStr>(raw: &str, what: &str, line: usize) -> Result<Option<T>> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(None);
    }
    raw.parse()
        .map(Some)
        .map_err(|_| Error::Table { line, msg: format!("bad {what} {raw:?}") })
}

/// Parses one census CSV stream.
pub fn load_tables<R: Read>(mut source: R) -> Result<Vec<TableRow>> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    // Comment lines are dropped here so that reported line numbers refer
    // to the original source.
    let mut kept = Vec::new();
    let mut body = String::with_capacity(text.len());
    for (i, l) in text.lines().enumerate() {
        if !l.trim_start().starts_with('#') {
            kept.push(i + 1);
            body.push_str(l);
            body.push('\n');
        }
    }
    let original = |pos: Option<&csv::Position>| {
        pos.and_then(|p| kept.get((p.line() as usize).saturating_sub(1)).copied()).unwrap_or(0)
    };
    let mut reader = csv::ReaderBuilder::new().flexible(false).from_reader(body.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Table { line: 0, msg: e.to_string() })?;
    let expected = ["table", "slope", "filling", "knot", "genus", "det", "ddelta"];
    if headers.iter().map(str::trim).ne(expected) {
        return Err(Error::Table {
            line: kept.first().copied().unwrap_or(1),
            msg: format!("expected header {}", expected.join(",")),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Table {
            line: original(e.position()),
            msg: match e.kind() {
                csv::ErrorKind::UnequalLengths { len, .. } => {
                    format!("expected {} fields, found {len}", expected.len())
                }
                _ => e.to_string(),
            },
        })?;
        let line = original(record.position());
        let field = |i: usize| record.get(i).unwrap_or("").trim();
        let table: TableId = field(0).parse().map_err(|msg| Error::Table { line, msg })?;
        let slope: Slope = field(1).parse().map_err(|msg| Error::Table { line, msg })?;
        let filling = match field(2) {
            "" => None,
            s => Some(
                s.parse::<FillingDesc>()
                    .map_err(|e| Error::Table { line, msg: e.to_string() })?,
            ),
        };
        let knot_name = field(3).to_string();
        if knot_name.is_empty() {
            return Err(Error::Table { line, msg: "missing knot name".into() });
        }
        let genus = opt_field::<u64>(field(4), "genus", line)?
            .ok_or_else(|| Error::Table { line, msg: "missing genus".into() })?;
        let det = opt_field(field(5), "det", line)?;
        let ddelta = opt_field(field(6), "ddelta", line)?;
        if slope.p <= 0 {
            return Err(Error::Table { line, msg: format!("slope {slope} is not positive") });
        }
        let expected_den = if table == TableId::Half { 2 } else { 1 };
        if slope.q != expected_den {
            return Err(Error::Table {
                line,
                msg: format!("table {table} needs slope denominator {expected_den}, got {slope}"),
            });
        }
        rows.push(TableRow {
            table,
            slope,
            filling,
            knot: resolve_knot(&knot_name),
            knot_name,
            genus,
            det,
            ddelta,
            line,
        });
    }
    Ok(rows)
}

/// The bundled census, all five tables.
pub fn bundled_tables() -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for (_, text) in BUNDLED {
        rows.extend(load_tables(text.as_bytes())?);
    }
    Ok(rows)
}

/// Every `*.csv` in `dir`, in file-name order.
pub fn load_dir(dir: &Path) -> Result<Vec<TableRow>> {
    let mut files: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Usage(format!("no .csv tables in {}", dir.display())));
    }
    let mut rows = Vec::new();
    for f in files {
        rows.extend(load_tables(std::fs::File::open(&f)?)?);
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub row: String,
    pub line: usize,
    /// No filling and no constructible knot: only the columns were checked.
    pub data_only: bool,
    pub checks: Vec<Check>,
    /// `(genus, det, ddelta)` of the solution matching the row, if any.
    pub recovered: Option<(u64, u64, i64)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }

    fn push(&mut self, name: &'static str, status: CheckStatus, detail: impl Into<String>) {
        self.checks.push(Check { name, status, detail: detail.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}", self.row)?;
        if self.data_only {
            f.write_str(" (data-only)")?;
        }
        for c in &self.checks {
            let s = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "skip",
            };
            write!(f, "\n  {:<14} {s:<5} {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn column_checks(row: &TableRow) -> Vec<String> {
    let mut problems = Vec::new();
    let p = row.slope.p;
    match row.table {
        TableId::Half if p % 2 == 0 => problems.push(format!("half-integral numerator {p} is even")),
        TableId::D if p % 4 != 0 => problems.push(format!("D-type slope {p} not divisible by 4")),
        TableId::O if p % 4 != 2 => problems.push(format!("O-type slope {p} is not 2 mod 4")),
        _ => {}
    }
    if let Some(fill) = &row.filling {
        if fill.a != p {
            problems.push(format!("filling {fill} has |H_1| = {} but slope numerator is {p}", fill.a));
        }
    }
    if let Some(det) = row.det {
        if det % 2 == 0 {
            problems.push(format!("determinant {det} is even"));
        }
    }
    if row.genus == 0 {
        problems.push("genus 0".into());
    }
    problems
}

fn describe(inv: &ClassicalInvariants) -> String {
    format!("(g={}, det={}, d2={})", inv.genus, inv.det, inv.ddelta)
}

/// The d-vector of the row's manifold when it can be computed: the trefoil
/// filling, or for D-type rows on `T(2k+1,2)` at slope `4n` with
/// `n` in `{k, k+1}`, the torus-knot closed form.
fn target_vector(row: &TableRow, poly: Option<&SymLaurentPoly>) -> Option<(DVector, String)> {
    if let Some(fill) = &row.filling {
        return d_filling(fill).ok().map(|d| (d, format!("{fill}")));
    }
    if row.table != TableId::D {
        return None;
    }
    let (odd, two) = match row.knot {
        Some(KnotDesc::Torus { p, q }) => (p.abs().max(q.abs()), p.abs().min(q.abs())),
        _ => return None,
    };
    if two != 2 || row.slope.p % 4 != 0 || poly.is_none() {
        return None;
    }
    let (m, n) = ((odd - 1) / 2, row.slope.p / 4);
    let d = d_torus_closed_form(m, n).ok()?;
    Some((d, format!("S^3_T({odd},2)({})", 4 * n)))
}

/// Runs every applicable check on one census row.
pub fn validate_row(row: &TableRow) -> ValidationReport {
    let mut report = ValidationReport {
        row: row.label(),
        line: row.line,
        data_only: row.filling.is_none() && row.knot.is_none(),
        checks: Vec::new(),
        recovered: None,
    };

    let problems = column_checks(row);
    if problems.is_empty() {
        report.push("columns", CheckStatus::Pass, "self-consistent");
    } else {
        report.push("columns", CheckStatus::Fail, problems.join("; "));
    }

    let poly = row.knot.as_ref().and_then(|k| k.polynomial().ok());
    match &poly {
        Some(poly) => {
            let inv = classical_invariants(poly);
            let status = if row.matches(&inv) { CheckStatus::Pass } else { CheckStatus::Fail };
            report.push("polynomial", status, format!("sample knot gives {}", describe(&inv)));
        }
        None => report.push("polynomial", CheckStatus::Skipped, "no constructible polynomial"),
    }

    let target = target_vector(row, poly.as_ref());
    if row.table == TableId::D {
        match (&target, &poly) {
            (Some((closed, what)), Some(poly)) => {
                let t = torsion_coefficients(poly);
                let status = match d_surgery(&t, row.slope.p, 1) {
                    Ok(d) if &d == closed => CheckStatus::Pass,
                    _ => CheckStatus::Fail,
                };
                report.push("d-closed-form", status, format!("closed form for {what} vs surgery formula"));
            }
            _ => report.push("d-closed-form", CheckStatus::Skipped, "no closed form for this row"),
        }
    }

    let mut matched: Option<RealizabilitySolution> = None;
    match &target {
        Some((d, what)) => match check_condition_corr(d, row.slope.q) {
            Ok(solutions) => {
                matched = solutions
                    .iter()
                    .filter(|s| row.matches(&s.invariants))
                    .find(|s| poly.as_ref().is_none_or(|p| &s.poly == p))
                    .cloned();
                let found: Vec<String> = solutions.iter().map(|s| describe(&s.invariants)).collect();
                let detail = format!("{what} at slope {}: {} solution(s) {}", row.slope, solutions.len(), found.join(" "));
                let status = if matched.is_some() { CheckStatus::Pass } else { CheckStatus::Fail };
                report.push("realizability", status, detail);
            }
            Err(e) => report.push("realizability", CheckStatus::Fail, e.to_string()),
        },
        None => report.push("realizability", CheckStatus::Skipped, "no computable d-vector"),
    }

    match &matched {
        Some(sol) => {
            report.recovered = Some((sol.genus(), sol.det(), sol.ddelta()));
            let status = if lspace_check(&sol.poly) { CheckStatus::Pass } else { CheckStatus::Fail };
            report.push("lspace", status, format!("recovered {}", sol.poly));
        }
        None => report.push("lspace", CheckStatus::Skipped, "nothing recovered"),
    }

    if row.table == TableId::D {
        match (row.det, row.ddelta) {
            (Some(det), Some(ddelta)) if det > 1 => {
                let m = row.slope.p / 4;
                match lambda_match(ddelta, m, det as i64) {
                    Ok(true) => report.push(
                        "casson-walker",
                        CheckStatus::Pass,
                        format!("|lambda(S^3_K({}))| = |lambda(P({det},{m}))|", row.slope.p),
                    ),
                    Ok(false) => report.push(
                        "casson-walker",
                        CheckStatus::Fail,
                        format!("|lambda(S^3_K({}))| != |lambda(P({det},{m}))|", row.slope.p),
                    ),
                    Err(e) => report.push("casson-walker", CheckStatus::Fail, e.to_string()),
                }
            }
            _ => report.push("casson-walker", CheckStatus::Skipped, "needs det > 1 and d2"),
        }
    }
    report
}
