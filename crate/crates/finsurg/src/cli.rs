//! The `finsurg` command: argument parsing, dispatch and output.
//!
//! Exit codes: 0 on success, 1 on domain errors (including failed table
//! validation), 2 on usage errors.

use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use finsurg_core::alexander::torsion_coefficients;
use finsurg_core::dinv::slope_in_lspace_range;
use finsurg_core::realize::solve_with_source;
use finsurg_core::{
    d_filling, d_lens, d_surgery, dedekind_sum, lambda_prism, lambda_surgery, DVector,
    FillingDesc, PrismDesc, RealizabilitySolution, SymLaurentPoly,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::campaigns::{self, Budget, PolyInfo, SweepReport};
use crate::error::{Error, Result};
use crate::tables::{self, resolve_knot, validate_row, Slope, TableId, TableRow, ValidationReport};

const CONVENTIONS: &str = "\
Conventions: slopes are written p/q (\"/1\" may be omitted); rationals are printed as num/den.
Filling descriptors are T(a/b) or -T(a/b): a/b filling of the right-handed trefoil exterior,
the leading sign choosing the orientation. Knots are T(p,q), cables [p,q;r,s] (the (p,q)-cable
of T(r,s)), P(-2,3,7) or P(-2,3,9); the census spelling with spaces, T(3 2), also works.";

#[derive(Debug, Parser)]
#[command(name = "finsurg", version, about = "Exact correction terms, Casson-Walker invariants and finite surgery searches", after_help = CONVENTIONS)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for campaigns and table validation (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Directory of census CSV files (overrides FINSURG_TABLES and the bundled tables).
    #[arg(long, global = true, value_name = "DIR")]
    pub tables: Option<PathBuf>,
    /// Wall-clock budget for campaigns, in seconds; an exhausted budget yields a partial report.
    #[arg(long, global = true, value_name = "SECS")]
    pub budget_secs: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dedekind sum s(q, p).
    Dedekind {
        #[arg(allow_negative_numbers = true)]
        q: i64,
        p: i64,
    },
    /// Correction terms d(L(p,q), i) for i = 0..p-1.
    #[command(after_help = CONVENTIONS)]
    DLens {
        /// Lens space as p/q.
        lens: Slope,
    },
    /// Correction terms of p/q surgery on a knot with an L-space surgery.
    #[command(after_help = CONVENTIONS)]
    DSurgery {
        #[command(flatten)]
        knot: KnotArg,
        /// Surgery slope p/q.
        #[arg(long)]
        slope: Slope,
    },
    /// Correction terms of a trefoil filling T(a/b) or -T(a/b).
    #[command(after_help = CONVENTIONS)]
    DFilling {
        #[arg(allow_hyphen_values = true)]
        filling: FillingDesc,
    },
    /// Alexander polynomials of knots whose surgery at --slope could yield the given manifold.
    #[command(after_help = CONVENTIONS)]
    Realize {
        #[command(flatten)]
        target: TargetArg,
        /// Surgery slope p/q; p must equal |H_1| of the target.
        #[arg(long)]
        slope: Slope,
    },
    /// Casson-Walker invariant of p/q surgery, from Delta''(1).
    #[command(after_help = CONVENTIONS)]
    LambdaSurgery {
        #[command(flatten)]
        knot: DdeltaArg,
        /// Surgery slope p/q (p may be negative).
        #[arg(long, allow_hyphen_values = true)]
        slope: Slope,
    },
    /// Casson-Walker invariant of -P(n, m); negative m reverses orientation.
    LambdaPrism {
        n: i64,
        #[arg(allow_negative_numbers = true)]
        m: i64,
    },
    /// Validate census rows: columns, polynomials, realizability, L-space and Casson-Walker checks.
    TablesValidate {
        /// Restrict to one table: T, O, I, Half or D.
        #[arg(long)]
        table: Option<TableId>,
    },
    /// Run a search campaign.
    Campaign {
        #[command(subcommand)]
        campaign: CampaignCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum CampaignCmd {
    /// p <= pmax with a nontrivial polynomial realized by lens spaces at both p and p+1.
    ConsecutiveLens {
        #[arg(long, default_value_t = 222)]
        pmax: i64,
    },
    /// Integral T and I census slopes alpha against lens spaces at alpha +- 2.
    DistanceTwo,
    /// O-type slopes 4m+2 against the D-type slopes 4m and 4m+4.
    DtypeNeighbors,
    /// I-type slopes 4m +- 3 with det > 1 against the D-type slope 4m.
    DtypeDistance3,
    /// The determinant bound n < 4m for D-type surgeries.
    PrismDetBound {
        #[arg(long, default_value_t = 200)]
        mmax: i64,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct KnotArg {
    /// Sample knot, e.g. "T(3,2)" or "[11,2;3,2]".
    #[arg(long)]
    knot: Option<String>,
    /// Alexander polynomial as a_0,a_1,...,a_g for a_0 + sum a_i (t^i + t^-i).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alexander: Option<Vec<i64>>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct DdeltaArg {
    /// Sample knot, e.g. "T(3,2)".
    #[arg(long)]
    knot: Option<String>,
    /// Delta''(1) of the knot.
    #[arg(long, allow_negative_numbers = true)]
    ddelta: Option<i64>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct TargetArg {
    /// Lens space L(p,q) as p/q.
    #[arg(long)]
    lens: Option<Slope>,
    /// Trefoil filling, e.g. "-T(17/2)".
    #[arg(long, allow_hyphen_values = true)]
    filling: Option<FillingDesc>,
}

fn knot_polynomial(knot: &Option<String>, alexander: &Option<Vec<i64>>) -> Result<SymLaurentPoly> {
    if let Some(coeffs) = alexander {
        return Ok(SymLaurentPoly::from_half(coeffs.clone())?);
    }
    let name = knot.as_deref().unwrap_or_default();
    let desc = resolve_knot(&name.replace(',', " "))
        .ok_or_else(|| Error::Usage(format!("cannot construct a polynomial for knot {name:?}")))?;
    Ok(desc.polynomial()?)
}

fn dvec_json(d: &DVector) -> serde_json::Value {
    json!(d.values().iter().map(ToString::to_string).collect::<Vec<_>>())
}

#[derive(Serialize)]
struct SolutionJson {
    #[serde(flatten)]
    poly: PolyInfo,
    torsion: Vec<i64>,
    underdetermined: bool,
    phis: Vec<[u64; 2]>,
}

impl From<&RealizabilitySolution> for SolutionJson {
    fn from(s: &RealizabilitySolution) -> Self {
        SolutionJson {
            poly: PolyInfo::from(&s.poly),
            torsion: s.t.as_slice().to_vec(),
            underdetermined: s.underdetermined,
            phis: s.phis.iter().map(|f| [f.a, f.b]).collect(),
        }
    }
}

struct Ctx<'a> {
    json: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, text: &str, value: serde_json::Value) -> Result<()> {
        if self.json {
            writeln!(self.out, "{}", serde_json::to_string_pretty(&value)?)?;
        } else {
            writeln!(self.out, "{text}")?;
        }
        Ok(())
    }

    fn emit_report<H>(&mut self, report: &SweepReport<H>) -> Result<()>
    where
        H: Serialize + std::fmt::Display,
    {
        if self.json {
            writeln!(self.out, "{}", report.to_json()?)?;
        } else {
            write!(self.out, "{}", report.summary())?;
            writeln!(self.err, "runtime {} ms", report.runtime_ms)?;
        }
        Ok(())
    }
}

/// Tables from `--tables`, else `$FINSURG_TABLES`, else the bundled census.
pub fn load_census(dir: Option<&PathBuf>) -> Result<Vec<TableRow>> {
    match dir.cloned().or_else(|| std::env::var_os("FINSURG_TABLES").map(PathBuf::from)) {
        Some(dir) => tables::load_dir(&dir),
        None => tables::bundled_tables(),
    }
}

fn execute(cli: &Cli, ctx: &mut Ctx<'_>, pool: &rayon::ThreadPool) -> Result<i32> {
    let budget = match cli.budget_secs {
        Some(s) if !(s.is_finite() && s >= 0.0) => {
            return Err(Error::Usage(format!("invalid budget {s}")));
        }
        s => Budget::new(s.map(Duration::from_secs_f64)),
    };
    match &cli.command {
        Command::Dedekind { q, p } => {
            let s = dedekind_sum(*q, *p)?;
            ctx.emit(&s.to_string(), json!({ "q": q, "p": p, "value": s.to_string() }))?;
        }
        Command::DLens { lens } => {
            let d = d_lens(lens.p, lens.q)?;
            ctx.emit(&d.to_string(), json!({ "p": lens.p, "q": lens.q, "d": dvec_json(&d) }))?;
        }
        Command::DSurgery { knot, slope } => {
            let poly = knot_polynomial(&knot.knot, &knot.alexander)?;
            let t = torsion_coefficients(&poly);
            if !slope_in_lspace_range(t.genus(), slope.p, slope.q) {
                writeln!(
                    ctx.err,
                    "warning: slope {slope} is below 2g - 1 = {}; the surgery formula may not apply",
                    2 * t.genus() as i64 - 1
                )?;
            }
            let d = d_surgery(&t, slope.p, slope.q)?;
            let value = json!({ "alexander": poly.to_string(), "slope": slope.to_string(), "d": dvec_json(&d) });
            ctx.emit(&d.to_string(), value)?;
        }
        Command::DFilling { filling } => {
            let d = d_filling(filling)?;
            ctx.emit(&d.to_string(), json!({ "filling": filling.to_string(), "d": dvec_json(&d) }))?;
        }
        Command::Realize { target, slope } => {
            let (d, name) = match (&target.lens, &target.filling) {
                (Some(l), _) => (d_lens(l.p, l.q)?, format!("L({},{})", l.p, l.q)),
                (_, Some(f)) => (d_filling(f)?, f.to_string()),
                _ => unreachable!("clap enforces one target"),
            };
            if d.p() as i64 != slope.p {
                return Err(Error::Usage(format!(
                    "slope numerator {} differs from |H_1({name})| = {}",
                    slope.p,
                    d.p()
                )));
            }
            let source = d_lens(slope.p, slope.q)?;
            let sols = solve_with_source(&source, &d, slope.q, false)?;
            let mut text = format!("{} solution(s) for {name} at slope {slope}", sols.len());
            for s in &sols {
                text.push_str(&format!(
                    "\n  {}\n    torsion {:?}{}",
                    PolyInfo::from(&s.poly),
                    s.t.as_slice(),
                    if s.underdetermined { " (last coefficient minimal completion)" } else { "" }
                ));
                let phis: Vec<String> = s.phis.iter().map(|f| format!("i -> {}i + {}", f.a, f.b)).collect();
                text.push_str(&format!("\n    phi {}", phis.join(", ")));
            }
            let sols: Vec<SolutionJson> = sols.iter().map(Into::into).collect();
            ctx.emit(&text, json!({ "target": name, "slope": slope.to_string(), "solutions": sols }))?;
        }
        Command::LambdaSurgery { knot, slope } => {
            let ddelta = match knot.ddelta {
                Some(d) => d,
                None => finsurg_core::classical_invariants(&knot_polynomial(&knot.knot, &None)?).ddelta,
            };
            let l = lambda_surgery(ddelta, slope.p, slope.q)?;
            ctx.emit(&l.to_string(), json!({ "ddelta": ddelta, "slope": slope.to_string(), "lambda": l.to_string() }))?;
        }
        Command::LambdaPrism { n, m } => {
            let prism = PrismDesc::new(*n, *m)?;
            let l = lambda_prism(&prism)?;
            ctx.emit(&l.to_string(), json!({ "n": n, "m": m, "lambda": l.to_string() }))?;
        }
        Command::TablesValidate { table } => {
            let rows: Vec<TableRow> = load_census(cli.tables.as_ref())?
                .into_iter()
                .filter(|r| table.is_none_or(|t| r.table == t))
                .collect();
            let reports: Vec<ValidationReport> = pool.install(|| rows.par_iter().map(validate_row).collect());
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if ctx.json {
                let value = json!({ "rows": reports.len(), "failed": failed, "reports": reports });
                writeln!(ctx.out, "{}", serde_json::to_string_pretty(&value)?)?;
            } else {
                for r in &reports {
                    writeln!(ctx.out, "{r}")?;
                }
                writeln!(ctx.out, "{} row(s), {failed} failed", reports.len())?;
            }
            return Ok(if failed == 0 { 0 } else { 1 });
        }
        Command::Campaign { campaign } => match campaign {
            CampaignCmd::ConsecutiveLens { pmax } => {
                ctx.emit_report(&pool.install(|| campaigns::sweep_consecutive_lens(*pmax, &budget))?)?
            }
            CampaignCmd::DistanceTwo => {
                let rows = load_census(cli.tables.as_ref())?;
                ctx.emit_report(&pool.install(|| campaigns::sweep_distance_two(&rows, &budget))?)?
            }
            CampaignCmd::DtypeNeighbors => {
                let rows = load_census(cli.tables.as_ref())?;
                ctx.emit_report(&pool.install(|| campaigns::sweep_dtype_neighbors(&rows, &budget))?)?
            }
            CampaignCmd::DtypeDistance3 => {
                let rows = load_census(cli.tables.as_ref())?;
                ctx.emit_report(&pool.install(|| campaigns::sweep_dtype_distance3(&rows, &rows, &budget))?)?
            }
            CampaignCmd::PrismDetBound { mmax } => {
                ctx.emit_report(&pool.install(|| campaigns::sweep_prism_det_bound(*mmax, &budget))?)?
            }
        },
    }
    Ok(0)
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let mut ctx = Ctx { json: cli.json, out, err };
    match execute(&cli, &mut ctx, &pool) {
        Ok(code) => code,
        Err(Error::Usage(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}\n\nFor more information, try '--help'.");
            2
        }
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            1
        }
    }
}
