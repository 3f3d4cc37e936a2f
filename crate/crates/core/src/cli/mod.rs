//! `tripowmin solve | sequence | verify`.
//!
//! Exit codes: 0 success, 2 input validation, 3 verification failure.
//! Reports go to the `out` writer, diagnostics to `err`.

mod format;
mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::closed_form::{critical_point_sequence, limit_point, solve, DerivedConstants, Exponent, Solution};
use crate::error::Error;
use crate::geometry::{canonicalize, CanonicalTriangle, GeneralTriangle, Isometry, Point};
use crate::kkt::{kkt_residual, KktReport};
use crate::oracle::{compare, compare_n1, DiscrepancyReport, OracleConfig};

pub use format::sig12;
pub use verify::{run_suite, TrialOutcome, VerifySettings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// KKT tolerance before scaling by the gradient magnitude at the minimizer.
const KKT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "tripowmin", version, about = "Minimal sum of powered distances from the sides of a triangle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimizer, minimum value and derived constants for one exponent.
    Solve(SolveArgs),
    /// Minimizers for a list of exponents and their distance to the incenter.
    Sequence(SequenceArgs),
    /// Randomized checks against the numeric oracles.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
#[group(id = "triangle", required = true, multiple = false)]
struct TriangleArgs {
    /// Three vertices: "x1,y1 x2,y2 x3,y3".
    #[arg(long, value_parser = parse_vertices)]
    vertices: Option<[Point; 3]>,
    /// Canonical frame parameters "a,b,c" (A(0,a), B(-b,0), C(c,0)).
    #[arg(long, value_parser = parse_canonical)]
    canonical: Option<[f64; 3]>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    triangle: TriangleArgs,
    /// Exponent n >= 1.
    #[arg(long, allow_negative_numbers = true)]
    n: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Certify the result with the KKT check and the numeric oracles.
    #[arg(long)]
    verify: bool,
    /// Oracle point tolerance, relative to the triangle diameter.
    #[arg(long, default_value_t = 1e-5)]
    tol_point: f64,
    /// Oracle value tolerance, relative.
    #[arg(long, default_value_t = 1e-8)]
    tol_value: f64,
    #[arg(long)]
    grid_resolution: Option<usize>,
    #[arg(long)]
    zoom_iterations: Option<usize>,
    #[arg(long)]
    zoom_factor: Option<f64>,
    #[arg(long)]
    pg_max_iters: Option<usize>,
}

#[derive(Debug, Args)]
#[group(id = "exponents", required = true, multiple = false)]
struct ExponentArgs {
    /// Comma-separated exponents, each > 1.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    n_list: Option<Vec<f64>>,
    /// Integer exponents 2..=N.
    #[arg(long)]
    n_max: Option<u32>,
}

#[derive(Debug, Args)]
struct SequenceArgs {
    #[command(flatten)]
    triangle: TriangleArgs,
    #[command(flatten)]
    exponents: ExponentArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Point tolerance, relative to the triangle diameter.
    #[arg(long, default_value_t = 1e-5)]
    tol_point: f64,
    /// Value tolerance, relative.
    #[arg(long, default_value_t = 1e-8)]
    tol_value: f64,
}

fn parse_pair(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected \"x,y\", got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad coordinate {t:?}: {e}"));
    Ok(Point::new(num(x)?, num(y)?))
}

fn parse_vertices(s: &str) -> Result<[Point; 3], String> {
    let pts = s.split_whitespace().map(parse_pair).collect::<Result<Vec<_>, _>>()?;
    <[Point; 3]>::try_from(pts).map_err(|v| format!("expected three vertices, got {}", v.len()))
}

fn parse_canonical(s: &str) -> Result<[f64; 3], String> {
    let vals = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    <[f64; 3]>::try_from(vals).map_err(|v| format!("expected \"a,b,c\", got {} values", v.len()))
}

/// The triangle as the user gave it, plus its canonical form.
#[derive(Debug, Clone, Serialize)]
struct Framed {
    #[serde(skip)]
    canonical: CanonicalTriangle,
    #[serde(skip)]
    iso: Isometry,
    vertices: [Point; 3],
}

impl TriangleArgs {
    fn resolve(&self) -> Result<Framed, Error> {
        match (&self.vertices, &self.canonical) {
            (Some(v), _) => {
                let general = GeneralTriangle::new(v[0], v[1], v[2])?;
                let (canonical, iso) = canonicalize(&general)?;
                Ok(Framed { canonical, iso, vertices: *v })
            }
            (None, Some([a, b, c])) => {
                let canonical = CanonicalTriangle::new(*a, *b, *c)?;
                Ok(Framed { canonical, iso: Isometry::identity(), vertices: canonical.vertices() })
            }
            (None, None) => unreachable!("clap enforces one triangle form"),
        }
    }
}

#[derive(Debug, Serialize)]
struct CanonicalJson {
    a: f64,
    b: f64,
    c: f64,
}

#[derive(Debug, Serialize)]
struct SolveReport {
    triangle: Framed,
    canonical: CanonicalJson,
    n: f64,
    minimizer: Point,
    minimizer_original: Point,
    value: f64,
    constants: Option<DerivedConstants>,
    kkt: Option<KktReport>,
    oracle: Option<DiscrepancyReport>,
    #[serde(skip)]
    vertex: Option<&'static str>,
}

impl SolveReport {
    fn verified_ok(&self) -> bool {
        let kkt_ok = self.kkt.as_ref().is_none_or(|k| k.verdict == crate::kkt::Verdict::Satisfied);
        let oracle_ok = self.oracle.as_ref().is_none_or(|o| o.passed);
        kkt_ok && oracle_ok
    }
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_INVALID
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out, err),
        Command::Sequence(a) => cmd_sequence(&a, out),
        Command::Verify(a) => cmd_verify(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

#[derive(Debug)]
enum CliError {
    Invalid(String),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let framed = args.triangle.resolve()?;
    let exponent = Exponent::new(args.n)?;
    let tri = framed.canonical;
    let solution = solve(&tri, exponent)?;

    let defaults = OracleConfig::default();
    let cfg = OracleConfig {
        grid_resolution: args.grid_resolution.unwrap_or(defaults.grid_resolution),
        zoom_iterations: args.zoom_iterations.unwrap_or(defaults.zoom_iterations),
        zoom_factor: args.zoom_factor.unwrap_or(defaults.zoom_factor),
        pg_max_iters: args.pg_max_iters.unwrap_or(defaults.pg_max_iters),
        ..defaults
    };
    cfg.validate()?;
    if !(args.tol_point >= 0.0 && args.tol_value >= 0.0) {
        return Err(CliError::Invalid("tolerances must be non-negative".into()));
    }

    let point = solution.point();
    let (kkt, oracle) = if args.verify {
        let point_tol = args.tol_point * tri.diameter();
        match solution {
            Solution::Interior(m) => {
                let tol = KKT_TOLERANCE * gradient_scale(&tri, m.exponent, m.value);
                let kkt = kkt_residual(&tri, m.exponent, point, tol)?;
                let oracle = match compare(&tri, m.exponent, &cfg, point_tol, args.tol_value) {
                    Ok(r) => Some(r),
                    Err(e @ Error::DidNotConverge { .. }) => {
                        writeln!(err, "warning: {e}")?;
                        None
                    }
                    Err(e) => return Err(e.into()),
                };
                (Some(kkt), oracle)
            }
            Solution::Vertex(_) => (None, Some(compare_n1(&tri, &cfg, point_tol, args.tol_value)?)),
        }
    } else {
        (None, None)
    };
    let oracle_missing = args.verify && oracle.is_none();

    let report = SolveReport {
        canonical: CanonicalJson { a: tri.a(), b: tri.b(), c: tri.c() },
        n: exponent.value(),
        minimizer: point,
        minimizer_original: framed.iso.inverse(point),
        value: solution.value(),
        constants: solution.constants(),
        kkt,
        oracle,
        vertex: match solution {
            Solution::Vertex(v) => Some(v.vertex.label()),
            Solution::Interior(_) => None,
        },
        triangle: framed,
    };
    match args.format {
        OutputFormat::Json => format::solve_json(&report, out)?,
        OutputFormat::Csv => format::solve_csv(&report, out)?,
        OutputFormat::Text => format::solve_text(&report, out)?,
    }
    if args.verify && (oracle_missing || !report.verified_ok()) {
        writeln!(err, "verification failed")?;
        return Ok(EXIT_VERIFY_FAILED);
    }
    Ok(EXIT_OK)
}

/// Magnitude of the individual gradient terms at the minimizer,
/// `n F / inradius`, floored at one.
fn gradient_scale(tri: &CanonicalTriangle, n: f64, value: f64) -> f64 {
    (n * value / crate::geometry::inradius(tri)).max(1.0)
}

#[derive(Debug, Serialize)]
struct SequenceRow {
    n: Option<f64>,
    x: f64,
    y: f64,
    value: Option<f64>,
    dist_to_incenter: f64,
}

fn cmd_sequence(args: &SequenceArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let framed = args.triangle.resolve()?;
    let ns: Vec<f64> = match (&args.exponents.n_list, args.exponents.n_max) {
        (Some(list), _) => list.clone(),
        (None, Some(max)) => {
            if max < 2 {
                return Err(CliError::Invalid(format!("--n-max must be at least 2, got {max}")));
            }
            (2..=max).map(f64::from).collect()
        }
        (None, None) => unreachable!("clap enforces one exponent form"),
    };
    if ns.is_empty() {
        return Err(CliError::Invalid("no exponents given".into()));
    }
    let entries = critical_point_sequence(&framed.canonical, &ns)?;
    let to_user = |p: Point| framed.iso.inverse(p);
    let mut rows: Vec<SequenceRow> = entries
        .iter()
        .map(|e| {
            let p = to_user(e.point);
            SequenceRow { n: Some(e.n), x: p.x, y: p.y, value: Some(e.value), dist_to_incenter: e.distance_to_limit }
        })
        .collect();
    let limit = to_user(limit_point(&framed.canonical));
    rows.push(SequenceRow { n: None, x: limit.x, y: limit.y, value: None, dist_to_incenter: 0.0 });

    match args.format {
        OutputFormat::Json => format::sequence_json(&framed, &rows, out)?,
        OutputFormat::Csv => format::sequence_csv(&rows, out)?,
        OutputFormat::Text => format::sequence_text(&rows, out)?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    if args.trials == 0 {
        return Err(CliError::Invalid("--trials must be positive".into()));
    }
    if !(args.tol_point >= 0.0 && args.tol_value >= 0.0) {
        return Err(CliError::Invalid("tolerances must be non-negative".into()));
    }
    let settings = VerifySettings {
        trials: args.trials,
        seed: args.seed,
        tol_point: args.tol_point,
        tol_value: args.tol_value,
    };
    let outcomes = run_suite(&settings);
    let passed = outcomes.iter().filter(|o| o.failures.is_empty()).count();
    for o in outcomes.iter().filter(|o| !o.failures.is_empty()) {
        let [v1, v2, v3] = o.vertices;
        writeln!(
            err,
            "FAIL trial {}: vertices ({}, {}) ({}, {}) ({}, {}), n = {}",
            o.trial,
            format::sig12(v1.x),
            format::sig12(v1.y),
            format::sig12(v2.x),
            format::sig12(v2.y),
            format::sig12(v3.x),
            format::sig12(v3.y),
            o.n
        )?;
        for f in &o.failures {
            writeln!(err, "  {f}")?;
        }
    }
    writeln!(out, "{passed}/{} passed", outcomes.len())?;
    Ok(if passed == outcomes.len() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
