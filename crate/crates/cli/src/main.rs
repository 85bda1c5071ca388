//! `jtk`: command-line front end for the Jordanian toolkit.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use jtk_core::equiv::{lambda_cross_checked, mu_from_lambda};
use jtk_core::hopf::{rmatrix_for, twist_general, twist_minimal, GaugeFactor};
use jtk_core::maps::{solve_forward, BuiltinMap};
use jtk_core::reps::{classical_irrep, jordanian_irrep};
use jtk_core::verify::{DEFAULT_LAMBDA_ORDER, DEFAULT_ORDER};
use jtk_core::{
    parse_expression, run_suite, Dialect, Error, MapSpec, PolyMatrix, Rational, Sabotage, Suite,
    SuiteConfig, WSeries,
};

#[derive(Parser)]
#[command(
    name = "jtk",
    version,
    about = "Exact algebra for the classical and Jordanian sl(2) maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the forward map equations for a map and print its series.
    SolveMap(SolveMapArgs),
    /// Build the Jordanian irrep of a map as polynomial matrices.
    BuildIrrep(IrrepArgs),
    /// Print the triangular R-matrix on a pair of irreps.
    Rmatrix(PairArgs),
    /// Print the twist operators V, F and FS on a pair of irreps.
    Twist(PairArgs),
    /// Print the similarity series between two maps.
    Similarity(SimilarityArgs),
    /// Evaluate an expression on an irrep, or as a series in w.
    Eval(EvalArgs),
    /// Run a check suite and report each identity.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MapArgs {
    /// Builtin map name or a path to a file holding a phi expression in w.
    #[arg(long)]
    map: Option<String>,
    /// A phi expression in w, e.g. "2*tanh(w/2)".
    #[arg(long, conflicts_with = "map")]
    phi: Option<String>,
}

#[derive(Args)]
struct SolveMapArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Series order (number of coefficients).
    #[arg(long, env = "JTK_DEFAULT_ORDER")]
    order: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct IrrepArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Twice the spin.
    #[arg(long)]
    two_j: i64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct PairArgs {
    #[command(flatten)]
    map: MapArgs,
    #[arg(long)]
    two_j1: i64,
    #[arg(long)]
    two_j2: i64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SimilarityArgs {
    /// Source map.
    #[arg(long)]
    from: String,
    /// Target map.
    #[arg(long)]
    to: String,
    /// Number of coefficients c_1 .. c_N.
    #[arg(long, default_value_t = DEFAULT_LAMBDA_ORDER)]
    order: usize,
    /// Also print the coefficients of mu in T - 1.
    #[arg(long)]
    mu: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EvalArgs {
    /// Expression over generators (or over w with --scalar).
    expr: String,
    #[command(flatten)]
    map: MapArgs,
    /// Twice the spin of the irrep.
    #[arg(long, default_value_t = 1)]
    two_j: i64,
    /// Evaluate on the classical irrep instead of the Jordanian one.
    #[arg(long)]
    classical: bool,
    /// Treat the expression as a series in w.
    #[arg(long)]
    scalar: bool,
    /// Series order for --scalar.
    #[arg(long, env = "JTK_DEFAULT_ORDER")]
    order: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum SabotageArg {
    ZeroMu,
}

#[derive(Args)]
struct VerifyArgs {
    /// algebra, roundtrip, hopf, twist, ybe, cocycle, antipode, similarity or all.
    #[arg(long, default_value = "all")]
    suite: String,
    #[command(flatten)]
    map: MapArgs,
    /// Spins (doubled); two or three values form the pair or triple itself.
    #[arg(long, value_delimiter = ',')]
    two_j: Vec<i64>,
    #[arg(long, conflicts_with = "two_j")]
    two_j1: Option<i64>,
    #[arg(long, requires = "two_j1")]
    two_j2: Option<i64>,
    #[arg(long, requires = "two_j2")]
    two_j3: Option<i64>,
    /// Scalar series order for the map equations.
    #[arg(long, env = "JTK_DEFAULT_ORDER")]
    order: Option<usize>,
    /// Order of the similarity series.
    #[arg(long, default_value_t = DEFAULT_LAMBDA_ORDER)]
    lambda_order: usize,
    /// Attach full residual matrices of failing checks.
    #[arg(long)]
    residuals: bool,
    /// Deliberately corrupt a construction to confirm the suite can fail.
    #[arg(long, value_enum)]
    sabotage: Option<SabotageArg>,
    #[command(flatten)]
    common: Common,
}

/// Failure of the command itself, as opposed to a failing check.
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult<T> = Result<T, UsageError>;

/// Rendered output plus whether every check passed.
struct Output {
    text: String,
    pass: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, pass: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = match &cli.command {
        Command::SolveMap(a) => (&a.common, solve_map(a)),
        Command::BuildIrrep(a) => (&a.common, build_irrep(a)),
        Command::Rmatrix(a) => (&a.common, rmatrix_cmd(a)),
        Command::Twist(a) => (&a.common, twist_cmd(a)),
        Command::Similarity(a) => (&a.common, similarity_cmd(a)),
        Command::Eval(a) => (&a.common, eval_cmd(a)),
        Command::Verify(a) => (&a.common, verify_cmd(a)),
    };
    match result.and_then(|out| emit(common.out.as_deref(), &out.text).map(|_| out.pass)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("jtk: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => fs::write(p, text).map_err(|e| UsageError(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output serialization is infallible")
}

/// Resolve `--map`/`--phi`; defaults to the minimal map.
fn resolve_map(args: &MapArgs) -> CliResult<MapSpec> {
    if let Some(src) = &args.phi {
        return map_from_phi(src, src);
    }
    match &args.map {
        None => Ok(MapSpec::minimal()),
        Some(name) => resolve_map_name(name),
    }
}

fn resolve_map_name(name: &str) -> CliResult<MapSpec> {
    if let Ok(b) = name.parse::<BuiltinMap>() {
        return Ok(MapSpec::builtin(b));
    }
    let path = Path::new(name);
    if !path.is_file() {
        return Err(Error::UnknownMap(name.to_string()).into());
    }
    let body = fs::read_to_string(path).map_err(|e| UsageError(format!("{name}: {e}")))?;
    let src: Vec<&str> = body
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    let label = path
        .file_stem()
        .map_or(name.into(), |s| s.to_string_lossy().into_owned());
    map_from_phi(&label, &src.join(" "))
}

fn map_from_phi(name: &str, src: &str) -> CliResult<MapSpec> {
    let parsed = parse_expression(src, Dialect::ScalarSeries)?;
    Ok(MapSpec::from_expr(name, parsed.expr)?)
}

fn check_order(order: usize) -> CliResult<usize> {
    if order < 2 {
        return Err(UsageError(format!("order must be at least 2, got {order}")));
    }
    Ok(order)
}

fn coeff_strings(s: &WSeries) -> Vec<String> {
    s.coeffs()
        .iter()
        .map(Rational::to_canonical_string)
        .collect()
}

fn matrices_text(items: &[(&str, &PolyMatrix)]) -> String {
    items
        .iter()
        .map(|(name, m)| format!("{name} =\n{m}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Serialize)]
struct SolveMapOut {
    map: String,
    order: usize,
    phi: Vec<String>,
    f2: Vec<String>,
    f3: Vec<String>,
    u_bar: Vec<String>,
    v_bar: Vec<String>,
    w_bar: Vec<String>,
}

fn solve_map(a: &SolveMapArgs) -> CliResult<Output> {
    let map = resolve_map(&a.map)?;
    let order = check_order(a.order.unwrap_or(DEFAULT_ORDER))?;
    let sol = solve_forward(&map, order)?;
    let phi = map.phi(order)?;
    Ok(Output::ok(match a.common.format {
        Format::Json => json(&SolveMapOut {
            map: map.name().to_string(),
            order,
            phi: coeff_strings(&phi),
            f2: coeff_strings(&sol.f2),
            f3: coeff_strings(&sol.f3),
            u_bar: coeff_strings(&sol.u_bar),
            v_bar: coeff_strings(&sol.v_bar),
            w_bar: coeff_strings(&sol.w_bar),
        }),
        Format::Text => {
            let mut s = format!("map {} to order {order} in w = hX\n", map.name());
            for (name, v) in [("phi", &phi), ("F2", &sol.f2), ("F3", &sol.f3)]
                .into_iter()
                .chain([
                    ("Ubar", &sol.u_bar),
                    ("Vbar", &sol.v_bar),
                    ("Wbar", &sol.w_bar),
                ])
            {
                s.push_str(&format!("{name} = {v}\n"));
            }
            s
        }
    }))
}

fn build_irrep(a: &IrrepArgs) -> CliResult<Output> {
    let map = resolve_map(&a.map)?;
    let rep = jordanian_irrep(&map, a.two_j)?;
    let items: Vec<(&str, &PolyMatrix)> = rep
        .generators()
        .into_iter()
        .map(|(g, m)| (g.symbol(), m))
        .collect();
    Ok(Output::ok(match a.common.format {
        Format::Json => json(&items.into_iter().collect::<BTreeMap<_, _>>()),
        Format::Text => matrices_text(&items),
    }))
}

fn rmatrix_cmd(a: &PairArgs) -> CliResult<Output> {
    let map = resolve_map(&a.map)?;
    let r = rmatrix_for(&map, a.two_j1, a.two_j2)?;
    Ok(Output::ok(match a.common.format {
        Format::Json => jtk_core::matrix_to_json(&r),
        Format::Text => matrices_text(&[("R", &r)]),
    }))
}

fn twist_cmd(a: &PairArgs) -> CliResult<Output> {
    let map = resolve_map(&a.map)?;
    let tw = if map.is_minimal() {
        twist_minimal(a.two_j1, a.two_j2)?
    } else {
        twist_general(&map, a.two_j1, a.two_j2, GaugeFactor::Product)?
    };
    let items = [("V", &tw.v), ("F", &tw.f), ("FS", &tw.fs)];
    Ok(Output::ok(match a.common.format {
        Format::Json => json(&items.into_iter().collect::<BTreeMap<_, _>>()),
        Format::Text => matrices_text(&items),
    }))
}

#[derive(Serialize)]
struct SimilarityOut {
    source: String,
    target: String,
    coeffs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<Vec<String>>,
}

fn similarity_cmd(a: &SimilarityArgs) -> CliResult<Output> {
    if a.order == 0 {
        return Err(UsageError("order must be positive".into()));
    }
    let (src, tgt) = (resolve_map_name(&a.from)?, resolve_map_name(&a.to)?);
    let lam = lambda_cross_checked(&src, &tgt, a.order)?;
    let mu = if a.mu {
        Some(coeff_strings(&mu_from_lambda(&lam)?.as_series()))
    } else {
        None
    };
    let coeffs: Vec<String> = lam
        .coeffs
        .iter()
        .map(Rational::to_canonical_string)
        .collect();
    Ok(Output::ok(match a.common.format {
        Format::Json => json(&SimilarityOut {
            source: lam.source.clone(),
            target: lam.target.clone(),
            coeffs,
            mu,
        }),
        Format::Text => {
            let mut s = format!("lambda for {} -> {}\n", lam.source, lam.target);
            for (k, c) in lam.coeffs.iter().enumerate() {
                s.push_str(&format!("c{} = {c}\n", k + 1));
            }
            if let Some(mu) = mu {
                s.push_str(&format!("mu = [{}] in powers of T - 1\n", mu.join(", ")));
            }
            s
        }
    }))
}

fn eval_cmd(a: &EvalArgs) -> CliResult<Output> {
    if a.scalar {
        let order = check_order(a.order.unwrap_or(DEFAULT_ORDER))?;
        let s = parse_expression(&a.expr, Dialect::ScalarSeries)?.eval_series(order)?;
        return Ok(Output::ok(match a.common.format {
            Format::Json => json(&coeff_strings(&s)),
            Format::Text => s.to_string(),
        }));
    }
    let parsed = parse_expression(&a.expr, Dialect::MatrixExpr)?;
    let m = if a.classical {
        parsed.eval_matrix(&classical_irrep(a.two_j)?)?
    } else {
        parsed.eval_matrix(&jordanian_irrep(&resolve_map(&a.map)?, a.two_j)?)?
    };
    Ok(Output::ok(match a.common.format {
        Format::Json => jtk_core::matrix_to_json(&m),
        Format::Text => m.to_string(),
    }))
}

fn verify_cmd(a: &VerifyArgs) -> CliResult<Output> {
    let suite: Suite = a.suite.parse()?;
    let mut cfg = SuiteConfig::new(suite, resolve_map(&a.map)?);
    let spins: Vec<i64> = match a.two_j1 {
        Some(j1) => [Some(j1), a.two_j2, a.two_j3]
            .into_iter()
            .flatten()
            .collect(),
        None => a.two_j.clone(),
    };
    if !spins.is_empty() {
        cfg = cfg.with_spins(&spins)?;
    }
    cfg.order = a.order.unwrap_or(DEFAULT_ORDER);
    cfg.lambda_order = a.lambda_order;
    cfg.residuals = a.residuals;
    cfg.sabotage = a.sabotage.map(|SabotageArg::ZeroMu| Sabotage::ZeroMu);
    let report = run_suite(&cfg)?;
    Ok(Output {
        text: match a.common.format {
            Format::Json => report.to_json(),
            Format::Text => report.to_text(),
        },
        pass: report.passed(),
    })
}
