//! Check suites: every exact identity the library certifies, run over a set
//! of spins and collected into a deterministic report.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equiv::{
    conjugation_residual, lambda_oracle, lambda_solve, target_series, MuSeries, SimilaritySeries,
};
use crate::error::{Error, Result};
use crate::exact::{Rational, WSeries};
use crate::hopf::{
    antipode_conjugators, cocycle_general, coproduct_homomorphism_check, coproducts,
    forward_classical_exprs, fs_symmetry, gauge_series, hopf_axiom_checks, intertwining,
    minimal_classical_exprs, rmatrix_from, rmatrix_two_factor, triangularity, twist_general_with,
    twist_minimal, twist_relation_check, yang_baxter, AntipodeReport, GaugeFactor, Orientation,
    TwistSet,
};
use crate::maps::{
    check_seven_equations, closed_form_reference, solve_forward, BuiltinMap, MapSpec,
};
use crate::matrix::PolyMatrix;
use crate::reps::{
    classical_irrep, jordanian_irrep, reconstruct_classical, round_trip_residuals,
    verify_jordanian_relations,
};
use crate::residual::Residual;

/// Default scalar series order.
pub const DEFAULT_ORDER: usize = 16;
/// Default order of similarity series.
pub const DEFAULT_LAMBDA_ORDER: usize = 8;
/// Default spins (doubled) for single-irrep and pair checks.
pub const DEFAULT_PAIR_SPINS: [i64; 4] = [1, 2, 3, 4];
/// Default spins (doubled) for triple checks.
pub const DEFAULT_TRIPLE_SPINS: [i64; 3] = [1, 2, 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Algebra,
    Roundtrip,
    Hopf,
    Twist,
    Ybe,
    Cocycle,
    Antipode,
    Similarity,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Algebra,
        Suite::Roundtrip,
        Suite::Hopf,
        Suite::Twist,
        Suite::Ybe,
        Suite::Cocycle,
        Suite::Antipode,
        Suite::Similarity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Roundtrip => "roundtrip",
            Suite::Hopf => "hopf",
            Suite::Twist => "twist",
            Suite::Ybe => "ybe",
            Suite::Cocycle => "cocycle",
            Suite::Antipode => "antipode",
            Suite::Similarity => "similarity",
            Suite::All => "all",
        }
    }

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::EACH.to_vec(),
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Deliberate corruption used to confirm that a suite can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sabotage {
    /// Replace the gauge series `mu` with zero in general twists.
    ZeroMu,
}

/// Spins (doubled) each kind of check runs on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinPlan {
    pub singles: Vec<i64>,
    pub pairs: Vec<(i64, i64)>,
    pub triples: Vec<(i64, i64, i64)>,
}

impl SpinPlan {
    /// Singles and ordered pairs from `{1/2, 1, 3/2, 2}`, triples from
    /// `{1/2, 1, 3/2}`.
    pub fn default_plan() -> Self {
        SpinPlan {
            singles: DEFAULT_PAIR_SPINS.to_vec(),
            pairs: pairs_of(&DEFAULT_PAIR_SPINS),
            triples: triples_of(&DEFAULT_TRIPLE_SPINS),
        }
    }

    /// A list of length 2 or 3 is used as the pair or triple itself; the
    /// distinct values otherwise generate all pairs and triples.
    pub fn from_spins(spins: &[i64]) -> Result<Self> {
        if spins.is_empty() {
            return Err(Error::Config("empty spin list".into()));
        }
        if let Some(bad) = spins.iter().find(|&&s| s < 0) {
            return Err(Error::InvalidSpin(*bad));
        }
        let mut distinct = spins.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let pairs = match spins {
            [a, b] => vec![(*a, *b)],
            _ => pairs_of(&distinct),
        };
        let triples = match spins {
            [a, b, c] => vec![(*a, *b, *c)],
            _ => triples_of(&distinct),
        };
        Ok(SpinPlan {
            singles: distinct,
            pairs,
            triples,
        })
    }
}

fn pairs_of(s: &[i64]) -> Vec<(i64, i64)> {
    s.iter()
        .flat_map(|&a| s.iter().map(move |&b| (a, b)))
        .collect()
}

fn triples_of(s: &[i64]) -> Vec<(i64, i64, i64)> {
    s.iter()
        .flat_map(|&a| {
            s.iter()
                .flat_map(move |&b| s.iter().map(move |&c| (a, b, c)))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub map: MapSpec,
    pub spins: SpinPlan,
    /// Scalar series order for the map equations.
    pub order: usize,
    /// Order of the similarity series.
    pub lambda_order: usize,
    /// Attach full residual matrices of failing checks.
    pub residuals: bool,
    pub sabotage: Option<Sabotage>,
}

impl SuiteConfig {
    pub fn new(suite: Suite, map: MapSpec) -> Self {
        SuiteConfig {
            suite,
            map,
            spins: SpinPlan::default_plan(),
            order: DEFAULT_ORDER,
            lambda_order: DEFAULT_LAMBDA_ORDER,
            residuals: false,
            sabotage: None,
        }
    }

    pub fn with_spins(mut self, spins: &[i64]) -> Result<Self> {
        self.spins = SpinPlan::from_spins(spins)?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::Config(format!("order {} is below 2", self.order)));
        }
        if self.lambda_order == 0 {
            return Err(Error::Config("similarity order must be positive".into()));
        }
        self.map.phi(self.order)?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub anchor: String,
    pub pass: bool,
    /// Highest power of `h` (or of the series variable) left in the residual.
    pub max_degree: Option<usize>,
    /// Nonzero entries (or coefficients) of the residual.
    pub nonzero: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<PolyMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: Suite,
    pub map: String,
    pub spins: SpinPlan,
    pub checks: Vec<CheckResult>,
    pub verdict: Verdict,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite {} | map {} | {} checks | verdict {}\n",
            self.suite,
            self.map,
            self.checks.len(),
            if self.passed() { "pass" } else { "fail" }
        );
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {}  ({})", c.id, c.anchor));
            if !c.pass {
                let deg = c.max_degree.map_or("-".to_string(), |d| d.to_string());
                out.push_str(&format!(" nonzero={} max_degree={deg}", c.nonzero));
            }
            if let Some(note) = &c.note {
                out.push_str(&format!(" [{note}]"));
            }
            out.push('\n');
        }
        out
    }
}

enum Outcome {
    Matrix(PolyMatrix),
    Series(WSeries),
    Failed(String),
}

struct Item {
    name: String,
    outcome: Outcome,
    note: Option<String>,
}

impl Item {
    fn matrix(r: Residual) -> Self {
        Item {
            name: r.name,
            outcome: Outcome::Matrix(r.matrix),
            note: None,
        }
    }

    fn series(name: impl Into<String>, s: WSeries) -> Self {
        Item {
            name: name.into(),
            outcome: Outcome::Series(s),
            note: None,
        }
    }
}

type Job = Box<dyn Fn() -> Result<Vec<Item>> + Send + Sync>;

struct Task {
    id: String,
    anchor: &'static str,
    job: Job,
}

fn task(
    suite: Suite,
    check: &str,
    spins: &str,
    anchor: &'static str,
    job: impl Fn() -> Result<Vec<Item>> + Send + Sync + 'static,
) -> Task {
    let id = if spins.is_empty() {
        format!("{suite}/{check}")
    } else {
        format!("{suite}/{check}[{spins}]")
    };
    Task {
        id,
        anchor,
        job: Box::new(job),
    }
}

fn residuals(r: Vec<Residual>) -> Vec<Item> {
    r.into_iter().map(Item::matrix).collect()
}

fn limit(name: &str, m: &PolyMatrix, expected: &PolyMatrix) -> Item {
    Item::matrix(Residual::eq(
        format!("{name} at h = 0"),
        &m.eval_h0(),
        expected,
    ))
}

fn series_diff(name: &str, a: &WSeries, b: &WSeries) -> Item {
    Item::series(name, a - b)
}

/// Run a suite. Configuration errors are returned before any check runs;
/// errors raised inside a check are recorded as failures of that check.
pub fn run_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let mut tasks = Vec::new();
    for s in cfg.suite.members() {
        match s {
            Suite::Algebra => algebra_tasks(cfg, &mut tasks),
            Suite::Roundtrip => roundtrip_tasks(cfg, &mut tasks),
            Suite::Hopf => hopf_tasks(cfg, &mut tasks),
            Suite::Twist => twist_tasks(cfg, &mut tasks),
            Suite::Ybe => ybe_tasks(cfg, &mut tasks),
            Suite::Cocycle => cocycle_tasks(cfg, &mut tasks),
            Suite::Antipode => antipode_tasks(cfg, &mut tasks),
            Suite::Similarity => similarity_tasks(cfg, &mut tasks),
            Suite::All => unreachable!("expanded by members()"),
        }
    }
    let keep = cfg.residuals;
    let mut checks: Vec<CheckResult> = tasks
        .par_iter()
        .flat_map_iter(|t| collect(t, keep))
        .collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    let verdict = if checks.iter().all(|c| c.pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CheckReport {
        suite: cfg.suite,
        map: cfg.map.name().to_string(),
        spins: cfg.spins.clone(),
        checks,
        verdict,
    })
}

fn collect(t: &Task, keep: bool) -> Vec<CheckResult> {
    let items = match (t.job)() {
        Ok(items) => items,
        Err(e) => vec![Item {
            name: "error".into(),
            outcome: Outcome::Failed(e.to_string()),
            note: None,
        }],
    };
    items
        .into_iter()
        .map(|it| {
            let id = format!("{}: {}", t.id, it.name);
            let anchor = t.anchor.to_string();
            match it.outcome {
                Outcome::Matrix(m) => {
                    let pass = m.is_zero();
                    CheckResult {
                        id,
                        anchor,
                        pass,
                        max_degree: m.max_degree(),
                        nonzero: m.nonzero_count(),
                        note: it.note,
                        residual: (keep && !pass).then_some(m),
                    }
                }
                Outcome::Series(s) => {
                    let nz: Vec<usize> =
                        (0..s.order()).filter(|&k| !s.coeff(k).is_zero()).collect();
                    CheckResult {
                        id,
                        anchor,
                        pass: nz.is_empty(),
                        max_degree: nz.last().copied(),
                        nonzero: nz.len(),
                        note: it.note,
                        residual: None,
                    }
                }
                Outcome::Failed(msg) => CheckResult {
                    id,
                    anchor,
                    pass: false,
                    max_degree: None,
                    nonzero: 0,
                    note: Some(msg),
                    residual: None,
                },
            }
        })
        .collect()
}

fn spin1(a: i64) -> String {
    format!("{a}")
}

fn spin2((a, b): (i64, i64)) -> String {
    format!("{a},{b}")
}

fn spin3((a, b, c): (i64, i64, i64)) -> String {
    format!("{a},{b},{c}")
}

fn algebra_tasks(cfg: &SuiteConfig, out: &mut Vec<Task>) {
    let s = Suite::Algebra;
    let (map, order) = (cfg.map.clone(), cfg.order);
    out.push(task(
        s,
        "map-equations",
        "",
        "seven coupled map equations",
        move || {
            let sol = solve_forward(&map, order)?;
            let report = check_seven_equations(&map, &sol)?;
            Ok(report
                .residuals
                .into_iter()
                .enumerate()
                .map(|(i, r)| Item::series(format!("equation {}", i + 1), r))
                .collect())
        },
    ));
    if let Some(b) = cfg.map.as_builtin() {
        if closed_form_reference(b, 2).is_ok() {
            let (map, order) = (cfg.map.clone(), cfg.order);
            out.push(task(
                s,
                "closed-form",
                "",
                "tabulated closed-form map functions",
                move || {
                    let sol = solve_forward(&map, order)?;
                    let reference = closed_form_reference(b, order)?;
                    let names = ["F2", "F3", "Ubar", "Vbar", "Wbar"];
                    Ok(names
                        .iter()
                        .zip(sol.parts().iter().zip(reference.parts()))
                        .map(|(n, (a, r))| series_diff(n, a, r))
                        .collect())
                },
            ));
        }
    }
    for &j in &cfg.spins.singles {
        out.push(task(
            s,
            "classical-relations",
            &spin1(j),
            "sl(2) commutation relations",
            move || Ok(residuals(classical_irrep(j)?.relation_residuals()?)),
        ));
        let map = cfg.map.clone();
        out.push(task(
            s,
            "jordanian-relations",
            &spin1(j),
            "Jordanian algebra relations",
            move || {
                Ok(residuals(verify_jordanian_relations(&jordanian_irrep(
                    &map, j,
                )?)?))
            },
        ));
        let map = cfg.map.clone();
        out.push(task(
            s,
            "classical-limit",
            &spin1(j),
            "Jordanian generators at h = 0",
            move || {
                let rep = jordanian_irrep(&map, j)?;
                let cl = classical_irrep(j)?;
                let id = PolyMatrix::identity(rep.dim());
                Ok(vec![
                    limit("T", &rep.t, &id),
                    limit("Tinv", &rep.tinv, &id),
                    limit("H", &rep.h, &cl.j0),
                    limit("Y", &rep.y, &cl.jm),
                ])
            },
        ));
    }
}

fn roundtrip_tasks(cfg: &SuiteConfig, out: &mut Vec<Task>) {
    for &j in &cfg.spins.singles {
        let map = cfg.map.clone();
        out.push(task(
            Suite::Roundtrip,
            "forward-after-inverse",
            &spin1(j),
            "forward map composed with inverse map",
            move || {
                let cl = classical_irrep(j)?;
                let rep = jordanian_irrep(&map, j)?;
                let rec = reconstruct_classical(&map, &rep)?;
                Ok(residuals(round_trip_residuals(&rec, &cl)))
            },
        ));
    }
}

fn hopf_tasks(cfg: &SuiteConfig, out: &mut Vec<Task>) {
    let s = Suite::Hopf;
    for &j in &cfg.spins.singles {
        let map = cfg.map.clone();
        out.push(task(
            s,
            "counit-antipode",
            &spin1(j),
            "counit and antipode axioms",
            move || Ok(residuals(hopf_axiom_checks(&jordanian_irrep(&map, j)?)?)),
        ));
    }
    for &(a, b) in &cfg.spins.pairs {
        let map = cfg.map.clone();
        out.push(task(
            s,
            "coproduct",
            &spin2((a, b)),
            "coproduct is an algebra map",
            move || {
                Ok(residuals(coproduct_homomorphism_check(&coproducts(
                    &map, a, b,
                )?)?))
            },
        ));
    }
}

/// `(lambda, mu)` for a general twist on dimensions summing to `total`,
/// honouring the sabotage switch.
fn gauge_for(
    map: &MapSpec,
    total: usize,
    sabotage: Option<Sabotage>,
) -> Result<(SimilaritySeries, MuSeries)> {
    let (lam, mu) = gauge_series(map, total, 0)?;
    Ok(match sabotage {
        Some(Sabotage::ZeroMu) => {
            let zero = MuSeries {
                coeffs: vec![Rational::zero(); mu.coeffs.len()],
            };
            (lam, zero)
        }
        None => (lam, mu),
    })
}

fn twist_for(map: &MapSpec, a: i64, b: i64, sabotage: Option<Sabotage>) -> Result<TwistSet> {
    if map.is_minimal() && sabotage.is_none() {
        return twist_minimal(a, b);
    }
    let (lam, mu) = gauge_for(map, (a + b + 2) as usize, sabotage)?;
    twist_general_with(map, a, b, &lam, &mu, GaugeFactor::Product)
}

fn twist_tasks(cfg: &SuiteConfig, out: &mut Vec<Task>) {
    let s = Suite::Twist;
    for &(a, b) in &cfg.spins.pairs {
        let (map, sab) = (cfg.map.clone(), cfg.sabotage);
        out.push(task(
            s,
            "twist-relation",
            &spin2((a, b)),
            "twist conjugates the coproduct to the primitive one",
            move || {
                let tw = twist_for(&map, a, b, sab)?;
                let set = coproducts(&map, a, b)?;
                let exprs = if map.is_minimal() {
                    minimal_classical_exprs()
                } else {
                    forward_classical_exprs(&map, set.two_j1 as usize + set.two_j2 as usize + 3)?
                };
                Ok(residuals(twist_relation_check(
                    &tw.f, &tw.finv, &set, &exprs,
                )?))
            },
        ));
        let (map, sab) = (cfg.map.clone(), cfg.sabotage);
        out.push(task(
            s,
            "fs-symmetry",
            &spin2((a, b)),
            "symmetric factor of the twist",
            move || {
                let tw = twist_for(&map, a, b, sab)?;
                let sw = twist_for(&map, b, a, sab)?;
                let r = fs_symmetry(&tw.fs, &sw.fs, a as usize + 1, b as usize + 1)?;
                Ok(vec![Item::matrix(r)])
            },
        ));
        let (map, sab) = (cfg.map.clone(), cfg.sabotage);
        out.push(task(
            s,
            "classical-limit",
            &spin2((a, b)),
            "twist operators at h = 0",
            move || {
                let tw = twist_for(&map, a, b, sab)?;
                let id = PolyMatrix::identity(tw.v.rows());
                Ok(vec![limit("V", &tw.v, &id), limit("F", &tw.f, &id)])
            },
        ));
    }
}

fn ybe_tasks(cfg: &SuiteConfig, out: &mut Vec<Task>) {
    let s = Suite::Ybe;
    for &(a, b) in &cfg.spins.pairs {
        let map = cfg.map.clone();
        out.push(task(
            s,
            "r-constructions",
            &spin2((a, b)),
            "R from the twist equals the two-factor form",
            move || {
                let (ra, rb) = (jordanian_irrep(&map, a)?, jordanian_irrep(&map, b)?);
                let r1 = rmatrix_from(&ra, &rb)?;
                let r2 = rmatrix_two_factor(&ra, &rb)?;
                let id = PolyMatrix::identity(r1.rows());
                Ok(vec![
                    Item::matrix(Residual::eq("(sigma V) V^-1 = two-factor R", &r1, &r2)),
                    limit("R", &r1, &id),
                ])
            },
        ));
        let map = cfg.map.clone();
        out.push(task(
            s,
            "triangularity",
            &spin2((a, b)),
            "triangularity of R",
            move || Ok(vec![Item::matrix(triangularity(&map, a, b)?)]),
        ));
        let map = cfg.map.clone();
        out.push(task(
            s,
            "intertwining",
            &spin2((a, b)),
            "R intertwines the coproduct and its opposite",
            move || Ok(residuals(intertwining(&map, a, b)?)),
        ));
    }
    for &t in &cfg.spins.triples {
        let map = cfg.map.clone();
        out.push(task(
            s,
            "yang-baxter",
            &spin3(t),
            "quantum Yang-Baxter equation",
            move || Ok(vec![Item::matrix(yang_baxter(&map, t.0, t.1, t.2)?)]),
        ));
    }
}

fn cocycle_tasks(cfg: &SuiteConfig, out: &mut Vec<Task>) {
    for &(a, b, c) in &cfg.spins.triples {
        let (map, sab) = (cfg.map.clone(), cfg.sabotage);
        out.push(task(
            Suite::Cocycle,
            "cocycle",
            &spin3((a, b, c)),
            "cocycle identity of the twist",
            move || {
                let r = if map.is_minimal() && sab.is_none() {
                    cocycle_general(&map, a, b, c, None)?
                } else {
                    let (lam, mu) = gauge_for(&map, (a + b + c + 3) as usize, sab)?;
                    cocycle_general(&map, a, b, c, Some((&lam, &mu)))?
                };
                Ok(vec![Item::matrix(r)])
            },
        ));
    }
}

fn orientation_note(report: &AntipodeReport) -> String {
    let names = |side: &[(Orientation, Vec<Residual>)]| {
        let v: Vec<&str> = AntipodeReport::holding(side)
            .into_iter()
            .map(|o| match o {
                Orientation::Stated => "stated",
                Orientation::Inverse => "inverse",
            })
            .collect();
        if v.is_empty() {
            "none".to_string()
        } else {
            v.join("+")
        }
    };
    format!(
        "orientations holding: classical {}, jordanian {}",
        names(&report.classical),
        names(&report.jordanian)
    )
}

fn antipode_tasks(cfg: &SuiteConfig, out: &mut Vec<Task>) {
    for &j in &cfg.spins.singles {
        out.push(task(
            Suite::Antipode,
            "conjugators",
            &spin1(j),
            "antipode similarity relations (minimal map)",
            move || {
                let (ops, report) = antipode_conjugators(j)?;
                let id = PolyMatrix::identity(ops.g.rows());
                let mut items = vec![Item {
                    note: Some(orientation_note(&report)),
                    ..Item::matrix(report.exponent_identity.clone())
                }];
                for side in [&report.classical, &report.jordanian] {
                    for (o, res) in side {
                        if *o == Orientation::Stated {
                            items.extend(residuals(res.clone()));
                        }
                    }
                }
                items.push(limit("G", &ops.g, &id));
                items.push(limit("G~", &ops.g_tilde, &id));
                Ok(items)
            },
        ));
    }
}

fn similarity_tasks(cfg: &SuiteConfig, out: &mut Vec<Task>) {
    let minimal = MapSpec::minimal();
    let pairs: Vec<(MapSpec, MapSpec)> = if cfg.map.is_minimal() {
        BuiltinMap::ALL
            .into_iter()
            .filter(|b| *b != BuiltinMap::Minimal)
            .map(|b| (minimal.clone(), MapSpec::builtin(b)))
            .collect()
    } else {
        vec![
            (minimal.clone(), cfg.map.clone()),
            (cfg.map.clone(), minimal.clone()),
        ]
    };
    let n = cfg.lambda_order;
    for (src, tgt) in pairs {
        let label = format!("{}->{}", src.name(), tgt.name());
        let singles = cfg.spins.singles.clone();
        out.push(task(
            Suite::Similarity,
            "flow-vs-oracle",
            &label,
            "similarity series: flow solver against matrix conjugation",
            move || {
                let rho = target_series(&src, &tgt, n + 2)?;
                let flow = lambda_solve(&rho, n, src.name(), tgt.name())?;
                let oracle = lambda_oracle(&rho, n, 0, src.name(), tgt.name())?;
                let mut items = vec![series_diff(
                    "lambda",
                    &flow.as_series(),
                    &oracle.as_series(),
                )];
                for &j in &singles {
                    let cl = classical_irrep(j)?;
                    let r = conjugation_residual(&flow, &rho, &cl)?;
                    items.push(Item::matrix(Residual::new(
                        format!("exp(-L) hJ+ exp(L) = rho(hJ+) on 2j={j}"),
                        r,
                    )));
                }
                Ok(items)
            },
        ));
    }
}
