//! Acceptance gate: one PASS/FAIL line per criterion, each with its runtime
//! bound. Runs as a plain binary so the lines always reach the output.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

use jtk_core::equiv::{build_u, lambda_oracle, lambda_solve, similarity, target_series};
use jtk_core::hopf::{
    antipode_conjugators, cocycle_minimal, coproducts, forward_classical_exprs, fs_symmetry,
    hopf_axiom_checks, minimal_classical_exprs, rmatrix, rmatrix_from, rmatrix_two_factor,
    triangularity, twist_general, twist_minimal, twist_relation_check, yang_baxter, AntipodeReport,
    GaugeFactor, Orientation,
};
use jtk_core::maps::{check_seven_equations, closed_form_reference, solve_forward};
use jtk_core::reps::{
    classical_irrep, jordanian_irrep, reconstruct_classical, round_trip_residuals,
    verify_jordanian_relations,
};
use jtk_core::residual::{all_vanish, failing, Residual};
use jtk_core::{BuiltinMap, HPoly, MapSpec, PolyMatrix, Rational};

type Outcome = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn vanish(res: &[Residual], ctx: &str) -> Outcome {
    ensure(all_vanish(res), || {
        format!("{ctx}: nonzero {:?}", failing(res))
    })
}

fn builtins() -> Vec<MapSpec> {
    BuiltinMap::ALL.into_iter().map(MapSpec::builtin).collect()
}

fn pairs(spins: &[i64]) -> Vec<(i64, i64)> {
    spins
        .iter()
        .flat_map(|&a| spins.iter().map(move |&b| (a, b)))
        .collect()
}

fn triples(spins: &[i64]) -> Vec<(i64, i64, i64)> {
    spins
        .iter()
        .flat_map(|&a| {
            spins
                .iter()
                .flat_map(move |&b| spins.iter().map(move |&c| (a, b, c)))
        })
        .collect()
}

fn e<T>(r: jtk_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Solver output against closed forms expanded independently from
/// elementary series, to order 12.
fn map_solutions() -> Outcome {
    for b in [
        BuiltinMap::Minimal,
        BuiltinMap::Diag,
        BuiltinMap::Contraction,
    ] {
        let sol = e(solve_forward(&MapSpec::builtin(b), 12))?;
        let reference = e(closed_form_reference(b, 12))?;
        ensure(sol == reference, || {
            format!("{b}: solver and closed form differ")
        })?;
    }
    // diag: F3 = sinh w / (2 tanh(w/2)) = cosh^2(w/2) = 1 + w^2/4 + w^4/48 + ...
    let diag = e(solve_forward(&MapSpec::builtin(BuiltinMap::Diag), 6))?;
    let f3: Vec<Rational> = diag.f3.coeffs().to_vec();
    let want = [
        Rational::one(),
        Rational::zero(),
        Rational::new(1, 4),
        Rational::zero(),
        Rational::new(1, 48),
    ];
    ensure(f3[..5] == want, || format!("diag F3 head {f3:?}"))
}

fn seven_equations() -> Outcome {
    let mut maps = builtins();
    let mut runner = TestRunner::deterministic();
    let tail = proptest::collection::vec((-9i64..=9, 1i64..=6), 1..=6);
    for k in 0..20 {
        let coeffs = tail
            .new_tree(&mut runner)
            .map_err(|e| e.to_string())?
            .current();
        let mut c = vec![Rational::zero(), Rational::one()];
        c.extend(coeffs.into_iter().map(|(n, d)| Rational::new(n, d)));
        maps.push(e(MapSpec::from_polynomial(format!("random-{k}"), c))?);
    }
    for map in &maps {
        let sol = e(solve_forward(map, 12))?;
        let report = e(check_seven_equations(map, &sol))?;
        ensure(report.all_zero(), || {
            format!("{}: equations {:?}", map.name(), report.failing())
        })?;
    }
    Ok(())
}

fn jordanian_relations() -> Outcome {
    for map in builtins() {
        for j in 0..=7 {
            let rep = e(jordanian_irrep(&map, j))?;
            vanish(
                &e(verify_jordanian_relations(&rep))?,
                &format!("{} 2j={j}", map.name()),
            )?;
        }
    }
    Ok(())
}

fn round_trip() -> Outcome {
    for map in builtins() {
        for j in 0..=7 {
            let cl = e(classical_irrep(j))?;
            let rep = e(jordanian_irrep(&map, j))?;
            let rec = e(reconstruct_classical(&map, &rep))?;
            vanish(
                &round_trip_residuals(&rec, &cl),
                &format!("{} 2j={j}", map.name()),
            )?;
        }
    }
    Ok(())
}

fn similarity_series() -> Outcome {
    let contraction = MapSpec::builtin(BuiltinMap::Contraction);
    let lam = e(similarity(&contraction, &MapSpec::minimal(), 5))?;
    let want: Vec<Rational> = [(1, 2), (1, 4), (1, 8), (1, 24), (-1, 96)]
        .into_iter()
        .map(|(n, d)| Rational::new(n, d))
        .collect();
    ensure(lam.coeffs == want, || {
        format!("contraction -> minimal: {:?}", lam.coeffs)
    })?;
    for src in builtins() {
        for tgt in builtins() {
            let rho = e(target_series(&src, &tgt, 10))?;
            let a = e(lambda_solve(&rho, 8, src.name(), tgt.name()))?;
            let b = e(lambda_oracle(&rho, 8, 1, src.name(), tgt.name()))?;
            ensure(a == b, || {
                format!(
                    "{} -> {}: flow {:?} vs oracle {:?}",
                    src.name(),
                    tgt.name(),
                    a.coeffs,
                    b.coeffs
                )
            })?;
        }
    }
    Ok(())
}

fn minimal_twist() -> Outcome {
    let map = MapSpec::minimal();
    for (a, b) in pairs(&[0, 1, 2, 3, 4]) {
        let tw = e(twist_minimal(a, b))?;
        let set = e(coproducts(&map, a, b))?;
        let res = e(twist_relation_check(
            &tw.f,
            &tw.finv,
            &set,
            &minimal_classical_exprs(),
        ))?;
        vanish(&res, &format!("({a},{b})"))?;
    }
    Ok(())
}

fn r_matrix() -> Outcome {
    let map = MapSpec::minimal();
    for (a, b) in pairs(&[0, 1, 2, 3]) {
        let (ra, rb) = (e(jordanian_irrep(&map, a))?, e(jordanian_irrep(&map, b))?);
        ensure(
            e(rmatrix_from(&ra, &rb))? == e(rmatrix_two_factor(&ra, &rb))?,
            || format!("R constructions differ on ({a},{b})"),
        )?;
        ensure(e(triangularity(&map, a, b))?.vanishes(), || {
            format!("triangularity ({a},{b})")
        })?;
    }
    for (a, b, c) in triples(&[1, 2, 3]) {
        ensure(e(yang_baxter(&map, a, b, c))?.vanishes(), || {
            format!("YBE ({a},{b},{c})")
        })?;
    }
    // Spin 1/2 by hand: TH = J0 and hX = z = hJ+ with z^2 = 0, so
    // V = 1 - J0 (x) z, V^-1 = 1 + J0 (x) z and sigma(V) = 1 - z (x) J0.
    let cl = e(classical_irrep(1))?;
    let z = cl.z();
    let id4 = PolyMatrix::identity(4);
    let by_hand = e(e(id4.try_sub(&z.kron(&cl.j0)))?.try_mul(&e(id4.try_add(&cl.j0.kron(&z)))?))?;
    let p = |c: &[i64]| HPoly::from_ints(c);
    let tabulated = PolyMatrix::from_rows(vec![
        vec![p(&[1]), p(&[0, 1]), p(&[0, -1]), p(&[0, 0, 1])],
        vec![p(&[]), p(&[1]), p(&[]), p(&[0, 1])],
        vec![p(&[]), p(&[]), p(&[1]), p(&[0, -1])],
        vec![p(&[]), p(&[]), p(&[]), p(&[1])],
    ]);
    let r = e(rmatrix(1, 1))?;
    ensure(r == by_hand && r == tabulated, || {
        format!("spin-1/2 R:\n{r}")
    })
}

fn cocycle() -> Outcome {
    for (a, b, c) in triples(&[1, 2, 3]) {
        ensure(e(cocycle_minimal(a, b, c))?.vanishes(), || {
            format!("({a},{b},{c})")
        })?;
    }
    Ok(())
}

fn general_twist() -> Outcome {
    for b in [BuiltinMap::Diag, BuiltinMap::Contraction] {
        let map = MapSpec::builtin(b);
        for (j1, j2) in pairs(&[1, 2, 3]) {
            let tw = e(twist_general(&map, j1, j2, GaugeFactor::Product))?;
            let sw = e(twist_general(&map, j2, j1, GaugeFactor::Product))?;
            let (d1, d2) = (j1 as usize + 1, j2 as usize + 1);
            ensure(e(fs_symmetry(&tw.fs, &sw.fs, d1, d2))?.vanishes(), || {
                format!("{b} ({j1},{j2}): FS not symmetric")
            })?;
            let set = e(coproducts(&map, j1, j2))?;
            let exprs = e(forward_classical_exprs(&map, d1 + d2 + 1))?;
            let res = e(twist_relation_check(&tw.f, &tw.finv, &set, &exprs))?;
            vanish(&res, &format!("{b} ({j1},{j2})"))?;
        }
    }
    Ok(())
}

fn antipode() -> Outcome {
    for j in 0..=4 {
        let (_, report) = e(antipode_conjugators(j))?;
        ensure(report.exponent_identity.vanishes(), || {
            format!("exponent identity 2j={j}")
        })?;
        for (side, name) in [
            (&report.classical, "classical"),
            (&report.jordanian, "jordanian"),
        ] {
            let holding = AntipodeReport::holding(side);
            ensure(holding.contains(&Orientation::Stated), || {
                format!("{name} side 2j={j}: {holding:?}")
            })?;
        }
    }
    for map in builtins() {
        for j in 0..=4 {
            let rep = e(jordanian_irrep(&map, j))?;
            vanish(
                &e(hopf_axiom_checks(&rep))?,
                &format!("{} 2j={j}", map.name()),
            )?;
        }
    }
    Ok(())
}

fn classical_limit() -> Outcome {
    let at0 = |m: &PolyMatrix, want: &PolyMatrix, what: &str| {
        ensure(m.eval_h0() == *want, || format!("{what} at h = 0"))
    };
    for map in builtins() {
        for j in [1, 2, 3] {
            let rep = e(jordanian_irrep(&map, j))?;
            let cl = e(classical_irrep(j))?;
            let id = PolyMatrix::identity(rep.dim());
            at0(&rep.t, &id, "T")?;
            at0(&rep.h, &cl.j0, "H")?;
            at0(&rep.y, &cl.jm, "Y")?;
        }
    }
    let tw = e(twist_minimal(2, 1))?;
    at0(&tw.v, &PolyMatrix::identity(6), "V")?;
    let gen = e(twist_general(
        &MapSpec::builtin(BuiltinMap::Contraction),
        2,
        1,
        GaugeFactor::Product,
    ))?;
    at0(&gen.f, &PolyMatrix::identity(6), "F")?;
    at0(&e(rmatrix(2, 1))?, &PolyMatrix::identity(6), "R")?;
    let lam = e(similarity(
        &MapSpec::minimal(),
        &MapSpec::builtin(BuiltinMap::Diag),
        4,
    ))?;
    at0(
        &e(build_u(&lam, &e(classical_irrep(3))?))?,
        &PolyMatrix::identity(4),
        "U",
    )?;
    let (ops, _) = e(antipode_conjugators(2))?;
    at0(&ops.g, &PolyMatrix::identity(3), "G")?;
    at0(&ops.g_tilde, &PolyMatrix::identity(3), "G~")
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            name: "map solutions match closed forms to order 12",
            limit: secs(1),
            run: map_solutions,
        },
        Criterion {
            name: "seven map equations vanish (5 builtin + 20 random maps)",
            limit: secs(5),
            run: seven_equations,
        },
        Criterion {
            name: "Jordanian relations on irreps, all maps, j <= 7/2",
            limit: secs(5),
            run: jordanian_relations,
        },
        Criterion {
            name: "forward o inverse round trip is the identity, j <= 7/2",
            limit: secs(5),
            run: round_trip,
        },
        Criterion {
            name: "similarity series values and flow/oracle agreement",
            limit: secs(2),
            run: similarity_series,
        },
        Criterion {
            name: "minimal twist relation on all pairs j <= 2",
            limit: secs(10),
            run: minimal_twist,
        },
        Criterion {
            name: "R-matrix: constructions, triangularity, Yang-Baxter, spin-1/2 table",
            limit: secs(30),
            run: r_matrix,
        },
        Criterion {
            name: "cocycle identity on triples j <= 3/2",
            limit: secs(30),
            run: cocycle,
        },
        Criterion {
            name: "general twist (diag, contraction): FS symmetry and twist relation",
            limit: secs(30),
            run: general_twist,
        },
        Criterion {
            name: "antipode conjugators and Hopf axioms",
            limit: secs(10),
            run: antipode,
        },
        Criterion {
            name: "classical limit of every constructed operator",
            limit: secs(1),
            run: classical_limit,
        },
    ];
    let mut failures = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let took = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(took < c.limit, || {
                format!("took {took:.2?}, limit {:?}", c.limit)
            })
        });
        match outcome {
            Ok(()) => println!(
                "PASS {:>2}  {}  ({took:.2?} < {:?})",
                i + 1,
                c.name,
                c.limit
            ),
            Err(why) => {
                failures += 1;
                println!(
                    "FAIL {:>2}  {}  ({took:.2?}, limit {:?}): {why}",
                    i + 1,
                    c.name,
                    c.limit
                );
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
