//! The classical <-> Jordanian generator maps.
//!
//! A map is fixed by one series `phi` through `h J+ = phi(h X)`. Writing
//! `T = e^w` with `w = hX` and `z = hJ+`, every auxiliary function of the
//! forward map (`J+ = f1`, `J0 = f2 H`, `J- = f3 Y + u + v H + w H^2`) and of
//! the inverse map (`T = g1`, `H = g2 J0`, `Y = g3 J- + a + b J0 + c J0^2`)
//! is `h^k` times an h-free series in `w` (resp. `z`):
//!
//! ```text
//! f2 = F2(w)   f3 = F3(w)   u = h Ubar(w)   v = h Vbar(w)   w-coef = h Wbar(w)
//! g1 = exp(psi(z))   g2 = G2(z)   g3 = G3(z)   a, b, c = h Abar, h Bbar, h Cbar
//! ```
//!
//! with `psi` the compositional inverse of `phi`. `d/dT` becomes
//! `e^{-w} d/dw` and `d/dJ+` becomes `h d/dz`, the `h` cancelling against
//! the explicit factors in the formulas below.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{Elementary, Rational, WSeries};
use crate::expr::Expr;

/// Extra working precision for solver intermediates. Each division by a
/// valuation-one series and each derivative costs one coefficient.
const PAD: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BuiltinMap {
    /// `H` stays diagonal: `phi = 2 tanh(w/2)`.
    Diag,
    /// The contraction map: `phi = sinh w`.
    Contraction,
    /// The minimal twist map: `phi = (1 - e^{-2w}) / 2`.
    Minimal,
    /// `phi = e^w - 1`.
    SimplePlus,
    /// `phi = 1 - e^{-w}`.
    SimpleMinus,
}

impl BuiltinMap {
    pub const ALL: [BuiltinMap; 5] = [
        BuiltinMap::Diag,
        BuiltinMap::Contraction,
        BuiltinMap::Minimal,
        BuiltinMap::SimplePlus,
        BuiltinMap::SimpleMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinMap::Diag => "diag",
            BuiltinMap::Contraction => "contraction",
            BuiltinMap::Minimal => "minimal",
            BuiltinMap::SimplePlus => "simple-plus",
            BuiltinMap::SimpleMinus => "simple-minus",
        }
    }

    pub fn phi(self, order: usize) -> WSeries {
        let exp = Elementary::Exp.expand(order);
        let one = WSeries::one(order);
        match self {
            BuiltinMap::Diag => Elementary::Tanh
                .expand(order)
                .scale_var(&Rational::new(1, 2))
                .scale(&Rational::from(2)),
            BuiltinMap::Contraction => Elementary::Sinh.expand(order),
            BuiltinMap::Minimal => {
                (&one - &exp.scale_var(&Rational::from(-2))).scale(&Rational::new(1, 2))
            }
            BuiltinMap::SimplePlus => &exp - &one,
            BuiltinMap::SimpleMinus => &one - &exp.scale_var(&Rational::from(-1)),
        }
    }
}

impl FromStr for BuiltinMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BuiltinMap::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMap(s.to_string()))
    }
}

impl fmt::Display for BuiltinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum PhiSource {
    Builtin(BuiltinMap),
    Expression(Expr),
    /// Exact polynomial: every coefficient past the end is zero.
    Polynomial(Vec<Rational>),
    /// Known only to its own order.
    Truncated(WSeries),
}

/// A map between the two algebras, given by its defining series `phi`.
#[derive(Clone, Debug, PartialEq)]
pub struct MapSpec {
    name: String,
    builtin: Option<BuiltinMap>,
    source: PhiSource,
}

impl MapSpec {
    pub fn builtin(map: BuiltinMap) -> Self {
        MapSpec {
            name: map.name().to_string(),
            builtin: Some(map),
            source: PhiSource::Builtin(map),
        }
    }

    pub fn minimal() -> Self {
        Self::builtin(BuiltinMap::Minimal)
    }

    /// A custom map from a scalar-dialect expression in `w`.
    pub fn from_expr(name: impl Into<String>, expr: Expr) -> Result<Self> {
        Self::validated(name.into(), PhiSource::Expression(expr))
    }

    pub fn from_polynomial(name: impl Into<String>, coeffs: Vec<Rational>) -> Result<Self> {
        Self::validated(name.into(), PhiSource::Polynomial(coeffs))
    }

    pub fn from_series(name: impl Into<String>, phi: WSeries) -> Result<Self> {
        Self::validated(name.into(), PhiSource::Truncated(phi))
    }

    fn validated(name: String, source: PhiSource) -> Result<Self> {
        let map = MapSpec {
            name,
            builtin: None,
            source,
        };
        let head = map.phi(2)?;
        if !head.coeff(0).is_zero() {
            return Err(Error::Normalization(format!(
                "phi(0) must be 0, found {}",
                head.coeff(0)
            )));
        }
        if !head.coeff(1).is_one() {
            return Err(Error::Normalization(format!(
                "phi'(0) must be 1, found {}",
                head.coeff(1)
            )));
        }
        Ok(map)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn as_builtin(&self) -> Option<BuiltinMap> {
        self.builtin
    }

    pub fn is_minimal(&self) -> bool {
        self.builtin == Some(BuiltinMap::Minimal)
    }

    /// `phi` expanded to `order` coefficients.
    pub fn phi(&self, order: usize) -> Result<WSeries> {
        match &self.source {
            PhiSource::Builtin(m) => Ok(m.phi(order)),
            PhiSource::Expression(e) => e.eval_series(order),
            PhiSource::Polynomial(c) => Ok(WSeries::new(order, c.clone())),
            PhiSource::Truncated(s) => s.truncate_checked(order),
        }
    }
}

impl FromStr for MapSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(MapSpec::builtin(s.parse()?))
    }
}

pub fn builtin_map(name: &str) -> Result<MapSpec> {
    name.parse()
}

/// `(f2, f3; u, v, w)` of the forward map as h-free series in `w = hX`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForwardSolution {
    pub f2: WSeries,
    pub f3: WSeries,
    pub u_bar: WSeries,
    pub v_bar: WSeries,
    pub w_bar: WSeries,
}

impl ForwardSolution {
    pub fn order(&self) -> usize {
        self.parts().iter().map(|s| s.order()).min().unwrap_or(0)
    }

    pub fn parts(&self) -> [&WSeries; 5] {
        [&self.f2, &self.f3, &self.u_bar, &self.v_bar, &self.w_bar]
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        Ok(ForwardSolution {
            f2: self.f2.truncate_checked(order)?,
            f3: self.f3.truncate_checked(order)?,
            u_bar: self.u_bar.truncate_checked(order)?,
            v_bar: self.v_bar.truncate_checked(order)?,
            w_bar: self.w_bar.truncate_checked(order)?,
        })
    }
}

/// `(g1, g2, g3; a, b, c)` of the inverse map as h-free series in `z = hJ+`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseSolution {
    pub psi: WSeries,
    pub g1: WSeries,
    pub g2: WSeries,
    pub g3: WSeries,
    pub a_bar: WSeries,
    pub b_bar: WSeries,
    pub c_bar: WSeries,
}

impl InverseSolution {
    pub fn truncate(&self, order: usize) -> Result<Self> {
        Ok(InverseSolution {
            psi: self.psi.truncate_checked(order)?,
            g1: self.g1.truncate_checked(order)?,
            g2: self.g2.truncate_checked(order)?,
            g3: self.g3.truncate_checked(order)?,
            a_bar: self.a_bar.truncate_checked(order)?,
            b_bar: self.b_bar.truncate_checked(order)?,
            c_bar: self.c_bar.truncate_checked(order)?,
        })
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Solve the forward map for `phi`, exact to `order` coefficients:
///
/// ```text
/// F2   = 2 phi / ((e^w - e^-w) phi_w)       F3 = sinh(w) / phi
/// Ubar = -sinh(w)^2 / (4 phi)               Wbar = (1 - F2^2) / (4 phi)
/// Vbar = -1/2 (F2_w / phi_w + (cosh(w) - F2) / phi)
/// ```
pub fn solve_forward(map: &MapSpec, order: usize) -> Result<ForwardSolution> {
    let m = order + PAD;
    let phi = map.phi(m)?;
    let phi_w = phi.derivative();
    let sinh = Elementary::Sinh.expand(m);
    let cosh = Elementary::Cosh.expand(m);

    let f2 = phi
        .scale(&rat(2, 1))
        .div(&(&sinh.scale(&rat(2, 1)) * &phi_w))?;
    let f3 = sinh.div(&phi)?;
    let u_bar = (&sinh * &sinh).div(&phi)?.scale(&rat(-1, 4));
    let v_bar = (&f2.derivative().div(&phi_w)? + &(&cosh - &f2).div(&phi)?).scale(&rat(-1, 2));
    let w_bar = (&WSeries::one(m) - &(&f2 * &f2))
        .div(&phi)?
        .scale(&rat(1, 4));

    ForwardSolution {
        f2,
        f3,
        u_bar,
        v_bar,
        w_bar,
    }
    .truncate(order)
}

/// Solve the inverse map, exact to `order` coefficients. With `g1 = e^psi`:
///
/// ```text
/// G2   = (g1^2 - 1) / (2 z g1_z)            G3 = 2 z g1 / (g1^2 - 1)
/// Abar = (g1 - 1/g1) / 8                    Cbar = g1 (1 - G2^2) / (2 (g1^2 - 1))
/// Bbar = -(2 Cbar + 1/2 (g1 / g1_z)_z G2)
/// ```
pub fn solve_inverse(map: &MapSpec, order: usize) -> Result<InverseSolution> {
    let m = order + PAD;
    let psi = map.phi(m)?.revert()?;
    let g1 = Elementary::Exp.apply(&psi)?;
    let g1_z = g1.derivative();
    let one = WSeries::one(m);
    let g1_sq_m1 = &(&g1 * &g1) - &one;

    let g2 = g1_sq_m1.div(&g1_z.shift_up(1).scale(&rat(2, 1)))?;
    let g3 = g1.shift_up(1).scale(&rat(2, 1)).div(&g1_sq_m1)?;
    let a_bar = (&g1 - &g1.inverse()?).scale(&rat(1, 8));
    let c_bar = (&g1 * &(&one - &(&g2 * &g2))).div(&g1_sq_m1.scale(&rat(2, 1)))?;
    let ratio_z = g1.div(&g1_z)?.derivative();
    let b_bar = -(&c_bar.scale(&rat(2, 1)) + &(&ratio_z * &g2).scale(&rat(1, 2)));

    InverseSolution {
        psi,
        g1,
        g2,
        g3,
        a_bar,
        b_bar,
        c_bar,
    }
    .truncate(order)
}

/// Residuals of the seven coupled equations the forward functions satisfy.
#[derive(Clone, Debug)]
pub struct SevenEquationReport {
    pub residuals: Vec<WSeries>,
}

impl SevenEquationReport {
    pub fn all_zero(&self) -> bool {
        self.residuals.iter().all(WSeries::is_zero)
    }

    /// 1-based indices of the equations with a nonzero residual.
    pub fn failing(&self) -> Vec<usize> {
        self.residuals
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Lowest order to which every residual is known.
    pub fn order(&self) -> usize {
        self.residuals.iter().map(WSeries::order).min().unwrap_or(0)
    }
}

/// Evaluate the seven coupled equations on `sol`, each reduced to an h-free
/// series identity in `w` (one overall power of `h` divided out where the
/// equation carries it). With `D = e^{-w} d/dw` and `T = e^w`:
///
/// ```text
/// 1: (T^2-1) F2 D(phi) - 2 phi
/// 2: T F3 D(phi) - 2 Wbar (T^2-1) D(phi) - F2
/// 3: 1/2 F3 D(T D(phi)) - Vbar D(phi) - Wbar D((T^2-1) D(phi))
/// 4: F2 ((T^2-1) D(F3) - (T+T^-1) F3) + 2 F3
/// 5: (T^2-1) F2 (1/4 (1+T^-2) F3 + D(Ubar)) + 2 Ubar
/// 6: T F3 D(F2) + (T^2-1)(F2 D(Wbar) - 2 Wbar D(F2)) + 2 Wbar
/// 7: (T^2-1)(1/2 F3 (F2 + T D(T D(F2))) T^-1 - (Vbar D(F2) - F2 D(Vbar))
///        - Wbar D((T^2-1) D(F2))) + 2 Vbar
/// ```
pub fn check_seven_equations(map: &MapSpec, sol: &ForwardSolution) -> Result<SevenEquationReport> {
    let n = sol.order();
    let phi = map.phi(n)?;
    let d = |s: &WSeries| s.deriv_t();
    let t = Elementary::Exp.expand(n);
    let tinv = t.scale_var(&rat(-1, 1));
    let one = WSeries::one(n);
    let t2m1 = &(&t * &t) - &one;
    let t_plus_tinv = &t + &tinv;
    let two = rat(2, 1);
    let ForwardSolution {
        f2,
        f3,
        u_bar,
        v_bar,
        w_bar,
    } = sol;
    let dphi = d(&phi);
    let df2 = d(f2);

    let r1 = &(&(&t2m1 * f2) * &dphi) - &phi.scale(&two);
    let r2 = &(&(&(&t * f3) * &dphi) - &(&(w_bar * &t2m1) * &dphi).scale(&two)) - f2;
    let r3 = &(&(f3 * &d(&(&t * &dphi))).scale(&rat(1, 2)) - &(v_bar * &dphi))
        - &(w_bar * &d(&(&t2m1 * &dphi)));
    let r4 = &(f2 * &(&(&t2m1 * &d(f3)) - &(&t_plus_tinv * f3))) + &f3.scale(&two);
    let r5 = &(&(&t2m1 * f2) * &(&(&(&one + &(&tinv * &tinv)) * f3).scale(&rat(1, 4)) + &d(u_bar)))
        + &u_bar.scale(&two);
    let r6 = &(&(&(&t * f3) * &df2)
        + &(&t2m1 * &(&(f2 * &d(w_bar)) - &(w_bar * &df2).scale(&two))))
        + &w_bar.scale(&two);
    let inner7 = &(&(&(f3 * &(f2 + &(&t * &d(&(&t * &df2))))) * &tinv).scale(&rat(1, 2))
        - &(&(v_bar * &df2) - &(f2 * &d(v_bar))))
        - &(w_bar * &d(&(&t2m1 * &df2)));
    let r7 = &(&t2m1 * &inner7) + &v_bar.scale(&two);

    Ok(SevenEquationReport {
        residuals: vec![r1, r2, r3, r4, r5, r6, r7],
    })
}

/// The tabulated closed forms for diag, contraction and minimal, expanded
/// directly from elementary series (never through [`solve_forward`]).
pub fn closed_form_reference(map: BuiltinMap, order: usize) -> Result<ForwardSolution> {
    let n = order;
    let e = |c: i64, d: i64| Elementary::Exp.expand(n).scale_var(&rat(c, d));
    let one = WSeries::one(n);
    let t_minus_tinv = &e(1, 1) - &e(-1, 1);
    let t_plus_tinv = &e(1, 1) + &e(-1, 1);
    Ok(match map {
        BuiltinMap::Minimal => ForwardSolution {
            f2: e(1, 1),
            f3: e(1, 1),
            u_bar: (&e(2, 1) - &one).scale(&rat(-1, 8)),
            v_bar: (&e(3, 1) - &e(1, 1)).scale(&rat(-1, 2)),
            w_bar: e(2, 1).scale(&rat(-1, 2)),
        },
        BuiltinMap::Diag => {
            let half = (&e(1, 2) + &e(-1, 2)).scale(&rat(1, 2));
            let f3 = &half * &half;
            ForwardSolution {
                f2: one.clone(),
                u_bar: (&f3 * &t_minus_tinv).scale(&rat(-1, 8)),
                f3,
                v_bar: t_minus_tinv.scale(&rat(-1, 8)),
                w_bar: WSeries::zero(n),
            }
        }
        BuiltinMap::Contraction => {
            let inv = t_plus_tinv.inverse()?;
            let ratio = &t_minus_tinv * &inv;
            ForwardSolution {
                f2: inv.scale(&rat(2, 1)),
                f3: one.clone(),
                u_bar: t_minus_tinv.scale(&rat(-1, 8)),
                v_bar: ratio.powi(3).scale(&rat(-1, 2)),
                w_bar: (&t_minus_tinv * &(&inv * &inv)).scale(&rat(1, 2)),
            }
        }
        other => {
            return Err(Error::UnknownMap(format!(
                "no closed form tabulated for {other}"
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp(c: i64, n: usize) -> WSeries {
        Elementary::Exp.expand(n).scale_var(&Rational::from(c))
    }

    #[test]
    fn builtin_phis() {
        let n = 6;
        let min = builtin_map("minimal").unwrap().phi(n).unwrap();
        assert_eq!(
            min.coeffs()[..4],
            [rat(0, 1), rat(1, 1), rat(-1, 1), rat(2, 3)]
        );
        assert_eq!(
            builtin_map("contraction").unwrap().phi(n).unwrap(),
            Elementary::Sinh.expand(n)
        );
        let diag = builtin_map("diag").unwrap().phi(n).unwrap();
        assert_eq!(
            diag.coeffs()[..4],
            [rat(0, 1), rat(1, 1), rat(0, 1), rat(-1, 12)]
        );
        assert!(matches!(builtin_map("nope"), Err(Error::UnknownMap(_))));
        for m in BuiltinMap::ALL {
            let phi = m.phi(3);
            assert!(phi.coeff(0).is_zero() && phi.coeff(1).is_one(), "{m}");
        }
    }

    #[test]
    fn custom_maps_are_normalised() {
        assert!(MapSpec::from_polynomial("id", vec![rat(0, 1), rat(1, 1)]).is_ok());
        assert!(MapSpec::from_polynomial("bad", vec![rat(0, 1), rat(2, 1)]).is_err());
        assert!(MapSpec::from_polynomial("bad0", vec![rat(1, 1), rat(1, 1)]).is_err());
    }

    #[test]
    fn minimal_forward_solution() {
        let n = 10;
        let sol = solve_forward(&MapSpec::minimal(), n).unwrap();
        assert_eq!(sol.f2, exp(1, n));
        assert_eq!(sol.f3, exp(1, n));
        assert_eq!(
            sol.u_bar,
            (&exp(2, n) - &WSeries::one(n)).scale(&rat(-1, 8))
        );
        assert_eq!(sol.w_bar, exp(2, n).scale(&rat(-1, 2)));
    }

    #[test]
    fn diag_and_contraction_forward_solutions() {
        let n = 10;
        let diag = solve_forward(&builtin_map("diag").unwrap(), n).unwrap();
        assert_eq!(diag.f2, WSeries::one(n));
        assert!(diag.w_bar.is_zero());
        assert_eq!(diag.v_bar, (&exp(1, n) - &exp(-1, n)).scale(&rat(-1, 8)));
        let con = solve_forward(&builtin_map("contraction").unwrap(), n).unwrap();
        assert_eq!(con.f3, WSeries::one(n));
        assert_eq!(
            con.f2,
            (&exp(1, n) + &exp(-1, n))
                .inverse()
                .unwrap()
                .scale(&rat(2, 1))
        );
        assert_eq!(con.u_bar, (&exp(1, n) - &exp(-1, n)).scale(&rat(-1, 8)));
    }

    #[test]
    fn identity_phi_gives_sinh_over_w() {
        let n = 8;
        let map = MapSpec::from_polynomial("w", vec![rat(0, 1), rat(1, 1)]).unwrap();
        let sol = solve_forward(&map, n).unwrap();
        // Long division of the sinh Taylor coefficients by w.
        let expected: Vec<Rational> = (0..n)
            .map(|k| {
                if k % 2 == 0 {
                    crate::exact::factorial(k + 1).recip().unwrap()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        assert_eq!(sol.f3, WSeries::new(n, expected));
    }

    #[test]
    fn inverse_solutions() {
        let n = 8;
        let con = solve_inverse(&builtin_map("contraction").unwrap(), n).unwrap();
        // g1 = z + sqrt(1 + z^2)
        let sqrt = Elementary::Sqrt1p
            .expand(n)
            .compose(&WSeries::from_ints(n, &[0, 0, 1]))
            .unwrap();
        assert_eq!(con.g1, &WSeries::var(n) + &sqrt);
        assert_eq!(con.a_bar.coeff(0), rat(0, 1));
        assert_eq!(con.a_bar.coeff(1), rat(1, 4));
        assert_eq!(con.a_bar.coeff(2), rat(0, 1));

        let min = solve_inverse(&MapSpec::minimal(), n).unwrap();
        // g1 = (1 - 2z)^{-1/2}: binomial coefficients C(-1/2, k) (-2)^k.
        for k in 0..n {
            let b =
                crate::exact::binomial(&rat(-1, 2), k) * Rational::from(-2).pow(k as i32).unwrap();
            assert_eq!(min.g1.coeff(k), b);
        }
        assert_eq!(min.g2.coeff(0), rat(1, 1));
        assert_eq!(min.g2.coeff(1), rat(-1, 1));

        for m in BuiltinMap::ALL {
            let s = solve_inverse(&MapSpec::builtin(m), 6).unwrap();
            assert!(s.g2.coeff(0).is_one() && s.g3.coeff(0).is_one(), "{m}");
            assert!(s.a_bar.coeff(0).is_zero(), "{m}");
            assert!(s.psi.coeff(0).is_zero() && s.psi.coeff(1).is_one(), "{m}");
        }
    }

    #[test]
    fn seven_equations_vanish_on_builtins() {
        for m in BuiltinMap::ALL {
            let map = MapSpec::builtin(m);
            let sol = solve_forward(&map, 12).unwrap();
            let report = check_seven_equations(&map, &sol).unwrap();
            assert!(report.all_zero(), "{m}: failing {:?}", report.failing());
        }
    }

    #[test]
    fn perturbation_breaks_first_equation() {
        let map = MapSpec::minimal();
        let mut sol = solve_forward(&map, 10).unwrap();
        sol.f2 = &sol.f2 + &WSeries::from_ints(10, &[0, 0, 1]);
        let report = check_seven_equations(&map, &sol).unwrap();
        assert!(report.failing().contains(&1));
    }

    #[test]
    fn solver_matches_closed_forms() {
        for m in [
            BuiltinMap::Minimal,
            BuiltinMap::Diag,
            BuiltinMap::Contraction,
        ] {
            let solved = solve_forward(&MapSpec::builtin(m), 12).unwrap();
            let closed = closed_form_reference(m, 12).unwrap();
            assert_eq!(solved, closed, "{m}");
        }
        assert!(closed_form_reference(BuiltinMap::SimplePlus, 4).is_err());
    }
}
