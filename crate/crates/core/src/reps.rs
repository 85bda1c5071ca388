//! Spin-j irreps of the classical algebra and, through a solved map, of the
//! Jordanian algebra. Spins are passed doubled (`two_j = 2j`).

use crate::error::{Error, Result};
use crate::exact::{HPoly, Rational, WSeries};
use crate::expr::{Generator, GeneratorImages};
use crate::maps::{solve_forward, solve_inverse, MapSpec};
use crate::matrix::PolyMatrix;
use crate::residual::Residual;

/// Classical generators. The standard basis has `J0 = diag(2j, ..., -2j)`,
/// `J-` the unit lower shift and `J+` the upper shift with entries
/// `k (n - k)`; [`ClassicalIrrep::conjugate`] moves to any other basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalIrrep {
    pub two_j: u32,
    pub jp: PolyMatrix,
    pub jm: PolyMatrix,
    pub j0: PolyMatrix,
}

pub fn classical_irrep(two_j: i64) -> Result<ClassicalIrrep> {
    let two_j = u32::try_from(two_j).map_err(|_| Error::InvalidSpin(two_j))?;
    let n = two_j as usize + 1;
    let mut jp = PolyMatrix::zeros(n, n);
    let mut jm = PolyMatrix::zeros(n, n);
    for k in 1..n {
        jp.set(k - 1, k, HPoly::from((k * (n - k)) as i64));
        jm.set(k, k - 1, HPoly::one());
    }
    let j0 = PolyMatrix::diagonal(
        (0..n)
            .map(|k| HPoly::from(two_j as i64 - 2 * k as i64))
            .collect(),
    );
    Ok(ClassicalIrrep { two_j, jp, jm, j0 })
}

impl ClassicalIrrep {
    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// `P J P^{-1}` for each generator; `p_inv` must invert `p`.
    pub fn conjugate(&self, p: &PolyMatrix, p_inv: &PolyMatrix) -> Result<Self> {
        if !p.try_mul(p_inv)?.is_identity() {
            return Err(Error::Inconsistent(
                "conjugator and inverse disagree".into(),
            ));
        }
        let c = |m: &PolyMatrix| -> Result<PolyMatrix> { p.try_mul(m)?.try_mul(p_inv) };
        Ok(ClassicalIrrep {
            two_j: self.two_j,
            jp: c(&self.jp)?,
            jm: c(&self.jm)?,
            j0: c(&self.j0)?,
        })
    }

    /// `[J0, J+-] = +-2 J+-` and `[J+, J-] = J0`.
    pub fn relation_residuals(&self) -> Result<Vec<Residual>> {
        let two = Rational::from(2);
        Ok(vec![
            Residual::eq(
                "[J0,J+] = 2J+",
                &self.j0.commutator(&self.jp)?,
                &self.jp.scale_rat(&two),
            ),
            Residual::eq(
                "[J0,J-] = -2J-",
                &self.j0.commutator(&self.jm)?,
                &self.jm.scale_rat(&-two),
            ),
            Residual::eq("[J+,J-] = J0", &self.jp.commutator(&self.jm)?, &self.j0),
        ])
    }

    /// `h J+`, the nilpotent argument of the inverse-map functions.
    pub fn z(&self) -> PolyMatrix {
        self.jp.scale(&HPoly::h())
    }
}

impl GeneratorImages for ClassicalIrrep {
    fn dim(&self) -> usize {
        ClassicalIrrep::dim(self)
    }
    fn image(&self, g: Generator) -> Option<&PolyMatrix> {
        match g {
            Generator::Jp => Some(&self.jp),
            Generator::Jm => Some(&self.jm),
            Generator::J0 => Some(&self.j0),
            _ => None,
        }
    }
}

/// Jordanian generators on a spin-j irrep, built through `map`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanianIrrep {
    pub two_j: u32,
    pub map: MapSpec,
    pub t: PolyMatrix,
    pub tinv: PolyMatrix,
    pub h: PolyMatrix,
    pub y: PolyMatrix,
    pub x: PolyMatrix,
}

impl JordanianIrrep {
    pub fn dim(&self) -> usize {
        self.t.rows()
    }

    /// `h X = log T`.
    pub fn hx(&self) -> PolyMatrix {
        self.x.scale(&HPoly::h())
    }

    /// Every generator matrix, in a fixed order.
    pub fn generators(&self) -> [(Generator, &PolyMatrix); 5] {
        [
            (Generator::T, &self.t),
            (Generator::Tinv, &self.tinv),
            (Generator::H, &self.h),
            (Generator::Y, &self.y),
            (Generator::X, &self.x),
        ]
    }
}

impl GeneratorImages for JordanianIrrep {
    fn dim(&self) -> usize {
        JordanianIrrep::dim(self)
    }
    fn image(&self, g: Generator) -> Option<&PolyMatrix> {
        match g {
            Generator::T => Some(&self.t),
            Generator::Tinv => Some(&self.tinv),
            Generator::H => Some(&self.h),
            Generator::Y => Some(&self.y),
            Generator::X => Some(&self.x),
            _ => None,
        }
    }
}

/// Build the Jordanian irrep of spin `two_j / 2` through `map` in the
/// standard classical basis.
pub fn jordanian_irrep(map: &MapSpec, two_j: i64) -> Result<JordanianIrrep> {
    jordanian_from_classical(map, &classical_irrep(two_j)?)
}

/// `T = g1(z)`, `H = G2(z) J0`, `Y = G3(z) J- + h (A(z) + B(z) J0 + C(z) J0^2)`
/// with `z = h J+`, evaluated on the given classical matrices.
pub fn jordanian_from_classical(map: &MapSpec, cl: &ClassicalIrrep) -> Result<JordanianIrrep> {
    let n = cl.dim();
    let inv = solve_inverse(map, n)?;
    let z = cl.z();
    let f = |s: &WSeries| z.apply_series(s);
    let hh = HPoly::h();

    let t = f(&inv.g1)?;
    let tinv = f(&inv.g1.inverse()?)?;
    let h = f(&inv.g2)?.try_mul(&cl.j0)?;
    let j0_sq = cl.j0.try_mul(&cl.j0)?;
    let correction = f(&inv.a_bar)?
        .try_add(&f(&inv.b_bar)?.try_mul(&cl.j0)?)?
        .try_add(&f(&inv.c_bar)?.try_mul(&j0_sq)?)?;
    let y = f(&inv.g3)?
        .try_mul(&cl.jm)?
        .try_add(&correction.scale(&hh))?;
    let x = t.log_unipotent()?.div_h_checked(1)?;
    Ok(JordanianIrrep {
        two_j: cl.two_j,
        map: map.clone(),
        t,
        tinv,
        h,
        y,
        x,
    })
}

/// Residuals of the defining relations:
///
/// ```text
/// T Tinv = 1            [H, T^{+-1}] = T^{+-2} - 1
/// [H, Y] = -1/2 {Y, T + Tinv}
/// [T, Y] = h/2 {H, T}   [Tinv, Y] = -h/2 {H, Tinv}
/// [X, Y] = H            h [H, X] = T - Tinv
/// ```
pub fn verify_jordanian_relations(rep: &JordanianIrrep) -> Result<Vec<Residual>> {
    jordanian_relations(rep)
}

/// The same relations on any set of Jordanian generator images, such as
/// coproduct images on a tensor product.
pub fn jordanian_relations(rep: &dyn GeneratorImages) -> Result<Vec<Residual>> {
    let id = PolyMatrix::identity(rep.dim());
    let get = |g: Generator| {
        rep.image(g)
            .ok_or_else(|| Error::UnknownSymbol(g.symbol().to_string()))
    };
    let (t, ti, h, y, x) = (
        get(Generator::T)?,
        get(Generator::Tinv)?,
        get(Generator::H)?,
        get(Generator::Y)?,
        get(Generator::X)?,
    );
    let half_h = HPoly::monomial(Rational::new(1, 2), 1);
    Ok(vec![
        Residual::eq("T Tinv = 1", &t.try_mul(ti)?, &id),
        Residual::eq("Tinv T = 1", &ti.try_mul(t)?, &id),
        Residual::eq("[H,T] = T^2 - 1", &h.commutator(t)?, &(t.try_mul(t)? - &id)),
        Residual::eq(
            "[H,Tinv] = Tinv^2 - 1",
            &h.commutator(ti)?,
            &(ti.try_mul(ti)? - &id),
        ),
        Residual::eq(
            "[H,Y] = -1/2 {Y, T + Tinv}",
            &h.commutator(y)?,
            &y.anticommutator(&t.try_add(ti)?)?
                .scale_rat(&Rational::new(-1, 2)),
        ),
        Residual::eq(
            "[T,Y] = h/2 {H,T}",
            &t.commutator(y)?,
            &h.anticommutator(t)?.scale(&half_h),
        ),
        Residual::eq(
            "[Tinv,Y] = -h/2 {H,Tinv}",
            &ti.commutator(y)?,
            &h.anticommutator(ti)?.scale(&-&half_h),
        ),
        Residual::eq("[X,Y] = H", &x.commutator(y)?, h),
        Residual::eq(
            "h[H,X] = T - Tinv",
            &h.commutator(x)?.scale(&HPoly::h()),
            &t.try_sub(ti)?,
        ),
    ])
}

/// Classical generators recovered from a Jordanian irrep through the
/// forward map.
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub jp: PolyMatrix,
    pub j0: PolyMatrix,
    pub jm: PolyMatrix,
}

/// `J+ = phi(hX)/h`, `J0 = F2(hX) H`,
/// `J- = F3(hX) Y + h (U(hX) + V(hX) H + W(hX) H^2)`.
pub fn reconstruct_classical(map: &MapSpec, rep: &JordanianIrrep) -> Result<Reconstruction> {
    let hx = rep.hx();
    let n = hx.nilpotency_index()?.max(1);
    let sol = solve_forward(map, n)?;
    let f = |s: &WSeries| hx.apply_series(s);
    let h_sq = rep.h.try_mul(&rep.h)?;
    let jp = f(&map.phi(n)?)?.div_h_checked(1)?;
    let j0 = f(&sol.f2)?.try_mul(&rep.h)?;
    let correction = f(&sol.u_bar)?
        .try_add(&f(&sol.v_bar)?.try_mul(&rep.h)?)?
        .try_add(&f(&sol.w_bar)?.try_mul(&h_sq)?)?;
    let jm = f(&sol.f3)?
        .try_mul(&rep.y)?
        .try_add(&correction.scale(&HPoly::h()))?;
    Ok(Reconstruction { jp, j0, jm })
}

/// Differences between a reconstruction and the classical matrices.
pub fn round_trip_residuals(rec: &Reconstruction, cl: &ClassicalIrrep) -> Vec<Residual> {
    vec![
        Residual::eq("J+ round trip", &rec.jp, &cl.jp),
        Residual::eq("J0 round trip", &rec.j0, &cl.j0),
        Residual::eq("J- round trip", &rec.jm, &cl.jm),
    ]
}

/// The commutator identities behind the map equations, for sample
/// functions `f` (a series in `s = T - 1`) and `g` (a series in `z = hJ+`):
///
/// ```text
/// [H, f(T)] = (T^2 - 1) f'(T)
/// [f(T), Y] = h (T f') H + h/2 (T^2 - 1) (T f')'
/// [J0, g(z)] = 2 z g'(z)
/// [g(z), J-] = h (z g''(z) + g'(z) J0)
/// ```
pub fn commutator_identity_checks(
    rep: &JordanianIrrep,
    cl: &ClassicalIrrep,
    f_samples: &[WSeries],
    g_samples: &[WSeries],
) -> Result<Vec<Residual>> {
    let n = rep.dim();
    let id = PolyMatrix::identity(n);
    let s = rep.t.try_sub(&id)?;
    let t2m1 = rep.t.try_mul(&rep.t)?.try_sub(&id)?;
    let h = HPoly::h();
    let mut out = Vec::new();
    for (i, f) in f_samples.iter().enumerate() {
        let f = f.truncate_checked(f.order().min(n + 2))?;
        let at = |x: &WSeries| s.apply_series(x);
        let fm = at(&f)?;
        let df = f.derivative();
        // T f'(T) as a series in s: (1 + s) f'.
        let tdf = &(&WSeries::one(df.order()) + &WSeries::var(df.order())) * &df;
        out.push(Residual::eq(
            format!("[H,f{i}(T)] = (T^2-1) f{i}'"),
            &rep.h.commutator(&fm)?,
            &t2m1.try_mul(&at(&df)?)?,
        ));
        let rhs = at(&tdf)?.try_mul(&rep.h)?.scale(&h).try_add(
            &t2m1
                .try_mul(&at(&tdf.derivative())?)?
                .scale(&h.scale(&Rational::new(1, 2))),
        )?;
        out.push(Residual::eq(
            format!("[f{i}(T),Y] identity"),
            &fm.commutator(&rep.y)?,
            &rhs,
        ));
    }
    let z = cl.z();
    for (i, g) in g_samples.iter().enumerate() {
        let g = g.truncate_checked(g.order().min(n + 2))?;
        let at = |x: &WSeries| z.apply_series(x);
        let gm = at(&g)?;
        let dg = g.derivative();
        let zdg = at(&dg.shift_up(1))?;
        out.push(Residual::eq(
            format!("[J0,g{i}(z)] = 2 z g{i}'"),
            &cl.j0.commutator(&gm)?,
            &zdg.scale_rat(&Rational::from(2)),
        ));
        let rhs = at(&dg.derivative().shift_up(1))?
            .try_add(&at(&dg)?.try_mul(&cl.j0)?)?
            .scale(&h);
        out.push(Residual::eq(
            format!("[g{i}(z),J-] identity"),
            &gm.commutator(&cl.jm)?,
            &rhs,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{builtin_map, BuiltinMap};
    use crate::residual::{all_vanish, failing};

    fn poly_rows(rows: &[&[&[i64]]]) -> PolyMatrix {
        PolyMatrix::from_int_rows(rows)
    }

    #[test]
    fn classical_small_spins() {
        let half = classical_irrep(1).unwrap();
        assert_eq!(half.jp, poly_rows(&[&[&[], &[1]], &[&[], &[]]]));
        assert_eq!(half.jm, poly_rows(&[&[&[], &[]], &[&[1], &[]]]));
        assert_eq!(half.j0, poly_rows(&[&[&[1], &[]], &[&[], &[-1]]]));
        let one = classical_irrep(2).unwrap();
        assert_eq!(one.jp.commutator(&one.jm).unwrap(), one.j0);
        let zero = classical_irrep(0).unwrap();
        assert!(zero.jp.is_zero() && zero.jm.is_zero() && zero.j0.is_zero());
        assert!(matches!(classical_irrep(-1), Err(Error::InvalidSpin(-1))));
        for tj in 0..8 {
            assert!(all_vanish(
                &classical_irrep(tj).unwrap().relation_residuals().unwrap()
            ));
        }
    }

    #[test]
    fn minimal_spin_half() {
        let rep = jordanian_irrep(&MapSpec::minimal(), 1).unwrap();
        assert_eq!(rep.t, poly_rows(&[&[&[1], &[0, 1]], &[&[], &[1]]]));
        assert_eq!(rep.h, poly_rows(&[&[&[1], &[0, 1]], &[&[], &[-1]]]));
        // T H = J0 and hX = hJ+ on spin 1/2.
        let cl = classical_irrep(1).unwrap();
        assert_eq!(rep.t.try_mul(&rep.h).unwrap(), cl.j0);
        assert_eq!(rep.hx(), cl.z());
    }

    #[test]
    fn diag_map_keeps_h_diagonal() {
        let map = builtin_map("diag").unwrap();
        for tj in 0..6 {
            let rep = jordanian_irrep(&map, tj).unwrap();
            assert_eq!(rep.h, classical_irrep(tj).unwrap().j0);
        }
    }

    #[test]
    fn classical_limit() {
        for m in BuiltinMap::ALL {
            let rep = jordanian_irrep(&MapSpec::builtin(m), 3).unwrap();
            let cl = classical_irrep(3).unwrap();
            assert!(rep.t.eval_h0().is_identity());
            assert_eq!(rep.h.eval_h0(), cl.j0);
            assert_eq!(rep.y.eval_h0(), cl.jm);
            assert_eq!(rep.x.eval_h0(), cl.jp);
        }
    }

    #[test]
    fn relations_and_round_trip() {
        for m in BuiltinMap::ALL {
            let map = MapSpec::builtin(m);
            for tj in 0..5 {
                let rep = jordanian_irrep(&map, tj).unwrap();
                let res = verify_jordanian_relations(&rep).unwrap();
                assert!(all_vanish(&res), "{m} 2j={tj}: {:?}", failing(&res));
                let rec = reconstruct_classical(&map, &rep).unwrap();
                let rt = round_trip_residuals(&rec, &classical_irrep(tj).unwrap());
                assert!(all_vanish(&rt), "{m} 2j={tj}: {:?}", failing(&rt));
            }
        }
    }

    #[test]
    fn perturbed_h_breaks_xy_relation() {
        let mut rep = jordanian_irrep(&MapSpec::minimal(), 2).unwrap();
        let cl = classical_irrep(2).unwrap();
        rep.h = rep.h.try_add(&cl.z()).unwrap();
        let res = verify_jordanian_relations(&rep).unwrap();
        assert!(failing(&res).contains(&"[X,Y] = H"));
    }

    #[test]
    fn commutator_identities() {
        let map = MapSpec::minimal();
        let rep = jordanian_irrep(&map, 2).unwrap();
        let cl = classical_irrep(2).unwrap();
        let t_squared = WSeries::from_ints(6, &[1, 2, 1]);
        let constant = WSeries::from_ints(6, &[5]);
        let z_squared = WSeries::from_ints(6, &[0, 0, 1]);
        let res = commutator_identity_checks(
            &rep,
            &cl,
            &[
                t_squared.clone(),
                constant.clone(),
                crate::exact::Elementary::Log1p.expand(6),
            ],
            &[
                z_squared.clone(),
                constant,
                crate::exact::Elementary::Exp.expand(6),
            ],
        )
        .unwrap();
        assert!(all_vanish(&res), "{:?}", failing(&res));

        // [H, T^2] = (T^2 - 1) 2T, computed directly.
        let t2 = rep.t.try_mul(&rep.t).unwrap();
        let id = PolyMatrix::identity(3);
        assert_eq!(
            rep.h.commutator(&t2).unwrap(),
            (&t2 - &id)
                .try_mul(&rep.t.scale_rat(&Rational::from(2)))
                .unwrap()
        );
        let z = cl.z();
        let z2 = z.try_mul(&z).unwrap();
        assert_eq!(
            cl.j0.commutator(&z2).unwrap(),
            z2.scale_rat(&Rational::from(4))
        );
    }
}
