//! Coproducts on tensor products of irreps, the minimal twist `V`, the
//! triangular R-matrix, general twists `F`, cocycle identities and the
//! antipode conjugators.
//!
//! Coproduct of the Jordanian algebra on generators:
//!
//! ```text
//! D(T^{+-1}) = T^{+-1} (x) T^{+-1}     D(X) = X (x) 1 + 1 (x) X
//! D(H) = H (x) T + Tinv (x) H          D(Y) = Y (x) T + Tinv (x) Y
//! ```
//!
//! and the classical one is primitive, `D(J) = J (x) 1 + 1 (x) J`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::equiv::{build_u, mu_from_lambda, similarity, MuSeries, SimilaritySeries};
use crate::error::{Error, Result};
use crate::exact::{HPoly, Rational, WSeries};
use crate::expr::{
    antipode_transform, parse_expression, Dialect, Expr, Generator, GeneratorImages, GeneratorTable,
};
use crate::maps::{solve_forward, solve_inverse, MapSpec};
use crate::matrix::{flip_perm, PolyMatrix};
use crate::reps::{
    classical_irrep, jordanian_irrep, jordanian_relations, ClassicalIrrep, JordanianIrrep,
};
use crate::residual::Residual;

fn image(g: &dyn GeneratorImages, gen: Generator) -> Result<&PolyMatrix> {
    g.image(gen)
        .ok_or_else(|| Error::UnknownSymbol(gen.symbol().to_string()))
}

/// Jordanian coproduct images on `a (x) b` from the images on each leg.
pub fn jordanian_delta(a: &dyn GeneratorImages, b: &dyn GeneratorImages) -> Result<GeneratorTable> {
    use Generator::*;
    let ia = PolyMatrix::identity(a.dim());
    let ib = PolyMatrix::identity(b.dim());
    let k =
        |x: Generator, y: Generator| -> Result<PolyMatrix> { Ok(image(a, x)?.kron(image(b, y)?)) };
    let two_term = |g: Generator| -> Result<PolyMatrix> { k(g, T)?.try_add(&k(Tinv, g)?) };
    Ok(GeneratorTable::new(a.dim() * b.dim())
        .with(T, k(T, T)?)
        .with(Tinv, k(Tinv, Tinv)?)
        .with(H, two_term(H)?)
        .with(Y, two_term(Y)?)
        .with(X, image(a, X)?.kron(&ib).try_add(&ia.kron(image(b, X)?))?))
}

/// Primitive classical coproduct images on `a (x) b`.
pub fn classical_delta(a: &ClassicalIrrep, b: &ClassicalIrrep) -> GeneratorTable {
    let ia = PolyMatrix::identity(a.dim());
    let ib = PolyMatrix::identity(b.dim());
    let prim = |x: &PolyMatrix, y: &PolyMatrix| &x.kron(&ib) + &ia.kron(y);
    GeneratorTable::new(a.dim() * b.dim())
        .with(Generator::Jp, prim(&a.jp, &b.jp))
        .with(Generator::Jm, prim(&a.jm, &b.jm))
        .with(Generator::J0, prim(&a.j0, &b.j0))
}

/// Both coproducts on the spin pair `(j1, j2)`.
#[derive(Clone, Debug)]
pub struct CoproductSet {
    pub two_j1: u32,
    pub two_j2: u32,
    pub images: GeneratorTable,
}

impl CoproductSet {
    pub fn get(&self, g: Generator) -> &PolyMatrix {
        &self.images.images[&g]
    }
}

impl GeneratorImages for CoproductSet {
    fn dim(&self) -> usize {
        self.images.dim
    }
    fn image(&self, g: Generator) -> Option<&PolyMatrix> {
        self.images.image(g)
    }
}

pub fn coproducts(map: &MapSpec, two_j1: i64, two_j2: i64) -> Result<CoproductSet> {
    let (a, b) = (jordanian_irrep(map, two_j1)?, jordanian_irrep(map, two_j2)?);
    coproducts_from(&a, &b)
}

/// Coproducts from already-built legs (classical side in the standard basis).
pub fn coproducts_from(a: &JordanianIrrep, b: &JordanianIrrep) -> Result<CoproductSet> {
    let mut images = jordanian_delta(a, b)?;
    let cl = classical_delta(
        &classical_irrep(a.two_j as i64)?,
        &classical_irrep(b.two_j as i64)?,
    );
    images.images.extend(cl.images);
    Ok(CoproductSet {
        two_j1: a.two_j,
        two_j2: b.two_j,
        images,
    })
}

/// The defining relations on the Jordanian coproduct images (the
/// coproduct is an algebra map) and the classical relations on the
/// primitive ones.
pub fn coproduct_homomorphism_check(set: &CoproductSet) -> Result<Vec<Residual>> {
    let mut out = jordanian_relations(set)?;
    let (jp, jm, j0) = (
        set.get(Generator::Jp),
        set.get(Generator::Jm),
        set.get(Generator::J0),
    );
    out.push(Residual::eq("D[J+,J-] = D J0", &jp.commutator(jm)?, j0));
    out.push(Residual::eq(
        "D[J0,J+] = 2 D J+",
        &j0.commutator(jp)?,
        &jp.scale_rat(&Rational::from(2)),
    ));
    let tinv_t = set.get(Generator::T).try_mul(set.get(Generator::Tinv))?;
    out.push(Residual::eq(
        "D T D Tinv = 1",
        &tinv_t,
        &PolyMatrix::identity(set.dim()),
    ));
    Ok(out)
}

/// Coproduct of each Jordanian generator as a list of `(left, right)`
/// tensor factors.
fn coproduct_terms(g: Generator) -> Vec<(Expr, Expr)> {
    use Generator::*;
    let e = Expr::gen;
    let one = || Expr::num(1);
    match g {
        T | Tinv => vec![(e(g), e(g))],
        H | Y => vec![(e(g), e(T)), (e(Tinv), e(g))],
        X => vec![(e(X), one()), (one(), e(X))],
        _ => Vec::new(),
    }
}

fn counit(g: Generator) -> Rational {
    match g {
        Generator::T | Generator::Tinv => Rational::one(),
        _ => Rational::zero(),
    }
}

/// Counit of a single generator or of `1`; other factors do not occur in
/// the two-term coproducts.
fn counit_of(e: &Expr) -> Rational {
    match e {
        Expr::Gen(g) => counit(*g),
        _ => Rational::one(),
    }
}

/// Antipode and counit axioms for every Jordanian generator:
/// `m (S (x) id) D = e 1`, `m (id (x) S) D = e 1`,
/// `(e (x) id) D = id` and `(id (x) e) D = id`.
pub fn hopf_axiom_checks(rep: &JordanianIrrep) -> Result<Vec<Residual>> {
    let n = rep.dim();
    let id = PolyMatrix::identity(n);
    let eval = |e: &Expr| e.eval_matrix(rep);
    let mut out = Vec::new();
    for g in Generator::JORDANIAN {
        let terms = coproduct_terms(g);
        let unit = id.scale_rat(&counit(g));
        let mut left = PolyMatrix::zeros(n, n);
        let mut right = PolyMatrix::zeros(n, n);
        let mut eps_left = PolyMatrix::zeros(n, n);
        let mut eps_right = PolyMatrix::zeros(n, n);
        for (a, b) in &terms {
            left = left.try_add(&eval(&antipode_transform(a)?)?.try_mul(&eval(b)?)?)?;
            right = right.try_add(&eval(a)?.try_mul(&eval(&antipode_transform(b)?)?)?)?;
            eps_left = eps_left.try_add(&eval(b)?.scale_rat(&counit_of(a)))?;
            eps_right = eps_right.try_add(&eval(a)?.scale_rat(&counit_of(b)))?;
        }
        let this = eval(&Expr::gen(g))?;
        out.push(Residual::eq(format!("S(.)id on D({g})"), &left, &unit));
        out.push(Residual::eq(format!("id S(.) on D({g})"), &right, &unit));
        out.push(Residual::eq(format!("(e x id) D({g})"), &eps_left, &this));
        out.push(Residual::eq(format!("(id x e) D({g})"), &eps_right, &this));
    }
    Ok(out)
}

/// `sigma o A` for an operator `A(j2, j1)` built on the swapped pair:
/// `P(d2, d1) A P(d1, d2)`, an operator on `j1 (x) j2`.
pub fn flip_conjugate(swapped: &PolyMatrix, d1: usize, d2: usize) -> Result<PolyMatrix> {
    flip_perm(d2, d1)
        .try_mul(swapped)?
        .try_mul(&flip_perm(d1, d2))
}

/// Twist data on a spin pair.
#[derive(Clone, Debug)]
pub struct TwistSet {
    pub two_j1: u32,
    pub two_j2: u32,
    pub map: String,
    pub v: PolyMatrix,
    pub vinv: PolyMatrix,
    pub f: PolyMatrix,
    pub finv: PolyMatrix,
    pub fs: PolyMatrix,
}

/// `T H` and `h X` on a Jordanian irrep.
fn th_and_hx(rep: &JordanianIrrep) -> Result<(PolyMatrix, PolyMatrix)> {
    Ok((rep.t.try_mul(&rep.h)?, rep.hx()))
}

/// `V = exp(-(T H) (x) hX)` and its inverse on `a (x) b`.
pub fn minimal_v(a: &JordanianIrrep, b: &JordanianIrrep) -> Result<(PolyMatrix, PolyMatrix)> {
    let (th, _) = th_and_hx(a)?;
    let (_, hx) = th_and_hx(b)?;
    let log = th.kron(&hx);
    Ok(((-&log).exp_nilpotent()?, log.exp_nilpotent()?))
}

/// The minimal twist: `F = V`, `FS = 1`.
pub fn twist_minimal(two_j1: i64, two_j2: i64) -> Result<TwistSet> {
    let map = MapSpec::minimal();
    let (a, b) = (
        jordanian_irrep(&map, two_j1)?,
        jordanian_irrep(&map, two_j2)?,
    );
    let (v, vinv) = minimal_v(&a, &b)?;
    Ok(TwistSet {
        two_j1: a.two_j,
        two_j2: b.two_j,
        map: map.name().to_string(),
        f: v.clone(),
        finv: vinv.clone(),
        fs: PolyMatrix::identity(v.rows()),
        v,
        vinv,
    })
}

/// `R = (sigma o V) V^-1` on `a (x) b`, for legs built from any map.
pub fn rmatrix_from(a: &JordanianIrrep, b: &JordanianIrrep) -> Result<PolyMatrix> {
    let (v_swapped, _) = minimal_v(b, a)?;
    let (_, vinv) = minimal_v(a, b)?;
    flip_conjugate(&v_swapped, a.dim(), b.dim())?.try_mul(&vinv)
}

/// `R = exp(-hX (x) TH) exp(TH (x) hX)`.
pub fn rmatrix_two_factor(a: &JordanianIrrep, b: &JordanianIrrep) -> Result<PolyMatrix> {
    let (th_a, hx_a) = th_and_hx(a)?;
    let (th_b, hx_b) = th_and_hx(b)?;
    let first = (-&hx_a.kron(&th_b)).exp_nilpotent()?;
    let second = th_a.kron(&hx_b).exp_nilpotent()?;
    first.try_mul(&second)
}

/// The R-matrix on `(j1, j2)` of the minimal map's irreps; both
/// constructions must agree exactly.
pub fn rmatrix(two_j1: i64, two_j2: i64) -> Result<PolyMatrix> {
    rmatrix_for(&MapSpec::minimal(), two_j1, two_j2)
}

/// The R-matrix on irreps built through `map`.
pub fn rmatrix_for(map: &MapSpec, two_j1: i64, two_j2: i64) -> Result<PolyMatrix> {
    let (a, b) = (jordanian_irrep(map, two_j1)?, jordanian_irrep(map, two_j2)?);
    let r = rmatrix_from(&a, &b)?;
    let r2 = rmatrix_two_factor(&a, &b)?;
    if r != r2 {
        return Err(Error::Inconsistent(format!(
            "R-matrix constructions disagree on (2j1, 2j2) = ({two_j1}, {two_j2})"
        )));
    }
    Ok(r)
}

/// `(sigma o R) R = 1`, with `sigma o R` built from the swapped pair.
pub fn triangularity(map: &MapSpec, two_j1: i64, two_j2: i64) -> Result<Residual> {
    let r = rmatrix_for(map, two_j1, two_j2)?;
    let r_swapped = rmatrix_for(map, two_j2, two_j1)?;
    let d1 = two_j1 as usize + 1;
    let d2 = two_j2 as usize + 1;
    let prod = flip_conjugate(&r_swapped, d1, d2)?.try_mul(&r)?;
    Ok(Residual::eq(
        "P R P R = 1",
        &prod,
        &PolyMatrix::identity(d1 * d2),
    ))
}

/// `R D(g) = (P D'(g) P) R` where `D'` is the coproduct on the swapped pair.
pub fn intertwining(map: &MapSpec, two_j1: i64, two_j2: i64) -> Result<Vec<Residual>> {
    let (a, b) = (jordanian_irrep(map, two_j1)?, jordanian_irrep(map, two_j2)?);
    let r = rmatrix_for(map, two_j1, two_j2)?;
    let direct = jordanian_delta(&a, &b)?;
    let swapped = jordanian_delta(&b, &a)?;
    let mut out = Vec::new();
    for g in [
        Generator::T,
        Generator::Tinv,
        Generator::H,
        Generator::Y,
        Generator::X,
    ] {
        let opposite = flip_conjugate(image(&swapped, g)?, a.dim(), b.dim())?;
        out.push(Residual::eq(
            format!("R D({g}) = D'({g}) R"),
            &r.try_mul(image(&direct, g)?)?,
            &opposite.try_mul(&r)?,
        ));
    }
    Ok(out)
}

/// `R12 R13 R23 = R23 R13 R12` on `(j1, j2, j3)`.
pub fn yang_baxter(map: &MapSpec, two_j1: i64, two_j2: i64, two_j3: i64) -> Result<Residual> {
    let (d1, d2, d3) = (
        two_j1 as usize + 1,
        two_j2 as usize + 1,
        two_j3 as usize + 1,
    );
    let i1 = PolyMatrix::identity(d1);
    let i2 = PolyMatrix::identity(d2);
    let i3 = PolyMatrix::identity(d3);
    let r12 = rmatrix_for(map, two_j1, two_j2)?.kron(&i3);
    let r23 = i1.kron(&rmatrix_for(map, two_j2, two_j3)?);
    let r13 = i1
        .kron(&flip_perm(d3, d2))
        .try_mul(&rmatrix_for(map, two_j1, two_j3)?.kron(&i2))?
        .try_mul(&i1.kron(&flip_perm(d2, d3)))?;
    let lhs = r12.try_mul(&r13)?.try_mul(&r23)?;
    let rhs = r23.try_mul(&r13)?.try_mul(&r12)?;
    Ok(Residual::eq("R12 R13 R23 = R23 R13 R12", &lhs, &rhs))
}

/// Classical generators of the minimal map written in Jordanian ones.
pub fn minimal_classical_exprs() -> Vec<(Generator, Expr)> {
    let p = |s: &str| {
        parse_expression(s, Dialect::MatrixExpr)
            .expect("built-in expression parses")
            .expr
    };
    vec![
        (Generator::Jp, p("(1 - Tinv^2)/(2*h)")),
        (Generator::J0, p("T*H")),
        (
            Generator::Jm,
            p("T*Y - (1/2)*h*(T*H)^2 - (1/8)*h*(T^2 - 1)"),
        ),
    ]
}

/// Classical generators of any map written in Jordanian ones through the
/// solved forward functions; series carry `order` coefficients.
pub fn forward_classical_exprs(map: &MapSpec, order: usize) -> Result<Vec<(Generator, Expr)>> {
    let sol = solve_forward(map, order)?;
    let hx = || Expr::h().mul(Expr::gen(Generator::X));
    let at = |s: &WSeries| Expr::series(s.clone(), hx());
    let (hh, y) = (Expr::gen(Generator::H), Expr::gen(Generator::Y));
    let jm = at(&sol.f3).mul(y).add(
        Expr::h().mul(
            at(&sol.u_bar)
                .add(at(&sol.v_bar).mul(hh.clone()))
                .add(at(&sol.w_bar).mul(hh.clone().pow(2))),
        ),
    );
    Ok(vec![
        (Generator::Jp, at(&map.phi(order)?).div(Expr::h())),
        (Generator::J0, at(&sol.f2).mul(hh)),
        (Generator::Jm, jm),
    ])
}

/// Jordanian generators of a map written in classical ones through the
/// solved inverse functions of `z = hJ+`.
pub fn inverse_jordanian_exprs(map: &MapSpec, order: usize) -> Result<BTreeMap<Generator, Expr>> {
    let inv = solve_inverse(map, order)?;
    let z = || Expr::h().mul(Expr::gen(Generator::Jp));
    let at = |s: &WSeries| Expr::series(s.clone(), z());
    let j0 = || Expr::gen(Generator::J0);
    let y = at(&inv.g3).mul(Expr::gen(Generator::Jm)).add(
        Expr::h().mul(
            at(&inv.a_bar)
                .add(at(&inv.b_bar).mul(j0()))
                .add(at(&inv.c_bar).mul(j0().pow(2))),
        ),
    );
    let mut out = BTreeMap::new();
    out.insert(Generator::T, at(&inv.g1));
    out.insert(Generator::Tinv, at(&inv.g1.inverse()?));
    out.insert(Generator::H, at(&inv.g2).mul(j0()));
    out.insert(Generator::Y, y);
    out.insert(Generator::X, at(&inv.psi).div(Expr::h()));
    Ok(out)
}

/// `F^-1 D(J) F = J (x) 1 + 1 (x) J` for each classical generator `J`,
/// with `D(J)` the Jordanian expression of `J` evaluated on the coproduct
/// images.
pub fn twist_relation_check(
    f: &PolyMatrix,
    finv: &PolyMatrix,
    set: &CoproductSet,
    exprs: &[(Generator, Expr)],
) -> Result<Vec<Residual>> {
    let mut out = Vec::new();
    for (g, e) in exprs {
        let delta = e.eval_matrix(set)?;
        let conj = finv.try_mul(&delta)?.try_mul(f)?;
        out.push(Residual::eq(
            format!("F^-1 D({g}) F = {g} x 1 + 1 x {g}"),
            &conj,
            set.get(*g),
        ));
    }
    Ok(out)
}

/// How the classical-side factor of a general twist is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaugeFactor {
    /// `F = D_n(U)^-1 V (U (x) U)`.
    Product,
    /// `F = D_n(U)^-1 V D_c(U)` with the primitive classical coproduct of `U`.
    Coproduct,
}

/// Similarity data relating the minimal map to `map`, to the order forced
/// by nilpotency on a tensor product of total dimension `d1 + d2`.
pub fn gauge_series(map: &MapSpec, d1: usize, d2: usize) -> Result<(SimilaritySeries, MuSeries)> {
    let lam = similarity(&MapSpec::minimal(), map, d1 + d2 + 1)?;
    let mu = mu_from_lambda(&lam)?;
    Ok((lam, mu))
}

/// `D_n(U) = exp(-mu(D T) D H)` and its inverse.
fn delta_u(mu: &MuSeries, images: &dyn GeneratorImages) -> Result<(PolyMatrix, PolyMatrix)> {
    let n = images.dim();
    let s = image(images, Generator::T)?.try_sub(&PolyMatrix::identity(n))?;
    let log = s
        .apply_series(&mu.as_series())?
        .try_mul(image(images, Generator::H)?)?;
    Ok(((-&log).exp_nilpotent()?, log.exp_nilpotent()?))
}

/// A general twist for `map` on `(j1, j2)`, with explicit `lambda`/`mu`.
pub fn twist_general_with(
    map: &MapSpec,
    two_j1: i64,
    two_j2: i64,
    lam: &SimilaritySeries,
    mu: &MuSeries,
    form: GaugeFactor,
) -> Result<TwistSet> {
    let (a, b) = (jordanian_irrep(map, two_j1)?, jordanian_irrep(map, two_j2)?);
    let (ca, cb) = (classical_irrep(two_j1)?, classical_irrep(two_j2)?);
    let (v, vinv) = minimal_v(&a, &b)?;
    let set = jordanian_delta(&a, &b)?;
    let (du, du_inv) = delta_u(mu, &set)?;
    let (cu, cu_inv) = match form {
        GaugeFactor::Product => {
            let (ua, ub) = (build_u(lam, &ca)?, build_u(lam, &cb)?);
            (
                ua.kron(&ub),
                ua.inverse_unipotent()?.kron(&ub.inverse_unipotent()?),
            )
        }
        GaugeFactor::Coproduct => {
            let cl = classical_delta(&ca, &cb);
            let z = image(&cl, Generator::Jp)?.scale(&HPoly::h());
            let order = lam.order().max(cl.dim + 1);
            let lam_s = WSeries::new(order, lam.as_series().coeffs().to_vec());
            let log = z
                .apply_series(&lam_s)?
                .try_mul(image(&cl, Generator::J0)?)?;
            (log.exp_nilpotent()?, (-&log).exp_nilpotent()?)
        }
    };
    let f = du_inv.try_mul(&v)?.try_mul(&cu)?;
    let finv = cu_inv.try_mul(&vinv)?.try_mul(&du)?;
    let fs = vinv.try_mul(&f)?;
    Ok(TwistSet {
        two_j1: a.two_j,
        two_j2: b.two_j,
        map: map.name().to_string(),
        v,
        vinv,
        f,
        finv,
        fs,
    })
}

/// A general twist for `map` on `(j1, j2)`.
pub fn twist_general(
    map: &MapSpec,
    two_j1: i64,
    two_j2: i64,
    form: GaugeFactor,
) -> Result<TwistSet> {
    let (lam, mu) = gauge_series(map, two_j1 as usize + 1, two_j2 as usize + 1)?;
    twist_general_with(map, two_j1, two_j2, &lam, &mu, form)
}

/// `sigma o FS = FS`, comparing against the twist built on the swapped pair.
pub fn fs_symmetry(
    fs: &PolyMatrix,
    fs_swapped: &PolyMatrix,
    d1: usize,
    d2: usize,
) -> Result<Residual> {
    Ok(Residual::eq(
        "sigma(FS) = FS",
        &flip_conjugate(fs_swapped, d1, d2)?,
        fs,
    ))
}

/// Cocycle identity `((D (x) 1) V)(V (x) 1) = ((1 (x) D) V)(1 (x) V)` for the
/// minimal twist, with the coproduct applied to `log V`.
pub fn cocycle_minimal(two_j1: i64, two_j2: i64, two_j3: i64) -> Result<Residual> {
    cocycle_general(&MapSpec::minimal(), two_j1, two_j2, two_j3, None)
}

/// The cocycle identity for `F = D(U)^-1 V (U (x) U)`; with no gauge data
/// (or the minimal map) this is the identity for `V` itself.
///
/// `(D (x) 1) F = D2(U)^-1 ((D (x) 1) V) (D(U) (x) U)` and symmetrically on
/// the right, where `D2 = (D (x) 1) D` is the threefold coproduct.
pub fn cocycle_general(
    map: &MapSpec,
    two_j1: i64,
    two_j2: i64,
    two_j3: i64,
    gauge: Option<(&SimilaritySeries, &MuSeries)>,
) -> Result<Residual> {
    let legs = [
        jordanian_irrep(map, two_j1)?,
        jordanian_irrep(map, two_j2)?,
        jordanian_irrep(map, two_j3)?,
    ];
    let [a, b, c] = &legs;
    let (i1, i3) = (PolyMatrix::identity(a.dim()), PolyMatrix::identity(c.dim()));
    let d12 = jordanian_delta(a, b)?;
    let d23 = jordanian_delta(b, c)?;
    let d123 = jordanian_delta(&d12, c)?;

    // (D x 1) V and (1 x D) V from the coproduct of log V.
    let th12 = image(&d12, Generator::T)?.try_mul(image(&d12, Generator::H)?)?;
    let dv_left = (-&th12.kron(&c.hx())).exp_nilpotent()?;
    let (th1, _) = th_and_hx(a)?;
    let hx23 = image(&d23, Generator::X)?.scale(&HPoly::h());
    let dv_right = (-&th1.kron(&hx23)).exp_nilpotent()?;
    let (v12, _) = minimal_v(a, b)?;
    let (v23, _) = minimal_v(b, c)?;

    let (lhs, rhs) = match gauge {
        None => (
            dv_left.try_mul(&v12.kron(&i3))?,
            dv_right.try_mul(&i1.kron(&v23))?,
        ),
        Some((lam, mu)) => {
            let us: Vec<PolyMatrix> = legs
                .iter()
                .map(|l| build_u(lam, &classical_irrep(l.two_j as i64)?))
                .collect::<Result<_>>()?;
            let (du12, du12_inv) = delta_u(mu, &d12)?;
            let (du23, du23_inv) = delta_u(mu, &d23)?;
            let (_, du123_inv) = delta_u(mu, &d123)?;
            let f12 = du12_inv.try_mul(&v12)?.try_mul(&us[0].kron(&us[1]))?;
            let f23 = du23_inv.try_mul(&v23)?.try_mul(&us[1].kron(&us[2]))?;
            let df_left = du123_inv.try_mul(&dv_left)?.try_mul(&du12.kron(&us[2]))?;
            let df_right = du123_inv.try_mul(&dv_right)?.try_mul(&us[0].kron(&du23))?;
            (
                df_left.try_mul(&f12.kron(&i3))?,
                df_right.try_mul(&i1.kron(&f23))?,
            )
        }
    };
    Ok(Residual::eq(
        "((D x 1)F)(F x 1) = ((1 x D)F)(1 x F)",
        &lhs,
        &rhs,
    ))
}

/// `G = exp(1/2 T H (1 - Tinv^2))` on the Jordanian side and
/// `G~ = exp(h J0 J+)` on the classical side.
#[derive(Clone, Debug)]
pub struct AntipodeOps {
    pub two_j: u32,
    pub g: PolyMatrix,
    pub g_tilde: PolyMatrix,
}

/// Which side the inverse conjugator sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// `G~ (-J) G~^-1` and `G^-1 S(x) G`.
    Stated,
    /// `G~^-1 (-J) G~` and `G S(x) G^-1`.
    Inverse,
}

#[derive(Clone, Debug)]
pub struct AntipodeReport {
    pub exponent_identity: Residual,
    /// Classical-side relation per orientation.
    pub classical: Vec<(Orientation, Vec<Residual>)>,
    /// Jordanian-side relation per orientation.
    pub jordanian: Vec<(Orientation, Vec<Residual>)>,
}

impl AntipodeReport {
    /// Orientations for which every residual of the given side vanishes.
    pub fn holding(side: &[(Orientation, Vec<Residual>)]) -> Vec<Orientation> {
        side.iter()
            .filter(|(_, r)| crate::residual::all_vanish(r))
            .map(|(o, _)| *o)
            .collect()
    }
}

/// Build both conjugators on the minimal-map irrep of spin `two_j / 2` and
/// test the antipode similarity relations in both orientations.
pub fn antipode_conjugators(two_j: i64) -> Result<(AntipodeOps, AntipodeReport)> {
    let map = MapSpec::minimal();
    let rep = jordanian_irrep(&map, two_j)?;
    let cl = classical_irrep(two_j)?;
    let n = rep.dim();
    let id = PolyMatrix::identity(n);

    let th = rep.t.try_mul(&rep.h)?;
    let g_log = th
        .try_mul(&id.try_sub(&rep.tinv.try_mul(&rep.tinv)?)?)?
        .scale_rat(&Rational::new(1, 2));
    let gt_log = cl.j0.try_mul(&cl.jp)?.scale(&HPoly::h());
    let exponent_identity = Residual::eq("h J0 J+ = 1/2 T H (1 - Tinv^2)", &gt_log, &g_log);
    let (g, g_inv) = (g_log.exp_nilpotent()?, (-&g_log).exp_nilpotent()?);
    let (gt, gt_inv) = (gt_log.exp_nilpotent()?, (-&gt_log).exp_nilpotent()?);

    let classical_of = minimal_classical_exprs();
    let jordanian_of = inverse_jordanian_exprs(&map, n + 1)?;
    let to_jordanian: BTreeMap<Generator, Expr> = classical_of.iter().cloned().collect();

    // m S_h m^-1 (J) evaluated on the classical irrep.
    let mut transported = Vec::new();
    for (g_name, e) in &classical_of {
        let lhs = antipode_transform(e)?
            .substitute(&jordanian_of)
            .eval_matrix(&cl)?;
        let minus_j = -image(&cl, *g_name)?;
        transported.push((*g_name, lhs, minus_j));
    }
    let classical = [Orientation::Stated, Orientation::Inverse]
        .into_iter()
        .map(|o| {
            let (l, r) = match o {
                Orientation::Stated => (&gt, &gt_inv),
                Orientation::Inverse => (&gt_inv, &gt),
            };
            let res = transported
                .iter()
                .map(|(g_name, lhs, mj)| {
                    Ok(Residual::eq(
                        format!("m S m^-1({g_name}) = G~ (-{g_name}) G~^-1 [{o:?}]"),
                        lhs,
                        &l.try_mul(mj)?.try_mul(r)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((o, res))
        })
        .collect::<Result<Vec<_>>>()?;

    // m^-1 S_c m (x) evaluated on the Jordanian irrep.
    let mut pulled = Vec::new();
    for g_name in [Generator::T, Generator::Tinv, Generator::H, Generator::Y] {
        let rhs = antipode_transform(&jordanian_of[&g_name])?
            .substitute(&to_jordanian)
            .eval_matrix(&rep)?;
        let s = antipode_transform(&Expr::gen(g_name))?.eval_matrix(&rep)?;
        pulled.push((g_name, s, rhs));
    }
    let jordanian = [Orientation::Stated, Orientation::Inverse]
        .into_iter()
        .map(|o| {
            let (l, r) = match o {
                Orientation::Stated => (&g_inv, &g),
                Orientation::Inverse => (&g, &g_inv),
            };
            let res = pulled
                .iter()
                .map(|(g_name, s, rhs)| {
                    Ok(Residual::eq(
                        format!("G^-1 S({g_name}) G = m^-1 S m({g_name}) [{o:?}]"),
                        &l.try_mul(s)?.try_mul(r)?,
                        rhs,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((o, res))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok((
        AntipodeOps {
            two_j: rep.two_j,
            g,
            g_tilde: gt,
        },
        AntipodeReport {
            exponent_identity,
            classical,
            jordanian,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::builtin_map;
    use crate::residual::{all_vanish, failing};

    #[test]
    fn coproduct_examples() {
        let set = coproducts(&MapSpec::minimal(), 1, 1).unwrap();
        let t = set.get(Generator::T);
        assert_eq!(t.rows(), 4);
        assert!(t.eval_h0().is_identity());
        let cl = classical_irrep(1).unwrap();
        let i2 = PolyMatrix::identity(2);
        let prim = &cl.j0.kron(&i2) + &i2.kron(&cl.j0);
        assert_eq!(set.get(Generator::H).eval_h0(), prim);
        let res = coproduct_homomorphism_check(&set).unwrap();
        assert!(all_vanish(&res), "{:?}", failing(&res));
        let res = coproduct_homomorphism_check(
            &coproducts(&builtin_map("contraction").unwrap(), 2, 1).unwrap(),
        )
        .unwrap();
        assert!(all_vanish(&res), "{:?}", failing(&res));
    }

    #[test]
    fn perturbed_coproduct_fails() {
        let mut set = coproducts(&MapSpec::minimal(), 1, 1).unwrap();
        let h = set
            .get(Generator::H)
            .try_add(&set.get(Generator::X).scale(&HPoly::h()))
            .unwrap();
        set.images.images.insert(Generator::H, h);
        assert!(!all_vanish(&coproduct_homomorphism_check(&set).unwrap()));
    }

    #[test]
    fn hopf_axioms() {
        let rep = jordanian_irrep(&MapSpec::minimal(), 2).unwrap();
        let res = hopf_axiom_checks(&rep).unwrap();
        assert!(all_vanish(&res), "{:?}", failing(&res));
    }

    #[test]
    fn spin_half_v_and_r() {
        let tw = twist_minimal(1, 1).unwrap();
        let cl = classical_irrep(1).unwrap();
        let expected_v = PolyMatrix::identity(4)
            .try_sub(&cl.j0.kron(&cl.z()))
            .unwrap();
        assert_eq!(tw.v, expected_v);
        let r = rmatrix(1, 1).unwrap();
        let p = |c: &[i64]| HPoly::from_ints(c);
        let expected = PolyMatrix::from_rows(vec![
            vec![p(&[1]), p(&[0, 1]), p(&[0, -1]), p(&[0, 0, 1])],
            vec![p(&[]), p(&[1]), p(&[]), p(&[0, 1])],
            vec![p(&[]), p(&[]), p(&[1]), p(&[0, -1])],
            vec![p(&[]), p(&[]), p(&[]), p(&[1])],
        ]);
        assert_eq!(r, expected);
        assert!(r.eval_h0().is_identity());
    }

    #[test]
    fn triangular_intertwining_ybe() {
        let min = MapSpec::minimal();
        for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 3)] {
            assert!(triangularity(&min, a, b).unwrap().vanishes());
            let res = intertwining(&min, a, b).unwrap();
            assert!(all_vanish(&res), "{:?}", failing(&res));
        }
        assert!(yang_baxter(&min, 1, 1, 1).unwrap().vanishes());
        assert!(yang_baxter(&min, 1, 2, 1).unwrap().vanishes());
        let diag = builtin_map("diag").unwrap();
        assert!(triangularity(&diag, 2, 1).unwrap().vanishes());
        assert!(yang_baxter(&diag, 1, 2, 1).unwrap().vanishes());
    }

    #[test]
    fn minimal_twist_relation() {
        for (a, b) in [(1, 1), (2, 1), (2, 2)] {
            let tw = twist_minimal(a, b).unwrap();
            let set = coproducts(&MapSpec::minimal(), a, b).unwrap();
            let res =
                twist_relation_check(&tw.f, &tw.finv, &set, &minimal_classical_exprs()).unwrap();
            assert!(all_vanish(&res), "{:?}", failing(&res));
            let generic = forward_classical_exprs(&MapSpec::minimal(), set.dim() + 1).unwrap();
            let res = twist_relation_check(&tw.f, &tw.finv, &set, &generic).unwrap();
            assert!(all_vanish(&res), "{:?}", failing(&res));
        }
    }

    #[test]
    fn cocycle() {
        assert!(cocycle_minimal(1, 1, 1).unwrap().vanishes());
        assert!(cocycle_minimal(1, 2, 1).unwrap().vanishes());
    }

    #[test]
    fn general_twist_forms() {
        for name in ["contraction", "diag"] {
            let map = builtin_map(name).unwrap();
            let set = coproducts(&map, 1, 2).unwrap();
            let exprs = forward_classical_exprs(&map, set.dim() + 1).unwrap();
            for form in [GaugeFactor::Product, GaugeFactor::Coproduct] {
                let tw = twist_general(&map, 1, 2, form).unwrap();
                let sw = twist_general(&map, 2, 1, form).unwrap();
                assert!(
                    fs_symmetry(&tw.fs, &sw.fs, 2, 3).unwrap().vanishes(),
                    "{name} {form:?}"
                );
                let res = twist_relation_check(&tw.f, &tw.finv, &set, &exprs).unwrap();
                match form {
                    GaugeFactor::Product => {
                        assert!(all_vanish(&res), "{name}: {:?}", failing(&res))
                    }
                    GaugeFactor::Coproduct => assert_eq!(failing(&res).len(), 3, "{name}"),
                }
            }
        }
    }

    #[test]
    fn minimal_general_twist_is_v() {
        let tw = twist_general(&MapSpec::minimal(), 1, 1, GaugeFactor::Product).unwrap();
        assert_eq!(tw.f, tw.v);
        assert!(tw.fs.is_identity());
    }

    #[test]
    fn zeroed_mu_breaks_twist_relation() {
        let map = builtin_map("contraction").unwrap();
        let (lam, mu) = gauge_series(&map, 2, 2).unwrap();
        let zero = MuSeries {
            coeffs: vec![Rational::zero(); mu.coeffs.len()],
        };
        let tw = twist_general_with(&map, 1, 1, &lam, &zero, GaugeFactor::Product).unwrap();
        let set = coproducts(&map, 1, 1).unwrap();
        let exprs = forward_classical_exprs(&map, 5).unwrap();
        assert!(!all_vanish(
            &twist_relation_check(&tw.f, &tw.finv, &set, &exprs).unwrap()
        ));
    }

    #[test]
    fn general_cocycle() {
        let map = builtin_map("contraction").unwrap();
        let (lam, mu) = gauge_series(&map, 3, 5).unwrap();
        assert!(cocycle_general(&map, 1, 2, 1, Some((&lam, &mu)))
            .unwrap()
            .vanishes());
    }

    #[test]
    fn antipode() {
        let (ops, report) = antipode_conjugators(2).unwrap();
        assert!(report.exponent_identity.vanishes());
        assert!(ops.g.eval_h0().is_identity() && ops.g_tilde.eval_h0().is_identity());
        assert_eq!(
            AntipodeReport::holding(&report.classical),
            vec![Orientation::Stated]
        );
        assert_eq!(
            AntipodeReport::holding(&report.jordanian),
            vec![Orientation::Stated]
        );
    }
}
