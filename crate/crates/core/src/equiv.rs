//! Similarity series between two maps.
//!
//! Two maps give two classical triples in the same Jordanian algebra. Their
//! raising generators are related by `hJ+ = rho(hJ+^)` with
//! `rho = phi_target o psi_source`, and the triples themselves by the
//! conjugation `exp(-L) hJ+^ exp(L) = rho(hJ+^)`, `L = lambda(hJ+^) J0^`.
//! Inside the commutative algebra generated by `z = hJ+` the conjugation is
//! the time-one flow of the vector field `-2 lambda(z) z d/dz`, which is how
//! [`lambda_solve`] finds `lambda`; [`lambda_oracle`] recovers the same
//! coefficients from explicit matrices instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{HPoly, Rational, WSeries};
use crate::maps::MapSpec;
use crate::matrix::PolyMatrix;
use crate::reps::{classical_irrep, ClassicalIrrep};

/// `lambda(z) = sum_{k=1}^{N} c_k z^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilaritySeries {
    pub source: String,
    pub target: String,
    pub coeffs: Vec<Rational>,
}

impl SimilaritySeries {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `lambda` as a series of order `N + 1` with zero constant term.
    pub fn as_series(&self) -> WSeries {
        let mut c = vec![Rational::zero()];
        c.extend(self.coeffs.iter().cloned());
        WSeries::new(self.coeffs.len() + 1, c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }
}

/// `mu` as a series in `s = T - 1`, with `mu(T) = -T lambda((1 - T^-2)/2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuSeries {
    pub coeffs: Vec<Rational>,
}

impl MuSeries {
    pub fn as_series(&self) -> WSeries {
        WSeries::new(self.coeffs.len(), self.coeffs.clone())
    }
}

/// `rho = phi_target o psi_source` to `order` coefficients.
pub fn target_series(source: &MapSpec, target: &MapSpec, order: usize) -> Result<WSeries> {
    let psi = source.phi(order)?.revert()?;
    target.phi(order)?.compose(&psi)
}

fn check_rho(rho: &WSeries) -> Result<()> {
    if !rho.coeff(0).is_zero() || !rho.coeff(1).is_one() {
        return Err(Error::Normalization(
            "similarity target must be z + O(z^2)".into(),
        ));
    }
    Ok(())
}

/// Time-one flow of `-2 lambda(z) z d/dz` applied to `z`, to `order`
/// coefficients: `sum_m D^m z / m!`.
pub fn flow(lambda: &WSeries, order: usize) -> Result<WSeries> {
    let lam = lambda.truncate_checked(lambda.order().min(order))?;
    let lam = if lam.order() < order {
        // lambda is exact to its own order; higher coefficients are zero.
        WSeries::new(order, lam.coeffs().to_vec())
    } else {
        lam
    };
    let field = lam.shift_up(1).truncate(order).scale(&Rational::from(-2));
    let mut term = WSeries::var(order);
    let mut sum = term.clone();
    for m in 1..=order {
        // derivative() drops one order; pad back, the top coefficient of
        // field * f' is unaffected because field has valuation >= 2.
        let d = term.derivative();
        let d = WSeries::new(order, d.coeffs().to_vec());
        term = (&field * &d).scale(&Rational::new(1, m as i64));
        if term.is_zero() {
            break;
        }
        sum = &sum + &term;
    }
    Ok(sum)
}

/// Solve `flow(lambda) = rho` for `c_1 .. c_N`.
pub fn lambda_solve(
    rho: &WSeries,
    n: usize,
    source: &str,
    target: &str,
) -> Result<SimilaritySeries> {
    check_rho(rho)?;
    let m = n + 2;
    if rho.order() < m {
        return Err(Error::InsufficientOrder {
            order: rho.order(),
            required: m,
        });
    }
    let mut coeffs = vec![Rational::zero(); n];
    for k in 1..=n {
        let lam = series_from(&coeffs);
        let f = flow(&lam, m)?;
        coeffs[k - 1] = (f.coeff(k + 1) - rho.coeff(k + 1)) / Rational::from(2);
    }
    let out = SimilaritySeries {
        source: source.to_string(),
        target: target.to_string(),
        coeffs,
    };
    let check = flow(&out.as_series(), m)?;
    if check != rho.truncate(m) {
        return Err(Error::Inconsistent(format!(
            "flow residual nonzero after solving: {}",
            &check - &rho.truncate(m)
        )));
    }
    Ok(out)
}

fn series_from(coeffs: &[Rational]) -> WSeries {
    let mut c = vec![Rational::zero()];
    c.extend(coeffs.iter().cloned());
    WSeries::new(coeffs.len() + 1, c)
}

/// `exp(-L) A exp(L)` by the nested-commutator series
/// `A - [L,A] + 1/2 [L,[L,A]] - ...`, for nilpotent `ad L`, truncated in
/// `h` above `max_degree`.
fn conjugate_bch(l: &PolyMatrix, a: &PolyMatrix, max_degree: usize) -> Result<PolyMatrix> {
    let mut sum = a.truncate_degree(max_degree);
    let mut term = sum.clone();
    for m in 1..=2 * a.rows() + max_degree + 1 {
        term = l
            .commutator(&term)?
            .truncate_degree(max_degree)
            .scale_rat(&Rational::new(-1, m as i64));
        if term.is_zero() {
            return Ok(sum);
        }
        sum = sum.try_add(&term)?;
    }
    Err(Error::NotNilpotent { dim: a.rows() })
}

/// `L = lambda(hJ+) J0` on the given irrep.
pub fn similarity_exponent(lambda: &WSeries, cl: &ClassicalIrrep) -> Result<PolyMatrix> {
    let z = cl.z();
    let need = cl.dim();
    let lam = if lambda.order() < need {
        WSeries::new(need, lambda.coeffs().to_vec())
    } else {
        lambda.clone()
    };
    z.apply_series(&lam)?.try_mul(&cl.j0)
}

/// Recover `c_1 .. c_N` by matching `exp(-L) hJ+ exp(L)` against
/// `rho(hJ+)` one power of `h` at a time, on the classical irrep of
/// dimension `N + 2 + extra`.
pub fn lambda_oracle(
    rho: &WSeries,
    n: usize,
    extra: usize,
    source: &str,
    target: &str,
) -> Result<SimilaritySeries> {
    check_rho(rho)?;
    let cl = classical_irrep((n + 1 + extra) as i64)?;
    let z = cl.z();
    let mut coeffs = vec![Rational::zero(); n];
    let mut jp_pow = cl.jp.clone();
    for k in 1..=n {
        jp_pow = jp_pow.try_mul(&cl.jp)?;
        let weight = jp_pow.get(0, k + 1).coeff(0);
        let l = similarity_exponent(&series_from(&coeffs), &cl)?;
        let conj = conjugate_bch(&l, &z, n + 1)?;
        let computed = conj.get(0, k + 1).coeff(k + 1);
        let wanted = rho.coeff(k + 1) * &weight;
        coeffs[k - 1] = (computed - wanted) / (weight * Rational::from(2));
    }
    let out = SimilaritySeries {
        source: source.to_string(),
        target: target.to_string(),
        coeffs,
    };
    let residual = conjugation_residual(&out, rho, &cl)?;
    if !residual.is_zero() {
        return Err(Error::Inconsistent(
            "conjugation residual nonzero after matching".into(),
        ));
    }
    Ok(out)
}

/// `exp(-L) hJ+ exp(L) - rho(hJ+)` through `h^{N+1}` on `cl`.
pub fn conjugation_residual(
    lam: &SimilaritySeries,
    rho: &WSeries,
    cl: &ClassicalIrrep,
) -> Result<PolyMatrix> {
    let n = lam.order();
    let z = cl.z();
    let l = similarity_exponent(&lam.as_series(), cl)?;
    let conj = conjugate_bch(&l, &z, n + 1)?;
    let rho_at = z
        .apply_series(&WSeries::new(
            rho.order().max(cl.dim()),
            rho.coeffs().to_vec(),
        ))?
        .truncate_degree(n + 1);
    conj.try_sub(&rho_at)
}

/// Run both solvers and insist they agree.
pub fn lambda_cross_checked(
    source: &MapSpec,
    target: &MapSpec,
    n: usize,
) -> Result<SimilaritySeries> {
    let rho = target_series(source, target, n + 2)?;
    let a = lambda_solve(&rho, n, source.name(), target.name())?;
    let b = lambda_oracle(&rho, n, 0, source.name(), target.name())?;
    if a != b {
        return Err(Error::Inconsistent(format!(
            "flow solver {:?} and matrix oracle {:?} disagree",
            a.coeffs, b.coeffs
        )));
    }
    Ok(a)
}

/// `lambda` for `source -> target` via the flow solver.
pub fn similarity(source: &MapSpec, target: &MapSpec, n: usize) -> Result<SimilaritySeries> {
    let rho = target_series(source, target, n + 2)?;
    lambda_solve(&rho, n, source.name(), target.name())
}

/// `mu(T) = -T lambda((1 - T^-2)/2)` expanded in `s = T - 1`.
pub fn mu_from_lambda(lam: &SimilaritySeries) -> Result<MuSeries> {
    let n = lam.order() + 1;
    let s = WSeries::var(n);
    let t = &WSeries::one(n) + &s;
    let tinv2 = (&t * &t).inverse()?;
    let arg = (&WSeries::one(n) - &tinv2).scale(&Rational::new(1, 2));
    let mu = -(&t * &lam.as_series().compose(&arg)?);
    Ok(MuSeries {
        coeffs: mu.coeffs().to_vec(),
    })
}

/// `U = exp(lambda(hJ+) J0)` on `cl`. The exponent is strictly upper
/// triangular, hence nilpotent, and the exponential is a finite sum.
pub fn build_u(lam: &SimilaritySeries, cl: &ClassicalIrrep) -> Result<PolyMatrix> {
    if lam.order() + 1 < cl.dim() && !lam.is_zero() {
        return Err(Error::InsufficientOrder {
            order: lam.order() + 1,
            required: cl.dim(),
        });
    }
    similarity_exponent(&lam.as_series(), cl)?.exp_nilpotent()
}

/// `exp(-mu(T) H)`, with `mu` applied to `T - 1`.
pub fn build_u_from_mu(mu: &MuSeries, t: &PolyMatrix, h: &PolyMatrix) -> Result<PolyMatrix> {
    let n = t.rows();
    let s = t.try_sub(&PolyMatrix::identity(n))?;
    s.apply_series(&mu.as_series())?
        .try_mul(h)?
        .scale(&HPoly::from(-1))
        .exp_nilpotent()
}
