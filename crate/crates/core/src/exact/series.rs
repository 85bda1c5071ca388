//! Truncated power series in one nilpotent variable.
//!
//! A `WSeries` of order `N` holds the coefficients of `w^0 .. w^{N-1}`; every
//! higher power is discarded, i.e. the variable is treated as nilpotent of
//! order `N`. Binary operations return the smaller operand order, and
//! operations that lose precision (division by `w^v`, differentiation) lower
//! the order accordingly, so a result never claims more digits than it has.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WSeries {
    coeffs: Vec<Rational>,
}

/// The elementary functions the series kernel knows how to expand.
///
/// `Log1p` and `Sqrt1p` are expansions about 1 taking the offset as argument:
/// `log1p(w) = log(1 + w)`, `sqrt1p(w) = sqrt(1 + w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Elementary {
    Exp,
    Log1p,
    Sinh,
    Cosh,
    Tanh,
    Arctanh,
    Sqrt1p,
}

impl Elementary {
    pub const ALL: [Elementary; 7] = [
        Elementary::Exp,
        Elementary::Log1p,
        Elementary::Sinh,
        Elementary::Cosh,
        Elementary::Tanh,
        Elementary::Arctanh,
        Elementary::Sqrt1p,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Elementary::Exp => "exp",
            Elementary::Log1p => "log1p",
            Elementary::Sinh => "sinh",
            Elementary::Cosh => "cosh",
            Elementary::Tanh => "tanh",
            Elementary::Arctanh => "arctanh",
            Elementary::Sqrt1p => "sqrt1p",
        }
    }

    /// Taylor expansion about 0 to the given order.
    pub fn expand(self, order: usize) -> WSeries {
        let coeffs: Vec<Rational> = match self {
            Elementary::Exp => (0..order).map(|k| factorial(k).recip().unwrap()).collect(),
            Elementary::Sinh => (0..order)
                .map(|k| {
                    if k % 2 == 1 {
                        factorial(k).recip().unwrap()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
            Elementary::Cosh => (0..order)
                .map(|k| {
                    if k % 2 == 0 {
                        factorial(k).recip().unwrap()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
            Elementary::Log1p => (0..order)
                .map(|k| match k {
                    0 => Rational::zero(),
                    _ if k % 2 == 1 => Rational::new(1, k as i64),
                    _ => Rational::new(-1, k as i64),
                })
                .collect(),
            Elementary::Arctanh => (0..order)
                .map(|k| {
                    if k % 2 == 1 {
                        Rational::new(1, k as i64)
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
            Elementary::Sqrt1p => (0..order)
                .map(|k| binomial(&Rational::new(1, 2), k))
                .collect(),
            Elementary::Tanh => {
                // sinh / cosh; cosh is a unit so nothing is lost.
                let s = Elementary::Sinh.expand(order);
                let c = Elementary::Cosh.expand(order);
                return s.div(&c).expect("cosh is a unit");
            }
        };
        WSeries { coeffs }
    }

    /// `f(arg)`. The argument must have zero constant term: a nonzero one
    /// would leave the rationals (exp(1), log 2, ...).
    pub fn apply(self, arg: &WSeries) -> Result<WSeries> {
        let outer = self.expand(arg.order());
        outer.compose(arg)
    }
}

impl FromStr for Elementary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Elementary::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

impl fmt::Display for Elementary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Expansion of a named elementary function to `order` terms.
pub fn series_elementary(name: &str, order: usize) -> Result<WSeries> {
    Ok(name.parse::<Elementary>()?.expand(order))
}

impl WSeries {
    /// Coefficients past `order` are dropped; missing ones are zero.
    pub fn new(order: usize, mut coeffs: Vec<Rational>) -> Self {
        coeffs.resize(order, Rational::zero());
        WSeries { coeffs }
    }

    pub fn from_ints(order: usize, coeffs: &[i64]) -> Self {
        Self::new(order, coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, Vec::new())
    }

    pub fn constant(order: usize, c: Rational) -> Self {
        Self::new(order, vec![c])
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, Rational::one())
    }

    /// The variable `w` itself.
    pub fn var(order: usize) -> Self {
        Self::new(order, vec![Rational::zero(), Rational::one()])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Index of the first nonzero coefficient, `None` if zero to this order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(
            order <= self.order(),
            "cannot extend a series by truncation"
        );
        WSeries {
            coeffs: self.coeffs[..order].to_vec(),
        }
    }

    /// Truncate to `order`, failing if fewer coefficients are known.
    pub fn truncate_checked(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::InsufficientOrder {
                order: self.order(),
                required: order,
            });
        }
        Ok(self.truncate(order))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        WSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiply by `w^k`. The result is known to `k` more terms.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        WSeries { coeffs }
    }

    /// Divide by `w^k`; the low `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        match self.valuation() {
            Some(v) if v < k => Err(Error::Pole {
                numerator: v,
                denominator: k,
            }),
            _ => Ok(WSeries {
                coeffs: self.coeffs.iter().skip(k).cloned().collect(),
            }),
        }
    }

    /// d/dw. Loses the top coefficient.
    pub fn derivative(&self) -> Self {
        WSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Rational::from(k))
                .collect(),
        }
    }

    /// Image of d/dT under `T = e^w`: `e^{-w} df/dw`.
    pub fn deriv_t(&self) -> Self {
        let d = self.derivative();
        let e = Elementary::Exp.expand(d.order());
        &d * &e.scale_var(&Rational::from(-1))
    }

    /// `f(c*w)`.
    pub fn scale_var(&self, c: &Rational) -> Self {
        let mut p = Rational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|x| {
                let out = x * &p;
                p = &p * c;
                out
            })
            .collect();
        WSeries { coeffs }
    }

    /// Multiplicative inverse of a unit (nonzero constant term).
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order();
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(if self.is_zero() {
                Error::ZeroSeries
            } else {
                Error::Pole {
                    numerator: 0,
                    denominator: self.valuation().unwrap_or(0),
                }
            });
        }
        let inv0 = c0.recip()?;
        let mut out = vec![Rational::zero(); n];
        if n > 0 {
            out[0] = inv0.clone();
        }
        for k in 1..n {
            let mut s = Rational::zero();
            for i in 1..=k {
                let a = &self.coeffs[i];
                if !a.is_zero() {
                    s += &(a * &out[k - i]);
                }
            }
            out[k] = -(&s * &inv0);
        }
        Ok(WSeries { coeffs: out })
    }

    /// Exact quotient. The common power of `w` is shifted out first, so the
    /// result has order `min(N_a, N_b) - valuation(b)`.
    pub fn div(&self, rhs: &WSeries) -> Result<Self> {
        let vb = rhs.valuation().ok_or(Error::ZeroSeries)?;
        if let Some(va) = self.valuation() {
            if va < vb {
                return Err(Error::Pole {
                    numerator: va,
                    denominator: vb,
                });
            }
        }
        let n = self.order().min(rhs.order());
        let a = self.truncate(n).shift_down(vb)?;
        let b = rhs.truncate(n).shift_down(vb)?;
        Ok(&a * &b.inverse()?)
    }

    /// `outer(inner)`; `inner` must have no constant term.
    pub fn compose(&self, inner: &WSeries) -> Result<Self> {
        let c0 = inner.coeff(0);
        if !c0.is_zero() {
            return Err(Error::NonzeroConstantTerm(c0.to_string()));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        // Horner: outer_0 + inner*(outer_1 + inner*(...)).
        let mut acc = WSeries::zero(n);
        for c in self.coeffs[..n].iter().rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Compositional inverse `g` with `f(g(w)) = w`; requires `f(0) = 0` and
    /// `f'(0) = 1`.
    pub fn revert(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::Normalization(format!(
                "f(0) must be 0, found {}",
                self.coeff(0)
            )));
        }
        if !self.coeff(1).is_one() {
            return Err(Error::Normalization(format!(
                "f'(0) must be 1, found {}",
                self.coeff(1)
            )));
        }
        let n = self.order();
        // f = w + r with val(r) >= 2; iterate g <- w - r(g). Each pass fixes
        // one more coefficient.
        let mut r = self.clone();
        r.coeffs[1] = Rational::zero();
        let w = WSeries::var(n);
        let mut g = w.clone();
        for _ in 0..n {
            let next = &w - &r.compose(&g)?;
            if next == g {
                break;
            }
            g = next;
        }
        Ok(g)
    }

    /// `self^k` for a non-negative integer `k`.
    pub fn powi(&self, k: usize) -> Self {
        let mut acc = WSeries::one(self.order());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^r` for rational `r`, defined for series with constant term 1.
    pub fn pow_rational(&self, r: &Rational) -> Result<Self> {
        if let Some(k) = r.to_i64() {
            return if k >= 0 {
                Ok(self.powi(k as usize))
            } else {
                Ok(self.inverse()?.powi((-k) as usize))
            };
        }
        if !self.coeff(0).is_one() {
            return Err(Error::Normalization(format!(
                "fractional power needs constant term 1, found {}",
                self.coeff(0)
            )));
        }
        let offset = self - &WSeries::one(self.order());
        let log = Elementary::Log1p.apply(&offset)?;
        Elementary::Exp.apply(&log.scale(r))
    }
}

impl Add<&WSeries> for &WSeries {
    type Output = WSeries;
    fn add(self, rhs: &WSeries) -> WSeries {
        let n = self.order().min(rhs.order());
        WSeries {
            coeffs: (0..n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub<&WSeries> for &WSeries {
    type Output = WSeries;
    fn sub(self, rhs: &WSeries) -> WSeries {
        let n = self.order().min(rhs.order());
        WSeries {
            coeffs: (0..n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

impl Mul<&WSeries> for &WSeries {
    type Output = WSeries;
    fn mul(self, rhs: &WSeries) -> WSeries {
        let n = self.order().min(rhs.order());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        WSeries { coeffs: out }
    }
}

impl Neg for &WSeries {
    type Output = WSeries;
    fn neg(self) -> WSeries {
        WSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for WSeries {
    type Output = WSeries;
    fn neg(self) -> WSeries {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<WSeries> for WSeries {
            type Output = WSeries;
            fn $m(self, rhs: WSeries) -> WSeries { (&self).$m(&rhs) }
        }
        impl $tr<&WSeries> for WSeries {
            type Output = WSeries;
            fn $m(self, rhs: &WSeries) -> WSeries { (&self).$m(rhs) }
        }
        impl $tr<WSeries> for &WSeries {
            type Output = WSeries;
            fn $m(self, rhs: WSeries) -> WSeries { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for WSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "w")?;
                    } else {
                        write!(f, "w^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(w^{})", self.order())
    }
}

impl fmt::Debug for WSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WSeries[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn derivative_and_truncation() {
        let half_w2 = WSeries::new(4, vec![r(0, 1), r(0, 1), r(1, 2)]);
        assert_eq!(half_w2.derivative(), WSeries::var(3));
        let w = WSeries::var(2);
        assert!((&w * &w).is_zero());
        let a = WSeries::from_ints(3, &[1, 1]);
        let b = WSeries::from_ints(3, &[1, -1]);
        assert_eq!(&a + &b, WSeries::from_ints(3, &[2]));
    }

    #[test]
    fn mixed_orders_take_the_minimum() {
        let a = WSeries::from_ints(5, &[1, 2, 3]);
        let b = WSeries::from_ints(3, &[1, 1, 1]);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!((&a + &b).order(), 3);
    }

    #[test]
    fn division_shifts_out_common_power() {
        let w = WSeries::var(8);
        assert_eq!(w.div(&w).unwrap(), WSeries::one(7));
        let sinh = Elementary::Sinh.expand(9);
        let q = sinh.div(&WSeries::var(9)).unwrap();
        assert_eq!(q.order(), 8);
        assert_eq!(q.coeff(0), r(1, 1));
        assert_eq!(q.coeff(2), r(1, 6));
        assert_eq!(q.coeff(4), r(1, 120));
        assert_eq!(q.coeff(6), r(1, 5040));
        assert!(q.coeff(1).is_zero() && q.coeff(3).is_zero());
        assert!(matches!(
            WSeries::one(4).div(&WSeries::var(4)),
            Err(Error::Pole { .. })
        ));
        assert!(matches!(
            WSeries::one(4).div(&WSeries::zero(4)),
            Err(Error::ZeroSeries)
        ));
    }

    #[test]
    fn composition() {
        let w2 = WSeries::from_ints(4, &[0, 0, 1]);
        let inner = WSeries::from_ints(4, &[0, 1, 1]);
        assert_eq!(
            w2.compose(&inner).unwrap(),
            WSeries::from_ints(4, &[0, 0, 1, 2])
        );
        let w2_5 = WSeries::from_ints(5, &[0, 0, 1]);
        let inner5 = WSeries::from_ints(5, &[0, 1, 1]);
        assert_eq!(
            w2_5.compose(&inner5).unwrap(),
            WSeries::from_ints(5, &[0, 0, 1, 2, 1])
        );
        assert_eq!(WSeries::var(6).compose(&inner5).unwrap(), inner5);
        assert!(matches!(
            w2.compose(&WSeries::one(4)),
            Err(Error::NonzeroConstantTerm(_))
        ));
    }

    #[test]
    fn exp_of_log_recovers_w() {
        let n = 10;
        let w = WSeries::var(n);
        let log = Elementary::Log1p
            .apply(&(Elementary::Exp.expand(n) - WSeries::one(n)))
            .unwrap();
        assert_eq!(log, w);
        let back = Elementary::Exp.apply(&Elementary::Log1p.expand(n)).unwrap();
        assert_eq!(back - WSeries::one(n), w);
    }

    #[test]
    fn elementary_expansions() {
        assert_eq!(
            series_elementary("arctanh", 6).unwrap(),
            WSeries::new(
                6,
                vec![r(0, 1), r(1, 1), r(0, 1), r(1, 3), r(0, 1), r(1, 5)]
            )
        );
        assert_eq!(
            series_elementary("exp", 4).unwrap(),
            WSeries::new(4, vec![r(1, 1), r(1, 1), r(1, 2), r(1, 6)])
        );
        assert_eq!(
            series_elementary("sqrt1p", 4).unwrap(),
            WSeries::new(4, vec![r(1, 1), r(1, 2), r(-1, 8), r(1, 16)])
        );
        let tanh = series_elementary("tanh", 6).unwrap();
        assert_eq!(
            tanh.coeffs(),
            &[r(0, 1), r(1, 1), r(0, 1), r(-1, 3), r(0, 1), r(2, 15)]
        );
        assert!(matches!(
            series_elementary("erf", 4),
            Err(Error::UnknownFunction(_))
        ));
    }

    #[test]
    fn reversion() {
        let n = 8;
        assert_eq!(WSeries::var(n).revert().unwrap(), WSeries::var(n));
        let asinh = Elementary::Sinh.expand(n).revert().unwrap();
        assert_eq!(asinh.coeff(1), r(1, 1));
        assert_eq!(asinh.coeff(3), r(-1, 6));
        assert_eq!(asinh.coeff(5), r(3, 40));
        assert_eq!(asinh.coeff(7), r(-5, 112));
        let f = Elementary::Tanh
            .expand(n)
            .scale_var(&r(1, 2))
            .scale(&r(2, 1));
        assert_eq!(f.compose(&f.revert().unwrap()).unwrap(), WSeries::var(n));
        assert!(matches!(
            WSeries::from_ints(4, &[1, 1]).revert(),
            Err(Error::Normalization(_))
        ));
        assert!(matches!(
            WSeries::from_ints(4, &[0, 2]).revert(),
            Err(Error::Normalization(_))
        ));
    }

    #[test]
    fn derivative_in_t() {
        let n = 8;
        let e = Elementary::Exp.expand(n);
        // T - 1 -> 1
        assert_eq!((&e - &WSeries::one(n)).deriv_t(), WSeries::one(n - 1));
        // T^2 -> 2T
        let t2 = e.scale_var(&r(2, 1));
        assert_eq!(t2.deriv_t(), Elementary::Exp.expand(n - 1).scale(&r(2, 1)));
        assert!(WSeries::constant(n, r(7, 3)).deriv_t().is_zero());
    }

    #[test]
    fn fractional_powers() {
        let n = 6;
        let one_minus_2w = WSeries::from_ints(n, &[1, -2]);
        let p = one_minus_2w.pow_rational(&r(-1, 2)).unwrap();
        assert_eq!(p.coeffs()[..4], [r(1, 1), r(1, 1), r(3, 2), r(5, 2)]);
        assert!(WSeries::from_ints(n, &[2, 1])
            .pow_rational(&r(1, 2))
            .is_err());
    }
}
