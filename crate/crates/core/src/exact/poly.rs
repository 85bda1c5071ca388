//! Polynomials in the deformation parameter `h` over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Dense polynomial in `h`, coefficients indexed by power, trailing zeros
/// trimmed. The zero polynomial has no coefficients and no degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HPoly {
    coeffs: Vec<Rational>,
}

impl HPoly {
    pub fn zero() -> Self {
        HPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `h`.
    pub fn h() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, power: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); power];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        HPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `h^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest power with a nonzero coefficient; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval_at_h0(&self) -> Rational {
        self.coeff(0)
    }

    pub fn eval(&self, h: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * h + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        HPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiply by `h^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        HPoly { coeffs }
    }

    /// Exact division by `h^k`; fails if any of the `k` lowest coefficients
    /// is nonzero.
    pub fn div_h(&self, k: usize) -> Result<Self> {
        if let Some(offending) = self.coeffs.iter().take(k).position(|c| !c.is_zero()) {
            return Err(Error::NotDivisibleByH {
                power: k,
                offending,
            });
        }
        Ok(HPoly {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        })
    }

    /// Drop every power above `max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(max_degree + 1).cloned().collect())
    }

    /// `self += a * b`, the inner step of matrix multiplication.
    pub fn add_mul_assign(&mut self, a: &HPoly, b: &HPoly) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let len = a.coeffs.len() + b.coeffs.len() - 1;
        if self.coeffs.len() < len {
            self.coeffs.resize(len, Rational::zero());
        }
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    self.coeffs[i + j] += &(x * y);
                }
            }
        }
        while self.coeffs.last().is_some_and(Rational::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn add_assign_ref(&mut self, rhs: &HPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Rational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        while self.coeffs.last().is_some_and(Rational::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl From<Rational> for HPoly {
    fn from(c: Rational) -> Self {
        HPoly::constant(c)
    }
}

impl From<i64> for HPoly {
    fn from(c: i64) -> Self {
        HPoly::constant(Rational::from(c))
    }
}

impl Add<&HPoly> for &HPoly {
    type Output = HPoly;
    fn add(self, rhs: &HPoly) -> HPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub<&HPoly> for &HPoly {
    type Output = HPoly;
    fn sub(self, rhs: &HPoly) -> HPoly {
        let mut out = self.clone();
        out.add_assign_ref(&-rhs);
        out
    }
}

impl Mul<&HPoly> for &HPoly {
    type Output = HPoly;
    fn mul(self, rhs: &HPoly) -> HPoly {
        let mut out = HPoly::zero();
        out.add_mul_assign(self, rhs);
        out
    }
}

impl Neg for &HPoly {
    type Output = HPoly;
    fn neg(self) -> HPoly {
        HPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for HPoly {
    type Output = HPoly;
    fn neg(self) -> HPoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<HPoly> for HPoly {
            type Output = HPoly;
            fn $m(self, rhs: HPoly) -> HPoly { (&self).$m(&rhs) }
        }
        impl $tr<&HPoly> for HPoly {
            type Output = HPoly;
            fn $m(self, rhs: &HPoly) -> HPoly { (&self).$m(rhs) }
        }
        impl $tr<HPoly> for &HPoly {
            type Output = HPoly;
            fn $m(self, rhs: HPoly) -> HPoly { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() || k == 0 {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "{}h", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}h^{k}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products() {
        let one_plus_h = HPoly::from_ints(&[1, 1]);
        let one_minus_h = HPoly::from_ints(&[1, -1]);
        assert_eq!(&one_plus_h * &one_minus_h, HPoly::from_ints(&[1, 0, -1]));
        assert_eq!(
            &HPoly::h() * &HPoly::h(),
            HPoly::monomial(Rational::one(), 2)
        );
    }

    #[test]
    fn eval_at_zero() {
        let p = &HPoly::one() - &HPoly::h().scale(&Rational::new(3, 8));
        assert_eq!(p.eval_at_h0(), Rational::one());
        assert_eq!(HPoly::zero().eval_at_h0(), Rational::zero());
    }

    #[test]
    fn canonical_form() {
        let p = HPoly::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(HPoly::from_ints(&[0, 0]).degree(), None);
        assert_eq!(&p - &p, HPoly::zero());
    }

    #[test]
    fn checked_division_by_h() {
        let p = HPoly::from_ints(&[0, 0, 1, 2]);
        assert_eq!(p.div_h(2).unwrap(), HPoly::from_ints(&[1, 2]));
        assert_eq!(
            HPoly::from_ints(&[1, 1]).div_h(1),
            Err(Error::NotDivisibleByH {
                power: 1,
                offending: 0
            })
        );
        assert_eq!(HPoly::zero().div_h(3).unwrap(), HPoly::zero());
        assert!(HPoly::from_ints(&[0, 5, 1]).div_h(2).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(HPoly::from_ints(&[1, -1, 3]).to_string(), "1 - h + 3*h^2");
        assert_eq!(
            HPoly::monomial(Rational::new(-1, 8), 1).to_string(),
            "-(1/8)*h"
        );
    }
}
