//! Dense matrices over `Q[h]` with Kronecker structure and exact functions of
//! nilpotent and unipotent arguments.
//!
//! Tensor products use the standard Kronecker convention: the leftmost factor
//! varies slowest. No general inverse is provided; every inverse needed here
//! is the exponential of a nilpotent matrix or `exp(-log M)` of a unipotent one.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{HPoly, Rational, WSeries};

/// Dimensions of the tensor legs of a square matrix, leftmost first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorShape(pub Vec<usize>);

impl TensorShape {
    pub fn single(dim: usize) -> Self {
        TensorShape(vec![dim])
    }

    pub fn dim(&self) -> usize {
        self.0.iter().product()
    }

    pub fn concat(&self, other: &TensorShape) -> Self {
        TensorShape(self.0.iter().chain(&other.0).copied().collect())
    }
}

#[derive(Clone)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<HPoly>,
    shape: TensorShape,
}

impl PartialEq for PolyMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl Eq for PolyMatrix {}

// Products with fewer rows than this stay on the calling thread.
const PAR_ROWS: usize = 24;

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![HPoly::zero(); rows * cols],
            shape: TensorShape::single(rows),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = HPoly::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> HPoly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix {
            rows,
            cols,
            entries,
            shape: TensorShape::single(rows),
        }
    }

    /// Build from nested rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<HPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PolyMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
            shape: TensorShape::single(r),
        }
    }

    /// Rows of integer polynomials, `[[1, 0, -1], ...]` meaning `1 - h^2`.
    pub fn from_int_rows(rows: &[&[&[i64]]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|p| HPoly::from_ints(p)).collect())
                .collect(),
        )
    }

    pub fn diagonal(diag: Vec<HPoly>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn shape(&self) -> &TensorShape {
        &self.shape
    }

    pub fn with_shape(mut self, shape: TensorShape) -> Self {
        debug_assert_eq!(shape.dim(), self.rows);
        self.shape = shape;
        self
    }

    pub fn get(&self, i: usize, j: usize) -> &HPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: HPoly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[HPoly] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[HPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(HPoly::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_zero()).count()
    }

    /// Highest `h`-degree among the entries; `None` for the zero matrix.
    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(HPoly::degree).max()
    }

    fn shape_str(&self) -> String {
        format!("{}x{}", self.rows, self.cols)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                left: self.shape_str(),
                right: other.shape_str(),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&HPoly, &HPoly) -> HPoly) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
            shape: self.shape.clone(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                left: self.shape_str(),
                right: other.shape_str(),
            });
        }
        // Sparse-aware: skip zero entries on both sides.
        let rhs_nz: Vec<Vec<usize>> = (0..other.rows)
            .map(|k| {
                (0..other.cols)
                    .filter(|&j| !other.get(k, j).is_zero())
                    .collect()
            })
            .collect();
        let row_product = |i: usize| -> Vec<HPoly> {
            let mut out = vec![HPoly::zero(); other.cols];
            for (k, cols) in rhs_nz.iter().enumerate() {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for &j in cols {
                    out[j].add_mul_assign(a, other.get(k, j));
                }
            }
            out
        };
        let rows: Vec<Vec<HPoly>> = if self.rows >= PAR_ROWS {
            (0..self.rows).into_par_iter().map(row_product).collect()
        } else {
            (0..self.rows).map(row_product).collect()
        };
        let shape = if self.rows == other.cols && self.shape == other.shape {
            self.shape.clone()
        } else {
            TensorShape::single(self.rows)
        };
        Ok(PolyMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: rows.into_iter().flatten().collect(),
            shape,
        })
    }

    pub fn scale(&self, c: &HPoly) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
            shape: self.shape.clone(),
        }
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
            shape: self.shape.clone(),
        }
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_add(&other.try_mul(self)?)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entry-wise value at `h = 0`.
    pub fn eval_h0(&self) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|e| HPoly::constant(e.eval_at_h0()))
                .collect(),
            shape: self.shape.clone(),
        }
    }

    /// Drop every power of `h` above `max_degree` in every entry.
    pub fn truncate_degree(&self, max_degree: usize) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|e| e.truncate(max_degree))
                .collect(),
            shape: self.shape.clone(),
        }
    }

    /// Matrix of the coefficients of `h^k`.
    pub fn coeff_matrix(&self, k: usize) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|e| HPoly::constant(e.coeff(k)))
                .collect(),
            shape: self.shape.clone(),
        }
    }

    pub fn powi(&self, k: usize) -> Result<Self> {
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Kronecker product `A (x) B`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        if self.is_square() && other.is_square() {
            out.shape = self.shape.concat(&other.shape);
        }
        out
    }

    /// Exact division of every entry by `h^k`.
    pub fn div_h_checked(&self, k: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for (idx, e) in self.entries.iter().enumerate() {
            entries.push(e.div_h(k).map_err(|_| Error::EntryNotDivisible {
                row: idx / self.cols,
                col: idx % self.cols,
                power: k,
            })?);
        }
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
            shape: self.shape.clone(),
        })
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch {
                left: self.shape_str(),
                right: "square".into(),
            });
        }
        Ok(())
    }

    /// Powers `M^0, M^1, ...` up to and excluding the first zero power.
    /// Fails if `M^dim` is not zero.
    pub fn nilpotent_powers(&self) -> Result<Vec<PolyMatrix>> {
        self.require_square()?;
        let n = self.rows;
        let mut powers = vec![Self::identity(n).with_shape(self.shape.clone())];
        if n == 0 {
            return Ok(powers);
        }
        let mut p = self.clone();
        while !p.is_zero() {
            if powers.len() >= n {
                return Err(Error::NotNilpotent { dim: n });
            }
            let next = p.try_mul(self)?;
            powers.push(p);
            p = next;
        }
        Ok(powers)
    }

    /// Smallest `k` with `M^k = 0`.
    pub fn nilpotency_index(&self) -> Result<usize> {
        Ok(self.nilpotent_powers()?.len())
    }

    /// `sum_k M^k / k!`, a finite sum for nilpotent `M`.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut sum = Self::identity(n).with_shape(self.shape.clone());
        let mut term = sum.clone();
        for k in 1..=n {
            term = term.try_mul(self)?.scale_rat(&Rational::new(1, k as i64));
            if term.is_zero() {
                return Ok(sum);
            }
            sum = sum.try_add(&term)?;
        }
        if n == 0 {
            return Ok(sum);
        }
        Err(Error::NotNilpotent { dim: n })
    }

    /// `log M` for unipotent `M`: the alternating sum in `N = M - I`.
    pub fn log_unipotent(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let nil = self.try_sub(&Self::identity(n))?;
        let mut sum = Self::zeros(n, n).with_shape(self.shape.clone());
        let mut term = Self::identity(n);
        for k in 1..=n {
            term = term.try_mul(&nil)?;
            if term.is_zero() {
                return Ok(sum);
            }
            let c = Rational::new(if k % 2 == 1 { 1 } else { -1 }, k as i64);
            sum = sum.try_add(&term.scale_rat(&c))?;
        }
        if n == 0 || term.try_mul(&nil)?.is_zero() {
            return Ok(sum);
        }
        Err(Error::NotNilpotent { dim: n })
    }

    /// Inverse of a unipotent matrix, `exp(-log M)`.
    pub fn inverse_unipotent(&self) -> Result<Self> {
        (-self.log_unipotent()?).exp_nilpotent()
    }

    /// `sum_k s_k M^k` for nilpotent `M`. The series must reach the
    /// nilpotency index.
    pub fn apply_series(&self, s: &WSeries) -> Result<Self> {
        let powers = self.nilpotent_powers()?;
        if s.order() < powers.len() {
            return Err(Error::InsufficientOrder {
                order: s.order(),
                required: powers.len(),
            });
        }
        let mut sum = Self::zeros(self.rows, self.cols).with_shape(self.shape.clone());
        for (k, p) in powers.iter().enumerate() {
            let c = s.coeff(k);
            if !c.is_zero() {
                sum = sum.try_add(&p.scale_rat(&c))?;
            }
        }
        Ok(sum)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }
}

/// Permutation `P` on `C^{d1} (x) C^{d2}` with `P(x (x) y) = y (x) x`.
pub fn flip_perm(d1: usize, d2: usize) -> PolyMatrix {
    let n = d1 * d2;
    let mut p = PolyMatrix::zeros(n, n);
    for a in 0..d1 {
        for b in 0..d2 {
            // x_a (x) y_b sits at a*d2 + b; its image y_b (x) x_a at b*d1 + a.
            p.set(b * d1 + a, a * d2 + b, HPoly::one());
        }
    }
    p.with_shape(TensorShape(vec![d2, d1]))
}

macro_rules! matrix_op {
    ($tr:ident $m:ident $f:ident) => {
        /// Panics on shape mismatch; use the `try_` form for untrusted shapes.
        impl $tr<&PolyMatrix> for &PolyMatrix {
            type Output = PolyMatrix;
            fn $m(self, rhs: &PolyMatrix) -> PolyMatrix {
                self.$f(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<PolyMatrix> for PolyMatrix {
            type Output = PolyMatrix;
            fn $m(self, rhs: PolyMatrix) -> PolyMatrix {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&PolyMatrix> for PolyMatrix {
            type Output = PolyMatrix;
            fn $m(self, rhs: &PolyMatrix) -> PolyMatrix {
                (&self).$m(rhs)
            }
        }
        impl $tr<PolyMatrix> for &PolyMatrix {
            type Output = PolyMatrix;
            fn $m(self, rhs: PolyMatrix) -> PolyMatrix {
                self.$m(&rhs)
            }
        }
    };
}
matrix_op!(Add add try_add);
matrix_op!(Sub sub try_sub);
matrix_op!(Mul mul try_mul);

impl Neg for &PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
            shape: self.shape.clone(),
        }
    }
}

impl Neg for PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        -&self
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jp() -> PolyMatrix {
        PolyMatrix::from_int_rows(&[&[&[], &[1]], &[&[], &[]]])
    }
    fn jm() -> PolyMatrix {
        PolyMatrix::from_int_rows(&[&[&[], &[]], &[&[1], &[]]])
    }
    fn j0() -> PolyMatrix {
        PolyMatrix::from_int_rows(&[&[&[1], &[]], &[&[], &[-1]]])
    }

    #[test]
    fn spin_half_bracket() {
        assert_eq!(jp().commutator(&jm()).unwrap(), j0());
        let a = j0();
        assert_eq!(&PolyMatrix::identity(2) * &a, a);
    }

    #[test]
    fn shape_errors_name_both_shapes() {
        let err = PolyMatrix::zeros(2, 3)
            .try_mul(&PolyMatrix::zeros(2, 3))
            .unwrap_err();
        assert_eq!(
            err,
            Error::ShapeMismatch {
                left: "2x3".into(),
                right: "2x3".into()
            }
        );
    }

    #[test]
    fn eval_at_zero() {
        let m = PolyMatrix::from_int_rows(&[&[&[1, 1], &[]], &[&[], &[1]]]);
        assert_eq!(m.eval_h0(), PolyMatrix::identity(2));
    }

    #[test]
    fn kronecker_basics() {
        assert_eq!(
            PolyMatrix::identity(2).kron(&PolyMatrix::identity(2)),
            PolyMatrix::identity(4)
        );
        // J+ (x) J0: block (0,1) carries diag(1,-1).
        let k = jp().kron(&j0());
        let expected = PolyMatrix::from_int_rows(&[
            &[&[], &[], &[1], &[]],
            &[&[], &[], &[], &[-1]],
            &[&[], &[], &[], &[]],
            &[&[], &[], &[], &[]],
        ]);
        assert_eq!(k, expected);
        assert_eq!(k.shape(), &TensorShape(vec![2, 2]));
        let i = PolyMatrix::identity(2);
        assert_eq!(jp().kron(&i) * i.kron(&jm()), jp().kron(&jm()));
    }

    #[test]
    fn flips() {
        let p = flip_perm(2, 2);
        assert_eq!(&p * &p, PolyMatrix::identity(4));
        assert_eq!(&(&p * &jp().kron(&j0())) * &p, j0().kron(&jp()));
        assert_eq!(flip_perm(1, 3), PolyMatrix::identity(3));
        // Rectangular legs: P(2,3) A(x)B P(3,2) = B(x)A.
        let a = jp();
        let b = PolyMatrix::from_fn(3, 3, |i, j| HPoly::from((i * 3 + j) as i64));
        assert_eq!(
            &(&flip_perm(2, 3) * &a.kron(&b)) * &flip_perm(3, 2),
            b.kron(&a)
        );
    }

    #[test]
    fn nilpotent_exponential() {
        let n = PolyMatrix::from_int_rows(&[&[&[], &[0, 1]], &[&[], &[]]]);
        let e = n.exp_nilpotent().unwrap();
        assert_eq!(
            e,
            PolyMatrix::from_int_rows(&[&[&[1], &[0, 1]], &[&[], &[1]]])
        );
        assert_eq!(
            PolyMatrix::zeros(3, 3).exp_nilpotent().unwrap(),
            PolyMatrix::identity(3)
        );
        assert_eq!(
            &e * &(-&n).exp_nilpotent().unwrap(),
            PolyMatrix::identity(2)
        );
        assert_eq!(j0().exp_nilpotent(), Err(Error::NotNilpotent { dim: 2 }));
    }

    #[test]
    fn unipotent_logarithm() {
        let t = PolyMatrix::from_int_rows(&[&[&[1], &[0, 1]], &[&[], &[1]]]);
        assert_eq!(
            t.log_unipotent().unwrap(),
            PolyMatrix::from_int_rows(&[&[&[], &[0, 1]], &[&[], &[]]])
        );
        assert!(PolyMatrix::identity(3).log_unipotent().unwrap().is_zero());
        assert!(j0().log_unipotent().is_err());
        assert_eq!(t.inverse_unipotent().unwrap() * &t, PolyMatrix::identity(2));
    }

    #[test]
    fn series_application() {
        let z = jp().scale(&HPoly::h());
        let exp = crate::exact::Elementary::Exp.expand(2);
        let t = PolyMatrix::from_int_rows(&[&[&[1], &[0, 1]], &[&[], &[1]]]);
        assert_eq!(z.apply_series(&exp).unwrap(), t);
        assert_eq!(
            z.apply_series(&WSeries::one(2)).unwrap(),
            PolyMatrix::identity(2)
        );
        // (1 - 2z)^{-1/2} = 1 + z + O(z^2)
        let g = WSeries::from_ints(4, &[1, -2])
            .pow_rational(&Rational::new(-1, 2))
            .unwrap();
        assert_eq!(z.apply_series(&g).unwrap(), t);
        assert_eq!(
            z.apply_series(&WSeries::one(1)),
            Err(Error::InsufficientOrder {
                order: 1,
                required: 2
            })
        );
        assert_eq!(j0().apply_series(&exp), Err(Error::NotNilpotent { dim: 2 }));
    }

    #[test]
    fn checked_h_division() {
        let m = PolyMatrix::from_int_rows(&[&[&[], &[0, 0, 1]], &[&[], &[]]]);
        assert_eq!(
            m.div_h_checked(1).unwrap(),
            PolyMatrix::from_int_rows(&[&[&[], &[0, 1]], &[&[], &[]]])
        );
        assert_eq!(
            PolyMatrix::identity(2).div_h_checked(1),
            Err(Error::EntryNotDivisible {
                row: 0,
                col: 0,
                power: 1
            })
        );
    }
}
