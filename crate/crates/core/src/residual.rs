//! Named residual matrices: an identity holds exactly iff its residual is
//! the zero matrix.

use crate::matrix::PolyMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub name: String,
    pub matrix: PolyMatrix,
}

impl Residual {
    pub fn new(name: impl Into<String>, matrix: PolyMatrix) -> Self {
        Residual {
            name: name.into(),
            matrix,
        }
    }

    /// Residual of `lhs = rhs`.
    pub fn eq(name: impl Into<String>, lhs: &PolyMatrix, rhs: &PolyMatrix) -> Self {
        Self::new(name, lhs - rhs)
    }

    pub fn vanishes(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// True iff every residual vanishes.
pub fn all_vanish(residuals: &[Residual]) -> bool {
    residuals.iter().all(Residual::vanishes)
}

/// Names of the residuals that do not vanish.
pub fn failing(residuals: &[Residual]) -> Vec<&str> {
    residuals
        .iter()
        .filter(|r| !r.vanishes())
        .map(|r| r.name.as_str())
        .collect()
}
