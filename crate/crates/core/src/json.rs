//! Canonical JSON form of polynomial matrices.
//!
//! `{"rows":r,"cols":c,"entries":[[entry, ...], ...]}` where each entry is an
//! array of `[power, "num/den"]` pairs with ascending powers and nonzero
//! coefficients in lowest terms. Parsing rejects anything non-canonical, so
//! `emit(parse(s)) == s` for every accepted compact string.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{HPoly, Rational};
use crate::matrix::PolyMatrix;

type Entry = Vec<(usize, String)>;

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Entry>>,
}

fn entry_of(p: &HPoly) -> Entry {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.to_canonical_string()))
        .collect()
}

fn poly_of(entry: &Entry) -> Result<HPoly> {
    let mut coeffs: Vec<Rational> = Vec::new();
    let mut last: Option<usize> = None;
    for (k, text) in entry {
        if last.is_some_and(|l| *k <= l) {
            return Err(Error::Json(format!(
                "powers not strictly ascending at h^{k}"
            )));
        }
        let c: Rational = text.parse()?;
        if c.to_canonical_string() != *text {
            return Err(Error::Json(format!("non-canonical rational `{text}`")));
        }
        if c.is_zero() {
            return Err(Error::Json(format!("zero coefficient stored at h^{k}")));
        }
        coeffs.resize(k + 1, Rational::zero());
        coeffs[*k] = c;
        last = Some(*k);
    }
    Ok(HPoly::from_coeffs(coeffs))
}

fn doc_of(m: &PolyMatrix) -> MatrixDoc {
    MatrixDoc {
        rows: m.rows(),
        cols: m.cols(),
        entries: (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| entry_of(m.get(i, j))).collect())
            .collect(),
    }
}

fn matrix_of(doc: MatrixDoc) -> Result<PolyMatrix> {
    if doc.entries.len() != doc.rows || doc.entries.iter().any(|r| r.len() != doc.cols) {
        return Err(Error::Json(format!(
            "entries do not form a {}x{} array",
            doc.rows, doc.cols
        )));
    }
    let mut m = PolyMatrix::zeros(doc.rows, doc.cols);
    for (i, row) in doc.entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            m.set(i, j, poly_of(e)?);
        }
    }
    Ok(m)
}

impl Serialize for PolyMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        doc_of(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        matrix_of(MatrixDoc::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// Compact canonical JSON for a matrix.
pub fn matrix_to_json(m: &PolyMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization is infallible")
}

pub fn matrix_from_json(s: &str) -> Result<PolyMatrix> {
    serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))
}
