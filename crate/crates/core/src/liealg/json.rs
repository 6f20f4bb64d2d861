//! JSON export/import of structure constants.
//!
//! ```json
//! {"dim": 3, "labels": [...], "entries": [[0, 1, 2, 1.0], ...], "killing": [[...], ...]}
//! ```
//! Indices are zero-based. Exact values are written as `{"num": n, "den": d}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{Rational, StructureAlgebra};
use crate::error::{Error, Result};

/// A scalar in a JSON document: either a plain float or an exact rational.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonValue {
    Exact { num: i64, den: i64 },
    Float(f64),
}

impl JsonValue {
    pub fn exact(r: Rational) -> Self {
        JsonValue::Exact { num: *r.numer(), den: *r.denom() }
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            JsonValue::Exact { num, den } => num as f64 / den as f64,
            JsonValue::Float(v) => v,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match *self {
            JsonValue::Exact { den: 0, .. } => None,
            JsonValue::Exact { num, den } => Some(Rational::new(num, den)),
            JsonValue::Float(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub dim: usize,
    pub labels: Vec<String>,
    pub entries: Vec<(usize, usize, usize, JsonValue)>,
    pub killing: Vec<Vec<JsonValue>>,
}

impl AlgebraDocument {
    pub fn from_algebra(alg: &StructureAlgebra) -> Self {
        let d = alg.dim();
        let (entries, killing) = match (alg.exact_entries(), alg.killing_gram_exact()) {
            (Some(exact), Some(kill)) => (
                exact.into_iter().map(|(i, j, k, v)| (i, j, k, JsonValue::exact(v))).collect(),
                (0..d).map(|i| (0..d).map(|j| JsonValue::exact(kill[i * d + j])).collect()).collect(),
            ),
            _ => (
                alg.entries().map(|(i, j, k, v)| (i, j, k, JsonValue::Float(v))).collect(),
                (0..d)
                    .map(|i| (0..d).map(|j| JsonValue::Float(alg.killing_gram()[(i, j)])).collect())
                    .collect(),
            ),
        };
        Self { dim: d, labels: alg.labels().to_vec(), entries, killing }
    }

    /// Rebuilds the algebra and runs [`StructureAlgebra::validate`]; any
    /// violation rejects the document.
    pub fn to_algebra(&self) -> Result<StructureAlgebra> {
        let d = self.dim;
        if self.labels.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: self.labels.len() });
        }
        if self.killing.len() != d || self.killing.iter().any(|row| row.len() != d) {
            return Err(Error::Format("killing matrix must be dim x dim".into()));
        }
        let exact_entries: Option<Vec<_>> = self
            .entries
            .iter()
            .map(|&(i, j, k, v)| v.as_rational().map(|r| (i, j, k, r)))
            .collect();
        let exact_killing: Option<Vec<Rational>> =
            self.killing.iter().flatten().map(JsonValue::as_rational).collect();
        let killing = DMatrix::from_fn(d, d, |i, j| self.killing[i][j].as_f64());
        let alg = match exact_entries {
            Some(exact) => StructureAlgebra::from_exact_entries(self.labels.clone(), exact)?,
            None => StructureAlgebra::from_entries(
                self.labels.clone(),
                self.entries.iter().map(|&(i, j, k, v)| (i, j, k, v.as_f64())),
            )?,
        };
        let exact_killing = if alg.is_exact() { exact_killing } else { None };
        if alg.is_exact() && exact_killing.is_none() {
            // Exact tensor with inexact Killing data: compare in floating point.
            let alg = StructureAlgebra::from_entries(
                self.labels.clone(),
                self.entries.iter().map(|&(i, j, k, v)| (i, j, k, v.as_f64())),
            )?
            .with_declared_killing(killing, None);
            return accept(alg);
        }
        accept(alg.with_declared_killing(killing, exact_killing))
    }
}

fn accept(alg: StructureAlgebra) -> Result<StructureAlgebra> {
    let violations = alg.validate();
    if violations.is_empty() {
        Ok(alg)
    } else {
        Err(Error::InvalidModel(violations))
    }
}

impl StructureAlgebra {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&AlgebraDocument::from_algebra(self))?)
    }

    /// Parses and validates a structure-constant document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: AlgebraDocument = serde_json::from_str(text)?;
        doc.to_algebra()
    }
}
