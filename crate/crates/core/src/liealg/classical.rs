//! Matrix-backed constructors: `so(m)` and `su(m)`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_complex::Complex64;

use super::{AlgebraElement, Rational, StructureAlgebra};
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// A faithful matrix representation of an algebra: one matrix per basis element.
///
/// Coordinates of a matrix are recovered by solving against the Gram matrix
/// of the real trace form `(X, Y) = Re Tr(X Y^*)`.
#[derive(Clone, Debug)]
pub struct MatrixRealization {
    size: usize,
    basis: Vec<CMatrix>,
    gram: Cholesky<f64, Dyn>,
}

fn trace_form(x: &CMatrix, y: &CMatrix) -> f64 {
    // Re Tr(X Y^*) = Re sum_{ab} x_ab conj(y_ab)
    x.iter().zip(y.iter()).map(|(a, b)| (a * b.conj()).re).sum()
}

impl MatrixRealization {
    pub fn new(basis: Vec<CMatrix>) -> Result<Self> {
        let size = basis.first().map_or(0, |m| m.nrows());
        let d = basis.len();
        let gram = DMatrix::from_fn(d, d, |a, b| trace_form(&basis[a], &basis[b]));
        let gram = Cholesky::new(gram).ok_or_else(|| {
            Error::InvalidParameter("matrix basis is linearly dependent".into())
        })?;
        Ok(Self { size, basis, gram })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    /// `sum_i x_i B_i`.
    pub fn to_matrix(&self, x: &AlgebraElement) -> CMatrix {
        let mut m = CMatrix::zeros(self.size, self.size);
        for (xi, b) in x.coords().iter().zip(&self.basis) {
            if *xi != 0.0 {
                m += b * Complex64::new(*xi, 0.0);
            }
        }
        m
    }

    /// Coordinates of `m` in the basis, assuming `m` lies in the span.
    pub fn expand(&self, m: &CMatrix) -> DVector<f64> {
        let rhs = DVector::from_iterator(self.basis.len(), self.basis.iter().map(|b| trace_form(m, b)));
        self.gram.solve(&rhs)
    }

    /// Matrix of the linear map `X -> g X g^{-1}` on coordinates, for unitary `g`.
    pub fn conjugation_map(&self, g: &CMatrix) -> DMatrix<f64> {
        let g_inv = g.adjoint();
        let d = self.basis.len();
        let mut out = DMatrix::zeros(d, d);
        for (j, b) in self.basis.iter().enumerate() {
            out.set_column(j, &self.expand(&(g * b * &g_inv)));
        }
        out
    }
}

/// Expands every commutator `[B_i, B_j]` in the basis. When all structure
/// constants are integers to within `1e-12` the exact tensor is kept as well.
fn from_matrix_basis(labels: Vec<String>, basis: Vec<CMatrix>) -> Result<StructureAlgebra> {
    let realization = MatrixRealization::new(basis)?;
    let d = realization.basis.len();
    let mut entries = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let (a, b) = (&realization.basis[i], &realization.basis[j]);
            let comm = a * b - b * a;
            let coords = realization.expand(&comm);
            for (k, &v) in coords.iter().enumerate() {
                if v.abs() > 1e-13 {
                    entries.push((i, j, k, v));
                }
            }
        }
    }
    let integral = entries.iter().all(|&(_, _, _, v)| (v - v.round()).abs() < 1e-12);
    let algebra = if integral {
        let exact = entries.iter().flat_map(|&(i, j, k, v)| {
            let r = Rational::from_integer(v.round() as i64);
            [(i, j, k, r), (j, i, k, -r)]
        });
        StructureAlgebra::from_exact_entries(labels, exact)?
    } else {
        StructureAlgebra::from_antisymmetric(labels, entries)?
    };
    Ok(algebra.with_realization(realization))
}

fn unit(m: usize, a: usize, b: usize, value: Complex64) -> CMatrix {
    let mut e = CMatrix::zeros(m, m);
    e[(a, b)] = value;
    e
}

/// `so(m)` with basis `E_ij - E_ji` for `i < j` in lexicographic order.
pub fn so_algebra(m: usize) -> Result<StructureAlgebra> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("so(m) needs m >= 3, got {m}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            labels.push(format!("L{},{}", i + 1, j + 1));
            basis.push(unit(m, i, j, one) - unit(m, j, i, one));
        }
    }
    from_matrix_basis(labels, basis)
}

/// `su(m)` with the real basis
/// `i(E_kk - E_{k+1,k+1})`, `E_jk - E_kj`, `i(E_jk + E_kj)` (`j < k`).
pub fn su_algebra(m: usize) -> Result<StructureAlgebra> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("su(m) needs m >= 2, got {m}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let i_unit = Complex64::new(0.0, 1.0);
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for k in 0..m - 1 {
        labels.push(format!("H{}", k + 1));
        basis.push(unit(m, k, k, i_unit) - unit(m, k + 1, k + 1, i_unit));
    }
    for j in 0..m {
        for k in (j + 1)..m {
            labels.push(format!("A{},{}", j + 1, k + 1));
            basis.push(unit(m, j, k, one) - unit(m, k, j, one));
            labels.push(format!("S{},{}", j + 1, k + 1));
            basis.push(unit(m, j, k, i_unit) + unit(m, k, j, i_unit));
        }
    }
    from_matrix_basis(labels, basis)
}
