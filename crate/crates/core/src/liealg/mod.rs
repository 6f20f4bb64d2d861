//! Finite-dimensional real Lie algebras given by structure constants.
//!
//! A [`StructureAlgebra`] stores the bracket of basis elements
//! `[e_i, e_j] = sum_k c[i][j][k] e_k` sparsely, together with the Killing
//! Gram matrix recomputed from the tensor as `Tr(ad e_i . ad e_j)`. Exact
//! rational tensors are kept alongside the floating-point one whenever the
//! constructor knows them, so that validation can run without round-off.

mod chevalley;
mod classical;
mod json;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg;

pub use chevalley::{
    cartan_matrix, chevalley_compact, chevalley_compact_with_roots, BasisKind, CartanType,
    CompactChevalley, RootSystem,
};
pub use classical::{so_algebra, su_algebra, CMatrix, MatrixRealization};
pub use json::{AlgebraDocument, JsonValue};

pub type Rational = num_rational::Rational64;

/// Default absolute tolerance for structural validation on unit-scaled inputs.
pub const STRUCTURAL_TOL: f64 = 1e-10;

/// Coordinates of an element in the basis of its parent algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    coords: DVector<f64>,
}

impl AlgebraElement {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords: DVector::from_vec(coords) }
    }

    pub fn from_vector(coords: DVector<f64>) -> Self {
        Self { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Self { coords: DVector::zeros(dim) }
    }

    /// The `i`-th basis element `e_i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut coords = DVector::zeros(dim);
        coords[i] = 1.0;
        Self { coords }
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> f64 {
        self.coords.amax()
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_vector(&self.coords + &rhs.coords)
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_vector(&self.coords - &rhs.coords)
    }
}

impl Mul<f64> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: f64) -> AlgebraElement {
        AlgebraElement::from_vector(&self.coords * rhs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement::from_vector(-&self.coords)
    }
}

/// A structural defect reported by [`StructureAlgebra::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Antisymmetry { i: usize, j: usize, k: usize, error: f64 },
    Jacobi { i: usize, j: usize, k: usize, error: f64 },
    KillingMismatch { i: usize, j: usize, error: f64 },
    Invariance { i: usize, j: usize, k: usize, error: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Antisymmetry { i, j, k, error } => {
                write!(f, "c[{i}][{j}][{k}] + c[{j}][{i}][{k}] = {error:e}")
            }
            Violation::Jacobi { i, j, k, error } => {
                write!(f, "Jacobi sum for basis triple ({i},{j},{k}) has size {error:e}")
            }
            Violation::KillingMismatch { i, j, error } => {
                write!(f, "Killing entry ({i},{j}) differs from Tr(ad ad) by {error:e}")
            }
            Violation::Invariance { i, j, k, error } => {
                write!(f, "B([e{i},e{j}],e{k}) + B(e{j},[e{i},e{k}]) = {error:e}")
            }
        }
    }
}

/// A real Lie algebra given by a basis and its structure tensor.
///
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct StructureAlgebra {
    dim: usize,
    labels: Vec<String>,
    /// `table[i * dim + j]` lists the nonzero `(k, c[i][j][k])`.
    table: Vec<Vec<(usize, f64)>>,
    exact: Option<Vec<Vec<(usize, Rational)>>>,
    killing: DMatrix<f64>,
    killing_exact: Option<Vec<Rational>>,
    min_inner_eigenvalue: f64,
    realization: Option<MatrixRealization>,
}

fn tabulate<T: Copy + Zero + PartialEq>(
    dim: usize,
    entries: impl IntoIterator<Item = (usize, usize, usize, T)>,
) -> Result<Vec<Vec<(usize, T)>>> {
    let mut table: Vec<Vec<(usize, T)>> = vec![Vec::new(); dim * dim];
    for (i, j, k, v) in entries {
        let worst = i.max(j).max(k);
        if worst >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: worst + 1 });
        }
        let slot = &mut table[i * dim + j];
        match slot.iter_mut().find(|(kk, _)| *kk == k) {
            Some((_, acc)) => *acc = *acc + v,
            None => slot.push((k, v)),
        }
    }
    for slot in &mut table {
        slot.retain(|&(_, v)| v != T::zero());
        slot.sort_by_key(|&(k, _)| k);
    }
    Ok(table)
}

/// `B_ij = sum_{k,l} c[i][k][l] c[j][l][k]`.
fn killing_from_table<T>(dim: usize, table: &[Vec<(usize, T)>]) -> Vec<T>
where
    T: Copy + Zero + Mul<Output = T> + Add<Output = T>,
{
    // by_lk[l * dim + k] lists (j, c[j][l][k])
    let mut by_lk: Vec<Vec<(usize, T)>> = vec![Vec::new(); dim * dim];
    for j in 0..dim {
        for l in 0..dim {
            for &(k, v) in &table[j * dim + l] {
                by_lk[l * dim + k].push((j, v));
            }
        }
    }
    let mut gram = vec![T::zero(); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            for &(l, v) in &table[i * dim + k] {
                for &(j, w) in &by_lk[l * dim + k] {
                    gram[i * dim + j] = gram[i * dim + j] + v * w;
                }
            }
        }
    }
    gram
}

fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl StructureAlgebra {
    /// Builds an algebra from raw tensor entries `(i, j, k, c[i][j][k])`.
    ///
    /// Entries are taken as given (both orders of `(i, j)` must be supplied);
    /// nothing is antisymmetrized, so [`validate`](Self::validate) sees the
    /// tensor exactly as provided.
    pub fn from_entries(
        labels: Vec<String>,
        entries: impl IntoIterator<Item = (usize, usize, usize, f64)>,
    ) -> Result<Self> {
        let dim = labels.len();
        let table = tabulate(dim, entries)?;
        Ok(Self::assemble(labels, table, None))
    }

    /// Builds an algebra from exact rational entries; the floating-point
    /// tensor is derived from them.
    pub fn from_exact_entries(
        labels: Vec<String>,
        entries: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
    ) -> Result<Self> {
        let dim = labels.len();
        let exact = tabulate(dim, entries)?;
        let table = exact
            .iter()
            .map(|slot| slot.iter().map(|(k, v)| (*k, rational_to_f64(v))).collect())
            .collect();
        Ok(Self::assemble(labels, table, Some(exact)))
    }

    /// Builds an algebra from the upper-triangular part `i < j` of the tensor,
    /// filling in `c[j][i][k] = -c[i][j][k]`.
    pub fn from_antisymmetric(
        labels: Vec<String>,
        upper: impl IntoIterator<Item = (usize, usize, usize, f64)>,
    ) -> Result<Self> {
        let mut all = Vec::new();
        for (i, j, k, v) in upper {
            all.push((i, j, k, v));
            all.push((j, i, k, -v));
        }
        Self::from_entries(labels, all)
    }

    fn assemble(
        labels: Vec<String>,
        table: Vec<Vec<(usize, f64)>>,
        exact: Option<Vec<Vec<(usize, Rational)>>>,
    ) -> Self {
        let dim = labels.len();
        let killing = DMatrix::from_row_slice(dim, dim, &killing_from_table(dim, &table));
        let killing_exact = exact.as_ref().map(|t| killing_from_table(dim, t));
        let min_inner_eigenvalue = if dim == 0 {
            0.0
        } else {
            linalg::sorted_symmetric_eigen(&(-&killing)).0[0]
        };
        Self {
            dim,
            labels,
            table,
            exact,
            killing,
            killing_exact,
            min_inner_eigenvalue,
            realization: None,
        }
    }

    pub(crate) fn with_realization(mut self, realization: MatrixRealization) -> Self {
        self.realization = Some(realization);
        self
    }

    /// Replaces the recomputed Killing matrix with a declared one, so that a
    /// later [`validate`](Self::validate) compares the two.
    pub(crate) fn with_declared_killing(
        mut self,
        killing: DMatrix<f64>,
        exact: Option<Vec<Rational>>,
    ) -> Self {
        self.killing = killing;
        if exact.is_some() {
            self.killing_exact = exact;
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn realization(&self) -> Option<&MatrixRealization> {
        self.realization.as_ref()
    }

    pub fn killing_gram(&self) -> &DMatrix<f64> {
        &self.killing
    }

    /// Exact Killing Gram matrix in row-major order, when the tensor is exact.
    pub fn killing_gram_exact(&self) -> Option<&[Rational]> {
        self.killing_exact.as_deref()
    }

    /// `c[i][j][k]`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.table[i * self.dim + j]
            .iter()
            .find(|(kk, _)| *kk == k)
            .map_or(0.0, |(_, v)| *v)
    }

    /// Nonzero entries `(i, j, k, value)` in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        self.table.iter().enumerate().flat_map(move |(ij, slot)| {
            slot.iter().map(move |&(k, v)| (ij / self.dim, ij % self.dim, k, v))
        })
    }

    /// Nonzero exact entries, when available.
    pub fn exact_entries(&self) -> Option<Vec<(usize, usize, usize, Rational)>> {
        let exact = self.exact.as_ref()?;
        Some(
            exact
                .iter()
                .enumerate()
                .flat_map(|(ij, slot)| {
                    slot.iter().map(move |&(k, v)| (ij / self.dim, ij % self.dim, k, v))
                })
                .collect(),
        )
    }

    pub fn nnz(&self) -> usize {
        self.table.iter().map(Vec::len).sum()
    }

    fn check_dim(&self, x: &AlgebraElement) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        Ok(())
    }

    /// `[X, Y] = sum_{i,j} x_i y_j c[i][j][.]`.
    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(AlgebraElement::from_vector(self.bracket_vec(x.coords(), y.coords())))
    }

    pub(crate) fn bracket_vec(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let d = self.dim;
        let mut out = DVector::zeros(d);
        let ys: Vec<(usize, f64)> =
            y.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, v)| (j, *v)).collect();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for &(j, yj) in &ys {
                let s = xi * yj;
                for &(k, c) in &self.table[i * d + j] {
                    out[k] += s * c;
                }
            }
        }
        out
    }

    /// Matrix of `ad_X`; column `j` is `[X, e_j]`.
    pub fn ad_matrix(&self, x: &AlgebraElement) -> Result<DMatrix<f64>> {
        self.check_dim(x)?;
        let d = self.dim;
        let mut m = DMatrix::zeros(d, d);
        for (i, &xi) in x.coords().iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for j in 0..d {
                for &(k, c) in &self.table[i * d + j] {
                    m[(k, j)] += xi * c;
                }
            }
        }
        Ok(m)
    }

    /// `B(X, Y) = Tr(ad_X ad_Y)` via the stored Gram matrix.
    pub fn killing(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(x.coords().dot(&(&self.killing * y.coords())))
    }

    /// Whether `-B` is positive definite.
    pub fn is_compact(&self) -> bool {
        self.min_inner_eigenvalue > STRUCTURAL_TOL * self.killing.amax().max(1.0)
    }

    /// The invariant inner product `<X, Y> = -B(X, Y)`; fails on non-compact algebras.
    pub fn inner(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
        if !self.is_compact() {
            return Err(Error::NotCompact { min_eigenvalue: self.min_inner_eigenvalue });
        }
        Ok(-self.killing(x, y)?)
    }

    pub(crate) fn inner_vec(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        -x.dot(&(&self.killing * y))
    }

    /// Gram-Schmidt with respect to `<,>`, in input order.
    ///
    /// Each vector is orthogonalized twice against its predecessors, which
    /// keeps the output Gram matrix at the identity to round-off.
    pub fn orthonormalize(&self, vectors: &[AlgebraElement]) -> Result<Vec<AlgebraElement>> {
        if !self.is_compact() {
            return Err(Error::NotCompact { min_eigenvalue: self.min_inner_eigenvalue });
        }
        let mut out: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
        for (index, v) in vectors.iter().enumerate() {
            self.check_dim(v)?;
            let original = self.inner_vec(v.coords(), v.coords()).sqrt();
            let w = self.orthogonalize_against(v.coords().clone(), &out);
            let norm = self.inner_vec(&w, &w).sqrt();
            if !(norm > 1e-10 * original.max(f64::MIN_POSITIVE)) {
                return Err(Error::RankDeficient { index, residual: norm });
            }
            out.push(w / norm);
        }
        Ok(out.into_iter().map(AlgebraElement::from_vector).collect())
    }

    /// Orthonormal basis of the span of `vectors`, skipping vectors whose
    /// residual after projection is below `rel_tol` of their original length.
    pub(crate) fn orthonormal_span(
        &self,
        vectors: impl IntoIterator<Item = DVector<f64>>,
        rel_tol: f64,
    ) -> Vec<DVector<f64>> {
        let mut out: Vec<DVector<f64>> = Vec::new();
        for v in vectors {
            let original = self.inner_vec(&v, &v).sqrt();
            if original == 0.0 {
                continue;
            }
            let w = self.orthogonalize_against(v, &out);
            let norm = self.inner_vec(&w, &w).sqrt();
            if norm > rel_tol * original {
                out.push(w / norm);
            }
        }
        out
    }

    fn orthogonalize_against(&self, mut w: DVector<f64>, basis: &[DVector<f64>]) -> DVector<f64> {
        for _ in 0..2 {
            for u in basis {
                let c = self.inner_vec(u, &w);
                w.axpy(-c, u, 1.0);
            }
        }
        w
    }

    /// Structural checks with the default tolerance; see [`validate_with`](Self::validate_with).
    pub fn validate(&self) -> Vec<Violation> {
        self.validate_with(STRUCTURAL_TOL)
    }

    /// Checks antisymmetry, the Jacobi identity on all basis triples,
    /// consistency of the stored Killing matrix with `Tr(ad ad)`, and
    /// ad-invariance of the Killing form on all basis triples.
    ///
    /// Runs in exact arithmetic when the tensor is exact (the tolerance is
    /// then unused), otherwise with absolute tolerance `tol`. An empty list
    /// means the algebra is valid.
    pub fn validate_with(&self, tol: f64) -> Vec<Violation> {
        match (&self.exact, &self.killing_exact) {
            (Some(exact), Some(killing)) => validate_table(self.dim, exact, killing, Rational::zero(), |r| {
                rational_to_f64(r).abs()
            }),
            _ => {
                let killing: Vec<f64> = self.killing.transpose().iter().cloned().collect();
                validate_table(self.dim, &self.table, &killing, tol, |v| v.abs())
            }
        }
    }
}

/// Generic validation over either scalar type. `tol` is compared with
/// `size(error) > size(tol)`.
fn validate_table<T>(
    dim: usize,
    table: &[Vec<(usize, T)>],
    killing: &[T],
    tol: T,
    size: impl Fn(&T) -> f64,
) -> Vec<Violation>
where
    T: Copy + Zero + PartialEq + Mul<Output = T> + Add<Output = T> + Neg<Output = T> + Sub<Output = T>,
{
    const CAP: usize = 64;
    let tol_size = size(&tol);
    let mut out = Vec::new();
    let d = dim;
    let mut scratch = vec![T::zero(); d];

    'anti: for i in 0..d {
        for j in i..d {
            for &(k, v) in &table[i * d + j] {
                scratch[k] = scratch[k] + v;
            }
            for &(k, v) in &table[j * d + i] {
                scratch[k] = scratch[k] + v;
            }
            for k in 0..d {
                let e = size(&scratch[k]);
                if e > tol_size {
                    out.push(Violation::Antisymmetry { i, j, k, error: e });
                    if out.len() >= CAP {
                        break 'anti;
                    }
                }
                scratch[k] = T::zero();
            }
        }
    }

    // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
    let push_nested = |scratch: &mut [T], a: usize, b: usize, c: usize| {
        for &(l, v) in &table[a * d + b] {
            for &(m, w) in &table[l * d + c] {
                scratch[m] = scratch[m] + v * w;
            }
        }
    };
    'jac: for i in 0..d {
        for j in (i + 1)..d {
            for k in (j + 1)..d {
                push_nested(&mut scratch, i, j, k);
                push_nested(&mut scratch, j, k, i);
                push_nested(&mut scratch, k, i, j);
                let mut worst = 0.0_f64;
                for s in scratch.iter_mut() {
                    worst = worst.max(size(s));
                    *s = T::zero();
                }
                if worst > tol_size {
                    out.push(Violation::Jacobi { i, j, k, error: worst });
                    if out.len() >= 2 * CAP {
                        break 'jac;
                    }
                }
            }
        }
    }

    let recomputed = killing_from_table(d, table);
    for i in 0..d {
        for j in 0..d {
            let e = size(&(recomputed[i * d + j] - killing[i * d + j]));
            // Killing entries scale with the dimension; compare relatively.
            let scale = size(&killing[i * d + j]).max(1.0);
            if e > tol_size * scale {
                out.push(Violation::KillingMismatch { i, j, error: e });
            }
        }
    }

    // B([e_i,e_j],e_k) + B(e_j,[e_i,e_k])
    let kill = |a: usize, b: usize| killing[a * d + b];
    'inv: for i in 0..d {
        for j in 0..d {
            for k in j..d {
                let mut acc = T::zero();
                for &(l, v) in &table[i * d + j] {
                    acc = acc + v * kill(l, k);
                }
                for &(l, v) in &table[i * d + k] {
                    acc = acc + v * kill(j, l);
                }
                let e = size(&acc);
                if e > tol_size * d as f64 {
                    out.push(Violation::Invariance { i, j, k, error: e });
                    if out.len() >= 3 * CAP {
                        break 'inv;
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
