//! Small dense linear-algebra helpers shared by the modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Deterministic generator used for every seeded draw in the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point on the unit sphere of `R^n`.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / norm;
        }
    }
}

/// Eigen-decomposition of a symmetric matrix with eigenvalues sorted ascending.
///
/// The input is symmetrized first so that round-off asymmetry does not leak
/// into the decomposition.
pub fn sorted_symmetric_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Orthonormal basis (as columns) of the null space of `m`, using the SVD.
///
/// Singular values below `rel_tol * max(1, largest singular value)` count as zero.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let cols = m.ncols();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    // Work with the Gram matrix when there are fewer rows than columns so the
    // SVD always sees a tall matrix and returns a full right basis.
    let tall = if m.nrows() < cols {
        let mut padded = DMatrix::zeros(cols, cols);
        padded.rows_mut(0, m.nrows()).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = tall.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let scale = svd.singular_values.iter().cloned().fold(1.0_f64, f64::max);
    let null: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= rel_tol * scale)
        .collect();
    let mut basis = DMatrix::zeros(cols, null.len());
    for (c, &i) in null.iter().enumerate() {
        basis.set_column(c, &v_t.row(i).transpose());
    }
    basis
}

/// `|x - y| / max(|y|, floor)`.
pub fn rel_err(x: f64, y: f64, floor: f64) -> f64 {
    (x - y).abs() / y.abs().max(floor)
}

/// Largest absolute entry of a matrix.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}
