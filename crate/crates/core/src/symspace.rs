//! Rank-two Hermitian symmetric pairs `(g, θ)`, their Cartan decomposition
//! `g = k + p` and the central element `Z` with `J = ad_Z|_p`.
//!
//! Everything downstream works in the adapted orthonormal bases
//! `k_basis` and `p_basis`. Brackets between the summands are precomputed
//! as the block tensors
//!
//! * `kp[c][(j, i)] = <[k_c, p_i], p_j>` (the action of `k_c` on `p`),
//! * `kk[c][(j, i)] = <[k_c, k_i], k_j>`,
//!
//! and by invariance of `<,>` the `k_c` component of `[P, Q]` is
//! `Q^T kp[c] P`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::{
    cartan_matrix, chevalley_compact_with_roots, so_algebra, su_algebra, AlgebraDocument,
    AlgebraElement, BasisKind, CMatrix, CartanType, StructureAlgebra,
};
use crate::linalg::{self, null_space, sorted_symmetric_eigen};

/// The four rank-two compact irreducible Hermitian symmetric spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `SO(2+n)/SO(2)xSO(n)`, `n >= 3`
    Bdi(usize),
    /// `SU(2+n)/S(U(2)xU(n))`, `n >= 2`
    Aiii(usize),
    /// `SO(10)/U(5)`
    Diii5,
    /// `E6/U(1)xSpin(10)`
    Eiii,
}

impl Family {
    /// Parses a family name (`BDI`, `AIII`, `DIII5`, `EIII`, case-insensitive)
    /// together with its parameter.
    pub fn from_name(name: &str, n: Option<usize>) -> Result<Self> {
        let upper = name.trim().to_ascii_uppercase();
        let family = match upper.as_str() {
            "BDI" => Family::Bdi(n.ok_or_else(|| Error::InvalidParameter("BDI needs --n".into()))?),
            "AIII" => Family::Aiii(n.ok_or_else(|| Error::InvalidParameter("AIII needs --n".into()))?),
            "DIII5" | "DIII" => Family::Diii5,
            "EIII" => Family::Eiii,
            _ => {
                // accept the display form, e.g. "BDI(4)"
                if let Some((head, rest)) = upper.split_once('(') {
                    let value: usize = rest
                        .trim_end_matches(')')
                        .parse()
                        .map_err(|_| Error::InvalidParameter(format!("bad family {name:?}")))?;
                    return Self::from_name(head, Some(value));
                }
                return Err(Error::InvalidParameter(format!("unknown family {name:?}")));
            }
        };
        family.check()?;
        Ok(family)
    }

    fn check(&self) -> Result<()> {
        match *self {
            Family::Bdi(n) if n < 3 => Err(Error::InvalidParameter(format!("BDI needs n >= 3, got {n}"))),
            Family::Aiii(n) if n < 2 => Err(Error::InvalidParameter(format!("AIII needs n >= 2, got {n}"))),
            _ => Ok(()),
        }
    }

    pub fn n(&self) -> Option<usize> {
        match *self {
            Family::Bdi(n) | Family::Aiii(n) => Some(n),
            Family::Diii5 | Family::Eiii => None,
        }
    }

    /// Expected `dim p`.
    pub fn expected_n(&self) -> usize {
        match *self {
            Family::Bdi(n) => 2 * n,
            Family::Aiii(n) => 4 * n,
            Family::Diii5 => 20,
            Family::Eiii => 32,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Bdi(_) => "BDI",
            Family::Aiii(_) => "AIII",
            Family::Diii5 => "DIII5",
            Family::Eiii => "EIII",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n() {
            Some(n) => write!(f, "{}({n})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// A point of `p` in coordinates of the orthonormal `p_basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointInP {
    coords: DVector<f64>,
}

impl PointInP {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords: DVector::from_vec(coords) }
    }

    pub fn from_vector(coords: DVector<f64>) -> Self {
        Self { coords }
    }

    pub fn zeros(n: usize) -> Self {
        Self { coords: DVector::zeros(n) }
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }
}

/// The Cartan decomposition of `g` with respect to `theta`, as bases in
/// algebra coordinates orthonormal for `<,>`.
///
/// `k` is spanned by the projections `(e_i + θ e_i)/2` of the basis vectors,
/// `p` by `(e_i - θ e_i)/2`, each in the order of the algebra basis.
pub fn cartan_split(
    alg: &StructureAlgebra,
    theta: &DMatrix<f64>,
) -> Result<(Vec<AlgebraElement>, Vec<AlgebraElement>)> {
    let d = alg.dim();
    if theta.nrows() != d || theta.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: theta.nrows() });
    }
    let id = DMatrix::<f64>::identity(d, d);
    let scale = theta.amax().max(1.0);
    let sq_err = linalg::max_abs(&(theta * theta - &id));
    if sq_err > 1e-10 * scale * scale {
        return Err(Error::NotInvolution(format!("|θ² - I| = {sq_err:e}")));
    }
    let mut r = linalg::rng(0x7e7a);
    for _ in 0..8 {
        let x = linalg::random_unit(&mut r, d);
        let y = linalg::random_unit(&mut r, d);
        let lhs = theta * alg.bracket_vec(&x, &y);
        let rhs = alg.bracket_vec(&(theta * &x), &(theta * &y));
        let err = (&lhs - &rhs).amax();
        if err > 1e-10 * lhs.amax().max(1.0) {
            return Err(Error::NotInvolution(format!("θ[X,Y] - [θX,θY] = {err:e}")));
        }
    }
    let plus = (&id + theta) * 0.5;
    let minus = (&id - theta) * 0.5;
    // Projections that vanish relative to e_i are dropped before Gram-Schmidt.
    let span = |proj: &DMatrix<f64>| {
        let kept = (0..d).filter_map(|i| {
            let v = proj.column(i).into_owned();
            let e = alg.killing_gram()[(i, i)].abs().sqrt();
            (alg.inner_vec(&v, &v).max(0.0).sqrt() > 1e-8 * e).then_some(v)
        });
        alg.orthonormal_span(kept, 1e-8)
    };
    let (k, p) = (span(&plus), span(&minus));
    if k.len() + p.len() != d {
        return Err(Error::NotInvolution(format!("eigenspaces have dimensions {} + {} != {d}", k.len(), p.len())));
    }
    Ok((
        k.into_iter().map(AlgebraElement::from_vector).collect(),
        p.into_iter().map(AlgebraElement::from_vector).collect(),
    ))
}

/// Basis of the center `{W in k : [W, k] = 0}` of the subalgebra spanned by
/// `k_basis`, from the null space of the stacked adjoint action.
pub fn center_of_k(alg: &StructureAlgebra, k_basis: &[AlgebraElement]) -> Vec<AlgebraElement> {
    let dk = k_basis.len();
    if dk == 0 {
        return Vec::new();
    }
    let d = alg.dim();
    // column c stacks [k_c, k_e] over all e
    let mut stacked = DMatrix::zeros(d * dk, dk);
    for c in 0..dk {
        for e in 0..dk {
            let v = alg.bracket_vec(k_basis[c].coords(), k_basis[e].coords());
            stacked.view_mut((e * d, c), (d, 1)).copy_from(&v);
        }
    }
    let kernel = null_space(&stacked, 1e-9);
    (0..kernel.ncols())
        .map(|i| {
            let mut w = DVector::zeros(d);
            for c in 0..dk {
                w.axpy(kernel[(c, i)], k_basis[c].coords(), 1.0);
            }
            AlgebraElement::from_vector(w)
        })
        .collect()
}

/// Matrix of `ad_W|_p` in the orthonormal `p_basis`, entry `(j, i) = <[W, p_i], p_j>`.
fn restricted_ad(alg: &StructureAlgebra, w: &DVector<f64>, p_basis: &[AlgebraElement]) -> DMatrix<f64> {
    let n = p_basis.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let v = alg.bracket_vec(w, p_basis[i].coords());
        for j in 0..n {
            m[(j, i)] = alg.inner_vec(&v, p_basis[j].coords());
        }
    }
    m
}

/// The central element `Z` normalized so that `(ad_Z)²|_p = -I`, with the
/// first coordinate of absolute value above `1e-8` positive.
pub fn find_z(
    alg: &StructureAlgebra,
    k_basis: &[AlgebraElement],
    p_basis: &[AlgebraElement],
) -> Result<AlgebraElement> {
    let center = center_of_k(alg, k_basis);
    if center.len() != 1 {
        return Err(Error::CenterDimension(center.len()));
    }
    let w = center[0].coords();
    let ad = restricted_ad(alg, w, p_basis);
    let (vals, _) = sorted_symmetric_eigen(&-(&ad * &ad));
    let (min, max) = (vals[0], vals[vals.len() - 1]);
    let mean = vals.mean();
    if !(mean > 0.0) || max - min > 1e-9 * mean {
        return Err(Error::NotComplexStructure { min: -max, max: -min });
    }
    let mut z = w / mean.sqrt();
    if let Some(first) = z.iter().find(|v| v.abs() > 1e-8) {
        if *first < 0.0 {
            z = -z;
        }
    }
    Ok(AlgebraElement::from_vector(z))
}

/// A Hermitian symmetric pair with its adapted orthonormal bases and the
/// precomputed bracket blocks.
#[derive(Clone, Debug)]
pub struct HermitianPair {
    family: Family,
    algebra: StructureAlgebra,
    k_basis: Vec<AlgebraElement>,
    p_basis: Vec<AlgebraElement>,
    z: AlgebraElement,
    z_k: DVector<f64>,
    kp: Vec<DMatrix<f64>>,
    kk: Vec<DMatrix<f64>>,
    j: DMatrix<f64>,
}

fn conjugation_theta(alg: &StructureAlgebra, g: &CMatrix) -> DMatrix<f64> {
    alg.realization().expect("matrix-backed algebra").conjugation_map(g)
}

fn block_sign(size: usize) -> CMatrix {
    let mut g = CMatrix::identity(size, size);
    g[(0, 0)] = Complex64::new(-1.0, 0.0);
    g[(1, 1)] = Complex64::new(-1.0, 0.0);
    g
}

/// Family data: the algebra and the involution in algebra coordinates.
fn family_data(family: Family) -> Result<(StructureAlgebra, DMatrix<f64>)> {
    family.check()?;
    match family {
        Family::Bdi(n) => {
            let alg = so_algebra(2 + n)?;
            let theta = conjugation_theta(&alg, &block_sign(2 + n));
            Ok((alg, theta))
        }
        Family::Aiii(n) => {
            let alg = su_algebra(2 + n)?;
            let theta = conjugation_theta(&alg, &block_sign(2 + n));
            Ok((alg, theta))
        }
        Family::Diii5 => {
            let alg = so_algebra(10)?;
            let mut j0 = CMatrix::zeros(10, 10);
            for i in 0..5 {
                j0[(i, i + 5)] = Complex64::new(-1.0, 0.0);
                j0[(i + 5, i)] = Complex64::new(1.0, 0.0);
            }
            let theta = conjugation_theta(&alg, &j0);
            Ok((alg, theta))
        }
        Family::Eiii => {
            let e6 = chevalley_compact_with_roots(&cartan_matrix(CartanType::E, 6)?)?;
            let grading = grading_root(e6.roots.highest_root())?;
            let positive = e6.roots.positive_roots();
            let signs = e6.basis.iter().map(|kind| match *kind {
                BasisKind::Cartan(_) => 1.0,
                BasisKind::X(t) | BasisKind::Y(t) => {
                    if positive[t][grading] % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
            });
            let theta = DMatrix::from_diagonal(&DVector::from_iterator(e6.basis.len(), signs));
            Ok((e6.algebra, theta))
        }
    }
}

/// Lowest-index simple root whose coefficient in the highest root is 1.
pub(crate) fn grading_root(highest: &[i64]) -> Result<usize> {
    highest
        .iter()
        .position(|&c| c == 1)
        .ok_or_else(|| Error::InvalidParameter("no simple root with highest-root coefficient 1".into()))
}

/// Builds and validates the pair for `family`.
pub fn build_space(family: Family) -> Result<HermitianPair> {
    let (alg, theta) = family_data(family)?;
    let (k, p) = cartan_split(&alg, &theta)?;
    let z = find_z(&alg, &k, &p)?;
    HermitianPair::assemble(family, alg, k, p, z)
}

const CLOSURE_TOL: f64 = 1e-10;

impl HermitianPair {
    /// Precomputes the blocks and checks every invariant of the pair.
    pub fn assemble(
        family: Family,
        algebra: StructureAlgebra,
        k_basis: Vec<AlgebraElement>,
        p_basis: Vec<AlgebraElement>,
        z: AlgebraElement,
    ) -> Result<Self> {
        let d = algebra.dim();
        for v in k_basis.iter().chain(&p_basis).chain(std::iter::once(&z)) {
            if v.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: v.dim() });
            }
        }
        if k_basis.len() + p_basis.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: k_basis.len() + p_basis.len() });
        }
        if !algebra.is_compact() {
            return Err(Error::NotCompact { min_eigenvalue: f64::NAN });
        }
        let all: Vec<&AlgebraElement> = k_basis.iter().chain(&p_basis).collect();
        for (a, x) in all.iter().enumerate() {
            for (b, y) in all.iter().enumerate().skip(a) {
                let g = algebra.inner_vec(x.coords(), y.coords());
                let want = if a == b { 1.0 } else { 0.0 };
                if (g - want).abs() > 1e-10 {
                    return Err(Error::InvalidParameter(format!("adapted basis is not orthonormal at ({a},{b})")));
                }
            }
        }
        let n = p_basis.len();
        let dk = k_basis.len();
        let coords_in = |v: &DVector<f64>, basis: &[AlgebraElement]| -> DVector<f64> {
            DVector::from_iterator(basis.len(), basis.iter().map(|b| algebra.inner_vec(v, b.coords())))
        };
        let residual = |v: &DVector<f64>, c: &DVector<f64>, basis: &[AlgebraElement]| -> f64 {
            let mut r = v.clone();
            for (ci, b) in c.iter().zip(basis) {
                r.axpy(-ci, b.coords(), 1.0);
            }
            algebra.inner_vec(&r, &r).max(0.0).sqrt()
        };
        let mut worst = 0.0_f64;
        let mut kp = vec![DMatrix::zeros(n, n); dk];
        let mut kk = vec![DMatrix::zeros(dk, dk); dk];
        for c in 0..dk {
            for i in 0..n {
                let v = algebra.bracket_vec(k_basis[c].coords(), p_basis[i].coords());
                let coords = coords_in(&v, &p_basis);
                worst = worst.max(residual(&v, &coords, &p_basis));
                kp[c].set_column(i, &coords);
            }
            for i in 0..dk {
                let v = algebra.bracket_vec(k_basis[c].coords(), k_basis[i].coords());
                let coords = coords_in(&v, &k_basis);
                worst = worst.max(residual(&v, &coords, &k_basis));
                kk[c].set_column(i, &coords);
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let v = algebra.bracket_vec(p_basis[i].coords(), p_basis[j].coords());
                let coords = coords_in(&v, &k_basis);
                worst = worst.max(residual(&v, &coords, &k_basis));
            }
        }
        if worst > CLOSURE_TOL {
            return Err(Error::NotInvolution(format!("bracket closure residual {worst:e}")));
        }
        let z_k = coords_in(z.coords(), &k_basis);
        if residual(z.coords(), &z_k, &k_basis) > 1e-10 {
            return Err(Error::InvalidParameter("Z does not lie in k".into()));
        }
        let mut j = DMatrix::zeros(n, n);
        for (zc, block) in z_k.iter().zip(&kp) {
            j += block * *zc;
        }
        let j2_err = linalg::max_abs(&(&j * &j + DMatrix::<f64>::identity(n, n)));
        if j2_err > 1e-10 {
            return Err(Error::NotComplexStructure { min: -1.0 - j2_err, max: -1.0 + j2_err });
        }
        let z_norm = z_k.norm_squared();
        if (z_norm - n as f64).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("<Z,Z> = {z_norm} but N = {n}")));
        }
        Ok(Self { family, algebra, k_basis, p_basis, z, z_k, kp, kk, j })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn algebra(&self) -> &StructureAlgebra {
        &self.algebra
    }

    pub fn k_basis(&self) -> &[AlgebraElement] {
        &self.k_basis
    }

    pub fn p_basis(&self) -> &[AlgebraElement] {
        &self.p_basis
    }

    /// `Z` in algebra coordinates.
    pub fn z(&self) -> &AlgebraElement {
        &self.z
    }

    /// `Z` in `k_basis` coordinates.
    pub fn z_k(&self) -> &DVector<f64> {
        &self.z_k
    }

    /// `dim p`.
    #[allow(non_snake_case)]
    pub fn N(&self) -> usize {
        self.p_basis.len()
    }

    pub fn dim_k(&self) -> usize {
        self.k_basis.len()
    }

    pub fn rank(&self) -> usize {
        2
    }

    /// `+1` for each `k_basis` vector followed by `-1` for each `p_basis` vector.
    pub fn theta_signs(&self) -> Vec<i8> {
        std::iter::repeat_n(1, self.dim_k()).chain(std::iter::repeat_n(-1, self.N())).collect()
    }

    /// `kp[c] = ad_{k_c}|_p`.
    pub fn kp(&self) -> &[DMatrix<f64>] {
        &self.kp
    }

    /// `kk[c] = ad_{k_c}|_k`.
    pub fn kk(&self) -> &[DMatrix<f64>] {
        &self.kk
    }

    /// `J = ad_Z|_p`.
    pub fn j_matrix(&self) -> &DMatrix<f64> {
        &self.j
    }

    #[allow(non_snake_case)]
    pub fn J(&self, p: &PointInP) -> PointInP {
        PointInP::from_vector(&self.j * p.coords())
    }

    /// `ad_W|_p` for `W` in `k` coordinates.
    pub fn ad_k_on_p(&self, w: &DVector<f64>) -> DMatrix<f64> {
        let n = self.N();
        let mut m = DMatrix::zeros(n, n);
        for (wc, block) in w.iter().zip(&self.kp) {
            if *wc != 0.0 {
                m += block * *wc;
            }
        }
        m
    }

    /// `[W, P]` in `p` coordinates for `W` in `k` coordinates.
    pub fn bracket_kp(&self, w: &DVector<f64>, p: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.N());
        for (wc, block) in w.iter().zip(&self.kp) {
            if *wc != 0.0 {
                out.gemv(*wc, block, p, 1.0);
            }
        }
        out
    }

    /// `[P, Q]` in `k` coordinates.
    pub fn bracket_pp(&self, p: &DVector<f64>, q: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.dim_k(), self.kp.iter().map(|block| q.dot(&(block * p))))
    }

    /// `[V, W]` in `k` coordinates.
    pub fn bracket_kk(&self, v: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim_k());
        for (vc, block) in v.iter().zip(&self.kk) {
            if *vc != 0.0 {
                out.gemv(*vc, block, w, 1.0);
            }
        }
        out
    }

    /// Algebra coordinates of a point of `p`.
    pub fn embed_p(&self, p: &DVector<f64>) -> AlgebraElement {
        let mut v = DVector::zeros(self.algebra.dim());
        for (pi, b) in p.iter().zip(&self.p_basis) {
            v.axpy(*pi, b.coords(), 1.0);
        }
        AlgebraElement::from_vector(v)
    }

    /// Algebra coordinates of an element of `k` given in `k_basis` coordinates.
    pub fn embed_k(&self, w: &DVector<f64>) -> AlgebraElement {
        let mut v = DVector::zeros(self.algebra.dim());
        for (wi, b) in w.iter().zip(&self.k_basis) {
            v.axpy(*wi, b.coords(), 1.0);
        }
        AlgebraElement::from_vector(v)
    }

    /// Orthogonal projection onto `p`, in `p_basis` coordinates.
    pub fn p_coords(&self, x: &AlgebraElement) -> DVector<f64> {
        DVector::from_iterator(
            self.N(),
            self.p_basis.iter().map(|b| self.algebra.inner_vec(x.coords(), b.coords())),
        )
    }

    /// Orthogonal projection onto `k`, in `k_basis` coordinates.
    pub fn k_coords(&self, x: &AlgebraElement) -> DVector<f64> {
        DVector::from_iterator(
            self.dim_k(),
            self.k_basis.iter().map(|b| self.algebra.inner_vec(x.coords(), b.coords())),
        )
    }

    /// Largest norm of a wrong-summand component of `[X, Y]` relative to
    /// `|X||Y|` over `samples` random pairs of each kind.
    pub fn closure_residual(&self, samples: usize, seed: u64) -> f64 {
        let mut r = linalg::rng(seed);
        let mut worst = 0.0_f64;
        let alg = &self.algebra;
        let wrong = |v: &DVector<f64>, basis: &[AlgebraElement]| -> f64 {
            basis
                .iter()
                .map(|b| alg.inner_vec(v, b.coords()).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        for _ in 0..samples {
            let k1 = self.embed_k(&linalg::random_unit(&mut r, self.dim_k()));
            let k2 = self.embed_k(&linalg::random_unit(&mut r, self.dim_k()));
            let p1 = self.embed_p(&linalg::random_unit(&mut r, self.N()));
            let p2 = self.embed_p(&linalg::random_unit(&mut r, self.N()));
            worst = worst.max(wrong(&alg.bracket_vec(k1.coords(), k2.coords()), &self.p_basis));
            worst = worst.max(wrong(&alg.bracket_vec(k1.coords(), p1.coords()), &self.k_basis));
            worst = worst.max(wrong(&alg.bracket_vec(p1.coords(), p2.coords()), &self.p_basis));
        }
        worst
    }

    pub fn to_model(&self) -> ModelDocument {
        let rows = |basis: &[AlgebraElement]| basis.iter().map(|b| b.coords().iter().cloned().collect()).collect();
        ModelDocument {
            family: self.family.to_string(),
            algebra: AlgebraDocument::from_algebra(&self.algebra),
            theta: self.theta_signs(),
            z: self.z.coords().iter().cloned().collect(),
            k_basis: rows(&self.k_basis),
            p_basis: rows(&self.p_basis),
        }
    }

    /// Rebuilds a pair from an exported model, validating the algebra and
    /// every pair invariant.
    pub fn from_model(doc: &ModelDocument) -> Result<Self> {
        let family = Family::from_name(&doc.family, None)?;
        let algebra = doc.algebra.to_algebra()?;
        let dk = doc.theta.iter().filter(|&&s| s == 1).count();
        if dk != doc.k_basis.len() || doc.theta.len() != doc.k_basis.len() + doc.p_basis.len() {
            return Err(Error::Format("theta signs disagree with the k/p bases".into()));
        }
        let elements = |rows: &[Vec<f64>]| rows.iter().map(|r| AlgebraElement::new(r.clone())).collect();
        Self::assemble(
            family,
            algebra,
            elements(&doc.k_basis),
            elements(&doc.p_basis),
            AlgebraElement::new(doc.z.clone()),
        )
    }
}

/// Exported pair: the structure-constant document extended by the
/// involution signs, `Z` and the adapted bases (all in algebra coordinates).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub family: String,
    #[serde(flatten)]
    pub algebra: AlgebraDocument,
    pub theta: Vec<i8>,
    #[serde(rename = "Z")]
    pub z: Vec<f64>,
    pub k_basis: Vec<Vec<f64>>,
    pub p_basis: Vec<Vec<f64>>,
}
