//! Restricted roots of a rank-two Hermitian pair.
//!
//! For an orthonormal basis `A1, A2` of a maximal abelian subspace `a` of `p`
//! the operators `-(ad_{A1})²`, `-(ad_{A2})²` and `-ad_{A1} ad_{A2}` commute
//! and act on each root space `k_α`, `p_α` by `α(A1)²`, `α(A2)²` and
//! `α(A1) α(A2)`. They are diagonalized jointly through one generic
//! combination, on `k` and on `p` separately.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, sorted_symmetric_eigen};
use crate::symspace::HermitianPair;

/// Retry budget for drawing a regular element.
pub const REGULAR_ATTEMPTS: usize = 16;

/// Eigenvalues closer than this are merged into one joint eigenspace.
pub const CLUSTER_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootType {
    C2,
    BC2,
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootType::C2 => "C2",
            RootType::BC2 => "BC2",
        })
    }
}

/// A positive restricted root with its root spaces.
#[derive(Clone, Debug)]
pub struct Root {
    /// `(α(A1), α(A2))`
    pub alpha: [f64; 2],
    /// Integer coordinates with respect to `(ε1, ε2)`.
    pub eps_coords: (i32, i32),
    pub multiplicity: usize,
    /// Orthonormal columns in `k_basis` coordinates.
    pub k_space: DMatrix<f64>,
    /// Orthonormal columns in `p_basis` coordinates.
    pub p_space: DMatrix<f64>,
}

#[derive(Clone, Debug)]
pub struct RestrictedRootSystem {
    /// `A1, A2` in `p_basis` coordinates.
    pub abelian_basis: [DVector<f64>; 2],
    /// Positive roots ordered as ε1+ε2, ε1-ε2 (or ε2-ε1), 2ε1, 2ε2, then ε1, ε2 when present.
    pub roots: Vec<Root>,
    /// Orthonormal basis of `k_0`, in `k_basis` coordinates.
    pub k0: DMatrix<f64>,
    /// Orthonormal basis of `p_0 = a`, in `p_basis` coordinates.
    pub p0: DMatrix<f64>,
    pub type_tag: RootType,
    /// `ε1, ε2` as covectors `(ε(A1), ε(A2))`.
    pub eps: [[f64; 2]; 2],
    pub m1: usize,
    pub m2: usize,
}

/// `U = [kp[c] x]_c`, an `N x dim k` matrix with `[x, Q] = U^T Q` for `Q` in `p`.
fn action_matrix(pair: &HermitianPair, x: &DVector<f64>) -> DMatrix<f64> {
    let mut u = DMatrix::zeros(pair.N(), pair.dim_k());
    for (c, block) in pair.kp().iter().enumerate() {
        u.set_column(c, &(block * x));
    }
    u
}

/// A seeded orthonormal basis `A1, A2` of a maximal abelian subspace, in
/// `p_basis` coordinates.
///
/// A random unit `P` is regular when the kernel of `-(ad_P)²|_p` is exactly
/// two-dimensional; that kernel is then the centralizer of `P` in `p`, and
/// `A1 = P`.
pub fn maximal_abelian(pair: &HermitianPair, seed: u64) -> Result<(DVector<f64>, DVector<f64>)> {
    let n = pair.N();
    let mut r = linalg::rng(seed);
    for _ in 0..REGULAR_ATTEMPTS {
        let p = linalg::random_unit(&mut r, n);
        let u = action_matrix(pair, &p);
        let t = &u * u.transpose();
        let (vals, vecs) = sorted_symmetric_eigen(&t);
        let top = vals[n - 1].max(f64::MIN_POSITIVE);
        let kernel = vals.iter().filter(|v| v.abs() <= 1e-10 * top).count();
        if kernel != pair.rank() || vals[pair.rank()] <= 1e-6 * top {
            continue;
        }
        // complement of P inside the kernel
        let mut best = DVector::zeros(n);
        for c in 0..kernel {
            let mut v = vecs.column(c).into_owned();
            v.axpy(-p.dot(&v), &p, 1.0);
            if v.norm() > best.norm() {
                best = v;
            }
        }
        let mut a2 = best.normalize();
        a2.axpy(-p.dot(&a2), &p, 1.0);
        let a2 = a2.normalize();
        if pair.bracket_pp(&p, &a2).norm() > 1e-11 {
            continue;
        }
        return Ok((p, a2));
    }
    Err(Error::NoRegularElement { attempts: REGULAR_ATTEMPTS })
}

/// A joint eigenspace: eigenvalues `(u, v, w)` of `(T1, T2, S)` and its basis.
struct Cluster {
    values: [f64; 3],
    basis: DMatrix<f64>,
}

/// Joint eigenspaces of the commuting symmetric operators `ops`.
fn joint_eigenspaces(ops: &[DMatrix<f64>; 3]) -> Result<Vec<Cluster>> {
    // generic weights so that distinct joint eigenvalues stay distinct
    let generic = &ops[0] + &ops[1] * 0.754_877_666_246_692_7 + &ops[2] * 0.577_215_664_901_532_9;
    let (vals, vecs) = sorted_symmetric_eigen(&generic);
    let n = vals.len();
    let scale = ops.iter().map(linalg::max_abs).fold(1e-300, f64::max);
    let mut clusters = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals[end] - vals[end - 1] <= CLUSTER_TOL {
            end += 1;
        }
        let basis = vecs.columns(start, end - start).into_owned();
        let m = (end - start) as f64;
        let mut values = [0.0; 3];
        for (slot, op) in values.iter_mut().zip(ops) {
            let value = (basis.transpose() * op * &basis).trace() / m;
            let err = linalg::max_abs(&(op * &basis - &basis * value));
            if err > 1e-7 * scale {
                return Err(Error::RootSystem(format!(
                    "eigenspace of dimension {} is not a joint eigenspace (defect {err:e})",
                    end - start
                )));
            }
            *slot = value;
        }
        clusters.push(Cluster { values, basis });
        start = end;
    }
    Ok(clusters)
}

fn root_from_values(values: [f64; 3]) -> [f64; 2] {
    let a1 = values[0].max(0.0).sqrt();
    let a2 = values[1].max(0.0).sqrt() * if values[2] < 0.0 { -1.0 } else { 1.0 };
    // positive system: α(A1 + π A2) > 0
    if a1 + PI * a2 < 0.0 {
        [-a1, -a2]
    } else {
        [a1, a2]
    }
}

fn is_zero_root(values: &[f64; 3], scale: f64) -> bool {
    values.iter().all(|v| v.abs() <= 1e-6 * scale)
}

/// Computes the restricted root system for the abelian basis `(A1, A2)`.
pub fn compute_roots(pair: &HermitianPair, abelian: &(DVector<f64>, DVector<f64>)) -> Result<RestrictedRootSystem> {
    let (a1, a2) = abelian;
    let n = pair.N();
    if a1.len() != n || a2.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a1.len() });
    }
    if (a1.norm() - 1.0).abs() > 1e-10 || (a2.norm() - 1.0).abs() > 1e-10 || a1.dot(a2).abs() > 1e-10 {
        return Err(Error::RootSystem("abelian basis is not orthonormal".into()));
    }
    if pair.bracket_pp(a1, a2).norm() > 1e-10 {
        return Err(Error::RootSystem("abelian basis does not commute".into()));
    }
    let u1 = action_matrix(pair, a1);
    let u2 = action_matrix(pair, a2);
    let sym = |m: DMatrix<f64>| (&m + m.transpose()) * 0.5;
    let p_ops = [&u1 * u1.transpose(), &u2 * u2.transpose(), sym(&u1 * u2.transpose())];
    let k_ops = [u1.transpose() * &u1, u2.transpose() * &u2, sym(u1.transpose() * &u2)];
    let p_clusters = joint_eigenspaces(&p_ops)?;
    let k_clusters = joint_eigenspaces(&k_ops)?;
    let scale = p_ops[0].trace().max(p_ops[1].trace()).max(1e-300) / n as f64;

    let mut p0 = None;
    let mut k0 = None;
    let mut roots: Vec<Root> = Vec::new();
    let mut used_k = vec![false; k_clusters.len()];
    for pc in p_clusters {
        if is_zero_root(&pc.values, scale) {
            p0 = Some(pc.basis);
            continue;
        }
        let matched = k_clusters.iter().enumerate().position(|(idx, kc)| {
            !used_k[idx] && kc.values.iter().zip(&pc.values).all(|(x, y)| (x - y).abs() <= 1e-6 * scale)
        });
        let Some(idx) = matched else {
            return Err(Error::RootSystem(format!("no k-side eigenspace matches {:?}", pc.values)));
        };
        used_k[idx] = true;
        let kc = &k_clusters[idx];
        if kc.basis.ncols() != pc.basis.ncols() {
            return Err(Error::RootSystem(format!(
                "dim k_α = {} but dim p_α = {}",
                kc.basis.ncols(),
                pc.basis.ncols()
            )));
        }
        roots.push(Root {
            alpha: root_from_values(pc.values),
            eps_coords: (0, 0),
            multiplicity: pc.basis.ncols(),
            k_space: kc.basis.clone(),
            p_space: pc.basis,
        });
    }
    for (idx, kc) in k_clusters.iter().enumerate() {
        if used_k[idx] {
            continue;
        }
        if is_zero_root(&kc.values, scale) && k0.is_none() {
            k0 = Some(kc.basis.clone());
        } else {
            return Err(Error::RootSystem(format!("k-side eigenspace {:?} has no p-side partner", kc.values)));
        }
    }
    let p0 = p0.ok_or_else(|| Error::RootSystem("no zero eigenspace on p".into()))?;
    if p0.ncols() != pair.rank() {
        return Err(Error::RootSystem(format!("dim p_0 = {} is not the rank", p0.ncols())));
    }
    let k0 = k0.unwrap_or_else(|| DMatrix::zeros(pair.dim_k(), 0));

    // 2ε1, 2ε2: the two longest roots, which must be orthogonal
    let len2 = |a: &[f64; 2]| a[0] * a[0] + a[1] * a[1];
    let mut by_length: Vec<usize> = (0..roots.len()).collect();
    by_length.sort_by(|&x, &y| len2(&roots[y].alpha).total_cmp(&len2(&roots[x].alpha)));
    if roots.len() < 4 {
        return Err(Error::RootSystem(format!("only {} positive roots", roots.len())));
    }
    let (l0, l1) = (roots[by_length[0]].alpha, roots[by_length[1]].alpha);
    let dot = l0[0] * l1[0] + l0[1] * l1[1];
    if (len2(&l0) - len2(&l1)).abs() > 1e-6 * len2(&l0) || dot.abs() > 1e-6 * len2(&l0) {
        return Err(Error::RootSystem("longest roots are not an orthogonal pair of equal length".into()));
    }
    let mut eps = [[l0[0] / 2.0, l0[1] / 2.0], [l1[0] / 2.0, l1[1] / 2.0]];
    if (eps[1][0], eps[1][1]) < (eps[0][0], eps[0][1]) {
        eps.swap(0, 1);
    }
    let eps_norm = len2(&eps[0]);
    for root in &mut roots {
        let c: Vec<f64> =
            eps.iter().map(|e| (root.alpha[0] * e[0] + root.alpha[1] * e[1]) / eps_norm).collect();
        let rounded: Vec<i32> = c.iter().map(|x| x.round() as i32).collect();
        if c.iter().zip(&rounded).any(|(x, r)| (x - *r as f64).abs() > 1e-6) {
            return Err(Error::RootSystem(format!("root {:?} is not integral in ε-coordinates", root.alpha)));
        }
        root.eps_coords = (rounded[0], rounded[1]);
    }
    let has = |target: (i32, i32)| -> bool {
        roots.iter().any(|r| r.eps_coords == target || r.eps_coords == (-target.0, -target.1))
    };
    let allowed = [(1, 1), (1, -1), (2, 0), (0, 2), (1, 0), (0, 1)];
    for r in &roots {
        if !allowed.iter().any(|&t| r.eps_coords == t || r.eps_coords == (-t.0, -t.1)) {
            return Err(Error::RootSystem(format!("root {:?} outside the BC2 pattern", r.eps_coords)));
        }
    }
    for required in [(1, 1), (1, -1), (2, 0), (0, 2)] {
        if !has(required) {
            return Err(Error::RootSystem(format!("missing root {required:?}")));
        }
    }
    let type_tag = match (has((1, 0)), has((0, 1))) {
        (true, true) => RootType::BC2,
        (false, false) => RootType::C2,
        _ => return Err(Error::RootSystem("only one of ε1, ε2 is a root".into())),
    };
    let rank_order = |c: (i32, i32)| -> usize {
        let pos = [(1, 1), (1, -1), (2, 0), (0, 2), (1, 0), (0, 1)]
            .iter()
            .position(|&t| c == t || c == (-t.0, -t.1));
        pos.unwrap_or(usize::MAX)
    };
    roots.sort_by_key(|r| rank_order(r.eps_coords));

    let mult = |c: (i32, i32)| -> usize {
        roots
            .iter()
            .find(|r| r.eps_coords == c || r.eps_coords == (-c.0, -c.1))
            .map_or(0, |r| r.multiplicity)
    };
    let m1 = mult((1, 1));
    let m2 = mult((1, 0)) + mult((2, 0));
    Ok(RestrictedRootSystem {
        abelian_basis: [a1.clone(), a2.clone()],
        roots,
        k0,
        p0,
        type_tag,
        eps,
        m1,
        m2,
    })
}

impl RestrictedRootSystem {
    /// The positive root `±c` for ε-coordinates `c`, with the sign that maps it to `c`.
    fn find(&self, c: (i32, i32)) -> Option<(&Root, f64)> {
        self.roots.iter().find_map(|r| {
            if r.eps_coords == c {
                Some((r, 1.0))
            } else if r.eps_coords == (-c.0, -c.1) {
                Some((r, -1.0))
            } else {
                None
            }
        })
    }

    /// Multiplicity of the root with ε-coordinates `c` (zero if `c` is not a root).
    pub fn multiplicity(&self, c: (i32, i32)) -> usize {
        self.find(c).map_or(0, |(r, _)| r.multiplicity)
    }

    pub fn root(&self, c: (i32, i32)) -> Option<&Root> {
        self.find(c).map(|(r, _)| r)
    }

    /// Root vector `H_α = α(A1) A1 + α(A2) A2` in `p_basis` coordinates.
    pub fn root_vector(&self, c: (i32, i32)) -> Result<DVector<f64>> {
        let [e1, e2] = self.eps;
        let (x, y) = (c.0 as f64, c.1 as f64);
        if self.find(c).is_none() && !matches!(c, (1, 0) | (0, 1) | (-1, 0) | (0, -1)) {
            return Err(Error::UnknownRoot(c));
        }
        // ε-roots are kept available in C2 as well, where they have multiplicity zero
        let alpha = [x * e1[0] + y * e2[0], x * e1[1] + y * e2[1]];
        Ok(&self.abelian_basis[0] * alpha[0] + &self.abelian_basis[1] * alpha[1])
    }

    /// `H_{ε_i}` for `i` in `{1, 2}`.
    pub fn h_eps(&self, i: usize) -> DVector<f64> {
        let c = if i == 1 { (1, 0) } else { (0, 1) };
        self.root_vector(c).expect("ε roots are always available")
    }

    /// `|H_{ε1}|²`.
    pub fn heps_norm_sq(&self) -> f64 {
        self.eps[0][0].powi(2) + self.eps[0][1].powi(2)
    }

    /// Sum of all positive-root multiplicities.
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

/// Components of `Z` in `k_0`, `k_{2ε1}`, `k_{2ε2}`, in `k_basis` coordinates.
#[derive(Clone, Debug)]
pub struct ZDecomposition {
    pub z0: DVector<f64>,
    pub z_2e1: DVector<f64>,
    pub z_2e2: DVector<f64>,
    /// Norm of the part of `Z` in all other root spaces.
    pub residual_norm: f64,
}

/// Orthogonal projection of `Z` onto `k_0 + k_{2ε1} + k_{2ε2}`.
pub fn decompose_z(pair: &HermitianPair, rrs: &RestrictedRootSystem) -> Result<ZDecomposition> {
    let z = pair.z_k();
    let project = |basis: &DMatrix<f64>| basis * (basis.transpose() * z);
    let space = |c| rrs.root(c).map(|r| r.k_space.clone()).ok_or(Error::UnknownRoot(c));
    let z0 = project(&rrs.k0);
    let z_2e1 = project(&space((2, 0))?);
    let z_2e2 = project(&space((0, 2))?);
    let residual_norm = (z - &z0 - &z_2e1 - &z_2e2).norm();
    if residual_norm > 1e-6 * z.norm() {
        return Err(Error::ZDecomposition { residual: residual_norm });
    }
    Ok(ZDecomposition { z0, z_2e1, z_2e2, residual_norm })
}
