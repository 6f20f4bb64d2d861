//! The moment map `μ(P) = ½[P,[P,Z]]`, the weighted squared norm
//! `f_{a,b} = |μ|²_{a,b}`, its derivatives, and finite-difference oracles.
//!
//! All gradients and Laplacians are with respect to the orthonormal
//! `p_basis`, i.e. the metric `<,> = -B`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::{AlgebraElement, Rational};
use crate::symspace::{HermitianPair, PointInP};

/// The weights of `|X|²_{a,b} = a|π1 X|² + b|π2 X|²`, where `π1` projects onto `RZ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedNormParams {
    pub a: f64,
    pub b: f64,
}

impl WeightedNormParams {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }
}

/// The exact pair `a = -8(m1 + 2 m2)`, `b = 8(2 m1 + m2 + 3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuenznerCoefficients {
    pub a: Rational,
    pub b: Rational,
    pub m1: usize,
    pub m2: usize,
}

pub fn muenzner_coefficients(m1: usize, m2: usize) -> Result<MuenznerCoefficients> {
    if m1 < 1 || m2 < 1 {
        return Err(Error::InvalidParameter(format!("multiplicities must be positive, got ({m1}, {m2})")));
    }
    let (x, y) = (m1 as i64, m2 as i64);
    Ok(MuenznerCoefficients {
        a: Rational::from_integer(-8 * (x + 2 * y)),
        b: Rational::from_integer(8 * (2 * x + y + 3)),
        m1,
        m2,
    })
}

impl MuenznerCoefficients {
    pub fn params(&self) -> WeightedNormParams {
        let f = |r: Rational| *r.numer() as f64 / *r.denom() as f64;
        WeightedNormParams::new(f(self.a), f(self.b))
    }
}

/// `μ(P) = ½[J(P), P]` in `k_basis` coordinates.
pub fn mu(pair: &HermitianPair, p: &PointInP) -> DVector<f64> {
    mu_vec(pair, p.coords())
}

pub(crate) fn mu_vec(pair: &HermitianPair, p: &DVector<f64>) -> DVector<f64> {
    let jp = pair.j_matrix() * p;
    pair.bracket_pp(&jp, p) * 0.5
}

/// `½[P,[P,Z]]` evaluated with the structure constants of `g`, in algebra coordinates.
pub fn mu_in_algebra(pair: &HermitianPair, p: &PointInP) -> AlgebraElement {
    let alg = pair.algebra();
    let x = pair.embed_p(p.coords());
    let pz = alg.bracket_vec(x.coords(), pair.z().coords());
    AlgebraElement::from_vector(alg.bracket_vec(x.coords(), &pz) * 0.5)
}

/// `ω(X, Y) = <J X, Y>`.
pub fn omega(pair: &HermitianPair, x: &PointInP, y: &PointInP) -> f64 {
    pair.J(x).coords().dot(y.coords())
}

/// `a|π1 W|² + b|π2 W|²` for `W` in `k_basis` coordinates.
pub fn weighted_norm_sq(pair: &HermitianPair, w: &DVector<f64>, params: WeightedNormParams) -> f64 {
    let z = pair.z_k();
    let n = pair.N() as f64;
    let pi1 = z * (w.dot(z) / n);
    let pi2 = w - &pi1;
    params.a * pi1.norm_squared() + params.b * pi2.norm_squared()
}

/// `f_{a,b}(P) = |μ(P)|²_{a,b}` by definition.
pub fn f_ab(pair: &HermitianPair, p: &PointInP, params: WeightedNormParams) -> f64 {
    weighted_norm_sq(pair, &mu(pair, p), params)
}

/// `f_{a,b}(P) = b|μ(P)|² + (a - b)/(4N) |P|⁴`.
pub fn f_ab_closed(pair: &HermitianPair, p: &PointInP, params: WeightedNormParams) -> f64 {
    f_closed_vec(pair, p.coords(), params)
}

pub(crate) fn f_closed_vec(pair: &HermitianPair, p: &DVector<f64>, params: WeightedNormParams) -> f64 {
    let WeightedNormParams { a, b } = params;
    let n = pair.N() as f64;
    b * mu_vec(pair, p).norm_squared() + (a - b) / (4.0 * n) * p.norm_squared().powi(2)
}

/// `grad f = 2b[μ(P), J(P)] + (a - b)|P|²/N · P`.
pub fn grad_f(pair: &HermitianPair, p: &PointInP, params: WeightedNormParams) -> PointInP {
    PointInP::from_vector(grad_vec(pair, p.coords(), params))
}

pub(crate) fn grad_vec(pair: &HermitianPair, p: &DVector<f64>, params: WeightedNormParams) -> DVector<f64> {
    let WeightedNormParams { a, b } = params;
    let n = pair.N() as f64;
    let jp = pair.j_matrix() * p;
    let m = mu_vec(pair, p);
    pair.bracket_kp(&m, &jp) * (2.0 * b) + p * ((a - b) * p.norm_squared() / n)
}

/// `[J(P), μ(P)]` in `p_basis` coordinates.
pub fn j_mu_bracket(pair: &HermitianPair, p: &PointInP) -> DVector<f64> {
    let jp = pair.J(p).into_vector();
    -pair.bracket_kp(&mu(pair, p), &jp)
}

/// `|grad f|²` from `|[J(P), μ]|²`, `|P|²|μ|²` and `|P|⁶`.
pub fn grad_norm_sq(pair: &HermitianPair, p: &PointInP, params: WeightedNormParams) -> f64 {
    let WeightedNormParams { a, b } = params;
    let n = pair.N() as f64;
    let jmu = j_mu_bracket(pair, p).norm_squared();
    let pp = p.coords().norm_squared();
    let mm = mu(pair, p).norm_squared();
    4.0 * b * b * jmu + 8.0 * b * (a - b) / n * pp * mm + (a - b).powi(2) / (n * n) * pp.powi(3)
}

/// The rank-two coefficients `(A, B)` of `|grad f|² = A|P|⁶ + B|P|²|μ|²`.
pub fn rank2_gradient_coefficients(params: WeightedNormParams, m1: usize, m2: usize) -> (f64, f64) {
    let WeightedNormParams { a, b } = params;
    let s = (2 * m1 + m2 + 3) as f64;
    let t = (m1 + m2 + 1) as f64;
    let big_a = -2.0 * b * b / (s * s) + (a - b).powi(2) / (4.0 * t * t);
    let big_b = 12.0 * b * b / s + 4.0 * b * (a - b) / t;
    (big_a, big_b)
}

/// `|grad f|²` in the rank-two form, for multiplicities `(m1, m2)`.
pub fn grad_norm_sq_rank2(pair: &HermitianPair, p: &PointInP, params: WeightedNormParams, m1: usize, m2: usize) -> f64 {
    let (big_a, big_b) = rank2_gradient_coefficients(params, m1, m2);
    let pp = p.coords().norm_squared();
    big_a * pp.powi(3) + big_b * pp * mu(pair, p).norm_squared()
}

/// Right-hand side `-2|H_ε|⁴|P|⁶ + 6|H_ε|²|P|²|μ|²` of the rank-two identity for `|[J(P), μ]|²`.
pub fn j_mu_rank2(pair: &HermitianPair, p: &PointInP, heps_norm_sq: f64) -> f64 {
    let pp = p.coords().norm_squared();
    let h = heps_norm_sq;
    -2.0 * h * h * pp.powi(3) + 6.0 * h * pp * mu(pair, p).norm_squared()
}

/// Analytic Hessian
/// `2b(ad_μ J + Σ_c v_c v_c^T) + (a - b)/(4N)(8 P P^T + 4|P|² I)` with `v_c = kp[c] J(P)`.
pub fn hessian_f(pair: &HermitianPair, p: &PointInP, params: WeightedNormParams) -> DMatrix<f64> {
    let WeightedNormParams { a, b } = params;
    let p = p.coords();
    let n = pair.N();
    let nf = n as f64;
    let jp = pair.j_matrix() * p;
    let m = mu_vec(pair, p);
    let mut h = pair.ad_k_on_p(&m) * pair.j_matrix();
    for block in pair.kp() {
        let v = block * &jp;
        h.ger(1.0, &v, &v, 1.0);
    }
    h *= 2.0 * b;
    let c = (a - b) / (4.0 * nf);
    h.ger(8.0 * c, p, p, 1.0);
    for i in 0..n {
        h[(i, i)] += 4.0 * c * p.norm_squared();
    }
    h
}

/// `Δf` as the trace of the analytic Hessian.
pub fn laplacian_f(pair: &HermitianPair, p: &PointInP, params: WeightedNormParams) -> f64 {
    hessian_f(pair, p, params).trace()
}

/// `Δf = ((N + 2)a + (N - 2)b)/N |P|²`.
pub fn laplacian_formula(n: usize, p: &PointInP, params: WeightedNormParams) -> f64 {
    let nf = n as f64;
    ((nf + 2.0) * params.a + (nf - 2.0) * params.b) / nf * p.coords().norm_squared()
}

/// `Δf = ((m1 + m2 + 2)a + (m1 + m2)b)/(m1 + m2 + 1) |P|²`.
pub fn laplacian_rank2(m1: usize, m2: usize, p: &PointInP, params: WeightedNormParams) -> f64 {
    let s = (m1 + m2) as f64;
    ((s + 2.0) * params.a + s * params.b) / (s + 1.0) * p.coords().norm_squared()
}

/// Exact coefficient of `|P|²` in the general Laplacian formula.
pub fn laplacian_formula_exact(n: usize, a: Rational, b: Rational) -> Rational {
    let nr = Rational::from_integer(n as i64);
    ((nr + 2) * a + (nr - 2) * b) / nr
}

/// Exact coefficient of `|P|²` in the rank-two Laplacian formula.
pub fn laplacian_rank2_exact(m1: usize, m2: usize, a: Rational, b: Rational) -> Rational {
    let s = Rational::from_integer((m1 + m2) as i64);
    ((s + 2) * a + s * b) / (s + 1)
}

/// Central-difference gradient with step `h` along each coordinate; error `O(h²)`.
pub fn numeric_gradient(f: &dyn Fn(&DVector<f64>) -> f64, p: &DVector<f64>, h: f64) -> DVector<f64> {
    let mut g = DVector::zeros(p.len());
    let mut x = p.clone();
    for i in 0..p.len() {
        x[i] = p[i] + h;
        let fp = f(&x);
        x[i] = p[i] - h;
        let fm = f(&x);
        x[i] = p[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    g
}

/// Sum of second central differences; error `O(h²)`.
pub fn numeric_laplacian(f: &dyn Fn(&DVector<f64>) -> f64, p: &DVector<f64>, h: f64) -> f64 {
    let f0 = f(p);
    let mut x = p.clone();
    let mut acc = 0.0;
    for i in 0..p.len() {
        x[i] = p[i] + h;
        let fp = f(&x);
        x[i] = p[i] - h;
        let fm = f(&x);
        x[i] = p[i];
        acc += (fp - 2.0 * f0 + fm) / (h * h);
    }
    acc
}

/// Second central differences for every entry; error `O(h²)`.
pub fn numeric_hessian(f: &dyn Fn(&DVector<f64>) -> f64, p: &DVector<f64>, h: f64) -> DMatrix<f64> {
    let n = p.len();
    let f0 = f(p);
    let mut x = p.clone();
    let mut out = DMatrix::zeros(n, n);
    let shifted = |x: &mut DVector<f64>, i: usize, si: f64, j: usize, sj: f64| -> f64 {
        x[i] += si;
        x[j] += sj;
        let v = f(x);
        x[i] -= si;
        x[j] -= sj;
        v
    };
    for i in 0..n {
        let fp = shifted(&mut x, i, h, i, 0.0);
        let fm = shifted(&mut x, i, -h, i, 0.0);
        out[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in (i + 1)..n {
            let v = (shifted(&mut x, i, h, j, h) - shifted(&mut x, i, h, j, -h) - shifted(&mut x, i, -h, j, h)
                + shifted(&mut x, i, -h, j, -h))
                / (4.0 * h * h);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

/// Richardson extrapolation of [`numeric_hessian`] from steps `h` and `h/2`,
/// cancelling the `h²` term; exact up to round-off for polynomials of degree
/// at most five.
pub fn numeric_hessian_richardson(f: &dyn Fn(&DVector<f64>) -> f64, p: &DVector<f64>, h: f64) -> DMatrix<f64> {
    let coarse = numeric_hessian(f, p, h);
    let fine = numeric_hessian(f, p, h / 2.0);
    (fine * 4.0 - coarse) / 3.0
}

fn unit_and_norm(p: &DVector<f64>) -> Option<(DVector<f64>, f64)> {
    let r = p.norm();
    (r > 0.0).then(|| (p / r, r))
}

/// Gradient of a homogeneous function of degree `degree`: differenced at
/// `P/|P|` and rescaled by `|P|^(degree - 1)`.
pub fn numeric_gradient_homogeneous(
    f: &dyn Fn(&DVector<f64>) -> f64,
    p: &DVector<f64>,
    h: f64,
    degree: i32,
) -> DVector<f64> {
    match unit_and_norm(p) {
        Some((u, r)) => numeric_gradient(f, &u, h) * r.powi(degree - 1),
        None => numeric_gradient(f, p, h),
    }
}

/// Laplacian of a homogeneous function, differenced at `P/|P|` and rescaled by `|P|^(degree - 2)`.
pub fn numeric_laplacian_homogeneous(f: &dyn Fn(&DVector<f64>) -> f64, p: &DVector<f64>, h: f64, degree: i32) -> f64 {
    match unit_and_norm(p) {
        Some((u, r)) => numeric_laplacian(f, &u, h) * r.powi(degree - 2),
        None => numeric_laplacian(f, p, h),
    }
}

/// Richardson-extrapolated Hessian of a homogeneous function, rescaled by `|P|^(degree - 2)`.
pub fn numeric_hessian_homogeneous(
    f: &dyn Fn(&DVector<f64>) -> f64,
    p: &DVector<f64>,
    h: f64,
    degree: i32,
) -> DMatrix<f64> {
    match unit_and_norm(p) {
        Some((u, r)) => numeric_hessian_richardson(f, &u, h) * r.powi(degree - 2),
        None => numeric_hessian_richardson(f, p, h),
    }
}
