//! Range of `f_{a,b}` on the unit sphere of `p` and the principal
//! curvatures of its level hypersurfaces.
//!
//! For `v` tangent to a level set at `x` the shape operator is
//! `A v = -(D_v ν)^T = (T^T H T - <grad f, x> I) v / |grad_S f|` with
//! `ν = -grad_S f / |grad_S f|`, `grad_S` the gradient along the sphere and
//! `T` an orthonormal frame of the tangent space.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{CheckConfig, CheckId, CheckResult};
use crate::error::{Error, Result};
use crate::linalg::{null_space, random_unit, rng, sorted_symmetric_eigen};
use crate::moment::{self, WeightedNormParams};
use crate::roots::RestrictedRootSystem;
use crate::symspace::{HermitianPair, PointInP};

/// Sorted eigenvalues further apart than this start a new cluster.
pub const CLUSTER_GAP: f64 = 1e-4;

const ASCENT_STEP: f64 = 0.1;
const ASCENT_ITERATIONS: usize = 200;
const ASCENT_STARTS: usize = 4;
const LEVEL_TOL: f64 = 1e-12;
const LEVEL_ATTEMPTS: usize = 32;
const SCAN_STEPS: usize = 64;
const FOCAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSpectrum {
    pub level_value: f64,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// `(mean value, multiplicity)`, descending.
    pub clusters: Vec<(f64, usize)>,
}

impl CurvatureSpectrum {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.1).collect()
    }

    /// Largest spread `max - min` inside one cluster.
    pub fn spread(&self) -> f64 {
        let mut start = 0;
        let mut worst = 0.0f64;
        for &(_, m) in &self.clusters {
            let part = &self.eigenvalues[start..start + m];
            worst = worst.max(part[0] - part[m - 1]);
            start += m;
        }
        worst
    }
}

/// Groups a descending list wherever consecutive values differ by more than `gap`.
pub fn cluster_eigenvalues(sorted_desc: &[f64], gap: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut group: Vec<f64> = Vec::new();
    for &v in sorted_desc {
        if let Some(&last) = group.last() {
            if last - v > gap {
                out.push((group.iter().sum::<f64>() / group.len() as f64, group.len()));
                group.clear();
            }
        }
        group.push(v);
    }
    if !group.is_empty() {
        out.push((group.iter().sum::<f64>() / group.len() as f64, group.len()));
    }
    out
}

fn f_at(pair: &HermitianPair, w: WeightedNormParams, x: &DVector<f64>) -> f64 {
    moment::f_closed_vec(pair, x, w)
}

/// Gradient of `f` restricted to the sphere at the unit point `x`.
fn sphere_gradient(pair: &HermitianPair, w: WeightedNormParams, x: &DVector<f64>) -> DVector<f64> {
    let g = moment::grad_vec(pair, x, w);
    let radial = g.dot(x);
    g - x * radial
}

/// Projected gradient ascent (`sign = 1`) or descent (`sign = -1`) with backtracking.
fn climb(pair: &HermitianPair, w: WeightedNormParams, start: &DVector<f64>, sign: f64) -> Result<(f64, DVector<f64>)> {
    let mut x = start.normalize();
    let mut fx = f_at(pair, w, &x);
    for _ in 0..ASCENT_ITERATIONS {
        let g = sphere_gradient(pair, w, &x);
        let gg = g.norm_squared();
        if gg < 1e-24 {
            break;
        }
        let mut step = ASCENT_STEP;
        let mut moved = false;
        while step > 1e-14 {
            let y = (&x + &g * (sign * step)).normalize();
            let fy = f_at(pair, w, &y);
            if sign * (fy - fx) >= 1e-4 * step * gg {
                x = y;
                fx = fy;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    if !fx.is_finite() {
        return Err(Error::Divergence("non-finite value during projected ascent".into()));
    }
    let residual = sphere_gradient(pair, w, &x).norm();
    if residual > 1e-4 * (1.0 + fx.abs()) {
        return Err(Error::Divergence(format!("projected gradient {residual:e} after {ASCENT_ITERATIONS} iterations")));
    }
    Ok((fx, x))
}

/// `(min, max)` of `f` on the unit sphere: seeded sampling, then projected
/// ascent and descent from the best samples.
pub fn sphere_range(pair: &HermitianPair, params: WeightedNormParams, samples: usize, seed: u64) -> Result<(f64, f64)> {
    let mut r = rng(seed);
    let mut pts: Vec<(f64, DVector<f64>)> = (0..samples.max(1))
        .map(|_| {
            let x = random_unit(&mut r, pair.N());
            (f_at(pair, params, &x), x)
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let starts = ASCENT_STARTS.min(pts.len());
    let mut lo = pts[0].0;
    let mut hi = pts[pts.len() - 1].0;
    for (_, x) in pts.iter().take(starts) {
        lo = lo.min(climb(pair, params, x, -1.0)?.0);
    }
    for (_, x) in pts.iter().rev().take(starts) {
        hi = hi.max(climb(pair, params, x, 1.0)?.0);
    }
    Ok((lo, hi))
}

/// Moves a random point onto `{f = c}` by bisection along the great circle
/// leaving it in the direction of the sphere gradient.
fn level_point(pair: &HermitianPair, w: WeightedNormParams, c: f64, r: &mut rand_chacha::ChaCha8Rng) -> Result<DVector<f64>> {
    for _ in 0..LEVEL_ATTEMPTS {
        let p0 = random_unit(r, pair.N());
        let f0 = f_at(pair, w, &p0);
        let g = sphere_gradient(pair, w, &p0);
        if g.norm() < FOCAL_TOL {
            continue;
        }
        let d = &g / g.norm();
        let s = if c >= f0 { 1.0 } else { -1.0 };
        let curve = |phi: f64| &p0 * phi.cos() + &d * (s * phi.sin());
        let h = |phi: f64| f_at(pair, w, &curve(phi)) - c;
        let mut lo = 0.0;
        let mut hlo = f0 - c;
        let mut bracket = None;
        for k in 1..=SCAN_STEPS {
            let phi = k as f64 * std::f64::consts::FRAC_PI_2 / SCAN_STEPS as f64;
            let hv = h(phi);
            if hv == 0.0 || hv.signum() != hlo.signum() {
                bracket = Some((lo, phi));
                break;
            }
            lo = phi;
            hlo = hv;
        }
        let Some((mut a, mut b)) = bracket else { continue };
        let mut x = curve(b);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            let hm = h(mid);
            x = curve(mid);
            if hm.abs() <= LEVEL_TOL {
                break;
            }
            if hm.signum() == hlo.signum() {
                a = mid;
            } else {
                b = mid;
            }
        }
        if (f_at(pair, w, &x) - c).abs() > 10.0 * LEVEL_TOL {
            continue;
        }
        if sphere_gradient(pair, w, &x).norm() < FOCAL_TOL {
            continue;
        }
        return Ok(x);
    }
    Err(Error::LevelSet(format!("no point on the level {c} after {LEVEL_ATTEMPTS} attempts")))
}

/// Principal curvatures, descending, of the level hypersurface through the
/// unit point `x`, for the unit normal `-grad f / |grad f|` inside the sphere.
/// With this orientation the descending multiplicities read `(m1, m2, m1, m2)`.
pub(crate) fn shape_operator_eigenvalues(pair: &HermitianPair, w: WeightedNormParams, x: &DVector<f64>) -> Result<Vec<f64>> {
    let n = pair.N();
    let grad = moment::grad_vec(pair, x, w);
    let radial = grad.dot(x);
    let gt = &grad - x * radial;
    let gn = gt.norm();
    if gn < FOCAL_TOL {
        return Err(Error::LevelSet("focal point".into()));
    }
    let frame = DMatrix::from_columns(&[x.clone(), &gt / gn]).transpose();
    let tangent = null_space(&frame, 1e-10);
    if tangent.ncols() != n - 2 {
        return Err(Error::LevelSet(format!("tangent space of dimension {}", tangent.ncols())));
    }
    let hess = moment::hessian_f(pair, &PointInP::from_vector(x.clone()), w);
    let mut a = tangent.transpose() * hess * &tangent;
    for i in 0..n - 2 {
        a[(i, i)] -= radial;
    }
    a /= gn;
    let a = (&a + a.transpose()) * 0.5;
    let (vals, _) = sorted_symmetric_eigen(&a);
    Ok(vals.iter().rev().copied().collect())
}

/// Spectra of the shape operator at `sample_count` seeded points of `{f = c}` on the sphere.
pub fn principal_curvatures(
    pair: &HermitianPair,
    params: WeightedNormParams,
    c: f64,
    sample_count: usize,
    seed: u64,
) -> Result<Vec<CurvatureSpectrum>> {
    if !(c > -0.9 && c < 0.9) {
        return Err(Error::InvalidParameter(format!("level {c} outside (-0.9, 0.9)")));
    }
    let mut r = rng(seed);
    (0..sample_count)
        .map(|_| {
            let x = level_point(pair, params, c, &mut r)?;
            let eigenvalues = shape_operator_eigenvalues(pair, params, &x)?;
            let clusters = cluster_eigenvalues(&eigenvalues, CLUSTER_GAP);
            Ok(CurvatureSpectrum { level_value: c, eigenvalues, clusters })
        })
        .collect()
}

/// Largest gap between the cluster values and `cot(θ + kπ/4)`, `cos 4θ = c`,
/// allowing for either orientation of the normal.
pub(crate) fn cot_deviation(spectrum: &CurvatureSpectrum) -> f64 {
    let theta = spectrum.level_value.acos() / 4.0;
    let mut want: Vec<f64> = (0..4).map(|k| 1.0 / (theta + k as f64 * std::f64::consts::FRAC_PI_4).tan()).collect();
    want.sort_by(|a, b| b.total_cmp(a));
    let got: Vec<f64> = spectrum.clusters.iter().map(|c| c.0).collect();
    if got.len() != 4 {
        return f64::NAN;
    }
    let dev = |w: &[f64]| w.iter().zip(&got).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let flipped: Vec<f64> = want.iter().rev().map(|v| -v).collect();
    dev(&want).min(dev(&flipped))
}

pub(super) fn curvature_check(
    pair: &HermitianPair,
    rrs: &RestrictedRootSystem,
    config: &CheckConfig,
    seed: u64,
    tol: f64,
) -> Result<CheckResult> {
    let id = CheckId::PrincipalCurvatures;
    let w = config.weights(Some(rrs))?;
    let expected = vec![rrs.m1, rrs.m2, rrs.m1, rrs.m2];
    let mut worst = 0.0f64;
    let mut mismatches = 0usize;
    let mut levels = Vec::new();
    for (i, &c) in config.levels.iter().enumerate() {
        let spectra = match principal_curvatures(pair, w, c, config.curvature_samples, seed.wrapping_add(i as u64)) {
            Ok(s) => s,
            Err(e) => {
                mismatches += 1;
                levels.push(serde_json::json!({ "level": c, "error": e.to_string() }));
                continue;
            }
        };
        let mut agreement = 0.0f64;
        let mut spread = 0.0f64;
        for s in &spectra {
            spread = spread.max(s.spread());
            mismatches += usize::from(s.multiplicities() != expected);
            let diff = s.eigenvalues.iter().zip(&spectra[0].eigenvalues).map(|(a, b)| (a - b).abs());
            agreement = agreement.max(diff.fold(0.0, f64::max));
        }
        worst = worst.max(spread).max(agreement);
        let first = &spectra[0];
        levels.push(serde_json::json!({
            "level": c,
            "clusters": first.clusters,
            "spread": spread,
            "agreement": agreement,
            "cot_deviation": cot_deviation(first),
        }));
    }
    let err = worst.max(mismatches as f64);
    let samples = config.curvature_samples * config.levels.len();
    Ok(CheckResult::judged(id, id.error_kind(), (err, err), tol, samples, seed)
        .with_detail("expected_multiplicities", expected)
        .with_detail("levels", levels))
}
