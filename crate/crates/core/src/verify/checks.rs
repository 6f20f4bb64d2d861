use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;

use super::{geometry, CheckConfig, CheckId, CheckResult, ErrorKind};
use crate::error::Result;
use crate::linalg::{max_abs, random_unit, rel_err, rng};
use crate::liealg::Rational;
use crate::moment::{self, muenzner_coefficients, WeightedNormParams};
use crate::roots::{decompose_z, RestrictedRootSystem, RootType as RootShape};
use crate::symspace::{Family, HermitianPair, PointInP};

/// Running maxima of absolute and relative errors.
#[derive(Default, Clone, Copy)]
struct Errors {
    abs: f64,
    rel: f64,
}

impl Errors {
    fn push(&mut self, got: f64, want: f64, floor: f64) {
        self.abs = self.abs.max((got - want).abs());
        self.rel = self.rel.max(rel_err(got, want, floor));
    }

    fn push_vec(&mut self, got: &DVector<f64>, want: &DVector<f64>, floor: f64) {
        let d = (got - want).norm();
        self.abs = self.abs.max((got - want).amax());
        self.rel = self.rel.max(d / want.norm().max(floor));
    }

    fn merge(self, other: Errors) -> Errors {
        Errors { abs: self.abs.max(other.abs), rel: self.rel.max(other.rel) }
    }

    fn pair(self) -> (f64, f64) {
        (self.abs, self.rel)
    }
}

/// Seeded unit points followed by `e1`, `(e1+e2)/√2` and the `H_{ε1}` direction.
pub(super) fn sample_points(
    pair: &HermitianPair,
    rrs: Option<&RestrictedRootSystem>,
    samples: usize,
    seed: u64,
) -> Vec<DVector<f64>> {
    let n = pair.N();
    let mut r = rng(seed);
    let mut pts: Vec<DVector<f64>> = (0..samples).map(|_| random_unit(&mut r, n)).collect();
    let mut e = DVector::zeros(n);
    e[0] = 1.0;
    pts.push(e.clone());
    e[1] = 1.0;
    pts.push(e / 2f64.sqrt());
    if let Some(rrs) = rrs {
        let h = rrs.h_eps(1);
        pts.push(&h / h.norm());
    }
    pts
}

fn over_points(points: &[DVector<f64>], f: impl Fn(&DVector<f64>) -> Errors + Sync) -> Errors {
    points.iter().map(f).fold(Errors::default(), Errors::merge)
}

pub(super) fn dispatch(
    id: CheckId,
    pair: &HermitianPair,
    rrs: Option<&RestrictedRootSystem>,
    config: &CheckConfig,
) -> Result<CheckResult> {
    use CheckId::*;
    let seed = config.check_seed(id);
    let tol = config.tolerance(id);
    let points = sample_points(pair, rrs, config.samples, seed);
    let count = points.len();
    let judged = |errors: Errors, samples: usize| CheckResult::judged(id, id.error_kind(), errors.pair(), tol, samples, seed);
    let n = pair.N();
    let nf = n as f64;

    let result = match id {
        ZNorm => {
            let alg = pair.algebra();
            let z = pair.z();
            let mut e = Errors::default();
            e.push(alg.inner(z, z)?, nf, 1.0);
            let j2 = pair.j_matrix() * pair.j_matrix() + DMatrix::identity(n, n);
            e.abs = e.abs.max(max_abs(&j2));
            judged(e, 1).with_detail("z_norm_sq", alg.inner(z, z)?)
        }
        TraceId => {
            let alg = pair.algebra();
            let p_basis = pair.p_basis();
            let e = over_points(&points, |p| {
                let x = pair.embed_p(p);
                let ad = alg.ad_matrix(&x).expect("dimension fixed");
                let ad2 = &ad * &ad;
                let trace: f64 = p_basis.iter().map(|b| alg.inner_vec(b.coords(), &(&ad2 * b.coords()))).sum();
                let mut e = Errors::default();
                e.push(-2.0 * trace, p.norm_squared(), 1e-300);
                e
            });
            judged(e, count)
        }
        MuBracket => {
            let e = over_points(&points, |p| {
                let pp = PointInP::from_vector(p.clone());
                let jp = pair.j_matrix() * p;
                let lhs = pair.embed_k(&pair.bracket_pp(&jp, p)).into_vector();
                let rhs = moment::mu_in_algebra(pair, &pp).into_vector() * 2.0;
                let mut e = Errors::default();
                e.push_vec(&lhs, &rhs, 1.0);
                e
            });
            judged(e, count)
        }
        FClosedForm => {
            let w = config.weights(rrs).unwrap_or(WeightedNormParams::new(1.5, -0.5));
            let e = over_points(&points, |p| {
                let pp = PointInP::from_vector(p.clone());
                let mut e = Errors::default();
                e.push(moment::f_ab_closed(pair, &pp, w), moment::f_ab(pair, &pp, w), 1.0);
                e
            });
            judged(e, count)
        }
        GradFormula => {
            let w = config.weights(rrs).unwrap_or(WeightedNormParams::new(1.5, -0.5));
            let f = |x: &DVector<f64>| moment::f_closed_vec(pair, x, w);
            let e = points
                .par_iter()
                .map(|p| {
                    let g = moment::grad_vec(pair, p, w);
                    let fd = moment::numeric_gradient_homogeneous(&f, p, 1e-5, 4);
                    let mut e = Errors::default();
                    e.push_vec(&g, &fd, 1e-12);
                    e
                })
                .reduce(Errors::default, Errors::merge);
            judged(e, count).with_detail("step", 1e-5)
        }
        GradsqFormula => {
            let w = config.weights(rrs).unwrap_or(WeightedNormParams::new(1.5, -0.5));
            let e = over_points(&points, |p| {
                let pp = PointInP::from_vector(p.clone());
                let mut e = Errors::default();
                let direct = moment::grad_vec(pair, p, w).norm_squared();
                e.push(moment::grad_norm_sq(pair, &pp, w), direct, 1.0);
                e
            });
            judged(e, count)
        }
        LapFormula => {
            let w = config.weights(rrs).unwrap_or(WeightedNormParams::new(1.5, -0.5));
            let e = over_points(&points, |p| {
                let pp = PointInP::from_vector(p.clone());
                let mut e = Errors::default();
                e.push(moment::laplacian_formula(n, &pp, w), moment::laplacian_f(pair, &pp, w), 1.0);
                e
            });
            judged(e, count)
        }
        RootType => {
            let rrs = rrs.expect("checked by run_check");
            let mut mismatches = 0usize;
            let expected = expected_type(pair.family());
            mismatches += usize::from(rrs.type_tag != expected);
            let m = |c| rrs.multiplicity(c);
            mismatches += usize::from(m((1, 1)) != m((1, -1)).max(m((-1, 1))));
            mismatches += usize::from(m((2, 0)) != 1 || m((0, 2)) != 1);
            mismatches += usize::from(m((1, 0)) != m((0, 1)));
            let has_short = m((1, 0)) > 0;
            mismatches += usize::from(has_short != (rrs.type_tag == RootShape::BC2));
            mismatches += usize::from(rrs.m1 != m((1, 1)) || rrs.m2 != m((1, 0)) + m((2, 0)));
            let r = judged(Errors { abs: mismatches as f64, rel: mismatches as f64 }, 1);
            r.with_detail("type", rrs.type_tag.to_string())
                .with_detail("expected_type", expected.to_string())
                .with_detail("m1", rrs.m1)
                .with_detail("m2", rrs.m2)
                .with_detail("roots", rrs.roots.iter().map(|r| (r.eps_coords, r.multiplicity)).collect::<Vec<_>>())
        }
        K2eps => {
            let rrs = rrs.expect("checked by run_check");
            let k = |c| rrs.root(c).map(|r| (r.k_space.clone(), r.p_space.clone()));
            let (Some((k1, p1)), Some((k2, p2))) = (k((2, 0)), k((0, 2))) else {
                return Err(crate::error::Error::MissingRoots("2ε roots".into()));
            };
            let mut worst = 0.0f64;
            for a in k1.column_iter() {
                for b in k2.column_iter() {
                    worst = worst.max(pair.bracket_kk(&a.into_owned(), &b.into_owned()).amax());
                }
            }
            for (ks, ps) in [(&k1, &p2), (&k2, &p1)] {
                for a in ks.column_iter() {
                    for b in ps.column_iter() {
                        worst = worst.max(pair.bracket_kp(&a.into_owned(), &b.into_owned()).amax());
                    }
                }
            }
            judged(Errors { abs: worst, rel: worst }, 1)
        }
        ZPosition => {
            let rrs = rrs.expect("checked by run_check");
            let d = decompose_z(pair, rrs)?;
            let rel = d.residual_norm / pair.z_k().norm();
            judged(Errors { abs: d.residual_norm, rel }, 1)
        }
        ZComponents => {
            let rrs = rrs.expect("checked by run_check");
            let d = decompose_z(pair, rrs)?;
            let h = rrs.heps_norm_sq();
            let mut e = Errors::default();
            for (i, zc) in [(1, &d.z_2e1), (2, &d.z_2e2)] {
                let hv = rrs.h_eps(i);
                e.push(4.0 * hv.norm_squared() * zc.norm_squared(), 1.0, 1.0);
                let ad = pair.ad_k_on_p(zc);
                let twice = &ad * (&ad * &hv);
                e.push_vec(&twice, &(-&hv), h.sqrt());
            }
            judged(e, 2).with_detail("z0_norm", d.z0.norm())
        }
        HepsNorm => {
            let rrs = rrs.expect("checked by run_check");
            let want = 2.0 * (2 * rrs.m1 + rrs.m2 + 3) as f64;
            let mut e = Errors::default();
            e.push(1.0 / rrs.heps_norm_sq(), want, 1.0);
            e.push(1.0 / rrs.h_eps(2).norm_squared(), want, 1.0);
            judged(e, 2).with_detail("inverse_heps_norm_sq", 1.0 / rrs.heps_norm_sq())
        }
        DimN => {
            let rrs = rrs.expect("checked by run_check");
            let counted = pair.p_basis().len();
            let from_roots = 2 + rrs.total_multiplicity();
            let formula = 2 * rrs.m1 + 2 * rrs.m2 + 2;
            let bad = usize::from(counted != formula) + usize::from(counted != from_roots)
                + usize::from(counted != pair.family().expected_n());
            judged(Errors { abs: bad as f64, rel: bad as f64 }, 1)
                .with_detail("N", counted)
                .with_detail("formula", formula)
        }
        JmuId => {
            let rrs = rrs.expect("checked by run_check");
            let h = rrs.heps_norm_sq();
            let e = over_points(&points, |p| {
                let pp = PointInP::from_vector(p.clone());
                let mut e = Errors::default();
                let lhs = moment::j_mu_bracket(pair, &pp).norm_squared();
                e.push(lhs, moment::j_mu_rank2(pair, &pp, h), h * h);
                e
            });
            judged(e, count)
        }
        GradsqRank2 => {
            let rrs = rrs.expect("checked by run_check");
            let w = config.weights(Some(rrs))?;
            let e = over_points(&points, |p| {
                let pp = PointInP::from_vector(p.clone());
                let mut e = Errors::default();
                let want = moment::grad_norm_sq(pair, &pp, w);
                e.push(moment::grad_norm_sq_rank2(pair, &pp, w, rrs.m1, rrs.m2), want, 1.0);
                e
            });
            judged(e, count)
        }
        LapRank2 => {
            let rrs = rrs.expect("checked by run_check");
            let w = config.weights(Some(rrs))?;
            let e = over_points(&points, |p| {
                let pp = PointInP::from_vector(p.clone());
                let mut e = Errors::default();
                e.push(moment::laplacian_rank2(rrs.m1, rrs.m2, &pp, w), moment::laplacian_formula(n, &pp, w), 1.0);
                e
            });
            judged(e, count)
        }
        MunznerA => {
            let rrs = rrs.expect("checked by run_check");
            let w = config.weights(Some(rrs))?;
            let e = over_points(&points, |p| {
                let mut e = Errors::default();
                let want = 16.0 * p.norm_squared().powi(3);
                e.push(moment::grad_vec(pair, p, w).norm_squared(), want, 1.0);
                e
            });
            judged(e, count).with_detail("a", w.a).with_detail("b", w.b)
        }
        MunznerB => {
            let rrs = rrs.expect("checked by run_check");
            let w = config.weights(Some(rrs))?;
            let target = 8.0 * (rrs.m1 as f64 - rrs.m2 as f64);
            let e = over_points(&points, |p| {
                let pp = PointInP::from_vector(p.clone());
                let mut e = Errors::default();
                e.push(moment::laplacian_f(pair, &pp, w), target * p.norm_squared(), 1.0);
                e
            });
            judged(e, count).with_detail("target", target)
        }
        KInvariance => {
            let w = config.weights(rrs)?;
            let mut r = rng(seed ^ 0x4b49_4e56);
            let angles: Vec<(DVector<f64>, f64)> =
                points.iter().map(|_| (random_unit(&mut r, pair.dim_k()), r.random_range(0.0..std::f64::consts::PI))).collect();
            let e = points
                .par_iter()
                .zip(angles.par_iter())
                .map(|(p, (wk, t))| {
                    let g = (pair.ad_k_on_p(wk) * *t).exp();
                    let gp = PointInP::from_vector(&g * p);
                    let pp = PointInP::from_vector(p.clone());
                    let mut e = Errors::default();
                    e.push(moment::f_ab(pair, &gp, w), moment::f_ab(pair, &pp, w), 1.0);
                    e.abs = e.abs.max((gp.norm() - 1.0).abs());
                    e
                })
                .reduce(Errors::default, Errors::merge);
            judged(e, count)
        }
        CoeffIdentities => {
            let rrs = rrs.expect("checked by run_check");
            let mut r = coefficient_identities_exact(rrs.m1, rrs.m2);
            r.tolerance = tol;
            r.seed = seed;
            r
        }
        SphereRange => {
            let rrs = rrs.expect("checked by run_check");
            let w = config.weights(Some(rrs))?;
            let (lo, hi) = geometry::sphere_range(pair, w, config.samples, seed)?;
            let mut e = Errors::default();
            e.push(hi, 1.0, 1.0);
            e.push(lo, -1.0, 1.0);
            judged(e, config.samples).with_detail("min", lo).with_detail("max", hi)
        }
        PrincipalCurvatures => geometry::curvature_check(pair, rrs.expect("checked by run_check"), config, seed, tol)?,
    };
    Ok(result)
}

fn expected_type(family: Family) -> RootShape {
    match family {
        Family::Bdi(_) | Family::Aiii(2) => RootShape::C2,
        _ => RootShape::BC2,
    }
}

/// The three coefficient identities in exact arithmetic, from the unsimplified left-hand sides.
pub fn coefficient_identities_exact(m1: usize, m2: usize) -> CheckResult {
    let id = CheckId::CoeffIdentities;
    let Ok(c) = muenzner_coefficients(m1, m2) else {
        return CheckResult::judged(id, ErrorKind::Abs, (1.0, 1.0), 0.0, 1, 0).with_detail("error", "m < 1");
    };
    let (a, b) = (c.a, c.b);
    let r = |v: usize| Rational::from_integer(v as i64);
    let s = r(2 * m1 + m2 + 3);
    let t = r(m1 + m2 + 1);
    let big_a = -r(2) * b * b / (s * s) + (a - b) * (a - b) / (r(4) * t * t);
    let big_b = r(12) * b * b / s + r(4) * b * (a - b) / t;
    let big_c = moment::laplacian_rank2_exact(m1, m2, a, b);
    let want_c = Rational::from_integer(8 * (m1 as i64 - m2 as i64));
    let bad = usize::from(big_a != r(16)) + usize::from(big_b != Rational::from_integer(0)) + usize::from(big_c != want_c);
    let show = |q: Rational| q.to_string();
    CheckResult::judged(id, ErrorKind::Abs, (bad as f64, bad as f64), 0.0, 1, 0)
        .with_detail("m1", m1)
        .with_detail("m2", m2)
        .with_detail("A", show(big_a))
        .with_detail("B", show(big_b))
        .with_detail("C", show(big_c))
}
