use cmforge::linalg::{random_unit, rng};
use cmforge::moment::{self, muenzner_coefficients, WeightedNormParams};
use cmforge::roots::decompose_z;
use cmforge::symspace::{build_space, Family, PointInP};
use cmforge::verify::{full_suite, roots_for, CheckConfig, CheckId};
use proptest::prelude::*;

#[test]
fn suites_pass_for_bdi4_and_aiii3() {
    let config = CheckConfig { samples: 50, ..CheckConfig::default() };
    for (family, m) in [(Family::Bdi(4), (2, 1)), (Family::Aiii(3), (2, 3))] {
        let pair = build_space(family).unwrap();
        let report = full_suite(&pair, &config).unwrap();
        assert!(report.passed(), "{}", report.to_json().unwrap());
        assert_eq!((report.params.m1, report.params.m2), m);
    }
}

#[test]
fn rank_two_lemmas_on_the_abelian_plane() {
    // P = a1 H_ε1 + a2 H_ε2
    let pair = build_space(Family::Diii5).unwrap();
    let rrs = roots_for(&pair, 3).unwrap();
    let z = decompose_z(&pair, &rrs).unwrap();
    let h = rrs.heps_norm_sq();
    for (a1, a2) in [(1.0, 0.0), (0.3, -1.2), (2.0, 0.5)] {
        let p = PointInP::from_vector(rrs.h_eps(1) * a1 + rrs.h_eps(2) * a2);
        let mu = moment::mu(&pair, &p);
        let want = (&z.z_2e1 * (a1 * a1) + &z.z_2e2 * (a2 * a2)) * (-2.0 * h * h);
        assert!((&mu - want).amax() < 1e-12);
        let (s2, t2) = (a1 * a1, a2 * a2);
        let pp = p.coords().norm_squared();
        assert!((pp.powi(3) - (s2 + t2).powi(3) * h.powi(3)).abs() < 1e-12);
        let p2mu2 = pp * mu.norm_squared();
        assert!((p2mu2 - (s2.powi(3) + s2 * s2 * t2 + s2 * t2 * t2 + t2.powi(3)) * h.powi(4)).abs() < 1e-12);
        let jmu = moment::j_mu_bracket(&pair, &p).norm_squared();
        assert!((jmu - 4.0 * (s2.powi(3) + t2.powi(3)) * h.powi(5)).abs() < 1e-12);
    }
}

#[test]
fn table_multiplicities_do_not_give_the_identity_for_bdi() {
    let pair = build_space(Family::Bdi(5)).unwrap();
    let rrs = roots_for(&pair, 1).unwrap();
    assert_eq!((rrs.m1, rrs.m2), (3, 1));
    let swapped = muenzner_coefficients(1, 3).unwrap().params();
    let right = muenzner_coefficients(3, 1).unwrap().params();
    let p = PointInP::from_vector(random_unit(&mut rng(2), pair.N()));
    assert!((moment::grad_norm_sq(&pair, &p, right) - 16.0).abs() < 1e-9);
    assert!((moment::grad_norm_sq(&pair, &p, swapped) - 16.0).abs() > 0.1);
    // 1/|H_ε|² = 2(2 m1 + m2 + 3) pins down the order
    assert!((1.0 / rrs.heps_norm_sq() - 20.0).abs() < 1e-9);
}

#[test]
fn perturbed_weights_fail_the_suite() {
    let pair = build_space(Family::Aiii(2)).unwrap();
    let w = muenzner_coefficients(2, 1).unwrap().params();
    let config = CheckConfig {
        samples: 20,
        params: Some(WeightedNormParams::new(w.a + 1.0, w.b)),
        checks: Some(vec![CheckId::MunznerA, CheckId::FClosedForm]),
        ..CheckConfig::default()
    };
    let report = full_suite(&pair, &config).unwrap();
    assert!(!report.check(CheckId::MunznerA).unwrap().passed());
    assert!(report.check(CheckId::FClosedForm).unwrap().passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn identities_hold_at_any_scale(seed in any::<u64>(), r in 0.2f64..2.5) {
        let pair = build_space(Family::Bdi(4)).unwrap();
        let w = muenzner_coefficients(2, 1).unwrap().params();
        let p = PointInP::from_vector(random_unit(&mut rng(seed), pair.N()) * r);
        let g = moment::grad_f(&pair, &p, w).coords().norm_squared();
        prop_assert!((g - 16.0 * r.powi(6)).abs() <= 1e-9 * r.powi(6).max(1.0));
        let lap = moment::laplacian_f(&pair, &p, w);
        prop_assert!((lap - 8.0 * r * r).abs() <= 1e-9 * (r * r).max(1.0));
    }

    #[test]
    fn f_is_k_invariant(seed in any::<u64>(), t in 0.0f64..6.3) {
        let pair = build_space(Family::Aiii(2)).unwrap();
        let w = muenzner_coefficients(2, 1).unwrap().params();
        let mut r = rng(seed);
        let p = random_unit(&mut r, pair.N());
        let k = random_unit(&mut r, pair.dim_k());
        let g = (pair.ad_k_on_p(&k) * t).exp();
        let before = moment::f_ab(&pair, &PointInP::from_vector(p.clone()), w);
        let after = moment::f_ab(&pair, &PointInP::from_vector(&g * p), w);
        prop_assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn f_stays_in_unit_interval(seed in any::<u64>()) {
        let pair = build_space(Family::Diii5).unwrap();
        let w = muenzner_coefficients(4, 5).unwrap().params();
        let p = PointInP::from_vector(random_unit(&mut rng(seed), pair.N()));
        let v = moment::f_ab(&pair, &p, w);
        prop_assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&v));
    }
}
