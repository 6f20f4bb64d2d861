use super::*;
use crate::linalg::{random_unit, rng, sorted_symmetric_eigen};
use num_complex::Complex64;
use proptest::prelude::*;

fn random_element(alg: &StructureAlgebra, seed: u64) -> AlgebraElement {
    AlgebraElement::from_vector(random_unit(&mut rng(seed), alg.dim()))
}

fn commutator_coords(alg: &StructureAlgebra, x: &AlgebraElement, y: &AlgebraElement) -> DVector<f64> {
    let real = alg.realization().unwrap();
    let (a, b) = (real.to_matrix(x), real.to_matrix(y));
    real.expand(&(&a * &b - &b * &a))
}

/// Real trace `Re Tr(XY)` of matrix representatives.
fn matrix_trace(alg: &StructureAlgebra, x: &AlgebraElement, y: &AlgebraElement) -> f64 {
    let real = alg.realization().unwrap();
    (real.to_matrix(x) * real.to_matrix(y)).trace().re
}

#[test]
fn so3_bracket_matches_commutator() {
    let so3 = so_algebra(3).unwrap();
    assert_eq!(so3.dim(), 3);
    let l = |i| AlgebraElement::basis(3, i);
    // basis order L12, L13, L23
    for i in 0..3 {
        for j in 0..3 {
            let got = so3.bracket(&l(i), &l(j)).unwrap();
            let want = commutator_coords(&so3, &l(i), &l(j));
            assert!((got.coords() - want).amax() < 1e-14);
        }
    }
    // [L12, L13] = -L23 with E_ij - E_ji generators
    let b = so3.bracket(&l(0), &l(1)).unwrap();
    assert_eq!(b.coords().as_slice(), &[0.0, 0.0, -1.0]);
}

#[test]
fn bracket_self_is_zero_and_dims_checked() {
    let so5 = so_algebra(5).unwrap();
    let x = random_element(&so5, 1);
    assert!(so5.bracket(&x, &x).unwrap().max_abs() < 1e-15);
    let wrong = AlgebraElement::zero(3);
    assert!(matches!(so5.bracket(&x, &wrong), Err(Error::DimensionMismatch { expected: 10, found: 3 })));
    assert!(so5.ad_matrix(&wrong).is_err());
}

#[test]
fn ad_of_zero_and_killing_trace() {
    let su3 = su_algebra(3).unwrap();
    assert_eq!(max_abs(&su3.ad_matrix(&AlgebraElement::zero(8)).unwrap()), 0.0);
    let (x, y) = (random_element(&su3, 2), random_element(&su3, 3));
    let tr = (su3.ad_matrix(&x).unwrap() * su3.ad_matrix(&y).unwrap()).trace();
    assert!((tr - su3.killing(&x, &y).unwrap()).abs() < 1e-12);
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    crate::linalg::max_abs(m)
}

#[test]
fn so3_ad_squared_spectrum() {
    let so3 = so_algebra(3).unwrap();
    let ad = so3.ad_matrix(&AlgebraElement::basis(3, 0)).unwrap();
    let (vals, _) = sorted_symmetric_eigen(&(&ad * &ad));
    assert!((vals[0] - vals[1]).abs() < 1e-14);
    assert!(vals[0] < -0.5);
    assert!(vals[2].abs() < 1e-14);
}

#[test]
fn so3_inner_of_generator() {
    // ad L12 by hand: L12 -> 0, L13 -> -L23, L23 -> L13; -Tr(ad^2) = 2
    let so3 = so_algebra(3).unwrap();
    let l1 = AlgebraElement::basis(3, 0);
    assert!((so3.inner(&l1, &l1).unwrap() - 2.0).abs() < 1e-14);
    let (x, y) = (random_element(&so3, 4), random_element(&so3, 5));
    assert_eq!(so3.inner(&x, &y).unwrap(), so3.inner(&y, &x).unwrap());
}

#[test]
fn inner_rejects_noncompact() {
    // sl(2,R): [h,e]=2e, [h,f]=-2f, [e,f]=h
    let labels = vec!["h".into(), "e".into(), "f".into()];
    let alg = StructureAlgebra::from_antisymmetric(
        labels,
        [(0, 1, 1, 2.0), (0, 2, 2, -2.0), (1, 2, 0, 1.0)],
    )
    .unwrap();
    assert!(alg.validate().is_empty());
    assert!(!alg.is_compact());
    let h = AlgebraElement::basis(3, 0);
    assert!(matches!(alg.inner(&h, &h), Err(Error::NotCompact { .. })));
}

#[test]
fn orthonormalize_examples() {
    let so4 = so_algebra(4).unwrap();
    let s = 1.0 / so4.inner(&AlgebraElement::basis(6, 0), &AlgebraElement::basis(6, 0)).unwrap().sqrt();
    let v = &AlgebraElement::basis(6, 0) * s;
    let w = &AlgebraElement::basis(6, 1) * s;
    let out = so4.orthonormalize(&[v.clone(), w.clone()]).unwrap();
    assert!((out[0].coords() - v.coords()).amax() < 1e-15);
    assert!((out[1].coords() - w.coords()).amax() < 1e-15);
    let out = so4.orthonormalize(&[v.clone(), &(&v * 2.0) + &w]).unwrap();
    assert!((out[1].coords() - w.coords()).amax() < 1e-14);

    let so5 = so_algebra(5).unwrap();
    let set: Vec<_> = (0..5).map(|s| random_element(&so5, 10 + s)).collect();
    let out = so5.orthonormalize(&set).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            let g = so5.inner(&out[i], &out[j]).unwrap();
            assert!((g - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
    }
    let dependent = vec![set[0].clone(), &set[0] * 3.0];
    assert!(matches!(so5.orthonormalize(&dependent), Err(Error::RankDeficient { index: 1, .. })));
}

#[test]
fn validate_constructors_and_perturbation() {
    let so5 = so_algebra(5).unwrap();
    assert!(so5.is_exact());
    assert!(so5.validate().is_empty());
    assert!(so5.validate_with(1e-10).is_empty());
    // flip one pair of entries consistently so only Jacobi can notice
    let entries: Vec<_> = so5
        .entries()
        .map(|(i, j, k, v)| if (i, j, k) == (0, 4, 1) || (i, j, k) == (4, 0, 1) { (i, j, k, -v) } else { (i, j, k, v) })
        .collect();
    assert!(entries.iter().any(|e| (e.0, e.1, e.2) == (0, 4, 1)));
    let broken = StructureAlgebra::from_entries(so5.labels().to_vec(), entries).unwrap();
    let violations = broken.validate();
    assert!(violations.iter().any(|v| matches!(v, Violation::Jacobi { .. })));
    assert!(!violations.iter().any(|v| matches!(v, Violation::Antisymmetry { .. })));
}

#[test]
fn validate_catches_asymmetry_and_bad_killing() {
    let so3 = so_algebra(3).unwrap();
    let entries: Vec<_> = so3.entries().filter(|&(i, j, _, _)| i < j).collect();
    let half = StructureAlgebra::from_entries(so3.labels().to_vec(), entries).unwrap();
    assert!(half.validate().iter().any(|v| matches!(v, Violation::Antisymmetry { .. })));

    let floating = StructureAlgebra::from_entries(so3.labels().to_vec(), so3.entries())
        .unwrap()
        .with_declared_killing(DMatrix::identity(3, 3) * -3.0, None);
    assert!(floating.validate().iter().any(|v| matches!(v, Violation::KillingMismatch { .. })));
}

#[test]
fn so10_killing_is_eight_trace() {
    let so10 = so_algebra(10).unwrap();
    assert_eq!(so10.dim(), 45);
    for s in 0..5 {
        let (x, y) = (random_element(&so10, 20 + s), random_element(&so10, 40 + s));
        let b = so10.killing(&x, &y).unwrap();
        assert!((b - 8.0 * matrix_trace(&so10, &x, &y)).abs() < 1e-10);
    }
}

#[test]
fn su_dimensions_and_killing() {
    assert_eq!(su_algebra(2).unwrap().dim(), 3);
    let su4 = su_algebra(4).unwrap();
    assert_eq!(su4.dim(), 15);
    assert!(su4.validate().is_empty());
    for s in 0..5 {
        let (x, y) = (random_element(&su4, 60 + s), random_element(&su4, 80 + s));
        let b = su4.killing(&x, &y).unwrap();
        assert!((b - 8.0 * matrix_trace(&su4, &x, &y)).abs() < 1e-10);
    }
    assert!(matches!(su_algebra(1), Err(Error::InvalidParameter(_))));
    assert!(matches!(so_algebra(2), Err(Error::InvalidParameter(_))));
}

#[test]
fn bracket_agrees_with_commutator_on_random_pairs() {
    for alg in [so_algebra(6).unwrap(), su_algebra(4).unwrap()] {
        for s in 0..100 {
            let (x, y) = (random_element(&alg, 100 + s), random_element(&alg, 300 + s));
            let got = alg.bracket(&x, &y).unwrap();
            let want = commutator_coords(&alg, &x, &y);
            assert!((got.coords() - &want).norm() <= 1e-10 * want.norm().max(1e-300));
        }
    }
}

#[test]
fn chevalley_a1_matches_su2_spectrum() {
    let a1 = chevalley_compact(&cartan_matrix(CartanType::A, 1).unwrap()).unwrap();
    let su2 = su_algebra(2).unwrap();
    assert_eq!(a1.dim(), 3);
    let (ka, _) = sorted_symmetric_eigen(a1.killing_gram());
    let (ks, _) = sorted_symmetric_eigen(su2.killing_gram());
    // su(2) basis i*diag(1,-1), E12-E21, i(E12+E21) is the same compact basis
    for i in 0..3 {
        assert!((ka[i] - ks[i]).abs() < 1e-12, "{ka} vs {ks}");
    }
}

#[test]
fn chevalley_d5_and_e6() {
    let d5 = chevalley_compact(&cartan_matrix(CartanType::D, 5).unwrap()).unwrap();
    assert_eq!(d5.dim(), 45);
    assert!(d5.is_compact());
    let e6 = chevalley_compact_with_roots(&cartan_matrix(CartanType::E, 6).unwrap()).unwrap();
    assert_eq!(e6.algebra.dim(), 78);
    assert!(e6.algebra.is_exact());
    assert!(e6.algebra.validate().is_empty());
    assert_eq!(e6.basis.len(), 78);
    assert_eq!(e6.basis[6], BasisKind::X(0));
}

#[test]
fn chevalley_rejects_non_finite() {
    let affine = vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]];
    assert!(matches!(chevalley_compact(&affine), Err(Error::NotFiniteType(_))));
}

#[test]
fn json_round_trip_is_exact() {
    let su3 = su_algebra(3).unwrap();
    let text = su3.to_json().unwrap();
    let back = StructureAlgebra::from_json(&text).unwrap();
    assert_eq!(back.entries().collect::<Vec<_>>(), su3.entries().collect::<Vec<_>>());
    assert_eq!(back.killing_gram(), su3.killing_gram());
    assert!(back.is_exact());

    // float tensors round-trip bit for bit
    let scaled = StructureAlgebra::from_entries(
        su3.labels().to_vec(),
        su3.entries().map(|(i, j, k, v)| (i, j, k, v * 0.1)),
    )
    .unwrap();
    let back = StructureAlgebra::from_json(&scaled.to_json().unwrap()).unwrap();
    assert_eq!(back.entries().collect::<Vec<_>>(), scaled.entries().collect::<Vec<_>>());
    assert_eq!(back.killing_gram(), scaled.killing_gram());
}

#[test]
fn json_import_rejects_invalid() {
    let so3 = so_algebra(3).unwrap();
    let mut doc = AlgebraDocument::from_algebra(&so3);
    doc.killing[0][0] = JsonValue::Exact { num: 5, den: 1 };
    assert!(matches!(doc.to_algebra(), Err(Error::InvalidModel(_))));
    let mut doc = AlgebraDocument::from_algebra(&so3);
    doc.entries.pop();
    assert!(matches!(doc.to_algebra(), Err(Error::InvalidModel(_))));
    assert!(StructureAlgebra::from_json("{\"dim\": 2}").is_err());
    let text = r#"{"dim":1,"labels":["a"],"entries":[[0,0,3,1.0]],"killing":[[0.0]]}"#;
    assert!(matches!(StructureAlgebra::from_json(text), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn realization_conjugation_is_automorphism() {
    let so4 = so_algebra(4).unwrap();
    let real = so4.realization().unwrap();
    let mut g = CMatrix::identity(4, 4);
    g[(0, 0)] = Complex64::new(-1.0, 0.0);
    let theta = real.conjugation_map(&g);
    let (x, y) = (random_element(&so4, 7), random_element(&so4, 8));
    let lhs = &theta * so4.bracket(&x, &y).unwrap().coords();
    let rhs = so4.bracket_vec(&(&theta * x.coords()), &(&theta * y.coords()));
    assert!((lhs - rhs).amax() < 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn prop_bracket_antisymmetric_and_jacobi(seed in any::<u64>()) {
        let alg = su_algebra(3).unwrap();
        let mut r = rng(seed);
        let x = AlgebraElement::from_vector(random_unit(&mut r, 8));
        let y = AlgebraElement::from_vector(random_unit(&mut r, 8));
        let w = AlgebraElement::from_vector(random_unit(&mut r, 8));
        let xy = alg.bracket(&x, &y).unwrap();
        let yx = alg.bracket(&y, &x).unwrap();
        prop_assert!((&xy + &yx).max_abs() < 1e-14);
        let j = &(&alg.bracket(&xy, &w).unwrap() + &alg.bracket(&alg.bracket(&y, &w).unwrap(), &x).unwrap())
            + &alg.bracket(&alg.bracket(&w, &x).unwrap(), &y).unwrap();
        prop_assert!(j.max_abs() < 1e-12);
    }

    #[test]
    fn prop_killing_invariant(seed in any::<u64>()) {
        let alg = so_algebra(5).unwrap();
        let mut r = rng(seed);
        let x = AlgebraElement::from_vector(random_unit(&mut r, 10) * 3.0);
        let y = AlgebraElement::from_vector(random_unit(&mut r, 10));
        let w = AlgebraElement::from_vector(random_unit(&mut r, 10) * 0.5);
        let lhs = alg.killing(&alg.bracket(&x, &y).unwrap(), &w).unwrap()
            + alg.killing(&y, &alg.bracket(&x, &w).unwrap()).unwrap();
        prop_assert!(lhs.abs() <= 1e-9 * 3.0 * 0.5);
    }

    #[test]
    fn prop_inner_positive(seed in any::<u64>()) {
        let alg = so_algebra(6).unwrap();
        let x = AlgebraElement::from_vector(random_unit(&mut rng(seed), 15));
        prop_assert!(alg.inner(&x, &x).unwrap() > 0.0);
    }
}
