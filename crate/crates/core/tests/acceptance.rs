//! Acceptance criteria 1-9. Runs without the libtest harness and prints one
//! line per criterion; exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use cmforge::linalg::{random_unit, rng};
use cmforge::liealg::{cartan_matrix, chevalley_compact, CartanType};
use cmforge::moment::{self, muenzner_coefficients, WeightedNormParams};
use cmforge::roots::{RestrictedRootSystem, RootType};
use cmforge::symspace::{build_space, Family, HermitianPair, PointInP};
use cmforge::verify::{
    coefficient_identities_exact, full_suite_with_roots, principal_curvatures, roots_for, run_check, sphere_range,
    CheckConfig, CheckId,
};
use nalgebra::DVector;
use rayon::prelude::*;

const SEED: u64 = 42;

const CLASSICAL: [Family; 6] =
    [Family::Bdi(3), Family::Bdi(4), Family::Bdi(5), Family::Aiii(2), Family::Aiii(3), Family::Diii5];

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { ok: true, notes: Vec::new() }
    }

    fn require(&mut self, ok: bool, note: String) {
        if !ok {
            self.ok = false;
            self.notes.push(note);
        }
    }
}

fn setup(family: Family) -> (HermitianPair, RestrictedRootSystem) {
    let pair = build_space(family).expect("pair builds");
    let rrs = roots_for(&pair, SEED).expect("roots compute");
    (pair, rrs)
}

fn unit_points(pair: &HermitianPair, count: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut r = rng(seed);
    (0..count).map(|_| random_unit(&mut r, pair.N())).collect()
}

fn weights(rrs: &RestrictedRootSystem) -> WeightedNormParams {
    muenzner_coefficients(rrs.m1, rrs.m2).expect("m >= 1").params()
}

/// Worst `|‖grad f‖² - 16|`, worst `|Δf - 8(m1 - m2)|` and the elapsed time at 200 unit points.
fn identities(family: Family) -> (f64, f64, Duration) {
    let start = Instant::now();
    let (pair, rrs) = setup(family);
    let w = weights(&rrs);
    let target = 8.0 * (rrs.m1 as f64 - rrs.m2 as f64);
    let mut worst = (0.0f64, 0.0f64);
    for p in unit_points(&pair, 200, SEED) {
        let pp = PointInP::from_vector(p);
        worst.0 = worst.0.max((moment::grad_f(&pair, &pp, w).coords().norm_squared() - 16.0).abs());
        worst.1 = worst.1.max((moment::laplacian_f(&pair, &pp, w) - target).abs());
    }
    (worst.0, worst.1, start.elapsed())
}

fn criterion_1(families: &[Family]) -> Outcome {
    let mut o = Outcome::new();
    for &family in families {
        let (ga, lb, t) = identities(family);
        o.require(ga <= 1e-8, format!("{family}: |grad|^2 off by {ga:e}"));
        o.require(lb <= 1e-8, format!("{family}: laplacian off by {lb:e}"));
        o.require(t <= Duration::from_secs(10), format!("{family}: {t:?}"));
    }
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let rows = [
        (Family::Bdi(3), vec![RootType::C2], (1, 1)),
        (Family::Bdi(4), vec![RootType::C2], (1, 2)),
        (Family::Bdi(5), vec![RootType::C2], (1, 3)),
        (Family::Aiii(2), vec![RootType::BC2, RootType::C2], (2, 1)),
        (Family::Aiii(3), vec![RootType::BC2], (2, 3)),
        (Family::Diii5, vec![RootType::BC2], (4, 5)),
    ];
    for (family, types, (m1, m2)) in rows {
        let (pair, rrs) = setup(family);
        o.require(types.contains(&rrs.type_tag), format!("{family}: type {}", rrs.type_tag));
        o.require(
            (rrs.m1, rrs.m2) == (m1, m2),
            format!("{family}: computed ({}, {}), table ({m1}, {m2})", rrs.m1, rrs.m2),
        );
        o.require(pair.N() == 2 * rrs.m1 + 2 * rrs.m2 + 2, format!("{family}: N = {}", pair.N()));
    }
    o
}

const LEMMA_CHECKS: [CheckId; 15] = [
    CheckId::ZNorm,
    CheckId::TraceId,
    CheckId::MuBracket,
    CheckId::FClosedForm,
    CheckId::GradsqFormula,
    CheckId::LapFormula,
    CheckId::JmuId,
    CheckId::GradsqRank2,
    CheckId::LapRank2,
    CheckId::ZPosition,
    CheckId::ZComponents,
    CheckId::HepsNorm,
    CheckId::DimN,
    CheckId::K2eps,
    CheckId::KInvariance,
];

fn criterion_3(families: &[Family]) -> Outcome {
    let mut o = Outcome::new();
    let config = CheckConfig { seed: SEED, checks: Some(LEMMA_CHECKS.to_vec()), ..CheckConfig::default() };
    for &family in families {
        let (pair, rrs) = setup(family);
        let report = full_suite_with_roots(&pair, &rrs, &config).expect("suite runs");
        o.require(report.checks.len() == LEMMA_CHECKS.len(), format!("{family}: {} checks", report.checks.len()));
        for c in report.checks.iter().filter(|c| !c.passed()) {
            o.require(false, format!("{family}: {} abs {:e} rel {:e}", c.check_id, c.max_abs_error, c.max_rel_error));
        }
    }
    o
}

fn criterion_4(families: &[Family]) -> Outcome {
    let mut o = Outcome::new();
    for &family in families {
        let (pair, rrs) = setup(family);
        let w = weights(&rrs);
        let n = pair.N();
        let f = |x: &DVector<f64>| moment::f_ab_closed(&pair, &PointInP::from_vector(x.clone()), w);
        let worst = unit_points(&pair, 100, SEED + 4)
            .par_iter()
            .map(|p| {
                let pp = PointInP::from_vector(p.clone());
                let g = moment::grad_f(&pair, &pp, w).into_vector();
                let fd = moment::numeric_gradient_homogeneous(&f, p, 1e-5, 4);
                let grad_rel = (&g - &fd).norm() / g.norm();
                let h = moment::hessian_f(&pair, &pp, w);
                let hd = moment::numeric_hessian_homogeneous(&f, p, 1e-3, 4);
                let hess_abs = (&h - hd).amax();
                let lap = moment::laplacian_formula(n, &pp, w);
                let lap_rel = (h.trace() - lap).abs() / lap.abs().max(1.0);
                (grad_rel, hess_abs, lap_rel)
            })
            .reduce(|| (0.0, 0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1), a.2.max(b.2)));
        o.require(worst.0 <= 1e-6, format!("{family}: gradient rel {:e}", worst.0));
        o.require(worst.1 <= 1e-5, format!("{family}: hessian entry {:e}", worst.1));
        o.require(worst.2 <= 1e-9, format!("{family}: trace rel {:e}", worst.2));
    }
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut failures = 0;
    for m1 in 1..=50 {
        for m2 in 1..=50 {
            failures += usize::from(!coefficient_identities_exact(m1, m2).passed());
        }
    }
    let t = start.elapsed();
    o.require(failures == 0, format!("{failures} of 2500 cases fail"));
    o.require(t < Duration::from_secs(1), format!("took {t:?}"));
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    for family in [Family::Bdi(3), Family::Bdi(5), Family::Aiii(2), Family::Diii5] {
        let (pair, rrs) = setup(family);
        let w = weights(&rrs);
        let expected = vec![rrs.m1, rrs.m2, rrs.m1, rrs.m2];
        for (i, c) in [-0.5, 0.0, 0.5].into_iter().enumerate() {
            let spectra = match principal_curvatures(&pair, w, c, 10, SEED + i as u64) {
                Ok(s) => s,
                Err(e) => {
                    o.require(false, format!("{family} c={c}: {e}"));
                    continue;
                }
            };
            for s in &spectra {
                o.require(s.clusters.len() == 4, format!("{family} c={c}: {} clusters", s.clusters.len()));
                o.require(s.multiplicities() == expected, format!("{family} c={c}: {:?}", s.multiplicities()));
                o.require(s.spread() <= 1e-6, format!("{family} c={c}: spread {:e}", s.spread()));
                let agree = s
                    .eigenvalues
                    .iter()
                    .zip(&spectra[0].eigenvalues)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                o.require(agree <= 1e-6, format!("{family} c={c}: agreement {agree:e}"));
            }
        }
        match sphere_range(&pair, w, 200, SEED) {
            Ok((lo, hi)) => o.require(
                (lo + 1.0).abs() <= 1e-6 && (hi - 1.0).abs() <= 1e-6,
                format!("{family}: range [{lo}, {hi}]"),
            ),
            Err(e) => o.require(false, format!("{family}: {e}")),
        }
    }
    o
}

fn criterion_7(families: &[Family]) -> Outcome {
    let mut o = Outcome::new();
    for &family in families {
        let (pair, rrs) = setup(family);
        let w = weights(&rrs);
        let config = CheckConfig { params: Some(WeightedNormParams::new(w.a + 1.0, w.b)), ..CheckConfig::default() };
        let r = run_check(CheckId::MunznerA, &pair, Some(&rrs), &config).expect("check runs");
        o.require(!r.passed(), format!("{family}: MUNZNER_A passed with perturbed weights"));
    }
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let e6 = cartan_matrix(CartanType::E, 6).expect("E6 Cartan matrix");
    match chevalley_compact(&e6) {
        Ok(alg) => {
            o.require(alg.is_exact(), "E6 tensor is not exact".into());
            let v = alg.validate();
            o.require(v.is_empty(), format!("E6 violations: {}", v.len()));
        }
        Err(e) => o.require(false, format!("E6: {e}")),
    }
    let (pair, rrs) = setup(Family::Eiii);
    o.require(pair.N() == 32, format!("N = {}", pair.N()));
    o.require(rrs.type_tag == RootType::BC2, format!("type {}", rrs.type_tag));
    o.require((rrs.m1, rrs.m2) == (6, 9), format!("({}, {})", rrs.m1, rrs.m2));
    for (label, sub) in [("1", criterion_1(&[Family::Eiii])), ("3", criterion_3(&[Family::Eiii])), ("4", criterion_4(&[Family::Eiii]))] {
        for note in sub.notes {
            o.require(false, format!("criterion {label}: {note}"));
        }
    }
    let t = start.elapsed();
    o.require(t <= Duration::from_secs(120), format!("took {t:?}"));
    o
}

fn strip_timing(json: &str) -> String {
    json.lines().filter(|l| !l.trim_start().starts_with("\"millis\"")).collect::<Vec<_>>().join("\n")
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    let run = || {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = cmforge::cli::run(["cmforge", "verify", "--space", "DIII5", "--seed", "7"], &mut out, &mut err);
        (code, String::from_utf8(out).expect("utf-8"))
    };
    let (c1, a) = run();
    let (c2, b) = run();
    o.require(c1 == 0 && c2 == 0, format!("exit codes {c1}, {c2}"));
    o.require(a.contains("\"schema_version\""), "no JSON report".into());
    o.require(strip_timing(&a) == strip_timing(&b), "reports differ".into());
    o
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 weighted-norm identities", Box::new(|| criterion_1(&CLASSICAL))),
        ("2 root table", Box::new(criterion_2)),
        ("3 lemma suite", Box::new(|| criterion_3(&CLASSICAL))),
        ("4 derivative oracles", Box::new(|| criterion_4(&CLASSICAL))),
        ("5 exact coefficient identities", Box::new(criterion_5)),
        ("6 isoparametric geometry", Box::new(criterion_6)),
        ("7 negative control", Box::new(|| criterion_7(&[CLASSICAL.as_slice(), &[Family::Eiii]].concat()))),
        ("8 E6 and EIII", Box::new(criterion_8)),
        ("9 determinism", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let status = if outcome.ok { "PASS" } else { "FAIL" };
        println!("criterion {name}: {status} ({:.2?})", start.elapsed());
        for note in &outcome.notes {
            println!("    {note}");
        }
        failed += usize::from(!outcome.ok);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
