use cmforge::cli::run;
use cmforge::symspace::{HermitianPair, ModelDocument};
use cmforge::StructureAlgebra;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("cmforge").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("valid JSON")
}

#[test]
fn verify_bdi3_passes() {
    let (code, out, err) = call(&["verify", "--space", "BDI", "--n", "3", "--seed", "42"]);
    assert_eq!(code, 0, "{err}");
    let report = json(&out);
    assert_eq!(report["overall"], "pass");
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["params"]["N"], 6);
    assert_eq!(report["params"]["a"], serde_json::json!({"num": -24, "den": 1}));
}

#[test]
fn verify_rejects_small_n() {
    let (code, _, err) = call(&["verify", "--space", "BDI", "--n", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("n >= 3"));
}

#[test]
fn check_filter_limits_report() {
    let (code, out, _) = call(&["verify", "--space", "DIII5", "--checks", "MUNZNER_A,MUNZNER_B", "--samples", "20"]);
    assert_eq!(code, 0);
    let checks = json(&out)["checks"].as_array().unwrap().clone();
    assert_eq!(checks.len(), 2);
    assert_eq!(checks[0]["id"], "MUNZNER_A");
    assert_eq!(checks[1]["id"], "MUNZNER_B");
}

#[test]
fn unknown_check_is_a_usage_error() {
    assert_eq!(call(&["verify", "--space", "DIII5", "--checks", "NOT_A_CHECK"]).0, 2);
    assert_eq!(call(&["verify", "--space", "DIII5", "--tol", "NOT_A_CHECK=1"]).0, 2);
}

#[test]
fn every_registry_id_is_reachable() {
    for id in cmforge::verify::CheckId::ALL {
        let (code, out, err) =
            call(&["verify", "--space", "BDI(3)", "--checks", id.as_str(), "--samples", "5"]);
        assert_eq!(code, 0, "{id}: {err}");
        assert_eq!(json(&out)["checks"][0]["id"], id.as_str());
    }
}

#[test]
fn zero_tolerance_turns_a_check_into_a_failure() {
    let (code, out, err) = call(&["verify", "--space", "BDI", "--n", "3", "--checks", "GRAD_FORMULA", "--tol", "GRAD_FORMULA=0"]);
    assert_eq!(code, 1);
    assert!(err.contains("GRAD_FORMULA"));
    assert_eq!(json(&out)["overall"], "fail");
}

#[test]
fn text_report() {
    let (code, out, _) = call(&["verify", "--space", "AIII", "--n", "2", "--format", "text", "--samples", "10"]);
    assert_eq!(code, 0);
    assert!(out.contains("MUNZNER_A"));
    assert!(out.trim_end().ends_with("overall: pass"));
}

#[test]
fn seed_is_recorded_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = call(&["verify", "--space", "BDI", "--n", "3", "--checks", "Z_NORM", "--seed", "9", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let report = json(&std::fs::read_to_string(&path).unwrap());
    let expected = cmforge::verify::CheckConfig { seed: 9, ..Default::default() }.check_seed(cmforge::verify::CheckId::ZNorm);
    assert_eq!(report["checks"][0]["seed"], expected);
}

#[test]
fn roots_command() {
    let (code, out, _) = call(&["roots", "--space", "AIII", "--n", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!((v["m1"].as_u64(), v["m2"].as_u64()), (Some(2), Some(1)));
    let (code, out, _) = call(&["roots", "--space", "EIII", "--format", "json"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["root_type"], "BC2");
    let roots = v["positive_roots"].as_array().unwrap();
    assert_eq!(roots.len(), 6);
    let total: u64 = roots.iter().map(|r| r["multiplicity"].as_u64().unwrap()).sum();
    assert_eq!(total + 2, 32);
}

#[test]
fn list_spaces() {
    let (code, out, _) = call(&["list-spaces"]);
    assert_eq!(code, 0);
    assert!(out.contains("EIII") && out.contains("(6, 9)"));
    let (_, out, _) = call(&["list-spaces", "--format", "json"]);
    let rows = json(&out);
    assert_eq!(rows[0]["family"], "BDI");
    assert_eq!(rows[0]["root_type"], "C2");
}

#[test]
fn export_import_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    let p = path.to_str().unwrap();
    assert_eq!(call(&["export-model", "--space", "AIII", "--n", "2", "--out", p]).0, 0);
    let (code, out, err) = call(&["import-model", p, "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(json(&out)["N"], 8);

    let doc: ModelDocument = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let pair = HermitianPair::from_model(&doc).unwrap();
    let original = cmforge::symspace::build_space(cmforge::Family::Aiii(2)).unwrap();
    let a: Vec<_> = original.algebra().entries().collect();
    let b: Vec<_> = pair.algebra().entries().collect();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!((x.0, x.1, x.2), (y.0, y.1, y.2));
        assert_eq!(x.3.to_bits(), y.3.to_bits());
    }
    assert!(pair.algebra().validate().is_empty());
    for (x, y) in original.p_basis().iter().zip(pair.p_basis()) {
        assert!(x.coords().iter().zip(y.coords().iter()).all(|(u, v)| u.to_bits() == v.to_bits()));
    }
}

#[test]
fn import_rejects_tampered_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    let p = path.to_str().unwrap();
    assert_eq!(call(&["export-model", "--space", "BDI", "--n", "3", "--out", p]).0, 0);
    let mut doc: serde_json::Value = json(&std::fs::read_to_string(&path).unwrap());
    doc["entries"][0][3] = serde_json::json!(5.0);
    std::fs::write(&path, doc.to_string()).unwrap();
    assert_eq!(call(&["import-model", p]).0, 2);
    assert_eq!(call(&["import-model", "/nonexistent/model.json"]).0, 2);
}

#[test]
fn algebra_json_round_trip() {
    let alg = cmforge::liealg::so_algebra(5).unwrap();
    let back = StructureAlgebra::from_json(&alg.to_json().unwrap()).unwrap();
    assert_eq!(back.exact_entries(), alg.exact_entries());
}

#[test]
fn seed_falls_back_to_environment() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_cmforge"))
        .args(["verify", "--space", "BDI", "--n", "3", "--checks", "Z_NORM"])
        .env("CMFORGE_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = json(&String::from_utf8(out.stdout).unwrap());
    let expected = cmforge::verify::CheckConfig { seed: 9, ..Default::default() }.check_seed(cmforge::verify::CheckId::ZNorm);
    assert_eq!(report["checks"][0]["seed"], expected);
}
