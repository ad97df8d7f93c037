use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tamagawa::io::{datum_to_json, parse_datum};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tamagawa")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    let text = std::fs::read_to_string(path).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{doc:#}");
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn q8_file(dir: &tempfile::TempDir, big_p: u64, big_q: u64) -> PathBuf {
    let d = tamagawa::fields::q8_landau(big_p, big_q).unwrap().datum;
    write(dir, &format!("q8_{big_p}_{big_q}.json"), &datum_to_json(&d))
}

fn error_code(out: &Output) -> String {
    json_of(out)["error"]["code"].as_str().unwrap().to_string()
}

#[test]
fn cyclotomic_twelve() {
    let out = run(&["tau", "cyclotomic", "12"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["tau"], json!({"num": 2, "den": 1}));
    assert_eq!(v["exact"], json!(true));
    assert_valid(&schema("report.schema.json"), &v);
}

#[test]
fn output_is_byte_identical() {
    for args in [&["tau", "cyclotomic", "35"][..], &["tau", "q8", "17", "613"], &["landau", "search", "--a-max", "50", "--b-max", "20"]] {
        let strip = |o: Output| {
            let mut v = json_of(&o);
            v.as_object_mut().unwrap().remove("elapsed_ms");
            serde_json::to_string(&v).unwrap()
        };
        assert_eq!(strip(run(args)), strip(run(args)));
        if args[0] == "tau" {
            assert_eq!(run(args).stdout, run(args).stdout);
        }
    }
}

#[test]
fn q8_report_with_legendre_table() {
    let v = json_of(&run(&["tau", "q8", "5", "181"]));
    assert_eq!(v["tau"], json!({"num": 1, "den": 2}));
    assert_eq!(v["predicted_tau"], v["tau"]);
    assert_eq!(v["b"], json!(6));
    assert_eq!(v["legendre"], json!([{"q": 181, "symbol": 1}]));
    assert_valid(&schema("report.schema.json"), &v);

    let v = json_of(&run(&["tau", "q8", "17", "69"]));
    assert_eq!(v["tau"], json!({"num": 2, "den": 1}));
    assert_eq!(v["legendre"], json!([{"q": 3, "symbol": -1}, {"q": 23, "symbol": -1}]));
}

#[test]
fn datum_round_trip_and_schema() {
    let dir = tempfile::tempdir().unwrap();
    let datum_schema = schema("datum.schema.json");
    for d in [
        tamagawa::fields::cyclotomic(15).unwrap().datum,
        tamagawa::fields::q8_landau(5, 21).unwrap().datum,
    ] {
        let text = datum_to_json(&d);
        assert_valid(&datum_schema, &serde_json::from_str(&text).unwrap());
        let back = parse_datum(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(datum_to_json(&back), text);
    }
    let family = r#"{"group": {"family": "dihedral", "n": 4}, "pairs": [{"H": [0], "Ntilde": [0, 2]}], "iota": 2}"#;
    assert_valid(&datum_schema, &serde_json::from_str(family).unwrap());
    let perms = r#"{"group": {"degree": 4, "permutation_generators": [[[0, 1, 2, 3]]]}, "pairs": [{"H": [0], "Ntilde": [0]}]}"#;
    assert_valid(&datum_schema, &serde_json::from_str(perms).unwrap());
    let p = write(&dir, "perm.json", perms);
    assert!(run(&["tau", "datum", p.to_str().unwrap()]).status.success());
}

#[test]
fn datum_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let p = q8_file(&dir, 5, 181);
    let v = json_of(&run(&["tau", "datum", p.to_str().unwrap(), "--oracle"]));
    assert_eq!(v["tau"], json!({"num": 1, "den": 2}));
    let oracle = &v["oracle"]["report"];
    assert_eq!(oracle["tau"], v["tau"]);
    assert_eq!(oracle["h1_lambda"], json!([2]));
    assert_eq!(oracle["sha2_lambda"], json!([2, 2]));
}

#[test]
fn empty_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "empty.json", r#"{"group": {"family": "cyclic", "n": 4}, "pairs": []}"#);
    let v = json_of(&run(&["tau", "datum", p.to_str().unwrap()]));
    let order = v["h2z_prime_order"].as_u64().unwrap();
    assert_eq!(v["tau"], json!({"num": 1, "den": order}));
    assert_eq!(order, 4);
}

#[test]
fn product_of_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = q8_file(&dir, 5, 181);
    let b = q8_file(&dir, 17, 613);
    let out = run(&["tau", "product", a.to_str().unwrap(), b.to_str().unwrap(), "--verify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json_of(&out);
    assert_eq!(v["combined"]["tau"], json!({"num": 1, "den": 4}));
    // both Legendre tables are all +1, so every decomposition group is cyclic
    assert_eq!(v["product_tau"], json!({"num": 1, "den": 4}));
    assert_eq!(v["inclusion_holds"], json!(true));
}

#[test]
fn classify_dihedral() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "d6.json", r#"{"group": {"family": "dihedral", "n": 6}, "pairs": [{"H": [0], "Ntilde": [0, 3]}], "iota": 3}"#);
    let v = json_of(&run(&["classify", p.to_str().unwrap()]));
    assert_eq!(v["dihedral"]["value"]["structural_tau"], json!({"num": 2, "den": 1}));
    assert_eq!(v["density"]["s_count"], json!(9));
    assert!(v["abelian"]["not_applicable"].is_string());

    let p = write(&dir, "z4.json", r#"{"group": {"family": "cyclic", "n": 4}, "pairs": [{"H": [0], "Ntilde": [0, 2]}], "iota": 2}"#);
    let v = json_of(&run(&["classify", p.to_str().unwrap()]));
    assert_eq!(v["abelian"]["value"]["kind"], json!("one_or_two"));
    // the only index-2 subgroup of ℤ/4 contains ι
    assert_eq!(v["imaginary_quadratic"]["count"], json!(0));
    assert!(v.get("dihedral").is_none());
}

#[test]
fn oracle_verify_q8() {
    let dir = tempfile::tempdir().unwrap();
    let p = q8_file(&dir, 17, 613);
    let out = run(&["oracle", "verify", p.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_of(&out);
    for c in v["checks"].as_array().unwrap() {
        assert_ne!(c["status"], json!("fail"), "{c}");
    }
}

#[test]
fn landau_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pairs.csv");
    let out = run(&["landau", "search", "--a-max", "2", "--b-max", "6", "--threads", "2", "--out", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_of(&out);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,p,b,q"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len() as u64, v["pair_count"].as_u64().unwrap());
    assert!(rows.contains(&"1,5,6,181"));
    assert!(rows.contains(&"2,17,6,613"));
    for key in ["pair_count", "distinct_p_count", "a_max", "b_max", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    let out = run(&["tau", "cyclotomic"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "usage");
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let bad = write(&dir, "bad.json", "{ not json");
    let out = run(&["tau", "datum", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_code(&out), "datum_invalid");
    let out = run(&["tau", "datum", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(run(&["tau", "q8", "5", "25"]).status.code(), Some(3));

    // ⟨s⟩ in D_3 is not normal
    let nonnormal = write(&dir, "s3.json", r#"{"group": {"family": "dihedral", "n": 3}, "pairs": [{"H": [0], "Ntilde": [0, 3]}]}"#);
    let out = run(&["tau", "datum", nonnormal.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_code(&out), "fast_path_unavailable");

    let big = write(&dir, "z18.json", r#"{"group": {"family": "cyclic", "n": 18}, "pairs": [{"H": [0], "Ntilde": [0, 1]}]}"#);
    let out = run(&["oracle", "verify", big.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(error_code(&out), "budget_exceeded");

    let out = run(&["landau", "search", "--a-max", "1", "--b-max", "2000000000"]);
    assert_eq!(out.status.code(), Some(6));
    assert_eq!(error_code(&out), "overflow");
    let v = json_of(&out);
    assert!(v["error"]["message"].is_string() && v["error"]["context"].is_string());
}
