use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use toric_k::Rational;
use toric_k_cli::report::{as_rational, exact_values};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toric-k"))
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn scratch(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (v, out.status.code().unwrap())
}

fn rat(v: &Value) -> Rational {
    as_rational(v).unwrap_or_else(|| panic!("not a rational: {v}"))
}

fn frac(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

#[test]
fn validate_catalog_entry() {
    let (v, code) = run_json(&["validate", "catalog:p2"]);
    assert_eq!(code, 0);
    assert_eq!(v["validation"]["delzant"], true);
    assert_eq!(v["validation"]["integral"], true);
    assert_eq!(v["validation"]["reflexive"], true);
}

#[test]
fn validate_names_the_failing_vertex() {
    let out = run(&["validate", &data("triangle_det2.json")]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("|det| = 2 at vertex (0, 1)"), "{text}");
}

#[test]
fn malformed_rational_is_a_positioned_parse_error() {
    let path = scratch(
        "bad_rational.json",
        "{\"name\": \"t\", \"dim\": 1,\n \"facets\": [{\"normal\": [1], \"offset\": \"1/0\"},\n {\"normal\": [-1], \"offset\": \"1\"}]}",
    );
    let out = run(&["validate", &path]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad_rational.json:2:"), "{err}");
    assert!(err.contains("1/0"), "{err}");
}

#[test]
fn missing_file_and_unknown_entry_exit_one() {
    assert_eq!(run(&["validate", "/nonexistent/p.json"]).status.code(), Some(1));
    assert_eq!(run(&["validate", "catalog:nope"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "catalog:p2", "--x0", "1,x"]).status.code(), Some(2));
    assert_eq!(run(&["search-destab", "catalog:p2", "--grid-depth", "0"]).status.code(), Some(2));
    assert_eq!(
        run(&["test-config", "catalog:p1xp1", "--f", &data("crease_x.json"), "--L", "1", "--oracle-mmax", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn analyze_del_pezzos() {
    for name in ["p2", "p1xp1", "bl1p2", "bl2p2", "bl3p2"] {
        let (v, code) = run_json(&["analyze", &format!("catalog:delpezzo-{name}")]);
        assert_eq!(code, 0);
        assert_eq!(v["verdict"], "uniformly relatively K-polystable", "{name}");
        assert!(v.get("fano").is_some());
    }
}

#[test]
fn analyze_unit_square() {
    let (v, code) = run_json(&["analyze", "catalog:square01", "--oracle", "5"]);
    assert_eq!(code, 0);
    assert_eq!(rat(&v["sufficient_condition"]["delta"]), frac(1, 3));
    assert!(v.get("fano").is_none());
    assert_eq!(v["oracle"]["leading_equals_volume"], true);
    assert_eq!(v["oracle"]["subleading_equals_half_boundary"], true);
}

#[test]
fn analyze_with_explicit_x0() {
    let (v, code) = run_json(&["analyze", "catalog:square01", "--x0", "1/4,1/2"]);
    assert_eq!(code, 0);
    assert_eq!(rat(&v["sufficient_condition"]["d_x0"]), frac(3, 4));
    assert_eq!(v["verdict"], "inconclusive");
    let out = run(&["analyze", "catalog:square01", "--x0", "0,1/2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn analyze_rejects_non_delzant() {
    let (v, code) = run_json(&["analyze", &data("triangle_det2.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["validation"]["delzant"], false);
}

#[test]
fn test_config_of_zero_function() {
    let f = scratch("zero.json", r#"{"pieces":[{"a":["0","0"],"c":"0"}]}"#);
    let (v, code) = run_json(&["test-config", "catalog:p1xp1", "--f", &f, "--L", "3/2"]);
    assert_eq!(code, 0);
    let t = &v["test_configuration"];
    assert_eq!(rat(&t["functionals"]["e_na"]), frac(3, 2));
    assert_eq!(rat(&t["functionals"]["m_na"]), frac(0, 1));
    let atoms = t["dh"]["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 1);
    assert_eq!(rat(&atoms[0]["position"]), frac(3, 2));
    assert_eq!(rat(&atoms[0]["mass"]), frac(1, 1));
}

#[test]
fn test_config_of_crease_with_oracle() {
    let csv = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("dh.csv");
    let (v, code) = run_json(&[
        "test-config",
        "catalog:p1xp1",
        "--f",
        &data("crease_x.json"),
        "--L",
        "1",
        "--oracle-mmax",
        "64",
        "--dh-csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(rat(&v["test_configuration"]["functionals"]["m_na"]), frac(1, 4));
    let est = rat(&v["oracle"]["minus_two_f1"]);
    let err = toric_k::rational::to_f64(&((est - frac(1, 4)) / frac(1, 4))).abs();
    assert!(err < 0.05, "{err}");
    let ms: Vec<u64> = v["oracle"]["counts"].as_array().unwrap().iter().map(|c| c["m"].as_u64().unwrap()).collect();
    assert_eq!(ms, vec![16, 32, 64]);
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("t_exact,t_approx,cdf_exact,cdf_approx\n"));
    assert_eq!(text.lines().count(), 18);
}

#[test]
fn test_config_rejects_small_level() {
    let out = run(&["test-config", "catalog:p1xp1", "--f", &data("crease_x.json"), "--L", "1/2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("must be at least max_P f"), "{err}");
}

#[test]
fn test_config_rejects_wrong_dimension() {
    let f = scratch("one_d.json", r#"{"pieces":[{"a":["1"],"c":"0"}]}"#);
    let out = run(&["test-config", "catalog:p1xp1", "--f", &f, "--L", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn search_on_p2_finds_nothing() {
    let (v, code) = run_json(&["search-destab", "catalog:p2"]);
    assert_eq!(code, 0);
    assert_eq!(v["search"]["verdict"], "no-destabilizer-found");
    assert!(rat(&v["search"]["best"]["ratio"]) > frac(0, 1));
}

#[test]
fn search_without_v_on_bl1_certifies() {
    let (v, code) = run_json(&["search-destab", "catalog:bl1p2", "--assume-v-zero"]);
    assert_eq!(code, 0);
    assert_eq!(v["search"]["verdict"], "destabilizer-certificate");
    assert!(rat(&v["search"]["best"]["ratio"]) <= frac(0, 1));
    assert!(rat(&v["search"]["best"]["jnorm"]) > frac(0, 1));
}

#[test]
fn search_counts_candidates_on_unit_square() {
    let (v, _) = run_json(&["search-destab", "catalog:square01", "--grid-depth", "1", "--max-slope", "1"]);
    assert_eq!(v["search"]["candidates"], 4);
}

#[test]
fn search_is_independent_of_thread_count() {
    let args = ["search-destab", "catalog:bl2p2", "--grid-depth", "3", "--json"];
    let one = bin().args(args).env("TORIC_K_THREADS", "1").output().unwrap();
    let many = bin().args(args).env("TORIC_K_THREADS", "4").output().unwrap();
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn catalog_entries() {
    let (v, _) = run_json(&["catalog", "p2"]);
    assert_eq!(v["metadata"]["vertices"], serde_json::json!([[-1, -1], [2, -1], [-1, 2]]));
    let (v, _) = run_json(&["catalog", "bl3p2"]);
    assert_eq!(v["metadata"]["vertices"].as_array().unwrap().len(), 6);
    let (v, _) = run_json(&["catalog", "cube3"]);
    assert_eq!(v["dim"], 3);
    let (list, _) = run_json(&["catalog"]);
    assert!(list.as_array().unwrap().len() >= 13);
}

#[test]
fn catalog_document_is_a_valid_input() {
    let out = run(&["catalog", "bl2p2"]);
    let path = scratch("bl2p2.json", &String::from_utf8(out.stdout).unwrap());
    let (v, code) = run_json(&["validate", &path]);
    assert_eq!(code, 0);
    assert_eq!(v["polytope"]["name"], "bl2p2");
}

#[test]
fn json_reports_round_trip_byte_identically() {
    for args in [
        vec!["analyze", "catalog:bl1p2", "--oracle", "4"],
        vec!["test-config", "catalog:p1xp1", "--f", &data("crease_x.json"), "--L", "2", "--oracle-mmax", "8"],
    ] {
        let mut a = args.clone();
        a.push("--json");
        let text = String::from_utf8(run(&a).stdout).unwrap();
        let parsed: Value = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
        assert_eq!(text, again);
        for s in exact_values(&parsed) {
            assert!(toric_k::rational::parse_rational(&s).unwrap().to_string() == s);
        }
    }
}

#[test]
fn human_and_json_outputs_agree() {
    let args = ["analyze", "catalog:bl2p2"];
    let human = String::from_utf8(run(&args).stdout).unwrap();
    let (v, _) = run_json(&args);
    let values = exact_values(&v);
    assert!(!values.is_empty());
    for s in values {
        assert!(human.contains(&s), "{s} missing from human output");
    }
}
