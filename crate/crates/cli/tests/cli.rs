use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use equichar_cli::cli_main;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["equichar"];
    argv.extend_from_slice(args);
    let code = cli_main(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn s3() -> Value {
    json!({"type": "perm", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]})
}

fn s3_point() -> Value {
    json!({"size": 1, "gO": s3(), "gB": {"type": "trivial"}, "actO": [[0], [0]]})
}

#[test]
fn marks_of_s3() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "s3.json", &s3());
    let (code, out, _) = run(&["--format", "json", "group", "marks", "--input", g.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let marks = v["marks"].as_array().unwrap();
    assert_eq!(marks.len(), 4);
    let diag: Vec<String> = (0..4)
        .map(|i| marks[i][i].as_str().unwrap().to_string())
        .collect();
    // |N(H)/H| for e, C2, C3, S3
    assert_eq!(diag, ["6", "1", "2", "1"]);
    assert!(marks.iter().all(|row| row.as_array().unwrap().len() == 4));
}

#[test]
fn class_count_of_s3() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "s3.json", &s3());
    let (code, out, _) = run(&["--format", "json", "group", "classes", "--input", g.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], json!(3));
}

#[test]
fn chi_k_of_point() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "pt.json", &s3_point());
    let x = x.to_str().unwrap();
    for (k, want) in [("0", "1"), ("1", "3"), ("2", "8")] {
        let (code, out, _) = run(&["chi-k", "--k", k, "--input", x]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), want);
    }
    let (_, out, _) = run(&["chi-orb", "--input", x]);
    assert_eq!(out.trim(), "3");
    let (_, out, _) = run(&["chi", "--input", x]);
    assert_eq!(out.trim(), "1");
}

#[test]
fn equivariant_chi_k_json() {
    let dir = tempfile::tempdir().unwrap();
    let x = json!({"size": 2, "gO": {"type": "cyclic", "n": 2}, "gB": {"type": "cyclic", "n": 2},
                   "actO": [[1, 0]], "actB": [[1, 0]]});
    let x = write(dir.path(), "bi.json", &x);
    let (code, out, _) = run(&["--format", "json", "chi-k-eq", "--k", "1", "--input", x.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 2);
}

#[test]
fn theorem1_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "pt.json", &s3_point());
    let x = x.to_str().unwrap();
    let (code, out, _) = run(&["--no-timing", "verify", "theorem1", "--k", "2", "--N", "3", "--input", x]);
    assert_eq!(code, 0, "{out}");
    let (code, _, err) = run(&[
        "verify", "theorem1", "--k", "2", "--N", "3", "--input", x, "--max-wreath-k2", "10",
    ]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
}

#[test]
fn no_timing_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "pt.json", &s3_point());
    let args = ["--format", "json", "--no-timing", "verify", "lemma1", "--N", "4", "--input", x.to_str().unwrap()];
    let (code, a, _) = run(&args);
    assert_eq!(code, 0);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
    assert!(!a.contains("\"ms\""));
}

#[test]
fn malformed_input_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = json!({"size": 1, "gO": {"type": "cyclic", "n": "two"}, "gB": {"type": "trivial"}});
    let x = write(dir.path(), "bad.json", &bad);
    let (code, _, err) = run(&["chi", "--input", x.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("gO"), "{err}");

    let bad = json!({"size": 2, "gO": {"type": "cyclic", "n": 2}, "gB": {"type": "trivial"}, "actO": [[0, 0]]});
    let x = write(dir.path(), "notperm.json", &bad);
    let (code, _, err) = run(&["chi", "--input", x.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());

    let (code, _, _) = run(&["chi", "--input", "/nonexistent/x.json"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 1);
}

#[test]
fn power_over_integers() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", &json!({"series": [1, 1, 1, 0], "exponent": 3}));
    let (code, out, _) = run(&["--format", "json", "power", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let c: Vec<i64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_i64().unwrap())
        .collect();
    assert_eq!(c, [1, 3, 6, 7]);
}

#[test]
fn power_over_burnside_ring() {
    let dir = tempfile::tempdir().unwrap();
    let p = json!({"group": {"type": "cyclic", "n": 2}, "series": [1, -1, 0, 0], "exponent": [1, 0]});
    let p = write(dir.path(), "p.json", &p);
    let (code, out, err) = run(&["power", "--input", p.to_str().unwrap(), "--N", "3"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("O(t^4)"), "{out}");
}

#[test]
fn zeta_series() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(dir.path(), "z.json", &json!({"group": {"type": "trivial"}, "class": 0}));
    let (code, out, _) = run(&["zeta", "--input", z.to_str().unwrap(), "--N", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "[G/e] + [G/e]·t + [G/e]·t^2 + [G/e]·t^3 + O(t^4)");
    let z = write(dir.path(), "bad.json", &json!({"group": {"type": "trivial"}, "class": 5}));
    assert_eq!(run(&["zeta", "--input", z.to_str().unwrap(), "--N", "3"]).0, 1);
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let g = write(dir.path(), "s3.json", &s3());
    let args = [
        "--format",
        "json",
        "--cache-dir",
        cache.to_str().unwrap(),
        "group",
        "marks",
        "--input",
        g.to_str().unwrap(),
    ];
    let (code, first, _) = run(&args);
    assert_eq!(code, 0);
    let entries: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let (_, second, _) = run(&args);
    assert_eq!(first, second);

    let entry = entries[0].as_ref().unwrap().path();
    std::fs::write(&entry, "{ not json").unwrap();
    let (code, third, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(first, third);
}

#[test]
fn axioms_and_props() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "z2.json", &json!({"type": "cyclic", "n": 2}));
    let g = g.to_str().unwrap();
    let (code, _, _) = run(&["verify", "axioms", "--trials", "10"]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["verify", "axioms", "--ring", "lext", "--input", g, "--trials", "5", "--N", "4"]);
    assert_eq!(code, 0);
    let (code, _, err) = run(&["verify", "axioms", "--ring", "burnside"]);
    assert_eq!(code, 1);
    assert!(err.contains("--input"));
    let (code, _, _) = run(&["verify", "props12", "--input", g, "--trials", "5", "--N", "4"]);
    assert_eq!(code, 0);
}

#[test]
fn orbifold_class_of_point() {
    let dir = tempfile::tempdir().unwrap();
    let input = json!({
        "gO": {"type": "cyclic", "n": 2},
        "datum": {"k": 1, "weights": [], "strata": [
            {"tuple": [0], "class": [1]},
            {"tuple": [1], "class": [1]}
        ]}
    });
    let p = write(dir.path(), "orb.json", &input);
    let (code, out, err) = run(&["orbifold-class", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.trim(), "2·[G/e]");

    let bad = json!({"gO": {"type": "cyclic", "n": 2},
                     "datum": {"k": 1, "weights": [], "strata": [{"tuple": [7], "class": [1]}]}});
    let p = write(dir.path(), "bad.json", &bad);
    let (code, _, err) = run(&["orbifold-class", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown tuple-class label"), "{err}");
}
