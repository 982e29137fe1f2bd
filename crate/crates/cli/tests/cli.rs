use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn veechmix(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_veechmix"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", stdout(o)))
}

fn write(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).unwrap();
}

#[test]
fn analyze_prints_cycles_and_b_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let o = veechmix(dir.path(), &["--json", "iet", "analyze", "--perm", "4,2,3,1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["cycles"], serde_json::json!([[0, 3], [1, 4], [2]]));
    assert_eq!(v["b_vectors"], serde_json::json!([[1, 0, -1, 1], [-1, 1, 0, -1], [0, -1, 1, 0]]));

    let text = stdout(&veechmix(dir.path(), &["iet", "analyze", "--perm", "4,2,3,1"]));
    assert!(text.contains("(4,2,3,1)"), "{text}");
}

#[test]
fn weakmix_exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "t.json", r#"{"perm": [4,2,3,1], "lengths": ["beta1", "beta2", "1/3", "1/5"]}"#);
    write(d, "ones.json", r#"[1, 1, 1, 1]"#);
    write(d, "h.json", r#"["1", "2", "1 + beta1", "3 - beta2"]"#);
    let basis = "beta1=0.41421356237,beta2=0.61803398875";

    let o = veechmix(d, &["--basis", basis, "weakmix", "check", "--iet", "t.json", "--times", "ones.json"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("Inconclusive"));

    let o = veechmix(d, &["--basis", basis, "--json", "weakmix", "check", "--iet", "t.json", "--times", "h.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(json(&o)["status"], "WeaklyMixingAE");
}

#[test]
fn fig1_preset_round_trips_and_draws_its_slits() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = veechmix(
        d,
        &["--json", "surface", "fig1", "--slits-out", "slits.json", "--out", "s.json", "--svg", "s.svg", "--section-out", "sec.json"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["slit_pairs"], 5);
    assert_eq!(v["genus"], 6);

    let written: Value = serde_json::from_str(&std::fs::read_to_string(d.join("slits.json")).unwrap()).unwrap();
    let preset: Value = serde_json::from_str(veechmix::surface::FIG1_DEFAULT_JSON).unwrap();
    assert_eq!(written["slits"], preset["slits"]);

    // reload the written slit list and get the same surface back
    let again = veechmix(d, &["--json", "surface", "fig1", "--slits", "slits.json", "--out", "s2.json"]);
    assert_eq!(again.status.code(), Some(0));
    let a: Value = serde_json::from_str(&std::fs::read_to_string(d.join("s.json")).unwrap()).unwrap();
    let b: Value = serde_json::from_str(&std::fs::read_to_string(d.join("s2.json")).unwrap()).unwrap();
    assert!(a["polygons"].as_array().is_some_and(|p| !p.is_empty()));
    assert_eq!(a["polygons"], b["polygons"]);
    assert_eq!(a["pairings"], b["pairings"]);

    let svg = std::fs::read_to_string(d.join("s.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.matches("<line").count() >= 10, "one line per slit at least");

    // the return map of the written surface to the written section is (4,2,3,1)
    let o = veechmix(d, &["--json", "flow", "return-map", "--surface", "s.json", "--dir", "0,1", "--section", "sec.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["iet"]["perm"], serde_json::json!([4, 2, 3, 1]));
}

#[test]
fn demo_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = veechmix(d, &["--json", "demo", "--lags", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["certificate"]["status"], "WeaklyMixingAE");
    assert_eq!(v["permutation"]["r"], 3);

    let o = veechmix(d, &["--json", "demo", "--times-equal", "--lags", "200"]);
    assert_eq!(json(&o)["certificate"]["status"], "Inconclusive");

    let o = veechmix(d, &["--json", "demo", "--hv", "--a", "1", "--b", "2", "--samples", "10", "--jk", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["class"], "AlmostIntegrable");
}

#[test]
fn json_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["--json", "--seed", "7", "demo", "--lags", "100"];
    let (a, b) = (veechmix(d, &args), veechmix(d, &args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("seed = 7"));
}

#[test]
fn out_dir_receives_complete_files_only() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = d.join("results");
    std::fs::create_dir(&out).unwrap();
    let o = veechmix(d, &["--out-dir", "results", "demo", "--lags", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut names: Vec<String> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    assert_eq!(names, ["demo-certificate.json", "demo-mixing.csv", "demo-surface.svg"]);
    let csv = std::fs::read_to_string(out.join("demo-mixing.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("lag,corr_re,corr_im,corr_abs_centered,cesaro,cesaro_spread"));
    assert_eq!(csv.lines().count(), 1 + 101);
}

#[test]
fn weyl_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "t.json", r#"{"perm": [2,1], "lengths": ["beta1", "1"]}"#);
    let o = veechmix(
        d,
        &["--basis", "beta1=0.618", "spectrum", "weyl", "--iet", "t.json", "--alpha-grid", "0:0.5:0.25", "--n", "1000", "--csv", "w.csv"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(d.join("w.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "alpha,weyl");
    assert_eq!(lines.len(), 4);
    // alpha = 0 is the Birkhoff average of e(x), near zero for an irrational rotation
    let w0: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!(w0 < 0.05, "{w0}");
}

#[test]
fn usage_and_data_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(veechmix(d, &["iet", "analyze"]).status.code(), Some(64));
    assert_eq!(veechmix(d, &["no-such-command"]).status.code(), Some(64));
    assert_eq!(veechmix(d, &["weakmix", "check", "--iet", "missing.json", "--times", "missing.json"]).status.code(), Some(64));
    assert_eq!(veechmix(d, &["--help"]).status.code(), Some(0));

    write(d, "bad.json", "{ not json");
    write(d, "ones.json", "[1, 1, 1, 1]");
    assert_eq!(veechmix(d, &["weakmix", "check", "--iet", "bad.json", "--times", "ones.json"]).status.code(), Some(65));
    write(d, "t.json", r#"{"perm": [4,2,3,1], "lengths": [1, 1, 1]}"#);
    let o = veechmix(d, &["weakmix", "check", "--iet", "t.json", "--times", "ones.json"]);
    assert_eq!(o.status.code(), Some(65));
    assert!(!o.stderr.is_empty());
    assert_eq!(veechmix(d, &["surface", "hv", "--a", "2", "--b", "1"]).status.code(), Some(65));
}

#[test]
fn hv_surface_with_irrational_side() {
    let dir = tempfile::tempdir().unwrap();
    let o = veechmix(dir.path(), &["--json", "--basis", "beta1=0.41421356237", "surface", "hv", "--a", "1", "--b", "1+beta1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["class"], "WeakMixing");
    assert_eq!(v["genus"], 2);
    assert_eq!(v["cone_angles_over_pi"], serde_json::json!([6]));
}
