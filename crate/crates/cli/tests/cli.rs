use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn scene(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftquad")).args(args).output().expect("binary runs")
}

fn run_scene(name: &str, args: &[&str]) -> (i32, Value) {
    let path = scene(name);
    let mut all = vec!["--scene", path.to_str().unwrap()];
    all.extend_from_slice(args);
    let out = run(&all);
    let json = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (out.status.code().unwrap(), json)
}

fn reals(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn forward_on_the_square_finds_the_centre() {
    let (code, r) = run_scene("square.json", &["forward"]);
    assert_eq!(code, 0);
    let p = reals(&r["results"]["point"]);
    assert!(p[0].abs() < 1e-12 && p[1].abs() < 1e-12, "{p:?}");
    assert_eq!(r["status"]["exit_code"], 0);
    assert_eq!(r["command"]["name"], "forward");
    assert_eq!(r["scene"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn forward_on_the_skew_quad_lands_near_the_origin() {
    let (code, r) = run_scene("skew-quad.json", &["forward"]);
    assert_eq!(code, 0);
    let p = reals(&r["results"]["point"]);
    assert!(p[0].hypot(p[1]) < 0.02, "{p:?}");
}

#[test]
fn forward_on_the_sphere_recovers_the_pole() {
    let (code, r) = run_scene("sphere-quad.json", &["forward"]);
    assert_eq!(code, 0);
    let p = reals(&r["results"]["point"]);
    assert!((p[2] - 1.0).abs() < 1e-10 && p[0].hypot(p[1]) < 1e-6, "{p:?}");
}

#[test]
fn iteration_cap_gives_no_convergence() {
    let (code, r) = run_scene("skew-quad.json", &["--max-iter", "2", "forward"]);
    assert_eq!(code, 2);
    assert_eq!(r["status"]["error"]["kind"], "NoConvergence");
    assert!(r["results"]["best"]["point"].is_array());
}

#[test]
fn malformed_json_exits_1_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"curvature\": 0, \"angular\": ").unwrap();
    let out = run(&["--scene", bad.to_str().unwrap(), "forward"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn schema_violation_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"curvature\": 0,\n \"angular\": {\"directions_deg\": [0, 90, 180, 270], \"lengths\": [1, 1, 1], \"weights\": [1, 1, 1, 1]}}").unwrap();
    let out = run(&["--scene", bad.to_str().unwrap(), "forward"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("angular.lengths") && err.contains("line 2"), "{err}");
}

#[test]
fn missing_scene_flag_exits_1() {
    let out = run(&["forward"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn inverse_reproduces_the_skew_weights() {
    let (code, r) = run_scene("skew-quad.json", &["inverse", "--budget", "2.37", "--wd", "0.4"]);
    assert_eq!(code, 0);
    let w = reals(&r["results"]["rows"][0]["weights"]);
    for (got, want) in w.iter().zip([0.81, 0.712, 0.444, 0.4]) {
        assert!((got - want).abs() < 0.01, "{w:?}");
    }
    assert_eq!(r["results"]["sign_report"]["principle_holds"], true);
}

#[test]
fn inverse_sweep_trades_weight_monotonically() {
    let (code, r) = run_scene("skew-quad.json", &["inverse", "--budget", "2.37", "--wd", "sweep 0:0.8:9"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<f64>> =
        r["results"]["rows"].as_array().unwrap().iter().map(|row| reals(&row["weights"])).collect();
    assert_eq!(rows.len(), 9);
    for pair in rows.windows(2) {
        assert!(pair[1][1] > pair[0][1]);
        assert!(pair[1][0] < pair[0][0]);
        assert!(pair[1][2] < pair[0][2]);
    }
    let (_, plain) = run_scene("skew-quad.json", &["inverse", "--budget", "2.37", "--wd", "0:0.8:9"]);
    assert_eq!(plain["results"]["rows"], r["results"]["rows"]);
}

#[test]
fn inverse_on_the_cross_uses_the_exact_diagonal_line() {
    let (code, r) = run_scene("cross.json", &["inverse"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["kind"], "diagonal");
    assert_eq!(reals(&r["results"]["slopes"]), vec![-1.0, 1.0, -1.0]);
    assert_eq!(r["results"]["budget"].as_f64().unwrap(), 1.0);
}

#[test]
fn inverse_on_the_diagonal_scene_has_the_expected_signs() {
    let (code, r) = run_scene("diagonal.json", &["inverse", "--wd", "0.4"]);
    assert_eq!(code, 0);
    let line = &r["results"]["line"];
    assert!(line["x_c"].as_f64().unwrap() < 0.0);
    assert!(line["x_b"].as_f64().unwrap() > 0.0);
    assert!(line["determinant"].as_f64().unwrap() < 0.0);
    assert_eq!(r["results"]["rows"][0]["positive"], true);
}

#[test]
fn bad_wd_spec_exits_1() {
    let (code, r) = run_scene("skew-quad.json", &["inverse", "--wd", "0:1"]);
    assert_eq!(code, 1);
    assert_eq!(r["status"]["error"]["kind"], "Usage");
}

#[test]
fn symmetrize_class_a_writes_the_figure() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("a.svg");
    let (code, r) = run_scene(
        "skew-quad.json",
        &["symmetrize", "--class", "A", "--par-tol", "5e-3", "--out-svg", svg.to_str().unwrap()],
    );
    assert_eq!(code, 0);
    assert_eq!(r["results"]["report"]["is_parallelogram"], true);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains(r#"version="1.1""#) && text.contains("viewBox="));
    assert!(
        text.contains("stroke-dasharray") && text.contains(r#"id="legend""#) && text.contains(r#"id="parallelogram""#)
    );
}

#[test]
fn symmetrize_class_b_on_the_second_weight_set() {
    let (code, r) = run_scene("skew-quad-b.json", &["symmetrize", "--class", "B", "--par-tol", "5e-3"]);
    assert_eq!(code, 0);
    let m = reals(&r["results"]["report"]["opposite_side_mismatch"]);
    assert!(m.iter().all(|x| *x < 5e-3), "{m:?}");
    assert_eq!(r["results"]["report"]["is_parallelogram"], true);
}

#[test]
fn symmetrize_direct_on_the_cross() {
    let (code, r) = run_scene("cross.json", &["symmetrize", "--class", "direct"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["report"]["class"], "Direct");
    assert_eq!(r["results"]["report"]["is_parallelogram"], true);
}

#[test]
fn symmetrize_without_a_class_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(
        &path,
        r#"{"curvature": 0, "angular": {"directions_deg": [0, 120, 210, 260], "lengths": [1, 1, 1, 1], "weights": [0.3, 0.9, 0.5, 0.1]}}"#,
    )
    .unwrap();
    let out = run(&["--scene", path.to_str().unwrap(), "symmetrize"]);
    assert_eq!(out.status.code(), Some(3));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["status"]["error"]["kind"], "NoClassApplicable");
}

#[test]
fn unwritable_svg_exits_1_but_prints_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("missing").join("a.svg");
    let (code, r) = run_scene("skew-quad.json", &["symmetrize", "--class", "A", "--out-svg", svg.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["status"]["error"]["kind"], "Io");
    assert!(r["results"]["report"].is_object());
}

#[test]
fn glue_identity_is_all_zero() {
    let (code, r) = run_scene("sphere-quad.json", &["glue", "--case", "mprime", "--k1", "1", "--k2", "1"]);
    assert_eq!(code, 0);
    assert!(reals(&r["results"]["spec"]["epsilon"]).iter().all(|e| *e == 0.0));
    assert!(reals(&r["results"]["comparative"]["deltas"]).iter().all(|d| *d == 0.0));
}

#[test]
fn glue_on_the_sphere_balances_the_deltas() {
    for case in ["mprime", "mdoubleprime"] {
        let (code, r) = run_scene("sphere-quad.json", &["glue", "--case", case, "--k1", "0.5", "--k2", "2"]);
        assert_eq!(code, 0, "{case}");
        assert!(r["results"]["comparative"]["delta_sum"].as_f64().unwrap().abs() < 1e-10);
        assert!(r["results"]["spec"]["angle_sum_defect"].as_f64().unwrap().abs() < 1e-10);
    }
}

#[test]
fn glue_rejects_k1_above_the_scene_curvature() {
    let (code, r) = run_scene("sphere-quad.json", &["glue", "--case", "mprime", "--k1", "1.5", "--k2", "2"]);
    assert_eq!(code, 1);
    assert_eq!(r["status"]["error"]["kind"], "Precondition");
}

#[test]
fn check_passes_with_a_warning_on_rounded_weights() {
    let (code, r) = run_scene("skew-quad.json", &["check"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["position"], "Interior");
    let res = r["results"]["residual"]["norm"].as_f64().unwrap();
    assert!((res - 7e-4).abs() < 1e-4, "{res}");
    assert_eq!(r["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn check_on_exact_weights_is_clean() {
    for name in ["diagonal.json", "cross.json", "sphere-quad.json"] {
        let (code, r) = run_scene(name, &["check"]);
        assert_eq!(code, 0, "{name}");
        assert!(r["results"]["residual"]["norm"].as_f64().unwrap() < 1e-12, "{name}");
        assert!(r["warnings"].as_array().unwrap().is_empty(), "{name}");
    }
}

#[test]
fn check_reports_the_perimeter_bound() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.json");
    std::fs::write(
        &path,
        r#"{"curvature": 1, "angular": {"directions_deg": [0, 90, 180, 270], "lengths": [0.1, 3.0, 0.1, 3.0], "weights": [1, 1, 1, 1]}}"#,
    )
    .unwrap();
    let out = run(&["--scene", path.to_str().unwrap(), "check"]);
    assert_eq!(out.status.code(), Some(4));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    let bound = r["results"]["perimeter"]["bound"].as_f64().unwrap();
    assert!((bound - std::f64::consts::TAU).abs() < 1e-15);
    assert_eq!(r["results"]["checks"]["perimeter"], false);
    // Other commands refuse the scene outright.
    let out = run(&["--scene", path.to_str().unwrap(), "forward"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    let args = |p: &Path| {
        let s = scene("skew-quad.json");
        let out =
            run(&["--scene", s.to_str().unwrap(), "symmetrize", "--class", "A", "--out-svg", p.to_str().unwrap()]);
        out.stdout
    };
    let (ja, jb) = (args(&a), args(&b));
    // The echoed SVG path differs; everything else is identical.
    let strip = |s: &[u8], p: &Path| String::from_utf8_lossy(s).replace(p.to_str().unwrap(), "OUT");
    assert_eq!(strip(&ja, &a), strip(&jb, &b));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    for cmd in [
        &["forward"][..],
        &["inverse", "--wd", "sweep 0:0.8:9"],
        &["glue", "--case", "mprime", "--k1", "0.5", "--k2", "2"],
    ] {
        let name = if cmd[0] == "glue" { "sphere-quad.json" } else { "skew-quad.json" };
        let s = scene(name);
        let mut all = vec!["--scene", s.to_str().unwrap()];
        all.extend_from_slice(cmd);
        assert_eq!(run(&all).stdout, run(&all).stdout);
    }
}

#[test]
fn reports_have_sorted_keys_and_full_precision() {
    let out = run(&["--scene", scene("skew-quad.json").to_str().unwrap(), "forward"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.find("\"command\"").unwrap() < text.find("\"results\"").unwrap());
    assert!(text.find("\"results\"").unwrap() < text.find("\"scene\"").unwrap());
    assert!(text.find("\"scene\"").unwrap() < text.find("\"status\"").unwrap());
    let token = text.split("\"objective\": ").nth(1).unwrap().split([',', '\n']).next().unwrap();
    let mantissa = token.split(['e', 'E']).next().unwrap();
    let digits = mantissa.chars().filter(char::is_ascii_digit).skip_while(|c| *c == '0').count();
    assert!(digits <= 17, "{token}");
    // The printed digits are the correctly rounded 17-digit expansion.
    let expanded = format!("{:.16e}", token.parse::<f64>().unwrap());
    let want: String = expanded.split('e').next().unwrap().chars().filter(char::is_ascii_digit).collect();
    let got: String = mantissa.chars().filter(char::is_ascii_digit).skip_while(|c| *c == '0').collect();
    assert!(want.starts_with(&got) && want[got.len()..].chars().all(|c| c == '0'), "{token} vs {expanded}");
}

#[test]
fn emitted_scenes_are_re_ingestible() {
    let dir = tempfile::tempdir().unwrap();
    let (_, fwd) = run_scene("skew-quad.json", &["forward"]);
    let (_, inv) = run_scene("skew-quad.json", &["inverse", "--budget", "2.37", "--wd", "0.4"]);
    let (_, glued) = run_scene("sphere-quad.json", &["glue", "--case", "mdoubleprime", "--k1", "0.5", "--k2", "2"]);
    let scenes = [&fwd["results"]["scene"], &inv["results"]["rows"][0]["scene"], &glued["results"]["perturbed_scene"]];
    for (i, s) in scenes.iter().enumerate() {
        let path = dir.path().join(format!("s{i}.json"));
        std::fs::write(&path, serde_json::to_string(s).unwrap()).unwrap();
        let out = run(&["--scene", path.to_str().unwrap(), "check"]);
        let r: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(r["results"]["checks"]["convexity"], true, "scene {i}");
        assert_eq!(r["results"]["checks"]["perimeter"], true, "scene {i}");
    }
    // The inverse row makes the point stationary exactly.
    let path = dir.path().join("s1.json");
    let out = run(&["--scene", path.to_str().unwrap(), "check"]);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(r["results"]["residual"]["norm"].as_f64().unwrap() < 1e-12);
}

#[test]
fn plain_text_mode() {
    let out = run(&["--scene", scene("square.json").to_str().unwrap(), "forward", "--json", "false"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("results.status.kind = Interior")), "{text}");
}
