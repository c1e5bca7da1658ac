use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use maxface::formats::{read_h_csv, read_obj, Sidecar};
use maxface_core::families;
use serde_json::Value;
use statrs::function::gamma::gamma;
use tempfile::TempDir;

fn maxface(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxface"))
        .current_dir(dir)
        .arg("--roots")
        .arg(dir.join("roots.json"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn check<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn list_names_every_entry() {
    let dir = TempDir::new().unwrap();
    let out = maxface(dir.path(), &["list"]);
    assert_eq!(code(&out), 0);
    let names: Vec<String> = report(&out)["output"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap().to_string()).collect();
    for n in [
        "catenoid",
        "moebius-b2",
        "moebius-k",
        "moebius-family",
        "moebius-sym",
        "henneberg-max",
        "klein",
        "klein-1",
        "klein-2",
        "counter-genus1-deg2",
        "counter-moebius-b1",
    ] {
        assert!(names.iter().any(|m| m == n), "{n} missing from {names:?}");
    }
    // list needs no roots
    assert!(!dir.path().join("roots.json").exists());
}

#[test]
fn check_klein_1_materializes_the_roots() {
    let dir = TempDir::new().unwrap();
    let out = maxface(dir.path(), &["check", "klein-1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(r["output"]["topology"]["jm_residual"], 0);
    assert_eq!(r["output"]["periods"]["verdict"], "well-defined");
    let cache: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("roots.json")).unwrap()).unwrap();
    assert!((cache["r1"].as_f64().unwrap() - 0.17137).abs() <= 5e-4);
    assert!((cache["r2"].as_f64().unwrap() - 0.691724).abs() <= 5e-4);
}

#[test]
fn corrupt_root_cache_is_rebuilt() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("roots.json"), "{\"r1\": 5}").unwrap();
    let out = maxface(dir.path(), &["check", "klein-2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let cache: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("roots.json")).unwrap()).unwrap();
    assert!(cache["r2"].is_f64());
}

#[test]
fn expected_obstruction_counts_as_a_pass() {
    let dir = TempDir::new().unwrap();
    let out = maxface(dir.path(), &["check", "counter-moebius-b1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["output"]["periods"]["verdict"], "obstructed");
    assert_eq!(check(&r, "periods")["detail"]["verdict"], "obstructed");
}

#[test]
fn every_catalog_entry_meets_its_expectations() {
    let dir = TempDir::new().unwrap();
    for name in [
        "catenoid",
        "moebius-b2",
        "moebius-b2:0.5",
        "moebius-k:2",
        "moebius-family",
        "moebius-sym",
        "henneberg-max",
        "klein",
        "counter-genus1-deg2",
    ] {
        let out = maxface(dir.path(), &["check", name]);
        assert_eq!(code(&out), 0, "{name}: {}", stderr(&out));
    }
}

#[test]
fn unknown_names_and_bad_flags_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&maxface(dir.path(), &["check", "nonexistent"])), 2);
    assert_eq!(code(&maxface(dir.path(), &["check", "moebius-b2:abc"])), 2);
    assert_eq!(code(&maxface(dir.path(), &["check", "moebius-b2:-1"])), 2);
    assert_eq!(code(&maxface(dir.path(), &["check", "catenoid", "--tol", "-1"])), 2);
    assert_eq!(code(&maxface(dir.path(), &["check"])), 2);
    assert_eq!(code(&maxface(dir.path(), &["frobnicate"])), 2);
    assert_eq!(code(&maxface(dir.path(), &["describe", "nope"])), 2);
}

#[test]
fn check_output_is_reproducible() {
    let dir = TempDir::new().unwrap();
    for name in ["klein-1", "moebius-family", "counter-genus1-deg2"] {
        let a = maxface(dir.path(), &["check", name]);
        let b = maxface(dir.path(), &["check", name]);
        assert_eq!(a.stdout, b.stdout, "{name}");
    }
}

#[test]
fn timing_is_opt_in() {
    let dir = TempDir::new().unwrap();
    assert!(report(&maxface(dir.path(), &["check", "catenoid"])).get("wall_time_s").is_none());
    assert!(report(&maxface(dir.path(), &["--timing", "check", "catenoid"]))["wall_time_s"].is_f64());
}

#[test]
fn periods_cross_check_closed_forms() {
    let dir = TempDir::new().unwrap();
    for (name, key) in [("moebius-family", "closed_forms"), ("moebius-sym", "closed_forms"), ("moebius-b2:2", "phi3_period"), ("counter-genus1-deg2", "obstruction")] {
        let out = maxface(dir.path(), &["periods", name]);
        assert_eq!(code(&out), 0, "{name}: {}", stderr(&out));
        assert_eq!(check(&report(&out), key)["pass"], true, "{name}");
    }
    let r = report(&maxface(dir.path(), &["periods", "moebius-sym"]));
    assert!(r["output"]["max_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn solve_klein_reports_two_roots() {
    let dir = TempDir::new().unwrap();
    let out = maxface(dir.path(), &["solve-klein"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let roots: Vec<f64> = r["output"]["roots"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(roots.len(), 2);
    assert!((roots[0] - 0.17137).abs() <= 5e-4 && (roots[1] - 0.691724).abs() <= 5e-4);
    assert!(r["output"].get("scan").is_none());

    let scan = report(&maxface(dir.path(), &["solve-klein", "--scan"]));
    assert!(scan["output"]["scan"].as_array().unwrap().len() > 10);

    let tight = report(&maxface(dir.path(), &["solve-klein", "--tol", "1e-12"]));
    assert_eq!(tight["pass"], true);
    let t: Vec<f64> = tight["output"]["roots"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(t.len(), 2);
    assert!((t[0] - roots[0]).abs() <= 1e-8 && (t[1] - roots[1]).abs() <= 1e-8);
}

#[test]
fn plot_h_changes_sign_in_exactly_two_cells() {
    let dir = TempDir::new().unwrap();
    let out = maxface(dir.path(), &["plot-h", "--min", "0.05", "--max", "0.95", "--samples", "100", "--out", "h.csv"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = read_h_csv(fs::read_to_string(dir.path().join("h.csv")).unwrap().as_bytes()).unwrap();
    assert_eq!(rows.len(), 100);
    let cells: Vec<(f64, f64)> = rows.windows(2).filter(|w| w[0].1 * w[1].1 < 0.0).map(|w| (w[0].0, w[1].0)).collect();
    assert_eq!(cells.len(), 2, "{cells:?}");
    assert!(cells[0].0 < 0.17137 && 0.17137 < cells[0].1);
    assert!(cells[1].0 < 0.691724 && 0.691724 < cells[1].1);
}

#[test]
fn plot_h_single_sample_matches_gamma_closed_form() {
    let dir = TempDir::new().unwrap();
    let out = maxface(dir.path(), &["plot-h", "--min", "1", "--max", "1", "--samples", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    // CSV on stdout, report on stderr
    let rows = read_h_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(rows.len(), 1);
    let target = -(4.0 * gamma(0.75).powi(2) + gamma(-0.75) * gamma(1.25)) / (2.0 * std::f64::consts::PI).sqrt();
    assert!(((rows[0].1 - target) / target).abs() <= 1e-6, "{} vs {target}", rows[0].1);
}

#[test]
fn plot_h_rejects_bad_ranges() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&maxface(dir.path(), &["plot-h", "--min", "0.9", "--max", "0.1"])), 2);
    assert_eq!(code(&maxface(dir.path(), &["plot-h", "--min", "-0.5", "--max", "0.5"])), 2);
    assert_eq!(code(&maxface(dir.path(), &["plot-h", "--samples", "0"])), 2);
    assert_eq!(code(&maxface(dir.path(), &["plot-h", "--min", "0.5", "--max", "0.5", "--samples", "3"])), 2);
}

#[test]
fn mesh_moebius_b2_writes_a_finite_obj() {
    let dir = TempDir::new().unwrap();
    let out = maxface(dir.path(), &["mesh", "moebius-b2", "--grid", "32", "--out", "m.obj"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let obj = read_obj(fs::read_to_string(dir.path().join("m.obj")).unwrap().as_bytes()).unwrap();
    assert_eq!(obj.vertices.len(), 32 * 32);
    assert!(!obj.faces.is_empty());
    assert!(obj.vertices.iter().flatten().all(|x| x.is_finite()));
    assert!(!dir.path().join("m.singular.json").exists());
}

#[test]
fn mesh_klein_1_singular_sidecar_lies_on_the_locus() {
    let dir = TempDir::new().unwrap();
    let out = maxface(dir.path(), &["mesh", "klein-1", "--grid", "32", "--out", "k.obj", "--singular"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let obj = read_obj(fs::read_to_string(dir.path().join("k.obj")).unwrap().as_bytes()).unwrap();
    assert_eq!(obj.vertices.len(), 2 * 32 * 32);
    let sidecar: Sidecar = serde_json::from_str(&fs::read_to_string(dir.path().join("k.singular.json")).unwrap()).unwrap();
    assert!(!sidecar.polylines.is_empty());
    assert_eq!(sidecar.polylines.len(), sidecar.domain.len());
    let cache: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("roots.json")).unwrap()).unwrap();
    let d = families::klein(cache["r1"].as_f64().unwrap()).unwrap();
    for line in &sidecar.domain {
        for z in line {
            let z = num_complex::Complex64::new(z[0], z[1]);
            // |g| is the same on both sheets
            let w = d.domain().principal_point(z).w;
            let g = d.g().eval_unchecked(z, w).norm();
            assert!((g - 1.0).abs() <= 1e-3, "|g({z})| = {g}");
        }
    }
    assert!(sidecar.polylines.iter().flatten().flatten().all(|x| x.is_finite()));
}

#[test]
fn mesh_refuses_obstructed_data() {
    let dir = TempDir::new().unwrap();
    let out = maxface(dir.path(), &["mesh", "counter-genus1-deg2", "--out", "c.obj"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("obstructed"), "{}", stderr(&out));
    assert!(!dir.path().join("c.obj").exists());
}

#[test]
fn mesh_flags_are_validated() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&maxface(dir.path(), &["mesh", "catenoid", "--grid", "1", "--out", "a.obj"])), 2);
    assert_eq!(code(&maxface(dir.path(), &["mesh", "catenoid", "--rmin", "2", "--rmax", "1", "--out", "a.obj"])), 2);
    assert_eq!(code(&maxface(dir.path(), &["mesh", "catenoid"])), 2);
}

#[test]
fn henneberg_meshes_in_demo_mode() {
    let dir = TempDir::new().unwrap();
    let out = maxface(dir.path(), &["mesh", "henneberg-max", "--grid", "16", "--out", "h.obj"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(report(&out)["output"]["branched_demo"], true);
}

const CATENOID: &str = r#"{
  "label": "custom catenoid",
  "domain": {"kind": "punctured_plane", "punctures": [[0, 0]]},
  "g": {"a": {"num": [[0, 0], [1, 0]], "den": [[1, 0]]}},
  "phi3": {"a": {"num": [[1, 0]], "den": [[0, 0], [1, 0]]}},
  "ends": [{"z": [0, 0]}, {"z": "infinity"}],
  "chi_bar": 2,
  "expected": {"deg_g": 1, "mus": [1, 1], "verdict": "well-defined"}
}"#;

#[test]
fn custom_data_from_json() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("cat.json"), CATENOID).unwrap();
    let out = maxface(dir.path(), &["check", "--data", "cat.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(report(&out)["output"]["topology"]["label"], "custom catenoid");

    // a wrong expectation is an expectation failure, not a usage error
    fs::write(dir.path().join("bad.json"), CATENOID.replace("\"deg_g\": 1", "\"deg_g\": 3")).unwrap();
    assert_eq!(code(&maxface(dir.path(), &["check", "--data", "bad.json"])), 1);

    fs::write(dir.path().join("broken.json"), "{\"label\": 3}").unwrap();
    assert_eq!(code(&maxface(dir.path(), &["check", "--data", "broken.json"])), 2);
    assert_eq!(code(&maxface(dir.path(), &["check", "--data", "missing.json"])), 1);

    let out = maxface(dir.path(), &["mesh", "--data", "cat.json", "--grid", "8", "--out", "cat.obj"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn custom_curve_data_without_expectations() {
    // the Klein data at r = 1/2: a genuine curve, but the period problem fails
    let dir = TempDir::new().unwrap();
    let text = r#"{
      "label": "klein half",
      "domain": {"kind": "root_curve",
                 "f": {"num": [[0, 0], [-1, 0], [0.5, 0]], "den": [[0.5, 0], [1, 0]]},
                 "removed": [{"z": [0, 0], "w": [0, 0]}, {"z": "infinity"}]},
      "g": {"a": {"num": [[0, 0]], "den": [[1, 0]]}, "b": {"num": [[1, 0], [1, 0]], "den": [[-1, 0], [1, 0]]}},
      "phi3": {"a": {"num": [[0, -1], [0, 0], [0, 1]], "den": [[0, 0], [0, 0], [1, 0]]}},
      "involution": "curve_antipodal",
      "ends": [{"z": [0, 0], "w": [0, 0]}, {"z": "infinity"}],
      "chi_bar": 0,
      "quotient_chi": 0
    }"#;
    fs::write(dir.path().join("k.json"), text).unwrap();
    let out = maxface(dir.path(), &["check", "--data", "k.json"]);
    // without an expected block the data must form a complete maxface
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(check(&r, "periods")["pass"], false);
    assert_eq!(check(&r, "topology")["pass"], true);
    assert_eq!(check(&r, "involution_compatibility")["pass"], true);
    assert_eq!(r["output"]["topology"]["deg_g"], 4);
}

#[test]
fn describe_shows_data_and_expectations() {
    let dir = TempDir::new().unwrap();
    let out = maxface(dir.path(), &["describe", "moebius-k:2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["output"]["expected"]["deg_g"], 6);
    assert_eq!(r["output"]["domain"]["kind"], "punctured_plane");
}

#[test]
fn verify_all_passes() {
    let dir = TempDir::new().unwrap();
    let out = maxface(dir.path(), &["verify-all"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(report(&out)["checks"].as_array().unwrap().len(), 11);
}
