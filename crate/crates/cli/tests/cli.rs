use archipelago::geometry::{skeleton_residual, Curve, EnsembleParams};
use num_complex::Complex64;
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_archipelago")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("archipelago-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn sa_curve_points_satisfy_the_equation() {
    let o = run(&["curve", "--which", "Sa", "--a", "2", "--step", "0.01"]);
    assert!(o.status.success());
    let p = EnsembleParams::induced(1, 0.0, 2.0).unwrap();
    let rows = data_rows(&stdout(&o));
    assert!(rows.len() > 100);
    for r in rows {
        let z = Complex64::new(r[0].parse().unwrap(), r[1].parse().unwrap());
        assert!(skeleton_residual(z, &p, Curve::Sa).unwrap().0.abs() <= 1e-10, "{z}");
        assert_eq!(r[2], "Sa");
    }
}

#[test]
fn droplet_with_three_islands() {
    let o = run(&["curve", "--which", "droplet", "--d", "3", "--a", "1.1", "--format", "json"]);
    assert!(o.status.success());
    let doc = json(&o);
    assert_eq!(doc["data"]["components"], 3);
    assert_eq!(doc["data"]["closed"], true);
}

#[test]
fn sa_needs_a_above_one() {
    let o = run(&["curve", "--a", "0.5", "--which", "Sa"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("a > 1"));
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "--suite", "no_such_suite"]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["curve"]).status.code(), Some(2));
    assert_eq!(run(&["kernel", "--mode", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["kernel", "--mode", "asym_thm13", "--d", "1"]).status.code(), Some(2));
    assert_eq!(run(&["berezin", "--mode", "asymptotic", "--r1", "exact", "--d", "2", "--a", "1.1"]).status.code(), Some(2));
    assert_eq!(run(&["expansions", "--z", "0.1,0"]).status.code(), Some(2));
}

#[test]
fn precision_failure_exits_three() {
    let o = run(&["kernel", "--mode", "exact_lemniscate", "--d", "2", "--a", "1.1", "--n", "8", "--grid", "2", "--precision-bits", "12"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("precision"));
}

#[test]
fn expansions_suite_passes() {
    let o = run(&["verify", "--suite", "expansions", "--c", "1", "--a", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn quick_run_of_every_suite() {
    let t = Instant::now();
    let o = run(&["verify", "--all", "--quick", "--format", "json"]);
    assert!(t.elapsed() < Duration::from_secs(300));
    let doc = json(&o);
    let suites = doc["data"]["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 7);
    let failed = suites.iter().any(|s| s["reports"].as_array().unwrap().iter().any(|r| r["verdict"] == "fail"));
    assert_eq!(o.status.code(), Some(if failed { 1 } else { 0 }));
    assert_eq!(doc["config"]["command"]["suite_config"]["quick"], true);
}

#[test]
fn exact_diagonal_is_real_and_nonnegative() {
    let o = run(&["kernel", "--mode", "exact_full_Q", "--d", "1", "--c", "1", "--n", "20", "--layout", "diagonal", "--grid", "7"]);
    assert!(o.status.success());
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 49);
    for r in rows {
        let phase: f64 = r[5].parse().unwrap();
        assert!(phase.abs() < 1e-12, "{r:?}");
    }
}

#[test]
fn pole_cell_is_masked() {
    let o = run(&["kernel", "--mode", "asym_thm11", "--layout", "row", "--lo", "1.25,0", "--hi", "1.25,0", "--grid", "1", "--w", "0.8,0"]);
    assert!(o.status.success());
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0][4].as_str(), rows[0][5].as_str()), ("", ""));
}

#[test]
fn berezin_mass_sits_next_to_the_base_point() {
    let o = run(&["berezin", "--d", "2", "--a", "1.1", "--c", "0", "--n", "600", "--mode", "asymptotic", "--grid", "41", "--format", "json"]);
    assert!(o.status.success());
    let doc = json(&o);
    let z = (0.1f64).sqrt();
    assert!((doc["data"]["z"][0].as_f64().unwrap() - z).abs() < 1e-15);
    let mut best = (f64::MIN, 0.0, 0.0);
    let (mut right, mut left) = (0.0, 0.0);
    for s in doc["data"]["samples"].as_array().unwrap() {
        let Some(v) = s["value"].as_f64() else { continue };
        let (x, y) = (s["w"][0].as_f64().unwrap(), s["w"][1].as_f64().unwrap());
        if x > 0.0 { right += v } else { left += v }
        if v > best.0 {
            best = (v, x, y);
        }
    }
    assert!(((best.1 - z).powi(2) + best.2.powi(2)).sqrt() < 0.2, "{best:?}");
    assert!(right > 5.0 * left, "{right} {left}");
}

#[test]
fn output_is_deterministic_and_carries_its_config() {
    let args = ["kernel", "--mode", "exact_tilde", "--n", "12", "--grid", "4", "--c", "2", "--a", "1.5"];
    let a = run(&args);
    let b = run(&[&args[..], &["--threads", "1"]].concat());
    assert!(a.status.success() && b.status.success());
    let (ta, tb) = (stdout(&a), stdout(&b));
    let body = |t: &str| t.lines().filter(|l| !l.starts_with("# config")).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&ta), body(&tb));
    assert_eq!(ta, stdout(&run(&args)));
    assert!(ta.starts_with(&format!("# archipelago {}\n# schema 1\n", env!("CARGO_PKG_VERSION"))));
    let cfg_line = ta.lines().find(|l| l.starts_with("# config ")).unwrap();
    let cfg: Value = serde_json::from_str(&cfg_line["# config ".len()..]).unwrap();
    assert_eq!(cfg["command"]["params"]["N"], 12);
    assert_eq!(cfg["command"]["params"]["c"], 2.0);
    assert_eq!(cfg["command"]["mode"], "exact_tilde");

    let path = scratch("field.json");
    let o = run(&["kernel", "--n", "6", "--grid", "3", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let first = std::fs::read(&path).unwrap();
    run(&["kernel", "--n", "6", "--grid", "3", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(first, std::fs::read(&path).unwrap());
    let doc: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["data"]["samples"].as_array().unwrap().len(), 81);
}

#[test]
fn params_file_with_flag_overrides() {
    let path = scratch("params.json");
    std::fs::write(&path, r#"{"which": "droplet", "d": 2, "a": 1.1, "step": 0.05, "format": "json"}"#).unwrap();
    let p = path.to_str().unwrap();
    let doc = json(&run(&["curve", "--params-file", p]));
    assert_eq!(doc["data"]["components"], 2);
    assert_eq!(doc["config"]["command"]["step"], 0.05);
    let doc = json(&run(&["curve", "--params-file", p, "--d", "4"]));
    assert_eq!(doc["data"]["components"], 4);

    std::fs::write(&path, r#"{"which": "Sa", "bogus": 1}"#).unwrap();
    let o = run(&["curve", "--params-file", p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}

#[test]
fn verify_report_file_and_randomized_points() {
    let path = scratch("report.csv");
    let o = run(&["verify", "--suite", "cd", "--randomize", "--seed", "5", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("fd_dbar_vs_three_term"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"seed\":5"));
    assert!(text.contains("\"extra_points\":4"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][8], "pass");
}
