use std::path::PathBuf;
use std::process::{Command, Output};

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cdqa-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let path = scratch_dir(name).join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

fn cdqa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdqa")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let k = lines.next().unwrap().split(',').position(|c| c == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap().to_string()).collect()
}

#[test]
fn run_adiabatic_pspin() {
    let cfg = write_config("adiabatic", r#"{"model": {"pspin": {"N": 4}}, "protocol": "qa", "tau": 1e4,
        "integrator": {"method": "magnus4"}}"#);
    let out = cdqa(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let f: f64 = column(&text, "fidelity")[0].parse().unwrap();
    assert!(f > 0.99, "{text}");
}

#[test]
fn run_lz_exact() {
    let cfg = write_config("lz", r#"{"model": {"lz": {"h": 0.1}}, "protocol": "cd1", "tau": 1}"#);
    let out = cdqa(&["run", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!((v["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(v["gamma_init"].as_f64(), Some(1.0));
}

#[test]
fn run_full_grid_has_75_rows_and_is_deterministic() {
    let cfg = write_config("grid", r#"{"model": {"pspin": {"N": 30}}, "protocol": ["qa", "cd1", "cd2"],
        "tau": {"min": 0.1, "max": 1e5, "points": 25}, "integrator": {"method": "magnus4"}}"#);
    let path = cfg.to_str().unwrap();
    let out_file = scratch_dir("grid").join("runs.csv");
    let a = cdqa(&["run", "--config", path, "--jobs", "2", "--out", out_file.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = cdqa(&["run", "--config", path, "--jobs", "1"]);
    let written = std::fs::read_to_string(&out_file).unwrap();
    assert_eq!(written, stdout(&b));
    assert_eq!(written.lines().count(), 76);
    let protocols = column(&written, "protocol");
    assert!(protocols[..25].iter().all(|p| p == "qa"));
    assert!(protocols[50..].iter().all(|p| p == "cd2"));
    let taus: Vec<f64> = column(&written, "tau").iter().map(|t| t.parse().unwrap()).collect();
    assert!(taus[..25].windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn config_errors_exit_2_with_position() {
    let cfg = write_config("bad", "{\n  \"model\": {\"pspin\": {\"N\": 4}},\n  \"protocol\": \"qa\",\n  \"tau\": 1,\n  \"extra\": true\n}");
    let out = cdqa(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5"), "{err}");

    let missing = cdqa(&["run", "--config", "/nonexistent/cdqa.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let bad_p_r = write_config("p_r", r#"{"model": {"pspin": {"N": 4}}, "protocol": "cd1", "tau": 1, "p_r": 0}"#);
    assert_eq!(cdqa(&["run", "--config", bad_p_r.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3_and_flushes_rows() {
    let cfg = write_config("fail", r#"{"model": {"pspin": {"N": 6}}, "protocol": "qa", "tau": [0.1, 50],
        "integrator": {"method": "rk4", "steps": 100, "norm_tolerance": 1e-12}}"#);
    let out = cdqa(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().last().unwrap().contains(",nan,"), "{text}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("tau=50"));
}

#[test]
fn spectrum_table() {
    let cfg = write_config("spectrum", r#"{"model": {"pspin": {"N": 6}}, "protocol": "qa", "tau": 20,
        "integrator": {"method": "magnus4"}, "outputs": {"spectrum": {"samples": 5}}}"#);
    let out = cdqa(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("t_over_tau,index,eigenvalue,occupation"));
    assert_eq!(text.lines().count(), 1 + 5 * 7);
    let occ: Vec<f64> = column(&text, "occupation").iter().map(|x| x.parse().unwrap()).collect();
    assert!((occ[0] - 1.0).abs() < 1e-10);
    for block in occ.chunks(7) {
        assert!((block.iter().sum::<f64>() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn sweep_writes_three_tables() {
    let cfg = write_config("sweep", r#"{"model": {"pspin": {"N": 6}}, "protocol": ["qa", "cd2"],
        "tau": {"min": 0.1, "max": 1e3, "points": 9}, "integrator": {"method": "magnus4"}}"#);
    let dir = scratch_dir("sweep").join("tables");
    let out = cdqa(&["sweep", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for name in ["runs", "tts_curve", "short_time_minimum", "long_time_minimum"] {
        assert!(dir.join(format!("{name}.csv")).exists(), "{name}");
    }
    let short = std::fs::read_to_string(dir.join("short_time_minimum.csv")).unwrap();
    assert_eq!(short.lines().count(), 3);
    assert!(short.lines().any(|l| l.starts_with("cd2,6,1.0000000000000001e-1,") && l.ends_with("true")), "{short}");

    let piped = cdqa(&["sweep", "--config", cfg.to_str().unwrap()]);
    let text = stdout(&piped);
    for name in ["# runs", "# tts_curve", "# short_time_minimum", "# long_time_minimum"] {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn validate_passes_and_covers_small_sizes() {
    let out = cdqa(&["validate"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for n in 2..=4 {
        assert!(text.contains(&format!("N={n}")));
    }
    assert!(!text.contains("FAIL"));
}

#[test]
fn validate_fails_on_flipped_beta() {
    let flipped = |l: f64, g: f64, n: usize| cdqa::cli::validate::closed_form(l, g, n).map(|(a, b)| (a, -b));
    let report = cdqa::cli::validate::run_with(&flipped);
    assert!(!report.passed());
    assert!(report.check("stationarity").all(|c| !c.passed));
    assert!(report.check("trace").all(|c| c.passed));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cdqa(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cdqa(&["run"]).status.code(), Some(2));
    assert_eq!(cdqa(&["--help"]).status.code(), Some(0));
}

#[test]
fn sample_configs_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        cdqa::cli::config::RunConfig::from_path(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        count += 1;
    }
    assert!(count >= 4);
}
