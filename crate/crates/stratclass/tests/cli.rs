//! End-to-end checks of the command-line interface: exit codes, file
//! outputs, CSV round-trips and the environment override.

use std::path::{Path, PathBuf};
use std::process::Command;

use stratclass::report::parse_csv;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_stratclass")
}

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf()
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("stratclass-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn run(args: &[&str], out: Option<&Path>, env: &[(&str, &str)]) -> std::process::Output {
    let mut cmd = Command::new(bin());
    cmd.args(args).current_dir(repo_root());
    cmd.env_remove("STRATCLASS_OUT_DIR");
    if let Some(dir) = out {
        cmd.arg("--out").arg(dir);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

#[test]
fn equilibrium_writes_reports_and_reproduces_example1() {
    let dir = tmp_dir("eq");
    let out = run(
        &["equilibrium", "configs/example1.json", "--regime", "manip"],
        Some(&dir),
        &[],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("equilibrium-manip.json")).unwrap())
            .unwrap();
    let sigma = json["result"]["threshold"].as_f64().unwrap();
    assert!((sigma - 0.398).abs() < 1e-3);
    assert!(dir.join("equilibrium-manip.txt").exists());

    let out = run(
        &["equilibrium", "configs/example1.json", "--regime", "prop"],
        Some(&dir),
        &[],
    );
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("equilibrium-prop.json")).unwrap())
            .unwrap();
    assert!((json["result"]["threshold"].as_f64().unwrap() - 0.546).abs() < 1e-3);
    let beta = json["result"]["plan"]["Proportional"]["beta"]
        .as_f64()
        .unwrap();
    assert!((beta - 0.558).abs() < 2e-3);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn malformed_config_exits_2_without_outputs() {
    let dir = tmp_dir("bad");
    let bad = dir.join("bad.json");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(&bad, "{\"group_a\": {}}").unwrap();
    let out = run(
        &["equilibrium", bad.to_str().unwrap(), "--regime", "manip"],
        Some(&dir),
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.join("equilibrium-manip.json").exists());

    // Unknown keys are named in the error.
    let unknown = dir.join("unknown.json");
    let mut text = std::fs::read_to_string(repo_root().join("configs/example1.json")).unwrap();
    text = text.replacen("\"p_a\"", "\"surprise\": 1, \"p_a\"", 1);
    std::fs::write(&unknown, text).unwrap();
    let out = run(
        &[
            "equilibrium",
            unknown.to_str().unwrap(),
            "--regime",
            "manip",
        ],
        Some(&dir),
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("surprise"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn sweep_rejects_bad_ranges_and_round_trips_csv() {
    let dir = tmp_dir("sweep");
    // Zero steps.
    let out = run(
        &[
            "sweep",
            "configs/example1.json",
            "--param",
            "sigma",
            "--range",
            "0.4:0.5:0",
        ],
        Some(&dir),
        &[],
    );
    assert_eq!(out.status.code(), Some(2));

    // Inverted range.
    let out = run(
        &[
            "sweep",
            "configs/example1.json",
            "--param",
            "sigma",
            "--range",
            "0.6:0.4:5",
        ],
        Some(&dir),
        &[],
    );
    assert_eq!(out.status.code(), Some(2));

    // A proper sweep over the undominated interval: false negatives grow,
    // false positives shrink.
    let out = run(
        &[
            "sweep",
            "configs/example1.json",
            "--param",
            "sigma",
            "--range",
            "0.3983:0.5463:21",
        ],
        Some(&dir),
        &[],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.join("sweep-sigma.csv")).unwrap();
    let rows = parse_csv(&text);
    let header = &rows[0];
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let (fn_i, fp_i) = (col("fn_b"), col("fp_a"));
    let mut prev_fn = -1.0f64;
    let mut prev_fp = f64::INFINITY;
    for row in &rows[1..] {
        let fn_b: f64 = row[fn_i].parse().unwrap();
        let fp_a: f64 = row[fp_i].parse().unwrap();
        assert!(fn_b >= prev_fn - 1e-12, "fn_b must not decrease");
        assert!(fp_a <= prev_fp + 1e-12, "fp_a must not increase");
        prev_fn = fn_b;
        prev_fp = fp_a;
    }
    // Values parse back to identical floats.
    let total_i = col("total");
    for row in &rows[1..] {
        let v: f64 = row[total_i].parse().unwrap();
        assert_eq!(format!("{v}"), row[total_i]);
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn beta_sweep_with_free_money_is_monotone() {
    let dir = tmp_dir("beta");
    // lambda = 0 scenario: more generous subsidies weakly reduce the penalty.
    let cfg = repo_root().join("configs/example1.json");
    let text = std::fs::read_to_string(cfg)
        .unwrap()
        .replace("\"lambda\": 0.75", "\"lambda\": 0.0");
    std::fs::create_dir_all(&dir).unwrap();
    let free = dir.join("free.json");
    std::fs::write(&free, text).unwrap();
    // Stay in the range where the subsidized boundary does not overshoot the
    // group-B true threshold (below ~0.435 the subsidy starts admitting
    // unqualified B candidates and the penalty turns back up).
    let out = run(
        &[
            "sweep",
            free.to_str().unwrap(),
            "--param",
            "beta",
            "--range",
            "0.44:1.0:13",
            "--sigma",
            "0.5463585",
        ],
        Some(&dir),
        &[],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = parse_csv(&std::fs::read_to_string(dir.join("sweep-beta.csv")).unwrap());
    let total_i = rows[0].iter().position(|h| h == "total").unwrap();
    let mut prev = -1.0f64;
    // Rows run from generous (small beta) to none (beta = 1): penalty must
    // not decrease along the way.
    for row in &rows[1..] {
        let total: f64 = row[total_i].parse().unwrap();
        assert!(total >= prev - 1e-9, "total {total} fell below {prev}");
        prev = total;
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn lambda_sweep_reports_reoptimized_plans() {
    let dir = tmp_dir("lambda");
    std::fs::create_dir_all(&dir).unwrap();
    let text = std::fs::read_to_string(repo_root().join("configs/example1.json"))
        .unwrap()
        .replace(
            "\"lambda\": 0.75",
            "\"lambda\": 0.75,\n  \"options\": { \"joint_grid\": 96 }",
        );
    let cfg = dir.join("example1-small.json");
    std::fs::write(&cfg, text).unwrap();
    let out = run(
        &[
            "sweep",
            cfg.to_str().unwrap(),
            "--param",
            "lambda",
            "--range",
            "0.25:4.0:4",
        ],
        Some(&dir),
        &[],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = parse_csv(&std::fs::read_to_string(dir.join("sweep-lambda.csv")).unwrap());
    let plan_i = rows[0].iter().position(|h| h == "plan_param").unwrap();
    // Cheap money buys a strict subsidy; expensive money switches it off.
    let first: f64 = rows[1][plan_i].parse().unwrap();
    let last: f64 = rows.last().unwrap()[plan_i].parse().unwrap();
    assert!(
        first < 1.0,
        "expected a strict plan at small lambda, got beta = {first}"
    );
    assert!(
        (last - 1.0).abs() < 1e-9,
        "expected beta = 1 at large lambda, got {last}"
    );
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn env_var_overrides_output_directory() {
    let dir = tmp_dir("env");
    let decoy = tmp_dir("env-decoy");
    let out = run(
        &["reproduce-paper"],
        Some(&decoy),
        &[("STRATCLASS_OUT_DIR", dir.to_str().unwrap())],
    );
    assert!(out.status.success());
    assert!(dir.join("reproduce-paper.json").exists());
    assert!(!decoy.join("reproduce-paper.json").exists());
    let _ = std::fs::remove_dir_all(&dir);
    let _ = std::fs::remove_dir_all(&decoy);
}

#[test]
fn paradox_search_archives_witnesses() {
    let dir = tmp_dir("paradox");
    let out = run(
        &[
            "paradox-search",
            "--trials",
            "2",
            "--seed",
            "5",
            "--family",
            "prop",
        ],
        Some(&dir),
        &[],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // Trial 0 replays the known witness.
    assert!(dir.join("witness-0000.json").exists());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("paradox-search.json")).unwrap())
            .unwrap();
    assert!(report["proportional_paradoxes"].as_u64().unwrap() >= 1);
    // Archived witness parses back as a valid scenario config.
    let witness = std::fs::read_to_string(dir.join("witness-0000.json")).unwrap();
    assert!(stratclass::config::ScenarioConfig::from_json(&witness).is_ok());

    // Zero trials: empty report, success.
    let out = run(&["paradox-search", "--trials", "0"], Some(&dir), &[]);
    assert!(out.status.success());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn multidimensional_config_runs_offset_sweep() {
    let dir = tmp_dir("nd");
    let cfg = repo_root().join("configs/twodim.json");
    let text = std::fs::read_to_string(cfg).unwrap().replace(
        "\"lambda\": 0.75",
        "\"lambda\": 0.75,\n  \"options\": { \"mc_samples\": 40000 }",
    );
    std::fs::create_dir_all(&dir).unwrap();
    let small = dir.join("twodim-small.json");
    std::fs::write(&small, text).unwrap();
    let out = run(
        &["equilibrium", small.to_str().unwrap(), "--regime", "manip"],
        Some(&dir),
        &[],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("equilibrium-manip.json")).unwrap())
            .unwrap();
    let g0 = json["result"]["hyperplane"]["offset"].as_f64().unwrap();
    // The swept offset stays inside the bracket set by the per-group
    // perfect classifiers.
    assert!((0.6 + 1.0 / 6.0 - 1e-9..=0.8 + 0.5 + 1e-9).contains(&g0));

    let out = run(
        &["equilibrium", small.to_str().unwrap(), "--regime", "prop"],
        Some(&dir),
        &[],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn reproduce_paper_gates_on_required_rows() {
    let dir = tmp_dir("golden");
    let out = run(&["reproduce-paper"], Some(&dir), &[]);
    assert!(out.status.success(), "required golden rows must pass");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("documented discrepancy"));
    assert!(stdout.contains("all required rows pass"));
    let _ = std::fs::remove_dir_all(&dir);
}
