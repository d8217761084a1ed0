//! End-to-end tests of the batch front end: configs in, artifacts out,
//! exit codes and byte-level reproducibility as documented.

use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::Command;

use heteroclinic::cli::{run_command, EXIT_CONFIG, EXIT_NONCONVERGED, EXIT_OK};
use heteroclinic::trajectory::Path;

/// Fresh scratch directory under the per-test target tmp root.
fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    if dir.exists() {
        fs::remove_dir_all(&dir).unwrap();
    }
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &FsPath, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn read_json(path: &FsPath) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Small, fast standard run: quartic well, constant coefficient, coarse grid.
const FAST_SOLVE: &str = r#"{
    "command": "solve",
    "coefficient": { "name": "const(1)" },
    "grid": { "T": 12.0, "N": 301 }
}"#;

#[test]
fn solve_writes_complete_byte_identical_artifacts() {
    let dir = scratch("cli_solve_repro");
    let cfg = write_config(&dir, "run.json", FAST_SOLVE);

    // Two consecutive runs of the byte-identical config: capture all
    // artifacts after the first, rerun, and demand identical bytes. The
    // manifest echoes the resolved output directory, so reproducibility is
    // stated for a fixed destination.
    let out_a = dir.join("a");
    assert_eq!(run_command("solve", &cfg, Some(&out_a)), EXIT_OK);
    let names = ["run_manifest.json", "solution.path", "action_report.json"];
    let first: Vec<Vec<u8>> = names
        .iter()
        .map(|n| fs::read(out_a.join(n)).unwrap())
        .collect();
    assert_eq!(run_command("solve", &cfg, Some(&out_a)), EXIT_OK);
    for (name, before) in names.iter().zip(&first) {
        let after = fs::read(out_a.join(name)).unwrap();
        assert!(!after.is_empty(), "{name} is empty");
        assert_eq!(*before, after, "{name} differs between identical runs");
    }

    // Location-independent artifacts also match across output directories.
    let out_b = dir.join("b");
    assert_eq!(run_command("solve", &cfg, Some(&out_b)), EXIT_OK);
    for name in ["solution.path", "action_report.json"] {
        let a = fs::read(out_a.join(name)).unwrap();
        let b = fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} depends on the output location");
    }

    // The action report carries the documented scalar fields at top level.
    let report = read_json(&out_a.join("action_report.json"));
    for key in [
        "value",
        "grad_dual",
        "grad_l2",
        "residual_inf",
        "tail_truncation_bound",
        "iterations",
        "converged",
        "monotone_j",
        "termination",
    ] {
        assert!(report.get(key).is_some(), "action_report.json lacks {key}");
    }
    assert_eq!(report["converged"], serde_json::Value::Bool(true));
    assert_eq!(report["termination"], "gradient_tolerance");
    // h = 0.08 here, so the discrete level sits within O(h²) of 2√2/3.
    let value = report["value"].as_f64().unwrap();
    assert!(
        (value - 0.9428090415820634).abs() < 1e-2,
        "value = {value}"
    );

    // The written path file round-trips through the reader bit-for-bit.
    let path = Path::read_from(&out_a.join("solution.path")).unwrap();
    assert_eq!(path.grid().n(), 301);
    let mut rewritten = out_a.join("solution_rewritten.path");
    path.write_to(&rewritten).unwrap();
    let original = fs::read(out_a.join("solution.path")).unwrap();
    let roundtrip = fs::read(&rewritten).unwrap();
    assert_eq!(original, roundtrip, "path serialization is not stable");
    rewritten.pop();
}

#[test]
fn manifest_echoes_every_resolved_default() {
    let dir = scratch("cli_manifest");
    let cfg = write_config(&dir, "run.json", FAST_SOLVE);
    let out = dir.join("out");
    assert_eq!(run_command("solve", &cfg, Some(&out)), EXIT_OK);

    let manifest = read_json(&out.join("run_manifest.json"));
    assert_eq!(manifest["command"], "solve");
    assert_eq!(manifest["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(manifest["grid"]["T"].as_f64().unwrap(), 12.0);
    assert_eq!(manifest["grid"]["N"].as_u64().unwrap(), 301);
    assert_eq!(manifest["eps"].as_f64().unwrap(), 1.0);
    assert_eq!(manifest["potential"]["kind"], "quartic");
    assert_eq!(manifest["potential"]["delta"].as_f64().unwrap(), 0.1);
    assert_eq!(manifest["coefficient"]["name"], "const(1)");
    assert_eq!(manifest["solver"]["max_iters"].as_u64().unwrap(), 50_000);
    assert_eq!(
        manifest["solver"]["tol_grad_dual"].as_f64().unwrap(),
        1e-8
    );
    assert_eq!(manifest["solver"]["tol_step"].as_f64().unwrap(), 1e-14);
    assert_eq!(manifest["solver"]["armijo_c"].as_f64().unwrap(), 1e-4);
    assert_eq!(
        manifest["solver"]["backtrack_factor"].as_f64().unwrap(),
        0.5
    );
    assert_eq!(manifest["solver"]["acceleration"], "secant_two_point");

    // Floats are printed with 17 significant digits for exact round-trip.
    let text = fs::read_to_string(out.join("run_manifest.json")).unwrap();
    assert!(
        text.contains("1.0000000000000000e-8"),
        "tolerance not printed with 17 significant digits:\n{text}"
    );
    assert!(text.contains("1.2000000000000000e1"));
}

#[test]
fn config_errors_exit_2_and_write_nothing() {
    let dir = scratch("cli_config_errors");
    let cases = [
        // Even node count.
        (
            "even.json",
            r#"{ "grid": { "T": 12.0, "N": 300 } }"#,
            "solve",
        ),
        // Unknown coefficient family.
        (
            "family.json",
            r#"{ "coefficient": { "name": "mystery" } }"#,
            "solve",
        ),
        // Negative time-scale.
        ("eps.json", r#"{ "eps": -0.5 }"#, "solve"),
        // Unknown top-level key.
        ("unknown.json", r#"{ "grdi": {} }"#, "solve"),
        // Command echo that contradicts the subcommand.
        ("echo.json", r#"{ "command": "sweep" }"#, "solve"),
        // Sweep without a usable eps_list ordering.
        (
            "order.json",
            r#"{ "eps_list": [0.1, 1.0] }"#,
            "sweep",
        ),
        // Unparsable JSON.
        ("syntax.json", r#"{ "eps": "#, "solve"),
    ];
    for (i, (name, body, command)) in cases.iter().enumerate() {
        let cfg = write_config(&dir, name, body);
        let out = dir.join(format!("out{i}"));
        assert_eq!(
            run_command(command, &cfg, Some(&out)),
            EXIT_CONFIG,
            "case {name} did not exit 2"
        );
        assert!(
            !out.exists(),
            "case {name} left partial outputs at {}",
            out.display()
        );
    }
    // Unreadable config file.
    let missing = dir.join("absent.json");
    let out = dir.join("out_absent");
    assert_eq!(run_command("solve", &missing, Some(&out)), EXIT_CONFIG);
    assert!(!out.exists());
}

#[test]
fn sweep_and_levels_write_documented_tables() {
    let dir = scratch("cli_tables");

    let sweep_cfg = write_config(
        &dir,
        "sweep.json",
        r#"{
            "command": "sweep",
            "coefficient": { "name": "rabinowitz_gauss" },
            "eps_list": [1.0, 0.5],
            "grid": { "T": 12.0, "N": 301 }
        }"#,
    );
    let sweep_out = dir.join("sweep");
    assert_eq!(run_command("sweep", &sweep_cfg, Some(&sweep_out)), EXIT_OK);
    let csv = fs::read_to_string(sweep_out.join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "eps,J,grad_dual,residual_inf,converged"
    );
    let rows: Vec<&str> = lines.collect();
    // One row per sweep entry; the autonomous baseline lives in the JSON.
    assert_eq!(rows.len(), 2, "unexpected rows: {rows:?}");
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5);
        assert_eq!(fields[4], "true");
        // 17-significant-digit floats parse back exactly.
        let j: f64 = fields[1].parse().unwrap();
        assert!(j.is_finite() && j > 0.0);
    }
    let sweep_json = read_json(&sweep_out.join("sweep.json"));
    assert_eq!(sweep_json["rows"].as_array().unwrap().len(), 2);
    assert!(sweep_json["all_ge_b0"].as_bool().unwrap());

    let levels_cfg = write_config(
        &dir,
        "levels.json",
        r#"{
            "command": "levels",
            "coefficient": { "name": "rabinowitz_gauss" },
            "eps": 0.5,
            "grid": { "T": 12.0, "N": 301 }
        }"#,
    );
    let levels_out = dir.join("levels");
    assert_eq!(
        run_command("levels", &levels_cfg, Some(&levels_out)),
        EXIT_OK
    );
    let csv = fs::read_to_string(levels_out.join("levels.csv")).unwrap();
    assert!(csv.starts_with("eps,J,grad_dual,residual_inf,converged\n"));
    let levels_json = read_json(&levels_out.join("levels.json"));
    let b0 = levels_json["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["label"] == "b_0")
        .unwrap()["j"]
        .as_f64()
        .unwrap();
    assert!((b0 - 0.9428090415820634).abs() < 1e-2);
    assert_eq!(
        levels_json["flags"]["b0_lt_binf"],
        serde_json::Value::Bool(true)
    );
}

#[test]
fn verify_oracle_compare_and_classify_produce_verdicts() {
    let dir = scratch("cli_verdicts");

    let verify_out = dir.join("verify");
    // The config's command echo says "solve"; rewrite for each subcommand.
    let verify_cfg = write_config(
        &dir,
        "verify.json",
        &FAST_SOLVE.replace("\"solve\"", "\"verify\""),
    );
    assert_eq!(
        run_command("verify", &verify_cfg, Some(&verify_out)),
        EXIT_OK
    );
    let verdict = read_json(&verify_out.join("verification.json"));
    assert_eq!(verdict["all_passed"], serde_json::Value::Bool(true));
    assert!(verify_out.join("solution.path").exists());
    assert!(verify_out.join("action_report.json").exists());

    let oc_cfg = write_config(
        &dir,
        "oracle.json",
        &FAST_SOLVE.replace("\"solve\"", "\"oracle_compare\""),
    );
    let oc_out = dir.join("oracle");
    assert_eq!(
        run_command("oracle_compare", &oc_cfg, Some(&oc_out)),
        EXIT_OK
    );
    let cmp = read_json(&oc_out.join("oracle_compare.json"));
    assert_eq!(cmp["passed"], serde_json::Value::Bool(true));
    assert!(cmp["sup_diff"].as_f64().unwrap() < 1e-2);

    // A genuinely time-dependent coefficient cannot be oracle-compared.
    let oc_bad = write_config(
        &dir,
        "oracle_bad.json",
        r#"{
            "command": "oracle_compare",
            "coefficient": { "name": "rabinowitz_gauss" },
            "grid": { "T": 12.0, "N": 301 }
        }"#,
    );
    let oc_bad_out = dir.join("oracle_bad");
    assert_eq!(
        run_command("oracle_compare", &oc_bad, Some(&oc_bad_out)),
        EXIT_CONFIG
    );

    let classify_cfg = write_config(
        &dir,
        "classify.json",
        r#"{
            "command": "classify",
            "coefficient": { "name": "coercive_quad" }
        }"#,
    );
    let classify_out = dir.join("classify");
    assert_eq!(
        run_command("classify", &classify_cfg, Some(&classify_out)),
        EXIT_OK
    );
    let class_report = read_json(&classify_out.join("class_report.json"));
    assert_eq!(class_report["class_tag"], "coercive");
    assert_eq!(
        class_report["class_consistent"],
        serde_json::Value::Bool(true)
    );

    let non_cfg = write_config(
        &dir,
        "nonconv.json",
        r#"{
            "command": "solve",
            "coefficient": { "name": "const(1)" },
            "grid": { "T": 12.0, "N": 301 },
            "solver": { "max_iters": 3 }
        }"#,
    );
    let non_out = dir.join("nonconv");
    // Non-convergence exits 3 but still writes the report honestly.
    assert_eq!(
        run_command("solve", &non_cfg, Some(&non_out)),
        EXIT_NONCONVERGED
    );
    let report = read_json(&non_out.join("action_report.json"));
    assert_eq!(report["converged"], serde_json::Value::Bool(false));
}

#[test]
fn seed_path_reuses_a_previous_solution() {
    let dir = scratch("cli_seed_path");
    let cfg = write_config(&dir, "run.json", FAST_SOLVE);
    let first = dir.join("first");
    assert_eq!(run_command("solve", &cfg, Some(&first)), EXIT_OK);

    let seed_file = first.join("solution.path");
    let seeded = format!(
        r#"{{
            "command": "solve",
            "coefficient": {{ "name": "const(1)" }},
            "grid": {{ "T": 12.0, "N": 301 }},
            "seed_path": {:?}
        }}"#,
        seed_file.to_str().unwrap()
    );
    let seeded_cfg = write_config(&dir, "seeded.json", &seeded);
    let second = dir.join("second");
    assert_eq!(run_command("solve", &seeded_cfg, Some(&second)), EXIT_OK);
    let report = read_json(&second.join("action_report.json"));
    // Restarting from the converged point terminates without a single step.
    assert_eq!(report["iterations"].as_u64().unwrap(), 0);

    // A seed on a different grid is a config error caught before any output.
    let mismatched = seeded.replace("\"N\": 301", "\"N\": 201");
    let bad_cfg = write_config(&dir, "mismatch.json", &mismatched);
    let third = dir.join("third");
    assert_eq!(run_command("solve", &bad_cfg, Some(&third)), EXIT_CONFIG);
    assert!(!third.exists());
}

#[test]
fn spawned_binary_reports_the_same_exit_codes() {
    let dir = scratch("cli_spawn");
    let cfg = write_config(&dir, "run.json", FAST_SOLVE);
    let out = dir.join("out");

    let ok = Command::new(env!("CARGO_BIN_EXE_heteroclinic"))
        .args([
            "solve",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&ok.stderr));
    assert!(out.join("solution.path").exists());
    assert!(out.join("run_manifest.json").exists());

    let bad_cfg = write_config(&dir, "bad.json", r#"{ "grid": { "N": 300 } }"#);
    let bad_out = dir.join("bad_out");
    let err = Command::new(env!("CARGO_BIN_EXE_heteroclinic"))
        .args([
            "solve",
            "--config",
            bad_cfg.to_str().unwrap(),
            "--out",
            bad_out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(err.status.code(), Some(2));
    assert!(!bad_out.exists());

    // The hyphenated subcommand spelling is the external name.
    let oc_cfg = write_config(
        &dir,
        "oracle.json",
        &FAST_SOLVE.replace("\"solve\"", "\"oracle_compare\""),
    );
    let oc_out = dir.join("oracle_out");
    let oc = Command::new(env!("CARGO_BIN_EXE_heteroclinic"))
        .args([
            "oracle-compare",
            "--config",
            oc_cfg.to_str().unwrap(),
            "--out",
            oc_out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(oc.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&oc.stderr));
    assert!(oc_out.join("oracle_compare.json").exists());
}
