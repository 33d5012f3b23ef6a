use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn tflocal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tflocal"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Writes `config` into a fresh directory and runs `command` on it.
fn run(command: &str, config: &str, extra: &[&str]) -> (TempDir, PathBuf, Output) {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("config.json");
    fs::write(&cfg, config).unwrap();
    let out = dir.path().join("out");
    let mut args = vec![
        command,
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = tflocal(&args);
    (dir, out, o)
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Data rows of a CSV artifact, split into fields.
fn rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let data = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    (header, data)
}

const DISK: &str = r#"{"domain": {"shape": "disk", "center": [0, 0], "radius": 1}, "N": 24}"#;

#[test]
fn direct_disk_matches_closed_form() {
    let (_d, out, o) = run("direct", DISK, &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (header, data) = rows(&out.join("spectrum.csv"));
    assert_eq!(
        header,
        [
            "index",
            "eigenvalue",
            "residual",
            "closed_form",
            "deviation"
        ]
    );
    assert_eq!(data.len(), 24);
    assert!(data.iter().all(|r| r[4] <= 1e-8));
    let meta = json(&out.join("meta.json"));
    assert_eq!(meta["N"], 24);
    assert!(meta["quad_tol"].is_number());
    assert!(meta["provenance"].as_str().unwrap().contains("closed form"));

    let hash = json(&out.join("config.json"))["config_hash"]
        .as_str()
        .unwrap()
        .to_string();
    assert_eq!(hash.len(), 64);
    for f in fs::read_dir(&out).unwrap() {
        let text = fs::read_to_string(f.unwrap().path()).unwrap();
        assert!(text.contains(&hash) && text.contains("fock_op"));
    }
}

#[test]
fn outputs_are_deterministic() {
    let (_d1, out1, o1) = run("direct", DISK, &["--seed", "5"]);
    let (_d2, out2, o2) = run("direct", DISK, &["--seed", "5"]);
    assert_eq!((code(&o1), code(&o2)), (0, 0));
    for name in ["spectrum.csv", "matrix.csv", "meta.json"] {
        assert_eq!(
            fs::read(out1.join(name)).unwrap(),
            fs::read(out2.join(name)).unwrap(),
            "{name}"
        );
    }
    let (_d3, out3, _) = run("direct", DISK, &["--seed", "6"]);
    assert_ne!(
        fs::read(out1.join("matrix.csv")).unwrap(),
        fs::read(out3.join("matrix.csv")).unwrap()
    );
}

#[test]
fn direct_empty_and_square() {
    let (_d, out, o) = run(
        "direct",
        r#"{"domain": {"shape": "union", "members": []}, "N": 8}"#,
        &[],
    );
    assert_eq!(code(&o), 0);
    assert!(rows(&out.join("spectrum.csv"))
        .1
        .iter()
        .all(|r| r[1] == 0.0));

    let sq = r#"{"domain": {"shape": "polygon", "vertices": [[-0.8, -0.8], [0.8, -0.8], [0.8, 0.8], [-0.8, 0.8]]}, "N": 12}"#;
    let (_d, out, o) = run("direct", sq, &[]);
    assert_eq!(code(&o), 0);
    let (_, m) = rows(&out.join("matrix.csv"));
    let mut off = 0.0f64;
    for (i, row) in m.iter().enumerate() {
        for j in 0..12 {
            let v = row[1 + 2 * j].hypot(row[2 + 2 * j]);
            if (i as i64 - j as i64) % 4 != 0 {
                assert!(v < 1e-9, "({i}, {j}) = {v}");
            } else if i != j {
                off = off.max(v);
            }
        }
    }
    assert!(off > 1e-3, "square should couple indices four apart");
}

#[test]
fn direct_with_time_domain_cross_check() {
    let cfg = r#"{"domain": {"shape": "disk", "center": [0.2, -0.1], "radius": 1}, "N": 4,
                  "stft": {"grid": {"x_step": 0.1, "xi_step": 0.1, "x_range": 4, "xi_range": 4}, "hermite": [1]}}"#;
    let (_d, out, o) = run("direct", cfg, &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(
        json(&out.join("meta.json"))["timedomain_max_deviation"]
            .as_f64()
            .unwrap()
            < 1e-3
    );
    let side = json(&out.join("localized_h1.json"));
    assert_eq!(side["t0"], -8.0);
    assert_eq!(side["dt"], 1e-3);
    let (header, data) = rows(&out.join("localized_h1.csv"));
    assert_eq!(header, ["re", "im"]);
    assert_eq!(data.len() as u64, side["len"].as_u64().unwrap());
}

#[test]
fn probe_verdicts() {
    let disk = r#"{"domain": {"shape": "disk", "center": [0, 0], "radius": 0.8}, "N": 48}"#;
    let (_d, out, o) = run("probe", disk, &[]);
    assert_eq!(code(&o), 0);
    let rep = json(&out.join("probe_report.json"));
    assert_eq!(rep["verdict"], "DiskCentered");
    assert!((rep["radius"].as_f64().unwrap() - 0.8).abs() < 1e-4);
    assert_eq!(rep["probes"].as_array().unwrap().len(), 8);
    for key in ["n", "lambda", "residual"] {
        assert!(rep["probes"][0][key].is_number());
    }
    assert!(rep["caveat"].as_str().unwrap().contains("simply connected"));

    let ann = r#"{"domain": {"shape": "annulus", "r_in": 0.5, "r_out": 1}, "N": 48}"#;
    let (_d, out, o) = run("probe", ann, &[]);
    assert_eq!(code(&o), 0);
    let rep = json(&out.join("probe_report.json"));
    assert_eq!(rep["verdict"], "RadialMultiRing");
    let ring = &rep["rings"][0];
    assert!(
        (ring[0].as_f64().unwrap() - 0.5).abs() < 1e-3
            && (ring[1].as_f64().unwrap() - 1.0).abs() < 1e-3
    );
}

#[test]
fn probe_from_matrix_file() {
    let sq = r#"{"domain": {"shape": "polygon", "vertices": [[-0.9, -0.9], [0.9, -0.9], [0.9, 0.9], [-0.9, 0.9]]}, "N": 16}"#;
    let (dir, out, o) = run("direct", sq, &[]);
    assert_eq!(code(&o), 0);
    let matrix = out.join("matrix.csv");

    let cfg_path = dir.path().join("probe.json");
    fs::write(
        &cfg_path,
        format!(r#"{{"matrix_file": "{}", "N": 16}}"#, matrix.display()),
    )
    .unwrap();
    let out2 = dir.path().join("probe_out");
    let o = tflocal(&[
        "probe",
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        out2.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        json(&out2.join("probe_report.json"))["verdict"],
        "NotRadial"
    );

    // relative paths resolve against the config file
    fs::write(&cfg_path, r#"{"matrix_file": "out/matrix.csv", "N": 12}"#).unwrap();
    let o = tflocal(&[
        "probe",
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        out2.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2, "wrong dimensions is a config error");
    assert!(String::from_utf8_lossy(&o.stderr).contains("16x16"));
}

#[test]
fn config_errors_exit_2() {
    let (_d, _, o) = run(
        "direct",
        r#"{"domain": {"shape": "disk", "center": [0, 0], "radius": 1}, "N": 4, "colour": 1}"#,
        &[],
    );
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
    let (_d, _, o) = run("direct", r#"{"N": 4}"#, &[]);
    assert_eq!(code(&o), 2);
    let (_d, _, o) = run(
        "direct",
        r#"{"domain": {"shape": "disk", "center": [0, 0], "radius": -1}}"#,
        &[],
    );
    assert_eq!(code(&o), 2);
    let (_d, _, o) = run("frames", r#"{"frames": {"probe_order": 40}}"#, &[]);
    assert_eq!(code(&o), 2, "truncation risk is a config problem");
    let o = tflocal(&["direct", "--config", "/nonexistent/config.json"]);
    assert_eq!(code(&o), 2);
    let o = tflocal(&["bogus", "--config", "x.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn symbol_counterexample() {
    let (_d, out, o) = run("symbol", r#"{"symbol": {"target": 1}, "N": 12}"#, &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let meta = json(&out.join("meta.json"));
    assert!(meta["eigen_probe"]["residual"].as_f64().unwrap() <= 1e-6);
    assert!(meta["neighbour_probe"]["residual"].as_f64().unwrap() >= 1e-3);
    assert!(meta["moment_entry"].as_f64().unwrap() <= 1e-8);
    assert_eq!(meta["angular_order"], 2);
}

#[test]
fn wavelet_outputs() {
    let (_d, out, o) = run(
        "wavelet",
        r#"{"wavelet": {"alpha": 1.0, "radius": 0.5}, "N": 16}"#,
        &[],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(rows(&out.join("spectrum.csv"))
        .1
        .iter()
        .all(|r| r[4] <= 1e-8));
    assert!(rows(&out.join("laguerre.csv"))
        .1
        .iter()
        .all(|r| r[5] <= 1e-8));
    assert!(rows(&out.join("ber_psi.csv"))
        .1
        .iter()
        .all(|r| r[7] <= 1e-4));
    let pd = json(&out.join("pseudodisk.json"));
    assert_eq!(pd["pseudodisk"]["center"], serde_json::json!([0.0, 1.0]));
    assert!((pd["pseudodisk"]["rho"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert_eq!(pd["image"]["shape"], "disk");

    let (_d, _, o) = run("wavelet", r#"{"wavelet": {"radius": 1.5}}"#, &[]);
    assert_eq!(code(&o), 2);
}

#[test]
fn frames_sweep() {
    let (_d, out, o) = run("frames", "{}", &[]);
    assert_eq!(code(&o), 0);
    let (header, data) = rows(&out.join("sweep.csv"));
    assert_eq!(header, ["redundancy", "rect_cond", "hex_cond", "ratio"]);
    assert_eq!(data.len(), 3);
    assert!(data
        .iter()
        .all(|r| r[3] < 1.0 && r[1] > 1.001 && r[2] > 1.001));
    assert!(json(&out.join("frames.json"))["estimator"]
        .as_str()
        .unwrap()
        .contains("not certified"));
}

#[test]
fn validate_pass_and_flagged_failure() {
    let (_d, out, o) = run(
        "validate",
        r#"{"validate": {"criteria": [1, 2, 8, 9]}}"#,
        &[],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep = json(&out.join("validation.json"));
    assert_eq!(rep["all_pass"], true);
    assert_eq!(rep["results"].as_array().unwrap().len(), 4);
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS  9 Laguerre identities"));

    // seed only feeds the random geometry check
    let (_d, out2, _) = run(
        "validate",
        r#"{"validate": {"criteria": [1, 2, 8, 9]}}"#,
        &["--seed", "7"],
    );
    let rep2 = json(&out2.join("validation.json"));
    for i in [0, 1, 3] {
        assert_eq!(rep["results"][i], rep2["results"][i]);
    }

    let tight = r#"{"validate": {"criteria": [4]}, "quadrature": {"radial_nodes": 16, "angular_nodes": 24, "target_abs_tol": 1e-15}}"#;
    let (_d, out, o) = run("validate", tight, &[]);
    assert_eq!(code(&o), 3);
    let rep = json(&out.join("validation.json"));
    assert_eq!(rep["results"][0]["quadrature_failure"], true);
    assert!(String::from_utf8_lossy(&o.stderr).contains("quadrature failure"));
}

#[test]
fn shipped_configs_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg =
            tflocal_cli::ExperimentConfig::parse(&fs::read_to_string(&path).unwrap()).unwrap();
        let command = cfg.command.expect("shipped configs name their command");
        cfg.materialize(command, None, None)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        seen += 1;
    }
    assert!(seen >= 6);
}
