use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn hsr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsr"))
        .args(args)
        .env_remove("HSR_DATA_DIR")
        .output()
        .expect("run hsr")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixture(name: &str) -> String {
    core_dir().join("data/fixtures").join(name).display().to_string()
}

fn core_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core")
}

/// Parses `key: value` lines.
fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .trim_end_matches('%')
        .parse()
        .unwrap()
}

fn position(text: &str) -> Vec<f64> {
    text.lines()
        .find_map(|l| l.strip_prefix("position: "))
        .unwrap()
        .split_whitespace()
        .map(|v| v.parse().unwrap())
        .collect()
}

#[test]
fn fk_examples() {
    let o = hsr(&["fk", "--phi", "0", "--theta", "0"]);
    assert!(o.status.success());
    let p = position(&stdout(&o));
    assert!(p[0].abs() < 1e-12 && p[1].abs() < 1e-12 && (p[2] - 0.16).abs() < 1e-12);

    let p = position(&stdout(&hsr(&["fk", "--phi", "1.5708", "--theta", "0"])));
    assert!((p[0] - 0.10186).abs() < 1e-5 && p[1].abs() < 1e-9 && (p[2] - 0.10186).abs() < 1e-5);

    let o = hsr(&["fk", "--phi", "4.0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("phi out of [0, pi]"), "{}", stderr(&o));
}

#[test]
fn ik_examples() {
    let out = stdout(&hsr(&["ik", "0", "0", "0"]));
    assert_eq!((field(&out, "phi"), field(&out, "theta")), (0.0, 0.0));

    let out = stdout(&hsr(&["ik", "-0.031416", "0.015708", "0.015708"]));
    assert!((field(&out, "phi") - std::f64::consts::FRAC_PI_2).abs() < 1e-4);
    assert!(field(&out, "theta").abs() < 1e-9);

    let o = hsr(&["ik", "0.01", "0.01", "0.01"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("residual 0.03"), "{}", stderr(&o));
}

#[test]
fn workspace_rows_and_rings() {
    let o = hsr(&["workspace", "--n-phi", "2", "--n-theta", "4"]);
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(text.lines().next(), Some("phi,theta,x,y,z"));
    assert_eq!(rows.len(), 8);
    for ring in rows.chunks(4) {
        for r in ring {
            assert!((r[4] - ring[0][4]).abs() < 1e-9);
        }
    }
    let radius = rows[4][2].hypot(rows[4][3]);
    assert!((radius - 0.10186).abs() < 1e-5, "{radius}");
}

#[test]
fn workspace_files_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("ws.csv");
    let o = hsr(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--format",
        "both",
        "workspace",
        "--n-phi",
        "5",
        "--n-theta",
        "8",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 41);
    let svg = std::fs::read_to_string(dir.path().join("workspace.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<circle"));
}

#[test]
fn solve_examples() {
    let out = stdout(&hsr(&["solve", "--phi", "0.4", "--k", "0.63"]));
    assert_eq!((field(&out, "p1_bar"), field(&out, "p2_bar")), (0.5, 1.86));
    let out = stdout(&hsr(&["solve", "--phi", "1.0", "--k", "2.58"]));
    assert_eq!((field(&out, "p1_bar"), field(&out, "p2_bar")), (1.25, 2.98));
    let o = hsr(&["solve", "--phi", "0.4", "--k", "9.9"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("achievable [0.63, 1.32]"), "{}", stderr(&o));
    assert_eq!(hsr(&["solve", "--phi", "2.0", "--k", "1.0"]).status.code(), Some(2));
}

#[test]
fn table_queries() {
    let out = stdout(&hsr(&["stiffness", "--grid", "with", "--p1", "0", "--p2", "0.25"]));
    assert!((field(&out, "k_nm_per_rad") - 0.53).abs() < 1e-12);
    assert_eq!(hsr(&["stiffness", "--p1", "3", "--p2", "0"]).status.code(), Some(2));
    let out = stdout(&hsr(&["range"]));
    assert_eq!(field(&out, "without_backbone"), 256.41);
    assert_eq!(field(&out, "with_backbone"), 517.31);
    let out = stdout(&hsr(&["shape", "--p1", "0.5", "--p2", "2.235"]));
    assert!((field(&out, "phi_rad") - 0.7).abs() < 1e-9);
}

#[test]
fn data_dir_from_env_and_flag() {
    let data = core_dir().join("data");
    let o = Command::new(env!("CARGO_BIN_EXE_hsr"))
        .args(["solve", "--phi", "0.4", "--k", "0.63"])
        .env("HSR_DATA_DIR", &data)
        .output()
        .unwrap();
    assert!(o.status.success());
    let o = hsr(&["--data-dir", "/nonexistent", "range"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn estimate_examples() {
    let (b, p) = (fixture("tracker_baseline.csv"), fixture("tracker_perturbed.csv"));
    let o = hsr(&["estimate", "--baseline", &b, "--perturbed", &p, "--delta-torque", "0.1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!((field(&stdout(&o), "k_nm_per_rad") - 0.52).abs() <= 1e-6);

    let o = hsr(&["estimate", "--baseline", &b, "--perturbed", &p, "--delta-torque", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("delta_torque"));

    let o = hsr(&["estimate", "--baseline", &b, "--perturbed", &b, "--delta-torque", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("too small"), "{}", stderr(&o));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "t,x\n0,1\n").unwrap();
    let o = hsr(&["estimate", "--baseline", bad.to_str().unwrap(), "--perturbed", &p, "--delta-torque", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("expected header"));
}

#[test]
fn peak_of_bundled_trace() {
    let o = hsr(&["peak", &fixture("force_trace.csv")]);
    assert!((field(&stdout(&o), "failure_force_n") - 4.0).abs() < 0.1);
}

#[test]
fn grip_study_default_run() {
    let o = hsr(&["grip-study"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("object,phi_rad,k_nm_per_rad,p1_bar,p2_bar,failure_force_n"));
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 48);
    let force = |obj: &str, i: usize| -> f64 { rows.iter().filter(|r| r[0] == obj).nth(i).unwrap()[5].parse().unwrap() };
    for i in 0..16 {
        assert!(force("ball", i) < force("pyramid", i) && force("pyramid", i) < force("box", i), "row {i}");
        if i % 4 != 0 {
            for obj in ["ball", "pyramid", "box"] {
                assert!(force(obj, i) > force(obj, i - 1));
            }
        }
    }
    assert_eq!(stdout(&hsr(&["grip-study"])), text, "byte-identical reruns");
}

#[test]
fn grip_study_options() {
    let o = hsr(&["grip-study", "--objects", "box", "--mu", "0.5"]);
    assert_eq!(stdout(&o).lines().count(), 17);
    assert_eq!(hsr(&["grip-study", "--objects", "cone"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("hsr.toml");
    std::fs::write(&cfg, "friction_coefficient = 0.5\n").unwrap();
    let with_cfg = hsr(&["--config", cfg.to_str().unwrap(), "grip-study", "--objects", "box"]);
    assert_eq!(stdout(&with_cfg), stdout(&o));

    std::fs::write(&cfg, "bogus_key = 1\n").unwrap();
    let o = hsr(&["--config", cfg.to_str().unwrap(), "range"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus_key"), "{}", stderr(&o));
}
