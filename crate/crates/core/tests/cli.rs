use std::process::Command;

fn percolab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_percolab"))
}

#[test]
fn kappa_prints_the_exact_rational() {
    let dir = tempfile::tempdir().unwrap();
    let out = percolab()
        .args(["--out", dir.path().to_str().unwrap(), "kappa", "--eta1", "5/48", "--eta2", "17/48"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).lines().any(|l| l.contains("17/384")));
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn exit_scan_on_the_full_lattice_leaves_the_unit_box_in_one_step() {
    let dir = tempfile::tempdir().unwrap();
    let status = percolab()
        .args(["--seed", "5", "--out", dir.path().to_str().unwrap()])
        .args(["exit-scan", "--host", "full-lattice", "--n", "1,2", "--environments", "2", "--walks", "5"])
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    let tau1: Vec<f64> = csv
        .lines()
        .filter(|l| l.starts_with("mean_tau,1,"))
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert!(!tau1.is_empty(), "{csv}");
    assert!(tau1.iter().all(|&t| t == 1.0), "{csv}");
}

#[test]
fn invalid_config_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[experiment]\nkind = \"iic\"\nl = 2\nn = 4\n").unwrap();
    let out = percolab().args(["run", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn config_file_runs_and_echoes_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("arms.toml");
    let out_dir = dir.path().join("out");
    std::fs::write(&cfg, "seed = 3\n[experiment]\nkind = \"arms\"\nradii = [1, 2]\nreplicas = 50\n").unwrap();
    let status = percolab().args(["--out", out_dir.to_str().unwrap(), "run", cfg.to_str().unwrap()]).status().unwrap();
    assert!(status.success());
    let manifest = std::fs::read_to_string(out_dir.join("manifest.json")).unwrap();
    assert!(manifest.contains("four_arm_alternating"));
}
