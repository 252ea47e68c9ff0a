use std::path::Path;
use std::process::{Command, Output};

fn zeno(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeno-lab"))
        .arg("--out")
        .arg(dir)
        .args(args)
        .env_remove("ZENO_LAB_THREADS")
        .output()
        .unwrap()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn rate_curve_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = zeno(
        dir.path(),
        &["--set", "points=25", "--set", "label=run", "rate-curve"],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = rows(&dir.path().join("run.csv"));
    assert_eq!(table[0], ["tau", "gamma", "regime", "err_estimate"]);
    assert_eq!(table.len(), 26);
    for r in &table[1..] {
        assert!(["zeno", "anti_zeno", "stationary"].contains(&r[2].as_str()));
    }
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("run.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "rate-curve");
    assert_eq!(manifest["config"]["points"], "25");
}

#[test]
fn decoupled_curve_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = zeno(
        dir.path(),
        &[
            "--set",
            "coupling=0",
            "--set",
            "points=20",
            "--set",
            "tau_lo=0.1",
            "rate-curve",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    for r in &rows(&dir.path().join("strong.csv"))[1..] {
        let tau: f64 = r[0].parse().unwrap();
        let gamma: f64 = r[1].parse().unwrap();
        let exact = 0.0025 * (0.5 * tau).sin().powi(2) / tau;
        assert!((gamma - exact).abs() <= 1e-6 * exact);
    }
}

#[test]
fn json_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = zeno(
        dir.path(),
        &["--format", "json", "--set", "points=5", "rate-curve"],
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("strong.json")).unwrap())
            .unwrap();
    assert_eq!(v["tau"].as_array().unwrap().len(), 5);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(
        zeno(p, &["--set", "points=1", "rate-curve"]).status.code(),
        Some(2)
    );
    assert_eq!(std::fs::read_dir(p).unwrap().count(), 0);
    assert_eq!(
        zeno(p, &["--set", "delta=-1", "rate-curve"]).status.code(),
        Some(2)
    );
    assert_eq!(
        zeno(p, &["--set", "nonsense=1", "rate-curve"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(zeno(p, &["figure", "fig9z"]).status.code(), Some(2));
    assert_eq!(
        zeno(p, &["--config", "/no/such/file", "rate-curve"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        zeno(
            p,
            &[
                "--set",
                "variant=oracle",
                "--set",
                "k_modes=3",
                "--set",
                "n_max=30",
                "--set",
                "points=3",
                "rate-curve"
            ]
        )
        .status
        .code(),
        Some(4)
    );
    let blocker = p.join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_zeno-lab"))
        .args([
            "--out",
            blocker.join("sub").to_str().unwrap(),
            "--set",
            "points=3",
            "rate-curve",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# strong coupling\nvariant = weak_pop\ng = 0.05\npoints = 7\nlabel = fromfile\n",
    )
    .unwrap();
    let out = zeno(
        dir.path(),
        &[
            "--config",
            cfg.to_str().unwrap(),
            "--set",
            "points=9",
            "rate-curve",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(rows(&dir.path().join("fromfile.csv")).len(), 10);
}

#[test]
fn figure_file_counts() {
    for (preset, curves) in [("fig1a", 3), ("fig4b", 3), ("fig5b", 2)] {
        let dir = tempfile::tempdir().unwrap();
        let out = zeno(dir.path(), &["--set", "points=12", "figure", preset]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{preset}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let csvs = std::fs::read_dir(dir.path())
            .unwrap()
            .filter(|e| {
                e.as_ref()
                    .unwrap()
                    .path()
                    .extension()
                    .is_some_and(|x| x == "csv")
            })
            .count();
        assert_eq!(csvs, curves, "{preset}");
        let m: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join(format!("{preset}.json"))).unwrap(),
        )
        .unwrap();
        assert_eq!(m["curves"].as_array().unwrap().len(), curves);
    }
}

#[test]
fn figure_is_deterministic_across_thread_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(
        zeno(
            a.path(),
            &["--threads", "1", "--set", "points=30", "figure", "fig1a"]
        )
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        zeno(
            b.path(),
            &["--threads", "4", "--set", "points=30", "figure", "fig1a"]
        )
        .status
        .code(),
        Some(0)
    );
    for label in ["G_1", "G_1.75", "G_2.5"] {
        let name = format!("fig1a_{label}.csv");
        assert_eq!(
            std::fs::read(a.path().join(&name)).unwrap(),
            std::fs::read(b.path().join(&name)).unwrap()
        );
    }
}

#[test]
fn synthetic_transitions() {
    let dir = tempfile::tempdir().unwrap();
    let out = zeno(
        dir.path(),
        &[
            "--set",
            "synthetic=sine",
            "--set",
            "tau_lo=0.5",
            "--set",
            "tau_hi=6",
            "--set",
            "grid_n=40",
            "--set",
            "refine_tol=1e-6",
            "transitions",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("strong_transitions.json")).unwrap(),
    )
    .unwrap();
    let found = v["transitions"].as_array().unwrap();
    assert_eq!(found.len(), 2);
    let pi = std::f64::consts::PI;
    assert!((found[0]["tau_star"].as_f64().unwrap() - pi / 2.0).abs() < 1e-5);
    assert_eq!(found[0]["kind"], "zeno_to_anti_zeno");
    assert!((found[1]["tau_star"].as_f64().unwrap() - 1.5 * pi).abs() < 1e-5);
    assert_eq!(found[1]["kind"], "anti_zeno_to_zeno");
}

#[test]
fn sweep_over_list() {
    let dir = tempfile::tempdir().unwrap();
    let out = zeno(
        dir.path(),
        &["--set", "coupling=1, 2", "--set", "points=6", "sweep"],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sweep.json")).unwrap())
            .unwrap();
    assert_eq!(m["curves"].as_array().unwrap().len(), 2);
}

#[test]
fn oracle_check_passes_at_moderate_temperature() {
    let dir = tempfile::tempdir().unwrap();
    let out = zeno(
        dir.path(),
        &[
            "--set",
            "omega_c=2",
            "--set",
            "delta=0.01",
            "--set",
            "beta=5",
            "--set",
            "omega_max=3.2",
            "oracle-check",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("strong_oracle_check.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(v["passed"], true);
}
