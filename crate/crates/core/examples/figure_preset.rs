//! Runs a figure preset through the command-line front end into a temporary directory.

use std::path::PathBuf;

fn main() {
    let preset = std::env::args().nth(1).unwrap_or_else(|| "fig1a".into());
    let out: PathBuf = std::env::temp_dir().join(format!("zeno-lab-{preset}"));
    let code = zeno_lab::cli::run([
        "zeno-lab",
        "--out",
        out.to_str().unwrap(),
        "--set",
        "points=40",
        "figure",
        &preset,
    ]);
    println!("exit code {code}");
    let mut files: Vec<_> = std::fs::read_dir(&out)
        .map(|d| d.filter_map(|e| e.ok()).map(|e| e.path()).collect())
        .unwrap_or_default();
    files.sort();
    for f in files {
        println!("{}", f.display());
    }
}
