//! File emission: curve CSV/JSON, manifests, atomic writes.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::regimes::Regime;

pub const CSV_HEADER: &str = "tau,gamma,regime,err_estimate";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A computed, classified curve ready to be written.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveData {
    pub tau: Vec<f64>,
    pub gamma: Vec<f64>,
    pub regime: Vec<Regime>,
    pub err_estimate: Vec<f64>,
}

impl CurveData {
    /// Shortest round-trip decimal for every number.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * self.tau.len());
        out.push_str(CSV_HEADER);
        out.push('\n');
        for i in 0..self.tau.len() {
            out.push_str(&format!(
                "{:?},{:?},{},{:?}\n",
                self.tau[i], self.gamma[i], self.regime[i], self.err_estimate[i]
            ));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tau": self.tau,
            "gamma": self.gamma,
            "regime": self.regime.iter().map(|r| r.as_str()).collect::<Vec<_>>(),
            "err_estimate": self.err_estimate,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => pretty(&self.to_json()),
        }
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialise");
    s.push('\n');
    s
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    let tmp: PathBuf = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

/// Common manifest fields.
pub fn manifest(
    command: &str,
    config: &std::collections::BTreeMap<String, String>,
    wall_seconds: f64,
    warnings: &[String],
) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("config".into(), json!(config));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("wall_seconds".into(), json!(wall_seconds));
    m.insert("warnings".into(), json!(warnings));
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let c = CurveData {
            tau: vec![0.1, 1.0],
            gamma: vec![1e-7, 0.25],
            regime: vec![Regime::Zeno, Regime::AntiZeno],
            err_estimate: vec![0.0, 3e-20],
        };
        assert_eq!(
            c.to_csv(),
            "tau,gamma,regime,err_estimate\n0.1,1e-7,zeno,0.0\n1.0,0.25,anti_zeno,3e-20\n"
        );
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = std::env::temp_dir().join(format!("zeno-lab-out-{}", std::process::id()));
        let p = dir.join("x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        let leftovers = std::fs::read_dir(&dir).unwrap().count();
        assert_eq!(leftovers, 1);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
