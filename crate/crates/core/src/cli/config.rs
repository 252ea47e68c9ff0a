//! Run configuration: flat `key = value` text with `#` comments.
//!
//! Every key has a default, so an empty file is a valid configuration for
//! the strong-coupling rate at `ε = 1`, `Δ = 0.05`, `G = 1`, `ω_c = 10`,
//! zero temperature, on 100 points of `τ ∈ [0.05, 3]`.
//!
//! Numeric keys may hold comma-separated lists; only `sweep` accepts them
//! (it runs the Cartesian product), apart from `check_taus`, which is a list
//! by nature.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::bath::{Mode, SpectralDensity, Temperature};
use crate::error::{Error, Result};
use crate::quad::QuadSpec;
use crate::regimes::Variant;
use crate::strong_rates::{ModPhase, StrongOptions, SystemParams};

/// Accepted keys with their defaults.
pub const KEYS: &[(&str, &str)] = &[
    ("variant", "strong"),
    ("epsilon", "1"),
    ("delta", "0.05"),
    ("j", "0.5"),
    ("n_spins", "1"),
    ("coupling", "1"),
    ("ohmicity", "1"),
    ("omega_c", "10"),
    ("modes_file", ""),
    ("beta", "inf"),
    ("tau_lo", "0.05"),
    ("tau_hi", "3"),
    ("points", "100"),
    ("rel_tol", "1e-7"),
    ("abs_tol", "1e-15"),
    ("max_evals", "4000000"),
    ("mod_phase", "two_tau_minus_t"),
    ("label", ""),
    ("k_modes", "2"),
    ("omega_max", ""),
    ("n_max", "10"),
    ("n_meas", "1"),
    ("removal", "false"),
    ("dim_cap", "4096"),
    ("check_taus", "0.5, 1, 2"),
    ("oracle_tol", "0.05"),
    ("check_halving", "true"),
    ("grid_n", ""),
    ("refine_tol", "1e-4"),
    ("synthetic", "none"),
];

const ALIASES: &[(&str, &str)] = &[("g", "coupling"), ("s", "ohmicity"), ("wc", "omega_c")];

/// Raw configuration: canonical key to textual value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl Default for RawConfig {
    fn default() -> Self {
        RawConfig {
            values: KEYS
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        }
    }
}

fn canonical(key: &str) -> Result<&'static str> {
    let lower = key.trim().to_ascii_lowercase();
    if let Some((_, target)) = ALIASES.iter().find(|(a, _)| *a == lower) {
        return Ok(target);
    }
    KEYS.iter()
        .map(|(k, _)| *k)
        .find(|k| *k == lower)
        .ok_or_else(|| Error::invalid(format!("unknown config key '{}'", key.trim())))
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RawConfig::default();
        cfg.merge_text(text)?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read config {}: {e}", path.display())))?;
        RawConfig::parse(&text)
    }

    pub fn merge_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("line {}: expected 'key = value'", n + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    /// Sets one key; `assignment` is `key=value`.
    pub fn set_assignment(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("expected key=value, got '{assignment}'")))?;
        self.set(k, v)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = canonical(key)?;
        self.values
            .insert(key.to_string(), value.trim().to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    /// Keys whose value is a comma-separated list, excluding `check_taus`.
    pub fn list_keys(&self) -> Vec<String> {
        self.values
            .iter()
            .filter(|(k, v)| k.as_str() != "check_taus" && v.contains(','))
            .map(|(k, _)| k.clone())
            .collect()
    }

    /// One configuration per element of the Cartesian product of list values.
    pub fn expand(&self) -> Vec<RawConfig> {
        let mut out = vec![self.clone()];
        for key in self.list_keys() {
            let items: Vec<String> = self
                .get(&key)
                .split(',')
                .map(|s| s.trim().to_string())
                .collect();
            out = out
                .into_iter()
                .flat_map(|base| {
                    let key = &key;
                    items.iter().map(move |item| {
                        let mut c = base.clone();
                        c.values.insert(key.clone(), item.clone());
                        c
                    })
                })
                .collect();
        }
        out
    }

    pub fn resolve(&self) -> Result<RunConfig> {
        RunConfig::from_raw(self)
    }
}

fn num(raw: &RawConfig, key: &str) -> Result<f64> {
    let v = raw.get(key);
    if v.contains(',') {
        return Err(Error::invalid(format!(
            "{key}: lists are only accepted by 'sweep'"
        )));
    }
    match v.to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        s => s
            .parse::<f64>()
            .map_err(|_| Error::invalid(format!("{key}: expected a number, got '{v}'"))),
    }
}

fn opt_num(raw: &RawConfig, key: &str) -> Result<Option<f64>> {
    if raw.get(key).is_empty() {
        Ok(None)
    } else {
        num(raw, key).map(Some)
    }
}

fn count(raw: &RawConfig, key: &str) -> Result<usize> {
    let v = raw.get(key);
    v.parse::<usize>()
        .map_err(|_| Error::invalid(format!("{key}: expected a non-negative integer, got '{v}'")))
}

fn flag(raw: &RawConfig, key: &str) -> Result<bool> {
    match raw.get(key).to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        v => Err(Error::invalid(format!(
            "{key}: expected true or false, got '{v}'"
        ))),
    }
}

/// Test curve substituted for the physics in `transitions` and `rate-curve`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Synthetic {
    None,
    /// `Γ(τ) = 2 + sin τ`.
    Sine,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BathSpec {
    Ohmic {
        coupling: f64,
        ohmicity: f64,
        omega_c: f64,
    },
    Modes {
        path: PathBuf,
        modes: Vec<Mode>,
    },
}

/// Validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub variant: Variant,
    pub sys: SystemParams,
    pub n_spins: usize,
    pub bath: BathSpec,
    pub temperature: Temperature,
    pub tau_lo: f64,
    pub tau_hi: f64,
    pub points: usize,
    pub quad: QuadSpec,
    pub mod_phase: ModPhase,
    pub label: String,
    pub k_modes: usize,
    pub omega_max: Option<f64>,
    pub n_max: usize,
    pub n_meas: usize,
    pub removal: bool,
    pub dim_cap: usize,
    pub check_taus: Vec<f64>,
    pub oracle_tol: f64,
    pub check_halving: bool,
    pub grid_n: usize,
    pub refine_tol: f64,
    pub synthetic: Synthetic,
    raw: RawConfig,
}

/// Reads `omega g2` pairs, one mode per line, `#` comments allowed.
pub fn read_modes_file(path: &Path) -> Result<Vec<Mode>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read modes file {}: {e}", path.display())))?;
    let mut modes = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| {
                Error::invalid(format!("{}:{}: expected 'omega g2'", path.display(), n + 1))
            })?;
        if fields.len() != 2 {
            return Err(Error::invalid(format!(
                "{}:{}: expected 'omega g2'",
                path.display(),
                n + 1
            )));
        }
        modes.push(Mode::new(fields[0], fields[1]));
    }
    SpectralDensity::discrete(modes.clone())?;
    Ok(modes)
}

impl RunConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let variant: Variant = raw.get("variant").parse()?;
        let sys = SystemParams::new(num(raw, "epsilon")?, num(raw, "delta")?, num(raw, "j")?)?;
        let n_spins = count(raw, "n_spins")?;
        if n_spins == 0 {
            return Err(Error::invalid("n_spins must be >= 1"));
        }
        let bath = if raw.get("modes_file").is_empty() {
            let (coupling, ohmicity, omega_c) = (
                num(raw, "coupling")?,
                num(raw, "ohmicity")?,
                num(raw, "omega_c")?,
            );
            SpectralDensity::ohmic(coupling, ohmicity, omega_c)?;
            BathSpec::Ohmic {
                coupling,
                ohmicity,
                omega_c,
            }
        } else {
            let path = PathBuf::from(raw.get("modes_file"));
            let modes = read_modes_file(&path)?;
            BathSpec::Modes { path, modes }
        };
        let beta = num(raw, "beta")?;
        let temperature = if beta.is_infinite() && beta > 0.0 {
            Temperature::ZERO
        } else {
            Temperature::from_beta(beta)?
        };

        let tau_lo = num(raw, "tau_lo")?;
        let tau_hi = num(raw, "tau_hi")?;
        let points = count(raw, "points")?;
        if !(tau_lo > 0.0 && tau_hi > tau_lo && tau_hi.is_finite()) {
            return Err(Error::invalid(format!(
                "need 0 < tau_lo < tau_hi, got {tau_lo} and {tau_hi}"
            )));
        }
        if points < 2 {
            return Err(Error::invalid(format!("points must be >= 2, got {points}")));
        }
        let quad = QuadSpec::new(
            num(raw, "rel_tol")?,
            num(raw, "abs_tol")?,
            count(raw, "max_evals")?,
        )?;
        let mod_phase: ModPhase = raw.get("mod_phase").parse()?;

        let k_modes = count(raw, "k_modes")?;
        let omega_max = opt_num(raw, "omega_max")?;
        if let Some(w) = omega_max {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::invalid(format!("omega_max must be > 0, got {w}")));
            }
        }
        let n_max = count(raw, "n_max")?;
        let n_meas = count(raw, "n_meas")?;
        if n_meas == 0 {
            return Err(Error::invalid("n_meas must be >= 1"));
        }
        let check_taus = raw
            .get("check_taus")
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|t| *t > 0.0 && t.is_finite())
                    .ok_or_else(|| Error::invalid(format!("check_taus: bad value '{}'", s.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        let oracle_tol = num(raw, "oracle_tol")?;
        if !(oracle_tol >= 0.0) {
            return Err(Error::invalid("oracle_tol must be >= 0"));
        }
        let grid_n = if raw.get("grid_n").is_empty() {
            points
        } else {
            count(raw, "grid_n")?
        };
        let refine_tol = num(raw, "refine_tol")?;
        if !(refine_tol > 0.0) {
            return Err(Error::invalid("refine_tol must be > 0"));
        }
        let synthetic = match raw.get("synthetic") {
            "none" | "" => Synthetic::None,
            "sine" => Synthetic::Sine,
            other => {
                return Err(Error::invalid(format!(
                    "synthetic: unknown curve '{other}'"
                )))
            }
        };
        let label = match raw.get("label") {
            "" => variant.as_str().to_string(),
            l => l.to_string(),
        };
        if label.contains(['/', '\\']) {
            return Err(Error::invalid("label may not contain path separators"));
        }

        Ok(RunConfig {
            variant,
            sys,
            n_spins,
            bath,
            temperature,
            tau_lo,
            tau_hi,
            points,
            quad,
            mod_phase,
            label,
            k_modes,
            omega_max,
            n_max,
            n_meas,
            removal: flag(raw, "removal")?,
            dim_cap: count(raw, "dim_cap")?,
            check_taus,
            oracle_tol,
            check_halving: flag(raw, "check_halving")?,
            grid_n,
            refine_tol,
            synthetic,
            raw: raw.clone(),
        })
    }

    pub fn raw(&self) -> &RawConfig {
        &self.raw
    }

    pub fn spectral_density(&self) -> Result<SpectralDensity> {
        match &self.bath {
            BathSpec::Ohmic {
                coupling,
                ohmicity,
                omega_c,
            } => SpectralDensity::ohmic(*coupling, *ohmicity, *omega_c),
            BathSpec::Modes { modes, .. } => SpectralDensity::discrete(modes.clone()),
        }
    }

    pub fn strong_options(&self) -> StrongOptions {
        StrongOptions {
            quad: self.quad,
            mod_phase: self.mod_phase,
        }
    }

    pub fn tau_grid(&self) -> Vec<f64> {
        crate::regimes::linspace(self.tau_lo, self.tau_hi, self.points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let c = RawConfig::default().resolve().unwrap();
        assert_eq!(c.variant, Variant::Strong);
        assert_eq!(c.sys, SystemParams::spin_half(1.0, 0.05).unwrap());
        assert!(c.temperature.is_zero());
        assert_eq!(c.points, 100);
        assert_eq!(c.n_spins, 1);
        assert_eq!(c.label, "strong");
    }

    #[test]
    fn parse_with_comments_and_aliases() {
        let raw =
            RawConfig::parse("# header\nvariant = weak_filter\nG = 0.003 # trailing\n\nbeta=inf\n")
                .unwrap();
        let c = raw.resolve().unwrap();
        assert_eq!(c.variant, Variant::WeakFilter);
        assert_eq!(
            c.bath,
            BathSpec::Ohmic {
                coupling: 0.003,
                ohmicity: 1.0,
                omega_c: 10.0
            }
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RawConfig::parse("nonsense = 1").is_err());
        assert!(RawConfig::parse("no equals sign").is_err());
        assert!(RawConfig::parse("points = 1").unwrap().resolve().is_err());
        assert!(RawConfig::parse("tau_lo = 2\ntau_hi = 1")
            .unwrap()
            .resolve()
            .is_err());
        assert!(RawConfig::parse("coupling = 1, 2")
            .unwrap()
            .resolve()
            .is_err());
        assert!(RawConfig::parse("j = 0.3").unwrap().resolve().is_err());
    }

    #[test]
    fn cartesian_expansion() {
        let raw = RawConfig::parse("coupling = 1, 2\nj = 0.5, 1, 2").unwrap();
        let all = raw.expand();
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|c| c.resolve().is_ok()));
    }
}
