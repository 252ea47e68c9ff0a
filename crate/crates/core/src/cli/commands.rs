//! The subcommands, independent of argument parsing.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{BathSpec, RawConfig, RunConfig, Synthetic};
use super::output::{self, CurveData, Format};
use super::presets::Preset;
use super::Failure;
use crate::bath::InfluencePhases;
use crate::error::Result;
use crate::oracle::{self, ExactModel};
use crate::regimes::{self, RateCurve, Variant};
use crate::strong_rates;
use crate::weak_rates::{self, FilterEval};

/// Everything a command needs besides its configuration.
#[derive(Debug, Clone)]
pub struct Context<'a> {
    pub out: &'a Path,
    pub format: Format,
}

/// Exact model described by `cfg` and any notes about how it was built.
pub fn oracle_model(cfg: &RunConfig) -> Result<(ExactModel, Vec<String>)> {
    let mut notes = Vec::new();
    let modes = match &cfg.bath {
        BathSpec::Modes { modes, .. } => modes.clone(),
        BathSpec::Ohmic { .. } => {
            let sd = cfg.spectral_density()?;
            let omega_max = match cfg.omega_max {
                Some(w) => w,
                None => oracle::default_omega_max(&sd)?,
            };
            oracle::discretize_bath(&sd, cfg.k_modes, omega_max)?
        }
    };
    let provisional_beta = if cfg.temperature.is_zero() {
        1.0
    } else {
        cfg.temperature.beta()
    };
    let mut model = ExactModel::new(cfg.sys, modes, cfg.n_max, provisional_beta)?
        .with_dim_cap(cfg.dim_cap)?
        .with_removal(cfg.removal);
    if cfg.temperature.is_zero() {
        model.beta = oracle::suggest_beta(&model)?;
        notes.push(format!(
            "beta = inf is not usable by the exact simulation; using beta = {:?}",
            model.beta
        ));
    }
    Ok((model, notes))
}

struct Point {
    gamma: f64,
    error: f64,
    note: Option<&'static str>,
}

fn evaluate(cfg: &RunConfig, model: Option<&ExactModel>, tau: f64) -> Result<Point> {
    let point = |gamma, error, note| Ok(Point { gamma, error, note });
    if cfg.synthetic == Synthetic::Sine {
        return point(2.0 + tau.sin(), 0.0, None);
    }
    let breakdown = |flag: bool| flag.then_some("perturbative breakdown (Δ²τ² or Γτ above 0.1)");
    match cfg.variant {
        Variant::Strong | Variant::StrongMod => {
            let ip =
                InfluencePhases::new(cfg.spectral_density()?, cfg.temperature)?.with_quad(cfg.quad);
            let opts = cfg.strong_options();
            let r = if cfg.variant == Variant::Strong {
                strong_rates::gamma_strong_with(&cfg.sys, &ip, tau, &opts)?
            } else {
                strong_rates::gamma_n_strong_with(&cfg.sys, &ip, tau, &opts)?
            };
            point(r.gamma, r.error, breakdown(r.perturbative_breakdown))
        }
        Variant::WeakPop => {
            let e = weak_rates::gamma_weak_popdecay_with(
                cfg.sys.epsilon,
                &cfg.spectral_density()?,
                tau,
                &cfg.quad,
            )?;
            point(e.value, e.error, None)
        }
        Variant::WeakFilter => {
            let fe = FilterEval::with_quad(cfg.sys, cfg.quad)?;
            let r = weak_rates::gamma_weak_filter(
                &fe,
                &cfg.spectral_density()?,
                cfg.temperature,
                tau,
                cfg.n_spins,
            )?;
            point(r.gamma, r.error, breakdown(r.perturbative_breakdown))
        }
        Variant::Oracle => {
            let model = model.expect("oracle curves carry a model");
            let run = oracle::exact_survival(model, tau, 1)?;
            let note = run
                .truncation_warning
                .then_some("Fock truncation: boundary weight above 1e-4");
            point(run.implied_rate, 0.0, note)
        }
    }
}

/// Computes and classifies the curve of one configuration.
pub fn compute_curve(cfg: &RunConfig) -> Result<(CurveData, Vec<String>)> {
    let (model, mut warnings) =
        if cfg.variant == Variant::Oracle && cfg.synthetic == Synthetic::None {
            let (m, notes) = oracle_model(cfg)?;
            (Some(m), notes)
        } else {
            (None, Vec::new())
        };
    let tau = cfg.tau_grid();
    let points = tau
        .par_iter()
        .map(|&t| evaluate(cfg, model.as_ref(), t))
        .collect::<Result<Vec<Point>>>()?;
    let gamma: Vec<f64> = points.iter().map(|p| p.gamma).collect();
    let err_estimate: Vec<f64> = points.iter().map(|p| p.error).collect();

    let mut notes: Vec<&str> = points.iter().filter_map(|p| p.note).collect();
    notes.sort_unstable();
    notes.dedup();
    for n in notes {
        let count = points.iter().filter(|p| p.note == Some(n)).count();
        warnings.push(format!(
            "{}: {n} at {count} of {} points",
            cfg.label,
            tau.len()
        ));
    }

    let curve = RateCurve::new(tau, gamma, cfg.variant)?;
    let labelled = if curve.len() >= 3 {
        regimes::classify(&curve, None)?.labels().to_vec()
    } else {
        vec![regimes::Regime::Stationary; curve.len()]
    };
    Ok((
        CurveData {
            tau: curve.tau().to_vec(),
            gamma: curve.gamma().to_vec(),
            regime: labelled,
            err_estimate,
        },
        warnings,
    ))
}

fn io(path: &Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn write(ctx: &Context, name: &str, contents: &str) -> std::result::Result<String, Failure> {
    let path = ctx.out.join(name);
    output::write_atomic(&path, contents.as_bytes()).map_err(io(&path))?;
    Ok(name.to_string())
}

fn curve_entry(
    file: &str,
    format: Format,
    label: &str,
    style: &str,
    color: &str,
    params: &RawConfig,
) -> Value {
    let mut entry = json!({
        "label": label,
        "style": style,
        "color": color,
        "params": params.values(),
    });
    entry[format.extension()] = json!(file);
    entry
}

/// `rate-curve`: one curve, one data file, one manifest.
pub fn rate_curve(ctx: &Context, raw: &RawConfig) -> std::result::Result<(), Failure> {
    let start = Instant::now();
    let cfg = raw.resolve()?;
    let (data, warnings) = compute_curve(&cfg)?;
    let file = write(
        ctx,
        &format!("{}.{}", cfg.label, ctx.format.extension()),
        &data.render(ctx.format),
    )?;
    let mut m = output::manifest(
        "rate-curve",
        raw.values(),
        start.elapsed().as_secs_f64(),
        &warnings,
    );
    m.insert(
        "curves".into(),
        json!([curve_entry(
            &file, ctx.format, &cfg.label, "solid", "blue", raw
        )]),
    );
    write(
        ctx,
        &format!("{}.manifest.json", cfg.label),
        &output::pretty(&Value::Object(m)),
    )?;
    Ok(())
}

/// Configurations of every curve of `preset`. Keys the preset defines
/// override `raw`; everything else (grid, tolerances) comes from it.
pub fn preset_configs(preset: &Preset, raw: &RawConfig) -> Result<Vec<RawConfig>> {
    preset
        .curves
        .iter()
        .map(|c| {
            let mut cfg = raw.clone();
            for (k, v) in preset.common().iter().chain(preset.base).chain(c.set) {
                cfg.set(k, v)?;
            }
            cfg.set("label", &format!("{}_{}", preset.name, sanitize(c.label)))?;
            Ok(cfg)
        })
        .collect()
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// `figure`: the curve family of a preset.
pub fn figure(ctx: &Context, preset: &Preset, raw: &RawConfig) -> std::result::Result<(), Failure> {
    let start = Instant::now();
    let raws = preset_configs(preset, raw)?;
    let cfgs = raws
        .iter()
        .map(RawConfig::resolve)
        .collect::<Result<Vec<_>>>()?;
    let results = cfgs
        .par_iter()
        .map(compute_curve)
        .collect::<Result<Vec<_>>>()?;

    let mut curves = Vec::new();
    let mut warnings = Vec::new();
    for ((cfg, raw_c), (spec, (data, w))) in cfgs
        .iter()
        .zip(&raws)
        .zip(preset.curves.iter().zip(results))
    {
        let file = write(
            ctx,
            &format!("{}.{}", cfg.label, ctx.format.extension()),
            &data.render(ctx.format),
        )?;
        curves.push(curve_entry(
            &file, ctx.format, spec.label, spec.style, spec.color, raw_c,
        ));
        warnings.extend(w);
    }
    let mut m = output::manifest(
        "figure",
        raw.values(),
        start.elapsed().as_secs_f64(),
        &warnings,
    );
    m.insert("preset".into(), json!(preset.name));
    m.insert("title".into(), json!(preset.title));
    m.insert("curves".into(), Value::Array(curves));
    write(
        ctx,
        &format!("{}.json", preset.name),
        &output::pretty(&Value::Object(m)),
    )?;
    Ok(())
}

/// `sweep`: the Cartesian product of every list-valued key.
pub fn sweep(ctx: &Context, raw: &RawConfig) -> std::result::Result<(), Failure> {
    let start = Instant::now();
    let keys = raw.list_keys();
    let mut raws = raw.expand();
    for (i, r) in raws.iter_mut().enumerate() {
        let base = match raw.get("label") {
            "" => "sweep".to_string(),
            l => l.to_string(),
        };
        r.set("label", &format!("{base}_{i:03}"))?;
    }
    let cfgs = raws
        .iter()
        .map(RawConfig::resolve)
        .collect::<Result<Vec<_>>>()?;
    let results = cfgs
        .par_iter()
        .map(compute_curve)
        .collect::<Result<Vec<_>>>()?;
    let mut curves = Vec::new();
    let mut warnings = Vec::new();
    for ((cfg, r), (data, w)) in cfgs.iter().zip(&raws).zip(results) {
        let file = write(
            ctx,
            &format!("{}.{}", cfg.label, ctx.format.extension()),
            &data.render(ctx.format),
        )?;
        let label = keys
            .iter()
            .map(|k| format!("{k}={}", r.get(k)))
            .collect::<Vec<_>>()
            .join(" ");
        curves.push(curve_entry(&file, ctx.format, &label, "solid", "blue", r));
        warnings.extend(w);
    }
    let mut m = output::manifest(
        "sweep",
        raw.values(),
        start.elapsed().as_secs_f64(),
        &warnings,
    );
    m.insert("swept_keys".into(), json!(keys));
    m.insert("curves".into(), Value::Array(curves));
    let name = match raw.get("label") {
        "" => "sweep.json".to_string(),
        l => format!("{l}.json"),
    };
    write(ctx, &name, &output::pretty(&Value::Object(m)))?;
    Ok(())
}

/// `transitions`: extrema of the configured curve.
pub fn transitions(ctx: &Context, raw: &RawConfig) -> std::result::Result<(), Failure> {
    let start = Instant::now();
    let cfg = raw.resolve()?;
    let model = if cfg.variant == Variant::Oracle && cfg.synthetic == Synthetic::None {
        Some(oracle_model(&cfg)?.0)
    } else {
        None
    };
    let found = regimes::find_transitions(
        |t| evaluate(&cfg, model.as_ref(), t).map(|p| p.gamma),
        (cfg.tau_lo, cfg.tau_hi),
        cfg.grid_n,
        cfg.refine_tol,
    )?;
    let list: Vec<Value> = found
        .iter()
        .map(|t| json!({"tau_star": t.tau_star, "kind": t.kind.as_str(), "error_bound": t.error_bound}))
        .collect();
    match ctx.format {
        Format::Csv => {
            let mut s = String::from("tau_star,kind,error_bound\n");
            for t in &found {
                s.push_str(&format!(
                    "{:?},{},{:?}\n",
                    t.tau_star,
                    t.kind.as_str(),
                    t.error_bound
                ));
            }
            write(ctx, &format!("{}_transitions.csv", cfg.label), &s)?;
        }
        Format::Json => {}
    }
    let mut m = output::manifest(
        "transitions",
        raw.values(),
        start.elapsed().as_secs_f64(),
        &[],
    );
    m.insert("transitions".into(), Value::Array(list));
    write(
        ctx,
        &format!("{}_transitions.json", cfg.label),
        &output::pretty(&Value::Object(m)),
    )?;
    Ok(())
}

/// Deficit discrepancies below this are rounding, whatever their relative size.
const PROBABILITY_FLOOR: f64 = 1e-10;

/// Report of `oracle-check`; `passed` decides the exit code.
pub fn oracle_report(cfg: &RunConfig) -> Result<(Value, bool, Vec<String>)> {
    let (model, notes) = oracle_model(cfg)?;
    let opts = cfg.strong_options();
    let compare = |m: &ExactModel, tau: f64| -> Result<Value> {
        let run = oracle::exact_survival(m, tau, cfg.n_meas)?;
        let pred = oracle::polaron_prediction_with(m, tau, &opts)?;
        let deficit_exact = 1.0 - run.survival[0];
        let deficit_pred = 1.0 - pred.survival;
        let abs = (deficit_exact - deficit_pred).abs();
        let rel = if deficit_pred == 0.0 {
            if abs == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            abs / deficit_pred.abs()
        };
        Ok(json!({
            "tau": tau,
            "s_exact": run.survival[0],
            "s_pred": pred.survival,
            "survival_sequence": run.survival,
            "gamma_exact": run.implied_rate,
            "gamma_pred": pred.gamma,
            "deficit_exact": deficit_exact,
            "deficit_pred": deficit_pred,
            "abs_discrepancy": abs,
            "rel_discrepancy": if rel.is_finite() { json!(rel) } else { json!("inf") },
            "boundary_weight": run.boundary_weight,
            "truncation_warning": run.truncation_warning,
            "passed": rel <= cfg.oracle_tol || abs <= PROBABILITY_FLOOR,
        }))
    };

    let points = cfg
        .check_taus
        .par_iter()
        .map(|&t| compare(&model, t))
        .collect::<Result<Vec<_>>>()?;
    let mut passed = points.iter().all(|p| p["passed"] == json!(true));

    let mut report = json!({
        "dimension": model.dim(),
        "beta": model.beta,
        "modes": model.modes.iter().map(|m| json!({"frequency": m.frequency, "coupling_sq": m.coupling_sq})).collect::<Vec<_>>(),
        "tolerance": cfg.oracle_tol,
        "initial_correlation_distance": oracle::initial_correlation_distance(&model)?,
        "points": points,
    });

    if cfg.check_halving && cfg.sys.delta > 0.0 {
        let mut half = model.clone();
        half.sys.delta *= 0.5;
        let halved = cfg
            .check_taus
            .par_iter()
            .map(|&t| compare(&half, t))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<Value> = report["points"]
            .as_array()
            .expect("points is an array")
            .iter()
            .zip(&halved)
            .map(|(full, h)| {
                let a = full["abs_discrepancy"].as_f64().unwrap_or(f64::NAN);
                let b = h["abs_discrepancy"].as_f64().unwrap_or(f64::NAN);
                let ratio = a / b;
                json!({
                    "tau": full["tau"],
                    "abs_discrepancy_half_delta": b,
                    "shrink_ratio": if ratio.is_finite() { json!(ratio) } else { json!("inf") },
                    "passed": !(ratio < 4.0) || a <= PROBABILITY_FLOOR,
                })
            })
            .collect();
        let ok = rows.iter().all(|r| r["passed"] == json!(true));
        passed &= ok;
        report["halving"] = json!({"passed": ok, "points": rows});
    }
    report["passed"] = json!(passed);
    Ok((report, passed, notes))
}

/// `oracle-check`: exact vs predicted survival; the report is written even on failure.
pub fn oracle_check(ctx: &Context, raw: &RawConfig) -> std::result::Result<(), Failure> {
    let start = Instant::now();
    let cfg = raw.resolve()?;
    let (report, passed, notes) = oracle_report(&cfg)?;
    let mut m = output::manifest(
        "oracle-check",
        raw.values(),
        start.elapsed().as_secs_f64(),
        &notes,
    );
    if let Value::Object(r) = report {
        m.extend(r);
    }
    write(
        ctx,
        &format!("{}_oracle_check.json", cfg.label),
        &output::pretty(&Value::Object(m)),
    )?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Tolerance(
            "exact and predicted survival disagree beyond tolerance".into(),
        ))
    }
}
