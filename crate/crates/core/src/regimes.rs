//! Zeno / anti-Zeno classification of rate curves.
//!
//! A point of a curve `Γ(τ)` is in the Zeno regime when `Γ` decreases as `τ`
//! decreases (positive slope), in the anti-Zeno regime when it increases
//! (negative slope), and stationary when the slope is within a tolerance of
//! zero. Transitions are the extrema of the curve.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which rate a curve holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Strong-coupling `Γ`.
    Strong,
    /// Strong-coupling `Γₙ` with the system evolution removed.
    StrongMod,
    /// Weak-coupling population decay.
    WeakPop,
    /// Weak-coupling filter-function rate.
    WeakFilter,
    /// Exact truncated-bath simulation.
    Oracle,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Strong,
        Variant::StrongMod,
        Variant::WeakPop,
        Variant::WeakFilter,
        Variant::Oracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Strong => "strong",
            Variant::StrongMod => "strong_mod",
            Variant::WeakPop => "weak_pop",
            Variant::WeakFilter => "weak_filter",
            Variant::Oracle => "oracle",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown variant '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Zeno,
    AntiZeno,
    Stationary,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Zeno => "zeno",
            Regime::AntiZeno => "anti_zeno",
            Regime::Stationary => "stationary",
        }
    }

    fn from_slope(slope: f64, tol: f64) -> Regime {
        if slope > tol {
            Regime::Zeno
        } else if slope < -tol {
            Regime::AntiZeno
        } else {
            Regime::Stationary
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sampled `Γ(τ)` with optional per-point regime labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateCurve {
    tau: Vec<f64>,
    gamma: Vec<f64>,
    variant: Variant,
    labels: Vec<Regime>,
}

impl RateCurve {
    pub fn new(tau: Vec<f64>, gamma: Vec<f64>, variant: Variant) -> Result<Self> {
        if tau.len() != gamma.len() {
            return Err(Error::invalid(format!(
                "tau has {} points but gamma has {}",
                tau.len(),
                gamma.len()
            )));
        }
        if tau.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            return Err(Error::invalid("tau values must be finite and > 0"));
        }
        if tau.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("tau grid must be strictly increasing"));
        }
        Ok(RateCurve {
            tau,
            gamma,
            variant,
            labels: Vec::new(),
        })
    }

    /// Evaluates `f` on `tau` in parallel.
    pub fn from_fn<F>(tau: Vec<f64>, variant: Variant, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        let gamma = tau
            .par_iter()
            .map(|&t| f(t))
            .collect::<Result<Vec<f64>>>()?;
        RateCurve::new(tau, gamma, variant)
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Empty until the curve has been through [`classify`].
    pub fn labels(&self) -> &[Regime] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    /// Finite-difference `dΓ/dτ` at every grid point: three-point formula
    /// for non-uniform spacing inside, one-sided at the ends.
    pub fn slopes(&self) -> Result<Vec<f64>> {
        let n = self.len();
        if n < 3 {
            return Err(Error::DegenerateGrid { points: n });
        }
        let (x, y) = (&self.tau, &self.gamma);
        let mut out = Vec::with_capacity(n);
        out.push((y[1] - y[0]) / (x[1] - x[0]));
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            out.push(
                (h0 * h0 * (y[i + 1] - y[i]) + h1 * h1 * (y[i] - y[i - 1])) / (h0 * h1 * (h0 + h1)),
            );
        }
        out.push((y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]));
        Ok(out)
    }

    /// `10⁻⁶ · max|Γ| / (τ_hi - τ_lo)`.
    pub fn default_slope_tol(&self) -> f64 {
        let span =
            self.tau.last().copied().unwrap_or(0.0) - self.tau.first().copied().unwrap_or(0.0);
        if span <= 0.0 {
            return 0.0;
        }
        let peak = self.gamma.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        1e-6 * peak / span
    }

    /// Index of the largest `Γ` (first one on ties).
    pub fn argmax(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, g) in self.gamma.iter().enumerate() {
            if best.is_none_or(|b| *g > self.gamma[b]) {
                best = Some(i);
            }
        }
        best
    }
}

/// Labels every point of `curve` from the sign of its slope.
///
/// `slope_tol = None` uses [`RateCurve::default_slope_tol`].
pub fn classify(curve: &RateCurve, slope_tol: Option<f64>) -> Result<RateCurve> {
    let slopes = curve.slopes()?;
    let tol = match slope_tol {
        Some(t) if t >= 0.0 => t,
        Some(t) => return Err(Error::invalid(format!("slope_tol must be >= 0, got {t}"))),
        None => curve.default_slope_tol(),
    };
    let mut out = curve.clone();
    out.labels = slopes
        .into_iter()
        .map(|s| Regime::from_slope(s, tol))
        .collect();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionKind {
    /// A maximum of `Γ(τ)`.
    ZenoToAntiZeno,
    /// A minimum of `Γ(τ)`.
    AntiZenoToZeno,
}

impl TransitionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TransitionKind::ZenoToAntiZeno => "zeno_to_anti_zeno",
            TransitionKind::AntiZenoToZeno => "anti_zeno_to_zeno",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transition {
    pub tau_star: f64,
    pub kind: TransitionKind,
    /// Half-width of the final bracket around `tau_star`.
    pub error_bound: f64,
}

/// Evenly spaced grid of `n` points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// Locates the extrema of `curve_fn` on `[lo, hi]`.
///
/// `curve_fn` is sampled on `grid_n` evenly spaced points; every sign change
/// of the slope between neighbouring grid intervals is then refined by
/// bisection on a central-difference slope until the bracket is no wider
/// than `refine_tol`.
pub fn find_transitions<F>(
    curve_fn: F,
    range: (f64, f64),
    grid_n: usize,
    refine_tol: f64,
) -> Result<Vec<Transition>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let (lo, hi) = range;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::invalid(format!(
            "need 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    if grid_n < 8 {
        return Err(Error::invalid(format!("grid_n must be >= 8, got {grid_n}")));
    }
    if !(refine_tol > 0.0) {
        return Err(Error::invalid(format!(
            "refine_tol must be > 0, got {refine_tol}"
        )));
    }
    let curve = RateCurve::from_fn(linspace(lo, hi, grid_n), Variant::Strong, &curve_fn)?;
    let tol = curve.default_slope_tol();
    let (tau, gamma) = (curve.tau(), curve.gamma());

    let mut brackets = Vec::new();
    let mut last: Option<(usize, f64)> = None;
    for i in 0..grid_n - 1 {
        let d = (gamma[i + 1] - gamma[i]) / (tau[i + 1] - tau[i]);
        if d.abs() <= tol {
            continue;
        }
        if let Some((j, prev)) = last {
            if prev.signum() != d.signum() {
                let kind = if prev > 0.0 {
                    TransitionKind::ZenoToAntiZeno
                } else {
                    TransitionKind::AntiZenoToZeno
                };
                brackets.push((tau[j], tau[i + 1], kind));
            }
        }
        last = Some((i, d));
    }

    let h = 0.25 * refine_tol;
    brackets
        .into_par_iter()
        .map(|(a, b, kind)| {
            let sign = if kind == TransitionKind::ZenoToAntiZeno {
                1.0
            } else {
                -1.0
            };
            let slope = |t: f64| -> Result<f64> {
                let lo_t = (t - h).max(lo);
                let hi_t = (t + h).min(hi);
                Ok((curve_fn(hi_t)? - curve_fn(lo_t)?) / (hi_t - lo_t))
            };
            let (mut a, mut b) = (a, b);
            while b - a > refine_tol {
                let mid = 0.5 * (a + b);
                if sign * slope(mid)? > 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            Ok(Transition {
                tau_star: 0.5 * (a + b),
                kind,
                error_bound: 0.5 * (b - a),
            })
        })
        .collect()
}

/// Survival after `n` measurements, `S(nτ) = exp(-Γnτ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Survival {
    pub probability: f64,
    /// `Γ` was negative (quadrature noise) and was taken as 0.
    pub clamped: bool,
}

pub fn survival_after_n(gamma: f64, tau: f64, n: u64) -> Survival {
    let clamped = gamma < 0.0;
    let g = if clamped { 0.0 } else { gamma };
    Survival {
        probability: (-g * tau * n as f64).exp(),
        clamped,
    }
}
