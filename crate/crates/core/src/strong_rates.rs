//! Strong-coupling decay rates, computed in the polaron frame to second order in `Δ`.
//!
//! For total spin `j` prepared in `|j⟩` and measured every `τ`:
//!
//! ```text
//! Γ(τ) = (Δ² j/τ) ∫₀^τ dt ∫₀^t dt' e^(-Φ_R(t')) cos[(ε + κ(1 - 2j)) t' - Φ_I(t')]
//! ```
//!
//! which for `j = ½` is the single two-level result with prefactor `Δ²/(2τ)`.
//! The integrand depends on `t'` only, so the triangle is collapsed to
//! `∫₀^τ (τ - t') (...) dt'`.
//!
//! When the free system evolution is undone before each measurement the rate
//! becomes `Γₙ = Γ + Γ_mod` with
//!
//! ```text
//! Γ_mod(τ) = (Δ²/τ)(2j) { sin²(ετ/2)/ε² - sin(ετ/2)/ε ∫₀^τ dt e^(-Φ_R(t)) cos[θ(t)] }
//! θ(t)     = κ(2j - 1)·x(t) + ε(t - τ/2) - Φ_I(t)
//! ```
//!
//! The default is `x(t) = 2τ - t` ([`ModPhase::TwoTauMinusT`]). Two
//! alternatives are selectable: `x(t) = τ - t`, and `x(t) = -t`, the phase
//! picked up between the `|j⟩` and `|j-1⟩` sectors under `-κ J_z²`. At `j = 1`
//! only `x(t) = -t` agrees with the exact truncated-bath simulation in
//! [`oracle`](crate::oracle); the default differs from it by tens of percent.
//! All three coincide at `j = ½`, where `κ(2j - 1) = 0`.

use serde::{Deserialize, Serialize};

use crate::bath::InfluencePhases;
use crate::error::{Error, Result};
use crate::quad::{self, QuadSpec};

/// `ε`, `Δ` and total spin `j = N_S/2` of the measured system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub epsilon: f64,
    pub delta: f64,
    pub j: f64,
}

impl SystemParams {
    pub fn new(epsilon: f64, delta: f64, j: f64) -> Result<Self> {
        let sys = SystemParams { epsilon, delta, j };
        sys.validate()?;
        Ok(sys)
    }

    pub fn spin_half(epsilon: f64, delta: f64) -> Result<Self> {
        SystemParams::new(epsilon, delta, 0.5)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() {
            return Err(Error::invalid(format!(
                "epsilon must be finite, got {}",
                self.epsilon
            )));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::invalid(format!(
                "delta must be >= 0, got {}",
                self.delta
            )));
        }
        let two_j = 2.0 * self.j;
        if !(two_j >= 1.0 && two_j.fract() == 0.0 && two_j <= 1e6) {
            return Err(Error::invalid(format!(
                "j must be a positive half-integer, got {}",
                self.j
            )));
        }
        Ok(())
    }

    /// Number of two-level systems, `N_S = 2j`.
    pub fn n_spins(&self) -> usize {
        (2.0 * self.j).round() as usize
    }

    pub fn is_spin_half(&self) -> bool {
        self.j == 0.5
    }
}

/// Time dependence `x(t)` multiplying `κ(2j - 1)` in the `Γ_mod` cosine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModPhase {
    /// `x(t) = -t`.
    MinusT,
    /// `x(t) = 2τ - t`.
    #[default]
    TwoTauMinusT,
    /// `x(t) = τ - t`.
    TauMinusT,
}

impl ModPhase {
    fn weight(self, tau: f64, t: f64) -> f64 {
        match self {
            ModPhase::MinusT => -t,
            ModPhase::TwoTauMinusT => 2.0 * tau - t,
            ModPhase::TauMinusT => tau - t,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModPhase::MinusT => "minus_t",
            ModPhase::TwoTauMinusT => "two_tau_minus_t",
            ModPhase::TauMinusT => "tau_minus_t",
        }
    }
}

impl std::str::FromStr for ModPhase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus_t" => Ok(ModPhase::MinusT),
            "two_tau_minus_t" => Ok(ModPhase::TwoTauMinusT),
            "tau_minus_t" => Ok(ModPhase::TauMinusT),
            other => Err(Error::invalid(format!(
                "unknown mod_phase '{other}' (expected minus_t, two_tau_minus_t or tau_minus_t)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongOptions {
    pub quad: QuadSpec,
    pub mod_phase: ModPhase,
}

impl Default for StrongOptions {
    fn default() -> Self {
        StrongOptions {
            quad: QuadSpec::RATES,
            mod_phase: ModPhase::default(),
        }
    }
}

/// A decay rate with the one-interval survival probability it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateResult {
    pub gamma: f64,
    /// `s(τ) = exp(-Γτ)`.
    pub survival: f64,
    /// Quadrature error estimate on `gamma`.
    pub error: f64,
    /// Set when `Δ²τ² > 0.1` or `Γτ > 0.1`: the second-order result is suspect.
    pub perturbative_breakdown: bool,
}

impl RateResult {
    pub(crate) fn new(gamma: f64, error: f64, delta: f64, tau: f64) -> Self {
        RateResult {
            gamma,
            survival: (-gamma * tau).exp(),
            error,
            perturbative_breakdown: delta * delta * tau * tau > 0.1 || gamma * tau > 0.1,
        }
    }

    /// First-order survival `1 - Γτ`.
    pub fn survival_linear(&self, tau: f64) -> f64 {
        1.0 - self.gamma * tau
    }
}

/// A real correction term with its quadrature error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correction {
    pub value: f64,
    pub error: f64,
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "tau must be finite and > 0, got {tau}"
        )))
    }
}

fn period_of(frequency: f64) -> Option<f64> {
    (frequency != 0.0 && frequency.is_finite()).then(|| std::f64::consts::TAU / frequency.abs())
}

/// `∫₀^τ (τ - t') e^(-Φ_R(t')) cos(frequency·t' - Φ_I(t')) dt'`.
fn decay_integral(
    ip: &InfluencePhases,
    frequency: f64,
    tau: f64,
    spec: &QuadSpec,
) -> Result<quad::Estimate> {
    quad::fallible(
        |t| {
            let (re, im) = ip.phases(t)?;
            Ok((-re).exp() * (frequency * t - im).cos())
        },
        |g| quad::reduce_triangle_oscillatory(g, tau, period_of(frequency), spec),
    )
}

/// Strong-coupling `Γ(τ)` for a single two-level system (`j = ½`).
pub fn gamma_strong_single(
    epsilon: f64,
    delta: f64,
    ip: &InfluencePhases,
    tau: f64,
    opts: &StrongOptions,
) -> Result<RateResult> {
    SystemParams::spin_half(epsilon, delta)?;
    check_tau(tau)?;
    let integral = decay_integral(ip, epsilon, tau, &opts.quad)?;
    let prefactor = delta * delta * 0.5 / tau;
    Ok(RateResult::new(
        prefactor * integral.value,
        prefactor * integral.error,
        delta,
        tau,
    ))
}

/// Strong-coupling `Γ(τ)` for total spin `j` with default options.
pub fn gamma_strong(sys: &SystemParams, ip: &InfluencePhases, tau: f64) -> Result<RateResult> {
    gamma_strong_with(sys, ip, tau, &StrongOptions::default())
}

pub fn gamma_strong_with(
    sys: &SystemParams,
    ip: &InfluencePhases,
    tau: f64,
    opts: &StrongOptions,
) -> Result<RateResult> {
    sys.validate()?;
    check_tau(tau)?;
    let kappa = ip.kappa()?;
    let frequency = sys.epsilon + kappa * (1.0 - 2.0 * sys.j);
    let integral = decay_integral(ip, frequency, tau, &opts.quad)?;
    let prefactor = sys.delta * sys.delta * sys.j / tau;
    Ok(RateResult::new(
        prefactor * integral.value,
        prefactor * integral.error,
        sys.delta,
        tau,
    ))
}

fn mod_bracket(
    epsilon: f64,
    kappa_shift: f64,
    phase: ModPhase,
    ip: &InfluencePhases,
    tau: f64,
    spec: &QuadSpec,
) -> Result<Correction> {
    if epsilon == 0.0 {
        return Err(Error::invalid(
            "the system-evolution correction needs epsilon != 0",
        ));
    }
    let integral = quad::fallible(
        |t| {
            let (re, im) = ip.phases(t)?;
            let theta = kappa_shift * phase.weight(tau, t) + epsilon * (t - 0.5 * tau) - im;
            Ok((-re).exp() * theta.cos())
        },
        |g| quad::integrate_oscillatory(g, 0.0, tau, period_of(epsilon - kappa_shift), spec),
    )?;
    let s = (0.5 * epsilon * tau).sin();
    Ok(Correction {
        value: s * s / (epsilon * epsilon) - s / epsilon * integral.value,
        error: (s / epsilon).abs() * integral.error,
    })
}

/// `Γ_mod(τ)` for a single two-level system.
pub fn gamma_mod_strong_single(
    epsilon: f64,
    delta: f64,
    ip: &InfluencePhases,
    tau: f64,
    opts: &StrongOptions,
) -> Result<Correction> {
    SystemParams::spin_half(epsilon, delta)?;
    check_tau(tau)?;
    let bracket = mod_bracket(epsilon, 0.0, opts.mod_phase, ip, tau, &opts.quad)?;
    let prefactor = delta * delta / tau;
    Ok(Correction {
        value: prefactor * bracket.value,
        error: prefactor * bracket.error,
    })
}

/// `Γ_mod(τ)` for total spin `j` with default options.
pub fn gamma_mod_strong(sys: &SystemParams, ip: &InfluencePhases, tau: f64) -> Result<Correction> {
    gamma_mod_strong_with(sys, ip, tau, &StrongOptions::default())
}

pub fn gamma_mod_strong_with(
    sys: &SystemParams,
    ip: &InfluencePhases,
    tau: f64,
    opts: &StrongOptions,
) -> Result<Correction> {
    sys.validate()?;
    check_tau(tau)?;
    let kappa = ip.kappa()?;
    let bracket = mod_bracket(
        sys.epsilon,
        kappa * (2.0 * sys.j - 1.0),
        opts.mod_phase,
        ip,
        tau,
        &opts.quad,
    )?;
    let prefactor = sys.delta * sys.delta / tau * (2.0 * sys.j);
    Ok(Correction {
        value: prefactor * bracket.value,
        error: prefactor * bracket.error,
    })
}

/// `Γₙ(τ) = Γ(τ) + Γ_mod(τ)` with default options.
pub fn gamma_n_strong(sys: &SystemParams, ip: &InfluencePhases, tau: f64) -> Result<RateResult> {
    gamma_n_strong_with(sys, ip, tau, &StrongOptions::default())
}

pub fn gamma_n_strong_with(
    sys: &SystemParams,
    ip: &InfluencePhases,
    tau: f64,
    opts: &StrongOptions,
) -> Result<RateResult> {
    let base = gamma_strong_with(sys, ip, tau, opts)?;
    let correction = gamma_mod_strong_with(sys, ip, tau, opts)?;
    Ok(RateResult::new(
        base.gamma + correction.value,
        base.error + correction.error,
        sys.delta,
        tau,
    ))
}

/// Single-spin `Γₙ(τ)`.
pub fn gamma_n_strong_single(
    epsilon: f64,
    delta: f64,
    ip: &InfluencePhases,
    tau: f64,
    opts: &StrongOptions,
) -> Result<RateResult> {
    let base = gamma_strong_single(epsilon, delta, ip, tau, opts)?;
    let correction = gamma_mod_strong_single(epsilon, delta, ip, tau, opts)?;
    Ok(RateResult::new(
        base.gamma + correction.value,
        base.error + correction.error,
        delta,
        tau,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{SpectralDensity, Temperature};

    fn ohmic(g: f64) -> InfluencePhases {
        InfluencePhases::new(
            SpectralDensity::ohmic(g, 1.0, 10.0).unwrap(),
            Temperature::ZERO,
        )
        .unwrap()
    }

    fn decoupled_gamma(eps: f64, delta: f64, tau: f64) -> f64 {
        let s = (0.5 * eps * tau).sin();
        delta * delta * s * s / (tau * eps * eps)
    }

    #[test]
    fn system_params_validation() {
        assert!(SystemParams::new(1.0, 0.05, 0.5).is_ok());
        assert!(SystemParams::new(1.0, 0.05, 2.0).is_ok());
        assert!(SystemParams::new(1.0, 0.05, 0.75).is_err());
        assert!(SystemParams::new(1.0, 0.05, 0.0).is_err());
        assert!(SystemParams::new(1.0, -0.05, 0.5).is_err());
        assert_eq!(SystemParams::new(1.0, 0.05, 1.5).unwrap().n_spins(), 3);
    }

    #[test]
    fn decoupled_gamma_matches_closed_form() {
        let sys = SystemParams::spin_half(1.0, 0.05).unwrap();
        let r = gamma_strong(&sys, &ohmic(0.0), 1.0).unwrap();
        let expected = decoupled_gamma(1.0, 0.05, 1.0);
        assert!((r.gamma - expected).abs() / expected < 1e-9);
        assert!((r.gamma - 5.746e-4).abs() < 1e-7);
        assert!((r.survival - (-r.gamma).exp()).abs() < 1e-16);
        assert!(!r.perturbative_breakdown);
    }

    #[test]
    fn decoupled_correction_cancels() {
        let sys = SystemParams::spin_half(1.0, 0.05).unwrap();
        let m = gamma_mod_strong(&sys, &ohmic(0.0), 1.0).unwrap();
        assert!((m.value + 5.746e-4).abs() < 1e-7);
        let n = gamma_n_strong(&sys, &ohmic(0.0), 1.0).unwrap();
        assert!(n.gamma.abs() <= 1e-6 * 0.05 * 0.05);
    }

    #[test]
    fn zero_delta_gives_zero_correction() {
        let sys = SystemParams::spin_half(1.0, 0.0).unwrap();
        assert_eq!(gamma_mod_strong(&sys, &ohmic(1.0), 1.0).unwrap().value, 0.0);
    }

    #[test]
    fn epsilon_zero_rejected_for_correction() {
        let sys = SystemParams::spin_half(0.0, 0.05).unwrap();
        assert!(gamma_mod_strong(&sys, &ohmic(1.0), 1.0).is_err());
        assert!(gamma_strong(&sys, &ohmic(1.0), 1.0).is_ok());
    }

    #[test]
    fn stronger_coupling_lowers_gamma() {
        let sys = SystemParams::spin_half(1.0, 0.05).unwrap();
        let weak = gamma_strong(&sys, &ohmic(1.0), 2.0).unwrap().gamma;
        let strong = gamma_strong(&sys, &ohmic(2.5), 2.0).unwrap().gamma;
        assert!(weak > strong);
    }

    #[test]
    fn spin_half_paths_agree() {
        let opts = StrongOptions::default();
        let sys = SystemParams::spin_half(1.0, 0.05).unwrap();
        for g in [0.0, 1.0, 2.5] {
            let ip = ohmic(g);
            let a = gamma_strong_with(&sys, &ip, 1.0, &opts).unwrap().gamma;
            let b = gamma_strong_single(1.0, 0.05, &ip, 1.0, &opts)
                .unwrap()
                .gamma;
            assert_eq!(a, b);
            let a = gamma_mod_strong_with(&sys, &ip, 1.0, &opts).unwrap().value;
            let b = gamma_mod_strong_single(1.0, 0.05, &ip, 1.0, &opts)
                .unwrap()
                .value;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn mod_phases_coincide_at_spin_half() {
        let sys = SystemParams::spin_half(1.0, 0.05).unwrap();
        let ip = ohmic(1.0);
        let values: Vec<f64> = [
            ModPhase::MinusT,
            ModPhase::TwoTauMinusT,
            ModPhase::TauMinusT,
        ]
        .into_iter()
        .map(|mod_phase| {
            let opts = StrongOptions {
                mod_phase,
                ..Default::default()
            };
            gamma_mod_strong_with(&sys, &ip, 1.3, &opts).unwrap().value
        })
        .collect();
        assert_eq!(values[0], values[1]);
        assert_eq!(values[0], values[2]);
    }

    #[test]
    fn breakdown_flag() {
        let sys = SystemParams::spin_half(1.0, 0.5).unwrap();
        let r = gamma_strong(&sys, &ohmic(0.0), 1.0).unwrap();
        assert!(r.perturbative_breakdown);
    }

    #[test]
    fn mod_phase_parsing() {
        for p in [
            ModPhase::MinusT,
            ModPhase::TwoTauMinusT,
            ModPhase::TauMinusT,
        ] {
            assert_eq!(p.name().parse::<ModPhase>().unwrap(), p);
        }
        assert!("bogus".parse::<ModPhase>().is_err());
    }
}
