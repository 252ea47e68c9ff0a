//! Bosonic environments and the polaron-frame bath functions.
//!
//! A bath is either an Ohmic-family continuum
//! `J(ω) = G ω^s ω_c^(1-s) e^(-ω/ω_c)` or an explicit list of modes
//! `(ω_k, |g_k|²)`. From it we evaluate the influence phases
//!
//! ```text
//! Φ_R(t) = ∫ dω J(ω) (1 - cos ωt)/ω² coth(βω/2)
//! Φ_I(t) = ∫ dω J(ω) sin(ωt)/ω²
//! ```
//!
//! the bath correlation function `C₁₂(t) = e^(-Φ_R(t)) e^(-iΦ_I(t))` and the
//! indirect spin-spin coupling `κ`.
//!
//! # Discrete-mode convention
//!
//! For a mode list the phases are sums with a prefactor of **4**:
//!
//! ```text
//! Φ_R(t) = Σ_k 4|g_k|² (1 - cos ω_k t)/ω_k² coth(βω_k/2)
//! Φ_I(t) = Σ_k 4|g_k|² sin(ω_k t)/ω_k²
//! κ      = Σ_k 4|g_k|²/ω_k
//! ```
//!
//! This is the exact result for the lab-frame coupling
//! `2 J_z Σ_k (g_k* b_k + g_k b_k†)` (equivalently `σ_z Σ_k (...)` for one
//! spin), whose polaron displacement is `2 g_k/ω_k`. The continuum phases
//! carry no factor 4: `J(ω)` there plays the role of `4 Σ_k |g_k|² δ(ω - ω_k)`.
//! The continuum `κ = 4 ∫ J(ω)/ω dω`, on the other hand, uses
//! `|g_k|² → J(ω) dω`, which is also what [`discretize_bath`] produces.
//! A discretised Ohmic bath therefore reproduces the continuum `κ` but has
//! four times the continuum phases.
//!
//! [`discretize_bath`]: crate::oracle::discretize_bath

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, QuadSpec};

/// One bath oscillator: frequency `ω_k` and squared coupling `|g_k|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub frequency: f64,
    pub coupling_sq: f64,
}

impl Mode {
    pub fn new(frequency: f64, coupling_sq: f64) -> Self {
        Mode {
            frequency,
            coupling_sq,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SpectralDensity {
    /// `J(ω) = G ω^s ω_c^(1-s) e^(-ω/ω_c)`.
    OhmicFamily {
        coupling: f64,
        ohmicity: f64,
        cutoff: f64,
    },
    DiscreteModes(Vec<Mode>),
}

impl SpectralDensity {
    pub fn ohmic(coupling: f64, ohmicity: f64, cutoff: f64) -> Result<Self> {
        let sd = SpectralDensity::OhmicFamily {
            coupling,
            ohmicity,
            cutoff,
        };
        sd.validate()?;
        Ok(sd)
    }

    pub fn discrete(modes: Vec<Mode>) -> Result<Self> {
        let sd = SpectralDensity::DiscreteModes(modes);
        sd.validate()?;
        Ok(sd)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SpectralDensity::OhmicFamily {
                coupling,
                ohmicity,
                cutoff,
            } => {
                if !(coupling >= 0.0 && coupling.is_finite()) {
                    return Err(Error::invalid(format!(
                        "coupling G must be >= 0, got {coupling}"
                    )));
                }
                if !(ohmicity > 0.0 && ohmicity.is_finite()) {
                    return Err(Error::invalid(format!(
                        "ohmicity s must be > 0, got {ohmicity}"
                    )));
                }
                if !(cutoff > 0.0 && cutoff.is_finite()) {
                    return Err(Error::invalid(format!("cutoff must be > 0, got {cutoff}")));
                }
            }
            SpectralDensity::DiscreteModes(ref modes) => {
                for m in modes {
                    if !(m.frequency > 0.0 && m.frequency.is_finite()) {
                        return Err(Error::invalid(format!(
                            "mode frequencies must be > 0, got {}",
                            m.frequency
                        )));
                    }
                    if !(m.coupling_sq >= 0.0 && m.coupling_sq.is_finite()) {
                        return Err(Error::invalid(format!(
                            "squared couplings must be >= 0, got {}",
                            m.coupling_sq
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Pointwise `J(ω)`. Discrete baths have none and return
    /// [`Error::DiscretePointwiseEval`].
    pub fn density(&self, omega: f64) -> Result<f64> {
        if !(omega >= 0.0) {
            return Err(Error::invalid(format!("omega must be >= 0, got {omega}")));
        }
        match *self {
            SpectralDensity::OhmicFamily {
                coupling,
                ohmicity,
                cutoff,
            } => Ok(coupling * ohmic_shape(ohmicity, cutoff, omega)),
            SpectralDensity::DiscreteModes(_) => Err(Error::DiscretePointwiseEval),
        }
    }

    /// The same bath with every coupling multiplied by `factor`
    /// (`G ↦ factor·G`, `|g_k|² ↦ factor·|g_k|²`).
    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            SpectralDensity::OhmicFamily {
                coupling,
                ohmicity,
                cutoff,
            } => SpectralDensity::OhmicFamily {
                coupling: coupling * factor,
                ohmicity: *ohmicity,
                cutoff: *cutoff,
            },
            SpectralDensity::DiscreteModes(modes) => SpectralDensity::DiscreteModes(
                modes
                    .iter()
                    .map(|m| Mode::new(m.frequency, m.coupling_sq * factor))
                    .collect(),
            ),
        }
    }

    pub fn is_decoupled(&self) -> bool {
        match self {
            SpectralDensity::OhmicFamily { coupling, .. } => *coupling == 0.0,
            SpectralDensity::DiscreteModes(modes) => modes.iter().all(|m| m.coupling_sq == 0.0),
        }
    }
}

/// `ω^s ω_c^(1-s) e^(-ω/ω_c)`, i.e. the Ohmic-family density at `G = 1`.
pub(crate) fn ohmic_shape(ohmicity: f64, cutoff: f64, omega: f64) -> f64 {
    if omega == 0.0 {
        return 0.0;
    }
    let x = omega / cutoff;
    if ohmicity == 1.0 {
        omega * (-x).exp()
    } else {
        cutoff * x.powf(ohmicity) * (-x).exp()
    }
}

/// Pointwise spectral density; see [`SpectralDensity::density`].
pub fn eval_j(sd: &SpectralDensity, omega: f64) -> Result<f64> {
    sd.density(omega)
}

/// Inverse temperature. `β = ∞` is zero temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Temperature {
    beta: f64,
}

impl Temperature {
    pub const ZERO: Temperature = Temperature {
        beta: f64::INFINITY,
    };

    pub fn from_beta(beta: f64) -> Result<Self> {
        if beta > 0.0 {
            Ok(Temperature { beta })
        } else {
            Err(Error::invalid(format!("beta must be > 0, got {beta}")))
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_zero(&self) -> bool {
        self.beta.is_infinite()
    }

    /// `coth(βω/2)`, identically 1 at zero temperature.
    pub fn coth_half(&self, omega: f64) -> f64 {
        if self.is_zero() {
            return 1.0;
        }
        let x = 0.5 * self.beta * omega;
        if x < 1e-4 {
            1.0 / x + x / 3.0
        } else if x > 20.0 {
            1.0 + 2.0 * (-2.0 * x).exp()
        } else {
            1.0 / x.tanh()
        }
    }
}

/// `(1 - cos ωt)/ω²`, stable down to `ω = 0`.
#[inline]
fn one_minus_cos_over_sq(omega: f64, t: f64) -> f64 {
    let x = omega * t;
    if x.abs() < 1e-3 {
        0.5 * t * t * (1.0 - x * x / 12.0)
    } else {
        let s = (0.5 * x).sin();
        2.0 * s * s / (omega * omega)
    }
}

/// `sin(ωt)/ω`, stable down to `ω = 0`.
#[inline]
fn sin_over(omega: f64, t: f64) -> f64 {
    let x = omega * t;
    if x.abs() < 1e-3 {
        t * (1.0 - x * x / 6.0)
    } else {
        x.sin() / omega
    }
}

/// Evaluator for `Φ_R`, `Φ_I`, `κ` and `C₁₂` of one bath at one temperature.
///
/// For the Ohmic `s = 1` bath the closed forms `Φ_R = (G/2) ln(1 + ω_c²t²)`
/// (zero temperature only) and `Φ_I = G arctan(ω_c t)` are used unless
/// [`without_fast_paths`](Self::without_fast_paths) is set.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluencePhases {
    spectral: SpectralDensity,
    temperature: Temperature,
    quad: QuadSpec,
    fast_paths: bool,
}

impl InfluencePhases {
    pub fn new(spectral: SpectralDensity, temperature: Temperature) -> Result<Self> {
        spectral.validate()?;
        Ok(InfluencePhases {
            spectral,
            temperature,
            quad: QuadSpec::PHASES,
            fast_paths: true,
        })
    }

    pub fn with_quad(mut self, quad: QuadSpec) -> Self {
        self.quad = quad;
        self
    }

    /// Forces quadrature even where a closed form exists.
    pub fn without_fast_paths(mut self) -> Self {
        self.fast_paths = false;
        self
    }

    pub fn spectral(&self) -> &SpectralDensity {
        &self.spectral
    }

    pub fn temperature(&self) -> Temperature {
        self.temperature
    }

    pub fn quad(&self) -> &QuadSpec {
        &self.quad
    }

    fn check_time(t: f64) -> Result<()> {
        if t >= 0.0 && t.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "time must be finite and >= 0, got {t}"
            )))
        }
    }

    pub fn phi_r(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        let temp = self.temperature;
        match self.spectral {
            SpectralDensity::OhmicFamily {
                coupling,
                ohmicity,
                cutoff,
            } => {
                if coupling == 0.0 {
                    return Ok(0.0);
                }
                if self.fast_paths && ohmicity == 1.0 && temp.is_zero() {
                    let x = cutoff * t;
                    return Ok(0.5 * coupling * (x * x).ln_1p());
                }
                let integral = quad::integrate_semi_infinite(
                    |w| {
                        ohmic_shape(ohmicity, cutoff, w)
                            * temp.coth_half(w)
                            * one_minus_cos_over_sq(w, t)
                    },
                    &self.quad,
                    cutoff,
                    Some(std::f64::consts::TAU / t),
                )?;
                Ok(coupling * integral.value)
            }
            SpectralDensity::DiscreteModes(ref modes) => Ok(modes
                .iter()
                .map(|m| {
                    4.0 * m.coupling_sq
                        * one_minus_cos_over_sq(m.frequency, t)
                        * temp.coth_half(m.frequency)
                })
                .sum()),
        }
    }

    pub fn phi_i(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        match self.spectral {
            SpectralDensity::OhmicFamily {
                coupling,
                ohmicity,
                cutoff,
            } => {
                if coupling == 0.0 {
                    return Ok(0.0);
                }
                if self.fast_paths && ohmicity == 1.0 {
                    return Ok(coupling * (cutoff * t).atan());
                }
                let integral = quad::integrate_semi_infinite(
                    |w| {
                        if w == 0.0 {
                            0.0
                        } else {
                            ohmic_shape(ohmicity, cutoff, w) / w * sin_over(w, t)
                        }
                    },
                    &self.quad,
                    cutoff,
                    Some(std::f64::consts::TAU / t),
                )?;
                Ok(coupling * integral.value)
            }
            SpectralDensity::DiscreteModes(ref modes) => Ok(modes
                .iter()
                .map(|m| 4.0 * m.coupling_sq * sin_over(m.frequency, t) / m.frequency)
                .sum()),
        }
    }

    /// `(Φ_R(t), Φ_I(t))`.
    pub fn phases(&self, t: f64) -> Result<(f64, f64)> {
        Ok((self.phi_r(t)?, self.phi_i(t)?))
    }

    /// `C₁₂(t) = e^(-Φ_R(t)) e^(-iΦ_I(t))`.
    pub fn correlation_c12(&self, t: f64) -> Result<Complex64> {
        let (re, im) = self.phases(t)?;
        Ok(Complex64::from_polar((-re).exp(), -im))
    }

    pub fn kappa(&self) -> Result<f64> {
        if self.fast_paths {
            kappa(&self.spectral)
        } else {
            kappa_with(&self.spectral, &self.quad, false)
        }
    }
}

/// Indirect-interaction constant `κ = 4 Σ_k |g_k|²/ω_k`, or
/// `4 ∫ J(ω)/ω dω` for a continuum (`4 G ω_c` when `s = 1`).
pub fn kappa(sd: &SpectralDensity) -> Result<f64> {
    kappa_with(sd, &QuadSpec::PHASES, true)
}

fn kappa_with(sd: &SpectralDensity, spec: &QuadSpec, fast_paths: bool) -> Result<f64> {
    match *sd {
        SpectralDensity::OhmicFamily {
            coupling,
            ohmicity,
            cutoff,
        } => {
            if !(ohmicity > 0.0) {
                return Err(Error::DivergentKappa { s: ohmicity });
            }
            sd.validate()?;
            if coupling == 0.0 {
                return Ok(0.0);
            }
            if fast_paths && ohmicity == 1.0 {
                return Ok(4.0 * coupling * cutoff);
            }
            let integral = quad::integrate_semi_infinite(
                |w| {
                    if w == 0.0 {
                        0.0
                    } else {
                        ohmic_shape(ohmicity, cutoff, w) / w
                    }
                },
                spec,
                cutoff,
                None,
            )?;
            Ok(4.0 * coupling * integral.value)
        }
        SpectralDensity::DiscreteModes(ref modes) => {
            sd.validate()?;
            Ok(modes
                .iter()
                .map(|m| 4.0 * m.coupling_sq / m.frequency)
                .sum())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ohmic(g: f64, wc: f64) -> SpectralDensity {
        SpectralDensity::ohmic(g, 1.0, wc).unwrap()
    }

    #[test]
    fn density_examples() {
        assert_eq!(eval_j(&ohmic(1.0, 10.0), 0.0).unwrap(), 0.0);
        assert!((eval_j(&ohmic(1.0, 10.0), 10.0).unwrap() - 10.0 * (-1f64).exp()).abs() < 1e-14);
        assert!(
            (eval_j(&ohmic(0.05, 10.0), 1.0).unwrap() - 0.045_241_870_901_797_98).abs() < 1e-15
        );
        let d = SpectralDensity::discrete(vec![Mode::new(1.0, 0.25)]).unwrap();
        assert_eq!(eval_j(&d, 1.0), Err(Error::DiscretePointwiseEval));
        assert!(eval_j(&ohmic(1.0, 10.0), -1.0).is_err());
    }

    #[test]
    fn validation() {
        assert!(SpectralDensity::ohmic(-1.0, 1.0, 10.0).is_err());
        assert!(SpectralDensity::ohmic(1.0, 0.0, 10.0).is_err());
        assert!(SpectralDensity::ohmic(1.0, 1.0, 0.0).is_err());
        assert!(SpectralDensity::discrete(vec![Mode::new(0.0, 1.0)]).is_err());
        assert!(SpectralDensity::discrete(vec![Mode::new(1.0, -1.0)]).is_err());
        assert!(SpectralDensity::discrete(vec![]).is_ok());
        assert!(Temperature::from_beta(0.0).is_err());
        assert!(Temperature::from_beta(f64::NAN).is_err());
        assert!(Temperature::from_beta(f64::INFINITY).unwrap().is_zero());
    }

    #[test]
    fn phi_r_examples() {
        let ip = InfluencePhases::new(ohmic(1.0, 10.0), Temperature::ZERO).unwrap();
        assert_eq!(ip.phi_r(0.0).unwrap(), 0.0);
        assert!((ip.phi_r(1.0).unwrap() - 0.5 * 101f64.ln()).abs() < 1e-14);
        assert!((ip.phi_r(1.0).unwrap() - 2.307_56).abs() < 1e-5);

        let hot =
            InfluencePhases::new(ohmic(1.0, 10.0), Temperature::from_beta(1e6).unwrap()).unwrap();
        assert!((hot.phi_r(1.0).unwrap() - 0.5 * 101f64.ln()).abs() < 1e-3);
        assert!(ip.phi_r(-1.0).is_err());
    }

    #[test]
    fn phi_i_examples() {
        let ip = InfluencePhases::new(ohmic(1.0, 10.0), Temperature::ZERO).unwrap();
        assert_eq!(ip.phi_i(0.0).unwrap(), 0.0);
        assert!((ip.phi_i(1.0).unwrap() - 1.471_13).abs() < 1e-5);
        assert!((ip.phi_i(1e6).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-4);
    }

    #[test]
    fn kappa_examples() {
        let d = SpectralDensity::discrete(vec![Mode::new(1.0, 0.25)]).unwrap();
        assert_eq!(kappa(&d).unwrap(), 1.0);
        assert_eq!(kappa(&ohmic(1.0, 10.0)).unwrap(), 40.0);
        for s in [0.5, 1.0, 2.0] {
            let z = SpectralDensity::ohmic(0.0, s, 3.0).unwrap();
            assert_eq!(kappa(&z).unwrap(), 0.0);
        }
        let bad = SpectralDensity::OhmicFamily {
            coupling: 1.0,
            ohmicity: -0.5,
            cutoff: 1.0,
        };
        assert_eq!(kappa(&bad), Err(Error::DivergentKappa { s: -0.5 }));
    }

    #[test]
    fn correlation_examples() {
        let ip = InfluencePhases::new(ohmic(1.0, 10.0), Temperature::ZERO).unwrap();
        assert_eq!(ip.correlation_c12(0.0).unwrap(), Complex64::new(1.0, 0.0));
        let c = ip.correlation_c12(1.0).unwrap();
        let (r, i) = (0.5 * 101f64.ln(), 10f64.atan());
        assert!((c.re - (-r).exp() * i.cos()).abs() < 1e-15);
        assert!((c.im + (-r).exp() * i.sin()).abs() < 1e-15);
        assert!((c.norm() - 0.099_50).abs() < 1e-5);

        let free = InfluencePhases::new(ohmic(0.0, 10.0), Temperature::ZERO).unwrap();
        assert_eq!(free.correlation_c12(3.7).unwrap(), Complex64::new(1.0, 0.0));
        let empty = InfluencePhases::new(SpectralDensity::DiscreteModes(vec![]), Temperature::ZERO)
            .unwrap();
        assert_eq!(
            empty.correlation_c12(3.7).unwrap(),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn coth_half_limits() {
        let t = Temperature::from_beta(2.0).unwrap();
        assert!((t.coth_half(1e-9) - 1e9).abs() / 1e9 < 1e-12);
        assert!((t.coth_half(1.0) - 1.0 / 1f64.tanh()).abs() < 1e-15);
        assert!((t.coth_half(100.0) - 1.0).abs() < 1e-15);
        assert_eq!(Temperature::ZERO.coth_half(1e-300), 1.0);
    }
}
