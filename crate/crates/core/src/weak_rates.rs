//! Weak-coupling decay rates.
//!
//! Two models are provided. The population-decay rate
//!
//! ```text
//! Γ(τ) = τ ∫₀^∞ dω J(ω) sinc²[(ε - ω)τ/2]
//! ```
//!
//! and the spin-boson rate `Γₙ(τ) = N_S ∫₀^∞ dω J(ω) Q(ω, τ)` with the filter
//! function
//!
//! ```text
//! Q(ω, τ) = (2/τ) { coth(βω/2) D₁(ω, τ) + D₂(ω, τ) }
//! D₁ = ∫₀^τ dt ∫₀^t dt' cos(ωt') [a_x(t - t') a_x(t) + a_y(t - t') a_y(t)]
//! D₂ = ∫₀^τ dt ∫₀^t dt' sin(ωt') [a_x(t) a_y(t - t') - a_x(t - t') a_y(t)]
//! a_x(t) = (2εΔ/Ω²) sin²(Ωt/2),   a_y(t) = (Δ/Ω) sin(Ωt),   Ω² = ε² + Δ²
//! ```
//!
//! [`gamma_weak_filter`] does not integrate `J·Q` over `ω` directly. The
//! `ω` integral is taken first, giving the bath kernels
//!
//! ```text
//! K₁(t') = ∫ dω J(ω) coth(βω/2) cos(ωt'),   K₂(t') = ∫ dω J(ω) sin(ωt')
//! ```
//!
//! and the triangle is then traversed with `t'` outermost, so that
//! `Γₙ = N_S (2/τ) ∫₀^τ dt' [h₁(t') K₁(t') + h₂(t') K₂(t')]` where `h₁`, `h₂`
//! are the `t`-integrals of the bracketed products over `[t', τ]`. For the
//! zero-temperature Ohmic bath `K₁ + iK₂ = G/(1/ω_c - it)²` in closed form.
//! [`gamma_weak_filter_overlap`] evaluates the overlap as written and is kept
//! as a cross-check.
//!
//! Both rates are linear in `J`. The coupling strength `G` is factored out of
//! every integral, so `Γ(cG) = cΓ(G)` holds to rounding and the shape of a
//! rate curve does not depend on `G` at all.
//!
//! Only Ohmic-family baths are accepted; mode lists are rejected with
//! [`Error::DiscretePointwiseEval`].

use num_complex::Complex64;

use crate::bath::{ohmic_shape, SpectralDensity, Temperature};
use crate::error::{Error, Result};
use crate::quad::{self, Estimate, QuadSpec};
use crate::strong_rates::{RateResult, SystemParams};

/// Filter-function evaluator for one two-level system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterEval {
    sys: SystemParams,
    omega_rabi: f64,
    quad: QuadSpec,
}

impl FilterEval {
    pub fn new(sys: SystemParams) -> Result<Self> {
        FilterEval::with_quad(sys, QuadSpec::RATES)
    }

    pub fn with_quad(sys: SystemParams, quad: QuadSpec) -> Result<Self> {
        sys.validate()?;
        quad.validate()?;
        Ok(FilterEval {
            sys,
            omega_rabi: (sys.epsilon * sys.epsilon + sys.delta * sys.delta).sqrt(),
            quad,
        })
    }

    pub fn sys(&self) -> &SystemParams {
        &self.sys
    }

    /// `Ω = √(ε² + Δ²)`.
    pub fn omega_rabi(&self) -> f64 {
        self.omega_rabi
    }

    pub fn quad(&self) -> &QuadSpec {
        &self.quad
    }

    pub fn a_x(&self, t: f64) -> f64 {
        let om = self.omega_rabi;
        if om == 0.0 {
            return 0.0;
        }
        let s = (0.5 * om * t).sin();
        2.0 * self.sys.epsilon * self.sys.delta / (om * om) * s * s
    }

    pub fn a_y(&self, t: f64) -> f64 {
        let om = self.omega_rabi;
        if om == 0.0 {
            return self.sys.delta * t;
        }
        self.sys.delta / om * (om * t).sin()
    }

    fn d1_bracket(&self, t: f64, tp: f64) -> f64 {
        self.a_x(t - tp) * self.a_x(t) + self.a_y(t - tp) * self.a_y(t)
    }

    fn d2_bracket(&self, t: f64, tp: f64) -> f64 {
        self.a_x(t) * self.a_y(t - tp) - self.a_x(t - tp) * self.a_y(t)
    }

    /// Tolerances for the triangle integrals: the absolute floor is `rel_tol`
    /// times a bound on `∫∫ |bracket|`, so `D₁`, `D₂` are not resolved far
    /// below the size they have at small `ω`.
    fn triangle_spec(&self, tau: f64) -> QuadSpec {
        let om = self.omega_rabi;
        let amp = if om == 0.0 {
            0.0
        } else {
            self.sys.delta / om * (1.0 + 2.0 * self.sys.epsilon.abs() / om)
        };
        let bound = amp * amp * tau * tau;
        self.quad
            .with_abs_tol(self.quad.abs_tol.max(self.quad.rel_tol * bound))
    }

    /// `D₁(ω, τ)` over the triangle.
    pub fn d1(&self, omega: f64, tau: f64) -> Result<Estimate> {
        check_tau(tau)?;
        quad::integrate_triangle(
            |t, tp| (omega * tp).cos() * self.d1_bracket(t, tp),
            tau,
            &self.triangle_spec(tau),
        )
    }

    /// `D₂(ω, τ)` over the triangle.
    pub fn d2(&self, omega: f64, tau: f64) -> Result<Estimate> {
        check_tau(tau)?;
        quad::integrate_triangle(
            |t, tp| (omega * tp).sin() * self.d2_bracket(t, tp),
            tau,
            &self.triangle_spec(tau),
        )
    }

    /// `(h₁(t'), h₂(t'))`: the `D₁` and `D₂` brackets integrated over `t ∈ [t', τ]`.
    pub fn lag_weights(&self, tp: f64, tau: f64) -> Result<(Estimate, Estimate)> {
        let spec = self.quad.with_rel_tol((0.1 * self.quad.rel_tol).max(1e-13));
        let h1 = quad::integrate(|t| self.d1_bracket(t, tp), tp, tau, &spec)?;
        let h2 = quad::integrate(|t| self.d2_bracket(t, tp), tp, tau, &spec)?;
        Ok((h1, h2))
    }

    /// `D₁` with the order of integration swapped: `∫₀^τ dt' cos(ωt') h₁(t')`.
    pub fn d1_swapped(&self, omega: f64, tau: f64) -> Result<Estimate> {
        check_tau(tau)?;
        quad::fallible(
            |tp| Ok((omega * tp).cos() * self.lag_weights(tp, tau)?.0.value),
            |g| quad::integrate(g, 0.0, tau, &self.quad),
        )
    }

    /// `Q(ω, τ)`.
    pub fn filter_q(&self, temp: Temperature, omega: f64, tau: f64) -> Result<Estimate> {
        check_tau(tau)?;
        if !(omega >= 0.0) {
            return Err(Error::invalid(format!("omega must be >= 0, got {omega}")));
        }
        if omega == 0.0 && !temp.is_zero() {
            return Err(Error::invalid(
                "Q diverges at omega = 0 for finite temperature",
            ));
        }
        let coth = temp.coth_half(omega);
        let d1 = self.d1(omega, tau)?;
        let d2 = self.d2(omega, tau)?;
        let scale = 2.0 / tau;
        Ok(Estimate {
            value: scale * (coth * d1.value + d2.value),
            error: scale * (coth.abs() * d1.error + d2.error),
            evals: d1.evals + d2.evals,
        })
    }
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

/// `(G, s, ω_c)` of an Ohmic-family bath.
fn ohmic_params(sd: &SpectralDensity) -> Result<(f64, f64, f64)> {
    sd.validate()?;
    match *sd {
        SpectralDensity::OhmicFamily {
            coupling,
            ohmicity,
            cutoff,
        } => Ok((coupling, ohmicity, cutoff)),
        SpectralDensity::DiscreteModes(_) => Err(Error::DiscretePointwiseEval),
    }
}

fn check_n_spins(n_spins: usize) -> Result<()> {
    if n_spins == 0 {
        Err(Error::invalid("n_spins must be >= 1"))
    } else {
        Ok(())
    }
}

/// Population-decay rate `τ ∫ J(ω) sinc²[(ε - ω)τ/2] dω`.
pub fn gamma_weak_popdecay(epsilon: f64, sd: &SpectralDensity, tau: f64) -> Result<f64> {
    Ok(gamma_weak_popdecay_with(epsilon, sd, tau, &QuadSpec::RATES)?.value)
}

pub fn gamma_weak_popdecay_with(
    epsilon: f64,
    sd: &SpectralDensity,
    tau: f64,
    spec: &QuadSpec,
) -> Result<Estimate> {
    check_tau(tau)?;
    if !epsilon.is_finite() {
        return Err(Error::invalid(format!(
            "epsilon must be finite, got {epsilon}"
        )));
    }
    let (g, s, wc) = ohmic_params(sd)?;
    if g == 0.0 {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            evals: 0,
        });
    }
    let half = 0.5 * tau;
    let shape = quad::integrate_semi_infinite(
        |w| {
            let x = (epsilon - w) * half;
            let sinc = if x.abs() < 1e-8 { 1.0 } else { x.sin() / x };
            ohmic_shape(s, wc, w) * sinc * sinc
        },
        spec,
        wc,
        Some(std::f64::consts::TAU / tau),
    )?;
    Ok(Estimate {
        value: g * tau * shape.value,
        error: g.abs() * tau * shape.error,
        evals: shape.evals,
    })
}

/// Bath kernels `K₁(t) + iK₂(t)` of the unit-coupling (`G = 1`) bath.
struct Kernels {
    ohmicity: f64,
    cutoff: f64,
    temp: Temperature,
    spec: QuadSpec,
    closed_form: bool,
}

impl Kernels {
    fn new(ohmicity: f64, cutoff: f64, temp: Temperature, spec: &QuadSpec) -> Self {
        Kernels {
            ohmicity,
            cutoff,
            temp,
            spec: spec.with_rel_tol((0.1 * spec.rel_tol).max(1e-13)),
            closed_form: ohmicity == 1.0 && temp.is_zero(),
        }
    }

    fn at(&self, t: f64) -> Result<Complex64> {
        if self.closed_form {
            let z = Complex64::new(1.0 / self.cutoff, -t);
            return Ok(1.0 / (z * z));
        }
        let (s, wc, temp) = (self.ohmicity, self.cutoff, self.temp);
        let period = (t > 0.0).then(|| std::f64::consts::TAU / t);
        let k1 = quad::integrate_semi_infinite(
            |w| {
                if w == 0.0 {
                    return 0.0;
                }
                ohmic_shape(s, wc, w) * temp.coth_half(w) * (w * t).cos()
            },
            &self.spec,
            wc,
            period,
        )?;
        let k2 = if t == 0.0 {
            0.0
        } else {
            quad::integrate_semi_infinite(
                |w| ohmic_shape(s, wc, w) * (w * t).sin(),
                &self.spec,
                wc,
                period,
            )?
            .value
        };
        Ok(Complex64::new(k1.value, k2))
    }
}

/// Filter-function rate `N_S ∫ J(ω) Q(ω, τ) dω`.
pub fn gamma_weak_filter(
    fe: &FilterEval,
    sd: &SpectralDensity,
    temp: Temperature,
    tau: f64,
    n_spins: usize,
) -> Result<RateResult> {
    check_tau(tau)?;
    check_n_spins(n_spins)?;
    let (g, s, wc) = ohmic_params(sd)?;
    if !(s > 0.0) {
        return Err(Error::invalid(format!(
            "weak rates need ohmicity > 0, got {s}"
        )));
    }
    if g == 0.0 || fe.sys.delta == 0.0 {
        return Ok(RateResult::new(0.0, 0.0, fe.sys.delta, tau));
    }
    let kernels = Kernels::new(s, wc, temp, &fe.quad);
    let shape = quad::fallible(
        |tp| {
            let (h1, h2) = fe.lag_weights(tp, tau)?;
            let k = kernels.at(tp)?;
            Ok(h1.value * k.re + h2.value * k.im)
        },
        |f| quad::integrate(f, 0.0, tau, &fe.quad),
    )?;
    let scale = g * n_spins as f64 * 2.0 / tau;
    Ok(RateResult::new(
        scale * shape.value,
        scale.abs() * shape.error,
        fe.sys.delta,
        tau,
    ))
}

/// Filter-function rate computed as the overlap of `J` with [`FilterEval::filter_q`].
///
/// Much slower than [`gamma_weak_filter`]; intended for validation.
pub fn gamma_weak_filter_overlap(
    fe: &FilterEval,
    sd: &SpectralDensity,
    temp: Temperature,
    tau: f64,
    n_spins: usize,
) -> Result<RateResult> {
    check_tau(tau)?;
    check_n_spins(n_spins)?;
    let (g, s, wc) = ohmic_params(sd)?;
    if g == 0.0 || fe.sys.delta == 0.0 {
        return Ok(RateResult::new(0.0, 0.0, fe.sys.delta, tau));
    }
    let shape = quad::fallible(
        |w| {
            if w == 0.0 {
                return Ok(0.0);
            }
            Ok(ohmic_shape(s, wc, w) * fe.filter_q(temp, w, tau)?.value)
        },
        |f| quad::integrate_semi_infinite(f, &fe.quad, wc, None),
    )?;
    let scale = g * n_spins as f64;
    Ok(RateResult::new(
        scale * shape.value,
        scale.abs() * shape.error,
        fe.sys.delta,
        tau,
    ))
}
