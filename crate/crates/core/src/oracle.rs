//! Exact simulation of the lab-frame model on a truncated Fock space.
//!
//! ```text
//! H_L = ε J_z + Δ J_x + Σ_k ω_k b_k† b_k + 2 J_z Σ_k g_k (b_k + b_k†)
//! ```
//!
//! with real `g_k = √|g_k|²`, each mode truncated to `n_max` levels. For
//! `j = ½`, `2J_z = σ_z` and this is the usual spin-boson Hamiltonian. The
//! spin starts in `|j⟩` correlated with the bath,
//! `ρ_L(0) = P e^(-βH_L) P / Z` with `P = |j⟩⟨j| ⊗ 𝟙`, and is measured every
//! `τ`. After a successful measurement the state is projected back onto `P`
//! and renormalised.
//!
//! Everything is dense and goes through one symmetric eigendecomposition of
//! `H_L`, which serves both the Gibbs weights and the propagator.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::bath::{InfluencePhases, Mode, SpectralDensity, Temperature};
use crate::error::{Error, Result};
use crate::strong_rates::{self, StrongOptions, SystemParams};

pub const DEFAULT_DIM_CAP: usize = 4096;
pub const TRUNCATION_WARN_WEIGHT: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactModel {
    pub sys: SystemParams,
    pub modes: Vec<Mode>,
    /// Fock levels kept per mode (occupations `0..n_max`).
    pub n_max: usize,
    pub beta: f64,
    pub remove_system_evolution: bool,
    pub dim_cap: usize,
}

impl ExactModel {
    pub fn new(sys: SystemParams, modes: Vec<Mode>, n_max: usize, beta: f64) -> Result<Self> {
        let model = ExactModel {
            sys,
            modes,
            n_max,
            beta,
            remove_system_evolution: false,
            dim_cap: DEFAULT_DIM_CAP,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn with_removal(mut self, on: bool) -> Self {
        self.remove_system_evolution = on;
        self
    }

    pub fn with_dim_cap(mut self, cap: usize) -> Result<Self> {
        self.dim_cap = cap;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.sys.validate()?;
        if self.n_max < 2 {
            return Err(Error::invalid(format!(
                "n_max must be >= 2, got {}",
                self.n_max
            )));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::invalid(format!(
                "the exact model needs a finite beta > 0, got {}",
                self.beta
            )));
        }
        SpectralDensity::discrete(self.modes.clone())?;
        let dim = self.checked_dim().ok_or(Error::DimensionCap {
            dim: usize::MAX,
            cap: self.dim_cap,
        })?;
        if dim > self.dim_cap {
            return Err(Error::DimensionCap {
                dim,
                cap: self.dim_cap,
            });
        }
        Ok(())
    }

    fn checked_dim(&self) -> Option<usize> {
        let mut d = self.spin_dim();
        for _ in &self.modes {
            d = d.checked_mul(self.n_max)?;
        }
        Some(d)
    }

    /// `2j + 1`.
    pub fn spin_dim(&self) -> usize {
        self.sys.n_spins() + 1
    }

    /// `n_max^K`.
    pub fn bath_dim(&self) -> usize {
        self.n_max.pow(self.modes.len() as u32)
    }

    pub fn dim(&self) -> usize {
        self.spin_dim() * self.bath_dim()
    }

    pub fn temperature(&self) -> Temperature {
        Temperature::from_beta(self.beta).expect("validated beta")
    }

    pub fn spectral_density(&self) -> SpectralDensity {
        SpectralDensity::DiscreteModes(self.modes.clone())
    }

    /// `m` of spin basis index `i` (index 0 is `m = j`).
    fn m_of(&self, i: usize) -> f64 {
        self.sys.j - i as f64
    }

    /// Occupation of mode `k` in bath basis state `b`.
    fn occupation(&self, b: usize, k: usize) -> usize {
        let stride = self.n_max.pow((self.modes.len() - 1 - k) as u32);
        (b / stride) % self.n_max
    }
}

/// `⟨m+1| J₊ |m⟩`.
fn j_plus(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// `εJ_z + ΔJ_x` on the spin space alone.
fn spin_hamiltonian(model: &ExactModel) -> DMatrix<f64> {
    let ns = model.spin_dim();
    let (eps, delta, j) = (model.sys.epsilon, model.sys.delta, model.sys.j);
    let mut h = DMatrix::zeros(ns, ns);
    for i in 0..ns {
        h[(i, i)] = eps * model.m_of(i);
        if i + 1 < ns {
            // index i + 1 has m - 1, so J₊ maps it to index i
            let v = 0.5 * delta * j_plus(j, model.m_of(i + 1));
            h[(i, i + 1)] = v;
            h[(i + 1, i)] = v;
        }
    }
    h
}

/// `(H_L, H_{S,L})` on spin ⊗ Fock₁ ⊗ … ⊗ Fock_K.
pub fn build_hamiltonian(model: &ExactModel) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    model.validate()?;
    let (ns, nb) = (model.spin_dim(), model.bath_dim());
    let dim = ns * nb;
    let hs = spin_hamiltonian(model);
    let mut h_sys = DMatrix::zeros(dim, dim);
    for a in 0..ns {
        for c in 0..ns {
            let v = hs[(a, c)];
            if v != 0.0 {
                for b in 0..nb {
                    h_sys[(a * nb + b, c * nb + b)] = v;
                }
            }
        }
    }

    let mut h = h_sys.clone();
    let k_modes = model.modes.len();
    let strides: Vec<usize> = (0..k_modes)
        .map(|k| model.n_max.pow((k_modes - 1 - k) as u32))
        .collect();
    for a in 0..ns {
        let two_m = 2.0 * model.m_of(a);
        for b in 0..nb {
            let row = a * nb + b;
            for (k, mode) in model.modes.iter().enumerate() {
                let n = model.occupation(b, k);
                h[(row, row)] += mode.frequency * n as f64;
                if n + 1 < model.n_max {
                    let v = two_m * mode.coupling_sq.sqrt() * ((n + 1) as f64).sqrt();
                    let col = row + strides[k];
                    h[(row, col)] = v;
                    h[(col, row)] = v;
                }
            }
        }
    }
    Ok((h, h_sys))
}

/// Eigendecomposition of `H_L` shared by the state preparation and the propagator.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub energies: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn of(model: &ExactModel) -> Result<Self> {
        let (h, _) = build_hamiltonian(model)?;
        let eig = SymmetricEigen::new(h);
        Ok(Spectrum {
            energies: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    fn min_energy(&self) -> f64 {
        self.energies.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `P ρ P` block of `P e^(-βH) P / Z`, as a `bath_dim × bath_dim` matrix.
fn projected_gibbs(model: &ExactModel, spec: &Spectrum, beta: f64) -> Result<DMatrix<f64>> {
    let nb = model.bath_dim();
    let e0 = spec.min_energy();
    let weights = spec.energies.map(|e| (-beta * (e - e0)).exp());
    let vp = spec.vectors.rows(0, nb);
    let mut weighted = vp.clone_owned();
    for (c, w) in weights.iter().enumerate() {
        weighted.column_mut(c).scale_mut(*w);
    }
    let rho = &weighted * vp.transpose();
    let z = rho.trace();
    if !(z.is_finite() && z > f64::MIN_POSITIVE * 1e10) {
        return Err(Error::DegenerateNormalization);
    }
    let mut rho = rho / z;
    symmetrize(&mut rho);
    Ok(rho)
}

fn hermitize(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)].im = 0.0;
        for j in 0..i {
            let v = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// A density matrix supported on the measured sector `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedState {
    /// `bath_dim × bath_dim` block on `|j⟩ ⊗ bath`.
    pub block: DMatrix<f64>,
    pub spin_dim: usize,
}

impl ProjectedState {
    /// The full `dim × dim` density matrix.
    pub fn full(&self) -> DMatrix<f64> {
        let nb = self.block.nrows();
        let mut out = DMatrix::zeros(self.spin_dim * nb, self.spin_dim * nb);
        out.view_mut((0, 0), (nb, nb)).copy_from(&self.block);
        out
    }
}

/// `ρ_L(0) = P e^(-βH_L) P / Z`.
pub fn correlated_initial_state(model: &ExactModel) -> Result<ProjectedState> {
    let spec = Spectrum::of(model)?;
    Ok(ProjectedState {
        block: projected_gibbs(model, &spec, model.beta)?,
        spin_dim: model.spin_dim(),
    })
}

/// `|j⟩⟨j| ⊗ e^(-βH_B^(j))/Z`: the uncorrelated state with the bath in
/// equilibrium with the spin frozen at `m = j` (the `Δ = 0` Gibbs state).
pub fn product_initial_state(model: &ExactModel) -> Result<ProjectedState> {
    let mut frozen = model.clone();
    frozen.sys.delta = 0.0;
    correlated_initial_state(&frozen)
}

/// Trace distance between the correlated and the product initial states.
///
/// The polaron-frame rates assume the product state; a large distance
/// means the exact and predicted survivals need not agree.
pub fn initial_correlation_distance(model: &ExactModel) -> Result<f64> {
    let a = correlated_initial_state(model)?;
    let b = product_initial_state(model)?;
    let diff = a.block - b.block;
    Ok(0.5
        * SymmetricEigen::new(diff)
            .eigenvalues
            .iter()
            .map(|v| v.abs())
            .sum::<f64>())
}

/// Outcome of a repeated-measurement simulation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactRun {
    /// `s₁ … s_N`.
    pub survival: Vec<f64>,
    /// `-ln(s₁)/τ`.
    pub implied_rate: f64,
    /// Largest population found in the top Fock level of any mode.
    pub boundary_weight: f64,
    /// `boundary_weight > 10⁻⁴`.
    pub truncation_warning: bool,
    pub dimension: usize,
}

/// Columns of `U` on the measured sector, `U[:, P]`, with
/// `U = e^(-iH_Lτ)` or `e^(iH_{S,L}τ) e^(-iH_Lτ)`.
fn propagator_on_sector(model: &ExactModel, spec: &Spectrum, tau: f64) -> DMatrix<Complex64> {
    let nb = model.bath_dim();
    let phases: Vec<Complex64> = spec
        .energies
        .iter()
        .map(|e| Complex64::from_polar(1.0, -e * tau))
        .collect();
    let mut left = spec.vectors.map(Complex64::from);
    for (c, p) in phases.iter().enumerate() {
        let mut col = left.column_mut(c);
        col *= *p;
    }
    let right = spec.vectors.rows(0, nb).transpose().map(Complex64::from);
    let u = left * right;
    if !model.remove_system_evolution {
        return u;
    }
    let w = spin_unitary(model, tau);
    let ns = model.spin_dim();
    let mut out = DMatrix::zeros(ns * nb, nb);
    for a in 0..ns {
        for c in 0..ns {
            let wac = w[(a, c)];
            if wac == Complex64::new(0.0, 0.0) {
                continue;
            }
            let src = u.rows(c * nb, nb);
            let mut dst = out.rows_mut(a * nb, nb);
            dst += src * wac;
        }
    }
    out
}

/// `e^(iH_Sτ)` on the spin space.
fn spin_unitary(model: &ExactModel, tau: f64) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(spin_hamiltonian(model));
    let mut left = eig.eigenvectors.map(Complex64::from);
    for (c, e) in eig.eigenvalues.iter().enumerate() {
        let mut col = left.column_mut(c);
        col *= Complex64::from_polar(1.0, e * tau);
    }
    left * eig.eigenvectors.transpose().map(Complex64::from)
}

/// Full propagator `U` (with the removal factor when the model asks for it).
pub fn propagator(model: &ExactModel, tau: f64) -> Result<DMatrix<Complex64>> {
    let spec = Spectrum::of(model)?;
    let mut u = full_propagator(&spec, tau);
    if model.remove_system_evolution {
        let w = spin_unitary(model, tau);
        let nb = model.bath_dim();
        let ns = model.spin_dim();
        let mut wide = DMatrix::zeros(ns * nb, ns * nb);
        for a in 0..ns {
            for c in 0..ns {
                for b in 0..nb {
                    wide[(a * nb + b, c * nb + b)] = w[(a, c)];
                }
            }
        }
        u = wide * u;
    }
    Ok(u)
}

fn full_propagator(spec: &Spectrum, tau: f64) -> DMatrix<Complex64> {
    let mut left = spec.vectors.map(Complex64::from);
    for (c, e) in spec.energies.iter().enumerate() {
        let mut col = left.column_mut(c);
        col *= Complex64::from_polar(1.0, -e * tau);
    }
    left * spec.vectors.transpose().map(Complex64::from)
}

/// `max |(U†U - 𝟙)_ab|`.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let p = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p[(i, j)] - target).norm());
        }
    }
    worst
}

fn boundary_weight_of(model: &ExactModel, diag: &[f64]) -> f64 {
    let nb = model.bath_dim();
    let top = model.n_max - 1;
    let mut worst = 0.0f64;
    for k in 0..model.modes.len() {
        let w: f64 = diag
            .iter()
            .enumerate()
            .filter(|(idx, _)| model.occupation(idx % nb, k) == top)
            .map(|(_, p)| *p)
            .sum();
        worst = worst.max(w);
    }
    worst
}

/// Repeated measurements every `tau`, `n_meas` times.
pub fn exact_survival(model: &ExactModel, tau: f64, n_meas: usize) -> Result<ExactRun> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!(
            "tau must be finite and > 0, got {tau}"
        )));
    }
    if n_meas == 0 {
        return Err(Error::invalid("n_meas must be >= 1"));
    }
    let spec = Spectrum::of(model)?;
    let mut rho = projected_gibbs(model, &spec, model.beta)?.map(Complex64::from);
    let u = propagator_on_sector(model, &spec, tau);
    let nb = model.bath_dim();
    let u_pp = u.rows(0, nb).clone_owned();

    let initial_diag: Vec<f64> = rho.diagonal().iter().map(|z| z.re).collect();
    let mut boundary = boundary_weight_of(model, &initial_diag);
    let mut survival = Vec::with_capacity(n_meas);
    for _ in 0..n_meas {
        // diagonal of U ρ U† over the whole space, for the truncation check
        let evolved = &u * &rho;
        let diag: Vec<f64> = (0..u.nrows())
            .map(|r| {
                evolved
                    .row(r)
                    .iter()
                    .zip(u.row(r).iter())
                    .map(|(a, b)| (a * b.conj()).re)
                    .sum()
            })
            .collect();
        boundary = boundary.max(boundary_weight_of(model, &diag));

        let block = &u_pp * &rho * u_pp.adjoint();
        let s: f64 = block.diagonal().iter().map(|z| z.re).sum();
        survival.push(s);
        if !(s > 0.0) {
            return Err(Error::DegenerateNormalization);
        }
        let mut next = block.unscale(s);
        hermitize(&mut next);
        rho = next;
    }
    Ok(ExactRun {
        implied_rate: -survival[0].ln() / tau,
        survival,
        boundary_weight: boundary,
        truncation_warning: boundary > TRUNCATION_WARN_WEIGHT,
        dimension: model.dim(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    /// `exp(-Γτ)`.
    pub survival: f64,
    pub gamma: f64,
    pub error: f64,
}

/// Polaron-frame prediction for the same model, using the discrete-mode phases.
///
/// Uses `Γ` without system-evolution removal and `Γₙ` with it.
pub fn polaron_prediction(model: &ExactModel, tau: f64) -> Result<Prediction> {
    polaron_prediction_with(model, tau, &StrongOptions::default())
}

pub fn polaron_prediction_with(
    model: &ExactModel,
    tau: f64,
    opts: &StrongOptions,
) -> Result<Prediction> {
    model.validate()?;
    if model.sys.delta == 0.0 {
        return Ok(Prediction {
            survival: 1.0,
            gamma: 0.0,
            error: 0.0,
        });
    }
    let ip =
        InfluencePhases::new(model.spectral_density(), model.temperature())?.with_quad(opts.quad);
    let r = if model.remove_system_evolution {
        strong_rates::gamma_n_strong_with(&model.sys, &ip, tau, opts)?
    } else {
        strong_rates::gamma_strong_with(&model.sys, &ip, tau, opts)?
    };
    Ok(Prediction {
        survival: r.survival,
        gamma: r.gamma,
        error: r.error,
    })
}

/// Midpoint-rule discretisation of a continuum on `[0, omega_max]`:
/// `ω_k` at the bin centres, `|g_k|² = J(ω_k) Δω`.
pub fn discretize_bath(sd: &SpectralDensity, k_modes: usize, omega_max: f64) -> Result<Vec<Mode>> {
    if k_modes == 0 {
        return Err(Error::invalid("k_modes must be >= 1"));
    }
    if !(omega_max > 0.0 && omega_max.is_finite()) {
        return Err(Error::invalid(format!(
            "omega_max must be > 0, got {omega_max}"
        )));
    }
    let dw = omega_max / k_modes as f64;
    (0..k_modes)
        .map(|k| {
            let w = (k as f64 + 0.5) * dw;
            Ok(Mode::new(w, sd.density(w)? * dw))
        })
        .collect()
}

/// `5 ω_c` for an Ohmic-family bath.
pub fn default_omega_max(sd: &SpectralDensity) -> Result<f64> {
    match sd {
        SpectralDensity::OhmicFamily { cutoff, .. } => Ok(5.0 * cutoff),
        SpectralDensity::DiscreteModes(_) => Err(Error::DiscretePointwiseEval),
    }
}

/// `β` with `e^(-β(E₁ - E₀)) = 10⁻¹²` for the two lowest levels of `P H_L P`.
pub fn suggest_beta(model: &ExactModel) -> Result<f64> {
    let (h, _) = build_hamiltonian(model)?;
    let nb = model.bath_dim();
    let block = h.view((0, 0), (nb, nb)).clone_owned();
    let mut e: Vec<f64> = SymmetricEigen::new(block)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    e.sort_by(f64::total_cmp);
    let gap = e.get(1).map_or(f64::INFINITY, |e1| e1 - e[0]);
    if !(gap > 0.0) {
        return Err(Error::invalid(
            "projected spectrum is degenerate at the bottom",
        ));
    }
    Ok(1e12f64.ln() / gap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(delta: f64) -> SystemParams {
        SystemParams::spin_half(1.0, delta).unwrap()
    }

    #[test]
    fn repeated_measurements_match_full_matrices() {
        let m = ExactModel::new(sys(0.4), vec![Mode::new(0.7, 0.5)], 5, 1.5)
            .unwrap()
            .with_removal(true);
        let tau = 1.3;
        let run = exact_survival(&m, tau, 4).unwrap();
        let u = propagator(&m, tau).unwrap();
        let nb = m.bath_dim();
        let mut rho = correlated_initial_state(&m)
            .unwrap()
            .full()
            .map(Complex64::from);
        for &s in &run.survival {
            let mut next = &u * &rho * u.adjoint();
            for i in 0..next.nrows() {
                for j in 0..next.ncols() {
                    if i >= nb || j >= nb {
                        next[(i, j)] = Complex64::new(0.0, 0.0);
                    }
                }
            }
            let p = next.trace().re;
            assert!((p - s).abs() < 1e-12, "{p} vs {s}");
            rho = next / Complex64::new(p, 0.0);
        }
    }

    #[test]
    fn spin_only_hamiltonian() {
        let m = ExactModel::new(sys(0.3), vec![], 2, 1.0).unwrap();
        let (h, hs) = build_hamiltonian(&m).unwrap();
        assert_eq!(h, hs);
        assert_eq!(h, DMatrix::from_row_slice(2, 2, &[0.5, 0.15, 0.15, -0.5]));
    }

    #[test]
    fn decoupled_mode_spectrum() {
        let m = ExactModel::new(sys(0.3), vec![Mode::new(1.0, 0.0)], 3, 1.0).unwrap();
        let spec = Spectrum::of(&m).unwrap();
        let mut got: Vec<f64> = spec.energies.iter().copied().collect();
        got.sort_by(f64::total_cmp);
        let half = 0.5 * (1.0f64 + 0.09).sqrt();
        let mut want: Vec<f64> = (0..3)
            .flat_map(|n| [-half + n as f64, half + n as f64])
            .collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        let m = ExactModel::new(
            SystemParams::new(1.0, 0.2, 1.0).unwrap(),
            vec![Mode::new(0.8, 0.3), Mode::new(2.0, 0.1)],
            4,
            2.0,
        )
        .unwrap();
        let (h, _) = build_hamiltonian(&m).unwrap();
        assert_eq!(h, h.transpose());
    }

    #[test]
    fn dimension_cap() {
        let err = ExactModel::new(sys(0.1), vec![Mode::new(1.0, 0.1); 4], 10, 1.0).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionCap {
                dim: 20000,
                cap: DEFAULT_DIM_CAP
            }
        );
    }

    #[test]
    fn infinite_beta_rejected() {
        assert!(ExactModel::new(sys(0.1), vec![], 2, f64::INFINITY).is_err());
    }

    #[test]
    fn no_tunnelling_survives() {
        let m = ExactModel::new(sys(0.0), vec![Mode::new(1.0, 0.2)], 8, 2.0).unwrap();
        let run = exact_survival(&m, 0.7, 4).unwrap();
        for s in run.survival {
            assert!((s - 1.0).abs() < 1e-10);
        }
        assert_eq!(polaron_prediction(&m, 0.7).unwrap().survival, 1.0);
    }

    #[test]
    fn removal_without_coupling_survives() {
        let m = ExactModel::new(sys(0.2), vec![Mode::new(1.0, 0.0)], 3, 2.0)
            .unwrap()
            .with_removal(true);
        let run = exact_survival(&m, 1.3, 3).unwrap();
        for s in run.survival {
            assert!((s - 1.0).abs() < 1e-10);
        }
        let p = polaron_prediction(&m, 1.3).unwrap();
        assert!(p.gamma.abs() < 1e-9);
    }

    #[test]
    fn propagators_are_unitary() {
        for removal in [false, true] {
            let m = ExactModel::new(
                SystemParams::new(1.0, 0.3, 1.0).unwrap(),
                vec![Mode::new(0.8, 0.2), Mode::new(2.4, 0.1)],
                4,
                3.0,
            )
            .unwrap()
            .with_removal(removal);
            let u = propagator(&m, 1.7).unwrap();
            assert!(unitarity_defect(&u) <= 1e-10);
        }
    }

    #[test]
    fn sector_propagator_matches_full() {
        let m = ExactModel::new(sys(0.3), vec![Mode::new(0.9, 0.2)], 5, 3.0)
            .unwrap()
            .with_removal(true);
        let spec = Spectrum::of(&m).unwrap();
        let part = propagator_on_sector(&m, &spec, 0.8);
        let full = propagator(&m, 0.8).unwrap();
        let nb = m.bath_dim();
        assert!((part - full.columns(0, nb)).map(|z| z.norm()).max() < 1e-12);
    }

    #[test]
    fn high_temperature_state_is_flat() {
        let m = ExactModel::new(sys(0.3), vec![Mode::new(1.0, 0.1)], 4, 1e-9).unwrap();
        let rho = correlated_initial_state(&m).unwrap();
        let flat = DMatrix::<f64>::identity(4, 4) / 4.0;
        assert!((rho.block - flat).amax() < 1e-6);
    }

    #[test]
    fn decoupled_state_factorises() {
        let m = ExactModel::new(sys(0.3), vec![Mode::new(1.0, 0.0)], 4, 1.5).unwrap();
        let rho = correlated_initial_state(&m).unwrap();
        let z: f64 = (0..4).map(|n| (-1.5 * n as f64).exp()).sum();
        for n in 0..4 {
            assert!((rho.block[(n, n)] - (-1.5 * n as f64).exp() / z).abs() < 1e-12);
        }
        assert!((rho.block.trace() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn discretization_moments() {
        let sd = SpectralDensity::ohmic(1.0, 1.0, 1.0).unwrap();
        let modes = discretize_bath(&sd, 1000, 20.0).unwrap();
        let total: f64 = modes.iter().map(|m| m.coupling_sq).sum();
        assert!((total - 1.0).abs() < 1e-3);
        let kappa = crate::bath::kappa(&SpectralDensity::DiscreteModes(modes)).unwrap();
        assert!((kappa - 4.0).abs() < 1e-2);
        let zero =
            discretize_bath(&SpectralDensity::ohmic(0.0, 1.0, 1.0).unwrap(), 5, 5.0).unwrap();
        assert!(zero.iter().all(|m| m.coupling_sq == 0.0));
    }

    #[test]
    fn suggested_beta_is_positive() {
        let m = ExactModel::new(sys(0.1), vec![Mode::new(1.0, 0.05)], 6, 1.0).unwrap();
        let b = suggest_beta(&m).unwrap();
        assert!(b > 0.0 && b.is_finite());
    }
}
