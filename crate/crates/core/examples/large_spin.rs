//! Large-spin rates and the correction for removed system evolution.

use zeno_lab::bath::{InfluencePhases, SpectralDensity, Temperature};
use zeno_lab::strong_rates::{
    gamma_mod_strong_with, gamma_n_strong_with, gamma_strong, ModPhase, StrongOptions, SystemParams,
};

fn main() -> zeno_lab::Result<()> {
    let ip = InfluencePhases::new(SpectralDensity::ohmic(1.5, 1.0, 10.0)?, Temperature::ZERO)?;
    println!("kappa = {}", ip.kappa()?);
    for j in [0.5, 1.0, 2.0] {
        let sys = SystemParams::new(1.0, 0.05, j)?;
        let r = gamma_strong(&sys, &ip, 1.0)?;
        println!(
            "j = {j}: Γ(τ=1) = {:.6e}  survival = {:.8}",
            r.gamma, r.survival
        );
    }

    let sys = SystemParams::new(1.0, 0.05, 1.0)?;
    for phase in [
        ModPhase::TwoTauMinusT,
        ModPhase::MinusT,
        ModPhase::TauMinusT,
    ] {
        let opts = StrongOptions {
            mod_phase: phase,
            ..Default::default()
        };
        let m = gamma_mod_strong_with(&sys, &ip, 1.0, &opts)?;
        let n = gamma_n_strong_with(&sys, &ip, 1.0, &opts)?;
        println!(
            "{:<16} Γ_mod = {:+.6e}  Γn = {:.6e}",
            phase.name(),
            m.value,
            n.gamma
        );
    }
    Ok(())
}
