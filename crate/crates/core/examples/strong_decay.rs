//! Strong-coupling decay rate of one two-level system for several couplings.
//!
//! Stronger coupling lowers the rate at every measurement interval.

use zeno_lab::bath::{InfluencePhases, SpectralDensity, Temperature};
use zeno_lab::regimes::{classify, linspace, RateCurve, Variant};
use zeno_lab::strong_rates::{gamma_strong, SystemParams};

fn main() -> zeno_lab::Result<()> {
    let sys = SystemParams::spin_half(1.0, 0.05)?;
    let taus = linspace(0.05, 3.0, 60);
    for g in [1.0, 1.75, 2.5] {
        let ip = InfluencePhases::new(SpectralDensity::ohmic(g, 1.0, 10.0)?, Temperature::ZERO)?;
        let curve = RateCurve::from_fn(taus.clone(), Variant::Strong, |t| {
            Ok(gamma_strong(&sys, &ip, t)?.gamma)
        })?;
        let curve = classify(&curve, None)?;
        let peak = curve.argmax().unwrap();
        println!(
            "G = {g:<5} Γ(1) = {:.4e}  max Γ = {:.4e} at τ = {:.3}  regime at τ=3: {}",
            gamma_strong(&sys, &ip, 1.0)?.gamma,
            curve.gamma()[peak],
            curve.tau()[peak],
            curve.labels().last().unwrap()
        );
    }
    Ok(())
}
