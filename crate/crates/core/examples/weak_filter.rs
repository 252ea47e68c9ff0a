//! Weak-coupling rates: population decay and the filter-function rate.

use zeno_lab::bath::{SpectralDensity, Temperature};
use zeno_lab::strong_rates::SystemParams;
use zeno_lab::weak_rates::{gamma_weak_filter, gamma_weak_popdecay, FilterEval};

fn main() -> zeno_lab::Result<()> {
    let sd = SpectralDensity::ohmic(0.05, 1.0, 10.0)?;
    println!(
        "golden rule 2πJ(ε) = {:.5}",
        2.0 * std::f64::consts::PI * sd.density(1.0)?
    );
    for tau in [0.1, 1.0, 10.0, 100.0] {
        println!(
            "popdecay Γ(τ={tau}) = {:.5}",
            gamma_weak_popdecay(1.0, &sd, tau)?
        );
    }

    let fe = FilterEval::new(SystemParams::spin_half(1.0, 0.05)?)?;
    println!(
        "Q(ω=1, τ=2) = {:.6e}",
        fe.filter_q(Temperature::ZERO, 1.0, 2.0)?.value
    );
    let sd = SpectralDensity::ohmic(0.003, 1.0, 10.0)?;
    for tau in [0.5, 1.0, 2.0, 3.0] {
        let one = gamma_weak_filter(&fe, &sd, Temperature::ZERO, tau, 1)?;
        let two = gamma_weak_filter(&fe, &sd, Temperature::ZERO, tau, 2)?;
        println!(
            "τ = {tau}: Γn = {:.6e}  two spins = {:.6e}",
            one.gamma, two.gamma
        );
    }
    Ok(())
}
