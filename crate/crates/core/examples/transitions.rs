//! Zeno / anti-Zeno transitions of a strong-coupling rate curve.

use zeno_lab::bath::{InfluencePhases, SpectralDensity, Temperature};
use zeno_lab::regimes::{find_transitions, survival_after_n};
use zeno_lab::strong_rates::{gamma_strong, SystemParams};

fn main() -> zeno_lab::Result<()> {
    let sys = SystemParams::spin_half(1.0, 0.05)?;
    for g in [0.25, 1.0, 2.5] {
        let ip = InfluencePhases::new(SpectralDensity::ohmic(g, 1.0, 10.0)?, Temperature::ZERO)?;
        let rate = |t: f64| Ok(gamma_strong(&sys, &ip, t)?.gamma);
        let found = find_transitions(rate, (0.05, 8.0), 80, 1e-5)?;
        println!("G = {g}: {} transition(s)", found.len());
        for tr in &found {
            let s = survival_after_n(rate(tr.tau_star)?, tr.tau_star, 100);
            println!(
                "  τ* = {:.5} ± {:.1e}  {}  survival after 100 = {:.6}",
                tr.tau_star,
                tr.error_bound,
                tr.kind.as_str(),
                s.probability
            );
        }
    }
    Ok(())
}
