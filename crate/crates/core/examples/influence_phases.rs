//! Influence phases of an Ohmic bath: closed forms against quadrature.

use zeno_lab::bath::{InfluencePhases, SpectralDensity, Temperature};

fn main() -> zeno_lab::Result<()> {
    let sd = SpectralDensity::ohmic(1.0, 1.0, 10.0)?;
    let fast = InfluencePhases::new(sd.clone(), Temperature::ZERO)?;
    let slow = InfluencePhases::new(sd.clone(), Temperature::ZERO)?.without_fast_paths();
    let warm = InfluencePhases::new(sd, Temperature::from_beta(2.0)?)?;

    println!("kappa = {}", fast.kappa()?);
    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>14}",
        "t", "phi_r", "phi_r quad", "phi_i", "phi_r beta=2"
    );
    for t in [0.01, 0.1, 0.5, 1.0, 3.0, 10.0] {
        println!(
            "{t:>6} {:>14.10} {:>14.10} {:>14.10} {:>14.10}",
            fast.phi_r(t)?,
            slow.phi_r(t)?,
            fast.phi_i(t)?,
            warm.phi_r(t)?
        );
    }
    Ok(())
}
