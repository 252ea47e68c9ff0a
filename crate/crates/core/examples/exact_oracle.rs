//! Exact simulation of a spin and two bath modes against the polaron rate.

use zeno_lab::bath::SpectralDensity;
use zeno_lab::oracle::{
    discretize_bath, exact_survival, initial_correlation_distance, polaron_prediction, ExactModel,
};
use zeno_lab::strong_rates::SystemParams;

fn main() -> zeno_lab::Result<()> {
    let modes = discretize_bath(&SpectralDensity::ohmic(1.0, 1.0, 2.0)?, 2, 3.2)?;
    for m in &modes {
        println!("mode ω = {:.2}  g² = {:.4}", m.frequency, m.coupling_sq);
    }
    for beta in [5.0, 20.0] {
        let model = ExactModel::new(SystemParams::spin_half(1.0, 0.01)?, modes.clone(), 10, beta)?;
        println!(
            "β = {beta}  dim = {}  initial correlation = {:.3}",
            model.dim(),
            initial_correlation_distance(&model)?
        );
        for tau in [0.5, 1.0, 2.0] {
            let exact = exact_survival(&model, tau, 3)?;
            let pred = polaron_prediction(&model, tau)?;
            let rel =
                ((1.0 - exact.survival[0]) - (1.0 - pred.survival)).abs() / (1.0 - pred.survival);
            println!(
                "  τ = {tau}: 1-s exact = {:.4e}  1-s polaron = {:.4e}  rel = {:.3}  top level = {:.1e}",
                1.0 - exact.survival[0],
                1.0 - pred.survival,
                rel,
                exact.boundary_weight
            );
        }
    }
    Ok(())
}
