use approx::assert_relative_eq;
use proptest::prelude::*;

use zeno_lab::bath::{InfluencePhases, Mode, SpectralDensity, Temperature};
use zeno_lab::oracle::{exact_survival, propagator, unitarity_defect, ExactModel};
use zeno_lab::regimes::{classify, linspace, survival_after_n, RateCurve, Variant};
use zeno_lab::strong_rates::{
    gamma_n_strong, gamma_n_strong_single, gamma_strong, gamma_strong_single, StrongOptions,
    SystemParams,
};
use zeno_lab::weak_rates::{gamma_weak_filter, gamma_weak_popdecay, FilterEval};

fn phases(g: f64, wc: f64) -> InfluencePhases {
    InfluencePhases::new(
        SpectralDensity::ohmic(g, 1.0, wc).unwrap(),
        Temperature::ZERO,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn strong_rate_scales_as_delta_squared(
        g in 0.2f64..2.5, eps in 0.3f64..2.0, tau in 0.1f64..3.0, c in 0.1f64..10.0,
    ) {
        let ip = phases(g, 10.0);
        let a = gamma_strong(&SystemParams::spin_half(eps, 0.01).unwrap(), &ip, tau).unwrap();
        let b = gamma_strong(&SystemParams::spin_half(eps, 0.01 * c).unwrap(), &ip, tau).unwrap();
        assert_relative_eq!(b.gamma, c * c * a.gamma, max_relative = 1e-12);
    }

    #[test]
    fn spin_half_paths_agree(g in 0.0f64..2.5, eps in 0.3f64..2.0, tau in 0.05f64..3.0) {
        let ip = phases(g, 10.0);
        let opts = StrongOptions::default();
        let sys = SystemParams::spin_half(eps, 0.05).unwrap();
        prop_assert_eq!(
            gamma_strong(&sys, &ip, tau).unwrap(),
            gamma_strong_single(eps, 0.05, &ip, tau, &opts).unwrap()
        );
        prop_assert_eq!(
            gamma_n_strong(&sys, &ip, tau).unwrap(),
            gamma_n_strong_single(eps, 0.05, &ip, tau, &opts).unwrap()
        );
    }

    #[test]
    fn weak_rates_are_linear_in_coupling(tau in 0.1f64..3.0, c in 0.5f64..20.0) {
        let fe = FilterEval::new(SystemParams::spin_half(1.0, 0.05).unwrap()).unwrap();
        let sd = SpectralDensity::ohmic(0.001, 1.0, 10.0).unwrap();
        let a = gamma_weak_filter(&fe, &sd, Temperature::ZERO, tau, 1).unwrap().gamma;
        let b = gamma_weak_filter(&fe, &sd.scaled(c), Temperature::ZERO, tau, 1).unwrap().gamma;
        assert_relative_eq!(b, c * a, max_relative = 1e-12);
        let p = gamma_weak_popdecay(1.0, &sd, tau).unwrap();
        let q = gamma_weak_popdecay(1.0, &sd.scaled(c), tau).unwrap();
        assert_relative_eq!(q, c * p, max_relative = 1e-12);
    }

    #[test]
    fn labels_survive_positive_rescaling(
        a in 0.5f64..5.0, b in 1.1f64..3.0, phase in 0.0f64..6.0, c in 1e-6f64..1e6,
    ) {
        let tau = linspace(0.05, 3.0, 97);
        let gamma: Vec<f64> = tau.iter().map(|t| b + (a * t + phase).sin()).collect();
        let scaled: Vec<f64> = gamma.iter().map(|g| c * g).collect();
        let x = classify(&RateCurve::new(tau.clone(), gamma, Variant::Strong).unwrap(), None).unwrap();
        let y = classify(&RateCurve::new(tau, scaled, Variant::Strong).unwrap(), None).unwrap();
        prop_assert_eq!(x.labels(), y.labels());
        prop_assert_eq!(x.argmax(), y.argmax());
    }

    #[test]
    fn survival_is_multiplicative(
        gamma in 0.0f64..2.0, tau in 0.01f64..5.0, n in 0u64..200, m in 0u64..200,
    ) {
        let joint = survival_after_n(gamma, tau, n + m).probability;
        let split = survival_after_n(gamma, tau, n).probability
            * survival_after_n(gamma, tau, m).probability;
        assert_relative_eq!(joint, split, max_relative = 1e-12);
        prop_assert!((0.0..=1.0).contains(&joint));
    }

    #[test]
    fn oracle_propagator_is_unitary(
        w in 0.3f64..3.0, g2 in 0.0f64..1.0, n_max in 3usize..8, tau in 0.1f64..3.0,
        removal in any::<bool>(),
    ) {
        let model = ExactModel::new(
            SystemParams::spin_half(1.0, 0.2).unwrap(),
            vec![Mode::new(w, g2)],
            n_max,
            2.0,
        )
        .unwrap()
        .with_removal(removal);
        prop_assert!(unitarity_defect(&propagator(&model, tau).unwrap()) < 1e-10);
    }

    #[test]
    fn exact_survival_stays_a_probability(
        w in 0.3f64..3.0, g2 in 0.0f64..1.0, delta in 0.0f64..0.5, tau in 0.1f64..3.0,
        beta in 0.5f64..10.0,
    ) {
        let model = ExactModel::new(
            SystemParams::spin_half(1.0, delta).unwrap(),
            vec![Mode::new(w, g2)],
            6,
            beta,
        )
        .unwrap();
        let run = exact_survival(&model, tau, 5).unwrap();
        for &s in &run.survival {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&s));
        }
        if delta == 0.0 {
            prop_assert!(run.survival.iter().all(|s| (s - 1.0).abs() < 1e-12));
        }
    }
}

#[test]
fn decoupled_rate_is_analytic() {
    let ip = phases(0.0, 10.0);
    let sys = SystemParams::spin_half(1.0, 0.05).unwrap();
    for tau in linspace(0.1, 3.0, 30) {
        let exact = 0.05f64.powi(2) * (0.5 * tau).sin().powi(2) / tau;
        assert_relative_eq!(
            gamma_strong(&sys, &ip, tau).unwrap().gamma,
            exact,
            max_relative = 1e-9
        );
    }
}
