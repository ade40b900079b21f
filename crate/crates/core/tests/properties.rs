use kg_core::bounds::{gap_inclusion, improved_inclusion, rescale_kappa};
use kg_core::linalg::{self, SymmetricMatrix};
use kg_core::models::{self, random_spec, seeded_rng};
use kg_core::operator::{assemble_system, contraction_bound, optimize_shift};
use kg_core::spectral::{self, Interval, SignType};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = (u64, usize, f64)> {
    (any::<u64>(), 1usize..=6, 0.0f64..0.9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn square_root_squares_back(seed in any::<u64>(), n in 1usize..=6) {
        let spec = random_spec(&mut seeded_rng(seed), n, 0.0).unwrap();
        let m = spec.u_squared();
        let r = linalg::sqrt_spd(m).unwrap();
        let back = r.as_array().dot(r.as_array());
        let err = linalg::max_abs(&(back - m.as_array()).view());
        prop_assert!(err <= 1e-12 * m.spectral_norm().unwrap());
    }

    #[test]
    fn contraction_is_convex_in_the_shift((seed, n, b) in spec_strategy(), mu1 in -3.0f64..3.0, mu2 in -3.0f64..3.0) {
        let spec = random_spec(&mut seeded_rng(seed), n, b).unwrap();
        let mid = contraction_bound(&spec, 0.5 * (mu1 + mu2)).unwrap();
        let avg = 0.5 * (contraction_bound(&spec, mu1).unwrap() + contraction_bound(&spec, mu2).unwrap());
        prop_assert!(mid <= avg + 1e-12);
    }

    #[test]
    fn optimized_shift_is_no_worse((seed, n, b) in spec_strategy(), mu in -2.0f64..2.0) {
        let spec = random_spec(&mut seeded_rng(seed), n, b).unwrap();
        let (_, best) = optimize_shift(&spec).unwrap();
        prop_assert!(best <= contraction_bound(&spec, 0.0).unwrap() + 1e-9);
        prop_assert!(best <= contraction_bound(&spec, mu).unwrap() + 1e-9);
    }

    #[test]
    fn rescaling_never_hurts(km in -0.99f64..0.99, width in 0.0f64..3.0) {
        let kp = km + width;
        let (_, kappa_prime) = rescale_kappa(km, kp).unwrap();
        prop_assert!(kappa_prime <= km.abs().max(kp.abs()) + 1e-15);
        prop_assert!(kappa_prime < 1.0);
    }

    #[test]
    fn predicted_gaps_shrink(lo in -5.0f64..-0.01, hi in 0.01f64..5.0, kappa in 0.0f64..0.99) {
        let gap = Interval::new(lo, hi);
        let predicted = gap_inclusion(gap, kappa).unwrap().predicted;
        prop_assert!(predicted.is_subset_of(&gap));
        let improved = improved_inclusion(gap, -kappa, kappa).unwrap();
        prop_assert!((improved.lower - predicted.lower).abs() <= 1e-12);
        prop_assert!((improved.upper - predicted.upper).abs() <= 1e-12);
    }

    #[test]
    fn eigenvalues_above_the_shift_are_positive_type((seed, n, b) in spec_strategy()) {
        let spec = random_spec(&mut seeded_rng(seed), n, b).unwrap();
        let system = assemble_system(&spec, 0.0).unwrap();
        let report = spectral::eigen_spectrum(&system).unwrap();
        prop_assert!(report.is_real_spectrum);
        prop_assert_eq!(report.positive_ordered.len(), n);
        prop_assert_eq!(report.negative_ordered.len(), n);
        for (z, t) in report.eigenvalues.iter().zip(&report.sign_types) {
            let expected = if z.re > 0.0 { SignType::Positive } else { SignType::Negative };
            prop_assert_eq!(*t, expected);
        }
    }

    #[test]
    fn free_spectrum_is_plus_minus_u((seed, n, _) in spec_strategy()) {
        let spec = random_spec(&mut seeded_rng(seed), n, 0.0).unwrap();
        let free = spec.with_coupling(0.0);
        let report = spectral::eigen_spectrum(&assemble_system(&free, 0.0).unwrap()).unwrap();
        let u = linalg::sqrt_spd(free.u_squared()).unwrap().eigen().unwrap().values;
        let mut expected: Vec<f64> = u.iter().flat_map(|&x| [x, -x]).collect();
        expected.sort_by(f64::total_cmp);
        for (z, e) in report.eigenvalues.iter().zip(&expected) {
            prop_assert!((z.re - e).abs() <= 1e-12 * u[u.len() - 1]);
        }
    }

    #[test]
    fn model_files_round_trip((seed, n, b) in spec_strategy()) {
        let spec = random_spec(&mut seeded_rng(seed), n, b).unwrap();
        let parsed = models::parse_model(&models::model_to_json(&spec)).unwrap().build().unwrap();
        prop_assert_eq!(parsed.u_squared(), spec.u_squared());
        prop_assert_eq!(parsed.v(), spec.v());
    }

    #[test]
    fn symmetric_perturbation_generator_is_bounded(n in 1usize..=8, scale in 0.0f64..2.0, seed in any::<u64>()) {
        let m: SymmetricMatrix = models::random_perturbation(n, scale, seed).unwrap();
        prop_assert!(m.as_array().iter().all(|x| x.abs() <= scale));
        prop_assert_eq!(m, models::random_perturbation(n, scale, seed).unwrap());
    }
}
