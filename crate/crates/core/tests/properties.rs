use magnon_memory::boson::{build_boson_hamiltonian, evolve_constant, evolve_pulsed, BosonModel, PulseShape};
use magnon_memory::decoherence::decay_rate;
use magnon_memory::density::{trace_distance, QubitState};
use magnon_memory::design::max_n_for_temperature;
use magnon_memory::exact::build_exact;
use magnon_memory::model::{
    chi_spectrum, dispersion, swap_time, ChiSpectrum, CouplingProfile, PhysicalParams, Spin,
};
use magnon_memory::protocol::{ideal_store_map, store, store_with_spectators};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn params_strategy(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PhysicalParams> {
    (n, prop_oneof![Just(Spin::HALF), Just(Spin::ONE)], 0.0..3.0f64, -1.0..1.0f64, 0.2..2.0f64).prop_map(
        |(n, s, j, b0, lambda)| PhysicalParams {
            b0,
            g_e: 1.5,
            g_n: 0.8,
            mu_b: 1.0,
            mu_n: 0.5,
            ..PhysicalParams::zero_field(n, s, j, lambda).unwrap()
        },
    )
}

fn qubit_strategy() -> impl Strategy<Value = QubitState> {
    (0.0..1.0f64, 0.0..1.0f64, 0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU).prop_map(
        |(r, theta, phi, mix)| {
            // Bloch vector of length r
            let (x, y, z) = (r * theta.sin() * phi.cos(), r * theta.sin() * phi.sin(), r * (theta * 3.0).cos());
            let len = (x * x + y * y + z * z).sqrt().max(1.0);
            let (x, y, z) = (x / len, y / len, z / len);
            let _ = mix;
            QubitState::new(nalgebra::Matrix2::new(
                C64::new(0.5 * (1.0 + z), 0.0),
                C64::new(0.5 * x, -0.5 * y),
                C64::new(0.5 * x, 0.5 * y),
                C64::new(0.5 * (1.0 - z), 0.0),
            ))
            .unwrap()
        },
    )
}

fn electron_amplitudes() -> impl Strategy<Value = [C64; 2]> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("nonzero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-3)
        .prop_map(|(a, b, c, d)| {
            let norm = (a * a + b * b + c * c + d * d).sqrt();
            [C64::new(a / norm, b / norm), C64::new(c / norm, d / norm)]
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dispersion_is_symmetric(p in params_strategy(2..=40)) {
        for k in 1..p.n {
            let a = dispersion(&p, k).unwrap();
            let b = dispersion(&p, p.n - k).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
            prop_assert!(a >= p.nuclear_zeeman() - 1e-12);
        }
        prop_assert_eq!(dispersion(&p, p.n).unwrap(), p.g_n * p.mu_n * p.b0);
    }

    #[test]
    fn chi_inverse_transform_recovers_profile(lambdas in prop::collection::vec(0.05..3.0f64, 2..40)) {
        let profile = CouplingProfile::custom(lambdas.clone()).unwrap();
        let chi = chi_spectrum(&profile).unwrap();
        let back = chi.site_ratios();
        for (l, r) in lambdas.iter().zip(back) {
            prop_assert!((l / lambdas[0] - r).abs() < 1e-10);
        }
    }

    #[test]
    fn decay_rate_is_nonnegative_and_monotone_in_chi(
        p in params_strategy(4..=30),
        scale in 0.0..2.0f64,
        eta in 1e-3..1.0f64,
        seed in any::<u64>(),
    ) {
        let n = p.n;
        let mut rng = seed;
        let mut next = || { rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (rng >> 11) as f64 / (1u64 << 53) as f64 };
        let mut base: Vec<C64> = (0..n).map(|_| C64::new(next() - 0.5, next() - 0.5)).collect();
        base[n - 1] = C64::new(1.0, 0.0);
        let mut scaled = base.clone();
        for c in scaled.iter_mut().take(n - 1) {
            *c *= 1.0 + scale;
        }
        let g1 = decay_rate(&p, &ChiSpectrum::from_values(base).unwrap(), eta).unwrap();
        let g2 = decay_rate(&p, &ChiSpectrum::from_values(scaled).unwrap(), eta).unwrap();
        prop_assert!(g1 >= 0.0);
        prop_assert!(g2 >= g1 * (1.0 - 1e-12));
    }

    #[test]
    fn thermal_bound_is_monotone(j in 0.1..5.0f64, fracs in prop::collection::vec(1e-6..1.0f64, 2..30)) {
        let s = Spin::HALF;
        let mut fracs = fracs;
        fracs.sort_by(f64::total_cmp);
        let bounds: Vec<u64> = fracs.iter().map(|f| max_n_for_temperature(f * 4.0 * j * 0.5, j, s).unwrap()).collect();
        prop_assert!(bounds.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn ideal_store_preserves_purity(rho in qubit_strategy()) {
        let w = ideal_store_map(&rho);
        prop_assert!((w.purity() - rho.purity()).abs() < 1e-12);
    }

    #[test]
    fn homogeneous_store_is_ideal(rho in qubit_strategy(), n in 2usize..30, j in 0.0..3.0f64) {
        let p = PhysicalParams::zero_field(n, Spin::HALF, j, 1.0).unwrap();
        let out = store(&rho, &BosonModel::homogeneous(p).unwrap()).unwrap();
        prop_assert!(trace_distance(out.stored.matrix(), ideal_store_map(&rho).matrix()) < 1e-10);
        prop_assert!(out.leakage < 1e-10);
    }

    #[test]
    fn excitation_number_is_conserved(
        p in params_strategy(3..=10),
        sigma in 0.3..5.0f64,
        amps in electron_amplitudes(),
        t in 0.0..50.0f64,
    ) {
        let chi = chi_spectrum(&magnon_memory::model::gaussian_profile(p.n, sigma, p.lambda).unwrap()).unwrap();
        let model = BosonModel::new(p, chi).unwrap().with_fock_cutoff(2).unwrap().with_max_excitations(2);
        let h = build_boson_hamiltonian(&model).unwrap();
        prop_assert!(h.hermiticity_defect() < 1e-12);
        let psi = model.vacuum_state(amps).unwrap();
        let out = h.evolve(&psi, t).unwrap();
        prop_assert!((out.amplitudes().norm() - 1.0).abs() < 1e-10);
        let before = psi.sector_populations();
        let after = out.sector_populations();
        for (a, b) in before.iter().zip(&after) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn fock_cutoff_does_not_change_single_excitation_dynamics(
        p in params_strategy(3..=12),
        sigma in 0.3..5.0f64,
        amps in electron_amplitudes(),
        t in 0.0..30.0f64,
    ) {
        let chi = chi_spectrum(&magnon_memory::model::gaussian_profile(p.n, sigma, p.lambda).unwrap()).unwrap();
        let small = BosonModel::new(p.clone(), chi.clone()).unwrap();
        let large = BosonModel::new(p, chi).unwrap().with_fock_cutoff(3).unwrap().with_max_excitations(3);
        let a = evolve_constant(&small, &small.vacuum_state(amps).unwrap(), t).unwrap();
        let b = evolve_constant(&large, &large.vacuum_state(amps).unwrap(), t).unwrap();
        let ea = a.electron_state().unwrap();
        let eb = b.electron_state().unwrap();
        prop_assert!(trace_distance(ea.matrix(), eb.matrix()) < 1e-10);
        prop_assert!((a.occupation(a.basis().modes()[0]).unwrap() - b.occupation(b.basis().modes()[0]).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn spectators_decouple_in_homogeneous_store(rho in qubit_strategy(), n in 3usize..6, j in 0.0..2.0f64) {
        let p = PhysicalParams::zero_field(n, Spin::HALF, j, 1.0).unwrap();
        let model = BosonModel::homogeneous(p).unwrap().with_all_modes().unwrap();
        let occupied: Vec<(usize, u32)> = (1..n).map(|k| (k, 1)).collect();
        let vac = store(&rho, &model).unwrap();
        let filled = store_with_spectators(&rho, &model, &occupied).unwrap();
        prop_assert!(trace_distance(vac.stored.matrix(), filled.stored.matrix()) < 1e-10);
        prop_assert!(filled.leakage < 1e-10);
    }

    #[test]
    fn pulse_shape_only_matters_through_area(
        n in 2usize..12,
        amps in electron_amplitudes(),
        samples in prop::collection::vec(0.0..2.0f64, 3..40),
        duration in 1.0..20.0f64,
        area in 0.1..20.0f64,
    ) {
        let p = PhysicalParams::zero_field(n, Spin::HALF, 0.0, 1.0).unwrap();
        let model = BosonModel::homogeneous(p).unwrap();
        let psi = model.vacuum_state(amps).unwrap();
        let times: Vec<f64> = (0..samples.len()).map(|i| duration * i as f64 / (samples.len() - 1) as f64).collect();
        let custom = PulseShape::custom(times, samples).unwrap();
        prop_assume!(custom.area() > 1e-6);
        let custom = custom.scaled_to_area(area).unwrap();
        let rect = PulseShape::rectangular(area / duration, duration).unwrap();
        let a = evolve_pulsed(&model, &psi, &custom).unwrap();
        let b = evolve_pulsed(&model, &psi, &rect).unwrap();
        prop_assert!((a.amplitudes() - b.amplitudes()).norm() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Rotating the coupling profile around the ring leaves the electron dynamics unchanged.
    #[test]
    fn ring_rotation_symmetry(
        lambdas in prop::collection::vec(0.1..2.0f64, 3..=5),
        shift in 1usize..5,
        j in 0.0..2.0f64,
        t in 0.0..20.0f64,
    ) {
        let n = lambdas.len();
        let p = PhysicalParams::zero_field(n, Spin::HALF, j, 1.0).unwrap();
        let mut rotated = lambdas.clone();
        rotated.rotate_left(shift % n);
        let a = build_exact(&p, &CouplingProfile::custom(lambdas).unwrap()).unwrap();
        let b = build_exact(&p, &CouplingProfile::custom(rotated).unwrap()).unwrap();
        let up = [C64::new(1.0, 0.0), C64::default()];
        let psi = a.basis().product_state(up, &vec![0; n]).unwrap();
        let pa = a.basis().up_population(&a.evolve_many(&psi, &[t]).unwrap()[0]);
        let pb = b.basis().up_population(&b.evolve_many(&psi, &[t]).unwrap()[0]);
        prop_assert!((pa - pb).abs() < 1e-10);
    }

    /// In the single-excitation sector the spin ring maps exactly onto the boson
    /// model once the memory coupling uses the mean site coupling.
    #[test]
    fn bosonization_is_exact_for_one_excitation(
        lambdas in prop::collection::vec(0.1..2.0f64, 2..=6),
        j in 0.0..2.0f64,
        b0 in -0.5..0.5f64,
        t in 0.0..30.0f64,
    ) {
        let n = lambdas.len();
        let mean = lambdas.iter().sum::<f64>() / n as f64;
        let p = PhysicalParams { b0, ..PhysicalParams::zero_field(n, Spin::HALF, j, 1.0).unwrap() };
        let profile = CouplingProfile::custom(lambdas.clone()).unwrap();
        let exact = build_exact(&p, &profile).unwrap();

        let chi = chi_spectrum(&profile).unwrap();
        let rescaled: Vec<C64> = chi.values().iter().map(|c| c * (lambdas[0] / mean)).collect();
        let model = BosonModel::new(p.with_lambda(mean).unwrap(), ChiSpectrum::from_values(rescaled).unwrap())
            .unwrap()
            .with_chi_threshold(0.0);

        let up = [C64::new(1.0, 0.0), C64::default()];
        let psi = exact.basis().product_state(up, &vec![0; n]).unwrap();
        let pe = exact.basis().up_population(&exact.evolve_many(&psi, &[t]).unwrap()[0]);
        let pb = evolve_constant(&model, &model.vacuum_state(up).unwrap(), t).unwrap().up_population();
        prop_assert!((pe - pb).abs() < 1e-10, "exact {pe} boson {pb}");
    }
}

#[test]
fn swap_time_consistency() {
    for (n, s, lambda) in [(2, Spin::HALF, 1.0), (7, Spin::ONE, 0.3), (100, Spin::HALF, 2.5)] {
        let p = PhysicalParams::zero_field(n, s, 0.0, lambda).unwrap();
        let g = magnon_memory::model::effective_coupling(&p);
        assert!((swap_time(&p) * g - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
