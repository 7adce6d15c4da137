use gradiometry::estimator::MeasurementModel;
use gradiometry::linalg::{commutator, hermiticity_residual, unitarity_residual};
use gradiometry::moments::{error_propagation, MomentObservable};
use gradiometry::optimal::{commutant_basis, optimal_precision};
use gradiometry::polytope::{build_polytope, figure_of_merit_sum, qfi_six_vector};
use gradiometry::qfi::{precision_bounds, qfi_matrix_with};
use gradiometry::states::{evolve, haar_random_state, random_product_state};
use gradiometry::{Axis, EvolutionParams, SpaceOperators, StateVector, TwoWellSpace};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn haar(na: u32, nb: u32, seed: u64) -> StateVector {
    haar_random_state(TwoWellSpace::new(na, nb).unwrap(), &mut ChaCha8Rng::seed_from_u64(seed))
}

fn split() -> impl Strategy<Value = (u32, u32)> {
    (1u32..=5, 1u32..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn local_and_collective_su2((na, nb) in split()) {
        let ops = SpaceOperators::new(TwoWellSpace::new(na, nb).unwrap());
        let i = Complex64::new(0.0, 1.0);
        let cyclic = [(Axis::X, Axis::Y, Axis::Z), (Axis::Y, Axis::Z, Axis::X), (Axis::Z, Axis::X, Axis::Y)];
        for (p, q, r) in cyclic {
            for (a, b, c) in [
                (ops.a(p).clone(), ops.a(q).clone(), ops.a(r).clone()),
                (ops.b(p).clone(), ops.b(q).clone(), ops.b(r).clone()),
                (ops.plus(p), ops.plus(q), ops.plus(r)),
            ] {
                prop_assert!((commutator(&a, &b) - c * i).norm() < 1e-10);
            }
            prop_assert!(commutator(ops.a(p), ops.b(q)).norm() < 1e-12);
            prop_assert!(hermiticity_residual(&ops.minus(p)) < 1e-12);
        }
    }

    #[test]
    fn evolution_is_unitary((na, nb) in split(), b0 in -3.0f64..3.0, b1 in -3.0f64..3.0) {
        let ops = SpaceOperators::new(TwoWellSpace::new(na, nb).unwrap());
        for axis in Axis::ALL {
            let u = EvolutionParams::new(b0, b1, axis).unwrap().unitary(&ops);
            prop_assert!(unitarity_residual(&u) < 1e-10);
        }
    }

    #[test]
    fn qfi_sum_rule((na, nb) in split(), seed in any::<u64>()) {
        let psi = haar(na, nb, seed);
        let ops = SpaceOperators::new(psi.space());
        for axis in Axis::ALL {
            let q = qfi_matrix_with(&psi, &ops, axis);
            prop_assert!((q.f00 + q.f11 - 2.0 * (q.fa + q.fb)).abs() < 1e-9);
            prop_assert!(q.is_psd(1e-9));
            let b = precision_bounds(&q).unwrap();
            prop_assert!(b.bound_b1 <= q.f11 + 1e-9);
            prop_assert!(b.bound_b1 >= -1e-9);
        }
    }

    #[test]
    fn sum_bounds_hold((na, nb) in split(), seed in any::<u64>()) {
        let psi = haar(na, nb, seed);
        prop_assert!(figure_of_merit_sum(&psi, false).within_bound());
        prop_assert!(figure_of_merit_sum(&psi, true).within_bound());
        let six = qfi_six_vector(&psi);
        prop_assert!(six.max_violation(na, nb) < 1e-8);
    }

    #[test]
    fn moment_observable_respects_bound((na, nb) in split(), seed in any::<u64>()) {
        let psi = haar(na, nb, seed);
        let ops = SpaceOperators::new(psi.space());
        let m = MomentObservable::with_operators(&ops);
        prop_assert!(m.commutation_residual(&ops) < 1e-10);
        let bound = precision_bounds(&qfi_matrix_with(&psi, &ops, Axis::Y)).unwrap().bound_b1;
        if let Ok(epf) = error_propagation(&psi, m.matrix(), &ops.minus(Axis::Y)) {
            prop_assert!(epf <= bound * (1.0 + 1e-8) + 1e-9);
        }
    }

    #[test]
    fn outcome_distribution_ignores_homogeneous_field(
        (na, nb) in split(), seed in any::<u64>(), b0 in -3.0f64..3.0, b1 in -1.0f64..1.0
    ) {
        let psi = haar(na, nb, seed);
        let model = MeasurementModel::new(MomentObservable::new(psi.space()).matrix());
        let p = model.distribution(&evolve(&psi, EvolutionParams::new(0.0, b1, Axis::Y).unwrap())).unwrap();
        let q = model.distribution(&evolve(&psi, EvolutionParams::new(b0, b1, Axis::Y).unwrap())).unwrap();
        for (x, y) in p.iter().zip(&q) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn product_states_respect_separable_bounds((na, nb) in split(), seed in any::<u64>()) {
        let psi = random_product_state(TwoWellSpace::new(na, nb).unwrap(), &mut ChaCha8Rng::seed_from_u64(seed));
        let ops = SpaceOperators::new(psi.space());
        for axis in Axis::ALL {
            let q = qfi_matrix_with(&psi, &ops, axis);
            prop_assert!(q.fab.abs() < 1e-9);
            prop_assert!(q.fa <= (na * na) as f64 + 1e-9 && q.fb <= (nb * nb) as f64 + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn haar_states_lie_inside_polytope(pair in prop::sample::select(vec![(2u32, 2u32), (2, 4), (4, 4)]), seed in any::<u64>()) {
        let (na, nb) = pair;
        let six = qfi_six_vector(&haar(na, nb, seed));
        prop_assert!(six.max_violation(na, nb) < 1e-8);
        let poly = build_polytope(na, nb, six.plus).unwrap();
        prop_assert!(poly.contains(six.minus, 1e-8));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn optimal_measurement_bounded_by_qfi(pair in prop::sample::select(vec![(1u32, 1u32), (1, 3), (2, 2), (2, 4)]), seed in any::<u64>()) {
        let (na, nb) = pair;
        let psi = haar(na, nb, seed);
        let ops = SpaceOperators::new(psi.space());
        let basis = commutant_basis(psi.space(), false).unwrap();
        let sol = optimal_precision(&psi, &basis).unwrap();
        let bound = precision_bounds(&qfi_matrix_with(&psi, &ops, Axis::Y)).unwrap().bound_b1;
        prop_assert!(sol.precision <= bound * (1.0 + 1e-7) + 1e-8);
        prop_assert!(sol.precision >= -1e-9);
    }
}
