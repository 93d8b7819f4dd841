use fqlab::hamiltonian::{evolve, CoulombKernel, EvolutionPlan, NuclearConfig, Nucleus};
use fqlab::linalg::{frobenius, random_isometry, random_unitary, unitarity_deviation, CMatrix};
use fqlab::rng::stream;
use fqlab::shadows::{clifford_unitary, sample_clifford_id, single_shot_estimate, RestrictedIndexSet, ShadowSample};
use fqlab::stateprep::{prepare_slater, projector_distance};
use fqlab::{FirstQuantizedState, GridSpec};
use proptest::prelude::*;

fn slater(n_points: usize, eta: usize, seed: u64) -> FirstQuantizedState {
    let grid = GridSpec::new(1, n_points, n_points as f64).unwrap();
    let c = random_isometry(n_points, eta, &mut stream(seed, "prop-slater", 0));
    FirstQuantizedState::slater_from_coeffs(&c, &grid).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn slater_states_are_antisymmetric_and_normalized(seed in any::<u64>(), p in 2usize..6, eta in 1usize..4) {
        prop_assume!(eta <= p);
        let psi = slater(p, eta, seed);
        prop_assert!(psi.is_antisymmetric(1e-12));
        prop_assert!((psi.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn split_operator_preserves_norm_and_symmetry(seed in any::<u64>(), steps in 1usize..6, order in prop::sample::select(vec![1u32, 2, 4])) {
        let psi = slater(4, 2, seed);
        let nuclei = NuclearConfig::new(vec![Nucleus { charge: 1, position: [0.5, 0.0, 0.0] }]).unwrap();
        let out = evolve(&psi, &EvolutionPlan::new(0.7, steps, order).unwrap(), &nuclei, CoulombKernel::Bare).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
        prop_assert!(out.is_antisymmetric(1e-10));
    }

    #[test]
    fn sampled_cliffords_are_unitary(seed in any::<u64>(), n in 1usize..4) {
        let id = sample_clifford_id(n, &mut stream(seed, "prop-clifford", 0));
        prop_assert!(unitarity_deviation(&clifford_unitary(id, n)) < 1e-10);
    }

    #[test]
    fn single_shot_estimates_are_hermitian(seed in any::<u64>(), i in 0usize..4, j in 0usize..4, b0 in 0usize..4, b1 in 0usize..4, b2 in 0usize..4) {
        let mut rng = stream(seed, "prop-herm", 0);
        let ids = (0..3).map(|_| sample_clifford_id(2, &mut rng)).collect();
        let s = ShadowSample::new(2, ids, vec![b0, b1, b2]).unwrap();
        let set = RestrictedIndexSet::new(3, 1).unwrap();
        let a = single_shot_estimate(&s, &set, &[i], &[j]).unwrap();
        let b = single_shot_estimate(&s, &set, &[j], &[i]).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-10);
    }

    #[test]
    fn estimator_is_equivariant_under_register_relabelling(seed in any::<u64>(), k in 1usize..3, shift in 1usize..3, i in 0usize..2, j in 0usize..2) {
        let eta = 3;
        let mut rng = stream(seed, "prop-relabel", 0);
        let ids: Vec<_> = (0..eta).map(|_| sample_clifford_id(1, &mut rng)).collect();
        let outcomes: Vec<usize> = (0..eta).map(|r| (seed as usize >> r) & 1).collect();
        let perm: Vec<usize> = (0..eta).map(|r| (r + shift) % eta).collect();
        let mut moved_ids = vec![0; eta];
        let mut moved_outcomes = vec![0; eta];
        for r in 0..eta {
            moved_ids[perm[r]] = ids[r];
            moved_outcomes[perm[r]] = outcomes[r];
        }
        let original = ShadowSample::new(1, ids, outcomes).unwrap();
        let moved = ShadowSample::new(1, moved_ids, moved_outcomes).unwrap();
        let set = RestrictedIndexSet::new(eta, k).unwrap();
        let (ii, jj) = (vec![i; k], vec![j; k]);
        let a = single_shot_estimate(&original, &set, &ii, &jj).unwrap();
        let b = single_shot_estimate(&moved, &set.relabelled(&perm).unwrap(), &ii, &jj).unwrap();
        prop_assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn preparation_is_gauge_invariant(seed in any::<u64>()) {
        let grid = GridSpec::new(1, 4, 4.0).unwrap();
        let c = random_isometry(4, 2, &mut stream(seed, "prop-gauge", 0));
        let g: CMatrix = random_unitary(2, &mut stream(seed, "prop-gauge", 1));
        let rotated = &c * &g;
        prop_assert!(projector_distance(&c, &rotated) < 1e-10);
        let a = prepare_slater(&c, &grid).unwrap();
        let b = prepare_slater(&rotated, &grid).unwrap();
        prop_assert!((a.fidelity_modulus(&b) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn random_unitaries_are_unitary(seed in any::<u64>(), dim in 1usize..6) {
        let u = random_unitary(dim, &mut stream(seed, "prop-unitary", 0));
        prop_assert!(unitarity_deviation(&u) < 1e-10);
        prop_assert!(frobenius(&u) > 0.0);
    }
}
