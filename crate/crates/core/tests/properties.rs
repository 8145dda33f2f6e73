use frustra::bounds::{analyze_ground, proof_step_check};
use frustra::entanglement::{geometric_measure, schmidt, Bipartition, EntanglementOptions, PureState};
use frustra::hamiltonian::{split, SplitPolicy};
use frustra::linalg::{kron_vec, ComplexMatrix, C64};
use frustra::random::{random_two_site_model, random_unit_vector, random_unitary, seeded_rng};
use frustra::saturation::{excess_decomposition, schmidt_splitting};
use proptest::prelude::*;

fn opts() -> EntanglementOptions {
    EntanglementOptions::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn splitting_reassembles(seed in any::<u64>(), d in 2usize..4) {
        let m = random_two_site_model(&mut seeded_rng(seed), d);
        let s = split(&m, &SplitPolicy::ByLocalityDegree).unwrap();
        let sum = &s.dense_local().unwrap() + &s.dense_interaction().unwrap();
        prop_assert!((&sum - &m.build_dense().unwrap()).max_abs() < 1e-12);
    }

    #[test]
    fn ground_report_is_consistent(seed in any::<u64>(), d in 2usize..4) {
        let m = random_two_site_model(&mut seeded_rng(seed), d);
        let s = split(&m, &SplitPolicy::ByLocalityDegree).unwrap();
        let r = analyze_ground(&s, &opts()).unwrap();
        prop_assert!(r.violations().is_empty(), "{:?}", r.violations());
        if let (Some(ef), Some(ratio)) = (r.ef_bound, r.ratio_bound) {
            prop_assert!(ef <= ratio + 1e-9);
            let p = proof_step_check(&s, &r, &opts()).unwrap();
            prop_assert!(p.all_ok(), "{p:?}");
        }
    }

    #[test]
    fn local_unitaries_preserve_entanglement(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let psi = PureState::new(vec![2, 3], random_unit_vector(&mut rng, 6)).unwrap();
        let u = random_unitary(&mut rng, 2).kron(&random_unitary(&mut rng, 3));
        let rotated = PureState::normalized(vec![2, 3], u.mul_vec(psi.amplitudes())).unwrap();
        let a = geometric_measure(&psi, &opts()).unwrap().value;
        let b = geometric_measure(&rotated, &opts()).unwrap().value;
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn schmidt_reconstructs(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let mut rng = seeded_rng(seed);
        let psi = PureState::new(vec![da, db], random_unit_vector(&mut rng, da * db)).unwrap();
        let sd = schmidt(&psi, &Bipartition::first_vs_rest(2).unwrap()).unwrap();
        let back = sd.reconstruct();
        let err: f64 = back.iter().zip(psi.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
        let total: f64 = sd.coefficients.iter().map(|c| c * c).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn excess_identity(seed in any::<u64>(), d in 2usize..4, gamma in 1e-3f64..1.0) {
        let m = random_two_site_model(&mut seeded_rng(seed), d);
        let s = schmidt_splitting(&m, gamma).unwrap();
        let e = excess_decomposition(&s.splitting, &opts()).unwrap();
        prop_assert!(e.identity_residual() < 1e-9);
        prop_assert!(e.excess() >= -1e-9);
    }
}

#[test]
fn product_states_have_zero_entanglement() {
    let mut rng = seeded_rng(2);
    for _ in 0..20 {
        let a = random_unit_vector(&mut rng, 2);
        let b = random_unit_vector(&mut rng, 2);
        let c = random_unit_vector(&mut rng, 2);
        let psi = PureState::new(vec![2, 2, 2], kron_vec(&kron_vec(&a, &b), &c)).unwrap();
        assert!(geometric_measure(&psi, &opts()).unwrap().value < 1e-10);
    }
}

#[test]
fn pure_product_hamiltonian_has_no_frustration() {
    // H = Z⊗I + I⊗Z split by locality: no interaction at all
    let z = ComplexMatrix::diag(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
    let h = &z.kron(&ComplexMatrix::identity(2)) + &ComplexMatrix::identity(2).kron(&z);
    let m = frustra::hamiltonian::SpinModel::from_dense("free", vec![2, 2], &h).unwrap();
    let r = analyze_ground(&split(&m, &SplitPolicy::ByLocalityDegree).unwrap(), &opts()).unwrap();
    assert!(r.e_f.abs() < 1e-12);
    assert!(r.entanglement < 1e-12);
    assert!(r.ef_bound.unwrap().abs() < 1e-12);
}
