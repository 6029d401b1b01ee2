//! Cross-module invariants on random instances.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stabent::entanglement::{
    entanglement_report, ghz_count, local_log_rank, mixed_bound_details, pure_bipartite_entanglement,
};
use stabent::{oracle, CliffordElement, Partition, StabilizerGroup};

/// Random Clifford acting only on `qubits`, built from gates.
fn local_clifford(n: usize, qubits: &[usize], rng: &mut ChaCha8Rng) -> CliffordElement {
    let mut c = CliffordElement::identity(n);
    for _ in 0..4 * qubits.len() + 2 {
        let q = qubits[rng.gen_range(0..qubits.len())];
        let g = match rng.gen_range(0..3) {
            0 => CliffordElement::hadamard(n, q),
            1 => CliffordElement::phase(n, q),
            _ if qubits.len() > 1 => {
                let t = loop {
                    let t = qubits[rng.gen_range(0..qubits.len())];
                    if t != q {
                        break t;
                    }
                };
                CliffordElement::cnot(n, q, t)
            }
            _ => CliffordElement::hadamard(n, q),
        };
        c = g.compose(&c).unwrap();
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_groups_are_valid(seed in any::<u64>(), n in 1usize..40, k_frac in 0.0f64..1.0) {
        let k = (k_frac * n as f64) as usize;
        let s = StabilizerGroup::sample_uniform(n, k, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(s.is_valid());
        prop_assert_eq!(s.dim(), n - k);
    }

    #[test]
    fn epr_count_symmetric_and_bounded(seed in any::<u64>(), na in 1usize..20, nb in 1usize..20) {
        let s = StabilizerGroup::sample_uniform(na + nb, 0, &mut ChaCha8Rng::seed_from_u64(seed));
        let ab = Partition::from_sizes(&[na, nb]).unwrap();
        let ba = Partition::from_qubit_sets(na + nb, &[(na..na + nb).collect(), (0..na).collect()]).unwrap();
        let e = pure_bipartite_entanglement(&s, &ab).unwrap();
        prop_assert_eq!(e, pure_bipartite_entanglement(&s, &ba).unwrap());
        prop_assert!(e <= na.min(nb));
        // For pure states both reductions have rank 2^E.
        prop_assert_eq!(local_log_rank(&s, &ab.party(0).qubits).unwrap(), e);
        prop_assert_eq!(local_log_rank(&s, &ab.party(1).qubits).unwrap(), e);
    }

    #[test]
    fn counts_invariant_under_local_cliffords(seed in any::<u64>(), sizes in prop::collection::vec(1usize..5, 2..5)) {
        let n: usize = sizes.iter().sum();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Partition::from_sizes(&sizes).unwrap();
        let s = StabilizerGroup::sample_uniform(n, 0, &mut rng);
        let mut t = s.clone();
        for party in p.parties() {
            t = t.conjugated_by(&local_clifford(n, &party.qubits, &mut rng)).unwrap();
        }
        prop_assert!(t.is_valid());
        let (r1, r2) = (entanglement_report(&s, &p).unwrap(), entanglement_report(&t, &p).unwrap());
        prop_assert_eq!(r1, r2);
    }

    #[test]
    fn ghz_count_at_most_sum_of_cuts(seed in any::<u64>(), a in 1usize..6, b in 1usize..6, c in 1usize..6) {
        let s = StabilizerGroup::sample_uniform(a + b + c, 0, &mut ChaCha8Rng::seed_from_u64(seed));
        let p = Partition::from_sizes(&[a, b, c]).unwrap();
        let d = ghz_count(&s, &p).unwrap();
        prop_assert!(d <= a.min(b).min(c));
        for i in 0..3 {
            let cut = Partition::from_qubit_sets(a + b + c, &[p.party(i).qubits.clone(), p.complement(i)]).unwrap();
            prop_assert!(d <= pure_bipartite_entanglement(&s, &cut).unwrap());
        }
    }

    #[test]
    fn mixed_bound_within_range(seed in any::<u64>(), na in 1usize..10, nb in 1usize..10, k_frac in 0.0f64..1.0) {
        let n = na + nb;
        let k = (k_frac * n as f64) as usize;
        let s = StabilizerGroup::sample_uniform(n, k, &mut ChaCha8Rng::seed_from_u64(seed));
        let p = Partition::from_sizes(&[na, nb]).unwrap();
        let m = mixed_bound_details(&s, &p).unwrap();
        prop_assert!(m.clamped <= na.min(nb));
        prop_assert!(m.raw() <= na.min(nb) as f64);
        if k == 0 {
            prop_assert_eq!(m.clamped, pure_bipartite_entanglement(&s, &p).unwrap());
        }
    }

    #[test]
    fn text_formats_roundtrip(seed in any::<u64>(), n in 1usize..12, k in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = StabilizerGroup::sample_uniform(n, k.min(n), &mut rng);
        let back = StabilizerGroup::parse_text(&s.to_text()).unwrap();
        prop_assert_eq!(back.generators(), s.generators());
        let c = CliffordElement::sample_uniform(n, &mut rng);
        let back = CliffordElement::parse_text(&c.to_text()).unwrap();
        prop_assert_eq!(back.distance(&c).unwrap(), 0);
        prop_assert_eq!(back.images(), c.images());
    }
}

#[test]
fn clifford_image_of_zero_state_matches_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 1..10 {
        let c = CliffordElement::sample_uniform(n, &mut rng);
        let direct = c.stabilizer_of_zero_state();
        let conj = StabilizerGroup::zero_state(n).conjugated_by(&c).unwrap();
        assert!(direct.same_group_as(&conj));
    }
}

#[test]
fn concentration_and_pure_ensembles_agree() {
    // Uniform Cliffords applied to |0…0⟩ give uniform stabilizer states, so
    // both runs estimate the same mean.
    use stabent::experiments::{run, ExperimentConfig, ExperimentKind};
    let mut a = ExperimentConfig::new(ExperimentKind::PureBipartite);
    a.na = 3;
    a.nb = 4;
    a.trials = 4000;
    a.seed = 21;
    let mut b = a.clone();
    b.kind = ExperimentKind::Concentration;
    let (ra, rb) = (run(&a).unwrap(), run(&b).unwrap());
    let se = (ra.standard_error.powi(2) + rb.standard_error.powi(2)).sqrt();
    assert!((ra.empirical_mean - rb.empirical_mean).abs() < 3.0 * se);
}

#[test]
fn purification_reproduces_reductions_densely() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let n = rng.gen_range(2..=5);
        let k = rng.gen_range(1..=n);
        let s = StabilizerGroup::sample_uniform(n, k, &mut rng);
        let (pure, extra) = s.purify().unwrap();
        assert_eq!(extra, k);
        assert!(pure.is_pure());
        let keep: Vec<usize> = (0..n).collect();
        let want = oracle::density_matrix(&s).unwrap();
        let got = oracle::reduced_density_matrix(&pure, &keep).unwrap();
        assert!((want - got).norm() < 1e-9);
    }
}
