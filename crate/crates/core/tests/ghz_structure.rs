//! Structure of the tripartite GHZ count on uniform states.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stabent::entanglement::{ghz_count, local_log_rank};
use stabent::gf2::{subspace_intersection_dim, subspace_sum_dim};
use stabent::{oracle, Partition, StabilizerGroup};

fn all_reductions_maximal(s: &StabilizerGroup, p: &Partition) -> bool {
    p.parties()
        .iter()
        .all(|party| local_log_rank(s, &party.qubits).unwrap() == party.qubits.len())
}

// With equal sizes n and every reduction maximal, the state splits into e
// EPR pairs per pair of parties and g GHZ states with 2e + g = n.
#[test]
fn ghz_count_parity_when_reductions_are_maximal() {
    for n in 2..=6 {
        let p = Partition::from_sizes(&[n, n, n]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let mut maximal = 0;
        for _ in 0..300 {
            let s = StabilizerGroup::sample_uniform(3 * n, 0, &mut rng);
            if all_reductions_maximal(&s, &p) {
                maximal += 1;
                assert_eq!(ghz_count(&s, &p).unwrap() % 2, n % 2, "n = {n}");
            }
        }
        assert!(maximal > 100, "n = {n}: only {maximal} maximal samples");
    }
}

// The exact count exceeds 3n/2^n at these sizes; enumeration agrees.
#[test]
fn mean_ghz_count_matches_enumeration_above_closed_form() {
    for (n, trials) in [(4usize, 300usize), (5, 120)] {
        let p = Partition::from_sizes(&[n, n, n]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(40 + n as u64);
        let mut hist = BTreeMap::new();
        let mut total = 0;
        for _ in 0..trials {
            let s = StabilizerGroup::sample_uniform(3 * n, 0, &mut rng);
            let d = ghz_count(&s, &p).unwrap();
            assert_eq!(d, oracle::brute_force_ghz_count(&s, &p).unwrap());
            *hist.entry(d).or_insert(0) += 1;
            total += d;
        }
        let mean = total as f64 / trials as f64;
        let closed_form = 3.0 * n as f64 / 2f64.powi(n as i32);
        assert!(mean > closed_form + 0.2, "n = {n}: mean {mean}, hist {hist:?}");
    }
}

#[test]
fn three_term_inclusion_exclusion_is_an_upper_bound() {
    let p = Partition::from_sizes(&[3, 3, 3]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut strict = 0;
    for _ in 0..300 {
        let s = StabilizerGroup::sample_uniform(9, 0, &mut rng);
        let subs: Vec<_> = p
            .parties()
            .iter()
            .map(|party| s.subgroup_trivial_on(&party.qubits).unwrap())
            .collect();
        let sum = subspace_sum_dim(&[&subs[0], &subs[1], &subs[2]]);
        let pairwise = subspace_intersection_dim(&subs[0], &subs[1])
            + subspace_intersection_dim(&subs[0], &subs[2])
            + subspace_intersection_dim(&subs[1], &subs[2]);
        let naive = subs.iter().map(|m| m.nrows()).sum::<usize>() - pairwise;
        assert!(sum <= naive);
        assert_eq!(sum, s.local_subgroup_dim(&p).unwrap());
        assert!(subs.iter().map(|m| m.nrows()).sum::<usize>() >= 9);
        strict += usize::from(sum < naive);
    }
    assert!(strict > 0);
}

#[test]
fn ghz3_breaks_inclusion_exclusion_equality() {
    let s = StabilizerGroup::from_strs(&["XXX", "ZZI", "IZZ"]).unwrap();
    let p = Partition::from_sizes(&[1, 1, 1]).unwrap();
    let subs: Vec<_> = (0..3).map(|q| s.subgroup_trivial_on(&[q]).unwrap()).collect();
    // Each S_α̂ is one-dimensional and the pairwise intersections vanish, so
    // the three-term formula gives 3 while the span has dimension 2.
    assert!(subs.iter().all(|m| m.nrows() == 1));
    assert_eq!(subspace_intersection_dim(&subs[0], &subs[1]), 0);
    assert_eq!(subspace_sum_dim(&[&subs[0], &subs[1], &subs[2]]), 2);
    assert_eq!(ghz_count(&s, &p).unwrap(), 1);
}
