mod common;

use std::collections::BTreeSet;

use monopole_corners::partitions::{
    all_partitions, chains_mod_symmetric_group, factorial, flag_symmetry_orders, integer_partitions, join, meet,
    orbit_canonical, refines, symmetry_orders, type_of, Permutation, SetPartition,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn bell_numbers_match_triangle() {
    let bell = common::bell_numbers(10);
    for k in 1..=10 {
        assert_eq!(all_partitions(k).unwrap().len() as u128, bell[k], "k={k}");
    }
}

#[test]
fn orbit_count_is_partition_count() {
    let p = common::partition_counts(10);
    for k in 1..=10 {
        let orbits: BTreeSet<SetPartition> = all_partitions(k).unwrap().iter().map(orbit_canonical).collect();
        assert_eq!(orbits.len() as i128, p[k], "k={k}");
        assert_eq!(integer_partitions(k).len() as i128, p[k]);
    }
}

#[test]
fn refinement_is_a_partial_order() {
    for k in 1..=5 {
        let all = all_partitions(k).unwrap();
        for a in &all {
            assert!(refines(a, a).unwrap());
            for b in &all {
                let ab = refines(a, b).unwrap();
                if ab && refines(b, a).unwrap() {
                    assert_eq!(a, b);
                }
                if !ab {
                    continue;
                }
                for c in &all {
                    if refines(b, c).unwrap() {
                        assert!(refines(a, c).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn lattice_laws() {
    for k in 1..=4 {
        let all = all_partitions(k).unwrap();
        for a in &all {
            for b in &all {
                let j = join(a, b).unwrap();
                let m = meet(a, b).unwrap();
                assert_eq!(join(a, &m).unwrap(), *a);
                assert_eq!(meet(a, &j).unwrap(), *a);
                assert!(refines(a, &j).unwrap() && refines(b, &j).unwrap());
                assert!(refines(&m, a).unwrap() && refines(&m, b).unwrap());
                // Join is the least upper bound.
                for c in &all {
                    if refines(a, c).unwrap() && refines(b, c).unwrap() {
                        assert!(refines(&j, c).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn symmetry_group_exact_sequence() {
    for k in 1..=7 {
        for lambda in all_partitions(k).unwrap() {
            let o = symmetry_orders(&lambda);
            assert_eq!(o.order_sigma_lambda, o.order_stab * o.order_sym_lambda);
            assert_eq!(o.order_sigma_lambda * orbit_size(&lambda), factorial(k));
        }
    }
}

fn orbit_size(lambda: &SetPartition) -> u128 {
    let k = lambda.k();
    let t = type_of(lambda);
    all_partitions(k).unwrap().iter().filter(|p| type_of(p) == t).count() as u128
}

#[test]
fn flag_orders_cross_checked() {
    // The library cross-checks against enumeration internally for these sizes.
    for k in 2..=6 {
        let all = all_partitions(k).unwrap();
        for lambda in &all {
            for nu in &all {
                if lambda != nu && refines(lambda, nu).unwrap() {
                    let o = flag_symmetry_orders(lambda, nu).unwrap();
                    assert_eq!(o.order_sym % o.order_sym0, 0);
                }
            }
        }
    }
    let l: SetPartition = "{{1},{2,3}}".parse().unwrap();
    assert_eq!(flag_symmetry_orders(&l, &SetPartition::one_block(3)).unwrap().order_sym0, 1);
}

#[test]
fn chain_orbits_match_brute_force() {
    for k in 2..=5 {
        for d in 1..k {
            let fast = chains_mod_symmetric_group(k, d).unwrap();
            let slow = common::brute_force_chain_orbits(k, d);
            assert_eq!(fast.len(), slow.len(), "k={k} d={d}");
            let named: BTreeSet<Vec<Vec<u16>>> = fast.iter().map(common::least_relabeling).collect();
            assert_eq!(named, slow, "orbits differ for k={k} d={d}");
        }
    }
}

#[test]
fn orbit_canonical_is_invariant_under_random_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 1..=9 {
        for lambda in all_partitions(k).unwrap().iter().step_by(7) {
            let mut images: Vec<usize> = (0..k).collect();
            images.shuffle(&mut rng);
            let sigma = Permutation::from_images(images).unwrap();
            let moved = lambda.relabel(&sigma).unwrap();
            assert_eq!(type_of(&moved), type_of(lambda));
            assert_eq!(orbit_canonical(&moved), orbit_canonical(lambda));
            assert_eq!(orbit_canonical(&orbit_canonical(lambda)), orbit_canonical(lambda));
        }
    }
}

fn arb_partition() -> impl Strategy<Value = SetPartition> {
    (1usize..=9).prop_flat_map(|k| prop::collection::vec(0u16..k as u16, k)).prop_map(|l| SetPartition::from_labels(&l))
}

proptest! {
    #[test]
    fn text_forms_round_trip(p in arb_partition()) {
        let rgs: SetPartition = p.to_rgs_string().parse().unwrap();
        let blocks: SetPartition = p.to_string().parse().unwrap();
        prop_assert_eq!(&rgs, &p);
        prop_assert_eq!(&blocks, &p);
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<SetPartition>(&json).unwrap(), p);
    }

    #[test]
    fn join_and_meet_bound(labels in prop::collection::vec((0u16..6, 0u16..6), 1..=7)) {
        let a = SetPartition::from_labels(&labels.iter().map(|x| x.0).collect::<Vec<_>>());
        let b = SetPartition::from_labels(&labels.iter().map(|x| x.1).collect::<Vec<_>>());
        let j = join(&a, &b).unwrap();
        let m = meet(&a, &b).unwrap();
        prop_assert!(refines(&a, &j).unwrap() && refines(&b, &j).unwrap());
        prop_assert!(refines(&m, &a).unwrap() && refines(&m, &b).unwrap());
        prop_assert!(j.num_blocks() <= a.num_blocks().min(b.num_blocks()));
        prop_assert!(m.num_blocks() >= a.num_blocks().max(b.num_blocks()));
    }
}
