use std::collections::BTreeMap;

use monopole_corners::gibbons_manton::{
    block_action, form_by_summation, restriction_splits, smith_invariants, sym_action, torus_group_structure,
    weight_system, ChernWeightSystem,
};
use monopole_corners::partitions::{all_partitions, all_permutations, strictly_refines, Permutation};
use monopole_corners::{IntegerPartition, SetPartition};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// For each partition, the indices of its strict refinements.
fn strict_refinements(all: &[SetPartition]) -> Vec<Vec<usize>> {
    all.iter()
        .map(|nu| (0..all.len()).filter(|&i| strictly_refines(&all[i], nu).unwrap()).collect())
        .collect()
}

#[test]
fn splitting_holds_for_every_chain() {
    for k in 3..=6 {
        let all = all_partitions(k).unwrap();
        let below = strict_refinements(&all);
        let mut checked = 0;
        for (n, nu) in all.iter().enumerate() {
            for &m in &below[n] {
                for &l in &below[m] {
                    let s = restriction_splits(&all[l], &all[m], nu).unwrap();
                    assert!(s.holds(), "{} < {} < {}", all[l], all[m], nu);
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn totals_are_additive() {
    let all = all_partitions(5).unwrap();
    let below = strict_refinements(&all);
    for (n, nu) in all.iter().enumerate() {
        for &m in &below[n] {
            for &l in &below[m] {
                let (lambda, mu) = (&all[l], &all[m]);
                let full = weight_system(lambda, nu).unwrap();
                let inner = weight_system(lambda, mu).unwrap();
                let outer = weight_system(mu, nu).unwrap();
                for i in 0..5 {
                    let t = |w: &ChernWeightSystem| w.form_at(i).values().sum::<u64>();
                    assert_eq!(t(&full), t(&inner) + t(&outer));
                    let expected = 2 * (nu.block_sizes()[nu.block_of(i)] - lambda.block_sizes()[lambda.block_of(i)]);
                    assert_eq!(t(&full) as usize, expected);
                }
            }
        }
    }
}

#[test]
fn weights_are_block_level() {
    for k in 2..=6 {
        let all = all_partitions(k).unwrap();
        let below = strict_refinements(&all);
        for (n, nu) in all.iter().enumerate() {
            for &l in &below[n] {
                let lambda = &all[l];
                let w = weight_system(lambda, nu).unwrap();
                assert_eq!(w.rank(), lambda.num_blocks());
                for i in 0..k {
                    assert_eq!(&form_by_summation(lambda, nu, i).unwrap(), w.form_at(i));
                    for (&c, _) in w.form_at(i) {
                        assert_ne!(c, lambda.block_of(i));
                        assert!(nu.same_block(i, lambda.blocks()[c][0]));
                    }
                }
            }
        }
    }
}

fn flag_preserving(lambda: &SetPartition, nu: &SetPartition) -> Vec<Permutation> {
    all_permutations(lambda.k())
        .filter(|s| &lambda.relabel(s).unwrap() == lambda && &nu.relabel(s).unwrap() == nu)
        .collect()
}

#[test]
fn symmetric_action_is_a_group_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let flags = [("0011", "0000"), ("001233", "000111"), ("012345", "000111"), ("001234", "000000"), ("0112", "0111")];
    for (l, n) in flags {
        let (lambda, nu): (SetPartition, SetPartition) = (l.parse().unwrap(), n.parse().unwrap());
        let w = weight_system(&lambda, &nu).unwrap();
        let group = flag_preserving(&lambda, &nu);
        let id = Permutation::identity(lambda.k());
        assert!(block_action(&id, &w).unwrap().is_identity());
        for _ in 0..50 {
            let s = &group[rng.gen_range(0..group.len())];
            let t = &group[rng.gen_range(0..group.len())];
            let st = s.compose(t);
            assert_eq!(
                block_action(&st, &w).unwrap(),
                block_action(s, &w).unwrap().compose(&block_action(t, &w).unwrap())
            );
            let once = sym_action(&st, &w).unwrap();
            assert_eq!(once, sym_action(s, &sym_action(t, &w).unwrap()).unwrap());
            assert_eq!(once, w);
        }
    }
}

#[test]
fn swapping_blocks() {
    let lambda: SetPartition = "{{1,2},{3,4}}".parse().unwrap();
    let w = weight_system(&lambda, &SetPartition::one_block(4)).unwrap();
    let sigma = Permutation::from_cycles(4, &[vec![1, 3], vec![2, 4]]).unwrap();
    assert_eq!(block_action(&sigma, &w).unwrap().images(), &[1, 0]);
    assert_eq!(w.form_at(0), &BTreeMap::from([(1, 4)]));
    assert_eq!(w.form_at(2), &BTreeMap::from([(0, 4)]));
}

#[test]
fn torus_groups_match_gcd() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let parts: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=24)).collect();
        let a = IntegerPartition::new(parts.clone()).unwrap();
        let g = torus_group_structure(&a).unwrap();
        let gcd = parts.iter().fold(0usize, |g, &x| g.gcd(&x));
        assert_eq!(g.finite_order as usize, gcd);
        assert_eq!(g.torus_rank, n - 1);
        assert!(parts.iter().all(|&x| x % g.finite_order as usize == 0));
    }
    for k in 1..=10 {
        assert_eq!(torus_group_structure(&IntegerPartition::ones(k)).unwrap().finite_order, 1);
    }
}

#[test]
fn smith_form_determines_group() {
    // T^3 → T^2 with exponents [[2,0,0],[0,3,0]]: kernel T^1 × Z_1 × Z_6 in invariant form.
    assert_eq!(smith_invariants(&[vec![2, 0, 0], vec![0, 3, 0]]), vec![1, 6]);
    assert_eq!(smith_invariants(&[vec![4, 6], vec![6, 9]]), vec![1]);
}
