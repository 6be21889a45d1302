//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::BTreeSet;

use monopole_corners::partitions::{all_chains_below, all_permutations, ChainFlag, SetPartition};
use monopole_corners::{GaussianRational, IntegerPartition};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Bell numbers `B_0..=B_n` from the Bell triangle.
pub fn bell_numbers(n: usize) -> Vec<u128> {
    let mut out = vec![1u128];
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        out.push(next[0]);
        row = next;
    }
    out
}

/// Integer partition counts `p(0..=n)` via Euler's pentagonal recurrence.
pub fn partition_counts(n: usize) -> Vec<i128> {
    let mut p = vec![0i128; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut total = 0i128;
        for j in 1.. {
            let j = j as i64;
            let g1 = (j * (3 * j - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            total += sign * p[m - g1];
            let g2 = (j * (3 * j + 1) / 2) as usize;
            if g2 <= m {
                total += sign * p[m - g2];
            }
        }
        p[m] = total;
    }
    p
}

/// Lexicographically least relabeling of a chain over all of `Σ_k`.
pub fn least_relabeling(c: &ChainFlag) -> Vec<Vec<u16>> {
    all_permutations(c.k())
        .map(|s| c.relabel(&s).unwrap().entries().iter().map(|p| p.rgs().to_vec()).collect::<Vec<_>>())
        .min()
        .unwrap()
}

/// Orbits of length-`d` chains in `M̄_k`, each named by its least relabeling.
pub fn brute_force_chain_orbits(k: usize, d: usize) -> BTreeSet<Vec<Vec<u16>>> {
    let chains = all_chains_below(&SetPartition::one_block(k), d).unwrap();
    chains.iter().map(least_relabeling).collect()
}

/// Number of orbits of pairs `λ < ν` with types `(a, b)`, by brute force.
pub fn brute_force_intersections(k: usize, a: &IntegerPartition, b: &IntegerPartition) -> usize {
    let perms: Vec<_> = all_permutations(k).collect();
    let chains = all_chains_below(&SetPartition::one_block(k), 2).unwrap();
    let reps: BTreeSet<ChainFlag> = chains
        .iter()
        .filter(|c| {
            let t = c.types();
            (&t[0] == a && &t[1] == b) || (&t[0] == b && &t[1] == a)
        })
        .map(|c| perms.iter().map(|s| c.relabel(s).unwrap()).min().unwrap())
        .collect();
    reps.len()
}

/// Strict chains `a_1 < ⋯ < a_d` of proper integer partitions of `k` under refinement.
pub fn integer_type_chains(k: usize, d: usize) -> usize {
    let types: Vec<IntegerPartition> = monopole_corners::partitions::integer_partitions(k)
        .into_iter()
        .filter(|t| t.len() >= 2)
        .collect();
    fn extend(types: &[IntegerPartition], last: Option<&IntegerPartition>, left: usize) -> usize {
        if left == 0 {
            return 1;
        }
        types
            .iter()
            .filter(|t| last.is_none_or(|l| l != *t && l.refines(t).unwrap()))
            .map(|t| extend(types, Some(t), left - 1))
            .sum()
    }
    extend(&types, None, d)
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn gq(re: i64, im: i64) -> GaussianRational {
    Complex::new(q(re), q(im))
}

fn trim(mut p: Vec<GaussianRational>) -> Vec<GaussianRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn rem(a: &[GaussianRational], b: &[GaussianRational]) -> Vec<GaussianRational> {
    let mut r = trim(a.to_vec());
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap().clone() / lead.clone();
        for (j, y) in b.iter().enumerate() {
            r[shift + j] = r[shift + j].clone() - c.clone() * y.clone();
        }
        r.pop();
        r = trim(r);
    }
    r
}

/// Degree of `gcd(a, b)` over `Q(i)`, by the Euclidean algorithm (low degree first).
pub fn gcd_degree(a: &[GaussianRational], b: &[GaussianRational]) -> usize {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    if x.is_empty() && y.is_empty() {
        return usize::MAX;
    }
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    x.len() - 1
}

/// `Π (z − β_j)`, low degree first, including the leading one.
pub fn monic_from_roots(roots: &[GaussianRational]) -> Vec<GaussianRational> {
    let mut p = vec![GaussianRational::one()];
    for b in roots {
        let mut next = vec![GaussianRational::zero(); p.len() + 1];
        for (e, c) in p.iter().enumerate() {
            next[e + 1] = next[e + 1].clone() + c.clone();
            next[e] = next[e].clone() - b.clone() * c.clone();
        }
        p = next;
    }
    p
}

/// A random strong-field input with `n` components spread over a cube whose
/// side is drawn from a few scales, so that merges happen at several rounds.
pub fn random_strong_field<R: rand::Rng>(rng: &mut R, n: usize) -> monopole_corners::StrongFieldInput {
    let side = [60.0, 150.0, 400.0, 1500.0][rng.gen_range(0..4)];
    let components = (0..n)
        .map(|_| monopole_corners::Component {
            center: [rng.gen_range(0.0..side), rng.gen_range(0.0..side), rng.gen_range(0.0..side)],
            diameter: rng.gen_range(0.0..25.0),
            charge: rng.gen_range(1..=3),
        })
        .collect();
    monopole_corners::StrongFieldInput::new(components, rng.gen_range(0.5..3.0)).unwrap()
}

/// The polynomial of degree `< n` taking value `values[j]` at `nodes[j]` (Lagrange form).
pub fn interpolate(nodes: &[GaussianRational], values: &[GaussianRational]) -> Vec<GaussianRational> {
    let n = nodes.len();
    let mut out = vec![GaussianRational::zero(); n];
    for j in 0..n {
        let others: Vec<GaussianRational> = (0..n).filter(|&i| i != j).map(|i| nodes[i].clone()).collect();
        let basis = monic_from_roots(&others);
        let denom = others.iter().fold(GaussianRational::one(), |acc, b| acc * (nodes[j].clone() - b.clone()));
        let scale = values[j].clone() / denom;
        for (e, c) in basis.into_iter().enumerate() {
            out[e] = out[e].clone() + scale.clone() * c;
        }
    }
    out
}

/// A small random Gaussian rational with numerators in `-r..=r` and denominators in `1..=3`.
pub fn random_gaussian<R: rand::Rng>(rng: &mut R, r: i64) -> GaussianRational {
    let part = |rng: &mut R| BigRational::new(rng.gen_range(-r..=r).into(), rng.gen_range(1..=3i64).into());
    Complex::new(part(rng), part(rng))
}

/// A strongly centred map: distinct roots summing to zero and `φ` interpolating
/// values whose product is one.
pub fn random_strongly_centred<R: rand::Rng>(rng: &mut R, k: usize) -> monopole_corners::ExactRationalMap {
    loop {
        let mut roots: Vec<GaussianRational> = (0..k - 1).map(|_| random_gaussian(rng, 4)).collect();
        let sum = roots.iter().fold(GaussianRational::zero(), |a, b| a + b.clone());
        roots.push(-sum);
        let distinct = (0..k).all(|i| (i + 1..k).all(|j| roots[i] != roots[j]));
        if !distinct {
            continue;
        }
        let mut values: Vec<GaussianRational> = Vec::new();
        while values.len() + 1 < k {
            let v = random_gaussian(rng, 3);
            if !v.is_zero() {
                values.push(v);
            }
        }
        let product = values.iter().fold(GaussianRational::one(), |a, b| a * b.clone());
        values.push(GaussianRational::one() / product);
        let phi = interpolate(&roots, &values);
        return monopole_corners::RationalMapPair::from_roots(phi, &roots).unwrap();
    }
}
