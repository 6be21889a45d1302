//! Acceptance suite: one PASS/FAIL line per criterion, with timings.
//! Runs without the libtest harness so the lines are always printed.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use monopole_corners::clusters::{boundary_coords, exact_replay, taubes_cluster};
use monopole_corners::faces::{corner_atlas, hypersurface_atlas, intersection_components};
use monopole_corners::gibbons_manton::{restriction_splits, torus_group_structure};
use monopole_corners::partitions::{all_partitions, strictly_refines};
use monopole_corners::ratmaps::{deck_transform_power, Conjugate};
use monopole_corners::{ChainFlag, Configuration, IntegerPartition, RationalMapPair};
use num_integer::Integer;
use num_traits::{Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn k2_atlas() -> Check {
    let h = hypersurface_atlas(2).map_err(|e| e.to_string())?;
    ensure(h.len() == 1, || format!("{} hypersurfaces", h.len()))?;
    ensure(h[0].base_dims == [2] && h[0].fiber_dim == 2 && h[0].total_dim == 4, || format!("{:?}", h[0]))
}

fn k3_atlas() -> Check {
    let h = hypersurface_atlas(3).map_err(|e| e.to_string())?.len();
    let c = corner_atlas(3, 2).map_err(|e| e.to_string())?.len();
    ensure(h == 2 && c == 1, || format!("{h} hypersurfaces, {c} corners"))
}

fn k4_atlas() -> Check {
    let counts: Vec<usize> = (1..=6).map(|d| corner_atlas(4, d).map(|a| a.len())).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure(counts == [4, 5, 2, 0, 0, 0], || format!("counts by codimension {counts:?}"))
}

fn k5_disconnected_intersection() -> Check {
    let a = IntegerPartition::new(vec![1, 1, 1, 2]).unwrap();
    let b = IntegerPartition::new(vec![2, 3]).unwrap();
    let n = intersection_components(5, &a, &b).map_err(|e| e.to_string())?;
    let oracle = common::brute_force_intersections(5, &a, &b);
    ensure(n == 2 && oracle == 2, || format!("library {n}, oracle {oracle}, frozen 2"))
}

fn dimension_identities() -> Check {
    for k in 2..=7 {
        for d in 1..k {
            for f in corner_atlas(k, d).map_err(|e| e.to_string())? {
                ensure(f.total_dim == 4 * k - 3 - d, || format!("k={k} d={d}: {f:?}"))?;
                ensure(f.total_dim == f.fiber_dim + f.base_dims.iter().sum::<usize>(), || format!("{f:?}"))?;
                if d == 1 {
                    let r = f.torus_rank;
                    ensure(4 * k - 3 * r + 3 * (r - 1) - 1 == 4 * k - 4, || format!("identity fails at r={r}"))?;
                }
            }
        }
    }
    Ok(())
}

fn hypersurface_counts() -> Check {
    let p = common::partition_counts(8);
    for k in 2..=8 {
        let n = hypersurface_atlas(k).map_err(|e| e.to_string())?.len() as i128;
        ensure(n == p[k] - 1, || format!("k={k}: {n} vs p(k)-1 = {}", p[k] - 1))?;
    }
    Ok(())
}

fn gm_splitting() -> Check {
    let mut chains = 0usize;
    for k in 1..=6 {
        let all = all_partitions(k).map_err(|e| e.to_string())?;
        let below: Vec<Vec<usize>> = all
            .iter()
            .map(|nu| (0..all.len()).filter(|&i| strictly_refines(&all[i], nu).unwrap()).collect())
            .collect();
        for (n, nu) in all.iter().enumerate() {
            for &m in &below[n] {
                for &l in &below[m] {
                    let s = restriction_splits(&all[l], &all[m], nu).map_err(|e| e.to_string())?;
                    ensure(s.holds(), || format!("{} < {} < {}", all[l], all[m], nu))?;
                    chains += 1;
                }
            }
        }
    }
    ensure(chains > 0, || "no chains".into())
}

fn cluster_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for run in 0..1000 {
        let n = rng.gen_range(1..=10);
        let input = common::random_strong_field(&mut rng, n);
        let dec = taubes_cluster(&input).map_err(|e| e.to_string())?;
        ensure(dec.rounds < n, || format!("run {run}: {} rounds for {n} components", dec.rounds))?;
        let problems = dec.check_invariants(input.total_charge());
        ensure(problems.is_empty(), || format!("run {run}: {problems:?}"))?;
        if dec.rounds > 0 {
            let disjoint_gap = dec.threshold - 2.0 * dec.radius;
            let d = dec.history.last().unwrap().d;
            ensure((disjoint_gap - (0.5 * d + 1.0)).abs() <= 1e-9 * dec.threshold, || format!("run {run}: gap {disjoint_gap}"))?;
        }
        let cert = exact_replay(&input).map_err(|e| e.to_string())?;
        ensure(cert.holds(), || format!("run {run}: {cert:?}"))?;
    }
    Ok(())
}

fn resultant_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 1..=5 {
        for _ in 0..100 {
            let phi = (0..k).map(|_| common::random_gaussian(&mut rng, 5)).collect();
            let psi = (0..k).map(|_| common::random_gaussian(&mut rng, 5)).collect();
            let m = RationalMapPair::new(phi, psi).map_err(|e| e.to_string())?;
            let lambda = common::random_gaussian(&mut rng, 7);
            let lhs = m.scale_phi(&lambda).resultant();
            ensure(lhs == lambda.pow(k as u32) * m.resultant(), || format!("homogeneity fails for {m:?}"))?;
        }
    }
    let grid = [common::gq(-1, 0), common::gq(0, 0), common::gq(1, 0)];
    for k in 1..=3 {
        let n = 2 * k;
        for mut code in 0..grid.len().pow(n as u32) {
            let c: Vec<_> = (0..n)
                .map(|_| {
                    let x = grid[code % 3].clone();
                    code /= 3;
                    x
                })
                .collect();
            let m = RationalMapPair::new(c[..k].to_vec(), c[k..].to_vec()).unwrap();
            let shared = common::gcd_degree(m.phi(), &m.psi_full()) > 0;
            ensure(m.resultant().is_zero() == shared, || format!("gcd oracle disagrees on {m:?}"))?;
        }
    }
    Ok(())
}

fn deck_action() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for k in 1..=4 {
        let m = common::random_strongly_centred(&mut rng, k);
        ensure(m.is_strongly_centred(), || "sample not strongly centred".into())?;
        let mut orbit = Vec::new();
        for j in 0..k {
            let image = deck_transform_power(j, &m);
            ensure(image.is_strongly_centred(), || format!("k={k} j={j} image not strongly centred"))?;
            if !orbit.contains(&image) {
                orbit.push(image);
            }
        }
        ensure(deck_transform_power(k, &m) == m.to_cyclotomic(), || format!("k={k}: ζ^k acts nontrivially"))?;
        ensure(k % orbit.len() == 0, || format!("orbit size {} does not divide {k}", orbit.len()))?;
    }
    let unit = common::gq(0, 1);
    ensure(unit.is_unit_modulus(), || "i is not unit modulus".into())
}

fn torus_groups() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let parts: Vec<usize> = (0..rng.gen_range(1..=7)).map(|_| rng.gen_range(1..=30)).collect();
        let a = IntegerPartition::new(parts.clone()).unwrap();
        let g = torus_group_structure(&a).map_err(|e| e.to_string())?;
        let gcd = parts.iter().fold(0usize, |x, &y| x.gcd(&y));
        ensure(g.finite_order as usize == gcd && g.torus_rank == parts.len() - 1, || format!("{a}: {g:?}"))?;
    }
    for k in 1..=8 {
        let g = torus_group_structure(&IntegerPartition::ones(k)).map_err(|e| e.to_string())?;
        ensure(g.finite_order == 1 && g.invariant_factors.is_empty(), || format!("ones({k}): {g:?}"))?;
    }
    Ok(())
}

fn boundary_coordinates() -> Check {
    let chain = ChainFlag::parse(3, "001").map_err(|e| e.to_string())?;
    let mut previous_min = 0.0;
    for e in 1..=8 {
        let s = 10f64.powi(e);
        let c = Configuration::new(vec![[0.0, 0.0, 0.0], [s, 0.0, 0.0], [3.0 * s, s, 0.0]]).unwrap();
        let rho = boundary_coords(&c, &chain).map_err(|e| e.to_string())?;
        let d = |i: usize, j: usize| {
            let (p, q) = (c.points()[i], c.points()[j]);
            ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
        };
        let seps = [d(0, 1), d(0, 2), d(1, 2)];
        let min = seps.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = seps.iter().cloned().fold(0.0, f64::max);
        ensure(min > previous_min, || "separations do not diverge".into())?;
        ensure(max / min <= 4.0, || format!("ratio {}", max / min))?;
        ensure((rho[0] - 1.0 / s).abs() <= 1e-6 * rho[0], || format!("rho1 {}", rho[0]))?;
        let expected = 1.0 / 5f64.sqrt();
        ensure((rho[1] - expected).abs() <= 1e-6, || format!("rho2 {} vs {expected}", rho[1]))?;
        previous_min = min;
    }
    Ok(())
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "k=2 atlas: one hypersurface, base 2, fiber 2", budget: Duration::from_millis(1), run: k2_atlas },
    Criterion { id: 2, name: "k=3 atlas: two hypersurfaces, one codim-2 corner", budget: Duration::from_millis(1), run: k3_atlas },
    Criterion { id: 3, name: "k=4 atlas: 4 / 5 / 2 / 0 faces by codimension", budget: Duration::from_millis(10), run: k4_atlas },
    Criterion { id: 4, name: "k=5 intersection I(1,1,1,2) ∩ I(2,3) has 2 components", budget: Duration::from_secs(1), run: k5_disconnected_intersection },
    Criterion { id: 5, name: "dimension identities for all faces, k <= 7", budget: Duration::from_secs(5), run: dimension_identities },
    Criterion { id: 6, name: "hypersurface count = p(k) - 1, k <= 8", budget: Duration::from_secs(1), run: hypersurface_counts },
    Criterion { id: 7, name: "Gibbons-Manton splitting for every chain, k <= 6", budget: Duration::from_secs(30), run: gm_splitting },
    Criterion { id: 8, name: "cluster algorithm invariants on 1000 random inputs", budget: Duration::from_secs(10), run: cluster_properties },
    Criterion { id: 9, name: "resultant homogeneity and gcd characterization", budget: Duration::from_secs(10), run: resultant_properties },
    Criterion { id: 10, name: "deck orbits preserve strong centring, size divides k", budget: Duration::from_secs(1), run: deck_action },
    Criterion { id: 11, name: "torus group finite part is gcd of parts", budget: Duration::from_secs(1), run: torus_groups },
    Criterion { id: 12, name: "three-body boundary coordinates regime", budget: Duration::from_secs(1), run: boundary_coordinates },
];

fn main() -> ExitCode {
    let mut failures = Vec::new();
    for c in CRITERIA {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match &outcome {
            Ok(()) if elapsed <= c.budget => ("PASS", String::new()),
            Ok(()) => ("PASS", format!(" (over the {:?} budget)", c.budget)),
            Err(msg) => ("FAIL", format!(": {msg}")),
        };
        println!("{status} [{:>2}] {} — {:.3?}{detail}", c.id, c.name, elapsed);
        if outcome.is_err() {
            failures.push(c.id);
        }
    }
    if failures.is_empty() {
        println!("acceptance: {} of {} criteria pass", CRITERIA.len(), CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failures:?}");
        ExitCode::FAILURE
    }
}
