//! Chern-weight systems of the Gibbons–Manton torus bundles `T_{λν}`.
//!
//! For a strict flag `λ < ν` the curvature of the `i`-th circle factor is
//! `ω_i = 2 Σ π_{ij}*(ω)` over `j ~_ν i`, `j ≁_λ i`. Grouping the `j` by their
//! `λ`-block turns this into integer weights `2|B′|` on the other `λ`-blocks `B′`
//! inside the `ν`-block of `i`, which is all the data kept here.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::partitions::{strictly_refines, IntegerPartition, Permutation, SetPartition};

/// Weights of `ω_i` for each `λ`-block, keyed by block index (blocks in
/// restricted-growth order, so block `b` is the one whose minimum comes `b`-th).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernWeightSystem {
    lambda: SetPartition,
    nu: SetPartition,
    weights: Vec<BTreeMap<usize, u64>>,
}

impl ChernWeightSystem {
    /// Assembles a system from explicit block-level weights, checking it against
    /// the defining formula.
    pub fn from_parts(lambda: SetPartition, nu: SetPartition, weights: Vec<BTreeMap<usize, u64>>) -> Result<Self> {
        let expected = weight_system(&lambda, &nu)?;
        if expected.weights != weights {
            return argument("weights do not match the flag");
        }
        Ok(expected)
    }

    pub fn lambda(&self) -> &SetPartition {
        &self.lambda
    }

    pub fn nu(&self) -> &SetPartition {
        &self.nu
    }

    /// Number of circle factors, `r(λ)`.
    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[BTreeMap<usize, u64>] {
        &self.weights
    }

    /// Weights of `ω_i` for any element `i` (0-based) of the ground set.
    pub fn form_at(&self, i: usize) -> &BTreeMap<usize, u64> {
        &self.weights[self.lambda.block_of(i)]
    }

    /// Total weight of each `ω_i`, per `λ`-block.
    pub fn totals(&self) -> Vec<u64> {
        self.weights.iter().map(|w| w.values().sum()).collect()
    }
}

/// Block-level weights of the flag `λ < ν`.
pub fn weight_system(lambda: &SetPartition, nu: &SetPartition) -> Result<ChernWeightSystem> {
    if !strictly_refines(lambda, nu)? {
        return argument(format!("{lambda} < {nu} is not a strict flag"));
    }
    let blocks = lambda.blocks();
    let weights = blocks
        .iter()
        .enumerate()
        .map(|(b, block)| {
            blocks
                .iter()
                .enumerate()
                .filter(|&(c, other)| c != b && nu.same_block(block[0], other[0]))
                .map(|(c, other)| (c, 2 * other.len() as u64))
                .collect()
        })
        .collect();
    Ok(ChernWeightSystem { lambda: lambda.clone(), nu: nu.clone(), weights })
}

/// Weights of `ω_i` by direct evaluation of the sum over `j`, starting from an
/// arbitrary element `i` rather than a block.
pub fn form_by_summation(lambda: &SetPartition, nu: &SetPartition, i: usize) -> Result<BTreeMap<usize, u64>> {
    if !strictly_refines(lambda, nu)? {
        return argument(format!("{lambda} < {nu} is not a strict flag"));
    }
    if i >= lambda.k() {
        return argument(format!("element {} outside 1..={}", i + 1, lambda.k()));
    }
    let mut form = BTreeMap::new();
    for j in 0..lambda.k() {
        if nu.same_block(i, j) && !lambda.same_block(i, j) {
            *form.entry(lambda.block_of(j)).or_insert(0) += 2;
        }
    }
    Ok(form)
}

/// Per-block witness of `T_{λν}|_{∂_μ} ≅ T_{λμ} ×_{T^{r(μ)}} T_{μν}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitWitness {
    /// 1-based representative of the `λ`-block.
    pub representative: usize,
    pub full: BTreeMap<usize, u64>,
    /// Contribution of `T_{λμ}`: other `λ`-blocks inside the same `μ`-block.
    pub inner: BTreeMap<usize, u64>,
    /// Contribution of `T_{μν}` at the `μ`-block of `i`, pushed down to `λ`-blocks.
    pub pushed: BTreeMap<usize, u64>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splitting {
    pub witnesses: Vec<SplitWitness>,
}

impl Splitting {
    pub fn holds(&self) -> bool {
        self.witnesses.iter().all(|w| w.holds)
    }
}

/// Checks the boundary splitting of the weight system along `λ < μ < ν`.
pub fn restriction_splits(lambda: &SetPartition, mu: &SetPartition, nu: &SetPartition) -> Result<Splitting> {
    if !strictly_refines(lambda, mu)? || !strictly_refines(mu, nu)? {
        return argument(format!("{lambda} < {mu} < {nu} is not a strict chain"));
    }
    let full = weight_system(lambda, nu)?;
    let inner = weight_system(lambda, mu)?;
    let outer = weight_system(mu, nu)?;
    let blocks = lambda.blocks();
    let witnesses = blocks
        .iter()
        .enumerate()
        .map(|(b, block)| {
            let mut pushed = BTreeMap::new();
            for &m in outer.form_at(block[0]).keys() {
                for (c, other) in blocks.iter().enumerate() {
                    if mu.block_of(other[0]) == m {
                        pushed.insert(c, 2 * other.len() as u64);
                    }
                }
            }
            let inner_w = inner.weights[b].clone();
            let disjoint = inner_w.keys().all(|c| !pushed.contains_key(c));
            let mut union = inner_w.clone();
            union.extend(pushed.iter().map(|(&c, &w)| (c, w)));
            SplitWitness {
                representative: block[0] + 1,
                holds: disjoint && union == full.weights[b],
                full: full.weights[b].clone(),
                inner: inner_w,
                pushed,
            }
        })
        .collect();
    Ok(Splitting { witnesses })
}

fn preserves(sigma: &Permutation, p: &SetPartition) -> Result<bool> {
    Ok(&p.relabel(sigma)? == p)
}

/// Permutation of `λ`-blocks induced by a flag-preserving `σ`.
pub fn block_action(sigma: &Permutation, w: &ChernWeightSystem) -> Result<Permutation> {
    if !preserves(sigma, &w.lambda)? || !preserves(sigma, &w.nu)? {
        return argument(format!("{sigma} does not preserve the flag {} < {}", w.lambda, w.nu));
    }
    let images = w.lambda.blocks().iter().map(|b| w.lambda.block_of(sigma.apply(b[0]))).collect();
    Permutation::from_images(images)
}

/// Transport of weights along `σ ∈ Σ_{λν}`: the form at block `B` becomes the
/// form at `σ(B)`, with targets relabelled likewise.
pub fn sym_action(sigma: &Permutation, w: &ChernWeightSystem) -> Result<ChernWeightSystem> {
    let tau = block_action(sigma, w)?;
    let mut weights = vec![BTreeMap::new(); w.rank()];
    for (b, form) in w.weights.iter().enumerate() {
        weights[tau.apply(b)] = form.iter().map(|(&c, &x)| (tau.apply(c), x)).collect();
    }
    Ok(ChernWeightSystem { lambda: w.lambda.clone(), nu: w.nu.clone(), weights })
}

#[derive(Serialize, Deserialize)]
struct WeightJson {
    lambda: String,
    nu: String,
    weights: BTreeMap<String, BTreeMap<String, u64>>,
}

fn block_key(block: &[usize]) -> String {
    let inner: Vec<String> = block.iter().map(|x| (x + 1).to_string()).collect();
    format!("[{}]", inner.join(","))
}

impl Serialize for ChernWeightSystem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks = self.lambda.blocks();
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(b, form)| {
                let entries = form.iter().map(|(&c, &x)| (block_key(&blocks[c]), x)).collect();
                ((blocks[b][0] + 1).to_string(), entries)
            })
            .collect();
        WeightJson { lambda: self.lambda.to_string(), nu: self.nu.to_string(), weights }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ChernWeightSystem {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = WeightJson::deserialize(deserializer)?;
        let lambda: SetPartition = raw.lambda.parse().map_err(D::Error::custom)?;
        let nu: SetPartition = raw.nu.parse().map_err(D::Error::custom)?;
        let blocks = lambda.blocks();
        let keys: BTreeMap<String, usize> = blocks.iter().enumerate().map(|(c, b)| (block_key(b), c)).collect();
        let mut weights = vec![BTreeMap::new(); blocks.len()];
        for (rep, form) in raw.weights {
            let rep: usize = rep.parse().map_err(D::Error::custom)?;
            let b = blocks
                .iter()
                .position(|blk| blk[0] + 1 == rep)
                .ok_or_else(|| D::Error::custom(format!("{rep} is not a block representative")))?;
            for (key, x) in form {
                let c = keys.get(&key).ok_or_else(|| D::Error::custom(format!("unknown block {key}")))?;
                weights[b].insert(*c, x);
            }
        }
        ChernWeightSystem::from_parts(lambda, nu, weights).map_err(D::Error::custom)
    }
}

/// Structure of `G_a = {ζ ∈ T^n : Π ζ_j^{k_j} = 1} ≅ T^{rank} × Π Z_{d}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusGroup {
    pub torus_rank: usize,
    /// Order of the component group.
    pub finite_order: u64,
    /// Nontrivial invariant factors of the component group.
    pub invariant_factors: Vec<u64>,
}

/// Invariant factors of an integer matrix (the nonzero diagonal of its Smith form).
pub fn smith_invariants(matrix: &[Vec<i64>]) -> Vec<u64> {
    let mut a: Vec<Vec<i128>> = matrix.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // Pivot: smallest nonzero entry in the remaining block.
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                for j in t..cols {
                    a[i][j] -= q * a[t][j];
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                for i in t..rows {
                    a[i][j] -= q * a[i][t];
                }
                dirty |= a[t][j] != 0;
            }
            if !dirty {
                // Enforce divisibility of the remaining block by the pivot.
                let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            a[t][j] += a[i][j];
                        }
                        continue;
                    }
                }
            }
            // Move the smallest remaining entry of row/column t into the pivot.
            let (mut bi, mut bj) = (t, t);
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[bi][bj].abs() {
                    (bi, bj) = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[bi][bj].abs() {
                    (bi, bj) = (t, j);
                }
            }
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
        }
        diag.push(a[t][t].unsigned_abs() as u64);
    }
    diag
}

/// Group structure of the kernel of `ζ ↦ Π ζ_j^{k_j}` on `T^n`, from the Smith
/// form of the exponent row, cross-checked against `gcd(k_1, …, k_n)`.
pub fn torus_group_structure(a: &IntegerPartition) -> Result<TorusGroup> {
    if a.is_empty() {
        return argument("empty partition");
    }
    let row: Vec<i64> = a.parts().iter().map(|&x| x as i64).collect();
    let invariants = smith_invariants(&[row]);
    let rank_of_matrix = invariants.len();
    let finite_order: u64 = invariants.iter().product();
    let gcd = a.parts().iter().fold(0u64, |g, &x| g.gcd(&(x as u64)));
    if finite_order != gcd || rank_of_matrix != 1 {
        return Err(Error::Degenerate(format!(
            "Smith form {invariants:?} disagrees with gcd {gcd} for {a}"
        )));
    }
    Ok(TorusGroup {
        torus_rank: a.len() - rank_of_matrix,
        finite_order,
        invariant_factors: invariants.into_iter().filter(|&d| d > 1).collect(),
    })
}
