use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use super::{all_partitions, refines, strictly_refines, type_of, IntegerPartition, Permutation, SetPartition};
use crate::error::{argument, range, Error, Result};

/// Largest ground set for chain enumeration.
pub const MAX_CHAIN_K: usize = 8;

/// A strict refinement chain `λ_1 < λ_2 < ⋯ < λ_d`, stored finest first.
///
/// No entry is the one-block partition. The empty chain is allowed and labels
/// the interior.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainFlag {
    k: usize,
    chain: Vec<SetPartition>,
}

impl ChainFlag {
    pub fn new(k: usize, chain: Vec<SetPartition>) -> Result<Self> {
        if k == 0 {
            return range("ground set must be nonempty");
        }
        for lam in &chain {
            if lam.k() != k {
                return argument(format!("chain entry {lam} is not a partition of {k} elements"));
            }
            if lam.is_one_block() {
                return Err(Error::Chain(format!("chain entry {lam} is the one-block partition")));
            }
        }
        for pair in chain.windows(2) {
            if !strictly_refines(&pair[0], &pair[1])? {
                return Err(Error::Chain(format!("{} < {} fails", pair[0], pair[1])));
            }
        }
        Ok(ChainFlag { k, chain })
    }

    pub fn empty(k: usize) -> Self {
        ChainFlag { k, chain: Vec::new() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Chain length `d`, the codimension of the labelled corner.
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn entries(&self) -> &[SetPartition] {
        &self.chain
    }

    pub fn finest(&self) -> Option<&SetPartition> {
        self.chain.first()
    }

    pub fn coarsest(&self) -> Option<&SetPartition> {
        self.chain.last()
    }

    /// Integer types `[λ_1], …, [λ_d]`.
    pub fn types(&self) -> Vec<IntegerPartition> {
        self.chain.iter().map(type_of).collect()
    }

    pub fn relabel(&self, sigma: &Permutation) -> Result<Self> {
        let chain = self.chain.iter().map(|l| l.relabel(sigma)).collect::<Result<_>>()?;
        Ok(ChainFlag { k: self.k, chain })
    }

    pub fn to_rgs_strings(&self) -> Vec<String> {
        self.chain.iter().map(SetPartition::to_rgs_string).collect()
    }

    /// Parses `;`-separated restricted-growth strings, finest first, e.g. `"012;001"`.
    pub fn parse(k: usize, s: &str) -> Result<Self> {
        let chain = s
            .split(';')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(SetPartition::parse_rgs)
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, chain)
    }

    /// Deterministic representative of the orbit of this chain under relabelings
    /// that fix every block of `nu` setwise. With `nu` the one-block partition
    /// this is the full symmetric group.
    pub fn orbit_canonical_below(&self, nu: &SetPartition) -> Result<Self> {
        if nu.k() != self.k {
            return argument("ambient partition has a different ground set");
        }
        if let Some(top) = self.coarsest() {
            if !strictly_refines(top, nu)? {
                return Err(Error::Chain(format!("{top} < {nu} fails")));
            }
        }
        let trees = trees_of_chain(self, nu);
        let refs: Vec<&LevelTree> = trees.iter().collect();
        Ok(realize(&refs, nu, self.len()))
    }

    pub fn orbit_canonical(&self) -> Self {
        self.orbit_canonical_below(&SetPartition::one_block(self.k))
            .expect("chains never reach the one-block partition")
    }
}

impl fmt::Display for ChainFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, lam) in self.chain.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{lam}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ChainFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainFlag({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct ChainFlagJson {
    k: usize,
    chain: Vec<String>,
}

impl Serialize for ChainFlag {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ChainFlagJson { k: self.k, chain: self.to_rgs_strings() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ChainFlag {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ChainFlagJson::deserialize(deserializer)?;
        let chain = raw
            .chain
            .iter()
            .map(|s| SetPartition::parse_rgs(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        ChainFlag::new(raw.k, chain).map_err(serde::de::Error::custom)
    }
}

// A chain of length d below a block C is a rooted tree of height d whose root is
// C, whose height-h nodes are the blocks of λ_{h+1} inside C and whose leaves
// carry the sizes of the λ_1 blocks. Relabelings inside C act by permuting
// leaves, so orbits are isomorphism classes of such trees. Children are kept
// sorted in decreasing order, which makes the representation canonical.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct LevelTree {
    leaves: usize,
    children: Vec<LevelTree>,
}

// Bit h is set when some node at height h has two or more children, i.e. when
// λ_h < λ_{h+1} is strict within this subtree (λ_{d+1} being the root).
type BranchMask = u32;

type TreeTable = BTreeMap<(usize, usize), Rc<Vec<(LevelTree, BranchMask)>>>;

fn trees(height: usize, n: usize, memo: &mut TreeTable) -> Rc<Vec<(LevelTree, BranchMask)>> {
    if let Some(hit) = memo.get(&(height, n)) {
        return hit.clone();
    }
    let out = if height == 0 {
        vec![(LevelTree { leaves: n, children: Vec::new() }, 0)]
    } else {
        let mut candidates: Vec<(LevelTree, BranchMask)> = Vec::new();
        for s in 1..=n {
            candidates.extend(trees(height - 1, s, memo).iter().cloned());
        }
        candidates.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out = Vec::new();
        let mut picked = Vec::new();
        multisets(&candidates, 0, n, &mut picked, &mut |chosen: &[usize]| {
            let children: Vec<LevelTree> = chosen.iter().map(|&i| candidates[i].0.clone()).collect();
            let mut mask = chosen.iter().fold(0, |m, &i| m | candidates[i].1);
            if children.len() >= 2 {
                mask |= 1 << height;
            }
            out.push((LevelTree { leaves: n, children }, mask));
        });
        out
    };
    let out = Rc::new(out);
    memo.insert((height, n), out.clone());
    out
}

fn multisets(
    candidates: &[(LevelTree, BranchMask)],
    start: usize,
    remaining: usize,
    picked: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if remaining == 0 {
        emit(picked);
        return;
    }
    for i in start..candidates.len() {
        let size = candidates[i].0.leaves;
        if size > remaining {
            continue;
        }
        picked.push(i);
        multisets(candidates, i, remaining - size, picked, emit);
        picked.pop();
    }
}

fn full_mask(d: usize) -> BranchMask {
    ((1 << (d + 1)) - 1) & !1
}

fn realize(trees: &[&LevelTree], nu: &SetPartition, d: usize) -> ChainFlag {
    let k = nu.k();
    // labels[h][element] = id of the height-h node containing the element.
    let mut labels = vec![vec![0usize; k]; d];
    let mut next_id = vec![0usize; d];
    for (tree, block) in trees.iter().zip(nu.blocks()) {
        let mut cursor = block.into_iter();
        assign(tree, d, &mut labels, &mut next_id, &mut cursor, &mut Vec::new());
    }
    let chain = labels.iter().map(|l| SetPartition::from_labels(l)).collect();
    ChainFlag { k, chain }
}

fn assign(
    node: &LevelTree,
    height: usize,
    labels: &mut [Vec<usize>],
    next_id: &mut [usize],
    cursor: &mut impl Iterator<Item = usize>,
    path: &mut Vec<usize>,
) {
    // `path` holds node ids for heights above `height` (excluding the root).
    if height < labels.len() {
        path.push(next_id[height]);
        next_id[height] += 1;
    }
    if height == 0 {
        for _ in 0..node.leaves {
            let e = cursor.next().expect("tree leaves match block size");
            // path[0] is the topmost non-root level (height d-1).
            for (depth, &id) in path.iter().enumerate() {
                labels[labels.len() - 1 - depth][e] = id;
            }
        }
    } else {
        for child in &node.children {
            assign(child, height - 1, labels, next_id, cursor, path);
        }
    }
    if height < labels.len() {
        path.pop();
    }
}

fn trees_of_chain(chain: &ChainFlag, nu: &SetPartition) -> Vec<LevelTree> {
    let d = chain.len();
    let entries = chain.entries();
    // Build bottom-up: leaves are λ_1 blocks; height-h nodes are λ_{h+1} blocks.
    let mut level: Vec<(Vec<usize>, LevelTree)> = if d == 0 {
        Vec::new()
    } else {
        entries[0]
            .blocks()
            .into_iter()
            .map(|b| {
                let n = b.len();
                (b, LevelTree { leaves: n, children: Vec::new() })
            })
            .collect()
    };
    for h in 1..=d {
        let parent = if h == d { nu } else { &entries[h] };
        let mut grouped: BTreeMap<usize, (Vec<usize>, Vec<LevelTree>)> = BTreeMap::new();
        for (elements, tree) in level {
            let slot = grouped.entry(parent.block_of(elements[0])).or_default();
            slot.0.extend(elements);
            slot.1.push(tree);
        }
        level = grouped
            .into_values()
            .map(|(mut elements, mut children)| {
                elements.sort_unstable();
                children.sort_by(|a, b| b.cmp(a));
                let n = elements.len();
                (elements, LevelTree { leaves: n, children })
            })
            .collect();
    }
    if d == 0 {
        return nu
            .block_sizes()
            .into_iter()
            .map(|n| LevelTree { leaves: n, children: Vec::new() })
            .collect();
    }
    // `level` is now indexed by ν-block in canonical order.
    level.into_iter().map(|(_, t)| t).collect()
}

/// One representative per orbit of strict chains `λ_1 < ⋯ < λ_d < ν` under the
/// group of relabelings fixing each block of `ν` setwise (`Stab(D_ν)`).
pub fn chain_orbits_below(nu: &SetPartition, d: usize) -> Result<Vec<ChainFlag>> {
    let k = nu.k();
    if k == 0 || k > MAX_CHAIN_K {
        return range(format!("k = {k}, expected 1..={MAX_CHAIN_K}"));
    }
    if d == 0 {
        return range("chain length must be at least 1");
    }
    if d > k - nu.num_blocks() {
        return Ok(Vec::new());
    }
    let mut memo = TreeTable::new();
    let per_block: Vec<Rc<Vec<(LevelTree, BranchMask)>>> =
        nu.block_sizes().into_iter().map(|n| trees(d, n, &mut memo)).collect();
    let want = full_mask(d);
    let mut out = Vec::new();
    let mut choice = Vec::with_capacity(per_block.len());
    product(&per_block, 0, &mut choice, &mut |chosen: &[usize]| {
        let mask = chosen.iter().zip(&per_block).fold(0, |m, (&i, list)| m | list[i].1);
        if mask & want == want {
            let refs: Vec<&LevelTree> = chosen.iter().zip(&per_block).map(|(&i, list)| &list[i].0).collect();
            out.push(realize(&refs, nu, d));
        }
    });
    Ok(out)
}

fn product<T>(lists: &[Rc<Vec<T>>], at: usize, choice: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if at == lists.len() {
        emit(choice);
        return;
    }
    for i in 0..lists[at].len() {
        choice.push(i);
        product(lists, at + 1, choice, emit);
        choice.pop();
    }
}

/// One representative per `Σ_k`-orbit of strict chains of length `d` that stop
/// short of the one-block partition.
pub fn chains_mod_symmetric_group(k: usize, d: usize) -> Result<Vec<ChainFlag>> {
    if k < 2 || d == 0 || d > k - 1 {
        return range(format!("need 1 <= d <= k-1, got k = {k}, d = {d}"));
    }
    chain_orbits_below(&SetPartition::one_block(k), d)
}

/// Every strict chain `λ_1 < ⋯ < λ_d < ν` (not reduced by symmetry).
pub fn all_chains_below(nu: &SetPartition, d: usize) -> Result<Vec<ChainFlag>> {
    let k = nu.k();
    let below: Vec<SetPartition> = all_partitions(k)?
        .into_iter()
        .filter(|l| strictly_refines(l, nu).unwrap_or(false))
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<SetPartition> = Vec::new();
    extend_chains(&below, d, &mut stack, &mut |c: &[SetPartition]| {
        out.push(ChainFlag { k, chain: c.to_vec() });
    })?;
    Ok(out)
}

fn extend_chains(
    pool: &[SetPartition],
    d: usize,
    stack: &mut Vec<SetPartition>,
    emit: &mut impl FnMut(&[SetPartition]),
) -> Result<()> {
    if stack.len() == d {
        emit(stack);
        return Ok(());
    }
    for lam in pool {
        let ok = match stack.last() {
            Some(prev) => prev != lam && refines(prev, lam)?,
            None => true,
        };
        if ok {
            stack.push(lam.clone());
            extend_chains(pool, d, stack, emit)?;
            stack.pop();
        }
    }
    Ok(())
}
