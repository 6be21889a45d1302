//! Boundary-face atlas of the compactified moduli space `M̄_k` and of the
//! relative spaces `M̄_ν`.
//!
//! A corner of codimension `d` is labelled by an orbit of strict chains
//! `λ_1 < ⋯ < λ_d < ν`. Its dimension data are
//!
//! * fiber `M̄_{λ_1}` of dimension `4k − 3r(λ_1)`,
//! * base factors `B_{λ_i λ_{i+1}}` of dimension `3(r(λ_i) − r(λ_{i+1})) − 1`, with `λ_{d+1} = ν`,
//!
//! adding up to `4k − 3r(ν) − d`. For `ν` the one-block partition the orbits are
//! taken under `Σ_k`; otherwise under `Stab(D_ν)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{argument, range, Error, Result};
use crate::partitions::{
    chain_orbits_below, refines, strictly_refines, type_of, ChainFlag, IntegerPartition, SetPartition,
    MAX_CHAIN_K,
};

/// One corner of the compactification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceDescriptor {
    pub k: usize,
    /// Ambient partition `ν`; the one-block partition for `M̄_k` itself.
    pub nu: SetPartition,
    /// Orbit representative, finest first.
    pub chain: ChainFlag,
    pub codim: usize,
    pub total_dim: usize,
    pub base_dims: Vec<usize>,
    pub fiber_dim: usize,
    pub integer_types: Vec<IntegerPartition>,
    /// `r(λ_1)`, the rank of the torus acting on the fiber.
    pub torus_rank: usize,
}

impl FaceDescriptor {
    /// Dimension bookkeeping for a chain below `nu`.
    pub fn from_chain(chain: ChainFlag, nu: &SetPartition) -> Result<Self> {
        let k = chain.k();
        if nu.k() != k {
            return argument("chain and ambient partition have different ground sets");
        }
        let Some(finest) = chain.finest() else {
            return Err(Error::Chain("a face needs a nonempty chain".into()));
        };
        let top = chain.coarsest().expect("nonempty");
        if !strictly_refines(top, nu)? {
            return Err(Error::Chain(format!("{top} < {nu} fails")));
        }
        let ranks: Vec<usize> = chain
            .entries()
            .iter()
            .map(SetPartition::num_blocks)
            .chain(std::iter::once(nu.num_blocks()))
            .collect();
        let base_dims: Vec<usize> = ranks.windows(2).map(|w| 3 * (w[0] - w[1]) - 1).collect();
        let fiber_dim = 4 * k - 3 * finest.num_blocks();
        let total_dim = fiber_dim + base_dims.iter().sum::<usize>();
        Ok(FaceDescriptor {
            k,
            nu: nu.clone(),
            codim: chain.len(),
            total_dim,
            base_dims,
            fiber_dim,
            integer_types: chain.types(),
            torus_rank: finest.num_blocks(),
            chain,
        })
    }

    /// Dimension of the ambient space `M̄_ν`, `4k − 3r(ν)`.
    pub fn ambient_dim(&self) -> usize {
        4 * self.k - 3 * self.nu.num_blocks()
    }
}

#[derive(Serialize, Deserialize)]
struct FaceJson {
    k: usize,
    nu: String,
    chain: Vec<String>,
    codim: usize,
    total_dim: usize,
    fiber_dim: usize,
    base_dims: Vec<usize>,
    types: Vec<IntegerPartition>,
    torus_rank: usize,
}

impl Serialize for FaceDescriptor {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FaceJson {
            k: self.k,
            nu: self.nu.to_rgs_string(),
            chain: self.chain.to_rgs_strings(),
            codim: self.codim,
            total_dim: self.total_dim,
            fiber_dim: self.fiber_dim,
            base_dims: self.base_dims.clone(),
            types: self.integer_types.clone(),
            torus_rank: self.torus_rank,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FaceDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = FaceJson::deserialize(deserializer)?;
        let nu = SetPartition::parse_rgs(&raw.nu).map_err(D::Error::custom)?;
        let chain = ChainFlag::parse(raw.k, &raw.chain.join(";")).map_err(D::Error::custom)?;
        let face = FaceDescriptor {
            k: raw.k,
            nu,
            chain,
            codim: raw.codim,
            total_dim: raw.total_dim,
            base_dims: raw.base_dims,
            fiber_dim: raw.fiber_dim,
            integer_types: raw.types,
            torus_rank: raw.torus_rank,
        };
        if face.chain.types() != face.integer_types {
            return Err(D::Error::custom("types do not match chain"));
        }
        Ok(face)
    }
}

fn check_k(k: usize) -> Result<()> {
    if !(2..=MAX_CHAIN_K).contains(&k) {
        return range(format!("k = {k}, expected 2..={MAX_CHAIN_K}"));
    }
    Ok(())
}

/// Boundary hypersurfaces of `M̄_k`, one per `Σ_k`-orbit of proper partitions.
pub fn hypersurface_atlas(k: usize) -> Result<Vec<FaceDescriptor>> {
    corner_atlas(k, 1)
}

/// Corners of codimension `d` of `M̄_k`. Empty when `d ≥ k`.
pub fn corner_atlas(k: usize, d: usize) -> Result<Vec<FaceDescriptor>> {
    check_k(k)?;
    relative_corner_atlas(&SetPartition::one_block(k), d)
}

/// Corners of codimension `d` of `M̄_ν`, one per `Stab(D_ν)`-orbit of chains below `ν`.
pub fn relative_corner_atlas(nu: &SetPartition, d: usize) -> Result<Vec<FaceDescriptor>> {
    check_k(nu.k())?;
    if d == 0 {
        return range("codimension must be at least 1");
    }
    chain_orbits_below(nu, d)?
        .into_iter()
        .map(|c| FaceDescriptor::from_chain(c, nu))
        .collect()
}

pub fn relative_hypersurface_atlas(nu: &SetPartition) -> Result<Vec<FaceDescriptor>> {
    relative_corner_atlas(nu, 1)
}

fn check_proper_type(k: usize, t: &IntegerPartition) -> Result<()> {
    if t.total() != k {
        return argument(format!("{t} is not a partition of {k}"));
    }
    if t.len() < 2 {
        return argument(format!("{t} is not a proper type"));
    }
    Ok(())
}

/// Number of connected components of `I_a ∩ I_b`: the `Σ_k`-orbits of chains
/// `λ < ν` with `{[λ], [ν]} = {a, b}`. Zero when the types are incomparable.
pub fn intersection_components(k: usize, a: &IntegerPartition, b: &IntegerPartition) -> Result<usize> {
    check_k(k)?;
    check_proper_type(k, a)?;
    check_proper_type(k, b)?;
    let (fine, coarse) = if a.refines(b)? {
        (a, b)
    } else if b.refines(a)? {
        (b, a)
    } else {
        return Ok(0);
    };
    if fine == coarse {
        return Ok(0);
    }
    Ok(corner_atlas(k, 2)?
        .iter()
        .filter(|f| f.integer_types[0] == *fine && f.integer_types[1] == *coarse)
        .count())
}

/// Hypersurfaces and codimension-two corners, the data needed to check the
/// iterated-boundary-fibration conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atlas {
    pub k: usize,
    pub nu: SetPartition,
    pub hypersurfaces: Vec<FaceDescriptor>,
    pub corners: Vec<FaceDescriptor>,
}

impl Atlas {
    pub fn build(k: usize) -> Result<Self> {
        check_k(k)?;
        Self::build_relative(&SetPartition::one_block(k))
    }

    pub fn build_relative(nu: &SetPartition) -> Result<Self> {
        Ok(Atlas {
            k: nu.k(),
            nu: nu.clone(),
            hypersurfaces: relative_corner_atlas(nu, 1)?,
            corners: relative_corner_atlas(nu, 2)?,
        })
    }

    fn label_of(&self, lambda: &SetPartition) -> Result<SetPartition> {
        let single = ChainFlag::new(self.k, vec![lambda.clone()])?;
        Ok(single.orbit_canonical_below(&self.nu)?.entries()[0].clone())
    }

    fn hypersurface_index(&self) -> BTreeMap<SetPartition, usize> {
        self.hypersurfaces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.chain.entries()[0].clone(), i))
            .collect()
    }

    /// Pairs `(i, j)` of hypersurface indices with `N_i ∩ N_j ≠ ∅` and `i` the finer label.
    pub fn intersecting_pairs(&self) -> Result<Vec<(usize, usize)>> {
        let index = self.hypersurface_index();
        let mut pairs = BTreeSet::new();
        for corner in &self.corners {
            let e = corner.chain.entries();
            let find = |l: &SetPartition| -> Result<usize> {
                let label = self.label_of(l)?;
                index
                    .get(&label)
                    .copied()
                    .ok_or_else(|| Error::Argument(format!("corner entry {l} has no hypersurface")))
            };
            pairs.insert((find(&e[0])?, find(&e[1])?));
        }
        Ok(pairs.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IbfViolation {
    /// `total_dim` differs from fiber plus bases, or from `4k − 3r(ν) − codim`.
    Dimension { chain: Vec<String>, detail: String },
    /// Intersecting hypersurfaces with equal base dimension.
    EqualBaseDims { lower: String, upper: String },
    /// The fiber-dimension order disagrees with refinement.
    OrderMismatch { lower: String, upper: String },
    /// The corner's factors do not compose the two boundary fibrations.
    Composition { chain: Vec<String>, detail: String },
    /// A corner refers to a label with no hypersurface.
    MissingHypersurface { chain: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypersurfaceSummary {
    pub label: String,
    pub integer_type: IntegerPartition,
    pub base_dim: usize,
    pub fiber_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IbfReport {
    pub hypersurfaces: Vec<HypersurfaceSummary>,
    /// `(lower, upper)` label pairs of the partial order on hypersurfaces.
    pub edges: Vec<(String, String)>,
    pub violations: Vec<IbfViolation>,
}

impl IbfReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_ibf(k: usize) -> Result<IbfReport> {
    Ok(validate_atlas(&Atlas::build(k)?))
}

/// Checks the combinatorial conditions of an iterated boundary fibration on an atlas.
pub fn validate_atlas(atlas: &Atlas) -> IbfReport {
    let mut violations = Vec::new();
    let ambient = 4 * atlas.k - 3 * atlas.nu.num_blocks();
    let rgs = |f: &FaceDescriptor| f.chain.to_rgs_strings();
    for f in atlas.hypersurfaces.iter().chain(&atlas.corners) {
        let sum = f.fiber_dim + f.base_dims.iter().sum::<usize>();
        if f.total_dim != sum || f.total_dim + f.codim != ambient {
            violations.push(IbfViolation::Dimension {
                chain: rgs(f),
                detail: format!(
                    "total {} fiber {} bases {:?} ambient {ambient} codim {}",
                    f.total_dim, f.fiber_dim, f.base_dims, f.codim
                ),
            });
        }
    }
    let summaries: Vec<HypersurfaceSummary> = atlas
        .hypersurfaces
        .iter()
        .map(|f| HypersurfaceSummary {
            label: f.chain.entries()[0].to_rgs_string(),
            integer_type: f.integer_types[0].clone(),
            base_dim: f.base_dims.first().copied().unwrap_or(0),
            fiber_dim: f.fiber_dim,
        })
        .collect();
    let index = atlas.hypersurface_index();
    let mut edges = BTreeSet::new();
    for corner in &atlas.corners {
        let e = corner.chain.entries();
        let found: Option<(usize, usize)> = (|| {
            let lo = *index.get(&atlas.label_of(&e[0]).ok()?)?;
            let hi = *index.get(&atlas.label_of(&e[1]).ok()?)?;
            Some((lo, hi))
        })();
        let Some((lo, hi)) = found else {
            violations.push(IbfViolation::MissingHypersurface { chain: rgs(corner) });
            continue;
        };
        let (low, high) = (&atlas.hypersurfaces[lo], &atlas.hypersurfaces[hi]);
        let (low_label, high_label) = (summaries[lo].label.clone(), summaries[hi].label.clone());
        let (b_low, b_high) = (summaries[lo].base_dim, summaries[hi].base_dim);
        if b_low == b_high {
            violations.push(IbfViolation::EqualBaseDims { lower: low_label.clone(), upper: high_label.clone() });
        }
        let refined = refines(&e[0], &e[1]).unwrap_or(false);
        if !(refined && low.fiber_dim < high.fiber_dim && b_low > b_high) {
            violations.push(IbfViolation::OrderMismatch { lower: low_label.clone(), upper: high_label.clone() });
        }
        // φ_low(N_low ∩ N_high) is a boundary face of B_low fibering over B_high
        // with fiber B_{low,high}; N_low ∩ N_high → B_high has fiber F_low × B_{low,high},
        // a boundary face of F_high.
        let (b_mid, b_top) = (corner.base_dims[0], corner.base_dims[1]);
        let composes = corner.fiber_dim == low.fiber_dim
            && b_top == b_high
            && b_low == b_mid + b_top + 1
            && high.fiber_dim == low.fiber_dim + b_mid + 1;
        if !composes {
            violations.push(IbfViolation::Composition {
                chain: rgs(corner),
                detail: format!(
                    "corner fiber {} bases {:?}; lower ({}, {}), upper ({}, {})",
                    corner.fiber_dim, corner.base_dims, low.fiber_dim, b_low, high.fiber_dim, b_high
                ),
            });
        }
        edges.insert((low_label, high_label));
    }
    IbfReport { hypersurfaces: summaries, edges: edges.into_iter().collect(), violations }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    /// Orbit representative as a restricted-growth string.
    pub label: String,
    pub integer_type: IntegerPartition,
    /// Stage of the inductive construction; stage-0 labels are minimal.
    pub depth: usize,
}

/// Order in which the adapted cover `{W_λ}` is built: minimal labels first, each
/// later label only after every label below it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSchedule {
    pub entries: Vec<ScheduleEntry>,
    /// Index pairs (into `entries`) of hypersurfaces that meet; only these may have overlapping `W`.
    pub overlaps: Vec<(usize, usize)>,
}

impl CoverSchedule {
    /// Every overlapping pair is comparable, finer first, at strictly increasing
    /// depth; labels at equal depth never overlap.
    pub fn verify(&self) -> bool {
        self.overlaps.iter().all(|&(a, b)| {
            let (ea, eb) = (&self.entries[a], &self.entries[b]);
            a < b
                && ea.depth < eb.depth
                && ea.integer_type.refines(&eb.integer_type).unwrap_or(false)
        })
    }
}

pub fn cover_schedule(k: usize) -> Result<CoverSchedule> {
    cover_schedule_for(&Atlas::build(k)?)
}

pub fn cover_schedule_for(atlas: &Atlas) -> Result<CoverSchedule> {
    let n = atlas.hypersurfaces.len();
    let pairs = atlas.intersecting_pairs()?;
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(lo, hi) in &pairs {
        below[hi].push(lo);
    }
    // Depth = length of the longest chain of labels below.
    let mut depth = vec![usize::MAX; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(atlas.hypersurfaces[i].chain.entries()[0].num_blocks()));
    for &i in &order {
        depth[i] = below[i].iter().map(|&j| depth[j] + 1).max().unwrap_or(0);
    }
    let mut sequence: Vec<usize> = (0..n).collect();
    sequence.sort_by(|&a, &b| {
        depth[a]
            .cmp(&depth[b])
            .then_with(|| atlas.hypersurfaces[a].integer_types[0].cmp(&atlas.hypersurfaces[b].integer_types[0]))
            .then_with(|| atlas.hypersurfaces[a].chain.cmp(&atlas.hypersurfaces[b].chain))
    });
    let mut position = vec![0; n];
    for (p, &i) in sequence.iter().enumerate() {
        position[i] = p;
    }
    let entries = sequence
        .iter()
        .map(|&i| {
            let f = &atlas.hypersurfaces[i];
            ScheduleEntry {
                label: f.chain.entries()[0].to_rgs_string(),
                integer_type: f.integer_types[0].clone(),
                depth: depth[i],
            }
        })
        .collect();
    let mut overlaps: Vec<(usize, usize)> = pairs.iter().map(|&(lo, hi)| (position[lo], position[hi])).collect();
    overlaps.sort();
    Ok(CoverSchedule { entries, overlaps })
}

/// `true` when the types of two hypersurface descriptors are comparable.
pub fn hypersurfaces_comparable(a: &FaceDescriptor, b: &FaceDescriptor) -> bool {
    let (ta, tb) = (type_of(&a.chain.entries()[0]), type_of(&b.chain.entries()[0]));
    ta.comparable(&tb).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> IntegerPartition {
        IntegerPartition::parse(s).unwrap()
    }

    #[test]
    fn low_charge_hypersurfaces() {
        let k2 = hypersurface_atlas(2).unwrap();
        assert_eq!(k2.len(), 1);
        assert_eq!((k2[0].base_dims.clone(), k2[0].fiber_dim, k2[0].total_dim), (vec![2], 2, 4));
        assert_eq!(hypersurface_atlas(3).unwrap().len(), 2);
        assert_eq!(hypersurface_atlas(4).unwrap().len(), 4);
        assert!(hypersurface_atlas(1).is_err());
        assert!(hypersurface_atlas(9).is_err());
    }

    #[test]
    fn low_charge_corners() {
        assert_eq!(corner_atlas(3, 2).unwrap().len(), 1);
        assert_eq!(corner_atlas(4, 2).unwrap().len(), 5);
        assert_eq!(corner_atlas(4, 3).unwrap().len(), 2);
        assert!(corner_atlas(4, 4).unwrap().is_empty());
        assert!(corner_atlas(4, 9).unwrap().is_empty());
        assert!(corner_atlas(4, 0).is_err());
    }

    #[test]
    fn dimension_identity() {
        for k in 2..=6 {
            for d in 1..k {
                for f in corner_atlas(k, d).unwrap() {
                    assert_eq!(f.total_dim, 4 * k - 3 - d);
                    assert_eq!(f.total_dim, f.fiber_dim + f.base_dims.iter().sum::<usize>());
                }
            }
        }
    }

    #[test]
    fn intersections() {
        assert_eq!(intersection_components(4, &t("1,3"), &t("2,2")).unwrap(), 0);
        assert_eq!(intersection_components(4, &t("1,1,2"), &t("1,3")).unwrap(), 1);
        assert_eq!(intersection_components(4, &t("1,3"), &t("1,1,2")).unwrap(), 1);
        assert_eq!(intersection_components(5, &t("1,1,1,2"), &t("2,3")).unwrap(), 2);
        assert_eq!(intersection_components(4, &t("1,3"), &t("1,3")).unwrap(), 0);
        assert!(intersection_components(4, &t("4"), &t("1,3")).is_err());
        assert!(intersection_components(4, &t("1,4"), &t("1,3")).is_err());
    }

    #[test]
    fn ibf_validation() {
        for k in 2..=5 {
            let report = validate_ibf(k).unwrap();
            assert!(report.is_valid(), "k={k}: {:?}", report.violations);
        }
        let report = validate_ibf(4).unwrap();
        assert_eq!(report.edges.len(), 5);

        let mut atlas = Atlas::build(4).unwrap();
        atlas.hypersurfaces[1].base_dims[0] += 1;
        assert!(!validate_atlas(&atlas).violations.is_empty());
    }

    #[test]
    fn relative_atlas() {
        let nu: SetPartition = "0011".parse().unwrap();
        let hs = relative_hypersurface_atlas(&nu).unwrap();
        assert_eq!(hs.len(), 3);
        for f in &hs {
            assert_eq!(f.total_dim, 4 * 4 - 3 * 2 - 1);
        }
        let atlas = Atlas::build_relative(&nu).unwrap();
        assert!(validate_atlas(&atlas).is_valid());
    }

    #[test]
    fn schedules() {
        let s = cover_schedule(2).unwrap();
        assert_eq!(s.entries.len(), 1);

        let s = cover_schedule(3).unwrap();
        let types: Vec<String> = s.entries.iter().map(|e| e.integer_type.to_string()).collect();
        assert_eq!(types, ["(1,1,1)", "(1,2)"]);
        assert!(s.verify());

        let s = cover_schedule(4).unwrap();
        assert_eq!(s.entries[0].integer_type, t("1,1,1,1"));
        assert_eq!(s.entries[1].integer_type, t("1,1,2"));
        let last: BTreeSet<String> = s.entries[2..].iter().map(|e| e.integer_type.to_string()).collect();
        assert_eq!(last, BTreeSet::from(["(1,3)".to_string(), "(2,2)".to_string()]));
        assert_eq!(s.entries[2].depth, s.entries[3].depth);
        assert!(s.verify());
    }

    #[test]
    fn descriptor_json() {
        let f = &corner_atlas(3, 2).unwrap()[0];
        let text = serde_json::to_string(f).unwrap();
        assert_eq!(
            text,
            r#"{"k":3,"nu":"000","chain":["012","001"],"codim":2,"total_dim":7,"fiber_dim":3,"base_dims":[2,2],"types":[[1,1,1],[1,2]],"torus_rank":3}"#
        );
        let back: FaceDescriptor = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, f);
    }
}
