//! Cluster decomposition of point configurations in `R³`.
//!
//! The core is Taubes' iterative clustering of the connected components of a
//! strong-field region: components closer than a threshold `γ` are merged into
//! a ball of radius `R`, thresholds grow, and the loop stops once all clusters
//! are mutually `γ`-separated. The threshold recursion is generic over
//! [`OrderedField`], so the same loop runs in `f64` and in exact rationals; the
//! exact run certifies nesting and disjointness of the balls.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::partitions::{join, ChainFlag, IntegerPartition, SetPartition};
use crate::scalar::{OrderedField, Real};

pub type Point<T> = [T; 3];

fn sub<S: OrderedField>(a: &Point<S>, b: &Point<S>) -> Point<S> {
    [a[0].clone() - b[0].clone(), a[1].clone() - b[1].clone(), a[2].clone() - b[2].clone()]
}

fn norm_sq<S: OrderedField>(v: &Point<S>) -> S {
    v.iter().fold(S::zero(), |acc, x| acc + x.clone() * x.clone())
}

fn dist_sq<S: OrderedField>(a: &Point<S>, b: &Point<S>) -> S {
    norm_sq(&sub(a, b))
}

fn distance<T: Real>(a: &Point<T>, b: &Point<T>) -> T {
    dist_sq(a, b).sqrt()
}

fn check_finite<T: Real>(p: &Point<T>) -> Result<()> {
    if p.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Degenerate(format!("non-finite coordinate in {p:?}")))
    }
}

/// Points in `R³` with optional positive charges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration<T: Real> {
    points: Vec<Point<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    charges: Option<Vec<u32>>,
}

impl<T: Real> Configuration<T> {
    pub fn new(points: Vec<Point<T>>) -> Result<Self> {
        Self::with_charges(points, None)
    }

    pub fn with_charges(points: Vec<Point<T>>, charges: Option<Vec<u32>>) -> Result<Self> {
        for p in &points {
            check_finite(p)?;
        }
        if let Some(q) = &charges {
            if q.len() != points.len() {
                return argument(format!("{} charges for {} points", q.len(), points.len()));
            }
            if q.contains(&0) {
                return argument("charges must be positive");
            }
        }
        Ok(Configuration { points, charges })
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn charges(&self) -> Option<&[u32]> {
        self.charges.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn scaled(&self, t: T) -> Self {
        let points = self.points.iter().map(|p| [p[0] * t, p[1] * t, p[2] * t]).collect();
        Configuration { points, charges: self.charges.clone() }
    }

    fn distinct(&self) -> Result<()> {
        for (i, p) in self.points.iter().enumerate() {
            for (j, q) in self.points.iter().enumerate().skip(i + 1) {
                if p == q {
                    return Err(Error::Degenerate(format!("points {} and {} coincide", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }
}

/// `Σ_{i<j} 1/|p_i − p_j|`.
pub fn separation<T: Real>(c: &Configuration<T>) -> Result<T> {
    c.distinct()?;
    Ok(pairwise_inverse_sum(c.points()))
}

fn pairwise_inverse_sum<T: Real>(points: &[Point<T>]) -> T {
    let mut total = T::zero();
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            total = total + distance(p, q).recip();
        }
    }
    total
}

/// A connected component of the strong-field region, summarized by a center,
/// a diameter and its (positive) charge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component<T: Real> {
    pub center: Point<T>,
    pub diameter: T,
    pub charge: u32,
}

fn default_r_prime<T: Real>() -> T {
    T::one()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongFieldInput<T: Real> {
    pub components: Vec<Component<T>>,
    /// Radius beyond which the charge lemma applies; a free parameter.
    #[serde(default = "default_r_prime")]
    pub r_prime: T,
}

impl<T: Real> StrongFieldInput<T> {
    pub fn new(components: Vec<Component<T>>, r_prime: T) -> Result<Self> {
        let input = StrongFieldInput { components, r_prime };
        input.validate()?;
        Ok(input)
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return argument("at least one component is required");
        }
        if self.components.len() > u16::MAX as usize {
            return argument("too many components");
        }
        for (j, c) in self.components.iter().enumerate() {
            check_finite(&c.center)?;
            if !c.diameter.is_finite() || c.diameter < T::zero() {
                return argument(format!("component {}: diameter must be finite and nonnegative", j + 1));
            }
            if c.charge == 0 {
                return argument(format!("component {}: charge must be positive", j + 1));
            }
        }
        if !self.r_prime.is_finite() || self.r_prime <= T::zero() {
            return argument("r_prime must be positive");
        }
        Ok(())
    }

    pub fn max_diameter(&self) -> T {
        self.components.iter().fold(T::zero(), |m, c| m.max(c.diameter))
    }

    pub fn total_charge(&self) -> u32 {
        self.components.iter().map(|c| c.charge).sum()
    }
}

/// Diameter bound `d`, radius `R` and separation threshold `γ` of one round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds<S> {
    pub d: S,
    pub radius: S,
    pub gamma: S,
}

impl<S: OrderedField> Thresholds<S> {
    /// `d⁰ = max(d, 15)`, `R⁰ = d⁰ + R′ + 1`, `γ⁰ = 3R⁰ − d⁰/2`.
    pub fn initial(max_diameter: S, r_prime: S) -> Self {
        let fifteen = S::from_usize_exact(15);
        let d = if max_diameter > fifteen { max_diameter } else { fifteen };
        let radius = d.clone() + r_prime + S::one();
        Self::close(d, radius)
    }

    /// `d' = (m − 1)γ + 2R`, `R' = d' + 1`, `γ' = 3R' − d'/2`, with `m` the largest block.
    pub fn next(&self, max_block: usize) -> Self {
        let two = S::from_usize_exact(2);
        let d = S::from_usize_exact(max_block.saturating_sub(1)) * self.gamma.clone() + two * self.radius.clone();
        let radius = d.clone() + S::one();
        Self::close(d, radius)
    }

    fn close(d: S, radius: S) -> Self {
        let gamma = S::from_usize_exact(3) * radius.clone() - S::half() * d.clone();
        Thresholds { d, radius, gamma }
    }
}

/// State at the start of a round: thresholds, cluster centers, and the
/// original components making up each cluster (ordered by least member).
#[derive(Clone, Debug, PartialEq)]
pub struct RoundState<S> {
    pub thresholds: Thresholds<S>,
    pub centers: Vec<Point<S>>,
    pub members: Vec<Vec<usize>>,
}

/// Blocks of the graph on `centers` with an edge whenever `|p_i − p_j| ≤ γ`,
/// ordered by least element.
fn threshold_components<S: OrderedField>(centers: &[Point<S>], gamma: &S) -> Vec<Vec<usize>> {
    let n = centers.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let gamma_sq = gamma.clone() * gamma.clone();
    for i in 0..n {
        for j in i + 1..n {
            if dist_sq(&centers[i], &centers[j]) <= gamma_sq {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(i);
    }
    blocks
}

/// Runs the clustering loop to completion. The last state is the halting one;
/// there are at most `N` states for `N` components.
pub fn cluster_rounds<S: OrderedField>(centers: Vec<Point<S>>, max_diameter: S, r_prime: S) -> Vec<RoundState<S>> {
    let members = (0..centers.len()).map(|j| vec![j]).collect();
    let mut state = RoundState { thresholds: Thresholds::initial(max_diameter, r_prime), centers, members };
    let mut states = Vec::new();
    loop {
        let blocks = threshold_components(&state.centers, &state.thresholds.gamma);
        if blocks.len() == state.centers.len() {
            states.push(state);
            return states;
        }
        let max_block = blocks.iter().map(Vec::len).max().unwrap_or(1);
        let thresholds = state.thresholds.next(max_block);
        let centers = blocks
            .iter()
            .map(|b| {
                let m = S::from_usize_exact(b.len());
                let mut c = [S::zero(), S::zero(), S::zero()];
                for &j in b {
                    for (x, y) in c.iter_mut().zip(&state.centers[j]) {
                        *x = x.clone() + y.clone();
                    }
                }
                c.map(|x| x / m.clone())
            })
            .collect();
        let members = blocks
            .iter()
            .map(|b| {
                let mut all: Vec<usize> = b.iter().flat_map(|&j| state.members[j].iter().copied()).collect();
                all.sort_unstable();
                all
            })
            .collect();
        states.push(state);
        state = RoundState { thresholds, centers, members };
    }
}

fn partition_of(n: usize, members: &[Vec<usize>]) -> SetPartition {
    let mut labels = vec![0usize; n];
    for (b, block) in members.iter().enumerate() {
        for &j in block {
            labels[j] = b;
        }
    }
    SetPartition::from_labels(&labels)
}

/// One row of the per-round history.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord<T> {
    pub t: usize,
    pub d: T,
    pub radius: T,
    pub gamma: T,
    /// Number of clusters `r(ω^t)` at the start of the round.
    pub blocks: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterDecomposition<T: Real> {
    /// Partition `ω` of the component indices.
    pub partition: SetPartition,
    /// Final centers, one per block of `partition`.
    pub centers: Vec<Point<T>>,
    pub cluster_charges: Vec<u32>,
    pub radius: T,
    pub threshold: T,
    pub rounds: usize,
    #[serde(rename = "type")]
    pub cluster_type: IntegerPartition,
    /// `Σ_{i<j} 1/|p_i − p_j|` over final centers.
    pub epsilon: T,
    pub history: Vec<RoundRecord<T>>,
}

impl<T: Real> ClusterDecomposition<T> {
    pub fn num_clusters(&self) -> usize {
        self.centers.len()
    }

    /// Checks the output invariants in floating point, with relative tolerance `1e-9`.
    /// Returns the list of violated properties.
    pub fn check_invariants(&self, total_charge: u32) -> Vec<String> {
        let tol = T::from_f64(1e-9).unwrap();
        let mut out = Vec::new();
        let slack = |x: T| x.abs().max(T::one()) * tol;
        let n = self.centers.len();
        for i in 0..n {
            for j in i + 1..n {
                let dij = distance(&self.centers[i], &self.centers[j]);
                if dij <= self.threshold - slack(self.threshold) {
                    out.push(format!("clusters {} and {} closer than gamma", i + 1, j + 1));
                }
            }
        }
        let two = T::one() + T::one();
        if self.threshold - two * self.radius <= T::zero() {
            out.push("final balls overlap".into());
        }
        let bound = T::from_usize(n * n).unwrap() / self.threshold;
        if n > 1 && self.epsilon >= bound {
            out.push(format!("epsilon {:?} not below n^2/gamma {:?}", self.epsilon, bound));
        }
        if self.cluster_charges.iter().sum::<u32>() != total_charge {
            out.push("cluster charges do not add up".into());
        }
        let components = self.partition.k();
        if self.rounds + 1 > components.max(1) {
            out.push(format!("{} rounds for {components} components", self.rounds));
        }
        for w in self.history.windows(2) {
            if w[1].gamma < w[0].gamma || w[1].radius < w[0].radius || w[1].blocks >= w[0].blocks {
                out.push(format!("round {} does not progress", w[1].t));
            }
        }
        out
    }
}

/// Runs the clustering algorithm on a strong-field region.
pub fn taubes_cluster<T: Real>(input: &StrongFieldInput<T>) -> Result<ClusterDecomposition<T>> {
    input.validate()?;
    let centers: Vec<Point<T>> = input.components.iter().map(|c| c.center).collect();
    let states = cluster_rounds(centers, input.max_diameter(), input.r_prime);
    let history = states
        .iter()
        .enumerate()
        .map(|(t, s)| RoundRecord {
            t,
            d: s.thresholds.d,
            radius: s.thresholds.radius,
            gamma: s.thresholds.gamma,
            blocks: s.centers.len(),
        })
        .collect();
    let last = states.last().expect("at least one round");
    let cluster_charges: Vec<u32> = last
        .members
        .iter()
        .map(|b| b.iter().map(|&j| input.components[j].charge).sum())
        .collect();
    Ok(ClusterDecomposition {
        partition: partition_of(input.components.len(), &last.members),
        centers: last.centers.clone(),
        cluster_type: IntegerPartition::new(cluster_charges.iter().map(|&q| q as usize).collect())?,
        cluster_charges,
        radius: last.thresholds.radius,
        threshold: last.thresholds.gamma,
        rounds: states.len() - 1,
        epsilon: pairwise_inverse_sum(&last.centers),
        history,
    })
}

/// Outcome of replaying the algorithm in exact rational arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCertificate {
    /// The exact run produced the same final partition as the float run.
    pub partitions_agree: bool,
    /// Every round-`t` ball lies inside the round-`(t+1)` ball of its cluster.
    pub nested: bool,
    /// Final centers are pairwise more than `γ` apart.
    pub separated: bool,
    /// `γ > 2R`, so the final balls are mutually disjoint.
    pub disjoint: bool,
    /// `γ` and `R` never decrease.
    pub monotone: bool,
}

impl ExactCertificate {
    pub fn holds(&self) -> bool {
        self.partitions_agree && self.nested && self.separated && self.disjoint && self.monotone
    }
}

/// Replays the algorithm on the exact rational values of the float input and
/// checks the geometric claims of the construction without rounding.
pub fn exact_replay<T: Real>(input: &StrongFieldInput<T>) -> Result<ExactCertificate> {
    input.validate()?;
    let q = |x: T| x.to_rational().ok_or_else(|| Error::Degenerate(format!("{x:?} is not finite")));
    let centers = input
        .components
        .iter()
        .map(|c| Ok([q(c.center[0])?, q(c.center[1])?, q(c.center[2])?]))
        .collect::<Result<Vec<Point<BigRational>>>>()?;
    let states = cluster_rounds(centers, q(input.max_diameter())?, q(input.r_prime)?);
    let float = taubes_cluster(input)?;
    let last = states.last().expect("at least one round");
    let partitions_agree = partition_of(input.components.len(), &last.members) == float.partition;

    let mut nested = true;
    let mut monotone = true;
    for w in states.windows(2) {
        let (now, next) = (&w[0], &w[1]);
        let grow = next.thresholds.radius.clone() - now.thresholds.radius.clone();
        monotone &= grow >= BigRational::zero() && next.thresholds.gamma >= now.thresholds.gamma;
        for (j, c) in now.centers.iter().enumerate() {
            let target = next
                .members
                .iter()
                .position(|b| b.contains(&now.members[j][0]))
                .expect("members are partitioned");
            // B(c, R^t) ⊂ B(c', R^{t+1}) ⇔ |c − c'| ≤ R^{t+1} − R^t.
            nested &= grow >= BigRational::zero() && dist_sq(c, &next.centers[target]) <= grow.clone() * grow.clone();
        }
    }
    let gamma = &last.thresholds.gamma;
    let gamma_sq = gamma.clone() * gamma.clone();
    let separated = (0..last.centers.len())
        .all(|i| (i + 1..last.centers.len()).all(|j| dist_sq(&last.centers[i], &last.centers[j]) > gamma_sq));
    let two = BigRational::from_integer(2.into());
    let disjoint = gamma.clone() - two * last.thresholds.radius.clone() > BigRational::zero();
    Ok(ExactCertificate { partitions_agree, nested, separated, disjoint, monotone })
}

/// Decomposability of type `a` at radius `radius` and separation `epsilon`.
pub fn is_decomposable<T: Real>(dec: &ClusterDecomposition<T>, a: &IntegerPartition, radius: T, epsilon: T) -> bool {
    dec.cluster_type == *a && dec.radius <= radius && dec.epsilon < epsilon
}

/// Whether one type refines the other.
pub fn types_comparable(a: &IntegerPartition, b: &IntegerPartition) -> Result<bool> {
    a.comparable(b)
}

/// Single-linkage merge heights and the partition after each merge.
fn single_linkage<T: Real>(c: &Configuration<T>) -> Vec<(T, SetPartition)> {
    let n = c.len();
    let mut pairs: Vec<(T, usize, usize)> = Vec::with_capacity(n * n / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((distance(&c.points[i], &c.points[j]), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    let mut current = SetPartition::singletons(n);
    let mut merges = Vec::new();
    for (h, i, j) in pairs {
        if current.same_block(i, j) {
            continue;
        }
        let mut labels: Vec<usize> = (0..n).map(|x| current.block_of(x)).collect();
        let (from, to) = (current.block_of(j), current.block_of(i));
        for l in labels.iter_mut() {
            if *l == from {
                *l = to;
            }
        }
        current = SetPartition::from_labels(&labels);
        merges.push((h, current.clone()));
    }
    merges
}

/// Multi-scale boundary face of a configuration: cut the single-linkage tree
/// after `i` merges whenever the next merge height `h_{i+1}` exceeds both
/// `ratio · h_i` and `base_scale` (with `h_0 = 0`).
pub fn scale_chain<T: Real>(c: &Configuration<T>, base_scale: T, ratio: T) -> Result<ChainFlag> {
    c.distinct()?;
    if c.is_empty() {
        return argument("empty configuration");
    }
    // Written negated so that NaN is rejected.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    let bad = !(base_scale > T::zero()) || !(ratio > T::one());
    if bad {
        return argument("base_scale must be positive and ratio greater than 1");
    }
    let n = c.len();
    let merges = single_linkage(c);
    let mut chain = Vec::new();
    let mut previous = T::zero();
    let mut state = SetPartition::singletons(n);
    for (h, after) in merges {
        if h > ratio * previous && h > base_scale {
            chain.push(state.clone());
        }
        previous = h;
        state = after;
    }
    ChainFlag::new(n, chain)
}

/// Boundary defining functions `ρ_j` of a configuration near the face labelled by `chain`.
///
/// The levels are the non-singleton entries of the chain followed by the
/// one-block partition; `σ_j` is the least distance between points first
/// joined at level `j`, and `ρ_1 = 1/σ_1`, `ρ_j = σ_{j−1}/σ_j`.
pub fn boundary_coords<T: Real>(c: &Configuration<T>, chain: &ChainFlag) -> Result<Vec<T>> {
    c.distinct()?;
    if chain.k() != c.len() {
        return argument(format!("chain on {} points, configuration has {}", chain.k(), c.len()));
    }
    if c.len() < 2 {
        return argument("boundary coordinates need at least two points");
    }
    let n = c.len();
    let mut levels: Vec<SetPartition> = chain.entries().iter().filter(|p| !p.is_singletons()).cloned().collect();
    levels.push(SetPartition::one_block(n));
    let mut sigmas = Vec::with_capacity(levels.len());
    let mut below = SetPartition::singletons(n);
    for level in &levels {
        let mut sigma: Option<T> = None;
        for i in 0..n {
            for j in i + 1..n {
                if level.same_block(i, j) && !below.same_block(i, j) {
                    let dij = distance(&c.points[i], &c.points[j]);
                    sigma = Some(sigma.map_or(dij, |s| s.min(dij)));
                }
            }
        }
        sigmas.push(sigma.ok_or_else(|| Error::Chain(format!("level {level} joins nothing new")))?);
        below = join(&below, level)?;
    }
    let mut rho = vec![sigmas[0].recip()];
    rho.extend(sigmas.windows(2).map(|w| w[0] / w[1]));
    Ok(rho)
}

/// Converts a rational to the nearest float, for reporting exact thresholds.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
