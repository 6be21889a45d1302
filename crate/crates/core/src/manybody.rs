//! Face lattices of many-body compactifications `M(V, W)` and their free
//! boundaries `B(V, W)`.
//!
//! Subspaces are abstract labels carrying a dimension; containment is read off
//! the meet table (`A ⊆ B` iff `A ∩ B = A`). The only coordinate-backed family is
//! the diagonal one, [`diagonal_structure`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::partitions::{all_partitions, join, SetPartition};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subspace {
    pub label: String,
    pub dim: usize,
}

/// A finite family of subspaces of `V` with its intersection table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManyBodyStructure {
    ambient_dim: usize,
    elements: Vec<Subspace>,
    index: BTreeMap<String, usize>,
    meets: BTreeMap<(usize, usize), usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    MissingZero,
    MissingTop,
    MissingMeet { a: String, b: String },
    MeetNotContained { a: String, b: String, meet: String },
    DimensionNotMonotone { smaller: String, larger: String },
}

impl ManyBodyStructure {
    /// Builds a structure from elements and `(a, b, a ∩ b)` triples. The meet of
    /// an element with itself is implicit.
    pub fn new(ambient_dim: usize, elements: Vec<Subspace>, meets: &[(String, String, String)]) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.label.clone(), i).is_some() {
                return argument(format!("duplicate label {}", e.label));
            }
            if e.dim > ambient_dim {
                return argument(format!("{} has dimension {} > {ambient_dim}", e.label, e.dim));
            }
        }
        let lookup = |l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| Error::Argument(format!("unknown label {l}")))
        };
        let mut table = BTreeMap::new();
        for i in 0..elements.len() {
            table.insert((i, i), i);
        }
        for (a, b, c) in meets {
            let (a, b, c) = (lookup(a)?, lookup(b)?, lookup(c)?);
            table.insert((a, b), c);
            table.insert((b, a), c);
        }
        Ok(ManyBodyStructure { ambient_dim, elements, index, meets: table })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.elements[self.idx(label)?].dim)
    }

    fn idx(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::Argument(format!("unknown label {label}")))
    }

    pub fn meet(&self, a: &str, b: &str) -> Result<Option<&str>> {
        let (a, b) = (self.idx(a)?, self.idx(b)?);
        Ok(self.meets.get(&(a, b)).map(|&c| self.elements[c].label.as_str()))
    }

    fn contained_idx(&self, a: usize, b: usize) -> bool {
        self.meets.get(&(a, b)) == Some(&a)
    }

    /// `A ⊆ B`.
    pub fn is_contained(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.contained_idx(self.idx(a)?, self.idx(b)?))
    }

    /// Containment either way.
    pub fn comparable(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.is_contained(a, b)? || self.is_contained(b, a)?)
    }

    pub fn zero(&self) -> Option<&Subspace> {
        self.elements.iter().find(|e| e.dim == 0)
    }

    pub fn top(&self) -> Option<&Subspace> {
        self.elements.iter().find(|e| e.dim == self.ambient_dim)
    }

    /// Checks the axioms: zero and `V` present, closure under intersection, and
    /// strictly increasing dimension along strict containment.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.zero().is_none() {
            out.push(Violation::MissingZero);
        }
        if self.top().is_none() {
            out.push(Violation::MissingTop);
        }
        let n = self.elements.len();
        for a in 0..n {
            for b in a + 1..n {
                let (la, lb) = (&self.elements[a].label, &self.elements[b].label);
                match self.meets.get(&(a, b)) {
                    None => out.push(Violation::MissingMeet { a: la.clone(), b: lb.clone() }),
                    Some(&c) => {
                        let inside = |x: usize| c == x || self.meets.get(&(c, x)) == Some(&c);
                        if !inside(a) || !inside(b) {
                            out.push(Violation::MeetNotContained {
                                a: la.clone(),
                                b: lb.clone(),
                                meet: self.elements[c].label.clone(),
                            });
                        }
                    }
                }
                for (s, l) in [(a, b), (b, a)] {
                    if self.contained_idx(s, l) && self.elements[s].dim >= self.elements[l].dim {
                        out.push(Violation::DimensionNotMonotone {
                            smaller: self.elements[s].label.clone(),
                            larger: self.elements[l].label.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    /// Labels of the boundary hypersurfaces of `B(V, W)`: every nonzero element.
    /// The top element labels the free boundary.
    pub fn hypersurfaces(&self) -> Vec<String> {
        self.elements
            .iter()
            .filter(|e| e.dim > 0)
            .map(|e| e.label.clone())
            .collect()
    }

    /// The corner of `M(V, W)` labelled by a chain `A_d ⊂ ⋯ ⊂ A_1` of nonzero
    /// elements. Labels may be given in any order.
    pub fn face_of_chain(&self, chain: &[&str]) -> Result<ManyBodyFace> {
        if chain.is_empty() {
            return Err(Error::Chain("empty chain".into()));
        }
        let mut idx = chain.iter().map(|l| self.idx(l)).collect::<Result<Vec<_>>>()?;
        idx.sort_by(|&a, &b| self.elements[b].dim.cmp(&self.elements[a].dim));
        for &i in &idx {
            if self.elements[i].dim == 0 {
                return Err(Error::Chain(format!("{} is the zero element", self.elements[i].label)));
            }
        }
        for w in idx.windows(2) {
            if w[0] == w[1] || !self.contained_idx(w[1], w[0]) {
                return Err(Error::Chain(format!(
                    "{} is not strictly contained in {}",
                    self.elements[w[1]].label, self.elements[w[0]].label
                )));
            }
        }
        let labels: Vec<String> = idx.iter().map(|&i| self.elements[i].label.clone()).collect();
        let dims: Vec<usize> = idx.iter().map(|&i| self.elements[i].dim).collect();
        let top_label = self.top().map(|t| t.label.clone()).unwrap_or_else(|| "V".into());
        let mut factors = Vec::new();
        if dims[0] < self.ambient_dim {
            factors.push(FaceFactor {
                kind: FactorKind::Closed,
                numerator: top_label,
                denominator: Some(labels[0].clone()),
                dim: self.ambient_dim - dims[0],
            });
        }
        for i in 0..labels.len() {
            let below = dims.get(i + 1).copied().unwrap_or(0);
            factors.push(FaceFactor {
                kind: FactorKind::Boundary,
                numerator: labels[i].clone(),
                denominator: labels.get(i + 1).cloned(),
                dim: dims[i] - below - 1,
            });
        }
        Ok(ManyBodyFace { chain: labels, factors })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorKind {
    /// `M(A/A′)`, a many-body compactification.
    Closed,
    /// `B(A/A′)`, a free boundary.
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceFactor {
    pub kind: FactorKind,
    pub numerator: String,
    /// `None` for a quotient by the zero element.
    pub denominator: Option<String>,
    pub dim: usize,
}

/// `M(V/A_1) × B(A_1/A_2) × ⋯ × B(A_d)`; the closed factor is omitted when `A_1 = V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManyBodyFace {
    /// `A_1 ⊃ ⋯ ⊃ A_d`, largest first.
    pub chain: Vec<String>,
    pub factors: Vec<FaceFactor>,
}

impl ManyBodyFace {
    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).sum()
    }

    pub fn codim(&self) -> usize {
        self.chain.len()
    }
}

/// Diagonals `D_λ / D_k` of `E^k / E` with `dim E = m`, labelled by the
/// restricted-growth string of `λ`. The zero element is the one-block partition
/// and the top is the all-singletons partition.
pub fn diagonal_structure(k: usize, m: usize) -> Result<ManyBodyStructure> {
    if k < 2 || m == 0 {
        return argument(format!("need k >= 2 and m >= 1, got k = {k}, m = {m}"));
    }
    let parts = all_partitions(k)?;
    let elements = parts
        .iter()
        .map(|l| Subspace { label: l.to_rgs_string(), dim: m * (l.num_blocks() - 1) })
        .collect();
    let mut meets = Vec::new();
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            meets.push((a.to_rgs_string(), b.to_rgs_string(), join(a, b)?.to_rgs_string()));
        }
    }
    ManyBodyStructure::new(m * (k - 1), elements, &meets)
}

/// Label of the diagonal `D_λ` in [`diagonal_structure`].
pub fn diagonal_label(lambda: &SetPartition) -> String {
    lambda.to_rgs_string()
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    ambient_dim: usize,
    elements: Vec<Subspace>,
    meets: Vec<(String, String, String)>,
}

impl Serialize for ManyBodyStructure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let meets = self
            .meets
            .iter()
            .filter(|((a, b), _)| a < b)
            .map(|((a, b), c)| {
                (
                    self.elements[*a].label.clone(),
                    self.elements[*b].label.clone(),
                    self.elements[*c].label.clone(),
                )
            })
            .collect();
        StructureJson { ambient_dim: self.ambient_dim, elements: self.elements.clone(), meets }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ManyBodyStructure {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = StructureJson::deserialize(deserializer)?;
        ManyBodyStructure::new(raw.ambient_dim, raw.elements, &raw.meets).map_err(serde::de::Error::custom)
    }
}
