//! Combinatorial corner structure of compactified SU(2) monopole moduli spaces.
//!
//! * [`partitions`]: set partitions, refinement lattice, orbits, chains, symmetry groups.
//! * [`manybody`]: face lattices of many-body compactifications.
//! * [`faces`]: boundary-face atlas of the compactified moduli space.
//! * [`gibbons_manton`]: Chern-weight systems of Gibbons–Manton torus bundles.
//! * [`clusters`]: cluster decomposition of point configurations.
//! * [`ratmaps`]: rational-map coordinates and exact resultants.
//!
//! Geometry is generic over [`scalar::Real`]; resultants and the threshold
//! recursion are generic over [`scalar::Field`], so the same code runs on
//! floats, rationals, Gaussian rationals and cyclotomic numbers. The aliases
//! below fix the common choices.

pub mod clusters;
pub mod error;
pub mod faces;
pub mod gibbons_manton;
pub mod manybody;
pub mod partitions;
pub mod ratmaps;
pub mod scalar;

pub use error::{Error, Result};
pub use partitions::{ChainFlag, IntegerPartition, Permutation, SetPartition};
pub use ratmaps::{
    Cyclotomic, CyclotomicRationalMap, ExactRationalMap, FloatRationalMap, GaussianRational, RationalMapPair,
};

pub use num_rational::BigRational;

/// Point configuration in double precision.
pub type Configuration = clusters::Configuration<f64>;
/// Point configuration in single precision.
pub type Configuration32 = clusters::Configuration<f32>;
pub type StrongFieldInput = clusters::StrongFieldInput<f64>;
pub type Component = clusters::Component<f64>;
pub type ClusterDecomposition = clusters::ClusterDecomposition<f64>;
/// Threshold recursion in exact arithmetic.
pub type ExactThresholds = clusters::Thresholds<BigRational>;
