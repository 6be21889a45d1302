//! Donaldson's rational-map coordinates `f = φ/ψ`.
//!
//! `ψ(z) = z^k + b_{k−1}z^{k−1} + ⋯ + b_0` is monic of degree `k` and
//! `φ(z) = a_{k−1}z^{k−1} + ⋯ + a_0`. A pair is *based* when the resultant
//! `R(φ, ψ) = Π_j φ(β_j)` over the roots `β_j` of `ψ` is nonzero.
//!
//! Coefficients live in any [`Field`]: exact Gaussian rationals for the
//! predicates, cyclotomic elements for the exact `Z_k` deck action, and
//! `Complex<f64>` for exploration.

pub mod cyclotomic;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::scalar::{parse_rational, Field};

pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic};

/// Exact complex rationals `a + bi`.
pub type GaussianRational = Complex<BigRational>;

/// Complex conjugation on a coefficient field.
pub trait Conjugate: Field {
    fn conj(&self) -> Self;

    /// `|x| = 1`, decided exactly where the arithmetic is exact.
    fn is_unit_modulus(&self) -> bool {
        self.clone() * self.conj() == Self::one()
    }
}

impl Conjugate for GaussianRational {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
}

impl Conjugate for BigRational {
    fn conj(&self) -> Self {
        self.clone()
    }
}

impl Conjugate for Cyclotomic {
    fn conj(&self) -> Self {
        Cyclotomic::conj(self)
    }
}

/// Tolerance used for unit-modulus checks in floating point.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

impl Conjugate for Complex<f64> {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn is_unit_modulus(&self) -> bool {
        (self.norm() - 1.0).abs() <= FLOAT_TOLERANCE
    }
}

/// A pair `(φ, ψ)` with `ψ` monic of degree `k` and `deg φ ≤ k − 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMapPair<F> {
    phi: Vec<F>,
    psi: Vec<F>,
}

impl<F: Field> RationalMapPair<F> {
    /// `phi = (a_0, …, a_{k−1})`, `psi = (b_0, …, b_{k−1})`; the leading `z^k` of `ψ` is implicit.
    pub fn new(phi: Vec<F>, psi: Vec<F>) -> Result<Self> {
        if phi.is_empty() {
            return argument("degree must be at least 1");
        }
        if phi.len() != psi.len() {
            return argument(format!("phi has {} coefficients, psi has {}", phi.len(), psi.len()));
        }
        Ok(RationalMapPair { phi, psi })
    }

    /// `ψ = Π (z − β_j)` for the given roots.
    pub fn from_roots(phi: Vec<F>, roots: &[F]) -> Result<Self> {
        let mut psi = vec![F::one()];
        for beta in roots {
            let mut next = vec![F::zero(); psi.len() + 1];
            for (e, c) in psi.iter().enumerate() {
                next[e + 1] = next[e + 1].clone() + c.clone();
                next[e] = next[e].clone() - beta.clone() * c.clone();
            }
            psi = next;
        }
        psi.pop();
        Self::new(phi, psi)
    }

    pub fn k(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[F] {
        &self.phi
    }

    pub fn psi(&self) -> &[F] {
        &self.psi
    }

    /// `ψ` with its leading coefficient, low degree first.
    pub fn psi_full(&self) -> Vec<F> {
        let mut p = self.psi.clone();
        p.push(F::one());
        p
    }

    /// `Res(ψ, φ)` as the determinant of the Sylvester matrix of `ψ` (degree `k`)
    /// and `φ` (formal degree `k − 1`); equals `Π_j φ(β_j)`.
    pub fn resultant(&self) -> F {
        determinant(sylvester_matrix(&self.psi_full(), &self.phi))
    }

    /// `φ ↦ λφ` for any scalar (no modulus check).
    pub fn scale_phi(&self, lambda: &F) -> Self {
        RationalMapPair { phi: self.phi.iter().map(|a| lambda.clone() * a.clone()).collect(), psi: self.psi.clone() }
    }

    pub fn map_coefficients<G: Field>(&self, f: impl Fn(&F) -> G) -> RationalMapPair<G> {
        RationalMapPair { phi: self.phi.iter().map(&f).collect(), psi: self.psi.iter().map(&f).collect() }
    }

    pub fn is_based(&self) -> bool {
        !self.resultant().is_zero()
    }

    fn trace_free(&self) -> bool {
        self.psi.last().is_some_and(Zero::is_zero)
    }

    /// `b_{k−1} = 0` and `R(φ, ψ) = 1`.
    pub fn is_strongly_centred(&self) -> bool {
        self.trace_free() && self.resultant().is_one()
    }
}

impl<F: Conjugate> RationalMapPair<F> {
    /// `b_{k−1} = 0` and `|R(φ, ψ)| = 1`.
    pub fn is_centred(&self) -> bool {
        let r = self.resultant();
        !r.is_zero() && self.trace_free() && r.is_unit_modulus()
    }

    /// The circle action `φ ↦ λφ`, `|λ| = 1`.
    pub fn torus_act(&self, lambda: &F) -> Result<Self> {
        if !lambda.is_unit_modulus() {
            return argument(format!("{lambda:?} does not have modulus 1"));
        }
        Ok(self.scale_phi(lambda))
    }
}

/// Evaluates a polynomial (low degree first) by Horner's rule.
pub fn evaluate<F: Field>(p: &[F], z: &F) -> F {
    p.iter().rev().fold(F::zero(), |acc, c| acc * z.clone() + c.clone())
}

/// `Π_j φ(β_j)`.
pub fn resultant_from_roots<F: Field>(phi: &[F], roots: &[F]) -> F {
    roots.iter().fold(F::one(), |acc, b| acc * evaluate(phi, b))
}

/// Sylvester matrix of `f` (degree `n = f.len() − 1`) and `g` (formal degree
/// `m = g.len() − 1`), coefficients given low degree first: `m` shifted rows of
/// `f` followed by `n` shifted rows of `g`, leading coefficients on the left.
pub fn sylvester_matrix<F: Field>(f: &[F], g: &[F]) -> Vec<Vec<F>> {
    let (n, m) = (f.len() - 1, g.len() - 1);
    let size = n + m;
    let row = |coeffs: &[F], shift: usize| {
        let mut r = vec![F::zero(); size];
        for (pos, c) in coeffs.iter().rev().enumerate() {
            r[shift + pos] = c.clone();
        }
        r
    };
    (0..m).map(|s| row(f, s)).chain((0..n).map(|s| row(g, s))).collect()
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn determinant<F: Field>(mut a: Vec<Vec<F>>) -> F {
    let n = a.len();
    if n == 0 {
        return F::one();
    }
    let mut negate = false;
    let mut prev_inv = F::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return F::zero(),
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a[i][j].clone() * pivot.clone() - a[i][k].clone() * a[k][j].clone()) * prev_inv.clone();
                a[i][j] = v;
            }
        }
        prev_inv = F::one() / pivot;
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Exact Gaussian-rational map.
pub type ExactRationalMap = RationalMapPair<GaussianRational>;
/// Map over the cyclotomic numbers, the target of the exact deck action.
pub type CyclotomicRationalMap = RationalMapPair<Cyclotomic>;
/// Floating-point map for exploration.
pub type FloatRationalMap = RationalMapPair<Complex<f64>>;

pub fn gaussian_to_cyclotomic(z: &GaussianRational) -> Cyclotomic {
    Cyclotomic::gaussian(z.re.clone(), z.im.clone())
}

impl ExactRationalMap {
    pub fn to_cyclotomic(&self) -> CyclotomicRationalMap {
        self.map_coefficients(gaussian_to_cyclotomic)
    }

    pub fn to_float(&self) -> FloatRationalMap {
        use num_traits::ToPrimitive;
        self.map_coefficients(|z| Complex::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN)))
    }
}

/// Generator `e^{2πi/k}` of the deck group `Z_k`.
pub fn deck_generator(k: usize) -> Cyclotomic {
    Cyclotomic::root_of_unity(k as u32, 1)
}

/// The deck transformation `φ ↦ ζφ` for a `k`-th root of unity `ζ`, checked exactly.
pub fn deck_transform(zeta: &Cyclotomic, m: &CyclotomicRationalMap) -> Result<CyclotomicRationalMap> {
    if zeta.pow(m.k() as u64) != Cyclotomic::one() {
        return argument(format!("{zeta} is not a {}-th root of unity", m.k()));
    }
    Ok(m.scale_phi(zeta))
}

/// The deck transformation by `ζ_k^j` applied to an exact Gaussian map.
pub fn deck_transform_power(j: usize, m: &ExactRationalMap) -> CyclotomicRationalMap {
    m.to_cyclotomic().scale_phi(&deck_generator(m.k()).pow(j as u64))
}

/// Floating-point deck transformation; `ζ^k` must be within `tol` of 1.
pub fn deck_transform_float(zeta: Complex<f64>, m: &FloatRationalMap, tol: f64) -> Result<FloatRationalMap> {
    let power = zeta.powu(m.k() as u32);
    if (power - Complex::new(1.0, 0.0)).norm() > tol {
        return argument(format!("{zeta} is not a {}-th root of unity within {tol}", m.k()));
    }
    Ok(m.scale_phi(&zeta))
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    k: usize,
    phi: Vec<[String; 2]>,
    psi: Vec<[String; 2]>,
}

fn parse_gaussian(pair: &[String; 2]) -> Result<GaussianRational> {
    let part = |s: &String| parse_rational(s).ok_or_else(|| Error::Parse(format!("bad rational {s:?}")));
    Ok(Complex::new(part(&pair[0])?, part(&pair[1])?))
}

impl Serialize for ExactRationalMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let enc = |v: &[GaussianRational]| v.iter().map(|z| [z.re.to_string(), z.im.to_string()]).collect();
        MapJson { k: self.k(), phi: enc(&self.phi), psi: enc(&self.psi) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactRationalMap {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MapJson::deserialize(deserializer)?;
        if raw.phi.len() != raw.k || raw.psi.len() != raw.k {
            return Err(D::Error::custom(format!("expected {} coefficients in phi and psi", raw.k)));
        }
        let dec = |v: &[[String; 2]]| v.iter().map(parse_gaussian).collect::<Result<Vec<_>>>();
        let phi = dec(&raw.phi).map_err(D::Error::custom)?;
        let psi = dec(&raw.psi).map_err(D::Error::custom)?;
        RationalMapPair::new(phi, psi).map_err(D::Error::custom)
    }
}
