//! Exact arithmetic in cyclotomic fields `Q(ζ_n)`.
//!
//! Elements carry their own conductor; mixed arithmetic lifts both operands to
//! the least common multiple, so `i = ζ_4` and `ζ_3` multiply inside `Q(ζ_12)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Zero};

use crate::scalar::parse_rational;

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Poly {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).collect())
}

/// Quotient and remainder; `b` must be nonzero.
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    let lead = b.last().expect("division by the zero polynomial").clone();
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (j, y) in b.iter().enumerate() {
            r[shift + j] -= &c * y;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

/// Inverse of `a` modulo an irreducible `m`, by the extended Euclidean algorithm.
fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<Poly> {
    let (mut r0, mut r1) = (m.to_vec(), poly_divrem(a, m).1);
    let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
    }
    // r0 is a nonzero constant when gcd(a, m) = 1.
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].recip();
    Some(trim(poly_divrem(&s0.iter().map(|x| x * &c).collect::<Poly>(), m).1))
}

/// The `n`-th cyclotomic polynomial, cached.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigRational> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Poly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    let mut p = vec![BigRational::zero(); n as usize + 1];
    p[0] = -BigRational::one();
    p[n as usize] = BigRational::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_divrem(&p, &cyclotomic_polynomial(d)).0;
        }
    }
    cache.lock().unwrap().insert(n, p.clone());
    p
}

/// An element of `Q(ζ_n)` as a polynomial in `ζ_n` of degree below `φ(n)`.
/// Conductor `0` marks a plain rational.
#[derive(Clone)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Poly,
}

impl Cyclotomic {
    pub fn rational(q: BigRational) -> Self {
        Cyclotomic { order: 0, coeffs: trim(vec![q]) }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `ζ_n^j` with `ζ_n = e^{2πi/n}`.
    pub fn root_of_unity(n: u32, j: u64) -> Self {
        assert!(n >= 1, "root of unity of order 0");
        let e = (j % n as u64) as usize;
        let mut coeffs = vec![BigRational::zero(); e + 1];
        coeffs[e] = BigRational::one();
        Self::reduced(n, coeffs)
    }

    /// `a + b·i` with `i = ζ_4`.
    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Self::reduced(4, vec![re, im])
    }

    pub fn i() -> Self {
        Self::root_of_unity(4, 1)
    }

    /// Conductor of the field the element is stored in (`0` for rationals).
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients in the power basis of `ζ_order`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn reduced(order: u32, coeffs: Poly) -> Self {
        let coeffs = if order == 0 {
            trim(coeffs)
        } else {
            poly_divrem(&coeffs, &cyclotomic_polynomial(order)).1
        };
        if coeffs.len() <= 1 {
            Cyclotomic { order: 0, coeffs }
        } else {
            Cyclotomic { order, coeffs }
        }
    }

    /// Re-expresses the element in `Q(ζ_target)`; `target` must be a multiple of the conductor.
    fn lift(&self, target: u32) -> Poly {
        if self.order == 0 || target == 0 || target == self.order {
            return self.coeffs.clone();
        }
        debug_assert_eq!(target % self.order, 0);
        let step = (target / self.order) as usize;
        let mut out = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (e, c) in self.coeffs.iter().enumerate() {
            out[e * step] = c.clone();
        }
        poly_divrem(&out, &cyclotomic_polynomial(target)).1
    }

    fn common(&self, other: &Self) -> u32 {
        match (self.order, other.order) {
            (0, b) => b,
            (a, 0) => a,
            (a, b) => a.lcm(&b),
        }
    }

    /// Complex conjugate: `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        if self.order == 0 {
            return self.clone();
        }
        let n = self.order as usize;
        let mut out = vec![BigRational::zero(); n];
        for (e, c) in self.coeffs.iter().enumerate() {
            out[(n - e) % n] += c;
        }
        Self::reduced(self.order, out)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.order == 0 {
            return Some(Self::rational(self.coeffs[0].recip()));
        }
        let m = cyclotomic_polynomial(self.order);
        poly_inverse_mod(&self.coeffs, &m).map(|p| Self::reduced(self.order, p))
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Numerical value `(re, im)`.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let n = self.order.max(1) as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (e, c)| {
            let angle = std::f64::consts::TAU * e as f64 / n;
            let c = c.to_f64().unwrap_or(f64::NAN);
            (re + c * angle.cos(), im + c * angle.sin())
        })
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let l = self.common(other);
        self.lift(l) == other.lift(l)
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| match e {
                0 => c.to_string(),
                1 => format!("({c})·ζ{}", self.order),
                _ => format!("({c})·ζ{}^{e}", self.order),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let l = self.common(rhs);
        let (a, b) = (self.lift(l), rhs.lift(l));
        let n = a.len().max(b.len());
        let zero = BigRational::zero();
        let sum = trim((0..n).map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero)).collect());
        // Both summands are already reduced in Q(ζ_l).
        if sum.len() <= 1 {
            Cyclotomic { order: 0, coeffs: sum }
        } else {
            Cyclotomic { order: l, coeffs: sum }
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let l = self.common(rhs);
        Cyclotomic::reduced(l, poly_mul(&self.lift(l), &rhs.lift(l)))
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { order: self.order, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &(-rhs)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl Div for Cyclotomic {
    type Output = Cyclotomic;
    fn div(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs.inv().expect("division by zero in a cyclotomic field")
    }
}

/// Fields have no nontrivial remainders.
impl Rem for Cyclotomic {
    type Output = Cyclotomic;
    fn rem(self, rhs: Cyclotomic) -> Cyclotomic {
        assert!(!rhs.is_zero(), "remainder by zero");
        Cyclotomic::zero()
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic { order: 0, coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Self::integer(1)
    }
}

impl Num for Cyclotomic {
    type FromStrRadixErr = crate::Error;

    /// Parses a rational literal; only radix 10 is supported.
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, crate::Error> {
        if radix != 10 {
            return Err(crate::Error::Parse(format!("radix {radix} not supported")));
        }
        parse_rational(s)
            .map(Self::rational)
            .ok_or_else(|| crate::Error::Parse(format!("bad rational {s:?}")))
    }
}
