//! Scalar abstractions shared by the numeric modules.
//!
//! Geometry runs over [`Real`] (`f32`/`f64`). The threshold recursion of the
//! cluster algorithm and the resultant are written against [`OrderedField`]
//! and [`Field`] so the same code path runs in exact rational arithmetic.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static {
    /// Lossless conversion of a finite value into an exact rational.
    fn to_rational(self) -> Option<BigRational> {
        BigRational::from_float(self.to_f64()?)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A field with exact or approximate arithmetic (rationals, Gaussian rationals, complex floats).
pub trait Field: Clone + Num + Neg<Output = Self> + Debug {}

impl<T> Field for T where T: Clone + Num + Neg<Output = T> + Debug {}

/// An ordered field in which small integer constants can be formed.
pub trait OrderedField: Field + PartialOrd + FromPrimitive {
    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("small integer constant")
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

impl<T> OrderedField for T where T: Field + PartialOrd + FromPrimitive {}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-1.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let mut num: BigInt = digits.parse().ok()?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        return Some(BigRational::new(num, den));
    }
    let n: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}
