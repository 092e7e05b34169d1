//! Exact arithmetic: rationals, the imaginary quadratic field `K`, cyclotomic
//! numbers, truncated p-adics, and exact integer lattices.

pub mod cyclo;
pub mod ext;
pub mod int;
pub mod lattice;
pub mod linalg;
pub mod padic;
pub mod quad;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Debug;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Minimal exact commutative ring interface shared by `Q`, `K`, `K(A)` and
/// cyclotomic extensions of those. Elements carry enough context to build
/// constants of the same ring (`zero_like`, `one_like`).
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational_like(&self, r: &Rational) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn is_zero_elem(&self) -> bool;

    fn scale_rat(&self, r: &Rational) -> Self {
        self.times(&self.from_rational_like(r))
    }
    fn pow_u(&self, e: u64) -> Self {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }
}

/// Scalars that form a field.
pub trait FieldScalar: Scalar {
    fn inverse(&self) -> Option<Self>;
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        r.clone()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl FieldScalar for Rational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Decimal-string form used in JSON output.
pub fn rat_str(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}
