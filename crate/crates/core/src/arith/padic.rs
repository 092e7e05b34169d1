//! Truncated p-adic numbers `p^v · u` with `u` a unit known modulo
//! `p^{M − v}`, i.e. the value is known modulo `p^M`.

use super::int::val_big;
use super::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct PadicNum {
    pub p: u64,
    /// Absolute precision `M`: the value is determined modulo `p^M`.
    pub prec: i64,
    /// Valuation; equals `prec` when the value is zero to this precision.
    pub val: i64,
    /// Unit part in `[0, p^{prec − val})`; zero iff the value is zero.
    pub unit: BigInt,
}

fn ppow(p: u64, e: i64) -> BigInt {
    if e <= 0 {
        BigInt::one()
    } else {
        BigInt::from(p).pow(e as u32)
    }
}

impl fmt::Debug for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "O({}^{})", self.p, self.prec)
        } else {
            write!(f, "{}^{}*{} + O({}^{})", self.p, self.val, self.unit, self.p, self.prec)
        }
    }
}

impl PadicNum {
    pub fn zero(p: u64, prec: i64) -> Self {
        PadicNum { p, prec, val: prec, unit: BigInt::zero() }
    }

    pub fn from_int(p: u64, prec: i64, n: &BigInt) -> Self {
        Self::from_rational(p, prec, &Rational::from_integer(n.clone()))
    }

    pub fn from_i64(p: u64, prec: i64, n: i64) -> Self {
        Self::from_int(p, prec, &BigInt::from(n))
    }

    /// Image of a rational number; denominators may contain `p`.
    pub fn from_rational(p: u64, prec: i64, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(p, prec);
        }
        let vn = val_big(r.numer(), p) as i64;
        let vd = val_big(r.denom(), p) as i64;
        let v = vn - vd;
        if v >= prec {
            return Self::zero(p, prec);
        }
        let pb = BigInt::from(p);
        let un = r.numer() / pb.pow(vn as u32);
        let ud = r.denom() / pb.pow(vd as u32);
        let m = ppow(p, prec - v);
        let inv = mod_inverse(&ud, &m).expect("unit denominator");
        let unit = (un * inv).mod_floor(&m);
        PadicNum { p, prec, val: v, unit }
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// `None` for zero (to precision).
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    /// The value modulo `p^prec` as an integer in `[0, p^prec)`; requires a
    /// nonnegative valuation.
    pub fn residue(&self) -> BigInt {
        assert!(self.is_zero() || self.val >= 0, "negative valuation has no residue");
        if self.is_zero() {
            return BigInt::zero();
        }
        (&self.unit * ppow(self.p, self.val)).mod_floor(&ppow(self.p, self.prec))
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.p, o.p, "mixed primes");
    }

    /// Value as a signed integer representative `p^val · unit` when `val >= 0`,
    /// otherwise as a rational.
    pub fn to_rational(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        if self.val >= 0 {
            Rational::from_integer(&self.unit * ppow(self.p, self.val))
        } else {
            Rational::new(self.unit.clone(), ppow(self.p, -self.val))
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let prec = self.prec.min(o.prec);
        let base = self.val.min(o.val).min(prec);
        let sh = |x: &Self| -> BigInt {
            if x.is_zero() {
                BigInt::zero()
            } else {
                &x.unit * ppow(x.p, x.val - base)
            }
        };
        let sum = sh(self) + sh(o);
        Self::normalize(self.p, prec, base, sum)
    }

    fn normalize(p: u64, prec: i64, base: i64, x: BigInt) -> Self {
        if base >= prec {
            return Self::zero(p, prec);
        }
        let m = ppow(p, prec - base);
        let x = x.mod_floor(&m);
        if x.is_zero() {
            return Self::zero(p, prec);
        }
        let v = val_big(&x, p) as i64;
        let unit = (x / ppow(p, v)).mod_floor(&ppow(p, prec - base - v));
        PadicNum { p, prec, val: base + v, unit }
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = ppow(self.p, self.prec - self.val);
        PadicNum { unit: (-&self.unit).mod_floor(&m), ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        // A zero factor has val == prec, so one formula covers both cases.
        let prec = (self.prec + o.val).min(o.prec + self.val);
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p, prec);
        }
        let v = self.val + o.val;
        Self::normalize(self.p, prec, v, &self.unit * &o.unit)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let rel = self.prec - self.val;
        let m = ppow(self.p, rel);
        let u = mod_inverse(&self.unit, &m)?;
        let v = -self.val;
        Some(PadicNum { p: self.p, prec: v + rel, val: v, unit: u })
    }

    /// Reduce the stored precision to `prec`.
    pub fn with_prec(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        if self.is_zero() || self.val >= prec {
            return Self::zero(self.p, prec);
        }
        Self::normalize(self.p, prec, self.val, self.unit.clone())
    }

    pub fn mul_p_pow(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero(self.p, self.prec + e);
        }
        PadicNum { p: self.p, prec: self.prec + e, val: self.val + e, unit: self.unit.clone() }
    }

    /// Congruence modulo `p^e` (both must be known to at least `p^e`).
    pub fn congruent(&self, o: &Self, e: i64) -> bool {
        let d = self.sub(o);
        d.is_zero() || d.val >= e
    }

    pub fn to_i128_residue(&self) -> Option<i128> {
        self.residue().to_i128()
    }

    pub fn signed_residue(&self) -> BigInt {
        let r = self.residue();
        let m = ppow(self.p, self.prec);
        if &r * 2 > m {
            r - m
        } else {
            r
        }
    }

    pub fn abs_unit(&self) -> BigInt {
        self.unit.abs()
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}
