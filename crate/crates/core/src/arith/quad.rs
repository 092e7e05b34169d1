//! The imaginary quadratic field `K = Q(√−D_K)` with integral basis `{1, ϑ}`,
//! `ϑ = (D′ + δ)/2`.

use super::int::{is_squarefree, kronecker_disc};
use super::{rat, FieldScalar, Rational, Scalar};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuadError {
    #[error("-{0} is not a fundamental discriminant: {1}")]
    NotFundamental(i64, &'static str),
}

/// How a rational prime decomposes in `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// `K` determined by `D_K`; `t = Tr ϑ = D′`, `n = N ϑ = (D′² + D_K)/4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    pub dk: i64,
    pub t: i64,
    pub n: i64,
}

impl QuadField {
    pub fn new(dk: i64) -> Result<Self, QuadError> {
        if dk <= 2 {
            if dk == 1 || dk == 2 {
                return Err(QuadError::NotFundamental(dk, "-D_K must be 0 or 1 mod 4"));
            }
            return Err(QuadError::NotFundamental(dk, "D_K must be positive"));
        }
        match dk.rem_euclid(4) {
            3 => {
                if !is_squarefree(dk as u64) {
                    return Err(QuadError::NotFundamental(dk, "odd part not squarefree"));
                }
            }
            0 => {
                let m = dk / 4;
                if m % 4 != 1 && m % 4 != 2 {
                    return Err(QuadError::NotFundamental(dk, "D_K/4 must be 1 or 2 mod 4"));
                }
                if !is_squarefree(m as u64) {
                    return Err(QuadError::NotFundamental(dk, "D_K/4 not squarefree"));
                }
            }
            _ => return Err(QuadError::NotFundamental(dk, "-D_K must be 0 or 1 mod 4")),
        }
        let dp = if dk % 2 == 1 { dk } else { dk / 2 };
        Ok(QuadField { dk, t: dp, n: (dp * dp + dk) / 4 })
    }

    /// `D′`.
    pub fn d_prime(&self) -> i64 {
        self.t
    }

    /// `u_K = #O_K^× / 2`.
    pub fn u_k(&self) -> i64 {
        match self.dk {
            3 => 3,
            4 => 2,
            _ => 1,
        }
    }

    pub fn unit_count(&self) -> usize {
        2 * self.u_k() as usize
    }

    pub fn splitting(&self, q: u64) -> Splitting {
        match kronecker_disc(-self.dk, q) {
            1 => Splitting::Split,
            -1 => Splitting::Inert,
            _ => Splitting::Ramified,
        }
    }

    /// `χ_K(q)` as an integer.
    pub fn chi(&self, q: u64) -> i32 {
        kronecker_disc(-self.dk, q)
    }

    pub fn elem(&self, u: Rational, v: Rational) -> QuadElem {
        QuadElem { f: *self, u, v }
    }

    pub fn int(&self, u: i64, v: i64) -> QuadElem {
        self.elem(rat(u), rat(v))
    }

    pub fn theta(&self) -> QuadElem {
        self.int(0, 1)
    }

    /// `δ = √−D_K = 2ϑ − D′`.
    pub fn delta(&self) -> QuadElem {
        self.int(-self.t, 2)
    }

    /// The units of `O_K` in a fixed order.
    pub fn units(&self) -> Vec<QuadElem> {
        let mut out = vec![self.int(1, 0), self.int(-1, 0)];
        match self.dk {
            4 => {
                // i = ϑ − 1
                out.push(self.int(-1, 1));
                out.push(self.int(1, -1));
            }
            3 => {
                // ω = ϑ − 2, ω² = 1 − ϑ
                out.push(self.int(-2, 1));
                out.push(self.int(2, -1));
                out.push(self.int(1, -1));
                out.push(self.int(-1, 1));
            }
            _ => {}
        }
        out
    }

    pub fn embed_theta(&self) -> Complex64 {
        Complex64::new(self.t as f64 / 2.0, (self.dk as f64).sqrt() / 2.0)
    }
}

/// `u + vϑ ∈ K` with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub f: QuadField,
    pub u: Rational,
    pub v: Rational,
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "({} + {}ϑ)", self.u, self.v)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{} + {}*t", super::rat_str(&self.u), super::rat_str(&self.v))
    }
}

impl QuadElem {
    pub fn from_rat(f: QuadField, r: Rational) -> Self {
        f.elem(r, Rational::zero())
    }

    pub fn conj(&self) -> Self {
        let t = rat(self.f.t);
        self.f.elem(&self.u + &self.v * &t, -&self.v)
    }

    pub fn trace(&self) -> Rational {
        &self.u * rat(2) + &self.v * rat(self.f.t)
    }

    pub fn norm(&self) -> Rational {
        &self.u * &self.u + &self.u * &self.v * rat(self.f.t) + &self.v * &self.v * rat(self.f.n)
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.u.is_integer() && self.v.is_integer()
    }

    pub fn embed_complex(&self) -> Complex64 {
        let u = self.u.to_f64().unwrap();
        let v = self.v.to_f64().unwrap();
        Complex64::new(u, 0.0) + self.f.embed_theta() * v
    }

    /// Integer coordinates if integral.
    pub fn int_coords(&self) -> Option<(i128, i128)> {
        if !self.is_integral() {
            return None;
        }
        Some((self.u.to_integer().to_i128()?, self.v.to_integer().to_i128()?))
    }
}

impl Scalar for QuadElem {
    fn zero_like(&self) -> Self {
        self.f.int(0, 0)
    }
    fn one_like(&self) -> Self {
        self.f.int(1, 0)
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        QuadElem::from_rat(self.f, r.clone())
    }
    fn plus(&self, o: &Self) -> Self {
        self.f.elem(&self.u + &o.u, &self.v + &o.v)
    }
    fn minus(&self, o: &Self) -> Self {
        self.f.elem(&self.u - &o.u, &self.v - &o.v)
    }
    fn times(&self, o: &Self) -> Self {
        // ϑ² = tϑ − n
        let vv = &self.v * &o.v;
        let u = &self.u * &o.u - &vv * rat(self.f.n);
        let v = &self.u * &o.v + &o.u * &self.v + vv * rat(self.f.t);
        self.f.elem(u, v)
    }
    fn negate(&self) -> Self {
        self.f.elem(-&self.u, -&self.v)
    }
    fn is_zero_elem(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }
}

impl FieldScalar for QuadElem {
    fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        let ninv = n.recip();
        Some(self.f.elem(&c.u * &ninv, &c.v * &ninv))
    }
}

impl QuadElem {
    pub fn is_one(&self) -> bool {
        self.u.is_one() && self.v.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields() {
        let k = QuadField::new(4).unwrap();
        assert_eq!((k.t, k.n), (2, 2));
        let k3 = QuadField::new(3).unwrap();
        assert_eq!((k3.t, k3.n), (3, 3));
        assert!(QuadField::new(5).is_err());
        assert!(QuadField::new(12).is_err());
        assert!(QuadField::new(8).is_ok());
        assert_eq!(k.theta().embed_complex(), Complex64::new(1.0, 1.0));
    }

    #[test]
    fn units_have_norm_one() {
        for dk in [3, 4, 7, 8] {
            let k = QuadField::new(dk).unwrap();
            let us = k.units();
            assert_eq!(us.len(), k.unit_count());
            for u in &us {
                assert_eq!(u.norm(), rat(1));
            }
        }
    }
}
