//! Quadratic extensions `T[X]/(X² − aX + b)` over an exact base, and the
//! completion ring `O_K ⊗ Z_p` to finite precision.

use super::padic::PadicNum;
use super::quad::QuadField;
use super::{FieldScalar, Rational, Scalar};
use num_complex::Complex64;
use num_traits::ToPrimitive;

/// `c0 + c1·X` with `X² = tr·X − nm`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadExt<T: Scalar> {
    pub c0: T,
    pub c1: T,
    pub tr: Rational,
    pub nm: Rational,
}

impl<T: Scalar> QuadExt<T> {
    pub fn new(c0: T, c1: T, tr: Rational, nm: Rational) -> Self {
        QuadExt { c0, c1, tr, nm }
    }

    pub fn base(x: T, tr: &Rational, nm: &Rational) -> Self {
        let z = x.zero_like();
        QuadExt { c0: x, c1: z, tr: tr.clone(), nm: nm.clone() }
    }

    /// The generator `X`.
    pub fn gen(proto: &T, tr: &Rational, nm: &Rational) -> Self {
        QuadExt { c0: proto.zero_like(), c1: proto.one_like(), tr: tr.clone(), nm: nm.clone() }
    }

    /// `X ↦ tr − X`.
    pub fn conj(&self) -> Self {
        QuadExt {
            c0: self.c0.plus(&self.c1.scale_rat(&self.tr)),
            c1: self.c1.negate(),
            tr: self.tr.clone(),
            nm: self.nm.clone(),
        }
    }

    /// Complex value with `X ↦ root` and the base embedded by `emb`.
    pub fn embed_with(&self, root: Complex64, emb: impl Fn(&T) -> Complex64) -> Complex64 {
        emb(&self.c0) + emb(&self.c1) * root
    }

    /// The two complex roots of `X² − tr·X + nm`, imaginary part of the first
    /// nonnegative.
    pub fn complex_roots(&self) -> [Complex64; 2] {
        let a = self.tr.to_f64().unwrap();
        let b = self.nm.to_f64().unwrap();
        let d = Complex64::new(a * a - 4.0 * b, 0.0).sqrt();
        [(Complex64::new(a, 0.0) + d) / 2.0, (Complex64::new(a, 0.0) - d) / 2.0]
    }
}

impl<T: Scalar> Scalar for QuadExt<T> {
    fn zero_like(&self) -> Self {
        QuadExt::base(self.c0.zero_like(), &self.tr, &self.nm)
    }
    fn one_like(&self) -> Self {
        QuadExt::base(self.c0.one_like(), &self.tr, &self.nm)
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        QuadExt::base(self.c0.from_rational_like(r), &self.tr, &self.nm)
    }
    fn plus(&self, o: &Self) -> Self {
        QuadExt { c0: self.c0.plus(&o.c0), c1: self.c1.plus(&o.c1), tr: self.tr.clone(), nm: self.nm.clone() }
    }
    fn minus(&self, o: &Self) -> Self {
        QuadExt { c0: self.c0.minus(&o.c0), c1: self.c1.minus(&o.c1), tr: self.tr.clone(), nm: self.nm.clone() }
    }
    fn times(&self, o: &Self) -> Self {
        let hh = self.c1.times(&o.c1);
        let c0 = self.c0.times(&o.c0).minus(&hh.scale_rat(&self.nm));
        let c1 = self.c0.times(&o.c1).plus(&self.c1.times(&o.c0)).plus(&hh.scale_rat(&self.tr));
        QuadExt { c0, c1, tr: self.tr.clone(), nm: self.nm.clone() }
    }
    fn negate(&self) -> Self {
        QuadExt { c0: self.c0.negate(), c1: self.c1.negate(), tr: self.tr.clone(), nm: self.nm.clone() }
    }
    fn is_zero_elem(&self) -> bool {
        self.c0.is_zero_elem() && self.c1.is_zero_elem()
    }
}

impl<T: FieldScalar> FieldScalar for QuadExt<T> {
    fn inverse(&self) -> Option<Self> {
        let c = self.conj();
        let n = self.times(&c);
        debug_assert!(n.c1.is_zero_elem());
        let ni = n.c0.inverse()?;
        Some(QuadExt { c0: c.c0.times(&ni), c1: c.c1.times(&ni), tr: self.tr.clone(), nm: self.nm.clone() })
    }
}

/// `u + vϑ ∈ O_K ⊗ Z_p` (or its fraction field) with `ϑ² = tϑ − n`.
#[derive(Clone, Debug, PartialEq)]
pub struct KpElem {
    pub t: i64,
    pub n: i64,
    pub u: PadicNum,
    pub v: PadicNum,
}

impl KpElem {
    pub fn new(f: &QuadField, u: PadicNum, v: PadicNum) -> Self {
        KpElem { t: f.t, n: f.n, u, v }
    }

    pub fn from_padic(f: &QuadField, u: PadicNum) -> Self {
        let v = PadicNum::zero(u.p, u.prec.max(0));
        KpElem::new(f, u, v)
    }

    pub fn p(&self) -> u64 {
        self.u.p
    }

    /// Image of an element of `K`.
    pub fn from_quad(x: &super::quad::QuadElem, p: u64, prec: i64) -> Self {
        KpElem::new(&x.f, PadicNum::from_rational(p, prec, &x.u), PadicNum::from_rational(p, prec, &x.v))
    }

    /// Minimum of the component valuations (`None` for zero).
    pub fn valuation(&self) -> Option<i64> {
        match (self.u.valuation(), self.v.valuation()) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.min(b)),
        }
    }

    pub fn prec(&self) -> i64 {
        self.u.prec.min(self.v.prec)
    }

    pub fn with_prec(&self, prec: i64) -> Self {
        KpElem { t: self.t, n: self.n, u: self.u.with_prec(prec), v: self.v.with_prec(prec) }
    }

    /// `u + v·r` for the chosen image `r` of `ϑ` in `Z_p` (split `p`).
    pub fn project(&self, r: &PadicNum) -> PadicNum {
        self.u.add(&self.v.mul(r))
    }

    pub fn congruent(&self, o: &Self, e: i64) -> bool {
        self.u.congruent(&o.u, e) && self.v.congruent(&o.v, e)
    }

    pub fn conj(&self) -> Self {
        let tv = self.v.mul(&PadicNum::from_i64(self.u.p, self.v.prec, self.t));
        KpElem { t: self.t, n: self.n, u: self.u.add(&tv), v: self.v.neg() }
    }

    pub fn norm(&self) -> PadicNum {
        let p = self.u.p;
        let pr = self.prec();
        let uv = self.u.mul(&self.v).mul(&PadicNum::from_i64(p, pr, self.t));
        let vv = self.v.mul(&self.v).mul(&PadicNum::from_i64(p, pr, self.n));
        self.u.mul(&self.u).add(&uv).add(&vv)
    }
}

impl Scalar for KpElem {
    fn zero_like(&self) -> Self {
        let z = PadicNum::zero(self.u.p, self.prec());
        KpElem { t: self.t, n: self.n, u: z.clone(), v: z }
    }
    fn one_like(&self) -> Self {
        let pr = self.prec();
        KpElem { t: self.t, n: self.n, u: PadicNum::from_i64(self.u.p, pr, 1), v: PadicNum::zero(self.u.p, pr) }
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        let pr = self.prec();
        KpElem { t: self.t, n: self.n, u: PadicNum::from_rational(self.u.p, pr, r), v: PadicNum::zero(self.u.p, pr) }
    }
    fn plus(&self, o: &Self) -> Self {
        KpElem { t: self.t, n: self.n, u: self.u.add(&o.u), v: self.v.add(&o.v) }
    }
    fn minus(&self, o: &Self) -> Self {
        KpElem { t: self.t, n: self.n, u: self.u.sub(&o.u), v: self.v.sub(&o.v) }
    }
    fn times(&self, o: &Self) -> Self {
        let p = self.u.p;
        let vv = self.v.mul(&o.v);
        let pr = vv.prec.max(0);
        let u = self.u.mul(&o.u).sub(&vv.mul(&PadicNum::from_i64(p, pr, self.n)));
        let v = self.u.mul(&o.v).add(&o.u.mul(&self.v)).add(&vv.mul(&PadicNum::from_i64(p, pr, self.t)));
        KpElem { t: self.t, n: self.n, u, v }
    }
    fn negate(&self) -> Self {
        KpElem { t: self.t, n: self.n, u: self.u.neg(), v: self.v.neg() }
    }
    fn is_zero_elem(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }
}

impl FieldScalar for KpElem {
    fn inverse(&self) -> Option<Self> {
        let ni = self.norm().inv()?;
        let c = self.conj();
        Some(KpElem { t: self.t, n: self.n, u: c.u.mul(&ni), v: c.v.mul(&ni) })
    }
}

impl Scalar for PadicNum {
    fn zero_like(&self) -> Self {
        PadicNum::zero(self.p, self.prec.max(0))
    }
    fn one_like(&self) -> Self {
        PadicNum::from_i64(self.p, self.prec.max(0), 1)
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        PadicNum::from_rational(self.p, self.prec.max(0), r)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl FieldScalar for PadicNum {
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
}

/// `ι_p(ϑ)` for split `p`: the least root of `x² − tx + n` mod `p`, lifted to
/// `Z_p` modulo `p^prec`.
pub fn theta_root(f: &QuadField, p: u64, prec: u32) -> Option<PadicNum> {
    if f.splitting(p) != super::quad::Splitting::Split {
        return None;
    }
    let poly = [f.n as i128, -(f.t as i128), 1];
    let (t, n, pi) = (f.t as i128, f.n as i128, p as i128);
    let r0 = if p == 2 {
        (0..2).find(|&x| (x * x - t * x + n).rem_euclid(2) == 0)?
    } else {
        let s = super::int::sqrt_mod_prime(super::int::md(t * t - 4 * n, pi), p)?;
        super::int::mulmod(super::int::md(t + s, pi), super::int::invmod(2, pi)?, pi)
    };
    let r = super::int::hensel_lift(&poly, r0, p, prec)?;
    Some(PadicNum::from_int(p, prec as i64, &r.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    #[test]
    fn quad_ext_inverse() {
        // X² + X + 3
        let (tr, nm) = (rat(-1), rat(3));
        let x = QuadExt::gen(&rat(0), &tr, &nm);
        let y = x.plus(&x.from_rational_like(&ratio(2, 5)));
        let yi = y.inverse().unwrap();
        assert_eq!(y.times(&yi), y.one_like());
        assert_eq!(x.times(&x).plus(&x).plus(&x.from_rational_like(&rat(3))), x.zero_like());
    }

    #[test]
    fn kp_inverse() {
        let f = QuadField::new(4).unwrap();
        let a = KpElem::new(&f, PadicNum::from_i64(3, 8, 2), PadicNum::from_i64(3, 8, 5));
        let b = a.inverse().unwrap();
        let one = a.times(&b);
        assert!(one.congruent(&a.one_like(), 8));
    }
}
