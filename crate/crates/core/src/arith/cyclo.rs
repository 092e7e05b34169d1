//! Cyclotomic numbers `Σ c_i ζ_n^i` over a coefficient ring `C`, stored in the
//! power basis of `Q(ζ_n)` reduced modulo `Φ_n`.
//!
//! Conductors `≡ 2 mod 4` never occur (`ζ_{2m} = −ζ_m^{(m+1)/2}` for odd `m`),
//! and conductors are lowered eagerly along primes `p` with `p² | n`.

use super::int::{factor, gcd, val_big};
use super::linalg::det;
use super::{rat, Rational, Scalar};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

fn phi_cache() -> &'static Mutex<HashMap<u64, Vec<i64>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<i64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (low to high) of the cyclotomic polynomial `Φ_n`.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    if let Some(v) = phi_cache().lock().unwrap().get(&n) {
        return v.clone();
    }
    // Φ_n = (x^n − 1) / Π_{d | n, d < n} Φ_d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let den = cyclotomic_poly(d);
            num = poly_div_exact(&num, &den);
        }
    }
    phi_cache().lock().unwrap().insert(n, num.clone());
    num
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut q = vec![0i64; da - db + 1];
    for i in (0..=da - db).rev() {
        let c = r[i + db];
        q[i] = c;
        for j in 0..=db {
            r[i + j] -= c * b[j];
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n).iter().fold(1, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1))
}

#[derive(Clone, Debug)]
pub struct CycloNum<C: Scalar> {
    n: u64,
    c: Vec<C>,
}

impl<C: Scalar> CycloNum<C> {
    /// The element `Σ poly[i] ζ_n^i` for an arbitrary-length coefficient list.
    pub fn from_poly(n: u64, poly: Vec<C>) -> Self {
        assert!(n >= 1 && !poly.is_empty());
        let proto = poly[0].zero_like();
        let mut full = vec![proto.clone(); n as usize];
        for (i, x) in poly.into_iter().enumerate() {
            let j = i % n as usize;
            full[j] = full[j].plus(&x);
        }
        if n % 4 == 2 {
            // Rewrite in conductor m = n/2 via ζ_n = −ζ_m^{(m+1)/2}.
            let m = n / 2;
            let s = (m + 1) / 2;
            let mut out = vec![proto.clone(); m as usize];
            for (i, x) in full.into_iter().enumerate() {
                if x.is_zero_elem() {
                    continue;
                }
                let e = ((i as u64 * s) % m) as usize;
                let term = if i % 2 == 1 { x.negate() } else { x };
                out[e] = out[e].plus(&term);
            }
            return Self::from_poly(m, out);
        }
        let c = reduce_mod_phi(n, full);
        let mut z = CycloNum { n, c };
        z.lower();
        z
    }

    pub fn from_scalar(x: C) -> Self {
        CycloNum { n: 1, c: vec![x] }
    }

    /// `ζ_order^e` with coefficient ring taken from `proto`.
    pub fn zeta_pow(order: u64, e: i64, proto: &C) -> Self {
        let e = e.rem_euclid(order as i64) as usize;
        let mut poly = vec![proto.zero_like(); order as usize];
        poly[e] = proto.one_like();
        Self::from_poly(order, poly)
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    fn lower(&mut self) {
        loop {
            let mut changed = false;
            for (p, e) in factor(self.n) {
                if e < 2 {
                    continue;
                }
                let pu = p as usize;
                if self.c.iter().enumerate().all(|(i, x)| i % pu == 0 || x.is_zero_elem()) {
                    let m = self.n / p;
                    let newc: Vec<C> = self.c.iter().step_by(pu).cloned().collect();
                    if m % 4 == 2 {
                        *self = Self::from_poly(m, newc);
                    } else {
                        self.n = m;
                        self.c = newc;
                    }
                    changed = true;
                    break;
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// Full length-`m` exponent vector in conductor `m` (a multiple of `n`).
    fn spread_to(&self, m: u64) -> Vec<C> {
        assert!(m % self.n == 0);
        let d = (m / self.n) as usize;
        let mut out = vec![self.c[0].zero_like(); m as usize];
        for (i, x) in self.c.iter().enumerate() {
            out[i * d] = x.clone();
        }
        out
    }

    fn common(&self, o: &Self) -> (u64, Vec<C>, Vec<C>) {
        let m = self.n.lcm(&o.n);
        (m, self.spread_to(m), o.spread_to(m))
    }

    /// `σ_a : ζ ↦ ζ^a` for `a` prime to the conductor.
    pub fn galois(&self, a: i64) -> Self {
        let n = self.n as i64;
        assert_eq!(gcd(a as i128, n as i128), 1, "σ_a needs gcd(a, n) = 1");
        let mut out = vec![self.c[0].zero_like(); self.n as usize];
        for (i, x) in self.c.iter().enumerate() {
            let j = (a.rem_euclid(n) * i as i64 % n) as usize;
            out[j] = out[j].plus(x);
        }
        Self::from_poly(self.n, out)
    }

    /// Complex image under `ζ_n ↦ e^{2πi/n}` with coefficients embedded by `emb`.
    pub fn embed_with(&self, emb: impl Fn(&C) -> Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let w = 2.0 * std::f64::consts::PI / self.n as f64;
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero_elem() {
                continue;
            }
            acc += emb(x) * Complex64::from_polar(1.0, w * i as f64);
        }
        acc
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> CycloNum<D> {
        let c: Vec<D> = self.c.iter().map(f).collect();
        CycloNum::from_poly(self.n, c)
    }
}

fn reduce_mod_phi<C: Scalar>(n: u64, mut a: Vec<C>) -> Vec<C> {
    let phi = cyclotomic_poly(n);
    let d = phi.len() - 1;
    let proto = a[0].zero_like();
    for i in (d..a.len()).rev() {
        if a[i].is_zero_elem() {
            continue;
        }
        let coef = a[i].clone();
        for (j, &pj) in phi.iter().enumerate().take(d) {
            if pj != 0 {
                let t = coef.scale_rat(&rat(pj));
                a[i - d + j] = a[i - d + j].minus(&t);
            }
        }
        a[i] = proto.clone();
    }
    a.truncate(d.max(1));
    a
}

impl<C: Scalar> PartialEq for CycloNum<C> {
    fn eq(&self, o: &Self) -> bool {
        if self.n == o.n {
            return self.c == o.c;
        }
        let (m, a, b) = self.common(o);
        reduce_mod_phi(m, a) == reduce_mod_phi(m, b)
    }
}

impl<C: Scalar> Scalar for CycloNum<C> {
    fn zero_like(&self) -> Self {
        Self::from_scalar(self.c[0].zero_like())
    }
    fn one_like(&self) -> Self {
        Self::from_scalar(self.c[0].one_like())
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        Self::from_scalar(self.c[0].from_rational_like(r))
    }
    fn plus(&self, o: &Self) -> Self {
        let (m, a, b) = self.common(o);
        Self::from_poly(m, a.iter().zip(&b).map(|(x, y)| x.plus(y)).collect())
    }
    fn minus(&self, o: &Self) -> Self {
        let (m, a, b) = self.common(o);
        Self::from_poly(m, a.iter().zip(&b).map(|(x, y)| x.minus(y)).collect())
    }
    fn times(&self, o: &Self) -> Self {
        let m = self.n.lcm(&o.n);
        let d1 = (m / self.n) as usize;
        let d2 = (m / o.n) as usize;
        let mu = m as usize;
        let mut out = vec![self.c[0].zero_like(); mu];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero_elem() {
                continue;
            }
            for (j, y) in o.c.iter().enumerate() {
                if y.is_zero_elem() {
                    continue;
                }
                let e = (i * d1 + j * d2) % mu;
                out[e] = out[e].plus(&x.times(y));
            }
        }
        Self::from_poly(m, out)
    }
    fn negate(&self) -> Self {
        CycloNum { n: self.n, c: self.c.iter().map(|x| x.negate()).collect() }
    }
    fn is_zero_elem(&self) -> bool {
        self.c.iter().all(|x| x.is_zero_elem())
    }
}

/// Result of a valuation computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(Rational),
    Infinite,
}

impl CycloNum<Rational> {
    pub fn rational(r: Rational) -> Self {
        Self::from_scalar(r)
    }

    /// Field norm to `Q` (determinant of multiplication).
    pub fn norm(&self) -> Rational {
        let d = self.c.len();
        if self.n == 1 {
            return self.c[0].clone();
        }
        let mut m = vec![vec![Rational::zero(); d]; d];
        for j in 0..d {
            let mut e = vec![Rational::zero(); j + 1];
            e[j] = rat(1);
            let basis = CycloNum::from_poly(self.n, e);
            let prod = self.times(&basis);
            let spread = prod.spread_to(self.n);
            let col = reduce_mod_phi(self.n, spread);
            for i in 0..d {
                m[i][j] = col[i].clone();
            }
        }
        det(&m)
    }

    /// `ord_p` normalized by `ord_p(p) = 1`, via the norm. The conductor must
    /// be a power of `p` (one prime above `p`).
    pub fn p_valuation(&self, p: u64) -> Valuation {
        if self.is_zero_elem() {
            return Valuation::Infinite;
        }
        let f = factor(self.n);
        assert!(f.is_empty() || (f.len() == 1 && f[0].0 == p), "conductor must be a power of p");
        let nm = self.norm();
        let v = val_big(nm.numer(), p) as i64 - val_big(nm.denom(), p) as i64;
        Valuation::Finite(Rational::new(v.into(), (self.c.len() as i64).into()))
    }

    pub fn embed_complex(&self) -> Complex64 {
        use num_traits::ToPrimitive;
        self.embed_with(|x| Complex64::new(x.to_f64().unwrap(), 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn z(order: u64, e: i64) -> CycloNum<Rational> {
        CycloNum::zeta_pow(order, e, &rat(0))
    }

    #[test]
    fn phi_polys() {
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn normal_forms() {
        let one = CycloNum::rational(rat(1));
        let s = one.plus(&z(3, 1)).plus(&z(3, 2));
        assert!(s.is_zero_elem());
        assert_eq!(z(4, 1).times(&z(4, 1)), CycloNum::rational(rat(-1)));
        let z93 = z(9, 3);
        assert_eq!(z93.conductor(), 3);
        assert_eq!(z93, z(3, 1));
        assert_eq!(z(6, 1), z(3, 2).negate());
    }

    #[test]
    fn valuations() {
        let x = CycloNum::rational(rat(1)).minus(&z(3, 1));
        assert_eq!(x.p_valuation(3), Valuation::Finite(ratio(1, 2)));
        assert_eq!(CycloNum::rational(rat(3)).p_valuation(3), Valuation::Finite(rat(1)));
        let u = CycloNum::rational(rat(1)).plus(&z(3, 1));
        assert_eq!(u.p_valuation(3), Valuation::Finite(rat(0)));
        let y = CycloNum::rational(rat(1)).minus(&z(9, 1));
        assert_eq!(y.p_valuation(3), Valuation::Finite(ratio(1, 6)));
    }

    #[test]
    fn embeddings() {
        let i = z(4, 1).embed_complex();
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let s = z(3, 1).plus(&z(3, -1)).embed_complex();
        assert!((s - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }
}
