//! The definite quaternion algebra `B = K ⊕ KJ`, `J² = β`, `Jt = t̄J`, with
//! Hilbert-symbol ramification data and the fixed local splittings `i_q`.

use crate::arith::int::{factor, hensel_lift, is_prime, is_squarefree, legendre, sqrt_mod_prime_power, val};
use crate::arith::padic::PadicNum;
use crate::arith::quad::{QuadElem, QuadField, Splitting};
use crate::arith::{rat, FieldScalar, Rational, Scalar};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuatError {
    #[error("N- = {0} must be squarefree with an odd number of prime factors")]
    BadNMinus(u64),
    #[error("prime {0} of N- splits in K")]
    SplitNMinus(u64),
    #[error("prime {0} of N+ does not split in K")]
    NonSplitNPlus(u64),
    #[error("p = {0} divides N+N-")]
    PDividesLevel(u64),
    #[error("no admissible beta with |beta| <= {0}")]
    BetaSearchExhausted(i64),
    #[error("{0} is ramified in B: nonsplit prime")]
    NonsplitPrime(u64),
    #[error("no fixed splitting at {0}")]
    NoSplitting(u64),
}

/// Hilbert symbol `(a, b)_q` for nonzero integers; `q = 0` means the real place.
pub fn hilbert_symbol(a: i64, b: i64, q: u64) -> i32 {
    assert!(a != 0 && b != 0);
    if q == 0 {
        return if a < 0 && b < 0 { -1 } else { 1 };
    }
    let (al, u) = split_val(a, q);
    let (be, v) = split_val(b, q);
    if q == 2 {
        let eps = |x: i64| ((x - 1) / 2).rem_euclid(2);
        let omega = |x: i64| ((x as i128 * x as i128 - 1) / 8).rem_euclid(2) as i64;
        let e = eps(u) * eps(v) + al * omega(v) + be * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = if (al * be) % 2 == 1 && (q % 4 == 3) { -1 } else { 1 };
        if be % 2 == 1 {
            s *= legendre(u.rem_euclid(q as i64) as i128, q);
        }
        if al % 2 == 1 {
            s *= legendre(v.rem_euclid(q as i64) as i128, q);
        }
        s
    }
}

fn split_val(a: i64, q: u64) -> (i64, i64) {
    let v = val(a as i128, q) as i64;
    (v, a / (q as i64).pow(v as u32))
}

/// Places where the quaternion algebra `(a, b)_Q` ramifies: finite primes in
/// increasing order and a flag for the real place.
pub fn hilbert_ramified_set(a: i64, b: i64) -> (Vec<u64>, bool) {
    let mut primes: Vec<u64> = vec![2];
    for x in [a, b] {
        for (q, _) in factor(x.unsigned_abs()) {
            primes.push(q);
        }
    }
    primes.sort();
    primes.dedup();
    let fin = primes.into_iter().filter(|&q| hilbert_symbol(a, b, q) == -1).collect();
    (fin, hilbert_symbol(a, b, 0) == -1)
}

/// Admissibility of `β` for the configuration (see [`choose_beta`]).
pub fn beta_admissible(k: &QuadField, beta: i64, p: u64, n_plus: u64, n_minus: u64, aux_l: u64) -> bool {
    if beta >= 0 {
        return false;
    }
    let mut sq_primes = vec![p, aux_l];
    sq_primes.extend(factor(n_plus).into_iter().map(|(q, _)| q));
    for q in sq_primes {
        if !is_q_adic_unit_square(beta, q) {
            return false;
        }
    }
    for (q, _) in factor(k.dk as u64) {
        if beta % q as i64 == 0 {
            return false;
        }
    }
    let (fin, inf) = hilbert_ramified_set(-k.dk, beta);
    let want: Vec<u64> = factor(n_minus).into_iter().map(|(q, _)| q).collect();
    inf && fin == want
}

fn is_q_adic_unit_square(x: i64, q: u64) -> bool {
    if x % q as i64 == 0 {
        return false;
    }
    if q == 2 {
        x.rem_euclid(8) == 1
    } else {
        legendre(x.rem_euclid(q as i64) as i128, q) == 1
    }
}

/// Smallest `|β|` with `β < 0` such that `β ∈ (Z_q^×)²` for `q | pℓN⁺`,
/// `β ∈ Z_q^×` for `q | D_K`, and `(−D_K, β)` ramifies exactly at `N⁻∞`.
pub fn choose_beta(k: &QuadField, p: u64, n_plus: u64, n_minus: u64, aux_l: u64) -> Result<i64, QuatError> {
    const BOUND: i64 = 100_000;
    (1..=BOUND)
        .map(|b| -b)
        .find(|&b| beta_admissible(k, b, p, n_plus, n_minus, aux_l))
        .ok_or(QuatError::BetaSearchExhausted(BOUND))
}

/// `a + bJ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuatElem {
    pub a: QuadElem,
    pub b: QuadElem,
    pub beta: i64,
}

impl fmt::Debug for QuatElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?} + {:?}J]", self.a, self.b)
    }
}

impl QuatElem {
    pub fn new(a: QuadElem, b: QuadElem, beta: i64) -> Self {
        QuatElem { a, b, beta }
    }

    /// Coordinates in the basis `(1, ϑ, J, ϑJ)`.
    pub fn coords(&self) -> [Rational; 4] {
        [self.a.u.clone(), self.a.v.clone(), self.b.u.clone(), self.b.v.clone()]
    }

    pub fn from_coords(f: QuadField, beta: i64, c: &[Rational]) -> Self {
        QuatElem { a: f.elem(c[0].clone(), c[1].clone()), b: f.elem(c[2].clone(), c[3].clone()), beta }
    }

    pub fn from_quad(a: QuadElem, beta: i64) -> Self {
        let z = a.zero_like();
        QuatElem { a, b: z, beta }
    }

    pub fn field(&self) -> QuadField {
        self.a.f
    }

    pub fn reduced_trace(&self) -> Rational {
        self.a.trace()
    }

    pub fn reduced_norm(&self) -> Rational {
        self.a.norm() - rat(self.beta) * self.b.norm()
    }

    /// `x̄ = T(x) − x = ā − bJ`.
    pub fn conj(&self) -> Self {
        QuatElem { a: self.a.conj(), b: self.b.negate(), beta: self.beta }
    }

    /// `i_K(a + bJ) = [[a, bβ], [b̄, ā]]`.
    pub fn i_k(&self) -> [[QuadElem; 2]; 2] {
        [[self.a.clone(), self.b.scale_rat(&rat(self.beta))], [self.b.conj(), self.a.conj()]]
    }

    pub fn is_integral_coords(&self) -> bool {
        self.coords().iter().all(|x| x.is_integer())
    }
}

impl Scalar for QuatElem {
    fn zero_like(&self) -> Self {
        QuatElem { a: self.a.zero_like(), b: self.a.zero_like(), beta: self.beta }
    }
    fn one_like(&self) -> Self {
        QuatElem { a: self.a.one_like(), b: self.a.zero_like(), beta: self.beta }
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        QuatElem { a: self.a.from_rational_like(r), b: self.a.zero_like(), beta: self.beta }
    }
    fn plus(&self, o: &Self) -> Self {
        QuatElem { a: self.a.plus(&o.a), b: self.b.plus(&o.b), beta: self.beta }
    }
    fn minus(&self, o: &Self) -> Self {
        QuatElem { a: self.a.minus(&o.a), b: self.b.minus(&o.b), beta: self.beta }
    }
    /// `(a + bJ)(c + dJ) = (ac + β b d̄) + (ad + b c̄)J`.
    fn times(&self, o: &Self) -> Self {
        let a = self.a.times(&o.a).plus(&self.b.times(&o.b.conj()).scale_rat(&rat(self.beta)));
        let b = self.a.times(&o.b).plus(&self.b.times(&o.a.conj()));
        QuatElem { a, b, beta: self.beta }
    }
    fn negate(&self) -> Self {
        QuatElem { a: self.a.negate(), b: self.b.negate(), beta: self.beta }
    }
    fn is_zero_elem(&self) -> bool {
        self.a.is_zero_elem() && self.b.is_zero_elem()
    }
}

impl FieldScalar for QuatElem {
    fn inverse(&self) -> Option<Self> {
        let n = self.reduced_norm();
        if n.is_zero() {
            return None;
        }
        Some(self.conj().scale_rat(&n.recip()))
    }
}

/// A 2×2 matrix with rational entries, used for local images computed with an
/// integer approximation of `√β`.
pub type Mat2 = [[Rational; 2]; 2];

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat2_det(a: &Mat2) -> Rational {
    &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0]
}

pub fn mat2_adj(a: &Mat2) -> Mat2 {
    [[a[1][1].clone(), -a[0][1].clone()], [-a[1][0].clone(), a[0][0].clone()]]
}

pub fn mat2_int(a: [[i64; 2]; 2]) -> Mat2 {
    [[rat(a[0][0]), rat(a[0][1])], [rat(a[1][0]), rat(a[1][1])]]
}

/// Data defining one local splitting: `i_q(ϑ) = [[t, −n], [1, 0]]` and
/// `i_q(J) = Z · [[−1, t], [0, 1]]` with `Z` a scalar `√β` (pinned primes) or
/// `i_q(z)` for `z ∈ O_K` with `N(z) ≡ β` (other primes).
#[derive(Clone, Debug, Serialize)]
pub struct LocalSplitting {
    pub q: u64,
    pub digits: u32,
    /// `√β` mod `q^digits` when pinned.
    pub sqrt_beta: Option<String>,
    /// `(u, v)` of `z = u + vϑ` mod `q^digits` otherwise.
    pub z: Option<(String, String)>,
}

#[derive(Clone, Debug)]
enum SplitData {
    Pinned(BigInt),
    Twisted(BigInt, BigInt),
}

/// `B` together with its configuration `(K, β, N⁻, N⁺, p)`.
#[derive(Debug)]
pub struct QuatAlgebra {
    pub field: QuadField,
    pub beta: i64,
    pub n_minus: u64,
    pub n_plus: u64,
    pub p: u64,
    /// Primes where the splitting uses a square root of `β` directly.
    pub pinned: Vec<u64>,
    cache: Mutex<HashMap<(u64, u32), SplitData>>,
}

impl Clone for QuatAlgebra {
    fn clone(&self) -> Self {
        QuatAlgebra {
            field: self.field,
            beta: self.beta,
            n_minus: self.n_minus,
            n_plus: self.n_plus,
            p: self.p,
            pinned: self.pinned.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

#[derive(Serialize)]
pub struct AlgebraDescriptor {
    #[serde(rename = "D_K")]
    pub dk: i64,
    pub beta: i64,
    pub n_minus: u64,
    pub n_plus: u64,
    pub p: u64,
    pub splittings: Vec<LocalSplitting>,
}

impl QuatAlgebra {
    /// Build `B` for the configuration, choosing `β` with `ℓ = p` and
    /// validating the ramification pattern.
    pub fn new(field: QuadField, p: u64, n_plus: u64, n_minus: u64) -> Result<Self, QuatError> {
        Self::with_extra_pinned(field, p, n_plus, n_minus, &[])
    }

    /// As [`QuatAlgebra::new`], additionally requiring `β` to be a unit square at
    /// the primes in `extra` (used for Eichler levels outside `pN⁺`).
    pub fn with_extra_pinned(
        field: QuadField,
        p: u64,
        n_plus: u64,
        n_minus: u64,
        extra: &[u64],
    ) -> Result<Self, QuatError> {
        if !is_squarefree(n_minus) || factor(n_minus).len() % 2 == 0 {
            return Err(QuatError::BadNMinus(n_minus));
        }
        for (q, _) in factor(n_minus) {
            if field.splitting(q) == Splitting::Split {
                return Err(QuatError::SplitNMinus(q));
            }
        }
        for (q, _) in factor(n_plus) {
            if field.splitting(q) != Splitting::Split {
                return Err(QuatError::NonSplitNPlus(q));
            }
        }
        if n_plus % p == 0 || n_minus % p == 0 {
            return Err(QuatError::PDividesLevel(p));
        }
        let mut extra_prod = 1u64;
        for &q in extra {
            extra_prod *= q;
        }
        let beta = choose_beta(&field, p, n_plus * extra_prod, n_minus, p)?;
        Ok(Self::from_beta(field, beta, p, n_plus, n_minus, extra))
    }

    /// Build with a given `β` (no admissibility search).
    pub fn from_beta(field: QuadField, beta: i64, p: u64, n_plus: u64, n_minus: u64, extra: &[u64]) -> Self {
        let mut pinned: Vec<u64> = vec![p];
        pinned.extend(factor(n_plus).into_iter().map(|(q, _)| q));
        pinned.extend(extra.iter().copied());
        pinned.sort();
        pinned.dedup();
        QuatAlgebra { field, beta, n_minus, n_plus, p, pinned, cache: Mutex::new(HashMap::new()) }
    }

    pub fn elem(&self, a: QuadElem, b: QuadElem) -> QuatElem {
        QuatElem::new(a, b, self.beta)
    }

    pub fn from_coords(&self, c: &[Rational]) -> QuatElem {
        QuatElem::from_coords(self.field, self.beta, c)
    }

    pub fn from_int_coords(&self, c: [i64; 4]) -> QuatElem {
        self.from_coords(&c.map(rat))
    }

    pub fn one(&self) -> QuatElem {
        self.from_int_coords([1, 0, 0, 0])
    }

    pub fn j(&self) -> QuatElem {
        self.from_int_coords([0, 0, 1, 0])
    }

    pub fn from_quad(&self, a: &QuadElem) -> QuatElem {
        QuatElem::from_quad(a.clone(), self.beta)
    }

    /// `2N(x) = cᵀ G c` for coordinates `c` in the basis `(1, ϑ, J, ϑJ)`.
    pub fn norm_gram(&self) -> [[i64; 4]; 4] {
        let (t, n, b) = (self.field.t, self.field.n, self.beta);
        [[2, t, 0, 0], [t, 2 * n, 0, 0], [0, 0, -2 * b, -b * t], [0, 0, -b * t, -2 * b * n]]
    }

    /// Primes at which `B` ramifies (finite part).
    pub fn ramified_primes(&self) -> Vec<u64> {
        hilbert_ramified_set(-self.field.dk, self.beta).0
    }

    fn split_data(&self, q: u64, digits: u32) -> Result<SplitData, QuatError> {
        if self.n_minus % q == 0 {
            return Err(QuatError::NonsplitPrime(q));
        }
        let key = (q, digits);
        if let Some(d) = self.cache.lock().unwrap().get(&key) {
            return Ok(d.clone());
        }
        let d = if self.pinned.contains(&q) {
            let s = sqrt_mod_prime_power(self.beta as i128, q, digits).ok_or(QuatError::NoSplitting(q))?;
            SplitData::Pinned(BigInt::from(s))
        } else {
            let bad = 2 * self.field.dk * self.beta;
            if bad % q as i64 == 0 {
                return Err(QuatError::NoSplitting(q));
            }
            let (u, v) = norm_solution(&self.field, self.beta, q, digits).ok_or(QuatError::NoSplitting(q))?;
            SplitData::Twisted(BigInt::from(u), BigInt::from(v))
        };
        self.cache.lock().unwrap().insert(key, d.clone());
        Ok(d)
    }

    /// Descriptor of the splitting at `q` to `digits` digits.
    pub fn local_splitting(&self, q: u64, digits: u32) -> Result<LocalSplitting, QuatError> {
        Ok(match self.split_data(q, digits)? {
            SplitData::Pinned(s) => LocalSplitting { q, digits, sqrt_beta: Some(s.to_string()), z: None },
            SplitData::Twisted(u, v) => {
                LocalSplitting { q, digits, sqrt_beta: None, z: Some((u.to_string(), v.to_string())) }
            }
        })
    }

    /// `√β` mod `q^digits` at a pinned prime (Hensel lift of the least root).
    pub fn sqrt_beta(&self, q: u64, digits: u32) -> Result<BigInt, QuatError> {
        match self.split_data(q, digits)? {
            SplitData::Pinned(s) => Ok(s),
            _ => Err(QuatError::NoSplitting(q)),
        }
    }

    /// Exact rational image of `x` under the splitting at `q`, computed with the
    /// integer approximations fixed to `digits` digits. It is a ring
    /// homomorphism modulo `q^digits` on `q`-integral elements.
    pub fn split_rat(&self, q: u64, digits: u32, x: &QuatElem) -> Result<Mat2, QuatError> {
        let (t, n) = (self.field.t, self.field.n);
        let theta = mat2_int([[t, -n], [1, 0]]);
        let quad = |e: &QuadElem| -> Mat2 {
            [
                [&e.u + &e.v * &theta[0][0], &e.v * &theta[0][1]],
                [&e.v * &theta[1][0], e.u.clone()],
            ]
        };
        let m = mat2_int([[-1, t], [0, 1]]);
        let zj: Mat2 = match self.split_data(q, digits)? {
            SplitData::Pinned(s) => {
                let s = Rational::from_integer(s);
                [[-s.clone(), &s * rat(t)], [rat(0), s]]
            }
            SplitData::Twisted(u, v) => {
                let z = self.field.elem(Rational::from_integer(u), Rational::from_integer(v));
                mat2_mul(&quad(&z), &m)
            }
        };
        let a = quad(&x.a);
        let b = mat2_mul(&quad(&x.b), &zj);
        Ok([[&a[0][0] + &b[0][0], &a[0][1] + &b[0][1]], [&a[1][0] + &b[1][0], &a[1][1] + &b[1][1]]])
    }

    /// `i_q(x)` as a matrix of truncated `q`-adic numbers.
    pub fn split_at(&self, q: u64, digits: u32, x: &QuatElem) -> Result<[[PadicNum; 2]; 2], QuatError> {
        let m = self.split_rat(q, digits, x)?;
        let d = digits as i64;
        let e = |r: &Rational| PadicNum::from_rational(q, d, r);
        Ok([[e(&m[0][0]), e(&m[0][1])], [e(&m[1][0]), e(&m[1][1])]])
    }

    pub fn descriptor(&self, digits: u32) -> AlgebraDescriptor {
        let splittings = self.pinned.iter().filter_map(|&q| self.local_splitting(q, digits).ok()).collect();
        AlgebraDescriptor {
            dk: self.field.dk,
            beta: self.beta,
            n_minus: self.n_minus,
            n_plus: self.n_plus,
            p: self.p,
            splittings,
        }
    }
}

/// `(u, v)` with `N(u + vϑ) ≡ β (mod q^digits)`, `q` odd, not dividing `D_Kβ`.
fn norm_solution(f: &QuadField, beta: i64, q: u64, digits: u32) -> Option<(i128, i128)> {
    let qi = q as i128;
    let (t, n, b) = (f.t as i128, f.n as i128, beta as i128);
    for v in 0..qi {
        for u in 0..qi {
            let nv = u * u + t * u * v + n * v * v - b;
            if nv.rem_euclid(qi) == 0 && (2 * u + t * v).rem_euclid(qi) != 0 {
                // u² + (tv)u + (nv² − β) = 0, lifted in u.
                let poly = [n * v * v - b, t * v, 1];
                let lu = hensel_lift(&poly, u, q, digits)?;
                return Some((lu, v));
            }
        }
    }
    None
}

/// True iff `x` is nonzero modulo all primes; helper for tests of
/// definiteness.
pub fn is_positive_norm(x: &QuatElem) -> bool {
    x.is_zero_elem() || x.reduced_norm().is_positive()
}

/// True iff `q` is prime and does not divide `N⁻`.
pub fn splits_at(b: &QuatAlgebra, q: u64) -> bool {
    is_prime(q) && b.n_minus % q != 0
}
