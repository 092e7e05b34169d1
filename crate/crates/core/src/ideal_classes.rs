//! Maximal and Eichler orders in `B`, right ideal classes, unit groups and the
//! Eichler mass.
//!
//! Lattices are [`ZLattice`]s in the coordinates `(1, ϑ, J, ϑJ)`.

use crate::arith::int::{factor, is_prime, ratmod};
use crate::arith::lattice::{enumerate_short, to_i128, ZLattice};
use crate::arith::{rat, Rational, Scalar};
use crate::quaternion::{Mat2, QuatAlgebra, QuatElem, QuatError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassError {
    #[error("level {0} is not coprime to N- = {1}")]
    LevelNotCoprime(u64, u64),
    #[error("maximal order saturation failed at {0}")]
    Saturation(u64),
    #[error("class enumeration reached mass {found} but expected {expected}")]
    MassMismatch { found: String, expected: String },
    #[error("no neighbor prime available")]
    NoNeighborPrime,
    #[error(transparent)]
    Quat(#[from] QuatError),
}

pub fn elems(b: &QuatAlgebra, l: &ZLattice) -> Vec<QuatElem> {
    l.basis().iter().map(|c| b.from_coords(c)).collect()
}

pub fn lattice_of(gens: &[QuatElem]) -> ZLattice {
    let rows: Vec<Vec<Rational>> = gens.iter().map(|g| g.coords().to_vec()).collect();
    ZLattice::from_rat_rows(&rows, 4)
}

/// `L₁L₂`.
pub fn product(b: &QuatAlgebra, l1: &ZLattice, l2: &ZLattice) -> ZLattice {
    let (e1, e2) = (elems(b, l1), elems(b, l2));
    let mut gens = Vec::with_capacity(16);
    for x in &e1 {
        for y in &e2 {
            gens.push(x.times(y));
        }
    }
    lattice_of(&gens)
}

pub fn conj_lattice(b: &QuatAlgebra, l: &ZLattice) -> ZLattice {
    lattice_of(&elems(b, l).iter().map(|x| x.conj()).collect::<Vec<_>>())
}

pub fn left_mul(b: &QuatAlgebra, a: &QuatElem, l: &ZLattice) -> ZLattice {
    lattice_of(&elems(b, l).iter().map(|x| a.times(x)).collect::<Vec<_>>())
}

fn rat_gcd(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    Rational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

/// Positive generator of the `Z`-module spanned by `N(x)`, `x ∈ L`.
pub fn lattice_norm(b: &QuatAlgebra, l: &ZLattice) -> Rational {
    let e = elems(b, l);
    let mut g = Rational::zero();
    for i in 0..e.len() {
        g = rat_gcd(&g, &e[i].reduced_norm());
        for j in i + 1..e.len() {
            g = rat_gcd(&g, &e[i].times(&e[j].conj()).reduced_trace());
        }
    }
    g
}

/// Integer Gram matrix `G` with `cᵀGc = 2N(x)/s` for `x = Σ c_i b_i`, where
/// `s` is the given scale (normally the lattice norm).
pub fn scaled_gram(b: &QuatAlgebra, l: &ZLattice, s: &Rational) -> Vec<Vec<i128>> {
    let e = elems(b, l);
    let n = e.len();
    let mut g = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = if i == j {
                e[i].reduced_norm() * rat(2)
            } else {
                e[i].times(&e[j].conj()).reduced_trace()
            } / s;
            assert!(v.is_integer(), "scaled Gram not integral");
            g[i][j] = to_i128(&v.to_integer());
        }
    }
    g
}

/// Reduced discriminant of an order, `D_K|β| · covol`.
pub fn order_discriminant(b: &QuatAlgebra, o: &ZLattice) -> Rational {
    o.covolume() * rat(b.field.dk * b.beta.abs())
}

fn is_integral_elem(x: &QuatElem) -> bool {
    x.reduced_trace().is_integer() && x.reduced_norm().is_integer()
}

/// Ring generated by `l` (which must contain 1), or `None` if it contains a
/// non-integral element.
fn ring_closure(b: &QuatAlgebra, l: &ZLattice) -> Option<ZLattice> {
    let mut cur = l.clone();
    for _ in 0..16 {
        if !elems(b, &cur).iter().all(is_integral_elem) {
            return None;
        }
        let next = product(b, &cur, &cur).sum(&cur);
        if next == cur {
            return Some(cur);
        }
        cur = next;
    }
    None
}

fn locally_integral(b: &QuatAlgebra, q: u64, x: &QuatElem) -> bool {
    match b.split_rat(q, 12, x) {
        Ok(m) => m.iter().flatten().all(|r| crate::arith::int::val_big(r.denom(), q) == 0),
        Err(_) => true,
    }
}

/// A maximal order containing `O_K + O_K J`, with `i_q(O ⊗ Z_q) = M₂(Z_q)` at the
/// pinned primes.
pub fn maximal_order(b: &QuatAlgebra) -> Result<ZLattice, ClassError> {
    let mut o = ZLattice::standard(4);
    let bad = (b.field.dk * b.beta.abs()) as u64;
    for (q, _) in factor(bad) {
        let want_q = if b.n_minus % q == 0 { 1 } else { 0 };
        loop {
            let d = order_discriminant(b, &o);
            let vq = crate::arith::int::val_big(d.numer(), q) as i64;
            if vq <= want_q {
                break;
            }
            let basis = elems(b, &o);
            let qr = Rational::from_integer(BigInt::from(q));
            let mut found = None;
            'search: for idx in 1..q.pow(4) {
                let mut c = [0u64; 4];
                let mut t = idx;
                for ci in c.iter_mut().rev() {
                    *ci = t % q;
                    t /= q;
                }
                let mut x = basis[0].zero_like();
                for (ci, bi) in c.iter().zip(&basis) {
                    if *ci != 0 {
                        x = x.plus(&bi.scale_rat(&rat(*ci as i64)));
                    }
                }
                let x = x.scale_rat(&qr.recip());
                if !is_integral_elem(&x) {
                    continue;
                }
                if b.pinned.contains(&q) && !locally_integral(b, q, &x) {
                    continue;
                }
                let l = o.sum(&lattice_of(&[x]));
                if let Some(r) = ring_closure(b, &l) {
                    if b.pinned.contains(&q) && !elems(b, &r).iter().all(|e| locally_integral(b, q, e)) {
                        continue;
                    }
                    found = Some(r);
                    break 'search;
                }
            }
            o = found.ok_or(ClassError::Saturation(q))?;
        }
    }
    if order_discriminant(b, &o) != rat(b.n_minus as i64) {
        return Err(ClassError::Saturation(0));
    }
    Ok(o)
}

/// `{x ∈ L : ord_q((A·i_q(x)·C)_{ij}) ≥ e}` for each condition `(A, C, i, j, e)`.
pub fn local_conditions(
    b: &QuatAlgebra,
    l: &ZLattice,
    q: u64,
    conds: &[(Mat2, Mat2, usize, usize, u32)],
) -> Result<ZLattice, ClassError> {
    if conds.is_empty() {
        return Ok(l.clone());
    }
    let basis = elems(b, l);
    let emax = conds.iter().map(|c| c.4).max().unwrap();
    // Denominator headroom: lattice denominators and the condition matrices.
    let mut w: i64 = crate::arith::int::val_big(&l.den, q) as i64;
    for (a, c, _, _, _) in conds {
        for r in a.iter().flatten().chain(c.iter().flatten()) {
            w += crate::arith::int::val_big(r.denom(), q) as i64;
        }
    }
    let digits = emax + 2 * w as u32 + 8;
    let mut values = Vec::new();
    let mut moduli = Vec::new();
    for (a, c, i, j, e) in conds {
        let mut vals = Vec::new();
        for x in &basis {
            let m = b.split_rat(q, digits, x)?;
            let am = crate::quaternion::mat2_mul(&crate::quaternion::mat2_mul(a, &m), c);
            vals.push(am[*i][*j].clone());
        }
        let scale = BigInt::from(q).pow(w as u32);
        let modulus = BigInt::from(q).pow(*e + w as u32);
        let mi = to_i128(&modulus);
        let ints: Vec<BigInt> = vals
            .iter()
            .map(|v| {
                let s = v * Rational::from_integer(scale.clone());
                BigInt::from(ratmod(s.numer(), s.denom(), mi).expect("q-integral value"))
            })
            .collect();
        values.push(ints);
        moduli.push(modulus);
    }
    Ok(l.congruence_sublattice(&values, &moduli))
}

fn ident() -> Mat2 {
    crate::quaternion::mat2_int([[1, 0], [0, 1]])
}

/// Eichler order of level `M` relative to the fixed splittings: lower-left
/// entry of `i_q(x)` divisible by `q^e` for `q^e ∥ M`.
#[derive(Clone, Debug)]
pub struct EichlerOrder {
    pub alg: QuatAlgebra,
    pub level: u64,
    pub lat: ZLattice,
    pub maximal: ZLattice,
}

pub fn eichler_order(b: &QuatAlgebra, level: u64) -> Result<EichlerOrder, ClassError> {
    if num_integer::gcd(level, b.n_minus) != 1 {
        return Err(ClassError::LevelNotCoprime(level, b.n_minus));
    }
    let o = maximal_order(b)?;
    let mut r = o.clone();
    for (q, e) in factor(level) {
        r = local_conditions(b, &r, q, &[(ident(), ident(), 1, 0, e)])?;
    }
    Ok(EichlerOrder { alg: b.clone(), level, lat: r, maximal: o })
}

impl EichlerOrder {
    pub fn discriminant(&self) -> Rational {
        order_discriminant(&self.alg, &self.lat)
    }

    pub fn basis(&self) -> Vec<QuatElem> {
        elems(&self.alg, &self.lat)
    }
}

/// Closed-form mass `Σ 1/#Γ_g` with `Γ_g` taken modulo the center:
/// `∏_{q|N⁻}(q−1)/12 · M∏_{ℓ|M}(1 + 1/ℓ)`.
pub fn mass_formula(n_minus: u64, level: u64) -> Rational {
    let mut m = rat(1) / rat(12);
    for (q, _) in factor(n_minus) {
        m *= rat(q as i64 - 1);
    }
    m *= rat(level as i64);
    for (l, _) in factor(level) {
        m *= rat(l as i64 + 1) / rat(l as i64);
    }
    m
}

/// One right ideal class.
#[derive(Clone, Debug)]
pub struct IdealClass {
    pub lat: ZLattice,
    pub norm: Rational,
    pub left_order: ZLattice,
    /// All units of the left order (including `±1`).
    pub units: Vec<QuatElem>,
    /// `#{x ∈ I : N(x) = m N(I)}` for `m = 1, 2`.
    pub theta: Vec<usize>,
}

impl IdealClass {
    /// `#Γ_g`, units modulo the center.
    pub fn gamma_order(&self) -> usize {
        self.units.len() / 2
    }

    /// Units counted with `±1`, the classical convention.
    pub fn unit_count_classical(&self) -> usize {
        self.units.len()
    }
}

const THETA_TERMS: usize = 2;

fn theta_prefix(b: &QuatAlgebra, l: &ZLattice, n: &Rational) -> Vec<usize> {
    let g = scaled_gram(b, l, n);
    let mut counts = vec![0usize; THETA_TERMS];
    enumerate_short(&g, 2 * THETA_TERMS as i128, |_, v| counts[(v / 2 - 1) as usize] += 1);
    counts
}

/// Elements `x ∈ L` with `N(x) = target`, given the lattice norm `n`.
pub fn vectors_of_norm(b: &QuatAlgebra, l: &ZLattice, n: &Rational, target: &Rational) -> Vec<QuatElem> {
    let m = target / n;
    if !m.is_integer() || m.is_negative() {
        return vec![];
    }
    let m = to_i128(&m.to_integer());
    let g = scaled_gram(b, l, n);
    let basis = elems(b, l);
    let mut out = Vec::new();
    enumerate_short(&g, 2 * m, |c, v| {
        if v == 2 * m {
            out.push(combine(&basis, c));
        }
    });
    out
}

pub fn combine(basis: &[QuatElem], c: &[i64]) -> QuatElem {
    let mut x = basis[0].zero_like();
    for (ci, bi) in c.iter().zip(basis) {
        if *ci != 0 {
            x = x.plus(&bi.scale_rat(&rat(*ci)));
        }
    }
    x
}

fn make_class(b: &QuatAlgebra, lat: ZLattice) -> IdealClass {
    let norm = lattice_norm(b, &lat);
    let ol = product(b, &lat, &conj_lattice(b, &lat)).scale(&norm.recip());
    let on = lattice_norm(b, &ol);
    debug_assert_eq!(on, rat(1));
    let mut units = vectors_of_norm(b, &ol, &on, &rat(1));
    units.sort_by(|x, y| cmp_coords(&x.coords(), &y.coords()));
    let theta = theta_prefix(b, &lat, &norm);
    IdealClass { lat, norm, left_order: ol, units, theta }
}

fn cmp_coords(a: &[Rational; 4], b: &[Rational; 4]) -> std::cmp::Ordering {
    for i in 0..4 {
        match a[i].cmp(&b[i]) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// The right ideal classes of an Eichler order.
#[derive(Clone, Debug)]
pub struct IdealClassSet {
    pub order: EichlerOrder,
    pub classes: Vec<IdealClass>,
    pub neighbor_prime: u64,
}

/// The smallest prime not dividing `pN⁻M` (used for neighbor steps so that
/// class representatives agree with `R` at `p` and at the level).
pub fn neighbor_prime(b: &QuatAlgebra, level: u64) -> Option<u64> {
    (2..1000u64).find(|&q| is_prime(q) && (b.n_minus * level * b.p) % q != 0)
}

/// Sublattices `J = xR + qI ⊂ I` with `N(J) = qN(I)`, distinct, in a fixed order.
pub fn neighbors(b: &QuatAlgebra, r: &ZLattice, i: &ZLattice, q: u64) -> Vec<ZLattice> {
    let n = lattice_norm(b, i);
    let g = scaled_gram(b, i, &n);
    let basis = elems(b, i);
    let rb = elems(b, r);
    let qi = i.scale(&rat(q as i64));
    let qq = q as i128;
    let mut seen: HashSet<ZLattice> = HashSet::new();
    let mut out = Vec::new();
    let limit = if b.n_minus % q == 0 { 1 } else { q as usize + 1 };
    for idx in 1..(q as u128).pow(4) {
        let mut c = [0i64; 4];
        let mut t = idx;
        for ci in c.iter_mut().rev() {
            *ci = (t % q as u128) as i64;
            t /= q as u128;
        }
        let mut v: i128 = 0;
        for a in 0..4 {
            for bb in 0..4 {
                v += g[a][bb] * c[a] as i128 * c[bb] as i128;
            }
        }
        // v = 2N(x)/N(I)
        if (v / 2) % qq != 0 {
            continue;
        }
        let x = combine(&basis, &c);
        let gens: Vec<QuatElem> = rb.iter().map(|y| x.times(y)).collect();
        let j = lattice_of(&gens).sum(&qi);
        if seen.insert(j.clone()) {
            out.push(j);
            if out.len() == limit {
                break;
            }
        }
    }
    out
}

impl IdealClassSet {
    /// Enumerate classes through the neighbor graph until the mass formula is met.
    pub fn compute(order: &EichlerOrder) -> Result<Self, ClassError> {
        let b = &order.alg;
        let q = neighbor_prime(b, order.level).ok_or(ClassError::NoNeighborPrime)?;
        let target = mass_formula(b.n_minus, order.level);
        let mut set = IdealClassSet { order: order.clone(), classes: vec![make_class(b, order.lat.clone())], neighbor_prime: q };
        let mut mass = rat(1) / rat(set.classes[0].gamma_order() as i64);
        let mut head = 0;
        while mass < target && head < set.classes.len() {
            let cur = set.classes[head].lat.clone();
            head += 1;
            for j in neighbors(b, &order.lat, &cur, q) {
                if set.identify(&j).is_none() {
                    let c = make_class(b, j);
                    mass += rat(1) / rat(c.gamma_order() as i64);
                    set.classes.push(c);
                    if mass >= target {
                        break;
                    }
                }
            }
        }
        if mass != target {
            return Err(ClassError::MassMismatch { found: mass.to_string(), expected: target.to_string() });
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn alg(&self) -> &QuatAlgebra {
        &self.order.alg
    }

    /// `Σ 1/#Γ_g` (center-quotient convention).
    pub fn mass(&self) -> Rational {
        self.classes.iter().map(|c| rat(1) / rat(c.gamma_order() as i64)).sum()
    }

    /// Class index `c` and `α ∈ B^×` with `L = α I_c`, for a right `R`-ideal `L`.
    pub fn identify(&self, l: &ZLattice) -> Option<(usize, QuatElem)> {
        let b = self.alg();
        let n = lattice_norm(b, l);
        let th = theta_prefix(b, l, &n);
        for (idx, c) in self.classes.iter().enumerate() {
            if c.theta != th {
                continue;
            }
            if let Some(a) = connecting_element(b, l, &n, c) {
                return Some((idx, a));
            }
        }
        None
    }

    /// Units of the left order of class `i` modulo `±1` (first nonzero
    /// coordinate positive).
    pub fn unit_group(&self, i: usize) -> Vec<QuatElem> {
        self.classes[i]
            .units
            .iter()
            .filter(|u| {
                let c = u.coords();
                c.iter().find(|x| !x.is_zero()).map_or(false, |x| x.is_positive())
            })
            .cloned()
            .collect()
    }
}

/// `α` with `L = α I_c`, searched as a vector of norm `N(L)N(I_c)` in `LĪ_c`.
pub fn connecting_element(b: &QuatAlgebra, l: &ZLattice, nl: &Rational, c: &IdealClass) -> Option<QuatElem> {
    let m = product(b, l, &conj_lattice(b, &c.lat));
    let target = nl * &c.norm;
    let mn = lattice_norm(b, &m);
    if mn != target {
        return None;
    }
    let g = scaled_gram(b, &m, &mn);
    let basis = elems(b, &m);
    let mut found = None;
    let mut first = true;
    enumerate_short(&g, 2, |v, val| {
        if first && val == 2 {
            found = Some(combine(&basis, v));
            first = false;
        }
    });
    found.map(|x| x.scale_rat(&c.norm.recip()))
}

/// Two-sided ideal `𝒲` with local components `J R_q` at `q | N⁻` and
/// `i_q⁻¹([[0,1],[−q^e,0]]) R_q` at `q^e ∥ M`; `I ↦ I𝒲` realizes right
/// translation by the finite part of `τ^{N_B}`.
pub fn atkin_lehner_ideal(order: &EichlerOrder) -> Result<ZLattice, ClassError> {
    let b = &order.alg;
    let mut w = order.lat.clone();
    for (q, _) in factor(b.n_minus) {
        let vb = crate::arith::int::val(b.beta as i128, q);
        if vb % 2 == 1 {
            w = prime_two_sided(b, &w, &order.lat, q);
        }
    }
    for (q, e) in factor(order.level) {
        w = local_conditions(b, &w, q, &[(ident(), ident(), 0, 0, e), (ident(), ident(), 1, 1, e)])?;
    }
    Ok(w)
}

/// `{x ∈ L : q | N(x)}` for `q | N⁻` with `L ⊂ R` full rank; this is `L ∩ P_q`.
fn prime_two_sided(b: &QuatAlgebra, l: &ZLattice, _r: &ZLattice, q: u64) -> ZLattice {
    let basis = elems(b, l);
    let mut gens: Vec<QuatElem> = basis.iter().map(|x| x.scale_rat(&rat(q as i64))).collect();
    for idx in 1..q.pow(4) {
        let mut c = [0i64; 4];
        let mut t = idx;
        for ci in c.iter_mut().rev() {
            *ci = (t % q) as i64;
            t /= q;
        }
        let x = combine(&basis, &c);
        let nx = x.reduced_norm();
        if (nx / rat(q as i64)).is_integer() {
            gens.push(x);
        }
    }
    lattice_of(&gens)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::quad::QuadField;

    #[test]
    fn b11_orders_and_classes() {
        let k = QuadField::new(4).unwrap();
        let b = QuatAlgebra::new(k, 3, 1, 11).unwrap();
        let r = eichler_order(&b, 1).unwrap();
        assert_eq!(r.discriminant(), rat(11));
        let cs = IdealClassSet::compute(&r).unwrap();
        assert_eq!(cs.len(), 2);
        let mut g: Vec<usize> = cs.classes.iter().map(|c| c.gamma_order()).collect();
        g.sort();
        assert_eq!(g, vec![2, 3]);
        assert_eq!(cs.mass(), rat(5) / rat(6));
    }
}
