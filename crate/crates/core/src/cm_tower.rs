//! The anticyclotomic `p`-tower: orders `O_n = Z + pⁿO_K`, ring class groups
//! `G_n`, the splitting `G_n ≅ Δ × Γ_n⁻`, Gross points and characters.
//!
//! Only `h_K = 1` is supported here, so `G_n = (O_K/pⁿ)^× / ((Z/pⁿ)^× · O_K^×)`.
//! An element is stored by a canonical residue pair `(x, y)` standing for the
//! global integer `x + yϑ`, and the class of a global `a ∈ O_K` prime to `p`
//! is `[a]_n`, the class of the idele that is `a` at `p` and `1` elsewhere.

use crate::arith::cyclo::CycloNum;
use crate::arith::ext::theta_root;
use crate::arith::int::{factor, invmod, md, mulmod, ratmod, val, val_big};
use crate::arith::lattice::ZLattice;
use crate::arith::quad::{QuadElem, QuadField, Splitting};
use crate::arith::{rat, FieldScalar, Rational, Scalar};
use crate::ideal_classes::{conj_lattice, elems, lattice_of, lattice_norm, local_conditions, product, ClassError, EichlerOrder, IdealClassSet};
use crate::quaternion::{mat2_int, mat2_mul, Mat2, QuatAlgebra, QuatElem, QuatError};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TowerError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0} is not prime to p")]
    NotCoprime(String),
    #[error("Gross point lattice not identified with a class (precision {0})")]
    Unidentified(u32),
    #[error("character conductor p^{0} exceeds level {1}")]
    Conductor(u32, u32),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Quat(#[from] QuatError),
}

const CLASS_NUMBER_ONE: [i64; 9] = [3, 4, 7, 8, 11, 19, 43, 67, 163];

fn check_tower(field: &QuadField, p: u64) -> Result<(), TowerError> {
    if !CLASS_NUMBER_ONE.contains(&field.dk) {
        return Err(TowerError::Unsupported(format!("h_K > 1 (D_K = {})", field.dk)));
    }
    if p == 2 || field.splitting(p) == Splitting::Ramified {
        return Err(TowerError::Unsupported(format!("p = {p} must be odd and unramified in K")));
    }
    Ok(())
}

/// `O_n = Z + pⁿO_K` with basis `{1, pⁿϑ}`.
#[derive(Clone, Debug)]
pub struct TowerOrder {
    pub field: QuadField,
    pub p: u64,
    pub n: u32,
}

impl TowerOrder {
    pub fn basis(&self) -> [QuadElem; 2] {
        [self.field.int(1, 0), self.field.int(0, self.p.pow(self.n) as i64)]
    }

    pub fn conductor(&self) -> u64 {
        self.p.pow(self.n)
    }

    pub fn lattice(&self) -> ZLattice {
        let c = self.conductor() as i64;
        ZLattice::from_rat_rows(&[vec![rat(1), rat(0), rat(0), rat(0)], vec![rat(0), rat(c), rat(0), rat(0)]], 4)
    }

    pub fn contains(&self, a: &QuadElem) -> bool {
        a.is_integral() && (a.v.to_integer() % BigInt::from(self.conductor())).is_zero()
    }
}

/// `h_K pⁿ (1 − χ_K(p)/p) / [O_K^× : O_n^×]` for `n ≥ 1`, and `1` at `n = 0`.
pub fn class_number_formula(field: &QuadField, p: u64, n: u32) -> u64 {
    if n == 0 {
        return 1;
    }
    let pn = p.pow(n - 1);
    let chi = field.chi(p) as i64;
    (pn as i64 * (p as i64 - chi)) as u64 / field.u_k() as u64
}

/// `G_n` with canonical representatives and the frozen splitting `Δ × Γ_n⁻`.
#[derive(Clone, Debug)]
pub struct RingClassGroup {
    pub field: QuadField,
    pub p: u64,
    pub n: u32,
    /// Canonical residue pairs, sorted; index 0 is the identity.
    pub elems: Vec<(i64, i64)>,
    index: HashMap<(i64, i64), usize>,
    /// `delta[i] = δ^i` for the frozen generator `δ` of `Δ`.
    pub delta: Vec<usize>,
    /// `gamma[j] = γ^j` for the frozen generator `γ` of `Γ_n⁻`.
    pub gamma: Vec<usize>,
    /// `(i, j)` with `g = δ^i γ^j`.
    pub coords: Vec<(usize, usize)>,
}

fn quad_mul(f: &QuadField, a: (i128, i128), b: (i128, i128), m: i128) -> (i128, i128) {
    let vv = mulmod(a.1, b.1, m);
    let x = md(mulmod(a.0, b.0, m) - mulmod(f.n as i128, vv, m), m);
    let y = md(mulmod(a.0, b.1, m) + mulmod(a.1, b.0, m) + mulmod(f.t as i128, vv, m), m);
    (x, y)
}

fn quad_norm_mod(f: &QuadField, a: (i128, i128), m: i128) -> i128 {
    md(a.0 * a.0 + (f.t as i128) * a.0 * a.1 + (f.n as i128) * a.1 * a.1, m)
}

impl RingClassGroup {
    fn modulus(&self) -> i128 {
        (self.p as i128).pow(self.n)
    }

    /// Canonical pair for a residue `x + yϑ` that is a unit at `p`.
    fn canonical(&self, a: (i128, i128)) -> Option<(i64, i64)> {
        if self.n == 0 {
            return Some((0, 0));
        }
        let m = self.modulus();
        let p = self.p as i128;
        if quad_norm_mod(&self.field, a, p) == 0 {
            return None;
        }
        let mut best: Option<(i64, i64)> = None;
        for u in self.field.units() {
            let (uu, uv) = u.int_coords().unwrap();
            let b = quad_mul(&self.field, a, (md(uu, m), md(uv, m)), m);
            let c = if b.0 % p != 0 {
                let s = invmod(b.0, m).unwrap();
                (1, mulmod(b.1, s, m))
            } else {
                let s = invmod(b.1, m).unwrap();
                (mulmod(b.0, s, m), 1)
            };
            let c = (c.0 as i64, c.1 as i64);
            if best.map_or(true, |x| c < x) {
                best = Some(c);
            }
        }
        best
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn delta_order(&self) -> usize {
        self.delta.len()
    }

    pub fn gamma_order(&self) -> usize {
        self.gamma.len()
    }

    /// Cyclic factor orders `[#Δ, #Γ_n⁻]`.
    pub fn structure(&self) -> Vec<usize> {
        vec![self.delta_order(), self.gamma_order()]
    }

    pub fn lookup(&self, c: (i64, i64)) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        if self.n == 0 {
            return 0;
        }
        let m = self.modulus();
        let a = self.elems[i];
        let b = self.elems[j];
        let c = quad_mul(&self.field, (a.0 as i128, a.1 as i128), (b.0 as i128, b.1 as i128), m);
        self.index[&self.canonical(c).unwrap()]
    }

    pub fn pow(&self, i: usize, e: u64) -> usize {
        let mut acc = 0;
        let mut base = i;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, i: usize) -> usize {
        self.pow(i, self.order() as u64 - 1)
    }

    /// `[a]_n` for `a ∈ K` integral and a unit at `p`.
    pub fn class_of(&self, a: &QuadElem) -> Result<usize, TowerError> {
        if self.n == 0 {
            return Ok(0);
        }
        let m = self.modulus();
        let x = ratmod(a.u.numer(), a.u.denom(), m);
        let y = ratmod(a.v.numer(), a.v.denom(), m);
        match (x, y) {
            (Some(x), Some(y)) => {
                let c = self.canonical((x, y)).ok_or_else(|| TowerError::NotCoprime(a.to_string()))?;
                Ok(self.index[&c])
            }
            _ => Err(TowerError::NotCoprime(a.to_string())),
        }
    }

    /// The global element `x + yϑ` representing element `i`.
    pub fn rep(&self, i: usize) -> QuadElem {
        if self.n == 0 {
            return self.field.int(1, 0);
        }
        let (x, y) = self.elems[i];
        self.field.int(x, y)
    }

    /// Image in `G_low` under the natural quotient.
    pub fn project(&self, i: usize, low: &RingClassGroup) -> usize {
        assert!(low.n <= self.n && low.p == self.p);
        low.class_of(&self.rep(i)).expect("representatives are units at p")
    }

    /// Image of a prime ideal `(π)` prime to `p`: the idele that is `π` at the
    /// places above `𝔮` is equivalent to `π⁻¹` at `p`, i.e. `[π̄]_n`.
    pub fn ideal_class(&self, pi: &QuadElem) -> Result<usize, TowerError> {
        self.class_of(&pi.conj())
    }

    /// Element `δ^i γ^j`.
    pub fn from_coords(&self, i: usize, j: usize) -> usize {
        self.mul(self.delta[i % self.delta.len()], self.gamma[j % self.gamma.len()])
    }

    /// `g ↦ g⁻¹` as a permutation of indices.
    pub fn inversion(&self) -> Vec<usize> {
        (0..self.order()).map(|i| self.inv(i)).collect()
    }
}

/// `G_n` for `h_K = 1`, odd unramified `p`.
pub fn ring_class_group(field: &QuadField, p: u64, n: u32) -> Result<RingClassGroup, TowerError> {
    check_tower(field, p)?;
    let mut g = RingClassGroup {
        field: *field,
        p,
        n,
        elems: vec![],
        index: HashMap::new(),
        delta: vec![0],
        gamma: vec![0],
        coords: vec![(0, 0)],
    };
    if n == 0 {
        g.elems = vec![(0, 0)];
        g.index.insert((0, 0), 0);
        return Ok(g);
    }
    let m = g.modulus();
    let pi = p as i128;
    let mut set = std::collections::BTreeSet::new();
    for w in 0..m {
        if let Some(c) = g.canonical((1, w)) {
            set.insert(c);
        }
        if w % pi == 0 {
            if let Some(c) = g.canonical((w, 1)) {
                set.insert(c);
            }
        }
    }
    // Identity first, then the rest in sorted order.
    let one = g.canonical((1, 0)).unwrap();
    g.elems.push(one);
    g.elems.extend(set.into_iter().filter(|&c| c != one));
    g.index = g.elems.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    let h = g.order() as u64;
    let v = val(h as i128, p);
    if v != n - 1 {
        return Err(TowerError::Unsupported(format!("p divides #Δ for D_K = {}, p = {p}", field.dk)));
    }
    let pv = p.pow(v);
    let d = h / pv;
    // CRT idempotent exponents for the prime-to-p and p-parts.
    let e_delta = (pv as i128 * invmod(pv as i128, d as i128).unwrap_or(0)) as u64 % h.max(1);
    let e_gamma = if pv == 1 { 0 } else { (d as i128 * invmod(d as i128, pv as i128).unwrap()) as u64 % h };

    // Δ: the first residue x + yϑ, 0 ≤ x, y < p, whose class generates G_1.
    let g1 = ring_class_group_raw(field, p)?;
    let mut dgen_global = field.int(1, 0);
    'outer: for y in 0..p as i64 {
        for x in 0..p as i64 {
            let a = field.int(x, y);
            if let Ok(c) = g1.class_of(&a) {
                if element_order(&g1, c) == d {
                    dgen_global = a;
                    break 'outer;
                }
            }
        }
    }
    let dgen = g.pow(g.class_of(&dgen_global)?, e_delta);
    g.delta = powers(&g, dgen, d as usize);

    // Γ⁻: p-part of [1 + pϑ].
    let ggen = g.pow(g.class_of(&field.int(1, p as i64))?, e_gamma);
    g.gamma = powers(&g, ggen, pv as usize);
    if element_order(&g, ggen) != pv {
        return Err(TowerError::Unsupported("1 + pϑ does not generate Γ⁻".into()));
    }
    let mut coords = vec![(0, 0); g.order()];
    for (i, &a) in g.delta.iter().enumerate() {
        for (j, &b) in g.gamma.iter().enumerate() {
            coords[g.mul(a, b)] = (i, j);
        }
    }
    g.coords = coords;
    Ok(g)
}

/// `G_1` without the splitting data.
fn ring_class_group_raw(field: &QuadField, p: u64) -> Result<RingClassGroup, TowerError> {
    let mut g = RingClassGroup {
        field: *field,
        p,
        n: 1,
        elems: vec![],
        index: HashMap::new(),
        delta: vec![0],
        gamma: vec![0],
        coords: vec![],
    };
    let mut set = std::collections::BTreeSet::new();
    for w in 0..p as i128 {
        if let Some(c) = g.canonical((1, w)) {
            set.insert(c);
        }
    }
    if let Some(c) = g.canonical((0, 1)) {
        set.insert(c);
    }
    let one = g.canonical((1, 0)).unwrap();
    g.elems.push(one);
    g.elems.extend(set.into_iter().filter(|&c| c != one));
    g.index = g.elems.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    Ok(g)
}

fn powers(g: &RingClassGroup, x: usize, count: usize) -> Vec<usize> {
    let mut out = vec![0];
    for _ in 1..count {
        out.push(g.mul(*out.last().unwrap(), x));
    }
    out
}

pub fn element_order(g: &RingClassGroup, x: usize) -> u64 {
    let mut k = 1;
    let mut y = x;
    while y != 0 {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

/// Local data at `p` and at `q | N⁺` fixing `ς^{(n)}`.
#[derive(Clone, Debug)]
pub struct TowerSetup {
    pub field: QuadField,
    pub p: u64,
    /// `ι_p(ϑ)` mod `p^digits` (split `p` only).
    pub theta_p: Option<BigInt>,
    /// `(q, e, ι_𝔮(ϑ) mod q^digits)` for `q^e ∥ N⁺`, with `𝔮 = (q, ϑ − r_q)`.
    pub n_plus: Vec<(u64, u32, BigInt)>,
    pub digits: u32,
}

impl TowerSetup {
    pub fn new(b: &QuatAlgebra, digits: u32) -> Result<Self, TowerError> {
        let field = b.field;
        check_tower(&field, b.p)?;
        let theta_p = theta_root(&field, b.p, digits).map(|r| r.residue());
        let mut n_plus = Vec::new();
        for (q, e) in factor(b.n_plus) {
            let dq = digits.min((120.0 / (q as f64).log2()) as u32);
            let r = theta_root(&field, q, dq)
                .ok_or_else(|| TowerError::Unsupported(format!("{q} | N+ does not split in K")))?;
            n_plus.push((q, e, r.residue()));
        }
        Ok(TowerSetup { field, p: b.p, theta_p, n_plus, digits })
    }

    /// `ς_p^{(n)}` with `ϑ ↦ ι_p(ϑ)` for split `p`.
    pub fn varsigma_p(&self, n: u32) -> Mat2 {
        let pn = rat(self.p.pow(n) as i64);
        match &self.theta_p {
            Some(r) => {
                let r = Rational::from_integer(r.clone());
                [[&r * &pn, rat(-1)], [pn, rat(0)]]
            }
            None => [[rat(0), rat(1)], [-pn, rat(0)]],
        }
    }

    /// `diag(1, pⁿ)·M⁻¹`, a scalar multiple of `(ς_p^{(n)})⁻¹` by `pⁿ`.
    fn t_p(&self, n: u32) -> Mat2 {
        let pn = rat(self.p.pow(n) as i64);
        let minv = match &self.theta_p {
            Some(r) => [[rat(0), rat(1)], [rat(-1), Rational::from_integer(r.clone())]],
            None => mat2_int([[0, -1], [1, 0]]),
        };
        [[minv[0][0].clone(), minv[0][1].clone()], [&minv[1][0] * &pn, &minv[1][1] * &pn]]
    }

    /// `ς_q` for `q | N⁺`, up to the unit `δ⁻¹`: `[[ϑ, ϑ̄], [1, 1]]`.
    pub fn varsigma_q(&self, idx: usize) -> Mat2 {
        let (_, _, r) = &self.n_plus[idx];
        let r = Rational::from_integer(r.clone());
        let rb = rat(self.field.t) - &r;
        [[r, rb], [rat(1), rat(1)]]
    }

    /// Generator of `𝔑⁺ = ∏ 𝔮^e`.
    pub fn n_plus_generator(&self) -> Result<QuadElem, TowerError> {
        let mut acc = self.field.int(1, 0);
        for (q, e, r) in &self.n_plus {
            let pi = prime_above(&self.field, *q, r)?;
            for _ in 0..*e {
                acc = acc.times(&pi);
            }
        }
        Ok(acc)
    }
}

/// `L_q = L'_q` for full-rank lattices.
fn locally_equal(l1: &ZLattice, l2: &ZLattice, q: u64) -> bool {
    let m = l1.intersect(l2);
    let prime_to = |r: Rational| val_big(r.numer(), q) == 0;
    prime_to(l1.index_of(&m)) && prime_to(l2.index_of(&m))
}

/// `t ∈ O_K` with `J O_max J⁻¹ = t O_max t⁻¹` at every prime `q | β` not
/// dividing `N⁻`. Such `q` split in `K` (β is a unit square at the inert
/// primes that matter), and `t` is a product of `𝔮 = (q, ϑ − r_q)`,
/// `r_q` the least root, and its conjugate.
pub fn beta_twist(order: &EichlerOrder) -> Result<QuadElem, TowerError> {
    let b = &order.alg;
    let f = b.field;
    let o = &order.maximal;
    let j = b.j();
    let jinv = j.inverse().ok_or_else(|| TowerError::Unsupported("J = 0".into()))?;
    let conj_by = |x: &QuatElem, xi: &QuatElem| -> ZLattice {
        lattice_of(&elems(b, o).iter().map(|y| x.times(y).times(xi)).collect::<Vec<_>>())
    };
    let target = conj_by(&j, &jinv);
    let mut t = f.int(1, 0);
    for (q, e) in factor(b.beta.unsigned_abs()) {
        if b.n_minus % q == 0 {
            continue;
        }
        let r = theta_root(&f, q, 1)
            .ok_or_else(|| TowerError::Unsupported(format!("{q} | β is not split in K")))?
            .residue();
        let pi = prime_above(&f, q, &r)?;
        let mut found = None;
        for i in 0..=e {
            let mut c = f.int(1, 0);
            for _ in 0..i {
                c = c.times(&pi);
            }
            for _ in i..e {
                c = c.times(&pi.conj());
            }
            let cq = b.from_quad(&c);
            if locally_equal(&conj_by(&cq, &cq.inverse().unwrap()), &target, q) {
                found = Some(c);
                break;
            }
        }
        t = t.times(&found.ok_or_else(|| TowerError::Unsupported(format!("J does not move O_max along K at {q}")))?);
    }
    Ok(t)
}

/// A generator of `𝔮 = (q, ϑ − r)` for `h_K = 1`, found as a vector of norm `q`
/// divisible by `𝔮`.
pub fn prime_above(field: &QuadField, q: u64, r: &BigInt) -> Result<QuadElem, TowerError> {
    let qi = q as i128;
    let r = md((r % BigInt::from(q)).to_i128().unwrap(), qi);
    // x + y r ≡ 0 mod q means x + yϑ ∈ 𝔮; Lagrange-reduce the lattice
    // {(q, 0), (−r, 1)} under x² + txy + ny².
    let (t, n) = (field.t as i128, field.n as i128);
    let form = |v: (i128, i128)| v.0 * v.0 + t * v.0 * v.1 + n * v.1 * v.1;
    let bil = |v: (i128, i128), w: (i128, i128)| 2 * v.0 * w.0 + t * (v.0 * w.1 + v.1 * w.0) + 2 * n * v.1 * w.1;
    let (mut u, mut v) = ((qi, 0i128), (-r, 1i128));
    if form(u) < form(v) {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        // u is the longer vector
        let m = (bil(u, v) as f64 / (2 * form(v)) as f64).round() as i128;
        let w = (u.0 - m * v.0, u.1 - m * v.1);
        if form(w) >= form(v) {
            break;
        }
        u = v;
        v = w;
    }
    if form(v) == qi {
        let a = field.int(v.0 as i64, v.1 as i64);
        debug_assert_eq!(a.norm(), rat(q as i64));
        return Ok(a);
    }
    Err(TowerError::Unsupported(format!("no generator found for a prime above {q}")))
}

/// A reduced Gross point `x_n(a) = α·g_c·u`.
#[derive(Clone, Debug)]
pub struct GrossPoint {
    pub n: u32,
    /// Global representative of `a` at `p`.
    pub a0: QuadElem,
    pub class: usize,
    pub alpha: QuatElem,
    /// `ā₀/a₀`.
    pub twist: QuadElem,
}

/// `x_n(a)R̂ ∩ B = {x ∈ O_max : (ς^{(n)})⁻¹a₀⁻¹x ∈ R_p, ς_q⁻¹x ∈ R_q for q | N⁺}`.
pub fn gross_lattice(setup: &TowerSetup, order: &EichlerOrder, a0: &QuadElem, n: u32) -> Result<ZLattice, TowerError> {
    let b = &order.alg;
    let ep = val(order.level as i128, b.p);
    let ab = b.from_quad(&a0.conj());
    let iab = b.split_rat(b.p, setup.digits, &ab)?;
    let tp = mat2_mul(&setup.t_p(n), &iab);
    let id = mat2_int([[1, 0], [0, 1]]);
    let mut conds = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let e = if (i, j) == (1, 0) { n + ep } else { n };
            if e > 0 {
                conds.push((tp.clone(), id.clone(), i, j, e));
            }
        }
    }
    let mut l = local_conditions(b, &order.maximal, b.p, &conds)?;
    for (idx, (q, _, _)) in setup.n_plus.iter().enumerate() {
        let e = val(order.level as i128, *q);
        if e == 0 {
            continue;
        }
        let t = crate::quaternion::mat2_adj(&setup.varsigma_q(idx));
        l = local_conditions(b, &l, *q, &[(t, id.clone(), 1, 0, e)])?;
    }
    Ok(l)
}

/// Reduce `x_n(a)` for the idele class of `a₀` (a unit at `p`).
pub fn reduce_gross_point(setup: &TowerSetup, cs: &IdealClassSet, a0: &QuadElem, n: u32) -> Result<GrossPoint, TowerError> {
    if !a0.is_integral() || (a0.norm().to_integer() % BigInt::from(setup.p)).is_zero() {
        return Err(TowerError::NotCoprime(a0.to_string()));
    }
    let l = gross_lattice(setup, &cs.order, a0, n)?;
    let (class, alpha) = cs.identify(&l).ok_or(TowerError::Unidentified(setup.digits))?;
    let twist = a0.conj().times(&crate::arith::FieldScalar::inverse(a0).unwrap());
    Ok(GrossPoint { n, a0: a0.clone(), class, alpha, twist })
}

/// Reduce all points `x_n(a)` for `a` running over `G_n`.
pub fn reduce_all(setup: &TowerSetup, cs: &IdealClassSet, g: &RingClassGroup) -> Result<Vec<GrossPoint>, TowerError> {
    (0..g.order()).into_par_iter().map(|i| reduce_gross_point(setup, cs, &g.rep(i), g.n)).collect()
}

impl GrossPoint {
    /// `u_p⁻¹ = (ς^{(n)})⁻¹a₀⁻¹α` in `GL₂(Z_p)` under `i_p`.
    pub fn unit_inverse_at_p(&self, setup: &TowerSetup, b: &QuatAlgebra) -> Result<Mat2, TowerError> {
        let ab = b.from_quad(&self.a0.conj());
        let m = b.split_rat(b.p, setup.digits, &ab.times(&self.alpha))?;
        let s = rat(1) / (rat(b.p.pow(self.n) as i64) * self.a0.norm());
        let t = mat2_mul(&setup.t_p(self.n), &m);
        Ok([[&t[0][0] * &s, &t[0][1] * &s], [&t[1][0] * &s, &t[1][1] * &s]])
    }
}

/// Whether `(B ∩ ς^{(n)}R̂(ς^{(n)})⁻¹) ∩ K = O_n`. Returns `false` without
/// computing when `ord_p(M) > n`, where optimality is not expected.
pub fn check_optimality(setup: &TowerSetup, order: &EichlerOrder, n: u32) -> Result<bool, TowerError> {
    let b = &order.alg;
    if val(order.level as i128, b.p) > n {
        return Ok(false);
    }
    let l = gross_lattice(setup, order, &b.field.int(1, 0), n)?;
    let nl = lattice_norm(b, &l);
    let ol = product(b, &l, &conj_lattice(b, &l)).scale(&(rat(1) / nl));
    let kl = embedded_field_part(&ol);
    Ok(kl == TowerOrder { field: b.field, p: b.p, n }.lattice())
}

/// `O ∩ K` for a lattice `O` in the coordinates `(1, ϑ, J, ϑJ)`.
pub fn embedded_field_part(o: &ZLattice) -> ZLattice {
    let d = Rational::new(BigInt::from(1), o.den.clone());
    let kp = ZLattice::from_rat_rows(
        &[vec![d.clone(), Rational::zero(), Rational::zero(), Rational::zero()], vec![Rational::zero(), d, Rational::zero(), Rational::zero()]],
        4,
    );
    o.intersect(&kp)
}

/// `χ = χ_t·ν` on `G_n`: `χ(δ) = ζ_{#Δ}^{t}`, `ν(γ) = ζ_{#Γ_n⁻}^{j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerCharacter {
    pub branch: u64,
    pub wild: u64,
    pub m: i64,
}

impl TowerCharacter {
    /// Value at `g` as an element of `Q(ζ_N)`, `N = lcm(#Δ, #Γ_n⁻)`.
    pub fn value<C: Scalar>(&self, g: &RingClassGroup, i: usize, proto: &C) -> CycloNum<C> {
        let (a, b) = g.coords[i];
        let d = g.delta_order() as u64;
        let pg = g.gamma_order() as u64;
        let big = num_integer::lcm(d, pg);
        let e = (self.branch * a as u64 % d) * (big / d) + (self.wild * b as u64 % pg) * (big / pg);
        CycloNum::zeta_pow(big, e as i64, proto)
    }

    /// Conductor exponent `s`: `0` for the trivial character, `1` when `ν` is
    /// trivial but `χ_t` is not, and `e + 1` when `ν` has order `p^e > 1`.
    pub fn conductor_exp(&self, g: &RingClassGroup) -> u32 {
        let pg = g.gamma_order() as u64;
        let d = g.delta_order() as u64;
        let w = self.wild % pg.max(1);
        if w != 0 {
            let ord = pg / num_integer::gcd(w, pg);
            return val(ord as i128, g.p) + 1;
        }
        if self.branch % d.max(1) != 0 {
            1
        } else {
            0
        }
    }

    pub fn is_trivial(&self, g: &RingClassGroup) -> bool {
        self.conductor_exp(g) == 0
    }

    /// `χ_t` restricted to `Δ`, as a root-of-unity exponent modulo `#Δ`.
    pub fn branch_only(&self) -> TowerCharacter {
        TowerCharacter { branch: self.branch, wild: 0, m: self.m }
    }
}

/// All characters of `G_n` with a given branch.
pub fn wild_characters(g: &RingClassGroup, branch: u64, m: i64) -> Vec<TowerCharacter> {
    (0..g.gamma_order() as u64).map(|j| TowerCharacter { branch, wild: j, m }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups() {
        let f = QuadField::new(4).unwrap();
        let g1 = ring_class_group(&f, 3, 1).unwrap();
        let g2 = ring_class_group(&f, 3, 2).unwrap();
        assert_eq!(g1.order(), 2);
        assert_eq!(g2.order(), 6);
        assert_eq!(g2.structure(), vec![2, 3]);
        assert_eq!(ring_class_group(&f, 3, 0).unwrap().order(), 1);
    }

    #[test]
    fn unit_index_in_formula() {
        for (dk, p) in [(4, 3), (4, 5), (3, 5), (3, 7), (7, 3), (8, 5)] {
            let f = QuadField::new(dk).unwrap();
            for n in 1..=3 {
                let g = ring_class_group(&f, p, n).unwrap();
                assert_eq!(g.order() as u64, class_number_formula(&f, p, n), "{dk} {p} {n}");
            }
        }
    }
}
