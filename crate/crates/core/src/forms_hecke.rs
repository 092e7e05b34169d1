//! Weight modules `L_k`, the representation `ρ_k`, the pairing, Brandt
//! matrices, eigenforms and their p-stabilization, and the pairing `⟨f, f⟩`.
//!
//! Forms are stored in Model A: a form is its list of values `f(I_c) ∈ L_k(K)`
//! on the class representatives, with `f(αI) = ρ_k(i_K(α)) f(I)`.

use crate::arith::ext::{theta_root, QuadExt};
use crate::arith::lattice::{enumerate_short, ZLattice};
use crate::arith::linalg::{identity, kernel, mat_mul, mat_vec, span_intersection, Mat};
use crate::arith::quad::{QuadElem, QuadField, Splitting};
use crate::arith::{rat, FieldScalar, Rational, Scalar};
use crate::ideal_classes::{
    atkin_lehner_ideal, combine, elems, local_conditions, neighbors, product, conj_lattice, lattice_norm,
    scaled_gram, ClassError, IdealClassSet,
};
use crate::quaternion::{mat2_int, Mat2, QuatElem};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormError {
    #[error("weight {0} must be even and at least 2")]
    BadWeight(u32),
    #[error("T_{0} requested for a prime dividing N-; use U_{0}")]
    TqAtNMinus(u64),
    #[error("eigenspace has dimension {0}, expected 1")]
    EigenspaceDim(usize),
    #[error("no p-adic unit root of the Hecke polynomial at {0} (hypothesis (ord) fails)")]
    NotOrdinary(u64),
    #[error("non-invertible determinant")]
    Singular,
    #[error("class {0} not identified")]
    Unidentified(String),
    #[error(transparent)]
    Class(#[from] ClassError),
}

/// `r = (k − 2)/2`.
pub fn half(k: u32) -> i64 {
    (k as i64 - 2) / 2
}

/// Matrix of `ρ_k(g)` on the basis `v_m`, `m = −r..=r` (column `m + r` is the
/// image of `v_m`).
pub fn rho_matrix<T: FieldScalar>(g: &[[T; 2]; 2], k: u32) -> Result<Mat<T>, FormError> {
    let det = g[0][0].times(&g[1][1]).minus(&g[0][1].times(&g[1][0]));
    let scale = det.inverse().ok_or(FormError::Singular)?.pow_u(half(k) as u64);
    Ok(subst_matrix(g, k).into_iter().map(|row| row.into_iter().map(|x| x.times(&scale)).collect()).collect())
}

/// Matrix of `P(X, Y) ↦ P((X, Y)g)` on the basis `v_m` (no determinant twist).
pub fn subst_matrix<T: Scalar>(g: &[[T; 2]; 2], k: u32) -> Mat<T> {
    let r = half(k);
    let d = (k - 1) as usize;
    let (a, b, c, dd) = (&g[0][0], &g[0][1], &g[1][0], &g[1][1]);
    let zero = a.zero_like();
    let mut out = vec![vec![zero.clone(); d]; d];
    for col in 0..d {
        let m = col as i64 - r;
        // polynomial in X with Y-degree implicit: index = X-degree
        let mut poly = vec![a.one_like()];
        let lin1 = [c.clone(), a.clone()];
        let lin2 = [dd.clone(), b.clone()];
        for _ in 0..(r - m) {
            poly = poly_mul(&poly, &lin1);
        }
        for _ in 0..(r + m) {
            poly = poly_mul(&poly, &lin2);
        }
        for (xdeg, coef) in poly.iter().enumerate() {
            // v_{m'} has X-degree r − m', row index m' + r = 2r − xdeg
            let row = 2 * r as usize - xdeg;
            out[row][col] = coef.clone();
        }
    }
    out
}

fn poly_mul<T: Scalar>(p: &[T], q: &[T]) -> Vec<T> {
    let mut out = vec![p[0].zero_like(); p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in q.iter().enumerate() {
            out[i + j] = out[i + j].plus(&x.times(y));
        }
    }
    out
}

pub fn rho_act<T: FieldScalar>(g: &[[T; 2]; 2], v: &[T], k: u32) -> Result<Vec<T>, FormError> {
    Ok(mat_vec(&rho_matrix(g, k)?, v))
}

/// `ρ_k(i_K(α))`.
pub fn rho_quat(a: &QuatElem, k: u32) -> Mat<QuadElem> {
    rho_matrix(&a.i_k(), k).expect("nonzero quaternion")
}

/// Coefficient of `⟨v_m, v_{−m}⟩`: `(−1)^{r+m} Γ(k/2+m)Γ(k/2−m)/Γ(k−1)`.
pub fn pair_coeff(k: u32, m: i64) -> Rational {
    let r = half(k);
    let fact = |n: i64| -> Rational { (1..=n).fold(rat(1), |acc, i| acc * rat(i)) };
    let sign = if (r + m).rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
    sign * fact(r + m) * fact(r - m) / fact(2 * r)
}

/// The perfect pairing on `L_k`.
pub fn pair_k<T: Scalar>(a: &[T], b: &[T], k: u32) -> T {
    let r = half(k);
    let mut acc = a[0].zero_like();
    for m in -r..=r {
        let i = (m + r) as usize;
        let j = (r - m) as usize;
        acc = acc.plus(&a[i].times(&b[j]).scale_rat(&pair_coeff(k, m)));
    }
    acc
}

/// A Hecke operator on `⊕_c L_k(K)`, row/column index `c·(k−1) + (m + r)`.
#[derive(Clone, Debug)]
pub struct HeckeOperator {
    pub label: String,
    pub q: u64,
    pub k: u32,
    pub matrix: Mat<QuadElem>,
}

fn check_weight(k: u32) -> Result<(), FormError> {
    if k < 2 || k % 2 == 1 {
        Err(FormError::BadWeight(k))
    } else {
        Ok(())
    }
}

fn zero_mat(f: QuadField, n: usize) -> Mat<QuadElem> {
    vec![vec![f.int(0, 0); n]; n]
}

fn add_block(m: &mut Mat<QuadElem>, bi: usize, bj: usize, blk: &Mat<QuadElem>) {
    let d = blk.len();
    for a in 0..d {
        for b in 0..d {
            m[bi * d + a][bj * d + b] = m[bi * d + a][bj * d + b].plus(&blk[a][b]);
        }
    }
}

/// `(1/#units) Σ_u ρ_k(u)` over the units of the left order of class `c`.
pub fn invariant_projector(cs: &IdealClassSet, c: usize, k: u32) -> Mat<QuadElem> {
    let f = cs.alg().field;
    let d = (k - 1) as usize;
    let units = &cs.classes[c].units;
    let mut acc = vec![vec![f.int(0, 0); d]; d];
    for u in units {
        let r = rho_quat(u, k);
        for a in 0..d {
            for b in 0..d {
                acc[a][b] = acc[a][b].plus(&r[a][b]);
            }
        }
    }
    let s = rat(1) / rat(units.len() as i64);
    acc.iter().map(|row| row.iter().map(|x| x.scale_rat(&s)).collect()).collect()
}

/// Brandt matrix of `T_q` (`q ∤ N⁻M`) or `U_q` (`q | N⁻`) from the neighbor
/// sublattices, scaled by `q^r`.
pub fn brandt_matrix(cs: &IdealClassSet, q: u64, k: u32) -> Result<HeckeOperator, FormError> {
    check_weight(k)?;
    let b = cs.alg();
    if cs.order.level % q == 0 {
        return Err(FormError::Class(ClassError::LevelNotCoprime(q, cs.order.level)));
    }
    let h = cs.len();
    let d = (k - 1) as usize;
    let proj: Vec<Mat<QuadElem>> = (0..h).map(|c| invariant_projector(cs, c, k)).collect();
    let qr = rat(q as i64).pow(half(k) as i32);
    let rows: Vec<Result<Mat<QuadElem>, FormError>> = (0..h)
        .into_par_iter()
        .map(|i| {
            let mut m = zero_mat(b.field, h * d);
            for j in neighbors(b, &cs.order.lat, &cs.classes[i].lat, q) {
                let (c, a) = cs.identify(&j).ok_or_else(|| FormError::Unidentified(format!("{:?}", j.rows)))?;
                let blk = mat_mul(&rho_quat(&a, k), &proj[c]);
                let blk: Mat<QuadElem> = blk.iter().map(|r| r.iter().map(|x| x.scale_rat(&qr)).collect()).collect();
                add_block(&mut m, i, c, &blk);
            }
            Ok(m)
        })
        .collect();
    let mut m = zero_mat(b.field, h * d);
    for r in rows {
        let r = r?;
        for a in 0..h * d {
            for c in 0..h * d {
                if !r[a][c].is_zero_elem() {
                    m[a][c] = r[a][c].clone();
                }
            }
        }
    }
    let label = if b.n_minus % q == 0 { format!("U_{q}") } else { format!("T_{q}") };
    Ok(HeckeOperator { label, q, k, matrix: m })
}

/// `#{α ∈ I_iI_j⁻¹ : N(α) = n N(I_i)/N(I_j)}` for `n = 0..=nmax` (weight 2
/// counting).
pub fn theta_counts(cs: &IdealClassSet, i: usize, j: usize, nmax: u64) -> Vec<u64> {
    let b = cs.alg();
    let (l, nn) = connecting_lattice(cs, i, j);
    let g = scaled_gram(b, &l, &nn);
    let mut counts = vec![0u64; nmax as usize + 1];
    counts[0] = 1;
    enumerate_short(&g, 2 * nmax as i128, |_, v| counts[(v / 2) as usize] += 1);
    counts
}

/// `I_iI_j⁻¹ = I_iĪ_j/N(I_j)` and its norm.
fn connecting_lattice(cs: &IdealClassSet, i: usize, j: usize) -> (ZLattice, Rational) {
    let b = cs.alg();
    let l = product(b, &cs.classes[i].lat, &conj_lattice(b, &cs.classes[j].lat)).scale(&cs.classes[j].norm.recip());
    let nn = lattice_norm(b, &l);
    (l, nn)
}

/// Brandt matrices `B(n)`, `1 ≤ n ≤ nmax`, from the theta series of the
/// connecting lattices, weighted by `ρ_k` and scaled by `n^r`.
pub fn brandt_theta(cs: &IdealClassSet, nmax: u64, k: u32) -> Result<Vec<Mat<QuadElem>>, FormError> {
    check_weight(k)?;
    let b = cs.alg();
    let h = cs.len();
    let d = (k - 1) as usize;
    let blocks: Vec<((usize, usize), Vec<Mat<QuadElem>>)> = (0..h * h)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / h, ij % h);
            let (l, nn) = connecting_lattice(cs, i, j);
            let g = scaled_gram(b, &l, &nn);
            let basis = elems(b, &l);
            let mut acc = vec![vec![vec![b.field.int(0, 0); d]; d]; nmax as usize + 1];
            enumerate_short(&g, 2 * nmax as i128, |c, v| {
                let n = (v / 2) as usize;
                let rm = if k == 2 {
                    vec![vec![b.field.int(1, 0)]]
                } else {
                    rho_quat(&combine(&basis, c), k)
                };
                for a in 0..d {
                    for e in 0..d {
                        acc[n][a][e] = acc[n][a][e].plus(&rm[a][e]);
                    }
                }
            });
            let w = rat(1) / rat(cs.classes[j].units.len() as i64);
            let out = (1..=nmax as usize)
                .map(|n| {
                    let s = &w * rat(n as i64).pow(half(k) as i32);
                    acc[n].iter().map(|r| r.iter().map(|x| x.scale_rat(&s)).collect()).collect()
                })
                .collect();
            ((i, j), out)
        })
        .collect();
    let mut mats = vec![zero_mat(b.field, h * d); nmax as usize];
    for ((i, j), list) in blocks {
        for (n, blk) in list.iter().enumerate() {
            add_block(&mut mats[n], i, j, blk);
        }
    }
    Ok(mats)
}

/// A quaternionic form in Model A: values on the class representatives.
#[derive(Clone, Debug, PartialEq)]
pub struct AutoForm<T: Scalar> {
    pub k: u32,
    pub values: Vec<Vec<T>>,
    pub normalized: bool,
}

impl<T: Scalar> AutoForm<T> {
    pub fn flat(&self) -> Vec<T> {
        self.values.iter().flatten().cloned().collect()
    }

    pub fn from_flat(k: u32, v: &[T], normalized: bool) -> Self {
        let d = (k - 1) as usize;
        AutoForm { k, values: v.chunks(d).map(|c| c.to_vec()).collect(), normalized }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> AutoForm<U> {
        AutoForm { k: self.k, values: self.values.iter().map(|v| v.iter().map(&f).collect()).collect(), normalized: self.normalized }
    }
}

pub fn apply(op: &HeckeOperator, f: &AutoForm<QuadElem>) -> AutoForm<QuadElem> {
    AutoForm::from_flat(f.k, &mat_vec(&op.matrix, &f.flat()), false)
}

/// The simultaneous eigenspace for the given `(q, a_q)`, inside the forms.
pub fn eigenspace(cs: &IdealClassSet, k: u32, target: &[(u64, Rational)]) -> Result<Vec<Vec<QuadElem>>, FormError> {
    let f = cs.alg().field;
    let h = cs.len();
    let d = (k - 1) as usize;
    let proto = f.int(0, 0);
    // forms: kernel of (P − 1) blockwise
    let mut pm = zero_mat(f, h * d);
    for c in 0..h {
        add_block(&mut pm, c, c, &invariant_projector(cs, c, k));
    }
    let id = identity(h * d, &f.int(0, 0));
    let pm1: Mat<QuadElem> = pm.iter().zip(&id).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.minus(y)).collect()).collect();
    let mut space = kernel(&pm1, &proto);
    for (q, aq) in target {
        let op = brandt_matrix(cs, *q, k)?;
        let shifted: Mat<QuadElem> = op
            .matrix
            .iter()
            .zip(&id)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.minus(&y.scale_rat(aq))).collect())
            .collect();
        let ker = kernel(&shifted, &proto);
        space = span_intersection(&space, &ker, &proto);
    }
    Ok(space)
}

/// Eigenform with the given eigenvalues, normalized to coprime integral
/// coordinates (positive first nonzero coordinate) with a `p`-adic unit value.
pub fn eigenform(cs: &IdealClassSet, k: u32, target: &[(u64, Rational)]) -> Result<AutoForm<QuadElem>, FormError> {
    let sp = eigenspace(cs, k, target)?;
    if sp.len() != 1 {
        return Err(FormError::EigenspaceDim(sp.len()));
    }
    let f = AutoForm::from_flat(k, &sp[0], false);
    Ok(normalize(&f, cs.alg().p))
}

/// Deterministic scaling: clear denominators, divide by the content, remove
/// the prime above `p` fixed by `ι_p` when every value lies in it, and make
/// the first nonzero coordinate positive.
pub fn normalize(f: &AutoForm<QuadElem>, p: u64) -> AutoForm<QuadElem> {
    let flat = f.flat();
    let field = flat[0].f;
    let mut den = BigInt::one();
    for x in &flat {
        den = den.lcm(x.u.denom()).lcm(x.v.denom());
    }
    let mut v: Vec<QuadElem> = flat.iter().map(|x| x.scale_rat(&Rational::from_integer(den.clone()))).collect();
    let mut g = BigInt::zero();
    for x in &v {
        g = g.gcd(x.u.numer()).gcd(x.v.numer());
    }
    if !g.is_zero() {
        let gi = Rational::new(BigInt::one(), g);
        v = v.iter().map(|x| x.scale_rat(&gi)).collect();
    }
    if field.splitting(p) == Splitting::Split && field.dk != 0 {
        if let (Some(r), Some(pi)) = (theta_root(&field, p, 1), prime_generator(&field, p)) {
            let r = r.residue();
            let in_p = |x: &QuadElem| -> bool {
                let val = x.u.numer() * x.v.denom() + x.v.numer() * x.u.denom() * &r;
                (val % BigInt::from(p)).is_zero()
            };
            let mul = pi.conj().scale_rat(&(rat(1) / rat(p as i64)));
            let mut guard = 0;
            while v.iter().all(|x| in_p(x)) && v.iter().any(|x| !x.is_zero_elem()) && guard < 64 {
                v = v.iter().map(|x| x.times(&mul)).collect();
                guard += 1;
            }
        }
    }
    let first = v.iter().find(|x| !x.is_zero_elem()).cloned();
    if let Some(x) = first {
        let neg = if !x.u.is_zero() { x.u.is_negative() } else { x.v.is_negative() };
        if neg {
            v = v.iter().map(|x| x.negate()).collect();
        }
    }
    AutoForm::from_flat(f.k, &v, true)
}

/// A generator of the prime above `p` singled out by `ι_p(ϑ) = r` (`h_K = 1`).
pub fn prime_generator(f: &QuadField, p: u64) -> Option<QuadElem> {
    let r = theta_root(f, p, 1)?.residue();
    let pb = BigInt::from(p);
    for s in 1..200i64 {
        for u in -s..=s {
            for v in [-s, s] {
                let x = f.int(u, v);
                if x.norm() == rat(p as i64) && ((BigInt::from(u) + BigInt::from(v) * &r) % &pb).is_zero() {
                    return Some(x);
                }
            }
        }
    }
    None
}

/// Some value of `f` is a unit at the prime fixed by `ι_p`.
pub fn has_unit_value(f: &AutoForm<QuadElem>, p: u64) -> bool {
    let field = f.values[0][0].f;
    let r = theta_root(&field, p, 1).map(|r| r.residue());
    let pb = BigInt::from(p);
    f.flat().iter().any(|x| {
        if !x.is_integral() {
            return false;
        }
        let (u, v) = (x.u.to_integer(), x.v.to_integer());
        match &r {
            Some(r) => !((u + v * r) % &pb).is_zero(),
            None => !(u % &pb).is_zero() || !(v % &pb).is_zero(),
        }
    })
}

/// The value of `f` at a right ideal `L`: `ρ_k(α) f(I_c)` for `L = αI_c`.
pub fn value_at(cs: &IdealClassSet, f: &AutoForm<QuadElem>, l: &ZLattice) -> Result<Vec<QuadElem>, FormError> {
    let (c, a) = cs.identify(l).ok_or_else(|| FormError::Unidentified(format!("{:?}", l.rows)))?;
    Ok(mat_vec(&rho_quat(&a, f.k), &f.values[c]))
}

/// `Σ_c ⟨f₁(I_c), f₂(I_c𝒲)⟩/#Γ_c` with `𝒲` the Atkin–Lehner ideal.
pub fn petersson(cs: &IdealClassSet, f1: &AutoForm<QuadElem>, f2: &AutoForm<QuadElem>) -> Result<QuadElem, FormError> {
    let b = cs.alg();
    let w = atkin_lehner_ideal(&cs.order)?;
    let mut acc = b.field.int(0, 0);
    for (c, cl) in cs.classes.iter().enumerate() {
        let l = product(b, &cl.lat, &w);
        let v2 = value_at(cs, f2, &l)?;
        let term = pair_k(&f1.values[c], &v2, f1.k).scale_rat(&(rat(1) / rat(cl.gamma_order() as i64)));
        acc = acc.plus(&term);
    }
    Ok(acc)
}

/// `K(A_p) = K[X]/(X² − a_pX + p^{k−1})`.
pub type HeckeElem = QuadExt<QuadElem>;

pub fn hecke_ring_gen(field: &QuadField, ap: &Rational, p: u64, k: u32) -> HeckeElem {
    QuadExt::gen(&field.int(0, 0), ap, &rat(p as i64).pow(k as i32 - 1))
}

/// `f†` on the level-`pM` class set, valued in `K(A_p)`, together with
/// `α_p = A_p/p^r`.
#[derive(Clone, Debug)]
pub struct Stabilized {
    pub form: AutoForm<HeckeElem>,
    pub alpha: HeckeElem,
}

/// `f†(g) = f(g) − α_p⁻¹ f(g·diag(1,p))` on the classes of `cs_p` (level `pM`);
/// `cs` is the level-`M` class set carrying `f`.
pub fn p_stabilize(cs: &IdealClassSet, f: &AutoForm<QuadElem>, cs_p: &IdealClassSet, ap: &Rational) -> Result<Stabilized, FormError> {
    let b = cs.alg();
    let p = b.p;
    let field = b.field;
    let a = hecke_ring_gen(&field, ap, p, f.k);
    let alpha = a.scale_rat(&(rat(1) / rat(p as i64).pow(half(f.k) as i32)));
    let ainv = alpha.inverse().ok_or(FormError::Singular)?;
    let lift = |x: &QuadElem| QuadExt::base(x.clone(), &a.tr, &a.nm);
    let one = mat2_int([[1, 0], [0, 1]]);
    let mut values = Vec::new();
    for cl in &cs_p.classes {
        let l1 = product(b, &cl.lat, &cs.order.lat);
        let l2 = local_conditions(b, &l1, p, &[(one.clone(), one.clone(), 1, 0, 1), (one.clone(), one.clone(), 1, 1, 1)])?;
        let v1 = value_at(cs, f, &l1)?;
        let v2 = value_at(cs, f, &l2)?;
        values.push(v1.iter().zip(&v2).map(|(x, y)| lift(x).minus(&lift(y).times(&ainv))).collect());
    }
    Ok(Stabilized { form: AutoForm { k: f.k, values, normalized: false }, alpha })
}

/// `U_p` on forms over the level-`pM` class set (class representatives must be
/// `R` locally at `p`).
pub fn u_p_apply<T: Scalar>(cs_p: &IdealClassSet, f: &AutoForm<T>, lift: impl Fn(&QuadElem) -> T) -> Result<AutoForm<T>, FormError> {
    let b = cs_p.alg();
    let p = b.p;
    let mut values = Vec::new();
    for cl in &cs_p.classes {
        let mut acc: Vec<T> = f.values[0].iter().map(|x| x.zero_like()).collect();
        for x in 0..p as i64 {
            // [[p,x],[0,1]]^{-1} i_p(y) ∈ U_0(p): with A = [[1,−x],[0,p]], A·i_p(y) ≡ 0 mod p
            // entrywise and its lower-left ≡ 0 mod p².
            let am: Mat2 = mat2_int([[1, -x], [0, p as i64]]);
            let one = mat2_int([[1, 0], [0, 1]]);
            let conds = [
                (am.clone(), one.clone(), 0, 0, 1),
                (am.clone(), one.clone(), 0, 1, 1),
                (am.clone(), one.clone(), 1, 0, 2),
                (am.clone(), one.clone(), 1, 1, 1),
            ];
            let j = local_conditions(b, &cl.lat, p, &conds)?;
            let (c, a) = cs_p.identify(&j).ok_or_else(|| FormError::Unidentified(format!("{:?}", j.rows)))?;
            let rm = rho_quat(&a, f.k);
            for (i, row) in rm.iter().enumerate() {
                for (e, r) in row.iter().enumerate() {
                    acc[i] = acc[i].plus(&lift(r).times(&f.values[c][e]));
                }
            }
        }
        values.push(acc);
    }
    Ok(AutoForm { k: f.k, values, normalized: false })
}

/// Newform eigenvalue `a_q` read off an eigenform from a Brandt matrix.
pub fn eigenvalue(op: &HeckeOperator, f: &AutoForm<QuadElem>) -> Option<QuadElem> {
    let v = f.flat();
    let w = mat_vec(&op.matrix, &v);
    let i = v.iter().position(|x| !x.is_zero_elem())?;
    let l = w[i].times(&v[i].inverse()?);
    if v.iter().zip(&w).all(|(x, y)| y == &x.times(&l)) {
        Some(l)
    } else {
        None
    }
}

pub fn is_rational_matrix(m: &Mat<QuadElem>) -> bool {
    m.iter().flatten().all(|x| x.v.is_zero())
}

pub fn to_mat2(m: &[[Rational; 2]; 2]) -> Mat2 {
    m.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::ideal_classes::eichler_order;
    use crate::quaternion::QuatAlgebra;

    fn q(r: i64) -> QuadElem {
        QuadField::new(4).unwrap().int(r, 0)
    }

    #[test]
    fn pairing_k4() {
        assert_eq!(pair_coeff(4, 1), rat(1));
        assert_eq!(pair_coeff(4, 0), ratio(-1, 2));
        let v1 = vec![q(0), q(0), q(1)];
        let vm1 = vec![q(1), q(0), q(0)];
        assert_eq!(pair_k(&v1, &vm1, 4), q(1));
    }

    #[test]
    fn b11_t2() {
        let b = QuatAlgebra::new(QuadField::new(4).unwrap(), 3, 1, 11).unwrap();
        let cs = IdealClassSet::compute(&eichler_order(&b, 1).unwrap()).unwrap();
        let t2 = brandt_matrix(&cs, 2, 2).unwrap();
        for row in &t2.matrix {
            let s = row.iter().fold(q(0), |a, x| a.plus(x));
            assert_eq!(s, q(3));
        }
        let th = brandt_theta(&cs, 3, 2).unwrap();
        assert_eq!(th[1], t2.matrix);
        let f = eigenform(&cs, 2, &[(2, rat(-2))]).unwrap();
        assert_eq!(eigenvalue(&brandt_matrix(&cs, 3, 2).unwrap(), &f), Some(q(-1)));
    }
}
