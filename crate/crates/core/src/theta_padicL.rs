//! Theta elements `Θ_n^{[m]}(f†)`, their branches and character values, the
//! weight congruences, the functional equation, `μ`/`λ` at finite level and
//! the right-hand side of the interpolation formula.
//!
//! Gross-point values are computed on the `p`-adic side: for `x_n(a) = α g_c u`
//! with `u ∈ R̂^×`,
//!
//! `pⁿʳ φ^{[m]}(x_n(a))(ā/a)^m = (√βδ)^{−r} D_K^r √β^{−m} ⟨v_m((X,Y)Z_p), ρ_k(u_p⁻¹γ′) f(g_c)⟩`
//!
//! where `γ′ = [[ϑ, √βϑ̄], [1, √β]]` is the adjugate of `γ_𝔭`, every matrix
//! lies in `GL₂(O_{K_p})` and nothing is divided by `p`.

#![allow(non_snake_case)]

use crate::arith::cyclo::CycloNum;
use crate::arith::ext::{theta_root, KpElem, QuadExt};
use crate::arith::int::hensel_lift;
use crate::arith::linalg::{mat_vec, Mat};
use crate::arith::padic::PadicNum;
use crate::arith::quad::{QuadElem, QuadField, Splitting};
use crate::arith::{rat, FieldScalar, Rational, Scalar};
use crate::cm_tower::{beta_twist, reduce_all, ring_class_group, GrossPoint, RingClassGroup, TowerCharacter, TowerError, TowerSetup};
use crate::forms_hecke::{half, hecke_ring_gen, pair_k, rho_matrix, subst_matrix, AutoForm, FormError, HeckeElem};
use crate::ideal_classes::IdealClassSet;
use crate::quaternion::Mat2;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThetaError {
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("a_p = {0} is not a p-adic unit (non-ordinary)")]
    NotOrdinary(String),
    #[error("p = {p} must exceed k - 2 = {km2}")]
    SmallPrime { p: u64, km2: u32 },
    #[error("weight index {m} outside (-k/2, k/2)")]
    BadWeight { m: i64 },
    #[error("exact coefficients are only available for k = 2, m = 0")]
    NotExact,
    #[error("precision exhausted (needed {0} digits)")]
    Precision(i64),
    #[error("character conductor p^{0} exceeds level {1}")]
    Conductor(u32, u32),
    #[error("zero element")]
    Zero,
}

/// An element of `R[G_n]`, coefficients indexed like the group.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaElement<T: Scalar> {
    pub n: u32,
    pub m: i64,
    pub coeffs: Vec<T>,
}

impl<T: Scalar> ThetaElement<T> {
    /// Image under `G_n → G_low`.
    pub fn project(&self, g: &RingClassGroup, low: &RingClassGroup) -> Self {
        let mut out = vec![self.coeffs[0].zero_like(); low.order()];
        for (i, c) in self.coeffs.iter().enumerate() {
            let j = g.project(i, low);
            out[j] = out[j].plus(c);
        }
        ThetaElement { n: low.n, m: self.m, coeffs: out }
    }

    /// `σ ↦ σ⁻¹`.
    pub fn star(&self, g: &RingClassGroup) -> Self {
        let mut out = self.coeffs.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            out[g.inv(i)] = c.clone();
        }
        ThetaElement { coeffs: out, ..self.clone() }
    }

    /// `Θ·h` for a group element `h`.
    pub fn translate(&self, g: &RingClassGroup, h: usize) -> Self {
        let mut out = self.coeffs.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            out[g.mul(i, h)] = c.clone();
        }
        ThetaElement { coeffs: out, ..self.clone() }
    }

    pub fn scale(&self, c: &T) -> Self {
        ThetaElement { coeffs: self.coeffs.iter().map(|x| x.times(c)).collect(), ..self.clone() }
    }

    pub fn plus(&self, o: &Self) -> Self {
        ThetaElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.plus(b)).collect(), ..self.clone() }
    }

    /// Product in the group ring.
    pub fn times(&self, o: &Self, g: &RingClassGroup) -> Self {
        let mut out = vec![self.coeffs[0].zero_like(); g.order()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let k = g.mul(i, j);
                out[k] = out[k].plus(&a.times(b));
            }
        }
        ThetaElement { coeffs: out, ..self.clone() }
    }

    pub fn augmentation(&self) -> T {
        self.coeffs.iter().fold(self.coeffs[0].zero_like(), |acc, c| acc.plus(c))
    }

    /// `Σ_σ Θ(σ)χ(σ)`.
    pub fn evaluate(&self, g: &RingClassGroup, chi: &TowerCharacter) -> Result<CycloNum<T>, ThetaError> {
        let s = chi.conductor_exp(g);
        if s > g.n.max(1) {
            return Err(ThetaError::Conductor(s, g.n));
        }
        let proto = &self.coeffs[0];
        let mut acc = CycloNum::from_scalar(proto.zero_like());
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = acc.plus(&chi.value(g, i, proto).times(&CycloNum::from_scalar(c.clone())));
        }
        Ok(acc)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ThetaElement<U> {
        ThetaElement { n: self.n, m: self.m, coeffs: self.coeffs.iter().map(f).collect() }
    }
}

/// `χ_t(Θ) ∈ R[ζ][Γ_n⁻]`, coefficients indexed by the exponent of the frozen
/// generator of `Γ_n⁻`.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchTheta<T: Scalar> {
    pub n: u32,
    pub branch: u64,
    pub coeffs: Vec<CycloNum<T>>,
}

pub fn branch_project<T: Scalar>(theta: &ThetaElement<T>, g: &RingClassGroup, branch: u64) -> BranchTheta<T> {
    let proto = &theta.coeffs[0];
    let chi = TowerCharacter { branch, wild: 0, m: theta.m };
    let mut out = vec![CycloNum::from_scalar(proto.zero_like()); g.gamma_order()];
    for (i, c) in theta.coeffs.iter().enumerate() {
        let (_, j) = g.coords[i];
        out[j] = out[j].plus(&chi.value(g, i, proto).times(&CycloNum::from_scalar(c.clone())));
    }
    BranchTheta { n: g.n, branch, coeffs: out }
}

impl<T: Scalar> BranchTheta<T> {
    /// `Σ_j Θ_b(γ^j) ν(γ)^j` with `ν(γ) = ζ_{#Γ_n⁻}^{wild}`.
    pub fn evaluate(&self, g: &RingClassGroup, wild: u64) -> CycloNum<T> {
        let proto = self.coeffs[0].coeffs()[0].zero_like();
        let pg = g.gamma_order() as u64;
        let mut acc = CycloNum::from_scalar(proto.clone());
        for (j, c) in self.coeffs.iter().enumerate() {
            acc = acc.plus(&c.times(&CycloNum::zeta_pow(pg, (wild * j as u64 % pg) as i64, &proto)));
        }
        acc
    }

    pub fn plus(&self, o: &Self) -> Self {
        BranchTheta { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.plus(b)).collect(), ..self.clone() }
    }

    /// Image in `Γ_low⁻`.
    pub fn project(&self, g: &RingClassGroup, low: &RingClassGroup) -> Self {
        let pl = low.gamma_order();
        let mut out = vec![self.coeffs[0].zero_like(); pl];
        for (j, c) in self.coeffs.iter().enumerate() {
            // γ_n^j ↦ γ_low^j (the generators are compatible)
            let _ = g;
            out[j % pl] = out[j % pl].plus(c);
        }
        BranchTheta { n: low.n, branch: self.branch, coeffs: out }
    }
}

/// Valuation-aware coefficient rings.
pub trait PadicScalar: FieldScalar {
    fn padic_valuation(&self) -> Option<i64>;
    fn precision(&self) -> i64;
}

impl PadicScalar for PadicNum {
    fn padic_valuation(&self) -> Option<i64> {
        self.valuation()
    }
    fn precision(&self) -> i64 {
        self.prec
    }
}

impl PadicScalar for KpElem {
    fn padic_valuation(&self) -> Option<i64> {
        self.valuation()
    }
    fn precision(&self) -> i64 {
        self.prec()
    }
}

fn cyclo_valuation<T: PadicScalar>(c: &CycloNum<T>) -> Option<i64> {
    c.coeffs().iter().filter_map(|x| x.padic_valuation()).min()
}

/// `(μ_n, λ_n)` of a branch over `Z_p[ζ]` in the variable `T = γ − 1`;
/// `μ_n` is the least coefficient valuation and `λ_n` the least degree in `T`
/// attaining it.
pub fn mu_lambda<T: PadicScalar>(b: &BranchTheta<T>) -> Result<(i64, usize), ThetaError> {
    let len = b.coeffs.len();
    // b_i = Σ_j c_j binom(j, i)
    let mut tcoef = Vec::with_capacity(len);
    for i in 0..len {
        let mut acc = b.coeffs[0].zero_like();
        let mut binom = BigInt::one();
        for j in i..len {
            if j > i {
                binom = binom * BigInt::from(j) / BigInt::from(j - i);
            }
            acc = acc.plus(&b.coeffs[j].scale_rat(&Rational::from_integer(binom.clone())));
        }
        tcoef.push(acc);
    }
    let vals: Vec<Option<i64>> = tcoef.iter().map(cyclo_valuation).collect();
    let mu = vals.iter().flatten().min().copied().ok_or(ThetaError::Zero)?;
    let lambda = vals.iter().position(|v| *v == Some(mu)).unwrap();
    Ok((mu, lambda))
}

/// An eigenform `f` of level `M` (prime to `p`) with its data for the tower.
pub struct ThetaSetup {
    pub cs: IdealClassSet,
    pub tower: TowerSetup,
    pub form: AutoForm<QuadElem>,
    pub ap: Rational,
    pub k: u32,
    /// The unit root `A_p ∈ Z_p` of `X² − a_pX + p^{k−1}`.
    pub unit_root: PadicNum,
}

/// Default number of `p`-adic digits kept for splittings (`p^digits < 2^120`).
pub fn default_digits(p: u64) -> u32 {
    ((120.0 / (p as f64).log2()).floor() as u32).min(60)
}

/// The unit root of `X² − a_pX + p^{k−1}` modulo `p^prec`.
pub fn unit_root(ap: &Rational, p: u64, k: u32, prec: u32) -> Result<PadicNum, ThetaError> {
    if !ap.is_integer() {
        return Err(ThetaError::NotOrdinary(ap.to_string()));
    }
    let a = ap.to_integer().to_i128().unwrap();
    if a.rem_euclid(p as i128) == 0 {
        return Err(ThetaError::NotOrdinary(ap.to_string()));
    }
    let c = (p as i128).pow(k - 1);
    let r = hensel_lift(&[c, -a, 1], a.rem_euclid(p as i128), p, prec).ok_or(ThetaError::NotOrdinary(ap.to_string()))?;
    Ok(PadicNum::from_int(p, prec as i64, &BigInt::from(r)))
}

impl ThetaSetup {
    pub fn new(cs: IdealClassSet, form: AutoForm<QuadElem>, ap: Rational) -> Result<Self, ThetaError> {
        let b = cs.alg().clone();
        let k = form.k;
        if b.p <= (k as u64).saturating_sub(2) {
            return Err(ThetaError::SmallPrime { p: b.p, km2: k - 2 });
        }
        let digits = default_digits(b.p);
        let tower = TowerSetup::new(&b, digits)?;
        let unit_root = unit_root(&ap, b.p, k, digits)?;
        Ok(ThetaSetup { cs, tower, form, ap, k, unit_root })
    }

    pub fn p(&self) -> u64 {
        self.tower.p
    }

    pub fn field(&self) -> QuadField {
        self.tower.field
    }

    /// Working precision of the `p`-adic coefficients at level `n`.
    pub fn precision(&self, n: u32) -> i64 {
        self.tower.digits as i64 - 2 * n as i64 - 6
    }

    pub fn group(&self, n: u32) -> Result<RingClassGroup, ThetaError> {
        Ok(ring_class_group(&self.field(), self.p(), n)?)
    }

    pub fn points(&self, g: &RingClassGroup) -> Result<Vec<GrossPoint>, ThetaError> {
        Ok(reduce_all(&self.tower, &self.cs, g)?)
    }
}

/// Target of the `p`-adic evaluation: `K_𝔭 = Q_p` for split `p` (with
/// `ϑ ↦ ι_p(ϑ)`), `K_p` for inert `p`.
struct LocalCtx<T> {
    theta: T,
    theta_bar: T,
    sqrt_beta: T,
    emb: Box<dyn Fn(&QuadElem) -> T + Sync>,
    from_rat: Box<dyn Fn(&Rational) -> T + Sync>,
}

fn split_ctx(setup: &ThetaSetup, prec: i64) -> Result<LocalCtx<PadicNum>, ThetaError> {
    let p = setup.p();
    let f = setup.field();
    let r = theta_root(&f, p, prec as u32).expect("split prime");
    let s = setup.cs.alg().sqrt_beta(p, setup.tower.digits).map_err(TowerError::from)?;
    let rc = r.clone();
    Ok(LocalCtx {
        theta: r.clone(),
        theta_bar: PadicNum::from_i64(p, prec, f.t).sub(&r),
        sqrt_beta: PadicNum::from_int(p, prec, &s),
        emb: Box::new(move |x: &QuadElem| {
            PadicNum::from_rational(p, prec, &x.u).add(&PadicNum::from_rational(p, prec, &x.v).mul(&rc))
        }),
        from_rat: Box::new(move |x: &Rational| PadicNum::from_rational(p, prec, x)),
    })
}

fn inert_ctx(setup: &ThetaSetup, prec: i64) -> Result<LocalCtx<KpElem>, ThetaError> {
    let p = setup.p();
    let f = setup.field();
    let s = setup.cs.alg().sqrt_beta(p, setup.tower.digits).map_err(TowerError::from)?;
    let th = KpElem::new(&f, PadicNum::zero(p, prec), PadicNum::from_i64(p, prec, 1));
    Ok(LocalCtx {
        theta_bar: th.conj(),
        theta: th,
        sqrt_beta: KpElem::from_padic(&f, PadicNum::from_int(p, prec, &s)),
        emb: Box::new(move |x: &QuadElem| KpElem::from_quad(x, p, prec)),
        from_rat: Box::new(move |x: &Rational| KpElem::from_padic(&f, PadicNum::from_rational(p, prec, x))),
    })
}

fn mat_from_rat<T>(ctx: &LocalCtx<T>, m: &Mat2) -> [[T; 2]; 2] {
    [[(ctx.from_rat)(&m[0][0]), (ctx.from_rat)(&m[0][1])], [(ctx.from_rat)(&m[1][0]), (ctx.from_rat)(&m[1][1])]]
}

fn mat2_times<T: Scalar>(a: &[[T; 2]; 2], b: &[[T; 2]; 2]) -> [[T; 2]; 2] {
    let e = |i: usize, j: usize| a[i][0].times(&b[0][j]).plus(&a[i][1].times(&b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// `pⁿʳ φ^{[m]}(x_n(a))(ā/a)^m` for each `m` in `ms`.
fn point_value<T: FieldScalar>(
    setup: &ThetaSetup,
    ctx: &LocalCtx<T>,
    split: bool,
    pt: &GrossPoint,
    ms: &[i64],
) -> Result<Vec<T>, ThetaError> {
    let k = setup.k;
    let r = half(k);
    let p = setup.p();
    let b = setup.cs.alg();
    let s = &ctx.sqrt_beta;
    let one = s.one_like();
    let zero = s.zero_like();
    let pn = (ctx.from_rat)(&rat(p as i64).pow(pt.n as i32));
    let delta = ctx.theta.minus(&ctx.theta_bar);
    let z: [[T; 2]; 2] = if split {
        [[one.clone(), s.clone()], [zero.clone(), pn.times(s).times(&delta)]]
    } else {
        [[one.clone(), s.clone()], [pn.times(&ctx.theta).negate(), pn.times(s).times(&ctx.theta_bar).negate()]]
    };
    let gp: [[T; 2]; 2] = [[ctx.theta.clone(), s.times(&ctx.theta_bar)], [one.clone(), s.clone()]];
    let u = mat_from_rat(ctx, &pt.unit_inverse_at_p(&setup.tower, b)?);
    let rho = rho_matrix(&mat2_times(&u, &gp), k)?;
    let fv: Vec<T> = setup.form.values[pt.class].iter().map(|x| (ctx.emb)(x)).collect();
    let w = mat_vec(&rho, &fv);
    let sub: Mat<T> = subst_matrix(&z, k);
    let sinv = s.inverse().ok_or(ThetaError::Precision(0))?;
    let pre = s.times(&delta).inverse().ok_or(ThetaError::Precision(0))?.pow_u(r as u64).times(&(ctx.from_rat)(&rat(b.field.dk).pow(r as i32)));
    let mut out = Vec::new();
    for &m in ms {
        if m.abs() > r {
            return Err(ThetaError::BadWeight { m });
        }
        let col: Vec<T> = sub.iter().map(|row| row[(m + r) as usize].clone()).collect();
        let sm = if m >= 0 { sinv.pow_u(m as u64) } else { s.pow_u((-m) as u64) };
        out.push(pair_k(&col, &w, k).times(&pre).times(&sm));
    }
    Ok(out)
}

/// Values `pⁿʳ φ^{[m]}(x_n(a))(ā/a)^m` on `G_n`, as elements of `O_K ⊗ Z_p`,
/// one vector per `m` in `ms`.
pub fn gross_values(setup: &ThetaSetup, g: &RingClassGroup, pts: &[GrossPoint], ms: &[i64]) -> Result<Vec<Vec<KpElem>>, ThetaError> {
    let prec = setup.precision(g.n);
    let f = setup.field();
    let per_point: Vec<Vec<KpElem>> = if f.splitting(setup.p()) == Splitting::Split {
        let ctx = split_ctx(setup, prec)?;
        pts.par_iter()
            .map(|pt| point_value(setup, &ctx, true, pt, ms).map(|v| v.into_iter().map(|x| KpElem::from_padic(&f, x)).collect()))
            .collect::<Result<_, _>>()?
    } else {
        let ctx = inert_ctx(setup, prec)?;
        pts.par_iter().map(|pt| point_value(setup, &ctx, false, pt, ms)).collect::<Result<_, _>>()?
    };
    Ok((0..ms.len()).map(|j| per_point.iter().map(|v| v[j].with_prec(prec)).collect()).collect())
}

/// `Θ_n^{[m]}(f†)` over `O_K ⊗ Z_p` for every `m` in `ms`, at precision
/// [`ThetaSetup::precision`].
pub fn theta_elements(setup: &ThetaSetup, n: u32, ms: &[i64]) -> Result<Vec<ThetaElement<KpElem>>, ThetaError> {
    if n == 0 {
        return Err(ThetaError::Conductor(0, 0));
    }
    let g = setup.group(n)?;
    let gl = setup.group(n - 1)?;
    let vn = gross_values(setup, &g, &setup.points(&g)?, ms)?;
    let vl = gross_values(setup, &gl, &setup.points(&gl)?, ms)?;
    let prec = setup.precision(n);
    let f = setup.field();
    let p = setup.p();
    let r = half(setup.k);
    let a = setup.unit_root.with_prec(prec);
    let ainv = a.inv().unwrap();
    let c1 = KpElem::from_padic(&f, ainv.pow_u(n as u64));
    let c2 = KpElem::from_padic(&f, ainv.pow_u(n as u64 + 1).mul(&PadicNum::from_i64(p, prec, (p as i64).pow(2 * r as u32))));
    let mut out = Vec::new();
    for (j, &m) in ms.iter().enumerate() {
        let coeffs: Vec<KpElem> = (0..g.order())
            .map(|i| vn[j][i].times(&c1).minus(&vl[j][g.project(i, &gl)].times(&c2)).with_prec(prec))
            .collect();
        out.push(ThetaElement { n, m, coeffs });
    }
    Ok(out)
}

pub fn theta_element(setup: &ThetaSetup, n: u32, m: i64) -> Result<ThetaElement<KpElem>, ThetaError> {
    Ok(theta_elements(setup, n, &[m])?.remove(0))
}

/// `Θ_n^{[0]}(f†)` with exact coefficients in `K(A_p)` (`k = 2`).
pub fn theta_exact(setup: &ThetaSetup, n: u32) -> Result<ThetaElement<HeckeElem>, ThetaError> {
    if setup.k != 2 || n == 0 {
        return Err(ThetaError::NotExact);
    }
    let g = setup.group(n)?;
    let gl = setup.group(n - 1)?;
    let pn = setup.points(&g)?;
    let pl = setup.points(&gl)?;
    let f = setup.field();
    let a = hecke_ring_gen(&f, &setup.ap, setup.p(), setup.k);
    let ainv = a.inverse().unwrap();
    let c1 = ainv.pow_u(n as u64);
    let c2 = ainv.pow_u(n as u64 + 1);
    let lift = |x: &QuadElem| QuadExt::base(x.clone(), &a.tr, &a.nm);
    let coeffs = (0..g.order())
        .map(|i| {
            let v = lift(&setup.form.values[pn[i].class][0]);
            let w = lift(&setup.form.values[pl[g.project(i, &gl)].class][0]);
            v.times(&c1).minus(&w.times(&c2))
        })
        .collect();
    Ok(ThetaElement { n, m: 0, coeffs })
}

/// Image of an exact coefficient under `A_p ↦` unit root, `ϑ ↦ ι_p(ϑ)`.
pub fn exact_to_padic(setup: &ThetaSetup, x: &HeckeElem, prec: i64) -> KpElem {
    let p = setup.p();
    let f = setup.field();
    let a = KpElem::from_padic(&f, setup.unit_root.with_prec(prec));
    let c0 = KpElem::from_quad(&x.c0, p, prec);
    let c1 = KpElem::from_quad(&x.c1, p, prec);
    let v = c0.plus(&c1.times(&a));
    if f.splitting(p) == Splitting::Split {
        let r = theta_root(&f, p, prec as u32).unwrap();
        KpElem::from_padic(&f, v.project(&r))
    } else {
        v
    }
}

/// Minimum coefficient valuation over all `m` pairs of `Θ^{[m]} − Θ^{[0]}`
/// together with the minimum coefficient valuation of the elements.
#[derive(Clone, Debug)]
pub struct CongruenceReport {
    pub n: u32,
    pub min_valuation: i64,
    pub min_difference_valuation: i64,
    pub holds: bool,
    pub counterexample: Option<(i64, usize)>,
}

pub fn congruence_check(setup: &ThetaSetup, n: u32) -> Result<CongruenceReport, ThetaError> {
    let r = half(setup.k);
    let ms: Vec<i64> = (-r..=r).collect();
    let th = theta_elements(setup, n, &ms)?;
    let i0 = r as usize;
    let prec = setup.precision(n);
    let mut minv = prec;
    let mut mind = prec;
    let mut counter = None;
    for (j, t) in th.iter().enumerate() {
        for (i, c) in t.coeffs.iter().enumerate() {
            minv = minv.min(c.valuation().unwrap_or(prec));
            let d = c.minus(&th[i0].coeffs[i]).valuation().unwrap_or(prec);
            if d < mind {
                mind = d;
            }
            if d < n as i64 && counter.is_none() {
                counter = Some((ms[j], i));
            }
        }
    }
    Ok(CongruenceReport { n, min_valuation: minv, min_difference_valuation: mind, holds: minv >= 0 && counter.is_none(), counterexample: counter })
}

/// Local data of the newform at a prime dividing the level.
#[derive(Clone, Copy, Debug)]
pub struct LocalSign {
    pub q: u64,
    pub eps: i32,
}

/// `ε′ = (−1)^{r₀ + k/2} ∏_{q ∤ pD_K} ε(π_q)` with `r₀ = #{q | (D_K, N⁻)}`.
pub fn epsilon_prime(field: &QuadField, p: u64, k: u32, n_minus: u64, signs: &[LocalSign]) -> i32 {
    let r0 = crate::arith::int::prime_divisors(n_minus).iter().filter(|&&q| field.dk as u64 % q == 0).count() as i64;
    let mut e = if (r0 + k as i64 / 2) % 2 == 0 { 1 } else { -1 };
    for s in signs {
        if s.q != p && field.dk as u64 % s.q != 0 {
            e *= s.eps;
        }
    }
    e
}

#[derive(Clone, Debug)]
pub struct FunctionalEquationReport {
    pub n: u32,
    pub epsilon_prime: i32,
    pub translation: usize,
    pub holds: bool,
    pub mismatches: Vec<usize>,
}

/// `Θ* = ε′·Θ·h⁻¹` coefficientwise: `Θ(σ⁻¹) = ε′Θ(σh)`.
pub fn functional_equation_check<T: Scalar>(
    theta: &ThetaElement<T>,
    g: &RingClassGroup,
    eps: i32,
    h: usize,
) -> FunctionalEquationReport {
    let lhs = theta.star(g);
    let rhs = theta.translate(g, g.inv(h));
    let mut mismatches = Vec::new();
    for i in 0..g.order() {
        let r = if eps == 1 { rhs.coeffs[i].clone() } else { rhs.coeffs[i].negate() };
        if lhs.coeffs[i] != r {
            mismatches.push(i);
        }
    }
    FunctionalEquationReport { n: g.n, epsilon_prime: eps, translation: h, holds: mismatches.is_empty(), mismatches }
}

/// `σ_{𝔑⁺} = [𝔑⁺]_n`.
pub fn sigma_n_plus(setup: &TowerSetup, g: &RingClassGroup) -> Result<usize, ThetaError> {
    let gen = setup.n_plus_generator()?;
    Ok(g.ideal_class(&gen)?)
}

/// The translation in `Θ* = ε′·Θ·h⁻¹`: `h = σ_{𝔑⁺}·[t]_n` where `t` accounts
/// for `J` moving `O_max` at the primes of `β` outside `N⁻` ([`beta_twist`]).
/// `[t]_n` is trivial when `β` has no such primes.
pub fn fe_translation(setup: &ThetaSetup, g: &RingClassGroup) -> Result<usize, ThetaError> {
    let t = beta_twist(&setup.cs.order)?;
    Ok(g.mul(sigma_n_plus(&setup.tower, g)?, g.ideal_class(&t)?))
}

/// Splitting type of `p` in `K` and whether `χ_p` is ramified.
#[derive(Clone, Copy, Debug)]
pub struct MultiplierCase {
    pub splitting: Splitting,
    pub chi_ramified: bool,
}

/// `e_p(π, χ)`: `1` when `χ_p` is ramified, otherwise
/// `(1 − χ(𝔭)/α_p)(1 − χ(𝔭̄)/α_p)`, `1 − α_p^{−2}` or `1 − χ(𝔭)/α_p`.
/// `chi_p = (χ(𝔭), χ(𝔭̄))`.
pub fn e_p_multiplier(case: MultiplierCase, alpha: Complex64, chi_p: (Complex64, Complex64)) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if case.chi_ramified {
        return one;
    }
    match case.splitting {
        Splitting::Split => (one - chi_p.0 / alpha) * (one - chi_p.1 / alpha),
        Splitting::Inert => one - one / (alpha * alpha),
        Splitting::Ramified => one - chi_p.0 / alpha,
    }
}

/// Constants entering the interpolation formula.
#[derive(Clone, Debug)]
pub struct InterpolationData {
    pub k: u32,
    pub m: i64,
    pub p: u64,
    /// Conductor exponent `s`.
    pub s: u32,
    pub dk: i64,
    pub u_k: i64,
    /// `ord_p(N)`.
    pub ord_p_n: u32,
    /// Complex `A_p` (the root matched with the `p`-adic unit root).
    pub a_p: Complex64,
    pub e_p: Complex64,
    /// `ε(π_p)` (`1` when `p ∤ N`).
    pub eps_p: i32,
    /// `∏_{q | (D_K, N⁻)} (1 − ε(π_q)χ_t(𝔮))`.
    pub ramified_factor: Complex64,
    /// `χ_tν(𝔑⁺)`.
    pub chi_n_plus: Complex64,
}

/// `Γ(k/2+m)Γ(k/2−m)·L/Ω·e_p^{2−ord_p N}·p^s A_p^{−2s}(p^s D_K)^{k−2}·u_K²√D_K·ε(π_p)(−1)^m·∏(…)·χ(𝔑⁺)`.
pub fn interpolation_rhs(d: &InterpolationData, l_value: f64, period: f64) -> Complex64 {
    let gam = |x: i64| -> f64 { (1..x).map(|i| i as f64).product() };
    let kk = d.k as i64 / 2;
    let g = gam(kk + d.m) * gam(kk - d.m);
    let ps = (d.p as f64).powi(d.s as i32);
    let ep = d.e_p.powi(2 - d.ord_p_n as i32);
    let a = d.a_p.powi(-2 * d.s as i32);
    let sign = if d.m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let scal = g * l_value / period
        * ps
        * (ps * d.dk as f64).powi(d.k as i32 - 2)
        * (d.u_k * d.u_k) as f64
        * (d.dk as f64).sqrt()
        * d.eps_p as f64
        * sign;
    ep * a * d.ramified_factor * d.chi_n_plus * scal
}

/// Complex images of an exact theta coefficient: `(A_p root index, value)`.
pub fn embed_hecke(x: &HeckeElem, root: Complex64) -> Complex64 {
    x.embed_with(root, |q| q.embed_complex())
}
