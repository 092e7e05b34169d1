//! Complex-analytic side: Dirichlet coefficients of `L(f/K, χ, s)`,
//! `L(f, s)`, `L(f ⊗ η_K, s)` and `L(Sym² f, s)`, central and edge values by an
//! approximate functional equation, the Petersson bridge through
//! `L(1, Ad π)`, and the assembled interpolation right-hand side.

use crate::arith::int::{kronecker_disc, primes_upto};
use crate::arith::quad::{QuadField, Splitting};
use crate::cm_tower::{prime_above, RingClassGroup, TowerCharacter};
use crate::forms_hecke::petersson;
use crate::theta_padicL::{
    e_p_multiplier, embed_hecke, interpolation_rhs, theta_exact, InterpolationData, MultiplierCase, ThetaSetup,
};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("class number of K must be 1")]
    Unsupported,
    #[error("need a_n up to {need}, have {have}")]
    TooFewCoefficients { need: usize, have: usize },
    #[error("approximate functional equation did not converge (discrepancy {0:e})")]
    Convergence(f64),
    #[error("{0}")]
    Tower(String),
}

/// Coefficients `a_n` (`a_0` unused) of a newform of weight `k` and level `N`.
#[derive(Clone, Debug)]
pub struct NewformData {
    pub level: u64,
    pub k: u32,
    pub coeffs: Vec<i64>,
}

impl NewformData {
    pub fn a(&self, n: usize) -> i64 {
        self.coeffs[n]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `ε_q = −q^{(2−k)/2} a_q` for `q ∥ N`.
    pub fn atkin_lehner_sign(&self, q: u64) -> i32 {
        let aq = self.a(q as usize) as f64;
        let e = -aq * (q as f64).powf((2.0 - self.k as f64) / 2.0);
        if e > 0.0 {
            1
        } else {
            -1
        }
    }
}

/// `Σ_{j ∈ Z} (−1)^j q^{s·j(3j−1)/2}` up to `q^x`.
fn pentagonal(x: usize, s: usize) -> Vec<i64> {
    let mut v = vec![0i64; x + 1];
    let mut j: i64 = 0;
    loop {
        let mut any = false;
        for jj in [j, -j] {
            let e = (jj * (3 * jj - 1) / 2) as usize * s;
            if e <= x {
                any = true;
                if jj == j || j != 0 {
                    v[e] += if jj.rem_euclid(2) == 0 { 1 } else { -1 };
                }
            }
        }
        if j != 0 && !any {
            break;
        }
        if j == 0 {
            v[0] = 1;
        }
        j += 1;
    }
    v
}

fn square_sparse(v: &[i64]) -> Vec<i64> {
    let nz: Vec<(usize, i64)> = v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, *c)).collect();
    let mut out = vec![0i64; v.len()];
    for &(i, a) in &nz {
        for &(j, b) in &nz {
            if i + j < v.len() {
                out[i + j] += a * b;
            }
        }
    }
    out
}

/// Exact integer convolution truncated to `len` through a floating FFT; the
/// inputs are small enough that rounding is exact.
fn convolve(a: &[i64], b: &[i64], len: usize) -> Vec<i64> {
    let size = (a.len() + b.len()).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let load = |v: &[i64]| {
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        for (i, x) in v.iter().enumerate() {
            buf[i] = Complex64::new(*x as f64, 0.0);
        }
        buf
    };
    let mut fa = load(a);
    let mut fb = load(b);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);
    fa.iter().take(len).map(|z| (z.re / size as f64).round() as i64).collect()
}

/// `a_n` of `q∏(1−qⁿ)²(1−q^{11n})²`, the newform of level 11, for `n ≤ x`.
pub fn eta_level11(x: usize) -> NewformData {
    let c = square_sparse(&pentagonal(x, 1));
    let d = square_sparse(&pentagonal(x, 11));
    let prod = convolve(&c, &d, x);
    let mut coeffs = vec![0i64; x + 1];
    coeffs[1..=x].copy_from_slice(&prod[..x]);
    NewformData { level: 11, k: 2, coeffs }
}

/// `a_n` for `n ≤ x` from `a_q` at primes (Hecke recursion; `q | N` are
/// treated as `a_{q^e} = a_q^e`).
pub fn hecke_extend(level: u64, k: u32, ap: &dyn Fn(u64) -> i64, x: usize) -> NewformData {
    let mut coeffs = vec![0i64; x + 1];
    coeffs[1] = 1;
    let primes = primes_upto(x);
    let mut spf = vec![0u64; x + 1];
    for &q in &primes {
        let mut m = q as usize;
        while m <= x {
            if spf[m] == 0 {
                spf[m] = q;
            }
            m += q as usize;
        }
    }
    let mut local: Vec<Vec<i64>> = vec![Vec::new(); x + 1];
    for &q in &primes {
        let a = ap(q);
        let bad = level % q == 0;
        let qk = (q as i64).pow(k - 1);
        let mut v = vec![1i64, a];
        let mut pw = q as usize;
        while pw <= x / q as usize {
            let e = v.len();
            let next = if bad { a * v[e - 1] } else { a * v[e - 1] - qk * v[e - 2] };
            v.push(next);
            pw *= q as usize;
        }
        local[q as usize] = v;
    }
    for n in 2..=x {
        let q = spf[n];
        let mut m = n;
        let mut e = 0;
        while m % q as usize == 0 {
            m /= q as usize;
            e += 1;
        }
        coeffs[n] = coeffs[m] * local[q as usize][e];
    }
    NewformData { level, k, coeffs }
}

/// `ln Γ(z)` for complex `z` (Lanczos, g = 7), any branch.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if z.re < 0.5 {
        let s = (Complex64::new(PI, 0.0) * z).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(C[0], 0.0);
    for (i, c) in C.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + G + 0.5;
    Complex64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + x.ln()
}

/// Gamma factors `Γ_R(s + μ)` / `Γ_C(s + μ)`.
#[derive(Clone, Copy, Debug)]
pub enum GammaFactor {
    R(f64),
    C(f64),
}

fn ln_gamma_factor(g: &[GammaFactor], s: Complex64) -> Complex64 {
    g.iter()
        .map(|f| match *f {
            GammaFactor::R(mu) => {
                let z = s + mu;
                -z / 2.0 * PI.ln() + ln_gamma(z / 2.0)
            }
            GammaFactor::C(mu) => {
                let z = s + mu;
                Complex64::new(2f64.ln(), 0.0) - z * (2.0 * PI).ln() + ln_gamma(z)
            }
        })
        .sum()
}

/// A self-dual `L(s) = Σ c_n n^{−s}` (analytic normalization, centre `1/2`)
/// with `Λ(s) = Q^{s/2}γ(s)L(s) = ε Λ(1 − s)`.
#[derive(Clone, Debug)]
pub struct LSeries {
    pub coeffs: Vec<f64>,
    pub conductor: f64,
    pub gamma: Vec<GammaFactor>,
    pub sign: f64,
}

/// A value with its error estimate and the number of terms used.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct LValue {
    pub value: f64,
    pub error_estimate: f64,
    pub cutoff: usize,
}

struct Kernel {
    nodes: Vec<(Complex64, Complex64)>,
}

impl Kernel {
    /// `V_w(y) = (1/2πi)∫_{(c)} γ(w+u)/γ(w)·y^{−u} du/u`, trapezoid rule on
    /// `Re u = 3/2`, truncated once the integrand is below `1e−20`.
    fn new(gamma: &[GammaFactor], w: f64) -> Self {
        let c = 1.5;
        let h = 0.05;
        let base = ln_gamma_factor(gamma, Complex64::new(w, 0.0));
        let node = |t: f64| {
            let u = Complex64::new(c, t);
            let g = (ln_gamma_factor(gamma, Complex64::new(w, 0.0) + u) - base).exp() / u;
            (u, g * h / (2.0 * PI))
        };
        let mut nodes = vec![node(0.0)];
        let mut j = 1;
        loop {
            let a = node(j as f64 * h);
            let b = node(-(j as f64) * h);
            let small = a.1.norm() < 1e-20 && b.1.norm() < 1e-20;
            nodes.push(a);
            nodes.push(b);
            if small || j > 200_000 {
                break;
            }
            j += 1;
        }
        Kernel { nodes }
    }

    /// Smallest `y` past which `|V| < 1e−14`. With a fixed contour the
    /// quadrature has a rounding floor well below that.
    fn reach(&self) -> f64 {
        let mut y = 0.5;
        while self.eval(y).abs() > 1e-14 && y < 1e6 {
            y *= 1.05;
        }
        y
    }

    fn eval(&self, y: f64) -> f64 {
        let ly = y.ln();
        self.nodes.iter().map(|(u, g)| (g * (-u * ly).exp()).re).sum()
    }
}

impl LSeries {
    /// `L(s)` at real `s` with the split `G(u) = A^u`:
    /// `Σ c_n n^{−s} V_s(n/(A√Q)) + ε·(ratio)·Σ c_n n^{s−1} V_{1−s}(nA/√Q)`.
    /// `cutoff` overrides the number of terms.
    fn value_with(&self, s: f64, a: f64, cutoff: Option<usize>) -> Result<(f64, usize), OracleError> {
        let sq = self.conductor.sqrt();
        let k1 = Kernel::new(&self.gamma, s);
        let k2 = Kernel::new(&self.gamma, 1.0 - s);
        let need = cutoff.unwrap_or((k1.reach() * a).max(k2.reach() / a).mul_add(sq, 1.0) as usize);
        if need > self.coeffs.len() - 1 {
            return Err(OracleError::TooFewCoefficients { need, have: self.coeffs.len() - 1 });
        }
        let (s1, s2): (f64, f64) = (1..=need)
            .into_par_iter()
            .map(|n| {
                let c = self.coeffs[n];
                if c == 0.0 {
                    return (0.0, 0.0);
                }
                let y = n as f64 / sq;
                let nf = n as f64;
                (c * nf.powf(-s) * k1.eval(y / a), c * nf.powf(s - 1.0) * k2.eval(y * a))
            })
            .reduce(|| (0.0, 0.0), |x, y| (x.0 + y.0, x.1 + y.1));
        let ratio = if (s - 0.5).abs() < 1e-15 {
            1.0
        } else {
            (self.conductor.ln() * (0.5 - s)
                + (ln_gamma_factor(&self.gamma, Complex64::new(1.0 - s, 0.0))
                    - ln_gamma_factor(&self.gamma, Complex64::new(s, 0.0)))
                .re)
                .exp()
        };
        Ok((s1 + self.sign * ratio * s2, need))
    }

    /// `L(s)` with an error estimate from two splits `A ∈ {1, 1.2}`.
    pub fn value(&self, s: f64) -> Result<LValue, OracleError> {
        let (v1, n1) = self.value_with(s, 1.0, None)?;
        let (v2, n2) = self.value_with(s, 1.2, None)?;
        Ok(LValue { value: v1, error_estimate: (v1 - v2).abs(), cutoff: n1.max(n2) })
    }

    pub fn value_with_cutoff(&self, s: f64, cutoff: usize) -> Result<f64, OracleError> {
        Ok(self.value_with(s, 1.0, Some(cutoff))?.0)
    }

    /// Terms needed at `s`.
    pub fn cutoff(&self, s: f64) -> usize {
        let k1 = Kernel::new(&self.gamma, s);
        let k2 = Kernel::new(&self.gamma, 1.0 - s);
        (k1.reach().max(k2.reach()) * self.conductor.sqrt()).ceil() as usize
    }

    /// Discrepancy between two splits for each sign; the smaller one
    /// identifies `ε`.
    pub fn sign_discrepancy(&self, s: f64) -> Result<[(f64, f64); 2], OracleError> {
        let mut out = [(1.0, 0.0), (-1.0, 0.0)];
        for o in out.iter_mut() {
            let l = LSeries { sign: o.0, ..self.clone() };
            let (a, _) = l.value_with(s, 1.0, None)?;
            let (b, _) = l.value_with(s, 1.2, None)?;
            o.1 = (a - b).abs();
        }
        Ok(out)
    }
}

/// Expands `∏_q P_q(q^{−s})^{−1}` into `Σ c_n n^{−s}` for `n ≤ x`;
/// `local(q, e_max)` returns the coefficients of `1/P_q(T)` up to `T^{e_max}`.
fn euler_product(x: usize, local: impl Fn(u64, usize) -> Vec<Complex64> + Sync) -> Vec<Complex64> {
    let primes = primes_upto(x);
    let mut spf = vec![0u32; x + 1];
    for &q in &primes {
        let mut m = q as usize;
        while m <= x {
            if spf[m] == 0 {
                spf[m] = q as u32;
            }
            m += q as usize;
        }
    }
    let mut table: Vec<Vec<Complex64>> = vec![Vec::new(); x + 1];
    let locals: Vec<(u64, Vec<Complex64>)> = primes
        .par_iter()
        .map(|&q| {
            let mut e = 0;
            let mut pw = 1usize;
            while pw <= x / q as usize {
                pw *= q as usize;
                e += 1;
            }
            (q, local(q, e))
        })
        .collect();
    for (q, v) in locals {
        table[q as usize] = v;
    }
    let mut c = vec![Complex64::new(0.0, 0.0); x + 1];
    c[1] = Complex64::new(1.0, 0.0);
    for n in 2..=x {
        let q = spf[n] as usize;
        let mut m = n;
        let mut e = 0;
        while m % q == 0 {
            m /= q;
            e += 1;
        }
        c[n] = c[m] * table[q][e];
    }
    c
}

/// Coefficients of `1/P(T)` up to `T^e` for `P(T) = Σ p_i T^i`, `p_0 = 1`.
fn invert_poly(p: &[Complex64], e: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); e + 1];
    out[0] = Complex64::new(1.0, 0.0);
    for n in 1..=e {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, pi) in p.iter().enumerate().skip(1) {
            if i <= n {
                acc -= pi * out[n - i];
            }
        }
        out[n] = acc;
    }
    out
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 − λ_q c T + ε_q c² T²` in the analytic normalization, `ε_q = 0` for `q | N`.
fn gl2_local(f: &NewformData, q: u64, c: Complex64) -> Vec<Complex64> {
    let lam = f.a(q as usize) as f64 / (q as f64).powf((f.k as f64 - 1.0) / 2.0);
    let good = if f.level % q == 0 { 0.0 } else { 1.0 };
    vec![Complex64::new(1.0, 0.0), -c * lam, c * c * good]
}

fn real_coeffs(c: &[Complex64]) -> Vec<f64> {
    c.iter().map(|z| z.re).collect()
}

/// `L(f, s)` with conductor `N` and sign `ε`.
pub fn newform_lseries(f: &NewformData, sign: f64) -> LSeries {
    let x = f.len();
    let c = euler_product(x, |q, e| invert_poly(&gl2_local(f, q, Complex64::new(1.0, 0.0)), e));
    LSeries {
        coeffs: real_coeffs(&c),
        conductor: f.level as f64,
        gamma: vec![GammaFactor::C((f.k as f64 - 1.0) / 2.0)],
        sign,
    }
}

/// `L(f ⊗ η_K, s)` for `(N, D_K) = 1`.
pub fn twisted_lseries(f: &NewformData, field: &QuadField, sign: f64) -> LSeries {
    let x = f.len();
    let d = -field.dk;
    let c = euler_product(x, |q, e| {
        let eta = kronecker_disc(d, q) as f64;
        invert_poly(&gl2_local(f, q, Complex64::new(eta, 0.0)), e)
    });
    LSeries {
        coeffs: real_coeffs(&c),
        conductor: f.level as f64 * (field.dk * field.dk) as f64,
        gamma: vec![GammaFactor::C((f.k as f64 - 1.0) / 2.0)],
        sign,
    }
}

/// `L(Sym² f, s)` for squarefree `N`; at `q | N` the factor is `1 − λ_q² T`,
/// which is also the adjoint factor, so this is `L(s, Ad π)` without the
/// archimedean part.
pub fn sym2_lseries(f: &NewformData) -> LSeries {
    let x = f.len();
    let c = euler_product(x, |q, e| {
        let lam = f.a(q as usize) as f64 / (q as f64).powf((f.k as f64 - 1.0) / 2.0);
        let l2 = lam * lam;
        let p: Vec<Complex64> = if f.level % q == 0 {
            vec![Complex64::new(1.0, 0.0), Complex64::new(-l2, 0.0)]
        } else {
            vec![1.0, -(l2 - 1.0), l2 - 1.0, -1.0].into_iter().map(|v| Complex64::new(v, 0.0)).collect()
        };
        invert_poly(&p, e)
    });
    LSeries {
        coeffs: real_coeffs(&c),
        conductor: (f.level * f.level) as f64,
        gamma: vec![GammaFactor::R(1.0), GammaFactor::C(f.k as f64 - 1.0)],
        sign: 1.0,
    }
}

/// Values `χ(𝔮)` of a ring class character on prime ideals, through a fixed
/// complex embedding `ζ_n ↦ e^{2πi·a/n}`.
#[derive(Clone, Copy)]
pub struct IdealCharacter<'a> {
    pub field: QuadField,
    pub group: &'a RingClassGroup,
    pub chi: TowerCharacter,
    /// Galois twist `a` of the embedding.
    pub embedding: i64,
}

impl IdealCharacter<'_> {
    fn value_of(&self, pi: &crate::arith::quad::QuadElem) -> Complex64 {
        match self.group.ideal_class(pi) {
            Ok(i) => self.chi.value(self.group, i, &crate::arith::rat(0)).galois(self.embedding).embed_complex(),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// `χ` at the primes above `q`: `(χ(𝔮), χ(𝔮̄))` if split, `χ((q))` twice if
    /// inert, `χ(𝔮)` twice if ramified. Primes above `p` get `0` unless `χ`
    /// is unramified.
    pub fn at(&self, q: u64) -> Result<(Complex64, Complex64), OracleError> {
        let p = self.group.p;
        if q == p {
            let v = if self.chi.conductor_exp(self.group) == 0 { 1.0 } else { 0.0 };
            return Ok((Complex64::new(v, 0.0), Complex64::new(v, 0.0)));
        }
        let f = &self.field;
        match f.splitting(q) {
            Splitting::Inert => {
                let v = self.value_of(&f.int(q as i64, 0));
                Ok((v, v))
            }
            Splitting::Split => {
                let r = crate::arith::ext::theta_root(f, q, 1).ok_or(OracleError::Unsupported)?.residue();
                let pi = prime_above(f, q, &r).map_err(|e| OracleError::Tower(e.to_string()))?;
                Ok((self.value_of(&pi), self.value_of(&pi.conj())))
            }
            Splitting::Ramified => {
                let pi = ramified_prime(f, q)?;
                let v = self.value_of(&pi);
                Ok((v, v))
            }
        }
    }
}

fn ramified_prime(f: &QuadField, q: u64) -> Result<crate::arith::quad::QuadElem, OracleError> {
    for s in 0..64i64 {
        for u in -s..=s {
            for v in [-s, s] {
                let x = f.int(u, v);
                if x.norm() == crate::arith::rat(q as i64) {
                    return Ok(x);
                }
                let x = f.int(v, u);
                if x.norm() == crate::arith::rat(q as i64) {
                    return Ok(x);
                }
            }
        }
    }
    Err(OracleError::Unsupported)
}

/// `L(f/K, χ, s)` in the analytic normalization (value at `1/2` equals the
/// Rankin–Selberg value at `k/2`), weight `m = 0`, `(N, D_K·p) = 1`.
/// Conductor `N²(D_K N𝔣)²` with `N𝔣 = p^{2s}`.
pub fn rankin_lseries(f: &NewformData, chi: &IdealCharacter, x: usize) -> Result<LSeries, OracleError> {
    if x > f.len() {
        return Err(OracleError::TooFewCoefficients { need: x, have: f.len() });
    }
    let field = chi.field;
    let primes = primes_upto(x);
    let vals: Vec<(u64, (Complex64, Complex64))> =
        primes.par_iter().map(|&q| chi.at(q).map(|v| (q, v))).collect::<Result<_, _>>()?;
    let mut table = std::collections::HashMap::new();
    for (q, v) in vals {
        table.insert(q, v);
    }
    let c = euler_product(x, |q, e| {
        let (c1, c2) = table[&q];
        let p = match field.splitting(q) {
            Splitting::Split => poly_mul(&gl2_local(f, q, c1), &gl2_local(f, q, c2)),
            Splitting::Ramified => gl2_local(f, q, c1),
            Splitting::Inert => {
                // (1 − α²cT²)(1 − β²cT²) in the analytic normalization
                let l = gl2_local(f, q, Complex64::new(1.0, 0.0));
                let (tr, nm) = (-l[1], l[2]);
                let z = Complex64::new(0.0, 0.0);
                vec![Complex64::new(1.0, 0.0), z, -(tr * tr - 2.0 * nm) * c1, z, nm * nm * c1 * c1]
            }
        };
        invert_poly(&p, e)
    });
    let s = chi.chi.conductor_exp(chi.group) as i32;
    let nf = (chi.group.p as f64).powi(2 * s);
    let dk = field.dk as f64;
    let k = f.k as f64;
    Ok(LSeries {
        coeffs: real_coeffs(&c),
        conductor: (f.level as f64).powi(2) * (dk * nf).powi(2),
        gamma: vec![GammaFactor::C((k - 1.0) / 2.0), GammaFactor::C((k - 1.0) / 2.0)],
        sign: 1.0,
    })
}

/// `L(1, Ad π_∞) = 2^{1−k}π^{−(k+1)}Γ(k)`.
pub fn adjoint_archimedean(k: u32) -> f64 {
    2f64.powi(1 - k as i32) * PI.powi(-(k as i32 + 1)) * (1..k).map(|i| i as f64).product::<f64>()
}

/// `‖φ_π‖_{Γ₀(N)} = N·L(1, Ad π)/2^k` (no primes of `N_B`), with the
/// complete adjoint value `L(1, Ad π_∞)·L_fin(1, Ad π)`.
pub fn petersson_norm_numeric(f: &NewformData) -> Result<LValue, OracleError> {
    let l = sym2_lseries(f).value(1.0)?;
    let c = adjoint_archimedean(f.k) * f.level as f64 / 2f64.powi(f.k as i32);
    Ok(LValue { value: l.value * c, error_estimate: l.error_estimate * c, cutoff: l.cutoff })
}

/// `Ω_{π,N⁻} = 4^{k−1}π^k ‖φ_π‖ / ⟨f, f⟩`.
pub fn period(k: u32, norm: f64, pairing: f64) -> f64 {
    4f64.powi(k as i32 - 1) * PI.powi(k as i32) * norm / pairing
}

/// One `(χ, embedding)` comparison of `|χ̂(Θ_n)|²` against the interpolation
/// formula.
#[derive(Clone, Debug, serde::Serialize)]
pub struct InterpolationSample {
    pub n: u32,
    pub branch: u64,
    pub wild: u64,
    pub embedding: i64,
    pub conductor_exp: u32,
    pub theta_sq: f64,
    pub l_value: LValue,
    pub e_p: Complex64,
    /// `|RHS|` with the constants taken literally.
    pub rhs: f64,
}

impl InterpolationSample {
    pub fn ratio(&self) -> f64 {
        self.theta_sq / self.rhs
    }
}

/// The assembled period `Ω` for the form in `setup`, with `f` its classical
/// newform.
pub fn setup_period(setup: &ThetaSetup, f: &NewformData) -> Result<f64, OracleError> {
    let pet = petersson(&setup.cs, &setup.form, &setup.form).map_err(|e| OracleError::Tower(e.to_string()))?;
    let norm = petersson_norm_numeric(f)?;
    Ok(period(setup.k, norm.value, pet.embed_complex().re))
}

/// `|χ̂(Θ_n)|²` and the right-hand side for `χ = χ_tν` under every embedding
/// `ζ ↦ ζ^a`. Weight 2, `m = 0`, `N⁺ = 1`, `p ∤ N`.
pub fn interpolation_samples(
    setup: &ThetaSetup,
    f: &NewformData,
    omega: f64,
    n: u32,
    chi: TowerCharacter,
) -> Result<Vec<InterpolationSample>, OracleError> {
    let field = setup.field();
    if setup.k != 2 || setup.cs.order.level != 1 || f.level % setup.p() == 0 {
        return Err(OracleError::Unsupported);
    }
    let tower = |e: &dyn std::fmt::Display| OracleError::Tower(e.to_string());
    let th = theta_exact(setup, n).map_err(|e| tower(&e))?;
    let g = setup.group(n).map_err(|e| tower(&e))?;
    let v = th.evaluate(&g, &chi).map_err(|e| tower(&e))?;
    let root = th.coeffs[0].complex_roots()[0];
    let s = chi.conductor_exp(&g);
    let cn = num_integer::lcm(g.delta_order(), g.gamma_order()) as i64;
    let mut out = Vec::new();
    for a in (1..cn.max(2)).filter(|a| num_integer::gcd(*a, cn) == 1) {
        let z = v.galois(a).embed_with(|h| embed_hecke(h, root));
        let ic = IdealCharacter { field, group: &g, chi, embedding: a };
        let l = rankin_lseries(f, &ic, f.len())?.value(0.5)?;
        let case = MultiplierCase { splitting: field.splitting(setup.p()), chi_ramified: s > 0 };
        let e_p = e_p_multiplier(case, root, ic.at(setup.p())?);
        let d = InterpolationData {
            k: 2,
            m: 0,
            p: setup.p(),
            s,
            dk: field.dk,
            u_k: field.u_k(),
            ord_p_n: 0,
            a_p: root,
            e_p,
            eps_p: 1,
            ramified_factor: ramified_factor(f, &ic)?,
            chi_n_plus: Complex64::new(1.0, 0.0),
        };
        let rhs = interpolation_rhs(&d, l.value, omega).norm();
        out.push(InterpolationSample {
            n,
            branch: chi.branch,
            wild: chi.wild,
            embedding: a,
            conductor_exp: s,
            theta_sq: z.norm_sqr(),
            l_value: l,
            e_p,
            rhs,
        });
    }
    Ok(out)
}

/// `∏_{q | (D_K, N⁻)} (1 − ε_q χ_t(𝔮))`.
fn ramified_factor(f: &NewformData, chi: &IdealCharacter) -> Result<Complex64, OracleError> {
    let mut acc = Complex64::new(1.0, 0.0);
    for (q, _) in crate::arith::int::factor(chi.field.dk as u64) {
        if f.level % q == 0 {
            let branch = IdealCharacter { chi: chi.chi.branch_only(), ..*chi };
            acc *= Complex64::new(1.0, 0.0) - f.atkin_lehner_sign(q) as f64 * branch.at(q)?.0;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        let g = ln_gamma(Complex64::new(5.0, 0.0)).exp();
        assert!((g.re - 24.0).abs() < 1e-10);
        let h = ln_gamma(Complex64::new(0.5, 0.0)).exp();
        assert!((h.re - PI.sqrt()).abs() < 1e-12);
        // |Γ(1/2 + it)|² = π / cosh(πt)
        let t = 3.0;
        let z = ln_gamma(Complex64::new(0.5, t)).exp();
        assert!((z.norm_sqr() - PI / (PI * t).cosh()).abs() < 1e-12);
    }

    #[test]
    fn eta_first_terms() {
        let f = eta_level11(20);
        assert_eq!(&f.coeffs[1..=13], &[1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, -2, 4]);
    }

    #[test]
    fn pentagonal_numbers() {
        let v = pentagonal(30, 1);
        let nz: Vec<(usize, i64)> = v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, *c)).collect();
        assert_eq!(nz, vec![(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1), (22, 1), (26, 1)]);
    }
}
