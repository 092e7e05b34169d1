//! Verification suites run by `verify`.

use crate::problem::Problem;
use anticyclo::analytic_oracle::{eta_level11, interpolation_samples, setup_period, InterpolationSample};
use anticyclo::arith::linalg::mat_mul;
use anticyclo::cm_tower::TowerCharacter;
use anticyclo::forms_hecke::{brandt_matrix, eigenvalue, HeckeOperator};
use anticyclo::ideal_classes::mass_formula;
use anticyclo::theta_padicL::{
    branch_project, congruence_check, fe_translation, functional_equation_check, mu_lambda, theta_element, theta_exact,
    ThetaError,
};
use serde::Serialize;

pub const ALL: [&str; 7] = ["mass", "hecke", "tower", "congruence", "fe", "mu", "interp"];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub pass: bool,
    pub detail: String,
    pub counterexample: Option<String>,
}

fn result(suite: &str, pass: bool, detail: String, counterexample: Option<String>) -> SuiteResult {
    SuiteResult { suite: suite.into(), pass, detail, counterexample }
}

pub fn run(pb: &Problem, suite: &str) -> anyhow::Result<SuiteResult> {
    match suite {
        "mass" => mass(pb),
        "hecke" => hecke(pb),
        "tower" => tower(pb),
        "congruence" => congruence(pb),
        "fe" => fe(pb),
        "mu" => mu(pb),
        "interp" => interp(pb),
        s => Err(crate::config::ConfigError(format!("unknown suite {s:?}")).into()),
    }
}

fn mass(pb: &Problem) -> anyhow::Result<SuiteResult> {
    let cs = &pb.setup.cs;
    let got = cs.mass();
    let want = mass_formula(cs.alg().n_minus, cs.order.level);
    let pass = got == want;
    let ce = (!pass).then(|| format!("Σ 1/#Γ = {got}, formula {want}"));
    Ok(result("mass", pass, format!("{} classes, mass {got}", cs.len()), ce))
}

/// Primes `q ≤ 13` prime to `N⁺`, and the primes of `N⁻`.
pub fn small_primes(pb: &Problem) -> Vec<u64> {
    let c = &pb.config;
    let mut qs: Vec<u64> = [2u64, 3, 5, 7, 11, 13].into_iter().filter(|q| c.n_plus % q != 0).collect();
    qs.extend(anticyclo::arith::int::prime_divisors(c.n_minus).into_iter().filter(|q| *q > 13));
    qs
}

fn hecke(pb: &Problem) -> anyhow::Result<SuiteResult> {
    let cs = &pb.setup.cs;
    let f = &pb.setup.form;
    let ops: Vec<HeckeOperator> = small_primes(pb).iter().map(|&q| brandt_matrix(cs, q, f.k)).collect::<Result<_, _>>()?;
    let mut ce = None;
    let mut eig = Vec::new();
    for op in &ops {
        match eigenvalue(op, f) {
            Some(e) if e.is_rational() => eig.push(format!("{}={}", op.label, e.u)),
            Some(e) => eig.push(format!("{}={e}", op.label)),
            None => {
                ce.get_or_insert(format!("form is not an eigenvector of {}", op.label));
            }
        }
    }
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            if mat_mul(&a.matrix, &b.matrix) != mat_mul(&b.matrix, &a.matrix) {
                ce.get_or_insert(format!("{} and {} do not commute", a.label, b.label));
            }
        }
    }
    Ok(result("hecke", ce.is_none(), eig.join(" "), ce))
}

fn tower(pb: &Problem) -> anyhow::Result<SuiteResult> {
    let s = &pb.setup;
    let mut ce = None;
    for n in 1..pb.config.n_max {
        let g = s.group(n + 1)?;
        let gl = s.group(n)?;
        let hi = theta_element(s, n + 1, 0)?.project(&g, &gl);
        let lo = theta_element(s, n, 0)?;
        let prec = s.precision(n);
        if let Some(i) = hi.coeffs.iter().zip(&lo.coeffs).position(|(x, y)| !x.congruent(y, prec)) {
            ce = Some(format!("n = {n}: coefficient {:?} differs mod p^{prec}", gl.coords[i]));
            break;
        }
    }
    let detail = format!("project(Θ_{{n+1}}) = Θ_n for n < {}", pb.config.n_max);
    Ok(result("tower", ce.is_none(), detail, ce))
}

fn congruence(pb: &Problem) -> anyhow::Result<SuiteResult> {
    let mut ce = None;
    let mut vals = Vec::new();
    for n in 1..=pb.config.n_max {
        let rep = congruence_check(&pb.setup, n)?;
        vals.push(rep.min_difference_valuation);
        if !rep.holds && ce.is_none() {
            ce = Some(match rep.counterexample {
                Some((m, i)) => format!("n = {n}: m = {m}, coefficient {i}"),
                None => format!("n = {n}: negative valuation {}", rep.min_valuation),
            });
        }
    }
    Ok(result("congruence", ce.is_none(), format!("min ord_p(Θ^[m] − Θ^[0]) = {vals:?}"), ce))
}

fn fe(pb: &Problem) -> anyhow::Result<SuiteResult> {
    let s = &pb.setup;
    let eps = pb.epsilon_prime()?;
    let mut ce = None;
    for n in 1..=pb.config.n_max {
        let g = s.group(n)?;
        let h = fe_translation(s, &g)?;
        let rep = match theta_exact(s, n) {
            Ok(th) => functional_equation_check(&th, &g, eps, h),
            Err(ThetaError::NotExact) => functional_equation_check(&theta_element(s, n, 0)?, &g, eps, h),
            Err(e) => return Err(e.into()),
        };
        if let Some(i) = rep.mismatches.first() {
            ce = Some(format!("n = {n}: coefficient {:?}", g.coords[*i]));
            break;
        }
    }
    Ok(result("fe", ce.is_none(), format!("Θ* = ε′·Θ·h⁻¹ with ε′ = {eps}, n ≤ {}", pb.config.n_max), ce))
}

/// `μ = 0` on every branch at the top level `n_max`.
fn mu(pb: &Problem) -> anyhow::Result<SuiteResult> {
    let s = &pb.setup;
    let n = pb.config.n_max;
    let g = s.group(n)?;
    let th = theta_element(s, n, 0)?;
    let mut ce = None;
    let mut vals = Vec::new();
    for t in 0..g.delta_order() as u64 {
        let txt = match mu_lambda(&branch_project(&th, &g, t)) {
            Ok((mu, lambda)) => {
                if mu != 0 && ce.is_none() {
                    ce = Some(format!("branch {t}: μ = {mu}"));
                }
                format!("t={t}: μ={mu} λ={lambda}")
            }
            Err(ThetaError::Zero) => {
                ce.get_or_insert(format!("branch {t}: Θ vanishes to working precision"));
                format!("t={t}: μ=∞")
            }
            Err(e) => return Err(e.into()),
        };
        vals.push(txt);
    }
    Ok(result("mu", ce.is_none(), format!("n = {n}: {}", vals.join(", ")), ce))
}

/// Ratios `|χ̂₁(Θ)|²/|χ̂₂(Θ)|²` against `L(1/2, χ₁)/L(1/2, χ₂)` for the
/// level-11 form; other forms are skipped.
fn interp(pb: &Problem) -> anyhow::Result<SuiteResult> {
    let s = &pb.setup;
    let c = &pb.config;
    if c.n_minus * c.n_plus != 11 || c.k != 2 {
        return Ok(result("interp", true, "skipped: the L-value oracle covers level 11, weight 2 only".into(), None));
    }
    let eta = eta_level11(60_000);
    let omega = setup_period(s, &eta)?;
    let n = c.n_max.min(2);
    let g = s.group(n)?;
    let mut samples: Vec<InterpolationSample> = Vec::new();
    for branch in 0..g.delta_order() as u64 {
        for wild in 0..g.gamma_order() as u64 {
            let chi = TowerCharacter { branch, wild, m: 0 };
            if chi.conductor_exp(&g) == 0 {
                continue;
            }
            samples.extend(interpolation_samples(s, &eta, omega, n, chi)?);
        }
    }
    let usable: Vec<&InterpolationSample> = samples.iter().filter(|x| x.l_value.value.abs() > 1e-8).collect();
    let mut worst: f64 = 0.0;
    let mut ce = None;
    for x in &usable {
        for y in usable.iter().filter(|y| y.embedding == x.embedding && y.conductor_exp != x.conductor_exp) {
            let rel = ((x.theta_sq / y.theta_sq) / (x.l_value.value / y.l_value.value) - 1.0).abs();
            worst = worst.max(rel);
            if rel > c.tolerance && ce.is_none() {
                ce = Some(format!("(t={}, w={}) vs (t={}, w={}): relative error {rel:.2e}", x.branch, x.wild, y.branch, y.wild));
            }
        }
    }
    let pass = ce.is_none() && usable.len() >= 2;
    Ok(result("interp", pass, format!("{} samples at n = {n}, worst relative error {worst:.1e}", usable.len()), ce))
}
