//! The objects a configuration determines: algebra, class set, eigenform,
//! theta setup.

use crate::config::{ConfigError, RunConfig};
use anticyclo::arith::quad::QuadElem;
use anticyclo::arith::{rat, Rational};
use anticyclo::forms_hecke::{brandt_matrix, eigenform, eigenvalue, AutoForm};
use anticyclo::ideal_classes::{eichler_order, IdealClassSet};
use anticyclo::quaternion::QuatAlgebra;
use anticyclo::theta_padicL::{epsilon_prime, LocalSign, ThetaError, ThetaSetup};

pub fn class_set(c: &RunConfig) -> anyhow::Result<IdealClassSet> {
    let b = QuatAlgebra::new(c.field()?, c.p, c.n_plus, c.n_minus).map_err(|e| ConfigError(e.to_string()))?;
    let order = eichler_order(&b, c.n_plus).map_err(|e| ConfigError(e.to_string()))?;
    Ok(IdealClassSet::compute(&order)?)
}

pub fn form(c: &RunConfig, cs: &IdealClassSet) -> anyhow::Result<AutoForm<QuadElem>> {
    let target: Vec<(u64, Rational)> = c.eigen.iter().map(|(q, a)| (*q, rat(*a))).collect();
    eigenform(cs, c.k, &target).map_err(|e| ConfigError(format!("eigenform for {:?}: {e}", c.eigen)).into())
}

/// Rational eigenvalue of `T_q` / `U_q` on `f`.
pub fn hecke_eigenvalue(cs: &IdealClassSet, f: &AutoForm<QuadElem>, q: u64) -> anyhow::Result<Rational> {
    let op = brandt_matrix(cs, q, f.k)?;
    let e = eigenvalue(&op, f).ok_or_else(|| anyhow::anyhow!("form is not an eigenvector of {}", op.label))?;
    if !e.is_rational() {
        anyhow::bail!("{} eigenvalue {e} is not rational", op.label);
    }
    Ok(e.u.clone())
}

pub struct Problem {
    pub config: RunConfig,
    pub hypotheses: Vec<String>,
    pub setup: ThetaSetup,
    pub a_p: Rational,
}

impl Problem {
    pub fn build(c: &RunConfig) -> anyhow::Result<Self> {
        let mut hypotheses = c.validate()?;
        let cs = class_set(c)?;
        let f = form(c, &cs)?;
        let a_p = hecke_eigenvalue(&cs, &f, c.p)?;
        let setup = match ThetaSetup::new(cs, f, a_p.clone()) {
            Ok(s) => s,
            Err(e @ ThetaError::NotOrdinary(_)) => return Err(ConfigError(e.to_string()).into()),
            Err(e) => return Err(e.into()),
        };
        hypotheses.push(format!("ordinary at p: a_p = {a_p}"));
        Ok(Problem { config: c.clone(), hypotheses, setup, a_p })
    }

    /// `ε_q` at every `q | N`: from `U_q` for `q | N⁻`, from the config for
    /// `q | N⁺`.
    pub fn local_signs(&self) -> anyhow::Result<Vec<LocalSign>> {
        let c = &self.config;
        let mut out = Vec::new();
        for (q, _) in anticyclo::arith::int::factor(c.n_minus) {
            let aq = hecke_eigenvalue(&self.setup.cs, &self.setup.form, q)?;
            let scaled = aq / rat(q as i64).pow((c.k as i32 - 2) / 2);
            let eps = if scaled == rat(-1) { 1 } else if scaled == rat(1) { -1 } else { anyhow::bail!("U_{q} eigenvalue {scaled} is not ±q^r") };
            out.push(LocalSign { q, eps });
        }
        for (q, e) in &c.signs {
            out.push(LocalSign { q: *q, eps: *e });
        }
        Ok(out)
    }

    pub fn epsilon_prime(&self) -> anyhow::Result<i32> {
        let c = &self.config;
        Ok(epsilon_prime(&self.setup.field(), c.p, c.k, c.n_minus, &self.local_signs()?))
    }
}
