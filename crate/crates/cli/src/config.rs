//! Run configuration: defaults (the desk instance), an optional TOML file,
//! then command-line overrides; hypotheses are checked before any work.

use anticyclo::arith::int::{factor, is_prime, is_squarefree};
use anticyclo::arith::quad::{QuadField, Splitting};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub dk: i64,
    pub p: u64,
    pub n_plus: u64,
    pub n_minus: u64,
    pub k: u32,
    pub n_max: u32,
    /// Eigenvalues `(q, a_q)` that cut out the form.
    pub eigen: Vec<(u64, i64)>,
    /// `ε_q` for `q | N⁺` (not computable from the definite side).
    pub signs: Vec<(u64, i32)>,
    pub branch: u64,
    pub tolerance: f64,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dk: 4,
            p: 3,
            n_plus: 1,
            n_minus: 11,
            k: 2,
            n_max: 3,
            eigen: vec![(2, -2)],
            signs: Vec::new(),
            branch: 0,
            tolerance: 1e-4,
            out_dir: PathBuf::from("artifacts"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

/// Flag overrides; `None` keeps the file or default value.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Overrides {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub dk: Option<i64>,
    #[arg(long)]
    pub p: Option<u64>,
    /// N⁺, the Eichler level.
    #[arg(long, alias = "level")]
    pub nplus: Option<u64>,
    #[arg(long)]
    pub nminus: Option<u64>,
    #[arg(long, alias = "k")]
    pub weight: Option<u32>,
    #[arg(long)]
    pub nmax: Option<u32>,
    /// Eigenvalues as `q:a_q,q:a_q`.
    #[arg(long)]
    pub eigen: Option<String>,
    /// Local signs at q | N⁺ as `q:±1,...`.
    #[arg(long)]
    pub signs: Option<String>,
    #[arg(long)]
    pub branch: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn parse_pairs<T: std::str::FromStr>(s: &str) -> Result<Vec<(u64, T)>, ConfigError> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| {
            let (a, b) = x.split_once(':').ok_or_else(|| ConfigError(format!("expected q:value, got {x:?}")))?;
            let q = a.trim().parse().map_err(|_| ConfigError(format!("bad prime {a:?}")))?;
            let v = b.trim().parse().map_err(|_| ConfigError(format!("bad value {b:?}")))?;
            Ok((q, v))
        })
        .collect()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }

    pub fn resolve(o: &Overrides) -> Result<Self, ConfigError> {
        let mut c = match &o.config {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        if let Some(v) = o.dk {
            c.dk = v;
        }
        if let Some(v) = o.p {
            c.p = v;
        }
        if let Some(v) = o.nplus {
            c.n_plus = v;
        }
        if let Some(v) = o.nminus {
            c.n_minus = v;
        }
        if let Some(v) = o.weight {
            c.k = v;
        }
        if let Some(v) = o.nmax {
            c.n_max = v;
        }
        if let Some(v) = &o.eigen {
            c.eigen = parse_pairs(v)?;
        }
        if let Some(v) = &o.signs {
            c.signs = parse_pairs(v)?;
        }
        if let Some(v) = o.branch {
            c.branch = v;
        }
        if let Some(v) = o.tol {
            c.tolerance = v;
        }
        if let Some(v) = &o.out_dir {
            c.out_dir = v.clone();
        }
        Ok(c)
    }

    pub fn field(&self) -> Result<QuadField, ConfigError> {
        QuadField::new(self.dk).map_err(|e| ConfigError(format!("D_K = {}: {e}", self.dk)))
    }

    /// Checks the standing hypotheses and returns them as report lines.
    pub fn validate(&self) -> Result<Vec<String>, ConfigError> {
        let err = |s: String| Err(ConfigError(s));
        let field = self.field()?;
        let mut h = Vec::new();
        if self.k < 2 || self.k % 2 == 1 {
            return err(format!("weight k = {} must be even and at least 2", self.k));
        }
        if !is_prime(self.p) {
            return err(format!("p = {} is not prime", self.p));
        }
        if self.p <= (self.k - 2) as u64 {
            return err(format!("p = {} must exceed k - 2 = {}", self.p, self.k - 2));
        }
        if self.p == 2 {
            return err("p = 2 is not supported".into());
        }
        h.push(format!("p = {} > k - 2 = {}", self.p, self.k - 2));
        if self.n_minus < 2 || !is_squarefree(self.n_minus) {
            return err(format!("N⁻ = {} must be squarefree and > 1", self.n_minus));
        }
        let fm = factor(self.n_minus);
        if fm.len() % 2 == 0 {
            return err(format!("N⁻ = {} must have an odd number of prime factors, found {}", self.n_minus, fm.len()));
        }
        for (q, _) in &fm {
            if field.splitting(*q) == Splitting::Split {
                return err(format!("q = {q} | N⁻ splits in K"));
            }
        }
        h.push(format!("N⁻ = {} squarefree, {} prime(s), none split in K", self.n_minus, fm.len()));
        if !is_squarefree(self.n_plus) {
            return err(format!("N⁺ = {} must be squarefree", self.n_plus));
        }
        for (q, _) in factor(self.n_plus) {
            if field.splitting(q) != Splitting::Split {
                return err(format!("q = {q} | N⁺ does not split in K"));
            }
            if !self.signs.iter().any(|(s, _)| *s == q) {
                return err(format!("missing local sign ε_{q} for q | N⁺ (use --signs {q}:±1)"));
            }
        }
        h.push(format!("N⁺ = {} squarefree, all primes split in K", self.n_plus));
        if num_integer::gcd(self.n_plus, self.n_minus) != 1 {
            return err("N⁺ and N⁻ must be coprime".into());
        }
        if (self.n_plus * self.n_minus) % self.p == 0 {
            return err(format!("p = {} divides N = {}", self.p, self.n_plus * self.n_minus));
        }
        h.push(format!("p ∤ N = {}", self.n_plus * self.n_minus));
        let ram: Vec<u64> = fm.iter().map(|x| x.0).filter(|q| field.dk as u64 % q == 0).collect();
        if ram.is_empty() {
            h.push("(ST): no prime divides both D_K and N⁻".into());
        } else {
            h.push(format!("(ST): primes {ram:?} divide D_K and N⁻; factor reported per branch"));
        }
        if self.n_max == 0 {
            return err("n_max must be at least 1".into());
        }
        Ok(h)
    }
}
