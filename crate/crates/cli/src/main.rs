mod artifacts;
mod config;
mod problem;
mod suites;

use anticyclo::analytic_oracle::{eta_level11, rankin_lseries, IdealCharacter, NewformData, OracleError};
use anticyclo::cm_tower::{ring_class_group, TowerCharacter};
use anticyclo::forms_hecke::{brandt_matrix, half};
use anticyclo::theta_padicL::{theta_element, theta_exact, ThetaError};
use artifacts::{fmt_hecke, fmt_kp, Cached};
use clap::{Parser, Subcommand};
use config::{ConfigError, Overrides, RunConfig};
use problem::Problem;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "anticyclo", version, about = "Anticyclotomic theta elements on definite quaternion algebras")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Right ideal classes of the Eichler order.
    Classset {
        #[command(flatten)]
        o: Overrides,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brandt matrix of T_q (U_q for q | N⁻).
    Brandt {
        #[command(flatten)]
        o: Overrides,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The eigenform cut out by `eigen`.
    Eigenform {
        #[command(flatten)]
        o: Overrides,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ring class groups G_0, ..., G_n.
    Tower {
        #[command(flatten)]
        o: Overrides,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The theta element Θ_n^[m].
    Theta {
        #[command(flatten)]
        o: Overrides,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// χ(Θ_n^[m]) for χ = (branch, wild).
    Evaluate {
        #[command(flatten)]
        o: Overrides,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 0)]
        wild: u64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Central value L(f/K, χ, 1/2) from the analytic oracle (level 11 only).
    Lvalue {
        #[command(flatten)]
        o: Overrides,
        #[arg(long)]
        n: u32,
        /// branch·#Γ_n⁻ + wild.
        #[arg(long, default_value_t = 0)]
        char_index: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        #[command(flatten)]
        o: Overrides,
        /// mass, hecke, tower, congruence, fe, mu, interp or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All artifacts into `out_dir`, reusing valid cached files.
    Pipeline {
        #[command(flatten)]
        o: Overrides,
    },
}

fn emit(v: &Value, out: Option<&Path>) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    match out {
        Some(p) => {
            if let Some(d) = p.parent() {
                std::fs::create_dir_all(d)?;
            }
            std::fs::write(p, text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn level(n: Option<u32>, c: &RunConfig) -> u32 {
    n.unwrap_or(c.n_max)
}

fn weight_index(m: i64, k: u32) -> anyhow::Result<i64> {
    let r = half(k);
    if m.abs() > r {
        return Err(ConfigError(format!("weight index {m} outside [-{r}, {r}]")).into());
    }
    Ok(m)
}

fn cmd_lvalue(o: &Overrides, n: u32, char_index: u64, out: Option<&Path>) -> anyhow::Result<u8> {
    let c = RunConfig::resolve(o)?;
    c.validate()?;
    if c.n_plus * c.n_minus != 11 || c.k != 2 {
        return Err(ConfigError("the L-value oracle covers the level-11 weight-2 form only".into()).into());
    }
    let field = c.field()?;
    let g = ring_class_group(&field, c.p, n)?;
    let gam = g.gamma_order() as u64;
    if char_index >= g.order() as u64 {
        return Err(ConfigError(format!("char-index {char_index} ≥ #G_{n} = {}", g.order())).into());
    }
    let chi = TowerCharacter { branch: char_index / gam, wild: char_index % gam, m: 0 };
    let ic = IdealCharacter { field, group: &g, chi, embedding: 1 };
    let mut f: NewformData = eta_level11(60_000);
    let v = loop {
        match rankin_lseries(&f, &ic, f.len()).and_then(|l| l.value(0.5)) {
            Err(OracleError::TooFewCoefficients { need, .. }) => f = eta_level11(need + 1),
            r => break r?,
        }
    };
    let mut rep = serde_json::to_value(&v)?;
    rep["branch"] = json!(chi.branch);
    rep["wild"] = json!(chi.wild);
    rep["conductor_exp"] = json!(chi.conductor_exp(&g));
    emit(&rep, out)?;
    Ok(if v.error_estimate > c.tolerance { 3 } else { 0 })
}

fn cmd_verify(o: &Overrides, suite: &str, out: Option<&Path>) -> anyhow::Result<u8> {
    let c = RunConfig::resolve(o)?;
    let names: Vec<&str> = if suite == "all" { suites::ALL.to_vec() } else { suite.split(',').collect() };
    for s in &names {
        if !suites::ALL.contains(s) {
            return Err(ConfigError(format!("unknown suite {s:?}")).into());
        }
    }
    let pb = Problem::build(&c)?;
    let mut results = Vec::new();
    for s in names {
        let r = suites::run(&pb, s)?;
        eprintln!("{:<10} {}  {}", r.suite, if r.pass { "pass" } else { "FAIL" }, r.detail);
        results.push(r);
    }
    let pass = results.iter().all(|r| r.pass);
    let rep = json!({
        "config": c,
        "hypotheses": pb.hypotheses,
        "a_p": pb.a_p.to_string(),
        "epsilon_prime": pb.epsilon_prime()?,
        "suites": results,
        "pass": pass,
    });
    emit(&rep, out)?;
    if let Some(r) = results.iter().find(|r| !r.pass) {
        eprintln!("first counterexample ({}): {}", r.suite, r.counterexample.as_deref().unwrap_or(&r.detail));
    }
    Ok(if pass { 0 } else { 1 })
}

/// Writes or reuses one artifact and records its content hash.
fn stage(
    dir: &Path,
    name: &str,
    key: &str,
    hashes: &mut Vec<(String, String)>,
    build: impl FnOnce() -> anyhow::Result<Value>,
) -> anyhow::Result<()> {
    let path = dir.join(name);
    let payload = match artifacts::read(&path, name, key) {
        Cached::Valid(v) => v,
        state => {
            if matches!(state, Cached::Corrupt) {
                eprintln!("cache inconsistency: {} hash mismatch, rebuilding", path.display());
            }
            let v = build()?;
            artifacts::write(&path, name, key, &v)?;
            v
        }
    };
    hashes.push((name.to_string(), artifacts::sha256_hex(&serde_json::to_string(&payload)?)));
    Ok(())
}

fn cmd_pipeline(o: &Overrides) -> anyhow::Result<u8> {
    let c = RunConfig::resolve(o)?;
    let pb = Problem::build(&c)?;
    let s = &pb.setup;
    let dir = c.out_dir.clone();
    // fields that change no per-level artifact
    let base = RunConfig { n_max: 0, out_dir: PathBuf::new(), branch: 0, tolerance: 0.0, ..c.clone() };
    let key = artifacts::sha256_hex(&serde_json::to_string(&base)?);
    let mut hashes = Vec::new();
    stage(&dir, "classes.json", &key, &mut hashes, || Ok(artifacts::classes_payload(&s.cs)))?;
    for q in suites::small_primes(&pb) {
        let name = format!("brandt/{}_{q}.json", if c.n_minus % q == 0 { "U" } else { "T" });
        stage(&dir, &name, &key, &mut hashes, || {
            Ok(artifacts::brandt_payload(&brandt_matrix(&s.cs, q, c.k)?))
        })?;
    }
    stage(&dir, "eigenform.json", &key, &mut hashes, || Ok(artifacts::form_payload(&s.form, &c.eigen, &pb.a_p.to_string())))?;
    let tower_key = artifacts::sha256_hex(&format!("{key}:{}", c.n_max));
    stage(&dir, "tower.json", &tower_key, &mut hashes, || {
        let mut levels = Vec::new();
        let mut prev = None;
        for n in 0..=c.n_max {
            let g = s.group(n)?;
            levels.push(artifacts::group_payload(&g, prev.as_ref()));
            prev = Some(g);
        }
        Ok(json!({ "d_k": c.dk, "p": c.p, "levels": levels }))
    })?;
    let r = half(c.k);
    for n in 1..=c.n_max {
        for m in -r..=r {
            stage(&dir, &format!("theta_n{n}_m{m}.json"), &key, &mut hashes, || {
                let g = s.group(n)?;
                let th = theta_element(s, n, m)?;
                Ok(artifacts::theta_payload(&th, &g, s.precision(n), fmt_kp))
            })?;
        }
    }
    let mut config = serde_json::to_value(&c)?;
    config.as_object_mut().unwrap().remove("out_dir");
    let report = json!({
        "config": config,
        "hypotheses": pb.hypotheses,
        "a_p": pb.a_p.to_string(),
        "epsilon_prime": pb.epsilon_prime()?,
        "artifacts": hashes.iter().map(|(n, h)| json!({ "file": n, "content_hash": h })).collect::<Vec<_>>(),
    });
    emit(&report, Some(&dir.join("report.json")))?;
    println!("{}", dir.join("report.json").display());
    Ok(0)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.cmd {
        Cmd::Classset { o, out } => {
            let c = RunConfig::resolve(&o)?;
            c.validate()?;
            emit(&artifacts::classes_payload(&problem::class_set(&c)?), out.as_deref())?;
        }
        Cmd::Brandt { o, q, out } => {
            let c = RunConfig::resolve(&o)?;
            c.validate()?;
            let cs = problem::class_set(&c)?;
            let op = brandt_matrix(&cs, q, c.k).map_err(|e| ConfigError(e.to_string()))?;
            emit(&artifacts::brandt_payload(&op), out.as_deref())?;
        }
        Cmd::Eigenform { o, out } => {
            let pb = Problem::build(&RunConfig::resolve(&o)?)?;
            let mut v = artifacts::form_payload(&pb.setup.form, &pb.config.eigen, &pb.a_p.to_string());
            v["hypotheses"] = json!(pb.hypotheses);
            emit(&v, out.as_deref())?;
        }
        Cmd::Tower { o, n, out } => {
            let c = RunConfig::resolve(&o)?;
            let field = c.field()?;
            if !anticyclo::arith::int::is_prime(c.p) || c.p == 2 {
                return Err(ConfigError(format!("p = {} must be an odd prime", c.p)).into());
            }
            let mut levels = Vec::new();
            let mut prev = None;
            for i in 0..=level(n, &c) {
                let g = ring_class_group(&field, c.p, i)?;
                levels.push(artifacts::group_payload(&g, prev.as_ref()));
                prev = Some(g);
            }
            emit(&json!({ "d_k": c.dk, "p": c.p, "levels": levels }), out.as_deref())?;
        }
        Cmd::Theta { o, n, m, out } => {
            let pb = Problem::build(&RunConfig::resolve(&o)?)?;
            let s = &pb.setup;
            let n = level(n, &pb.config);
            let m = weight_index(m, s.k)?;
            let g = s.group(n)?;
            let th = theta_element(s, n, m)?;
            emit(&artifacts::theta_payload(&th, &g, s.precision(n), fmt_kp), out.as_deref())?;
        }
        Cmd::Evaluate { o, n, wild, m, out } => {
            let pb = Problem::build(&RunConfig::resolve(&o)?)?;
            let s = &pb.setup;
            let n = level(n, &pb.config);
            let m = weight_index(m, s.k)?;
            let g = s.group(n)?;
            let chi = TowerCharacter { branch: pb.config.branch, wild, m };
            if chi.branch >= g.delta_order() as u64 || wild >= g.gamma_order() as u64 {
                return Err(ConfigError(format!("character ({}, {wild}) outside Δ × Γ_{n}⁻ = {:?}", chi.branch, g.structure())).into());
            }
            let v = theta_element(s, n, m)?.evaluate(&g, &chi)?;
            let mut rep = json!({
                "level": n,
                "branch": chi.branch,
                "wild": wild,
                "weight_index": m,
                "conductor_exp": chi.conductor_exp(&g),
                "root_of_unity_order": v.conductor(),
                "value": v.coeffs().iter().map(fmt_kp).collect::<Vec<_>>(),
            });
            if m == 0 {
                if let Ok(th) = theta_exact(s, n) {
                    rep["exact"] = json!(th.evaluate(&g, &chi)?.coeffs().iter().map(fmt_hecke).collect::<Vec<_>>());
                }
            }
            emit(&rep, out.as_deref())?;
        }
        Cmd::Lvalue { o, n, char_index, out } => return cmd_lvalue(&o, n, char_index, out.as_deref()),
        Cmd::Verify { o, suite, out } => return cmd_verify(&o, &suite, out.as_deref()),
        Cmd::Pipeline { o } => return cmd_pipeline(&o),
    }
    Ok(0)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<ThetaError>() {
        Some(ThetaError::Precision(_)) => 3,
        Some(ThetaError::NotOrdinary(_) | ThetaError::SmallPrime { .. } | ThetaError::BadWeight { .. }) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
