//! JSON payloads and the hash-stamped artifact envelope.

use anticyclo::arith::ext::KpElem;
use anticyclo::cm_tower::RingClassGroup;
use anticyclo::forms_hecke::{AutoForm, HeckeElem, HeckeOperator};
use anticyclo::ideal_classes::{elems, mass_formula, IdealClassSet};
use anticyclo::arith::quad::QuadElem;
use anticyclo::quaternion::QuatElem;
use anticyclo::theta_padicL::ThetaElement;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::Path;

pub fn sha256_hex(s: &str) -> String {
    Sha256::digest(s.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn fmt_kp(x: &KpElem) -> String {
    let p = x.p();
    let m = x.prec();
    format!("{} + {}ϑ + O({p}^{m})", x.u.signed_residue(), x.v.signed_residue())
}

pub fn fmt_hecke(x: &HeckeElem) -> String {
    format!("{} + ({})·A", x.c0, x.c1)
}

fn fmt_quat(x: &QuatElem) -> String {
    format!("[{}, {}]", x.a, x.b)
}

pub fn classes_payload(cs: &IdealClassSet) -> Value {
    let b = cs.alg();
    let classes: Vec<Value> = cs
        .classes
        .iter()
        .map(|c| {
            json!({
                "norm": c.norm.to_string(),
                "gamma_order": c.gamma_order(),
                "basis": elems(b, &c.lat).iter().map(fmt_quat).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "d_k": b.field.dk,
        "beta": b.beta,
        "n_minus": b.n_minus,
        "level": cs.order.level,
        "class_number": cs.len(),
        "mass": cs.mass().to_string(),
        "mass_formula": mass_formula(b.n_minus, cs.order.level).to_string(),
        "classes": classes,
    })
}

pub fn brandt_payload(op: &HeckeOperator) -> Value {
    json!({
        "label": op.label,
        "q": op.q,
        "weight": op.k,
        "dim": op.matrix.len(),
        "matrix": op.matrix.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn form_payload(f: &AutoForm<QuadElem>, eigen: &[(u64, i64)], a_p: &str) -> Value {
    json!({
        "weight": f.k,
        "eigen": eigen,
        "a_p": a_p,
        "values": f.values.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn group_payload(g: &RingClassGroup, lower: Option<&RingClassGroup>) -> Value {
    let d1 = if g.delta_order() > 1 { g.delta[1] } else { g.identity() };
    let g1 = if g.gamma_order() > 1 { g.gamma[1] } else { g.identity() };
    let img = |x: usize| lower.map(|l| l.coords[g.project(x, l)]);
    json!({
        "level": g.n,
        "order": g.order(),
        "structure": g.structure(),
        "delta_generator": g.rep(d1).to_string(),
        "gamma_generator": g.rep(g1).to_string(),
        "generator_images": [img(d1), img(g1)],
    })
}

pub fn theta_payload<T: anticyclo::arith::Scalar>(
    th: &ThetaElement<T>,
    g: &RingClassGroup,
    precision: i64,
    fmt: impl Fn(&T) -> String,
) -> Value {
    let coeffs: Vec<Value> =
        th.coeffs.iter().enumerate().map(|(i, c)| json!({ "elt": [g.coords[i].0, g.coords[i].1], "value": fmt(c) })).collect();
    json!({
        "level": th.n,
        "p": g.p,
        "precision_M": precision,
        "group": g.structure(),
        "weight_index": th.m,
        "coeffs": coeffs,
    })
}

pub enum Cached {
    Missing,
    Valid(Value),
    /// Written for a different configuration.
    Stale,
    /// Content hash does not match.
    Corrupt,
}

/// Envelope: `{kind, config_hash, content_hash, payload}`.
pub fn write(path: &Path, kind: &str, config_hash: &str, payload: &Value) -> anyhow::Result<()> {
    if let Some(d) = path.parent() {
        std::fs::create_dir_all(d)?;
    }
    let body = serde_json::to_string(payload)?;
    let env = json!({
        "kind": kind,
        "config_hash": config_hash,
        "content_hash": sha256_hex(&body),
        "payload": payload,
    });
    let mut text = serde_json::to_string_pretty(&env)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read(path: &Path, kind: &str, config_hash: &str) -> Cached {
    let Ok(text) = std::fs::read_to_string(path) else {
        return Cached::Missing;
    };
    let Ok(env) = serde_json::from_str::<Value>(&text) else {
        return Cached::Corrupt;
    };
    let payload = env.get("payload").cloned().unwrap_or(Value::Null);
    let body = serde_json::to_string(&payload).unwrap_or_default();
    if env.get("content_hash").and_then(|v| v.as_str()) != Some(sha256_hex(&body).as_str()) {
        return Cached::Corrupt;
    }
    if env.get("kind").and_then(|v| v.as_str()) != Some(kind)
        || env.get("config_hash").and_then(|v| v.as_str()) != Some(config_hash)
    {
        return Cached::Stale;
    }
    Cached::Valid(payload)
}
