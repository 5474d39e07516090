//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each export returns a JSON string. The `*_json` functions hold the logic
//! and are plain Rust so they can be tested natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use segcode::bounds::{lower_bound_ceil, rate_lower_bound, rate_upper_bound};
use segcode::channel::{apply, sample_pattern};
use segcode::{build_code, decode, set_sizes, ChannelKind, EditPattern};

/// Largest segment count accepted by the round trip.
const MAX_MESSAGE: usize = 64;

type Res<T> = std::result::Result<T, String>;

fn kind(text: &str) -> Res<ChannelKind> {
    text.parse().map_err(|e: segcode::Error| e.to_string())
}

pub fn sizes_json(kind_name: &str, q: u16, b_min: usize, b_max: usize) -> Res<String> {
    let kind = kind(kind_name)?;
    if b_min > b_max || b_max - b_min > 64 {
        return Err(format!("bad range {b_min}..={b_max}"));
    }
    let mut rows = Vec::new();
    for b in b_min..=b_max {
        let ms = set_sizes(kind, q, b).map_err(|e| e.to_string())?.ms;
        let lower = lower_bound_ceil(kind, q, b).map_err(|e| e.to_string())?;
        let rate_lower = rate_lower_bound(kind, q, b).map_err(|e| e.to_string())?;
        rows.push(json!({
            "b": b,
            "ms": ms,
            "lower": lower.to_string(),
            "rate_lower": rate_lower,
            "rate": (ms as f64).log2() / b as f64,
        }));
    }
    Ok(Value::Array(rows).to_string())
}

/// Encodes `message`, corrupts it with `pattern` (or a seeded random pattern
/// when `pattern` is blank) and decodes the result.
pub fn round_trip_json(
    kind_name: &str,
    q: u16,
    b: usize,
    message: &str,
    pattern: &str,
    p_edit: f64,
    seed: u64,
) -> Res<String> {
    let kind = kind(kind_name)?;
    let code = build_code(kind, q, b).map_err(|e| e.to_string())?;
    let m = message
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("bad index {t:?}")))
        .collect::<Res<Vec<_>>>()?;
    if m.is_empty() || m.len() > MAX_MESSAGE {
        return Err(format!("message needs 1..={MAX_MESSAGE} indices"));
    }
    let k = m.len();
    let x = code.encode(&m).map_err(|e| e.to_string())?;
    let pat = if pattern.trim().is_empty() {
        sample_pattern(kind, q, b, k, p_edit, seed)
    } else {
        EditPattern::parse(pattern, k).and_then(|p| p.validate(b, q).map(|_| p))
    }
    .map_err(|e| e.to_string())?;
    let y = apply(&x, &pat, b).map_err(|e| e.to_string())?;
    let decoded = decode(&code, &y, k).map_err(|e| e.to_string())?;
    let back = code.message_of(&decoded.x).map_err(|e| e.to_string())?;
    let trace: Vec<Value> = decoded
        .trace
        .segments
        .iter()
        .map(|s| {
            json!({
                "index": s.index,
                "start": s.start,
                "edit": s.edit.name(),
                "segment": s.segment.to_string(),
            })
        })
        .collect();
    Ok(json!({
        "ms": code.ms(),
        "x": x.to_string(),
        "pattern": pat.to_string(),
        "y": y.to_string(),
        "x_hat": decoded.x.to_string(),
        "message": back,
        "ok": back == m,
        "trace": trace,
    })
    .to_string())
}

/// Converse rate bound at the default parameters for each `b` in the range.
pub fn bounds_json(q: u16, b_min: usize, b_max: usize, k: usize) -> Res<String> {
    if b_min < 2 || b_min > b_max || b_max > 4096 {
        return Err(format!("bad range {b_min}..={b_max}"));
    }
    let mut rows = Vec::new();
    let mut b = b_min;
    while b <= b_max {
        let rep = rate_upper_bound(q, b, k, None, None).map_err(|e| e.to_string())?;
        let lg = f64::from(q).log2();
        rows.push(json!({
            "b": b,
            "valid": rep.valid,
            "rate_upper": rep.rate_upper,
            "vacuous": rep.rate_upper.is_some_and(|r| r >= lg),
            "reference": lg - (b as f64).log2() / b as f64,
            "capacity": lg,
        }));
        b = if b < 64 { b + 1 } else { b + b / 16 };
    }
    Ok(Value::Array(rows).to_string())
}

fn js(r: Res<String>) -> std::result::Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sizes(kind: &str, q: u16, b_min: usize, b_max: usize) -> std::result::Result<String, JsValue> {
    js(sizes_json(kind, q, b_min, b_max))
}

#[wasm_bindgen]
pub fn round_trip(
    kind: &str,
    q: u16,
    b: usize,
    message: &str,
    pattern: &str,
    p_edit: f64,
    seed: u32,
) -> std::result::Result<String, JsValue> {
    js(round_trip_json(
        kind,
        q,
        b,
        message,
        pattern,
        p_edit,
        u64::from(seed),
    ))
}

#[wasm_bindgen]
pub fn bounds(q: u16, b_min: usize, b_max: usize, k: usize) -> std::result::Result<String, JsValue> {
    js(bounds_json(q, b_min, b_max, k))
}
