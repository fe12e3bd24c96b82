//! Deterministic JSON reports: keys sorted, floats with 17 significant digits.

use std::fmt::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::atto::AttoSymbolParts;
use crate::error::{Error, Result};
use crate::kernels::{Decomposition, KernelBasis, MinimalKernel, TraceEntry};
use crate::oracle::Verification;
use crate::symbols::{BoundarySymbol, RationalFn, SymbolExpr};

/// Serializes `value` with sorted keys, two-space indentation and floats as
/// `{:.16e}`; integers stay integers.
pub fn to_canonical_string(value: &impl Serialize) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Schema(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => write!(out, "{i}").unwrap(),
            (_, Some(u), _) => write!(out, "{u}").unwrap(),
            (_, _, Some(f)) => write!(out, "{f:.16e}").unwrap(),
            _ => out.push_str("null"),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, item, depth);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&serde_json::to_string(k).expect("key"));
                out.push_str(": ");
                write_value(out, &map[*k], depth + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
    }
}

pub fn rational_json(r: &RationalFn) -> Value {
    serde_json::to_value(SymbolExpr::from_rational(r)).expect("symbol expressions serialize")
}

pub fn symbol_json(s: &BoundarySymbol) -> Value {
    serde_json::to_value(SymbolExpr::from_symbol(s)).expect("symbol expressions serialize")
}

fn trace_json(trace: &[TraceEntry]) -> Value {
    serde_json::to_value(trace).expect("trace serializes")
}

fn span_degree(k: &KernelBasis) -> Value {
    if k.span_dim == 0 {
        Value::Null
    } else {
        json!(k.span_dim - 1)
    }
}

/// `{"dim", "factor", "factor_token", "side", "span_degree", "trace", "verified"?}`
pub fn kernel_report(k: &KernelBasis, verified: Option<&Verification>) -> Value {
    let mut v = json!({
        "dim": k.span_dim,
        "factor": rational_json(&k.factor),
        "factor_token": BoundarySymbol::rational(k.factor.clone()).token(),
        "side": k.side,
        "span_degree": span_degree(k),
        "trace": trace_json(&k.trace),
    });
    if let Some(ver) = verified {
        v["verified"] = serde_json::to_value(ver).expect("verification serializes");
    }
    v
}

pub fn minimal_report(m: &MinimalKernel, verified: Option<&Verification>) -> Value {
    let mut v = json!({
        "symbol": symbol_json(&m.symbol),
        "symbol_token": m.symbol.token(),
        "trace": trace_json(&m.trace),
    });
    if let Some(k) = &m.basis {
        v["kernel"] = kernel_report(k, verified);
    }
    if let Some(f) = &m.maximal {
        v["maximal"] = rational_json(f);
    }
    v
}

/// Kernel report plus the counts of the symbol and, when checked, the
/// compression comparison against a second `alpha`.
pub fn atto_report(k: &KernelBasis, parts: &AttoSymbolParts, alpha_check: Option<Value>) -> Value {
    let mut v = kernel_report(k, None);
    v["counts"] = json!({
        "m": parts.m,
        "n_minus": parts.n_minus,
        "n_plus": parts.n_plus,
        "n_t": parts.n_t,
    });
    v["r1_minus"] = rational_json(&parts.r1_minus);
    v["r2_plus"] = rational_json(&parts.r2_plus);
    if let Some(check) = alpha_check {
        v["alpha_check"] = check;
    }
    v
}

pub fn decompose_report(d: &Decomposition) -> Value {
    let psis: Vec<Value> = d
        .psis
        .iter()
        .map(|p| {
            json!({
                "minus": p.minus.to_string(),
                "plus": p.plus.to_string(),
            })
        })
        .collect();
    json!({
        "dim": d.dim,
        "k": d.psis.len(),
        "psis": psis,
        "reduced": kernel_report(&d.reduced, None),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{FactoredPoly, Region};
    use crate::C64;

    #[test]
    fn keys_sorted_and_floats_fixed() {
        let v = json!({"b": 0.1, "a": [1, 0.25], "c": {"z": null, "y": "s"}});
        let s = to_canonical_string(&v).unwrap();
        let a = s.find("\"a\"").unwrap();
        let b = s.find("\"b\"").unwrap();
        assert!(a < b);
        assert!(s.contains("1.0000000000000001e-1"));
        assert!(s.contains("2.5000000000000000e-1"));
        assert!(s.contains("[1, 2.5000000000000000e-1]"));
        let y = s.find("\"y\"").unwrap();
        assert!(y < s.find("\"z\"").unwrap());
    }

    #[test]
    fn floats_round_trip_exactly() {
        let x = std::f64::consts::PI / 7.0;
        let s = to_canonical_string(&json!({ "x": x })).unwrap();
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64().unwrap(), x);
    }

    #[test]
    fn factor_json_parses_back() {
        let f = RationalFn::from_poly(FactoredPoly::new(
            C64::new(1.0, 0.0),
            vec![crate::symbols::Root::with_region(C64::new(-1.0, 0.0), 1, Region::T)],
        ));
        let expr: SymbolExpr = serde_json::from_value(rational_json(&f)).unwrap();
        assert_eq!(expr.to_rational().unwrap(), f);
    }
}
