//! JSON bodies for library results, and the plain-text table view.

use serde_json::{json, Map, Value};

use detrep::decide::{Census, CorollaryCase};
use detrep::resolution::BettiData;
use detrep::series::{Bound, HfConstraint, SeriesAnswer};
use detrep::{Decision, Reason};

pub fn decision(d: &Decision) -> Value {
    let mut out = Map::new();
    out.insert("answer".into(), json!(d.verdict.as_str()));
    out.insert("reason".into(), json!(d.reason.code()));
    match d.reason {
        Reason::DiagonalNegative { k } => {
            out.insert("k".into(), json!(k));
        }
        Reason::SubdiagonalBlockDegree { k, block_degree } => {
            out.insert("k".into(), json!(k));
            out.insert("blockDegree".into(), json!(block_degree));
        }
        Reason::Ok | Reason::DegreeZeroTrivial => {}
    }
    out.insert("degree".into(), json!(d.degree));
    out.insert("normalized".into(), json!(d.normalized.to_rows()));
    if let Some(r) = d.inserted_row {
        out.insert("insertedRow".into(), json!(r));
    }
    let trailing: Vec<Value> = d
        .trailing_degrees
        .iter()
        .map(|&(k, e)| json!({"k": k, "blockDegree": e}))
        .collect();
    out.insert("trailingDegrees".into(), Value::Array(trailing));
    Value::Object(out)
}

pub fn corollary(d: &Decision, case: CorollaryCase) -> Value {
    let mut out = decision(d);
    let obj = out.as_object_mut().expect("decision is an object");
    obj.insert("case".into(), json!(case.tag()));
    if let CorollaryCase::Between { i } = case {
        obj.insert("i".into(), json!(i));
    }
    out
}

pub fn scan(rows: &[(i64, Decision)]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|(d, dec)| {
            let mut v = decision(dec);
            let obj = v.as_object_mut().expect("decision is an object");
            obj.remove("normalized");
            obj.remove("degree");
            obj.remove("trailingDegrees");
            let mut row = Map::new();
            row.insert("d".into(), json!(d));
            row.extend(std::mem::take(obj));
            Value::Object(row)
        })
        .collect();
    json!({ "scan": rows })
}

pub fn betti(b: &BettiData) -> Value {
    json!({"gens": b.gens(), "syz": b.syz()})
}

pub fn census(c: &Census) -> Value {
    json!({"total": c.total, "yes": c.yes, "no": c.no, "byReason": c.by_reason})
}

fn constraint(c: &HfConstraint) -> Value {
    match c.bound {
        Bound::Equal(x) => json!({"t": c.level, "hfEquals": x}),
        Bound::AtMost(x) => json!({"t": c.level, "hfAtMost": x}),
    }
}

pub fn series(ans: &SeriesAnswer) -> Value {
    let rows: Vec<Value> = ans
        .rows
        .iter()
        .map(|r| {
            json!({
                "hvector": r.hvector.values(),
                "hf": r.hvector.hilbert_function(),
                "gens": r.betti.gens(),
                "syz": r.betti.syz(),
                "answer": r.decision.verdict.as_str(),
                "reason": r.decision.reason.code(),
                "existsOnGeneralCurve": r.exists_on_general_curve(),
                "properties": r.properties,
            })
        })
        .collect();
    let mut out = json!({
        "genus": ans.genus,
        "feasible": ans.constraints.is_some(),
        "rows": rows,
    });
    if let Some(c) = &ans.constraints {
        out["constraints"] = json!({
            "complete": constraint(&c.complete),
            "properties": c.properties.iter().map(constraint).collect::<Vec<_>>(),
        });
    }
    out
}

/// Human-readable rendering of any output body.
pub fn table(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn is_grid(v: &Value) -> bool {
    matches!(v, Value::Array(rows) if !rows.is_empty()
        && rows.iter().all(|r| matches!(r, Value::Array(xs) if xs.iter().all(Value::is_number))))
}

fn is_records(v: &Value) -> bool {
    matches!(v, Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_object))
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if is_grid(x) || is_records(x) || x.is_object() {
                    out.push_str(&format!("{pad}{k}:\n"));
                    write_value(out, x, indent + 2);
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(x)));
                }
            }
        }
        Value::Array(rows) if is_grid(v) => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.as_array().into_iter().flatten().map(scalar).collect())
                .collect();
            let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
            for row in cells {
                let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                out.push_str(&format!("{pad}{}\n", line.join(" ")));
            }
        }
        Value::Array(rows) if is_records(v) => {
            let mut keys: Vec<&String> = Vec::new();
            for r in rows {
                for k in r.as_object().expect("records are objects").keys() {
                    if !keys.contains(&k) {
                        keys.push(k);
                    }
                }
            }
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    keys.iter()
                        .map(|k| r.get(k.as_str()).map_or("-".into(), scalar))
                        .collect()
                })
                .collect();
            let widths: Vec<usize> = keys
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    cells
                        .iter()
                        .map(|r| r[i].len())
                        .chain([k.len()])
                        .max()
                        .unwrap_or(1)
                })
                .collect();
            let fmt = |row: Vec<String>| -> String {
                let parts: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect();
                format!("{pad}{}\n", parts.join("  ").trim_end())
            };
            out.push_str(&fmt(keys.iter().map(|k| k.to_string()).collect()));
            for row in cells {
                out.push_str(&fmt(row));
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}
