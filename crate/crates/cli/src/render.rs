//! Plain-text rendering of the JSON documents.

use std::fmt::Write;

use serde_json::Value;

pub fn table(doc: &Value) -> String {
    let mut out = String::new();
    let result = &doc["result"];
    if let Some(criteria) = result.get("criteria").and_then(Value::as_array) {
        for c in criteria {
            let _ = writeln!(
                out,
                "{} {:>2}  {:<26} {}",
                if c["pass"].as_bool() == Some(true) { "PASS" } else { "FAIL" },
                c["id"],
                c["name"].as_str().unwrap_or(""),
                c["detail"].as_str().unwrap_or("")
            );
        }
    } else if let (Some(even), Some(odd)) = (result.get("even"), result.get("odd")) {
        pairing_grid(&mut out, "even", even);
        out.push('\n');
        pairing_grid(&mut out, "odd", odd);
    } else {
        flatten(&mut out, "", result);
    }
    let _ = writeln!(out, "pass: {}", doc["pass"]);
    out
}

fn pairing_grid(out: &mut String, title: &str, t: &Value) {
    let names = |v: &Value| -> Vec<String> {
        v.as_array()
            .map(|a| a.iter().map(|x| x.as_str().unwrap_or("").to_string()).collect())
            .unwrap_or_default()
    };
    let (rows, cols) = (names(&t["rows"]), names(&t["cols"]));
    let _ = write!(out, "{title:<8}");
    for c in &cols {
        let _ = write!(out, "{c:>14}");
    }
    out.push('\n');
    for (i, r) in rows.iter().enumerate() {
        let _ = write!(out, "{r:<8}");
        for j in 0..cols.len() {
            let v = &t["entries"][i][j];
            let src = match t["sources"][i][j].as_str() {
                Some("duality") => "d",
                _ => "n",
            };
            let _ = write!(out, "{:>14}", format!("{v} ({src})"));
        }
        out.push('\n');
    }
    let _ = writeln!(out, "(n) recomputed numerically, (d) derived through duality");
}

fn flatten(out: &mut String, prefix: &str, v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(out, &key, x);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(out, &format!("{prefix}[{i}]"), x);
            }
        }
        _ => {
            let _ = writeln!(out, "{prefix:<40} {v}");
        }
    }
}
