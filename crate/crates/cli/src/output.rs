use std::io::Write;

use serde_json::{json, Map, Value};

use crate::commands::Report;
use crate::{Format, RunConfig};

fn envelope(config: &RunConfig, r: &Report) -> Value {
    let cfg = json!({
        "seed": config.seed,
        "budget_retries": config.budget_retries,
        "oracle_cap": config.oracle_cap.to_string(),
    });
    let mut m = Map::new();
    if let Some(op) = r.command.strip_prefix("oracle ") {
        m.insert("operation".into(), json!(op));
        m.insert("input_digest".into(), json!(r.digest));
        m.insert("config".into(), cfg);
        m.insert("result".into(), r.result.clone());
        m.insert("witness".into(), r.witness.clone().unwrap_or(Value::Null));
    } else {
        m.insert("command".into(), json!(r.command));
        m.insert("input_digest".into(), json!(r.digest));
        m.insert("config".into(), cfg);
        let status = if r.met { "ok" } else { "guarantee-failure" };
        m.insert("status".into(), json!(status));
        m.insert("result".into(), r.result.clone());
    }
    Value::Object(m)
}

/// `path,value` rows for every leaf, paths joined with `.`.
fn flatten(prefix: &str, v: &Value, rows: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&p, x, rows);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            rows.push(format!("{prefix},{}", quote(&items.join(" "))));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, rows);
            }
        }
        _ => rows.push(format!("{prefix},{}", quote(&scalar(v)))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render(config: &RunConfig, r: &Report) -> String {
    if let Some(text) = &r.text {
        return text.clone();
    }
    match config.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&envelope(config, r)).expect("json");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::new();
            if let Some((header, rows)) = &r.table {
                s.push_str(header);
                s.push('\n');
                for row in rows {
                    s.push_str(row);
                    s.push('\n');
                }
                return s;
            }
            let mut rows = vec!["key,value".to_string()];
            flatten("", &envelope(config, r), &mut rows);
            for row in rows {
                s.push_str(&row);
                s.push('\n');
            }
            s
        }
    }
}

pub fn emit(config: &RunConfig, r: &Report) -> std::io::Result<()> {
    let out = render(config, r);
    match &config.out {
        Some(path) => std::fs::write(path, out),
        None => std::io::stdout().lock().write_all(out.as_bytes()),
    }
}
