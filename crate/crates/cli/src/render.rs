//! Aligned text rendering of JSON values for `--pretty`.

use serde_json::Value;

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            a.iter().map(scalar).collect::<Vec<_>>().join(", ")
        }
        other => other.to_string(),
    }
}

fn table(rows: &[Value], out: &mut String) {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        if let Value::Object(m) = r {
            for k in m.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
    }
    let cells: Vec<Vec<String>> =
        rows.iter().map(|r| cols.iter().map(|c| r.get(c).map_or_else(String::new, scalar)).collect()).collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|row| row[i].len()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    let line = |vals: &[String]| {
        let parts: Vec<String> = vals.iter().zip(&widths).map(|(v, w)| format!("{v:>w$}")).collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    out.push_str(&line(&cols));
    for row in &cells {
        out.push_str(&line(row));
    }
}

fn section(title: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            let simple: Vec<(&String, &Value)> = m.iter().filter(|(_, x)| !is_nested(x)).collect();
            let width = simple.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            if !title.is_empty() {
                out.push_str(&format!("[{title}]\n"));
            }
            for (k, x) in simple {
                out.push_str(&format!("{k:<width$}  {}\n", scalar(x)));
            }
            for (k, x) in m.iter().filter(|(_, x)| is_nested(x)) {
                out.push('\n');
                let t = if title.is_empty() { k.clone() } else { format!("{title}.{k}") };
                section(&t, x, out);
            }
        }
        Value::Array(rows) => {
            if !title.is_empty() {
                out.push_str(&format!("[{title}]\n"));
            }
            table(rows, out);
        }
        other => {
            out.push_str(&format!("{title}  {}\n", scalar(other)));
        }
    }
}

fn is_nested(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(a) => a.iter().any(|x| x.is_object()),
        _ => false,
    }
}

pub fn pretty(v: &Value) -> String {
    let mut out = String::new();
    section("", v, &mut out);
    out
}
