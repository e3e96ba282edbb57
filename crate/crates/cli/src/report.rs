//! Reports are JSON trees; the human format is rendered from the same tree.

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub tree: Value,
}

impl Report {
    pub fn new(tree: Value) -> Self {
        Report { tree }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Machine => {
                let mut s = serde_json::to_string_pretty(&self.tree).expect("serializable");
                s.push('\n');
                s
            }
            Format::Human => {
                let mut out = String::new();
                render_value(&self.tree, 0, &mut out);
                out
            }
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Scalars and flat arrays of scalars, which fit in a table cell.
fn cell(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    let arr = v.as_array()?;
    let parts = arr.iter().map(scalar).collect::<Option<Vec<_>>>()?;
    Some(format!("({})", parts.join(",")))
}

fn is_table(arr: &[Value]) -> bool {
    !arr.is_empty()
        && arr.iter().all(|row| {
            row.as_object()
                .is_some_and(|o| o.values().all(|v| cell(v).is_some()))
        })
}

fn is_matrix(arr: &[Value]) -> bool {
    !arr.is_empty()
        && arr.iter().all(|row| {
            row.as_array()
                .is_some_and(|r| r.iter().all(|v| scalar(v).is_some()))
        })
}

fn pad(out: &mut String, indent: usize) {
    out.extend(std::iter::repeat_n(' ', indent));
}

fn render_table(rows: &[Value], indent: usize, out: &mut String) {
    let mut columns: Vec<String> = Vec::new();
    for row in rows {
        for k in row.as_object().unwrap().keys() {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            let o = row.as_object().unwrap();
            columns
                .iter()
                .map(|c| o.get(c).and_then(cell).unwrap_or_default())
                .collect()
        })
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(j, c)| {
            cells
                .iter()
                .map(|r| r[j].chars().count())
                .chain([c.chars().count()])
                .max()
                .unwrap()
        })
        .collect();
    let line = |out: &mut String, items: &[String]| {
        pad(out, indent);
        let row: Vec<String> = items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
            .collect();
        out.push_str(row.join("  ").trim_end());
        out.push('\n');
    };
    line(out, &columns);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(out, &rule);
    for r in &cells {
        line(out, r);
    }
}

fn render_matrix(rows: &[Value], indent: usize, out: &mut String) {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|v| scalar(v).unwrap())
                .collect()
        })
        .collect();
    let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    for r in cells {
        pad(out, indent);
        let row: Vec<String> = r.iter().map(|s| format!("{s:>width$}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

fn render_object(obj: &Map<String, Value>, indent: usize, out: &mut String) {
    for (k, v) in obj {
        if let Some(s) = cell(v) {
            pad(out, indent);
            out.push_str(&format!("{k}: {s}\n"));
            continue;
        }
        pad(out, indent);
        out.push_str(&format!("{k}:\n"));
        render_value(v, indent + 2, out);
    }
}

fn render_value(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Object(o) => render_object(o, indent, out),
        Value::Array(arr) if is_matrix(arr) => render_matrix(arr, indent, out),
        Value::Array(arr) if is_table(arr) => render_table(arr, indent, out),
        Value::Array(arr) => {
            for (i, item) in arr.iter().enumerate() {
                if i > 0 && !item.is_string() {
                    out.push('\n');
                }
                match cell(item) {
                    Some(s) => {
                        pad(out, indent);
                        out.push_str(&format!("- {s}\n"));
                    }
                    None => render_value(item, indent, out),
                }
            }
        }
        other => {
            pad(out, indent);
            out.push_str(&scalar(other).unwrap_or_default());
            out.push('\n');
        }
    }
}
