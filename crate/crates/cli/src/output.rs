use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::Value;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "STARSDYM_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// `%.17g`: 17 significant digits, trailing zeros trimmed.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let mantissa = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// JSON with sorted keys, two-space indentation and `%.17g` floats.
pub fn render_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(value: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => out.push_str(&i.to_string()),
            (_, Some(u), _) => out.push_str(&u.to_string()),
            (_, _, Some(x)) if x.is_finite() => out.push_str(&format_float(x)),
            _ => out.push_str("null"),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialise")),
        Value::Array(items) if items.iter().all(|v| !v.is_array() && !v.is_object()) => {
            out.push('[');
            for (k, v) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_value(v, indent, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, v) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(v, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}]", pad(indent));
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (k, key) in keys.iter().enumerate() {
                let _ = write!(
                    out,
                    "{}{}: ",
                    pad(indent + 1),
                    serde_json::to_string(key).expect("keys serialise")
                );
                write_value(&map[key.as_str()], indent + 1, out);
                out.push_str(if k + 1 < keys.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}}}", pad(indent));
        }
    }
}

/// What a subcommand produced.
#[derive(Clone, Debug)]
pub struct Output {
    pub table: Option<Table>,
    pub json: Value,
    pub default_format: Format,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match (format, &self.table) {
            (Format::Csv, Some(table)) => table.render(),
            (Format::Csv, None) => summary_table(&self.json).render(),
            (Format::Json, _) => render_json(&self.json),
        }
    }
}

/// One-row CSV of a flat JSON object, columns in key order.
fn summary_table(value: &Value) -> Table {
    let Some(map) = value.as_object() else {
        let mut t = Table::new(["value"]);
        t.push(vec![Cell::Text(render_json(value).trim_end().to_string())]);
        return t;
    };
    let mut keys: Vec<&String> = map.keys().collect();
    keys.sort();
    let mut t = Table::new(keys.iter().map(|k| k.as_str()));
    let row = keys
        .iter()
        .map(|k| match &map[k.as_str()] {
            Value::Null => Cell::Empty,
            Value::Number(n) if n.is_f64() => Cell::Float(n.as_f64().unwrap_or(f64::NAN)),
            Value::Number(n) => Cell::Text(n.to_string()),
            Value::String(s) => Cell::Text(s.clone()),
            other => Cell::Text(other.to_string()),
        })
        .collect();
    t.push(row);
    t
}

/// Writes `text` to `out`, to `$STARSDYM_OUT_DIR/<name>.<ext>`, or to stdout.
pub fn emit(text: &str, out: Option<&Path>, name: &str, format: Format) -> Result<Option<PathBuf>> {
    let path = match out {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(OUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(format!("{name}.{}", format.extension()))),
    };
    match path {
        Some(p) => {
            fs::write(&p, text).with_context(|| format!("cannot write {}", p.display()))?;
            Ok(Some(p))
        }
        None => {
            print!("{text}");
            Ok(None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_float(0.1), "0.10000000000000001");
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(1e-3), "0.001");
        assert_eq!(format_float(-2.0), "-2");
        assert_eq!(format_float(1e-5), "1.0000000000000001e-05");
        assert_eq!(format_float(1.5e20), "1.5e+20");
        assert_eq!(format_float(123456.0), "123456");
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e-9, std::f64::consts::PI * 1e13] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_uses_lf_and_header() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec![Cell::Int(1), Cell::Float(0.25)]);
        t.push(vec![Cell::Empty, Cell::Text("x".into())]);
        assert_eq!(t.render(), "a,b\n1,0.25\n,x\n");
    }

    #[test]
    fn json_keys_are_sorted() {
        let v = json!({"b": 0.1, "a": [1, 2], "c": {"z": null, "y": true}});
        assert_eq!(
            render_json(&v),
            "{\n  \"a\": [1, 2],\n  \"b\": 0.10000000000000001,\n  \"c\": {\n    \"y\": true,\n    \"z\": null\n  }\n}\n"
        );
    }

    #[test]
    fn flat_summary_as_csv() {
        let out = Output {
            table: None,
            json: json!({"n": 3, "ok": true, "x": 0.5}),
            default_format: Format::Json,
        };
        assert_eq!(out.render(Format::Csv), "n,ok,x\n3,true,0.5\n");
    }
}
