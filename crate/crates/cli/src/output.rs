//! Tables and their CSV/JSON renderings.
//!
//! Numbers are rounded to the configured number of significant digits and
//! then printed in the shortest form that reads back to the rounded value,
//! so identical runs give byte-identical files.

use serde_json::{json, Map, Value};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    /// Finite numbers as numbers; NaN and infinities as empty cells.
    pub fn num(v: f64) -> Self {
        if v.is_finite() {
            Cell::Num(v)
        } else {
            Cell::Empty
        }
    }

    pub fn opt_num(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::num)
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Self {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(
            row.len(),
            self.columns.len(),
            "row width for table {}",
            self.name
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }
}

/// Rounds `v` to `digits` significant digits.
pub fn round_sig(v: f64, digits: u32) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let digits = digits.clamp(1, 17) as usize;
    format!("{:.*e}", digits - 1, v).parse().unwrap_or(v)
}

/// Shortest round-trip text of `v` after rounding; exponent notation
/// outside `[1e-5, 1e16)`.
pub fn format_number(v: f64, digits: u32) -> String {
    if !v.is_finite() {
        return String::new();
    }
    let r = round_sig(v, digits);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn csv_text(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

pub fn to_csv(table: &Table, digits: u32) -> String {
    let mut out = format!("# schema_version={SCHEMA_VERSION} table={}\n", table.name);
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Int(v) => v.to_string(),
                Cell::Num(v) => format_number(*v, digits),
                Cell::Text(s) => csv_text(s),
                Cell::Empty => String::new(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn json_cell(c: &Cell, digits: u32) -> Value {
    match c {
        Cell::Int(v) => json!(v),
        Cell::Num(v) if v.is_finite() => {
            let r = round_sig(*v, digits);
            json!(if r == 0.0 { 0.0 } else { r })
        }
        Cell::Num(_) | Cell::Empty => Value::Null,
        Cell::Text(s) => json!(s),
    }
}

pub fn to_json(table: &Table, config: &RunConfig, digits: u32) -> String {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (name, cell) in table.columns.iter().zip(row) {
                obj.insert((*name).to_string(), json_cell(cell, digits));
            }
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "table": table.name,
        "config": config,
        "rows": rows,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable document");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(0.1, 15), "0.1");
        assert_eq!(format_number(1.0 / 3.0, 6), "0.333333");
        assert_eq!(format_number(1.0 / 3.0, 17), "0.3333333333333333");
        assert_eq!(format_number(1e-8, 15), "1e-8");
        assert_eq!(format_number(-2.5e-6, 15), "-2.5e-6");
        assert_eq!(format_number(1e16, 15), "1e16");
        assert_eq!(format_number(123456.0, 15), "123456");
        assert_eq!(format_number(-0.0, 15), "0");
        assert_eq!(format_number(f64::NAN, 15), "");
        assert_eq!(format_number(0.99999999999999999, 15), "1");
    }

    #[test]
    fn rounding_is_idempotent() {
        for &v in &[0.123_456_789_012_345_68, 9.87654321e-7, 3.0e12, 1.0 / 7.0] {
            for d in 6..=17 {
                let r = round_sig(v, d);
                assert_eq!(round_sig(r, d), r);
            }
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", &["s", "k", "status"]);
        t.push(vec![
            Cell::from(3u32),
            Cell::num(0.5),
            Cell::text("ok, fine"),
        ]);
        t.push(vec![Cell::Empty, Cell::num(f64::NAN), Cell::text("x")]);
        let csv = to_csv(&t, 15);
        assert_eq!(
            csv,
            "# schema_version=1 table=demo\ns,k,status\n3,0.5,ok; fine\n,,x\n"
        );
    }
}
