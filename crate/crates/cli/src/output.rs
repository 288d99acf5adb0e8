//! Result tables and their two serializations.
//!
//! Every command produces one `Table`: the resolved configuration (so each
//! emitted file records how to reproduce itself), a fixed column list, and
//! rows of cells. CSV puts the config in `#` comment lines above the
//! header; JSON carries it as a string map. Rendering is deterministic,
//! rerunning a command with the same inputs gives identical bytes.
//!
//! A row that failed mid-sweep keeps its place: its cells are `nan` or
//! empty and the failure text rides along, as a comment line right above
//! the row in CSV and as an `"error"` field in JSON.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::numfmt;

#[derive(Debug, Clone)]
pub enum Cell {
    F(f64),
    Int(u64),
    Flag(bool),
    Text(String),
    Empty,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub cells: Vec<Cell>,
    pub note: Option<String>,
}

impl Row {
    pub fn ok(cells: Vec<Cell>) -> Row {
        Row { cells, note: None }
    }

    pub fn flagged(cells: Vec<Cell>, note: String) -> Row {
        Row { cells, note: Some(note) }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    pub config: Vec<(&'static str, String)>,
    pub columns: &'static [&'static str],
    pub rows: Vec<Row>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# comrand {}", self.command);
        for (k, v) in &self.config {
            let _ = writeln!(s, "# {k} = {v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            debug_assert_eq!(row.cells.len(), self.columns.len());
            if let Some(note) = &row.note {
                let _ = writeln!(s, "# {note}");
            }
            let cells: Vec<String> = row.cells.iter().map(csv_cell).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut config = Map::new();
        for (k, v) in &self.config {
            config.insert((*k).into(), Value::String(v.clone()));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.columns.iter().zip(&row.cells) {
                    obj.insert((*name).into(), json_cell(cell));
                }
                if let Some(note) = &row.note {
                    obj.insert("error".into(), Value::String(note.clone()));
                }
                Value::Object(obj)
            })
            .collect();
        let doc = json!({
            "command": self.command,
            "config": Value::Object(config),
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("table is valid json");
        s.push('\n');
        s
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::F(x) => numfmt::full(*x),
        Cell::Int(u) => u.to_string(),
        Cell::Flag(b) => b.to_string(),
        Cell::Text(t) => t.clone(),
        Cell::Empty => String::new(),
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::F(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
        Cell::Int(u) => Value::Number((*u).into()),
        Cell::Flag(b) => Value::Bool(*b),
        Cell::Text(t) => Value::String(t.clone()),
        Cell::Empty => Value::Null,
    }
}
