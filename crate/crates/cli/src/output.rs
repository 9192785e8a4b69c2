//! CSV tables with unit-labelled headers.
//!
//! Floats are written as `{:.14e}` (15 significant digits, lower-case `e`),
//! integers as plain decimals, non-finite values as `nan`, `inf`, `-inf`.

use std::fmt::Write as _;

use lifshitz_core::quantities::{Dimension, Quantity};
use lifshitz_core::UnitSystem;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Column {
    pub name: &'static str,
    /// `None` for dimensionless or fixed-unit columns whose unit is already in `name`.
    pub dimension: Option<Dimension>,
}

impl Column {
    pub const fn plain(name: &'static str) -> Self {
        Self { name, dimension: None }
    }

    pub const fn with(name: &'static str, dimension: Dimension) -> Self {
        Self {
            name,
            dimension: Some(dimension),
        }
    }

    pub fn header(&self, units: UnitSystem) -> String {
        match self.dimension {
            Some(d) => format!("{}_{}", self.name, d.unit_label(units)),
            None => self.name.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Float(f64),
    Int(u64),
}

pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.14e}")
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<Column>,
    /// SI values; converted on render.
    pub rows: Vec<Vec<Cell>>,
    /// Emitted as `# ` lines before the header.
    pub preamble: Vec<String>,
    /// Set when the run stopped early; rendered as a trailing `# INCOMPLETE:` line.
    pub incomplete: Option<String>,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            preamble: Vec::new(),
            incomplete: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn headers(&self, units: UnitSystem) -> Vec<String> {
        self.columns.iter().map(|c| c.header(units)).collect()
    }

    fn render_cell(&self, col: &Column, cell: Cell, units: UnitSystem) -> String {
        match cell {
            Cell::Int(i) => i.to_string(),
            Cell::Float(v) => {
                let v = match col.dimension {
                    Some(d) => Quantity::si(v, d).convert(units).value,
                    None => v,
                };
                format_float(v)
            }
        }
    }

    pub fn render(&self, units: UnitSystem) -> String {
        let mut out = String::new();
        for line in &self.preamble {
            let _ = writeln!(out, "# {line}");
        }
        out.push_str(&self.headers(units).join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = self
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| self.render_cell(c, *v, units))
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        if let Some(reason) = &self.incomplete {
            let _ = writeln!(out, "# INCOMPLETE: {reason}");
        }
        out
    }

    /// Row-wise JSON objects keyed by the rendered headers.
    pub fn records(&self, units: UnitSystem) -> Vec<serde_json::Map<String, serde_json::Value>> {
        let headers = self.headers(units);
        self.rows
            .iter()
            .map(|row| {
                headers
                    .iter()
                    .zip(self.columns.iter().zip(row))
                    .map(|(h, (c, cell))| {
                        let v = match *cell {
                            Cell::Int(i) => serde_json::Value::from(i),
                            Cell::Float(v) => {
                                let v = match c.dimension {
                                    Some(d) => Quantity::si(v, d).convert(units).value,
                                    None => v,
                                };
                                serde_json::Number::from_f64(v)
                                    .map(serde_json::Value::Number)
                                    .unwrap_or(serde_json::Value::Null)
                            }
                        };
                        (h.clone(), v)
                    })
                    .collect()
            })
            .collect()
    }
}
