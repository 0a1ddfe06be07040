//! Tabular output with byte-stable formatting.
//!
//! Floats are written with six significant digits; integers and labels are
//! written verbatim. Column names carry their unit as a suffix.

use std::fmt::Write as _;

use crate::scenario::{ScenarioConfig, SCENARIO_KEYS};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Float(v) => format_sig6(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Six significant digits. Magnitudes in [1e-4, 1e9) are written in fixed
/// notation, everything else in scientific notation.
pub fn format_sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    // round to six significant digits first so the exponent is final
    let sci = format!("{v:.5e}");
    let rounded: f64 = sci.parse().expect("formatted float");
    let exp = rounded.abs().log10().floor() as i32;
    if (-4..9).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{rounded:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let (mantissa, e) = sci.split_once('e').expect("scientific");
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{e}")
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Right-aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::render).collect())
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| {
                rendered
                    .iter()
                    .map(|r| r[i].len())
                    .chain(std::iter::once(self.columns[i].len()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |cells: &[String], out: &mut String| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            let _ = writeln!(out, "  {}", parts.join("  "));
        };
        line(&self.columns, &mut out);
        for r in &rendered {
            line(r, &mut out);
        }
        out
    }
}

/// A titled plain-text document: scenario echo, sections, constants footer.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportDocument {
    pub scenario: ScenarioConfig,
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub title: String,
    pub notes: Vec<String>,
    pub table: Option<Table>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            notes: Vec::new(),
            table: None,
        }
    }

    pub fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }
}

impl ReportDocument {
    pub fn new(scenario: ScenarioConfig) -> Self {
        Self {
            scenario,
            sections: Vec::new(),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::from("== scenario ==\n");
        for key in SCENARIO_KEYS {
            if key.starts_with("earth_") || key == "light_speed_ms" {
                continue;
            }
            let v = self.scenario.get(key).expect("known key");
            let _ = writeln!(out, "  {key} = {v:?}");
        }
        for s in &self.sections {
            let _ = writeln!(out, "\n== {} ==", s.title);
            for n in &s.notes {
                let _ = writeln!(out, "  {n}");
            }
            if let Some(t) = &s.table {
                out.push_str(&t.to_text());
            }
        }
        let k = &self.scenario.constants;
        let _ = writeln!(
            out,
            "\n-- constants: earth_radius_m = {:?}, earth_mu_m3s2 = {:?}, light_speed_ms = {:?}",
            k.earth_radius_m, k.earth_mu_m3s2, k.light_speed_ms
        );
        out
    }
}
