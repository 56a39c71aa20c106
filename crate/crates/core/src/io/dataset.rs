//! Tabular output: CSV (RFC 4180), JSON records and a plain-text table.

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scenario::{LearningRateBand, Scenario};
use crate::types::{ComponentStructure, StackStructure};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Number(f64),
}

impl Cell {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Cell::Number(n) => Some(*n),
            Cell::Text(_) => None,
        }
    }

    fn csv_field(&self) -> String {
        match self {
            Cell::Text(t) => t.clone(),
            // Display for f64 is the shortest round-tripping decimal and
            // never uses exponent notation or digit grouping.
            Cell::Number(n) => n.to_string(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Text(t) => t.clone(),
            Cell::Number(n) => format_human(*n),
        }
    }
}

impl From<f64> for Cell {
    fn from(n: f64) -> Self {
        Cell::Number(n)
    }
}

impl From<&str> for Cell {
    fn from(t: &str) -> Self {
        Cell::Text(t.to_string())
    }
}

impl From<String> for Cell {
    fn from(t: String) -> Self {
        Cell::Text(t)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Text(t) => serializer.serialize_str(t),
            Cell::Number(n) => serializer.serialize_f64(*n),
        }
    }
}

fn format_human(n: f64) -> String {
    if n != 0.0 && (n.abs() >= 1e6 || n.abs() < 1e-3) {
        format!("{n:.4e}")
    } else {
        let s = format!("{n:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s.is_empty() || s == "-" { "0".to_string() } else { s.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetMetadata {
    pub scenario: String,
    pub stack_structure: StackStructure,
    pub component_structure: ComponentStructure,
    pub stack_learning_rate_band: LearningRateBand,
    pub component_learning_rate_band: LearningRateBand,
}

impl DatasetMetadata {
    pub fn for_scenario(scenario: &Scenario) -> Self {
        Self {
            scenario: scenario.metadata.name.clone(),
            stack_structure: scenario.stack_structure,
            component_structure: scenario.component_structure,
            stack_learning_rate_band: scenario.stack_lr_band,
            component_learning_rate_band: scenario.component_lr_band,
        }
    }
}

/// A rectangular table of results. Column names carry units
/// (`cost_usd_per_kw`); every row has one cell per column and numeric cells
/// are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureDataset {
    pub id: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: DatasetMetadata,
}

impl FigureDataset {
    pub fn new(id: impl Into<String>, columns: &[&str], metadata: DatasetMetadata) -> Self {
        Self {
            id: id.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Domain(format!(
                "row has {} cells, dataset `{}` has {} columns",
                row.len(),
                self.id,
                self.columns.len()
            )));
        }
        if let Some((i, cell)) = row
            .iter()
            .enumerate()
            .find(|(_, c)| c.as_number().is_some_and(|n| !n.is_finite()))
        {
            return Err(Error::Domain(format!(
                "non-finite value {cell:?} in column `{}` of dataset `{}`",
                self.columns[i], self.id
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        writer.write_record(&self.columns).expect("writing to memory");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(Cell::csv_field))
                .expect("writing to memory");
        }
        String::from_utf8(writer.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("datasets always serialize");
        out.push('\n');
        out
    }

    /// Aligned plain-text table for terminals.
    pub fn to_table(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::human).collect())
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let line = |fields: &[String]| -> String {
            fields
                .iter()
                .zip(&widths)
                .map(|(f, w)| format!("{f:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = line(&self.columns);
        out.push('\n');
        for row in &cells {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }
}

struct Record<'a> {
    columns: &'a [String],
    row: &'a [Cell],
}

impl Serialize for Record<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.columns.len()))?;
        for (c, v) in self.columns.iter().zip(self.row) {
            map.serialize_entry(c, v)?;
        }
        map.end()
    }
}

impl Serialize for FigureDataset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let records: Vec<Record<'_>> = self
            .rows
            .iter()
            .map(|row| Record {
                columns: &self.columns,
                row,
            })
            .collect();
        let mut s = serializer.serialize_struct("FigureDataset", 4)?;
        s.serialize_field("id", &self.id)?;
        s.serialize_field("metadata", &self.metadata)?;
        s.serialize_field("columns", &self.columns)?;
        s.serialize_field("records", &records)?;
        s.end()
    }
}
