//! Structured scenario results and their file emission.
//!
//! A report is a pure function of (config, seed): tables of labelled cells,
//! plot series, free-form notes, and named scalar values. Emission writes
//! `report.json`, one `table_<id>.csv` per table, and one `plot_<name>.csv`
//! per plot series collection.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub runs: usize,
    pub tables: Vec<Table>,
    pub plots: Vec<Plot>,
    pub values: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(scenario: &str, seed: u64, runs: usize) -> Report {
        Report {
            scenario: scenario.to_string(),
            seed,
            runs,
            tables: Vec::new(),
            plots: Vec::new(),
            values: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn table(&self, id: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.id == id)
    }

    pub fn require_table(&self, id: &str) -> Result<&Table> {
        self.table(id)
            .ok_or_else(|| Error::UnknownTable(id.to_string()))
    }

    pub fn push_note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Write all artifacts under `dir`, creating it if needed.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(
            dir.join("report.json"),
            serde_json::to_string_pretty(self).expect("report serialization cannot fail") + "\n",
        )?;
        for table in &self.tables {
            fs::write(dir.join(format!("table_{}.csv", table.id)), table.to_csv())?;
        }
        for plot in &self.plots {
            fs::write(dir.join(format!("plot_{}.csv", plot.name)), plot.to_csv())?;
        }
        Ok(())
    }
}

/// A labelled grid of numeric cells. Missing cells are NaN and serialize to
/// empty CSV fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Table {
    pub id: String,
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub values: Vec<f64>,
}

impl Table {
    pub fn new(id: &str, title: &str, columns: &[&str]) -> Table {
        Table {
            id: id.to_string(),
            title: title.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, label: &str, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.columns.len(), "row width mismatch");
        self.rows.push(TableRow {
            label: label.to_string(),
            values,
        });
    }

    pub fn cell(&self, row: &str, column: &str) -> Option<f64> {
        let col = self.columns.iter().position(|c| c == column)?;
        let row = self.rows.iter().find(|r| r.label == row)?;
        let v = *row.values.get(col)?;
        (!v.is_nan()).then_some(v)
    }

    /// UTF-8, LF line endings, header row first.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("row");
        for c in &self.columns {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&csv_escape(&r.label));
            for v in &r.values {
                if v.is_nan() {
                    out.push(',');
                } else {
                    let _ = write!(out, ",{v}");
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Plot data: (series, x, y) triples, one collection per figure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Plot {
    pub name: String,
    pub points: Vec<PlotPoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlotPoint {
    pub series: String,
    pub x: f64,
    pub y: f64,
}

impl Plot {
    pub fn new(name: &str) -> Plot {
        Plot {
            name: name.to_string(),
            points: Vec::new(),
        }
    }

    pub fn push(&mut self, series: &str, x: f64, y: f64) {
        self.points.push(PlotPoint {
            series: series.to_string(),
            x,
            y,
        });
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("series,x,y\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", csv_escape(&p.series), p.x, p.y);
        }
        out
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
