//! Golden-table regression: per-cell expected values with per-cell
//! tolerances, compared against a scenario report.
//!
//! Golden files are CSVs with columns `row,column,expected,tolerance,mode`.
//! Modes:
//!   * `abs`  — fail when |actual − expected| > tolerance
//!   * `rel`  — fail when |actual − expected| > tolerance × |expected|
//!   * `flag` — never fails; the comparison always surfaces the delta.
//!     Used for cells that are known to disagree with their source and must
//!     be reported rather than silently passed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellMode {
    Abs,
    Rel,
    Flag,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenCell {
    pub row: String,
    pub column: String,
    pub expected: f64,
    pub tolerance: f64,
    pub mode: CellMode,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenTable {
    pub table_id: String,
    pub cells: Vec<GoldenCell>,
}

impl GoldenTable {
    pub fn from_csv(table_id: &str, text: &str) -> Result<GoldenTable> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut cells = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let field = |idx: usize, name: &str| -> Result<String> {
                record
                    .get(idx)
                    .map(|s| s.trim().to_string())
                    .ok_or_else(|| Error::Config {
                        issues: vec![format!("golden {table_id} line {}: missing {name}", i + 2)],
                    })
            };
            let parse_f64 = |s: &str, name: &str| -> Result<f64> {
                s.parse().map_err(|_| Error::Config {
                    issues: vec![format!(
                        "golden {table_id} line {}: {name} is not a number: {s:?}",
                        i + 2
                    )],
                })
            };
            let mode = match field(4, "mode")?.as_str() {
                "abs" => CellMode::Abs,
                "rel" => CellMode::Rel,
                "flag" => CellMode::Flag,
                other => {
                    return Err(Error::Config {
                        issues: vec![format!(
                            "golden {table_id} line {}: unknown mode {other:?}",
                            i + 2
                        )],
                    })
                }
            };
            cells.push(GoldenCell {
                row: field(0, "row")?,
                column: field(1, "column")?,
                expected: parse_f64(&field(2, "expected")?, "expected")?,
                tolerance: parse_f64(&field(3, "tolerance")?, "tolerance")?,
                mode,
            });
        }
        Ok(GoldenTable {
            table_id: table_id.to_string(),
            cells,
        })
    }

    /// Build a golden that matches `table` exactly (used to assert the
    /// identical-report case).
    pub fn exact_from_report(report: &Report, table_id: &str) -> Result<GoldenTable> {
        let table = report.require_table(table_id)?;
        let mut cells = Vec::new();
        for row in &table.rows {
            for (col, v) in table.columns.iter().zip(&row.values) {
                if !v.is_nan() {
                    cells.push(GoldenCell {
                        row: row.label.clone(),
                        column: col.clone(),
                        expected: *v,
                        tolerance: 0.0,
                        mode: CellMode::Abs,
                    });
                }
            }
        }
        Ok(GoldenTable {
            table_id: table_id.to_string(),
            cells,
        })
    }
}

/// Load every `table_<id>.csv` golden in a directory.
pub fn load_golden_dir(dir: &Path) -> Result<Vec<GoldenTable>> {
    let mut tables = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(dir)?
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|e| e.path())
        .collect();
    entries.sort();
    for path in entries {
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if let Some(id) = name.strip_prefix("table_").and_then(|n| n.strip_suffix(".csv")) {
            let text = std::fs::read_to_string(&path)?;
            tables.push(GoldenTable::from_csv(id, &text)?);
        }
    }
    if tables.is_empty() {
        return Err(Error::Config {
            issues: vec![format!("no table_<id>.csv goldens found in {}", dir.display())],
        });
    }
    Ok(tables)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Pass,
    Fail,
    Flagged,
    Missing,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiffEntry {
    pub table_id: String,
    pub row: String,
    pub column: String,
    pub expected: f64,
    pub actual: Option<f64>,
    pub tolerance: f64,
    pub mode: CellMode,
    pub status: CellStatus,
}

/// Machine-readable result of a golden comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenDiff {
    pub checked: usize,
    /// Entries that exceeded their tolerance or were missing from the report.
    pub failures: Vec<DiffEntry>,
    /// `flag`-mode entries, always surfaced with their deltas.
    pub flagged: Vec<DiffEntry>,
}

impl GoldenDiff {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Human-readable listing, one line per failure or flagged cell.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.passed() {
            let _ = writeln!(out, "golden comparison: all {} cells pass", self.checked);
        } else {
            let _ = writeln!(
                out,
                "golden comparison: {} of {} cells FAILED",
                self.failures.len(),
                self.checked
            );
        }
        for f in &self.failures {
            match f.actual {
                Some(actual) => {
                    let _ = writeln!(
                        out,
                        "  FAIL {}/{}/{}: expected {} got {} (tolerance {} {:?})",
                        f.table_id, f.row, f.column, f.expected, actual, f.tolerance, f.mode
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "  FAIL {}/{}/{}: expected {} but the cell is missing",
                        f.table_id, f.row, f.column, f.expected
                    );
                }
            }
        }
        for f in &self.flagged {
            let actual = f.actual.unwrap_or(f64::NAN);
            let _ = writeln!(
                out,
                "  KNOWN-INCONSISTENCY {}/{}/{}: published {} computed {} (delta {:+})",
                f.table_id,
                f.row,
                f.column,
                f.expected,
                actual,
                actual - f.expected
            );
        }
        out
    }
}

/// Compare a report against a set of golden tables.
pub fn compare_to_golden(report: &Report, goldens: &[GoldenTable]) -> Result<GoldenDiff> {
    let mut failures = Vec::new();
    let mut flagged = Vec::new();
    let mut checked = 0usize;

    for golden in goldens {
        let table = report.require_table(&golden.table_id)?;
        for cell in &golden.cells {
            checked += 1;
            let actual = table.cell(&cell.row, &cell.column);
            let entry = |status: CellStatus| DiffEntry {
                table_id: golden.table_id.clone(),
                row: cell.row.clone(),
                column: cell.column.clone(),
                expected: cell.expected,
                actual,
                tolerance: cell.tolerance,
                mode: cell.mode,
                status,
            };
            match (cell.mode, actual) {
                (CellMode::Flag, _) => flagged.push(entry(CellStatus::Flagged)),
                (_, None) => failures.push(entry(CellStatus::Missing)),
                (mode, Some(actual)) => {
                    let bound = match mode {
                        CellMode::Abs => cell.tolerance,
                        CellMode::Rel => cell.tolerance * cell.expected.abs(),
                        CellMode::Flag => unreachable!(),
                    };
                    if (actual - cell.expected).abs() > bound {
                        failures.push(entry(CellStatus::Fail));
                    }
                }
            }
        }
    }

    Ok(GoldenDiff {
        checked,
        failures,
        flagged,
    })
}

/// Shipped golden files, keyed by table id.
pub fn builtin_goldens() -> Vec<GoldenTable> {
    let sources: &[(&str, &str)] = &[
        ("1", include_str!("../../goldens/table_1.csv")),
        ("2", include_str!("../../goldens/table_2.csv")),
        ("3", include_str!("../../goldens/table_3.csv")),
        ("4", include_str!("../../goldens/table_4.csv")),
        ("5", include_str!("../../goldens/table_5.csv")),
        ("6", include_str!("../../goldens/table_6.csv")),
        ("7", include_str!("../../goldens/table_7.csv")),
        ("9", include_str!("../../goldens/table_9.csv")),
        ("10", include_str!("../../goldens/table_10.csv")),
        ("11", include_str!("../../goldens/table_11.csv")),
        ("12", include_str!("../../goldens/table_12.csv")),
        ("13", include_str!("../../goldens/table_13.csv")),
        ("14", include_str!("../../goldens/table_14.csv")),
        ("15", include_str!("../../goldens/table_15.csv")),
        ("16", include_str!("../../goldens/table_16.csv")),
        ("17", include_str!("../../goldens/table_17.csv")),
        ("naic", include_str!("../../goldens/table_naic.csv")),
    ];
    sources
        .iter()
        .map(|(id, text)| GoldenTable::from_csv(id, text).expect("shipped golden must parse"))
        .collect()
}

/// Which golden tables each scenario's report is checked against.
pub fn golden_ids_for_scenario(scenario: &str) -> &'static [&'static str] {
    match scenario {
        "benchmark" => &["1", "2"],
        "panel" => &["3", "4", "5", "6", "7", "9", "10", "11"],
        "buyer_tiers" => &["12", "13", "14", "15", "16", "17"],
        "naic_report" => &["naic"],
        _ => &[],
    }
}

/// Shipped goldens filtered to one scenario.
pub fn builtin_goldens_for(scenario: &str) -> Vec<GoldenTable> {
    let ids = golden_ids_for_scenario(scenario);
    builtin_goldens()
        .into_iter()
        .filter(|g| ids.contains(&g.table_id.as_str()))
        .collect()
}

/// All scenario-to-golden assignments, used by the coverage check.
pub fn golden_coverage() -> BTreeMap<&'static str, &'static [&'static str]> {
    let mut map = BTreeMap::new();
    for id in super::config::SCENARIO_IDS {
        map.insert(id, golden_ids_for_scenario(id));
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::report::Table;

    fn toy_report() -> Report {
        let mut r = Report::new("toy", 1, 1);
        let mut t = Table::new("1", "Toy", &["a", "b"]);
        t.push_row("x", vec![1.0, 2.0]);
        r.tables.push(t);
        r
    }

    #[test]
    fn identical_report_produces_empty_diff() {
        let report = toy_report();
        let golden = GoldenTable::exact_from_report(&report, "1").unwrap();
        let diff = compare_to_golden(&report, &[golden]).unwrap();
        assert!(diff.passed());
        assert!(diff.failures.is_empty() && diff.flagged.is_empty());
        assert_eq!(diff.checked, 2);
    }

    #[test]
    fn out_of_band_cell_fails() {
        let report = toy_report();
        let golden = GoldenTable {
            table_id: "1".into(),
            cells: vec![GoldenCell {
                row: "x".into(),
                column: "a".into(),
                expected: 5.0,
                tolerance: 0.5,
                mode: CellMode::Abs,
            }],
        };
        let diff = compare_to_golden(&report, &[golden]).unwrap();
        assert!(!diff.passed());
        assert_eq!(diff.failures[0].status, CellStatus::Fail);
    }

    #[test]
    fn flagged_cells_never_fail_but_always_surface() {
        let report = toy_report();
        let golden = GoldenTable {
            table_id: "1".into(),
            cells: vec![GoldenCell {
                row: "x".into(),
                column: "a".into(),
                expected: 99.0,
                tolerance: 0.0,
                mode: CellMode::Flag,
            }],
        };
        let diff = compare_to_golden(&report, &[golden]).unwrap();
        assert!(diff.passed());
        assert_eq!(diff.flagged.len(), 1);
        assert!(diff.render().contains("KNOWN-INCONSISTENCY"));
    }

    #[test]
    fn unknown_table_id_errors() {
        let report = toy_report();
        let golden = GoldenTable {
            table_id: "nope".into(),
            cells: vec![],
        };
        assert!(matches!(
            compare_to_golden(&report, &[golden]),
            Err(Error::UnknownTable(_))
        ));
    }

    #[test]
    fn golden_csv_round_trips() {
        let text = "row,column,expected,tolerance,mode\nx,a,1.5,0.1,abs\nx,b,2.0,0.05,rel\n";
        let g = GoldenTable::from_csv("1", text).unwrap();
        assert_eq!(g.cells.len(), 2);
        assert_eq!(g.cells[1].mode, CellMode::Rel);
    }

    #[test]
    fn bad_mode_is_a_config_error() {
        let text = "row,column,expected,tolerance,mode\nx,a,1.5,0.1,wat\n";
        assert!(GoldenTable::from_csv("1", text).is_err());
    }
}
