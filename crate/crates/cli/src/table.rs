//! CSV emission: rectangular numeric tables with a `#`-prefixed
//! provenance block, 12 significant digits, byte-deterministic output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// How a column serializes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    /// Integer-valued axis (level index, temperature label).
    Index,
    /// Physical value, 12 significant digits.
    Value,
}

/// A rectangular numeric table destined for one CSV file.
#[derive(Debug, Clone)]
pub struct CsvTable {
    pub name: String,
    pub columns: Vec<(String, ColumnKind)>,
    pub rows: Vec<Vec<f64>>,
    /// Comment lines (without the leading `# `): version banner, config
    /// echo, diagnostics.
    pub provenance: Vec<String>,
}

impl CsvTable {
    pub fn new(name: impl Into<String>, columns: Vec<(&str, ColumnKind)>) -> Self {
        Self {
            name: name.into(),
            columns: columns.into_iter().map(|(n, k)| (n.to_string(), k)).collect(),
            rows: Vec::new(),
            provenance: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len(), "ragged row in {}", self.name);
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.provenance {
            writeln!(out, "# {line}").unwrap();
        }
        let header: Vec<&str> = self.columns.iter().map(|(n, _)| n.as_str()).collect();
        writeln!(out, "{}", header.join(",")).unwrap();
        for row in &self.rows {
            let mut first = true;
            for (value, (_, kind)) in row.iter().zip(&self.columns) {
                if !first {
                    out.push(',');
                }
                first = false;
                out.push_str(&format_value(*value, *kind));
            }
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(&self.name);
        std::fs::write(&path, self.render())
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

pub fn format_value(v: f64, kind: ColumnKind) -> String {
    if v.is_nan() {
        return "nan".to_string();
    }
    match kind {
        ColumnKind::Index => {
            if v.fract() == 0.0 && v.abs() < 1e15 {
                format!("{v}")
            } else {
                format!("{v:.11e}")
            }
        }
        ColumnKind::Value => format!("{v:.11e}"),
    }
}

/// Compact label for file names like `fig2_T100.csv`: integer temperatures
/// print bare, others keep their shortest round-trip form.
pub fn temp_label(t: f64) -> String {
    format!("{t}")
}
