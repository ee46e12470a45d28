//! Output serialization: CSV tables with fixed column orders, one JSON
//! report per run, and optional two-column plot data files.

use crate::config::format_float;
use anyhow::{Context, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;
use symgrad::report::CheckSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Csv,
    Plot,
}

/// One data file produced by a subcommand.
#[derive(Debug, Clone)]
pub struct OutputFile {
    pub name: String,
    pub kind: FileKind,
    pub content: String,
}

/// CSV builder with a fixed column order and 17-significant-digit floats.
pub struct CsvTable {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        CsvTable {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "csv row arity");
        self.rows.push(cells);
    }

    pub fn finish(self, name: &str) -> OutputFile {
        let mut content = self.columns.join(",");
        content.push('\n');
        for row in self.rows {
            content.push_str(&row.join(","));
            content.push('\n');
        }
        OutputFile { name: format!("{name}.csv"), kind: FileKind::Csv, content }
    }
}

/// Cell renderers.
pub fn num(v: f64) -> String {
    format_float(v)
}

pub fn int(v: usize) -> String {
    v.to_string()
}

pub fn boolean(v: bool) -> String {
    if v { "true".into() } else { "false".into() }
}

/// Two-column plot file.
pub fn plot_file(name: &str, pairs: &[(f64, f64)]) -> OutputFile {
    let mut content = String::new();
    for (x, y) in pairs {
        content.push_str(&format!("{} {}\n", format_float(*x), format_float(*y)));
    }
    OutputFile { name: format!("{name}.dat"), kind: FileKind::Plot, content }
}

/// The JSON report: configuration echo, check records, timing.
#[derive(Debug, Serialize)]
pub struct JsonReport {
    pub config: BTreeMap<String, String>,
    pub checks: CheckSet,
    pub timing: Timing,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub wall_ms: u128,
}

/// Which outputs to write.
#[derive(Debug, Clone, Copy)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub plot: bool,
}

impl Formats {
    pub fn parse(list: &str) -> Result<Self> {
        let mut f = Formats { csv: false, json: false, plot: false };
        for part in list.split(',') {
            match part.trim() {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "plot" => f.plot = true,
                other => anyhow::bail!("unknown format {other:?} (expected csv|json|plot)"),
            }
        }
        Ok(f)
    }
}

/// Write the selected outputs under `out_dir`.
pub fn write_outputs(
    out_dir: &Path,
    subcommand: &str,
    files: &[OutputFile],
    report: &JsonReport,
    formats: Formats,
) -> Result<()> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    for file in files {
        let wanted = match file.kind {
            FileKind::Csv => formats.csv,
            FileKind::Plot => formats.plot,
        };
        if !wanted {
            continue;
        }
        let path = out_dir.join(&file.name);
        std::fs::write(&path, &file.content)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if formats.json {
        let path = out_dir.join(format!("{subcommand}_report.json"));
        let text = serde_json::to_string_pretty(report)?;
        std::fs::write(&path, text + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
