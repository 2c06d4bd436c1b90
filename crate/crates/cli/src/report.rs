use std::fmt::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// The machine-readable envelope every subcommand produces.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub version: &'static str,
    /// Seed driving the run; `null` for deterministic commands.
    pub seed: Option<u64>,
    pub inputs: Value,
    pub results: Value,
    pub timing_ms: f64,
}

/// A finished command: its report, human renderings and exit status.
pub struct Output {
    pub report: RunReport,
    pub table: String,
    pub csv: Option<String>,
    pub exit: u8,
}

impl Output {
    pub fn new(command: &'static str, seed: Option<u64>, inputs: Value, results: Value) -> Self {
        Output {
            report: RunReport {
                command,
                version: env!("CARGO_PKG_VERSION"),
                seed,
                inputs,
                results,
                timing_ms: 0.0,
            },
            table: String::new(),
            csv: None,
            exit: 0,
        }
    }

    pub fn table(mut self, table: String) -> Self {
        self.table = table;
        self
    }

    pub fn csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn exit(mut self, code: u8) -> Self {
        self.exit = code;
        self
    }
}

pub fn to_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// Aligned two-column `key  value` lines.
pub fn key_values(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<width$}  {v}");
    }
    s
}

/// A table with a header row; columns are left-aligned to their widest cell.
pub fn grid(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                let _ = write!(s, "{c:<w$}  ");
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}
