//! Report emission: provenance-tagged values, RFC 4180 CSV and file bundles.

use serde::Serialize;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::Result;

/// How a numeric value was computed.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Analytic,
    Quadrature,
    MonteCarlo { se: f64 },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Analytic => write!(f, "analytic"),
            Provenance::Quadrature => write!(f, "quadrature"),
            Provenance::MonteCarlo { se } => write!(f, "monte-carlo(se={se})"),
        }
    }
}

impl Serialize for Provenance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A numeric report cell with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub value: f64,
    pub provenance: Provenance,
}

impl Cell {
    pub fn analytic(value: f64) -> Self {
        Self {
            value,
            provenance: Provenance::Analytic,
        }
    }

    pub fn quadrature(value: f64) -> Self {
        Self {
            value,
            provenance: Provenance::Quadrature,
        }
    }

    pub fn monte_carlo(value: f64, se: f64) -> Self {
        Self {
            value,
            provenance: Provenance::MonteCarlo { se },
        }
    }
}

/// Quote a CSV field per RFC 4180.
fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') || field.contains('\r') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Render rows as RFC 4180 CSV (CRLF line endings, quoted where required).
pub fn write_csv(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(
        &headers
            .iter()
            .map(|h| csv_quote(h))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push_str("\r\n");
    for row in rows {
        out.push_str(
            &row.iter()
                .map(|f| csv_quote(f))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push_str("\r\n");
    }
    out
}

/// Minimal RFC 4180 parser for round-trip checks.
pub fn parse_csv(text: &str) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    let mut row = Vec::new();
    let mut field = String::new();
    let mut quoted = false;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if quoted {
            match c {
                '"' => {
                    if chars.peek() == Some(&'"') {
                        chars.next();
                        field.push('"');
                    } else {
                        quoted = false;
                    }
                }
                _ => field.push(c),
            }
        } else {
            match c {
                '"' => quoted = true,
                ',' => {
                    row.push(std::mem::take(&mut field));
                }
                '\r' => {
                    if chars.peek() == Some(&'\n') {
                        chars.next();
                    }
                    row.push(std::mem::take(&mut field));
                    rows.push(std::mem::take(&mut row));
                }
                '\n' => {
                    row.push(std::mem::take(&mut field));
                    rows.push(std::mem::take(&mut row));
                }
                _ => field.push(c),
            }
        }
    }
    if !field.is_empty() || !row.is_empty() {
        row.push(field);
        rows.push(row);
    }
    rows
}

/// Format a float so it parses back to the identical bits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// The artifacts produced by one command.
#[derive(Debug, Clone)]
pub struct ReportBundle {
    /// Machine-readable results.
    pub machine: serde_json::Value,
    /// Optional tabular output.
    pub csv: Option<String>,
    /// Human summary.
    pub human: String,
}

impl ReportBundle {
    /// Write `<stem>.json`, `<stem>.txt` and, when present, `<stem>.csv`
    /// under `dir`. Returns the written paths.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let json_path = dir.join(format!("{stem}.json"));
        std::fs::write(
            &json_path,
            serde_json::to_string_pretty(&self.machine).unwrap(),
        )?;
        written.push(json_path);
        let txt_path = dir.join(format!("{stem}.txt"));
        std::fs::write(&txt_path, &self.human)?;
        written.push(txt_path);
        if let Some(csv) = &self.csv {
            let csv_path = dir.join(format!("{stem}.csv"));
            std::fs::write(&csv_path, csv)?;
            written.push(csv_path);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting_round_trips() {
        let rows = vec![
            vec!["plain".to_string(), "with,comma".to_string()],
            vec!["with \"quote\"".to_string(), "line\nbreak".to_string()],
        ];
        let text = write_csv(&["a", "b"], &rows);
        let parsed = parse_csv(&text);
        assert_eq!(parsed[0], vec!["a", "b"]);
        assert_eq!(parsed[1], rows[0]);
        assert_eq!(parsed[2], rows[1]);
        assert!(text.contains("\"with,comma\""));
        assert!(text.ends_with("\r\n"));
    }

    #[test]
    fn floats_round_trip_exactly() {
        for v in [0.1, 1.0 / 3.0, 6.572670690061994, 1e-17, -2.5] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn provenance_labels() {
        assert_eq!(Cell::analytic(1.0).provenance.to_string(), "analytic");
        assert_eq!(Cell::quadrature(1.0).provenance.to_string(), "quadrature");
        assert_eq!(
            Cell::monte_carlo(1.0, 0.001).provenance.to_string(),
            "monte-carlo(se=0.001)"
        );
    }
}
