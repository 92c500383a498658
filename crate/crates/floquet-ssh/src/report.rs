//! Output serialization: the spectrum CSV (with the full configuration
//! echoed as comment lines, so every file is self-describing) and the
//! field-profile CSV used to plot drive envelopes.
//!
//! Numeric columns carry 12 significant digits — comfortably beyond every
//! test tolerance in this crate while keeping sweep files compact. The
//! format is self-inverse: parsing an emitted file and re-emitting it
//! reproduces the bytes exactly.

use crate::drive::DriveSpec;
use crate::sweep::{SweepResult, SweepRow};
use std::io::{self, Write};
use thiserror::Error;

pub const SPECTRUM_HEADER: &str = "g,quasienergy,population,edge_weight,state_index";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("line {line}: expected {expected} comma-separated fields, got {got}")]
    FieldCount { line: usize, expected: usize, got: usize },
    #[error("line {line}: could not parse {field}: {message}")]
    BadField { line: usize, field: &'static str, message: String },
    #[error("missing header line `{SPECTRUM_HEADER}`")]
    MissingHeader,
}

/// Fixed-width scientific notation with 12 significant digits.
pub fn format_significant(x: f64) -> String {
    format!("{x:.11e}")
}

/// Write a sweep as CSV: comment lines (`#`) carrying the generation
/// context and the full configuration echo, the header, then one row per
/// (g, state). Pass `timestamp = None` for reproducible byte-identical
/// output.
pub fn write_spectrum_csv<W: Write>(
    out: &mut W,
    result: &SweepResult,
    config_echo: &str,
    timestamp: Option<&str>,
) -> io::Result<()> {
    let meta = result.metadata();
    writeln!(out, "# quasienergy spectrum sweep")?;
    if let Some(stamp) = timestamp {
        writeln!(out, "# generated: {stamp}")?;
    }
    writeln!(out, "# code version: {}", meta.code_version)?;
    writeln!(out, "# rows: {}", result.rows().len())?;
    writeln!(out, "# failed points: {}", result.failures().len())?;
    for failure in result.failures() {
        writeln!(
            out,
            "# failed g = {}: {}",
            format_significant(failure.g),
            failure.message
        )?;
    }
    writeln!(out, "# configuration:")?;
    for line in config_echo.lines() {
        writeln!(out, "#   {line}")?;
    }
    writeln!(out, "{SPECTRUM_HEADER}")?;
    for row in result.rows() {
        writeln!(
            out,
            "{},{},{},{},{}",
            format_significant(row.g),
            format_significant(row.quasienergy),
            format_significant(row.population),
            format_significant(row.edge_weight),
            row.state_index
        )?;
    }
    Ok(())
}

/// Parse a spectrum CSV back into rows, ignoring comment lines. The
/// inverse of [`write_spectrum_csv`] up to the dropped comments.
pub fn read_spectrum_csv(text: &str) -> Result<Vec<SweepRow>, ReportError> {
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !seen_header {
            if trimmed != SPECTRUM_HEADER {
                return Err(ReportError::MissingHeader);
            }
            seen_header = true;
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 5 {
            return Err(ReportError::FieldCount {
                line: line_no,
                expected: 5,
                got: fields.len(),
            });
        }
        let parse_f64 = |field: &'static str, text: &str| {
            text.parse::<f64>().map_err(|e| ReportError::BadField {
                line: line_no,
                field,
                message: e.to_string(),
            })
        };
        rows.push(SweepRow {
            g: parse_f64("g", fields[0])?,
            quasienergy: parse_f64("quasienergy", fields[1])?,
            population: parse_f64("population", fields[2])?,
            edge_weight: parse_f64("edge_weight", fields[3])?,
            state_index: fields[4].parse::<usize>().map_err(|e| ReportError::BadField {
                line: line_no,
                field: "state_index",
                message: e.to_string(),
            })?,
        });
    }
    if !seen_header {
        return Err(ReportError::MissingHeader);
    }
    Ok(rows)
}

/// Write drive field samples as two-column CSV (`t,E`), t in units of
/// 1/w and E in units of the peak field.
pub fn write_field_csv<W: Write>(
    out: &mut W,
    drive: &DriveSpec,
    t_min: f64,
    t_max: f64,
    samples: usize,
) -> io::Result<()> {
    writeln!(out, "t,E")?;
    let n = samples.max(2);
    for k in 0..n {
        let t = t_min + (t_max - t_min) * k as f64 / (n - 1) as f64;
        writeln!(
            out,
            "{},{}",
            format_significant(t),
            format_significant(drive.field_profile(t))
        )?;
    }
    Ok(())
}
