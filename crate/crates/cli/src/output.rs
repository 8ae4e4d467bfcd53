use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// One JSON object per line.
    Json,
    /// CSV with a header row.
    Csv,
    /// Aligned columns.
    Text,
}

/// Rows with a fixed header, printable in every format. JSON output uses the
/// records themselves; CSV and text use the string cells.
pub struct Table<'a, T> {
    pub headers: &'a [&'a str],
    pub records: &'a [T],
    pub cells: fn(&T) -> Vec<String>,
}

impl<T: Serialize> Table<'_, T> {
    pub fn write(&self, format: Format, out: &mut impl Write) -> Result<()> {
        match format {
            Format::Json => {
                for r in self.records {
                    serde_json::to_writer(&mut *out, r)?;
                    writeln!(out)?;
                }
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(self.headers)?;
                for r in self.records {
                    w.write_record((self.cells)(r))?;
                }
                w.flush()?;
            }
            Format::Text => {
                let rows: Vec<Vec<String>> = self.records.iter().map(self.cells).collect();
                write_aligned(self.headers, &rows, out)?;
            }
        }
        Ok(())
    }
}

pub fn write_aligned(headers: &[&str], rows: &[Vec<String>], out: &mut impl Write) -> Result<()> {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(out, "{}", line(headers.to_vec()))?;
    for row in rows {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}
