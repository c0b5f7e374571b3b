//! CSV reading and writing with a fixed numeric format.
//!
//! Every float written by this crate uses 9 significant digits in
//! scientific notation, which keeps artifacts byte-stable across runs and
//! platforms. Readers report malformed input with 1-based line numbers.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Render a float with 9 significant digits (the on-disk format).
pub fn format_sig(v: f64) -> String {
    format!("{v:.8e}")
}

/// Write a header plus pre-rendered rows as comma-separated lines.
pub fn write_csv_file(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// An all-numeric CSV table with a named header.
#[derive(Debug, Clone)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    /// Index of a named column, if present.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Indices of the contiguous family `prefix_1 .. prefix_q`, e.g. the
    /// `f_*` objective columns. Returns `None` when `prefix_1` is absent.
    pub fn column_family(&self, prefix: &str) -> Option<Vec<usize>> {
        let mut cols = Vec::new();
        loop {
            match self.column(&format!("{prefix}_{}", cols.len() + 1)) {
                Some(i) => cols.push(i),
                None => break,
            }
        }
        if cols.is_empty() {
            None
        } else {
            Some(cols)
        }
    }
}

/// Read an all-numeric CSV file with a header line.
pub fn read_csv_file(path: &Path) -> Result<CsvTable> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let header_line = match lines.next() {
        Some(l) => l?,
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "file is empty".into(),
            })
        }
    };
    let header: Vec<String> = header_line
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2; // 1-based, after the header
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != header.len() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {} cells, found {}", header.len(), cells.len()),
            });
        }
        let mut row = Vec::with_capacity(cells.len());
        for cell in cells {
            let v: f64 = cell.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("`{}` is not a number", cell.trim()),
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    Ok(CsvTable { header, rows })
}
