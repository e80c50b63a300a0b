use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use serde::Serialize;

/// Buffered stdout, or the file given with `--out`.
pub fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, csv::Error> {
    let mut buf = Vec::new();
    ternjump::families::write_rows_csv(rows, &mut buf)?;
    Ok(buf)
}

/// Renders CSV as left-aligned columns, empty cells shown as `-`.
pub fn aligned(csv_data: &[u8]) -> Result<String, csv::Error> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(csv_data);
    let mut table: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        table.push(
            record
                .iter()
                .map(|f| {
                    if f.is_empty() {
                        "-".to_string()
                    } else {
                        f.to_string()
                    }
                })
                .collect(),
        );
    }
    let cols = table.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            table
                .iter()
                .filter_map(|r| r.get(c))
                .map(String::len)
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in &table {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    Ok(out)
}

pub fn yes_no(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "NO"
    }
}

pub fn optional(v: Option<bool>) -> &'static str {
    v.map_or("not run", yes_no)
}
