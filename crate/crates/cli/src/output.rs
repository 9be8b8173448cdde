//! Output formatting: aligned text tables, CSV, or JSON. All three are
//! byte-deterministic for a fixed command line.

use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Print `rows` under `header` in the chosen format; `json` is the typed view
/// of the same data, serialized as a pretty-printed array.
pub fn emit<T: Serialize>(
    format: Format,
    header: &[&str],
    rows: &[Vec<String>],
    json: &T,
) -> serde_json::Result<()> {
    match format {
        Format::Table => print_table(header, rows),
        Format::Csv => print_csv(header, rows),
        Format::Json => println!("{}", serde_json::to_string_pretty(json)?),
    }
    Ok(())
}

fn print_table(header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let print_row = |cells: &[String]| {
        let line: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        println!("{}", line.join("  ").trim_end());
    };
    print_row(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for row in rows {
        print_row(row);
    }
}

fn print_csv(header: &[&str], rows: &[Vec<String>]) {
    println!("{}", header.join(","));
    for row in rows {
        let line: Vec<String> = row.iter().map(|c| csv_field(c)).collect();
        println!("{}", line.join(","));
    }
}

fn csv_field(value: &str) -> String {
    if value.contains([',', '"', '\n']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}
