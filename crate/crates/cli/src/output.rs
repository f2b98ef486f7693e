//! JSON, CSV and plain-table emission.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::{ConfigEcho, Format};
use crate::CliError;

/// Top-level JSON artifact.
#[derive(Serialize)]
pub struct Report<R: Serialize, S: Serialize> {
    pub config: ConfigEcho,
    pub results: R,
    pub summary: S,
}

/// Flat view of the results used for CSV and table output.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

fn to_csv(t: &Table) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&t.header).map_err(io_err)?;
    for r in &t.rows {
        w.write_record(r).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn to_text(t: &Table) -> String {
    let mut widths: Vec<usize> = t.header.iter().map(|h| h.chars().count()).collect();
    for r in &t.rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(t.header.clone());
    for r in &t.rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

fn io_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

pub fn emit<R: Serialize, S: Serialize>(
    format: Format,
    out: Option<&Path>,
    report: &Report<R, S>,
    table: &Table,
) -> Result<(), CliError> {
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => to_csv(table)?,
        Format::Table => to_text(table),
    };
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_and_terminates_with_newline() {
        let t = Table { header: vec!["param", "value"], rows: vec![vec!["a,b".into(), "1".into()]] };
        assert_eq!(to_csv(&t).unwrap(), "param,value\n\"a,b\",1\n");
    }

    #[test]
    fn table_aligns_columns() {
        let t = Table { header: vec!["k", "value"], rows: vec![vec!["long".into(), "1".into()]] };
        assert_eq!(to_text(&t), "k     value\nlong  1\n");
    }
}
