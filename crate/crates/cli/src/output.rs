use crate::args::Format;
use serde_json::{Map, Value};
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

/// Rows of string cells under a fixed header; the JSON form maps headers to typed values.
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub table: Table,
    /// Extra JSON-only payload, merged at top level.
    pub extra: Map<String, Value>,
    /// Wall time, printed only with the timestamp line.
    pub wall_time_s: Option<f64>,
    pub ok: bool,
}

impl Report {
    pub fn new(command: &'static str, config: Value, table: Table) -> Self {
        Self { command, config, table, extra: Map::new(), wall_time_s: None, ok: true }
    }
}

pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        other => other.to_string(),
    }
}

fn timestamp_line(report: &Report) -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    match report.wall_time_s {
        Some(w) => format!("generated_unix={secs} wall_time_s={w:.3}"),
        None => format!("generated_unix={secs}"),
    }
}

pub fn render(report: &Report, format: Format, timestamp: bool) -> std::io::Result<String> {
    let mut buf: Vec<u8> = Vec::new();
    match format {
        Format::Csv => {
            if timestamp {
                writeln!(buf, "# {}", timestamp_line(report))?;
            }
            writeln!(buf, "# {} {}", report.command, report.config)?;
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&report.table.columns)?;
            for row in &report.table.rows {
                w.write_record(row.iter().map(cell))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut top = Map::new();
            top.insert("command".into(), report.command.into());
            top.insert("config".into(), report.config.clone());
            let rows: Vec<Value> = report
                .table
                .rows
                .iter()
                .map(|r| Value::Object(report.table.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
                .collect();
            top.insert("rows".into(), Value::Array(rows));
            for (k, v) in &report.extra {
                top.insert(k.clone(), v.clone());
            }
            top.insert("ok".into(), report.ok.into());
            if timestamp {
                top.insert("generated".into(), timestamp_line(report).into());
            }
            serde_json::to_writer_pretty(&mut buf, &Value::Object(top))?;
            writeln!(buf)?;
        }
        Format::Pretty => {
            if timestamp {
                writeln!(buf, "{}", timestamp_line(report))?;
            }
            writeln!(buf, "{} {}", report.command, report.config)?;
            let cells: Vec<Vec<String>> = report.table.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
            let widths: Vec<usize> = (0..report.table.columns.len())
                .map(|i| cells.iter().map(|r| r[i].len()).chain([report.table.columns[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |items: Vec<&str>| -> String {
                items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
            };
            writeln!(buf, "{}", line(report.table.columns.clone()))?;
            for r in &cells {
                writeln!(buf, "{}", line(r.iter().map(String::as_str).collect()))?;
            }
            if !report.ok {
                writeln!(buf, "FAILED")?;
            }
        }
    }
    Ok(String::from_utf8(buf).expect("utf-8 output"))
}
