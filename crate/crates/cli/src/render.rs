use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// A command result in all three output formats.
#[derive(Debug, Clone)]
pub struct Output {
    pub json: Value,
    pub table: String,
    pub csv: String,
}

impl Output {
    /// A flat record: aligned `key  value` lines, a two-line CSV, and the
    /// JSON object with keys in the given order.
    pub fn record(fields: Vec<(&str, Value)>) -> Self {
        let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut table = String::new();
        for (k, v) in &fields {
            table.push_str(&format!("{k:<width$}  {}\n", plain(v)));
        }
        let header: Vec<String> = fields.iter().map(|(k, _)| csv_cell(k)).collect();
        let row: Vec<String> = fields.iter().map(|(_, v)| csv_cell(&plain(v))).collect();
        let csv = format!("{}\n{}\n", header.join(","), row.join(","));
        let json = Value::Object(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>());
        Output { json, table, csv }
    }

    /// A record whose JSON form is replaced by a richer document.
    pub fn with_json(mut self, json: Value) -> Self {
        self.json = json;
        self
    }

    pub fn with_table(mut self, table: String) -> Self {
        self.table = table;
        self
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = csv;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.table.clone(),
            Format::Json => format!("{}\n", self.json),
            Format::Csv => self.csv.clone(),
        }
    }
}

/// Strings without quotes, everything else as compact JSON.
pub fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

pub fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
