//! Result documents and their three renderings.
//!
//! ```text
//! json   {"command": "...", "columns": [...], "rows": [[...], ...]}
//! csv    header line of column names, then one record per row
//! table  columns padded to a common width, a rule under the header
//! ```

use serde_json::{json, Value};
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Document {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Document { command: command.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        json!({ "command": self.command, "columns": self.columns, "rows": self.rows })
    }

    pub fn from_json(v: &Value) -> Option<Document> {
        let command = v.get("command")?.as_str()?.to_string();
        let columns = v.get("columns")?.as_array()?.iter().map(|c| c.as_str().map(String::from)).collect::<Option<_>>()?;
        let rows = v.get("rows")?.as_array()?.iter().map(|r| r.as_array().cloned()).collect::<Option<_>>()?;
        Some(Document { command, columns, rows })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns).expect("in-memory write");
                for r in &self.rows {
                    w.write_record(r.iter().map(cell)).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
            }
            Format::Table => {
                let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
                let width: Vec<usize> = (0..self.columns.len())
                    .map(|j| {
                        cells.iter().map(|r| r[j].chars().count()).chain([self.columns[j].chars().count()]).max().unwrap_or(0)
                    })
                    .collect();
                let line = |items: &[String]| {
                    let padded: Vec<String> =
                        items.iter().zip(&width).map(|(x, w)| format!("{x}{}", " ".repeat(w - x.chars().count()))).collect();
                    padded.join("  ").trim_end().to_string()
                };
                let mut s = String::new();
                let _ = writeln!(s, "{}", line(&self.columns));
                let _ = writeln!(s, "{}", width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
                for r in &cells {
                    let _ = writeln!(s, "{}", line(r));
                }
                s
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renderings() {
        let mut d = Document::new("demo", &["arity", "name"]);
        d.push(vec![json!(1), json!("a,b")]);
        d.push(vec![json!(12), json!("c")]);
        assert_eq!(d.render(Format::Csv), "arity,name\n1,\"a,b\"\n12,c\n");
        assert_eq!(d.render(Format::Table), "arity  name\n-----  ----\n1      a,b\n12     c\n");
        assert_eq!(Document::from_json(&d.to_json()), Some(d));
    }
}
