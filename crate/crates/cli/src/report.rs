//! Tabular reports and their three renderings.
//!
//! A report is a list of `meta` entries (config echo), a list of `summary`
//! entries and one table. Every format carries exactly the same cells.
//! Arbitrary-size numbers are always carried as decimal strings.

use std::fmt::Write as _;

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Plain,
    Json,
    Csv,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Plain => "plain",
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    /// Small non-negative index such as `n` or `k`.
    Index(i64),
    /// Exact or decimal-rendered number, kept as text.
    Num(String),
    Text(String),
    Bool(bool),
    Missing,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Index(v) => v.to_string(),
            Cell::Num(s) | Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Index(v) => Value::from(*v),
            Cell::Num(s) | Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Missing => Value::Null,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub meta: Vec<(String, Cell)>,
    pub summary: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(columns: &[&str]) -> Self {
        Report {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn meta(&mut self, key: &str, value: Cell) -> &mut Self {
        self.meta.push((key.to_string(), value));
        self
    }

    pub fn summary(&mut self, key: &str, value: Cell) -> &mut Self {
        self.summary.push((key.to_string(), value));
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Plain => self.render_plain(),
            OutputFormat::Json => self.render_json(),
            OutputFormat::Csv => self.render_csv(),
        }
    }

    fn render_plain(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.meta.iter().chain(&self.summary) {
            let _ = writeln!(out, "{k}: {}", v.text());
        }
        if !self.columns.is_empty() {
            if !out.is_empty() {
                out.push('\n');
            }
            let cells: Vec<Vec<String>> = self
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::text).collect())
                .collect();
            let widths: Vec<usize> = self
                .columns
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    cells
                        .iter()
                        .map(|r| r[i].len())
                        .chain([c.len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |fields: &[String]| {
                let padded: Vec<String> = fields
                    .iter()
                    .zip(&widths)
                    .map(|(f, w)| format!("{f:>w$}"))
                    .collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(out, "{}", line(&self.columns));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r));
            }
        }
        out
    }

    fn render_json(&self) -> String {
        let object = |entries: &[(String, Cell)]| {
            Value::Object(
                entries
                    .iter()
                    .map(|(k, v)| (k.clone(), v.json()))
                    .collect::<Map<_, _>>(),
            )
        };
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .cloned()
                        .zip(r.iter().map(Cell::json))
                        .collect::<Map<_, _>>(),
                )
            })
            .collect();
        let mut top = Map::new();
        top.insert("meta".into(), object(&self.meta));
        top.insert("summary".into(), object(&self.summary));
        top.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("JSON encoding");
        s.push('\n');
        s
    }

    /// Meta and summary entries become `# key=value` comment lines ahead of
    /// the header row.
    fn render_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.meta.iter().chain(&self.summary) {
            let _ = writeln!(out, "# {k}={}", v.text());
        }
        let _ = writeln!(
            out,
            "{}",
            self.columns
                .iter()
                .map(|c| csv_field(c))
                .collect::<Vec<_>>()
                .join(",")
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}",
                r.iter()
                    .map(|c| csv_field(&c.text()))
                    .collect::<Vec<_>>()
                    .join(",")
            );
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
