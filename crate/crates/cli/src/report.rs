//! Command reports and their three renderings.

use std::fmt::Write as _;

use coopeuler::scalar::Scalar;
use coopeuler::Rational;
use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Num(Rational),
    Vector(Vec<Rational>),
    Bool(bool),
    Int(u64),
    Float(f64),
    Missing,
}

impl From<Rational> for Cell {
    fn from(q: Rational) -> Self {
        Cell::Num(q)
    }
}

impl From<&Rational> for Cell {
    fn from(q: &Rational) -> Self {
        Cell::Num(q.clone())
    }
}

impl From<Vec<Rational>> for Cell {
    fn from(v: Vec<Rational>) -> Self {
        Cell::Vector(v)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<u64> for Cell {
    fn from(k: u64) -> Self {
        Cell::Int(k)
    }
}

impl From<usize> for Cell {
    fn from(k: usize) -> Self {
        Cell::Int(k as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => json!(s),
            Cell::Num(q) => json!(q.to_string()),
            Cell::Vector(v) => Value::Array(v.iter().map(|q| json!(q.to_string())).collect()),
            Cell::Bool(b) => json!(b),
            Cell::Int(k) => json!(k),
            Cell::Float(x) => json!(x),
            Cell::Missing => Value::Null,
        }
    }

    fn to_text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(q) => q.to_string(),
            Cell::Vector(v) => format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")),
            Cell::Bool(b) => b.to_string(),
            Cell::Int(k) => k.to_string(),
            Cell::Float(x) => format!("{x:.6}"),
            Cell::Missing => "-".to_string(),
        }
    }

    fn approximation(&self) -> Option<Cell> {
        match self {
            Cell::Num(q) => Some(Cell::Float(q.to_f64_lossy())),
            Cell::Vector(v) => Some(Cell::Text(
                v.iter().map(|q| format!("{:.6}", q.to_f64_lossy())).collect::<Vec<_>>().join(" "),
            )),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub fields: Vec<(String, Cell)>,
    pub tables: Vec<Table>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), fields: Vec::new(), tables: Vec::new() }
    }

    pub fn field(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn table(&mut self, t: Table) -> &mut Self {
        self.tables.push(t);
        self
    }

    /// Add a `<name>_approx` companion after every numeric field and column.
    pub fn with_approximations(mut self) -> Self {
        let mut fields = Vec::new();
        for (k, v) in self.fields {
            let approx = v.approximation();
            fields.push((k.clone(), v));
            if let Some(a) = approx {
                fields.push((format!("{k}_approx"), a));
            }
        }
        self.fields = fields;
        for t in &mut self.tables {
            let numeric: Vec<bool> = (0..t.columns.len())
                .map(|c| t.rows.iter().any(|r| r[c].approximation().is_some()))
                .collect();
            let mut columns = Vec::new();
            for (c, name) in t.columns.iter().enumerate() {
                columns.push(name.clone());
                if numeric[c] {
                    columns.push(format!("{name}_approx"));
                }
            }
            for row in &mut t.rows {
                let mut out = Vec::new();
                for (c, cell) in row.drain(..).enumerate() {
                    let approx = cell.approximation();
                    out.push(cell);
                    if numeric[c] {
                        out.push(approx.unwrap_or(Cell::Missing));
                    }
                }
                *row = out;
            }
            t.columns = columns;
        }
        self
    }

    pub fn to_json(&self) -> Value {
        let fields: Map<String, Value> = self.fields.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        let tables: Map<String, Value> = self
            .tables
            .iter()
            .map(|t| {
                let rows = t
                    .rows
                    .iter()
                    .map(|r| Value::Object(t.columns.iter().cloned().zip(r.iter().map(Cell::to_json)).collect()))
                    .collect();
                (t.name.clone(), Value::Array(rows))
            })
            .collect();
        json!({ "command": self.command, "fields": fields, "tables": tables })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.fields {
            let _ = writeln!(out, "{k:<width$}  {}", v.to_text());
        }
        for t in &self.tables {
            if !out.is_empty() {
                out.push('\n');
            }
            let _ = writeln!(out, "[{}]", t.name);
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Cell::to_text).collect()).collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|c| cells.iter().map(|r| r[c].chars().count()).chain([t.columns[c].len()]).max().unwrap_or(0))
                .collect();
            let line = |items: &[String]| {
                items
                    .iter()
                    .zip(&widths)
                    .map(|(s, &w)| format!("{s:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let _ = writeln!(out, "{}", line(&t.columns));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r));
            }
        }
        out
    }

    /// Tables as CSV blocks; scalar fields become leading `#` comments.
    fn render_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            let _ = writeln!(out, "# {k}: {}", v.to_text());
        }
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            if self.tables.len() > 1 {
                let _ = writeln!(out, "# {}", t.name);
            }
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            w.write_record(&t.columns).expect("in-memory write");
            for r in &t.rows {
                let cells: Vec<String> = r
                    .iter()
                    .map(|c| match c {
                        Cell::Vector(v) => v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                        Cell::Missing => String::new(),
                        other => other.to_text(),
                    })
                    .collect();
                w.write_record(&cells).expect("in-memory write");
            }
            out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn sample() -> Report {
        let mut r = Report::new("demo");
        r.field("value", q(1, 3)).field("singleton", true);
        let mut t = Table::new("gaps", &["k", "E_k"]);
        t.row(vec![1u64.into(), q(1, 1).into()]);
        t.row(vec!["inf".into(), q(-2, 4).into()]);
        r.table(t);
        r
    }

    #[test]
    fn json_keeps_exact_strings_and_order() {
        let v = sample().to_json();
        assert_eq!(v["fields"]["value"], "1/3");
        assert_eq!(v["tables"]["gaps"][1]["E_k"], "-1/2");
        let keys: Vec<&String> = v["fields"].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["value", "singleton"]);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let s = sample().render(Format::Csv);
        assert_eq!(s, "# value: 1/3\n# singleton: true\nk,E_k\n1,1\ninf,-1/2\n");
    }

    #[test]
    fn approximations_sit_next_to_numbers() {
        let r = sample().with_approximations();
        assert_eq!(r.tables[0].columns, ["k", "E_k", "E_k_approx"]);
        assert_eq!(r.fields[1].0, "value_approx");
    }
}
