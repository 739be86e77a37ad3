//! Result tables and their CSV and plot-data renderings.

use std::fmt::{self, Write as _};
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Significant digits written for real values.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::Num(x as f64)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Num(x as f64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(x) => f.write_str(&format_real(*x)),
            Value::Text(s) => f.write_str(s),
        }
    }
}

/// Named columns, rows of values and free-form metadata lines.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub metadata: Vec<String>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.as_ref().to_string()).collect(),
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn push_nums(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&x| Value::Num(x)).collect());
    }

    pub fn with_metadata(mut self, line: impl Into<String>) -> Self {
        self.metadata.push(line.into());
        self
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric column by name; text cells read as NaN.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match &r[i] {
                    Value::Num(x) => *x,
                    Value::Text(_) => f64::NAN,
                })
                .collect(),
        )
    }

    pub fn get(&self, row: usize, name: &str) -> Option<f64> {
        self.column(name)?.get(row).copied()
    }
}

/// `%g`-style rendering with [`SIGNIFICANT_DIGITS`] significant digits.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let p = SIGNIFICANT_DIGITS;
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= p as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn render(table: &Table, plot: bool) -> Result<String> {
    if table.columns.is_empty() {
        return Err(Error::InvalidSpec("table has no columns".into()));
    }
    let mut out = String::new();
    for line in &table.metadata {
        writeln!(out, "# {line}").expect("writing to a String");
    }
    let sep = if plot { " " } else { "," };
    if plot {
        out.push_str("# ");
    }
    out.push_str(&table.columns.join(sep));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|v| match v {
                Value::Text(s) if plot => s.replace(char::is_whitespace, "_"),
                v => v.to_string(),
            })
            .collect();
        out.push_str(&cells.join(sep));
        out.push('\n');
    }
    Ok(out)
}

/// Metadata as `#` lines, then a header row and one line per row.
pub fn to_csv(table: &Table) -> Result<String> {
    render(table, false)
}

/// Whitespace-separated columns under a `#` header, as read by gnuplot.
pub fn to_plot_data(table: &Table) -> Result<String> {
    render(table, true)
}

fn write_to(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Writes CSV to `path`, or to stdout when `path` is `None`.
pub fn emit_csv(table: &Table, path: Option<&Path>) -> Result<()> {
    write_to(path, &to_csv(table)?)
}

pub fn emit_plot_data(table: &Table, path: Option<&Path>) -> Result<()> {
    write_to(path, &to_plot_data(table)?)
}

/// Reads back CSV written by [`to_csv`], skipping `#` lines.
pub fn parse_csv(text: &str) -> Result<Table> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::InvalidSpec("missing header".into()))?;
    let mut table = Table::new(&header.split(',').collect::<Vec<_>>());
    for line in lines {
        let row: Vec<Value> = line
            .split(',')
            .map(|c| c.parse::<f64>().map(Value::Num).unwrap_or_else(|_| Value::Text(c.to_string())))
            .collect();
        if row.len() != table.columns.len() {
            return Err(Error::InvalidSpec(format!("ragged row: {line}")));
        }
        table.rows.push(row);
    }
    Ok(table)
}
