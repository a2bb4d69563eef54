//! Result tables shared by the experiment runner, the acceptance harness
//! and the benches.

use crate::error::{FvcError, Result};
use serde_json::{Map, Number, Value};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Real(f64),
    Int(i64),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Real(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Text(_) => None,
        }
    }

    // 17 significant digits: byte-stable and exact on re-read
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Real(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
        }
    }

    fn parse(s: &str) -> Cell {
        if let Ok(i) = s.parse::<i64>() {
            Cell::Int(i)
        } else if let Ok(v) = s.parse::<f64>() {
            Cell::Real(v)
        } else {
            Cell::Text(s.to_string())
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(v) => Value::Number((*v).into()),
            Cell::Real(v) => Number::from_f64(*v).map(Value::Number).unwrap_or_else(|| Value::String(v.to_string())),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// A rectangular table with a unique header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Result<Self> {
        let columns: Vec<String> = columns.into_iter().map(Into::into).collect();
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].contains(c) {
                return Err(FvcError::Table(format!("duplicate column `{c}`")));
            }
        }
        Ok(ResultTable { columns, rows: Vec::new() })
    }

    pub fn push_row(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(FvcError::Table(format!("row has {} cells, header has {}", row.len(), self.columns.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn get(&self, row: usize, name: &str) -> Option<&Cell> {
        self.column(name).and_then(|c| self.rows.get(row).map(|r| &r[c]))
    }

    /// Appends the rows of `other`, which must have the same header.
    pub fn extend(&mut self, other: ResultTable) -> Result<()> {
        if other.columns != self.columns {
            return Err(FvcError::Table("headers differ".into()));
        }
        self.rows.extend(other.rows);
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        out.write_record(&self.columns).map_err(csv_err)?;
        for r in &self.rows {
            out.write_record(r.iter().map(Cell::render)).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        let header: Vec<String> = rd.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
        let mut t = ResultTable::new(header)?;
        for rec in rd.records() {
            t.push_row(rec.map_err(csv_err)?.iter().map(Cell::parse).collect())?;
        }
        Ok(t)
    }

    /// JSON array of objects, keys sorted.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::to_json)).collect::<Map<_, _>>())
                })
                .collect(),
        )
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, &self.to_json()).map_err(|e| FvcError::Io(e.to_string()))?;
        writeln!(w)?;
        Ok(())
    }

    pub fn write<W: Write>(&self, w: W, format: Format) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
        }
    }
}

fn csv_err(e: csv::Error) -> FvcError {
    FvcError::Io(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = FvcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(FvcError::Parameter(format!("unknown format `{s}`, expected csv or json"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Writes `table` to `path` in `format`.
pub fn emit(table: &ResultTable, format: Format, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    table.write(&mut f, format)?;
    f.flush()?;
    Ok(())
}

/// Least-squares slope of `ln r` against `ln h`.
pub fn fitted_order(h: &[f64], r: &[f64]) -> Result<f64> {
    if h.len() != r.len() {
        return Err(FvcError::Parameter("step and residual lists differ in length".into()));
    }
    if h.len() < 3 {
        return Err(FvcError::InsufficientRows { got: h.len(), min: 3 });
    }
    if h.iter().chain(r).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(FvcError::Precondition("steps and residuals must be positive".into()));
    }
    let xs: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = r.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FvcError::Precondition("all rows share one grid".into()));
    }
    Ok(sxy / sxx)
}

fn grid_size(c: &Cell) -> Option<f64> {
    match c {
        Cell::Text(s) => s.split('x').next().and_then(|v| v.parse::<f64>().ok()),
        other => other.as_f64(),
    }
}

/// Empirical order from a table with a `residual` column and either an `h`
/// column or a `grid` column (node count, `h = 1 / (grid - 1)`; for labels
/// like `12x12x12` the first size is used).
pub fn convergence_order(table: &ResultTable) -> Result<f64> {
    if table.len() < 3 {
        return Err(FvcError::InsufficientRows { got: table.len(), min: 3 });
    }
    let rc = table.column("residual").ok_or_else(|| FvcError::Table("no `residual` column".into()))?;
    let (hc, from_grid) = match table.column("h") {
        Some(c) => (c, false),
        None => (table.column("grid").ok_or_else(|| FvcError::Table("no `h` or `grid` column".into()))?, true),
    };
    let mut h = Vec::new();
    let mut r = Vec::new();
    for row in table.rows() {
        let hv = if from_grid { grid_size(&row[hc]).map(|m| 1.0 / (m - 1.0)) } else { row[hc].as_f64() };
        h.push(hv.ok_or_else(|| FvcError::Table("non-numeric step".into()))?);
        r.push(row[rc].as_f64().ok_or_else(|| FvcError::Table("non-numeric residual".into()))?.abs());
    }
    fitted_order(&h, &r)
}
