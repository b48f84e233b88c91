//! Records and their CSV / JSON rendering.

use serde_json::{Map, Number, Value};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => fmt_real(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            // the JSON number is the value of the printed CSV digits
            Cell::Real(v) => fmt_real(*v)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Twelve significant digits; positional for moderate exponents.
pub fn fmt_real(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return format!("{s}.0");
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Formula,
    Simulation,
    Oracle,
}

impl Provenance {
    fn as_str(self) -> &'static str {
        match self {
            Provenance::Formula => "formula",
            Provenance::Simulation => "simulation",
            Provenance::Oracle => "oracle",
        }
    }
}

/// One output row: the parameters that reproduce it and the values computed.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub kind: String,
    pub params: Vec<(String, Cell)>,
    pub values: Vec<(String, Cell)>,
    pub provenance: Provenance,
}

impl OutputRecord {
    pub fn new(kind: &str, provenance: Provenance) -> Self {
        OutputRecord { kind: kind.into(), params: Vec::new(), values: Vec::new(), provenance }
    }

    pub fn param(mut self, name: &str, v: impl Into<Cell>) -> Self {
        self.params.push((name.into(), v.into()));
        self
    }

    pub fn value(mut self, name: &str, v: impl Into<Cell>) -> Self {
        self.values.push((name.into(), v.into()));
        self
    }

    fn columns(&self) -> Vec<&str> {
        self.params.iter().chain(&self.values).map(|(k, _)| k.as_str()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn render(records: &[OutputRecord], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => render_csv(records),
        Format::Json => render_json(records),
    }
}

fn render_csv(records: &[OutputRecord]) -> Result<String, CliError> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    if let Some(first) = records.first() {
        let columns = first.columns();
        let mut header = vec!["kind"];
        header.extend(&columns);
        header.push("provenance");
        writer.write_record(&header)?;
        for r in records {
            if r.columns() != columns {
                return Err(CliError::Internal("records with differing columns".into()));
            }
            let mut row = vec![r.kind.clone()];
            row.extend(r.params.iter().chain(&r.values).map(|(_, v)| v.csv()));
            row.push(r.provenance.as_str().into());
            writer.write_record(&row)?;
        }
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

fn render_json(records: &[OutputRecord]) -> Result<String, CliError> {
    let rows: Vec<Value> = records
        .iter()
        .map(|r| {
            let section = |cells: &[(String, Cell)]| {
                Value::Object(cells.iter().map(|(k, v)| (k.clone(), v.json())).collect::<Map<_, _>>())
            };
            let mut obj = Map::new();
            obj.insert("kind".into(), Value::String(r.kind.clone()));
            obj.insert("params".into(), section(&r.params));
            obj.insert("values".into(), section(&r.values));
            obj.insert("provenance".into(), Value::String(r.provenance.as_str().into()));
            Value::Object(obj)
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&Value::Array(rows))
        .map_err(|e| CliError::Internal(e.to_string()))?;
    out.push('\n');
    Ok(out)
}
