use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{validate_series, Component, Sample, TimeSeries};

/// Floats print with 17 significant digits, which round-trips every `f64`.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => format_float(*f),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    /// Panics when the row width differs from the header; rows are built
    /// by code, never from input.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    /// Comma separated with a header line.
    #[default]
    Delimited,
    /// `key = value` lines, one blank-line separated block per row.
    Structured,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" | "delimited" => Ok(OutputFormat::Delimited),
            "text" | "structured" => Ok(OutputFormat::Structured),
            other => Err(Error::InvalidConfig(format!("unknown output format `{other}`"))),
        }
    }
}

fn csv_line<'a>(fields: impl IntoIterator<Item = &'a str>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(fields).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8 input")
}

pub fn write_results(table: &Table, format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Delimited => {
            out.push_str(&csv_line(table.columns.iter().map(String::as_str)));
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::render).collect();
                out.push_str(&csv_line(cells.iter().map(String::as_str)));
            }
        }
        OutputFormat::Structured => {
            for (i, row) in table.rows.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                for (k, v) in table.columns.iter().zip(row) {
                    let _ = writeln!(out, "{k} = {}", v.render());
                }
            }
        }
    }
    out
}

/// Canonical series file: `# key=value` metadata lines, then
/// `epoch_s,value_m,sigma_m` rows with epochs relative to `origin_s`.
pub fn write_series_csv(series: &TimeSeries) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# station={}", series.station_id);
    let _ = writeln!(out, "# component={}", series.component);
    let _ = writeln!(out, "# origin_s={}", format_float(series.origin));
    let _ = writeln!(out, "# sampling_interval_s={}", format_float(series.sampling_interval));
    out.push_str("epoch_s,value_m,sigma_m\n");
    for s in &series.samples {
        let sigma = s.sigma.map(format_float).unwrap_or_default();
        let _ = writeln!(out, "{},{},{sigma}", format_float(s.t), format_float(s.value));
    }
    out
}

pub fn read_series_csv(text: &str) -> Result<TimeSeries> {
    let mut station = None;
    let mut component = None;
    let mut origin = 0.0;
    let mut interval = None;
    for (i, raw) in text.lines().enumerate() {
        let Some(meta) = raw.trim().strip_prefix('#') else { continue };
        let Some((k, v)) = meta.trim().split_once('=') else { continue };
        let v = v.trim();
        let num = || {
            v.parse::<f64>().map_err(|_| Error::MalformedLine { line: i + 1, reason: format!("{k}: `{v}`") })
        };
        match k.trim() {
            "station" => station = Some(v.to_string()),
            "component" => component = Some(v.parse::<Component>()?),
            "origin_s" => origin = num()?,
            "sampling_interval_s" => interval = Some(num()?),
            _ => {}
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::UnknownFormat(e.to_string()))?;
    if header.iter().collect::<Vec<_>>() != ["epoch_s", "value_m", "sigma_m"] {
        return Err(Error::UnknownFormat("missing epoch_s,value_m,sigma_m header".into()));
    }
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::MalformedLine {
            line: e.position().map_or(0, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let num = |s: &str, what: &str| {
            s.parse::<f64>().map_err(|_| Error::MalformedLine { line, reason: format!("{what}: `{s}`") })
        };
        let sigma = match &record[2] {
            "" => None,
            s => Some(num(s, "sigma")?),
        };
        samples.push(Sample { t: num(&record[0], "epoch")?, value: num(&record[1], "value")?, sigma });
    }
    let times: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let dt = interval.or_else(|| super::median_spacing(&times)).unwrap_or(1.0);
    let mut ts = TimeSeries::new(
        station.unwrap_or_else(|| "STA".into()),
        component.unwrap_or(Component::U),
        samples,
        dt,
    );
    ts.origin = origin;
    validate_series(ts)
}
