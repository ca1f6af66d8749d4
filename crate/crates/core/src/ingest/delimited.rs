use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::{median_spacing, parse_key_values};
use crate::error::{Error, Result};
use crate::model::{validate_series, Component, Sample, TimeSeries};

const SECONDS_PER_DAY: f64 = 86_400.0;
const SECONDS_PER_YEAR: f64 = 365.25 * SECONDS_PER_DAY;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpochUnit {
    /// Julian years of 365.25 days.
    DecimalYear,
    /// Modified Julian Date, 86400 s per day.
    Mjd,
    Seconds,
}

impl EpochUnit {
    pub fn to_seconds(self, v: f64) -> f64 {
        match self {
            EpochUnit::DecimalYear => v * SECONDS_PER_YEAR,
            EpochUnit::Mjd => v * SECONDS_PER_DAY,
            EpochUnit::Seconds => v,
        }
    }
}

impl FromStr for EpochUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "decimal_year" | "decyear" | "year" => Ok(EpochUnit::DecimalYear),
            "mjd" => Ok(EpochUnit::Mjd),
            "seconds" | "s" => Ok(EpochUnit::Seconds),
            other => Err(Error::SchemaMismatch(format!("unknown epoch unit `{other}`"))),
        }
    }
}

impl fmt::Display for EpochUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpochUnit::DecimalYear => "decimal_year",
            EpochUnit::Mjd => "mjd",
            EpochUnit::Seconds => "seconds",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delimiter {
    Char(char),
    /// Any run of whitespace.
    Whitespace,
}

impl FromStr for Delimiter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "whitespace" | "space" => Ok(Delimiter::Whitespace),
            "tab" | "\\t" => Ok(Delimiter::Char('\t')),
            "comma" => Ok(Delimiter::Char(',')),
            "semicolon" => Ok(Delimiter::Char(';')),
            _ => {
                let mut chars = s.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => Ok(Delimiter::Char(c)),
                    _ => Err(Error::SchemaMismatch(format!("bad delimiter `{s}`"))),
                }
            }
        }
    }
}

/// Zero-based columns for one coordinate component. `offset`, when given,
/// is added to `value` (NGL splits coordinates into an integer part and a
/// fractional part).
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentColumns {
    pub component: Component,
    pub value: usize,
    pub offset: Option<usize>,
    pub sigma: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFileSchema {
    pub delimiter: Delimiter,
    pub header_lines: usize,
    pub epoch_col: usize,
    pub epoch_unit: EpochUnit,
    /// Column holding the station name; `station_id` is used when absent.
    pub station_col: Option<usize>,
    pub station_id: String,
    pub components: Vec<ComponentColumns>,
    /// Nominal spacing in seconds; the median epoch spacing when absent.
    pub sampling_interval: Option<f64>,
}

impl SeriesFileSchema {
    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::SchemaMismatch("no components".into()));
        }
        let mut seen = BTreeSet::new();
        let mut use_col = |c: usize| {
            if seen.insert(c) {
                Ok(())
            } else {
                Err(Error::SchemaMismatch(format!("column {c} used twice")))
            }
        };
        use_col(self.epoch_col)?;
        if let Some(c) = self.station_col {
            use_col(c)?;
        }
        for cc in &self.components {
            use_col(cc.value)?;
            if let Some(c) = cc.offset {
                use_col(c)?;
            }
            if let Some(c) = cc.sigma {
                use_col(c)?;
            }
        }
        let comps: BTreeSet<&str> = self.components.iter().map(|c| c.component.as_str()).collect();
        if comps.len() != self.components.len() {
            return Err(Error::SchemaMismatch("component listed twice".into()));
        }
        if let Some(dt) = self.sampling_interval {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::SchemaMismatch(format!("sampling interval {dt}")));
            }
        }
        Ok(())
    }

    fn max_col(&self) -> usize {
        let mut m = self.epoch_col;
        if let Some(c) = self.station_col {
            m = m.max(c);
        }
        for cc in &self.components {
            m = m.max(cc.value);
            m = m.max(cc.offset.unwrap_or(0));
            m = m.max(cc.sigma.unwrap_or(0));
        }
        m
    }

    /// Reads a key-value sidecar:
    ///
    /// ```text
    /// delimiter = ,
    /// header_lines = 1
    /// epoch_col = 0
    /// epoch_unit = seconds
    /// station = TSKB
    /// E.value = 1
    /// E.sigma = 2
    /// ```
    pub fn from_key_values(text: &str) -> Result<Self> {
        let kv = parse_key_values(text)?;
        let col = |key: &str| -> Result<Option<usize>> {
            kv.get(key)
                .map(|v| {
                    v.parse::<usize>()
                        .map_err(|_| Error::SchemaMismatch(format!("{key}: not a column index `{v}`")))
                })
                .transpose()
        };
        let mut components = Vec::new();
        for c in [Component::X, Component::Y, Component::Z, Component::E, Component::N, Component::U] {
            let name = c.as_str();
            if let Some(value) = col(&format!("{name}.value"))? {
                components.push(ComponentColumns {
                    component: c,
                    value,
                    offset: col(&format!("{name}.offset"))?,
                    sigma: col(&format!("{name}.sigma"))?,
                });
            }
        }
        for key in kv.keys() {
            let known = matches!(
                key.as_str(),
                "delimiter" | "header_lines" | "epoch_col" | "epoch_unit" | "station" | "station_col"
                    | "sampling_interval"
            ) || key
                .split_once('.')
                .is_some_and(|(c, f)| c.parse::<Component>().is_ok() && matches!(f, "value" | "offset" | "sigma"));
            if !known {
                return Err(Error::SchemaMismatch(format!("unknown key `{key}`")));
            }
        }
        let schema = SeriesFileSchema {
            delimiter: kv.get("delimiter").map_or(Ok(Delimiter::Char(',')), |d| d.parse())?,
            header_lines: kv
                .get("header_lines")
                .map_or(Ok(0), |v| v.parse().map_err(|_| Error::SchemaMismatch(format!("header_lines `{v}`"))))?,
            epoch_col: col("epoch_col")?.unwrap_or(0),
            epoch_unit: kv.get("epoch_unit").map_or(Ok(EpochUnit::Seconds), |v| v.parse())?,
            station_col: col("station_col")?,
            station_id: kv.get("station").cloned().unwrap_or_else(|| "STA".into()),
            components,
            sampling_interval: kv
                .get("sampling_interval")
                .map(|v| v.parse().map_err(|_| Error::SchemaMismatch(format!("sampling_interval `{v}`"))))
                .transpose()?,
        };
        schema.validate()?;
        Ok(schema)
    }
}

fn number(field: &str, line: usize, what: &str) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| Error::MalformedLine { line, reason: format!("{what}: not a number `{field}`") })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::MalformedLine { line, reason: format!("{what}: not finite") })
    }
}

pub(super) struct Row {
    pub station: String,
    pub epoch: f64,
    pub values: Vec<(f64, Option<f64>)>,
}

/// Parses a delimited file per `schema`. Returns one series per component
/// and station, in order of first appearance, with epochs relative to each
/// station's first epoch.
pub fn parse_delimited(text: &str, schema: &SeriesFileSchema) -> Result<Vec<TimeSeries>> {
    schema.validate()?;
    let width = schema.max_col() + 1;
    let mut rows: Vec<Row> = Vec::new();
    let mut push = |line: usize, fields: &[&str]| -> Result<()> {
        if fields.len() < width {
            return Err(Error::SchemaMismatch(format!(
                "line {line}: {} fields, schema needs {width}",
                fields.len()
            )));
        }
        rows.push(parse_row(fields, line, schema)?);
        Ok(())
    };
    match schema.delimiter {
        Delimiter::Whitespace => {
            for (i, raw) in text.lines().enumerate().skip(schema.header_lines) {
                let l = raw.trim();
                if l.is_empty() || l.starts_with('#') {
                    continue;
                }
                let fields: Vec<&str> = l.split_whitespace().collect();
                push(i + 1, &fields)?;
            }
        }
        Delimiter::Char(c) => {
            let byte = u8::try_from(c)
                .ok()
                .filter(u8::is_ascii)
                .ok_or_else(|| Error::SchemaMismatch(format!("delimiter `{c}` is not ASCII")))?;
            // Byte offset just past the header lines.
            let skip: usize = text.split_inclusive('\n').take(schema.header_lines).map(str::len).sum();
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(false)
                .delimiter(byte)
                .flexible(true)
                .comment(Some(b'#'))
                .trim(csv::Trim::All)
                .from_reader(&text.as_bytes()[skip..]);
            for record in reader.records() {
                let record = record.map_err(|e| Error::MalformedLine {
                    line: schema.header_lines + e.position().map_or(0, |p| p.line() as usize),
                    reason: e.to_string(),
                })?;
                let line = schema.header_lines + record.position().map_or(0, |p| p.line() as usize);
                if record.iter().all(str::is_empty) {
                    continue;
                }
                let fields: Vec<&str> = record.iter().collect();
                push(line, &fields)?;
            }
        }
    }
    build_series(rows, &schema.components, schema.sampling_interval)
}

fn parse_row(fields: &[&str], line: usize, schema: &SeriesFileSchema) -> Result<Row> {
    let epoch = schema.epoch_unit.to_seconds(number(fields[schema.epoch_col], line, "epoch")?);
    let station = schema.station_col.map_or_else(|| schema.station_id.clone(), |c| fields[c].to_string());
    let values = schema
        .components
        .iter()
        .map(|cc| {
            let name = cc.component.as_str();
            let mut v = number(fields[cc.value], line, name)?;
            if let Some(c) = cc.offset {
                v += number(fields[c], line, name)?;
            }
            let s = cc.sigma.map(|c| number(fields[c], line, name)).transpose()?;
            Ok((v, s))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Row { station, epoch, values })
}

pub(super) fn build_series(
    rows: Vec<Row>,
    components: &[ComponentColumns],
    sampling_interval: Option<f64>,
) -> Result<Vec<TimeSeries>> {
    let mut stations: Vec<String> = Vec::new();
    for r in &rows {
        if !stations.contains(&r.station) {
            stations.push(r.station.clone());
        }
    }
    let mut out = Vec::new();
    for st in &stations {
        let mine: Vec<&Row> = rows.iter().filter(|r| &r.station == st).collect();
        let origin = mine[0].epoch;
        let times: Vec<f64> = mine.iter().map(|r| r.epoch - origin).collect();
        let dt = sampling_interval.or_else(|| median_spacing(&times)).filter(|d| *d > 0.0).unwrap_or(1.0);
        for (k, cc) in components.iter().enumerate() {
            let samples = mine
                .iter()
                .zip(&times)
                .map(|(r, &t)| {
                    let (v, s) = r.values[k];
                    Sample { t, value: v, sigma: s }
                })
                .collect();
            let mut ts = TimeSeries::new(st.clone(), cc.component, samples, dt);
            ts.origin = origin;
            out.push(validate_series(ts)?);
        }
    }
    if out.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(out)
}
