//! Reading series files and writing result tables.

mod delimited;
mod ngl;
mod results;

pub use delimited::{parse_delimited, ComponentColumns, Delimiter, EpochUnit, SeriesFileSchema};
pub use ngl::{ngl_schema, parse_ngl};
pub use results::{read_series_csv, write_results, write_series_csv, Cell, OutputFormat, Table};

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Parses `key = value` lines. Blank lines and lines starting with `#` are
/// ignored; a later key overrides an earlier one.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::MalformedLine {
            line: i + 1,
            reason: "expected key = value".into(),
        })?;
        let k = k.trim();
        if k.is_empty() {
            return Err(Error::MalformedLine { line: i + 1, reason: "empty key".into() });
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Median spacing of consecutive epochs, or `None` for fewer than two.
pub(crate) fn median_spacing(times: &[f64]) -> Option<f64> {
    let mut d: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    if d.is_empty() {
        return None;
    }
    d.sort_by(f64::total_cmp);
    Some(d[d.len() / 2])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_values() {
        let kv = parse_key_values("# c\n n = 30\n\nthreshold=0.03\nn=40\n").unwrap();
        assert_eq!(kv["n"], "40");
        assert_eq!(kv["threshold"], "0.03");
        assert!(matches!(parse_key_values("a=1\nbogus\n"), Err(Error::MalformedLine { line: 2, .. })));
    }

    #[test]
    fn spacing() {
        assert_eq!(median_spacing(&[0.0, 1.0, 2.0, 10.0]), Some(1.0));
        assert_eq!(median_spacing(&[5.0]), None);
    }
}
