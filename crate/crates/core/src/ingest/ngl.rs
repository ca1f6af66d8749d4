//! Nevada Geodetic Laboratory `tenv3` daily east/north/up files.
//!
//! Columns (whitespace separated): site, YYMMMDD, decimal year, MJD, GPS
//! week, day of week, reference longitude, east integer part, east
//! fraction, north integer part, north fraction, up integer part, up
//! fraction, antenna height, sigma east, sigma north, sigma up, three
//! correlations, latitude, longitude, height. Lengths in metres.

use super::delimited::{parse_delimited, ComponentColumns, Delimiter, EpochUnit, SeriesFileSchema};
use crate::error::{Error, Result};
use crate::model::{Component, TimeSeries};

const MIN_COLUMNS: usize = 17;

/// The schema used by [`parse_ngl`]. Epochs come from the MJD column.
pub fn ngl_schema() -> SeriesFileSchema {
    let cc = |component, offset, value, sigma| ComponentColumns {
        component,
        value,
        offset: Some(offset),
        sigma: Some(sigma),
    };
    SeriesFileSchema {
        delimiter: Delimiter::Whitespace,
        header_lines: 0,
        epoch_col: 3,
        epoch_unit: EpochUnit::Mjd,
        station_col: Some(0),
        station_id: String::new(),
        components: vec![
            cc(Component::E, 7, 8, 14),
            cc(Component::N, 9, 10, 15),
            cc(Component::U, 11, 12, 16),
        ],
        sampling_interval: Some(86_400.0),
    }
}

fn is_header(line: &str) -> bool {
    line.split_whitespace().next().is_some_and(|w| w.eq_ignore_ascii_case("site"))
}

/// `YYMMMDD`, e.g. `10JAN01`.
fn looks_like_date(field: &str) -> bool {
    let b = field.as_bytes();
    b.len() == 7
        && b[..2].iter().all(u8::is_ascii_digit)
        && b[2..5].iter().all(u8::is_ascii_alphabetic)
        && b[5..].iter().all(u8::is_ascii_digit)
}

/// One series per station and component (E, N, U) with sigmas attached.
pub fn parse_ngl(text: &str) -> Result<Vec<TimeSeries>> {
    let mut data = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#') && !is_header(l));
    let Some((_, first)) = data.next() else {
        return Err(Error::UnknownFormat("no data lines".into()));
    };
    if !first.split_whitespace().nth(1).is_some_and(looks_like_date) {
        return Err(Error::UnknownFormat("second column is not a YYMMMDD date".into()));
    }
    for (i, l) in text.lines().enumerate() {
        let n = l.split_whitespace().count();
        if n > 0 && !is_header(l) && !l.trim_start().starts_with('#') && n < MIN_COLUMNS {
            return Err(Error::MalformedLine {
                line: i + 1,
                reason: format!("{n} columns, expected at least {MIN_COLUMNS}"),
            });
        }
    }
    // Blank out the header so line numbers in errors still match the input.
    let body: String = text
        .lines()
        .map(|l| if is_header(l) { "" } else { l })
        .collect::<Vec<_>>()
        .join("\n");
    parse_delimited(&body, &ngl_schema())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "\
site YYMMMDD yyyy.yyyy __MJD week d reflon _e0(m) __east(m) ____n0(m) _north(m) u0(m) ____up(m) _ant(m) sig_e(m) sig_n(m) sig_u(m) __corr_en __corr_eu __corr_nu _latitude(deg) _longitude(deg) __height(m)
P123 10JAN01 2010.0007 55197 1565 5 -116.0 -1125 0.543210 4123 0.123456 1 0.500000 0.0 0.0011 0.0012 0.0045 0.012 -0.051 0.031 37.2 -116.0 1500.5
P123 10JAN02 2010.0034 55198 1565 6 -116.0 -1125 0.544210 4123 0.122456 1 0.504000 0.0 0.0010 0.0013 0.0040 0.010 -0.050 0.030 37.2 -116.0 1500.5
";

    #[test]
    fn two_lines() {
        let s = parse_ngl(FIXTURE).unwrap();
        assert_eq!(s.len(), 3);
        let e = &s[0];
        assert_eq!((e.station_id.as_str(), e.component), ("P123", Component::E));
        assert_eq!(e.len(), 2);
        assert_eq!(e.times(), vec![0.0, 86_400.0]);
        assert_eq!(e.origin, 55_197.0 * 86_400.0);
        assert_eq!(e.sampling_interval, 86_400.0);
        assert_eq!(e.values(), vec![-1125.0 + 0.543210, -1125.0 + 0.544210]);
        assert_eq!(e.samples[0].sigma, Some(0.0011));
        let n = &s[1];
        assert_eq!(n.values(), vec![4123.0 + 0.123456, 4123.0 + 0.122456]);
        assert_eq!(n.samples[1].sigma, Some(0.0013));
        let u = &s[2];
        assert_eq!(u.component, Component::U);
        assert_eq!(u.values(), vec![1.5, 1.504]);
        assert_eq!(u.samples[1].sigma, Some(0.0040));
    }

    #[test]
    fn empty_is_unknown() {
        assert!(matches!(parse_ngl(""), Err(Error::UnknownFormat(_))));
        assert!(matches!(parse_ngl("epoch,value\n1,2\n"), Err(Error::UnknownFormat(_))));
    }

    #[test]
    fn non_numeric_field() {
        let bad = FIXTURE.replace("0.544210", "abc");
        assert!(matches!(parse_ngl(&bad), Err(Error::MalformedLine { line: 3, .. })));
        let short = format!("{FIXTURE}P123 10JAN03 2010.0062 55199\n");
        assert!(matches!(parse_ngl(&short), Err(Error::MalformedLine { line: 4, .. })));
    }
}
