//! CSV emission and parse-back of correlation profiles.

use std::io::Write;

use liftcorr_core::sidwt::CorrelationResult;
use liftcorr_core::signal::ComplexSeq;
use num_complex::Complex64;

use crate::error::{CliError, Result};

pub const HEADER: &str = "scale,lag,re,im,mag_db";

/// One parsed data row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Row {
    pub scale: usize,
    pub lag: i64,
    pub value: Complex64,
    pub mag_db: f64,
}

/// `20·log₁₀(|c| / reference)`; zero maps to `-inf`.
pub fn magnitude_db(c: Complex64, reference: f64) -> f64 {
    20.0 * (c.norm() / reference).log10()
}

/// Writes one row per (scale, lag), scales ascending then lags ascending over
/// `[−L/2, L/2−1]`. Numbers use 15 significant digits; Rust formatting does
/// not depend on the locale.
pub fn write_correlations<W: Write + ?Sized>(
    out: &mut W,
    results: &[CorrelationResult],
    db_reference: f64,
) -> Result<()> {
    writeln!(out, "{HEADER}")?;
    let mut sorted: Vec<&CorrelationResult> = results.iter().collect();
    sorted.sort_by_key(|r| r.scale);
    for r in sorted {
        for (lag, c) in r.centered() {
            writeln!(out, "{},{lag},{:.14e},{:.14e},{:.14e}", r.scale, c.re, c.im, magnitude_db(c, db_reference))?;
        }
    }
    Ok(())
}

pub fn correlations_to_string(results: &[CorrelationResult], db_reference: f64) -> String {
    let mut buf = Vec::new();
    write_correlations(&mut buf, results, db_reference).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

pub fn parse_correlations(text: &str) -> Result<Vec<Row>> {
    let mut lines = text.lines();
    if lines.next() != Some(HEADER) {
        return Err(CliError::Usage(format!("CSV must start with `{HEADER}`")));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || CliError::Usage(format!("CSV row {}: cannot parse `{line}`", i + 1));
            let f: Vec<&str> = line.split(',').collect();
            let [scale, lag, re, im, db] = f[..] else {
                return Err(bad());
            };
            Ok(Row {
                scale: scale.parse().map_err(|_| bad())?,
                lag: lag.parse().map_err(|_| bad())?,
                value: Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?),
                mag_db: db.parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

/// Writes a sequence as `n,re,im` rows.
pub fn write_samples<W: Write + ?Sized>(out: &mut W, seq: &ComplexSeq) -> Result<()> {
    writeln!(out, "n,re,im")?;
    for (n, c) in seq.samples.iter().enumerate() {
        writeln!(out, "{n},{:.14e},{:.14e}", c.re, c.im)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(scale: usize, len: usize) -> CorrelationResult {
        CorrelationResult::new(scale, (0..len).map(|i| Complex64::new(i as f64 / 3.0, -(i as f64).sqrt())).collect())
    }

    #[test]
    fn empty_results_give_only_the_header() {
        assert_eq!(correlations_to_string(&[], 1.0), format!("{HEADER}\n"));
        assert!(parse_correlations(&correlations_to_string(&[], 1.0)).unwrap().is_empty());
    }

    #[test]
    fn one_scale_of_length_eight_has_eight_rows() {
        let text = correlations_to_string(&[result(0, 8)], 1.0);
        let rows = parse_correlations(&text).unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows.iter().map(|r| r.lag).collect::<Vec<_>>(), (-4..4).collect::<Vec<_>>());
    }

    #[test]
    fn rows_are_ordered_by_scale_then_lag() {
        let rows = parse_correlations(&correlations_to_string(&[result(1, 4), result(0, 4)], 1.0)).unwrap();
        let keys: Vec<(usize, i64)> = rows.iter().map(|r| (r.scale, r.lag)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn parse_back_reproduces_fifteen_digits() {
        let r = result(2, 16);
        for row in parse_correlations(&correlations_to_string(std::slice::from_ref(&r), 0.5)).unwrap() {
            let want = r.at(row.lag);
            assert!((row.value - want).norm() <= 1e-14 * want.norm().max(f64::MIN_POSITIVE));
            if want.norm() == 0.0 {
                assert_eq!(row.mag_db, f64::NEG_INFINITY);
            } else {
                assert!((row.mag_db - magnitude_db(want, 0.5)).abs() <= 1e-13 * magnitude_db(want, 0.5).abs().max(1.0));
            }
        }
    }

    #[test]
    fn malformed_csv_is_rejected() {
        assert!(parse_correlations("lag,re\n").is_err());
        assert!(parse_correlations(&format!("{HEADER}\n0,1,2\n")).is_err());
    }
}
