//! Numeric formatting and small file helpers for CSV emission.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use crate::error::HarnessError;

/// Formats a float with six significant digits, trimming trailing zeros;
/// switches to scientific notation outside `1e-4..1e6`.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&exponent) {
        let formatted = format!("{x:.5e}");
        let (mantissa, exp) = formatted.split_once('e').expect("exponential format");
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (5 - exponent).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Optional field for CSV cells: empty when absent.
pub fn opt_sig6(x: Option<f64>) -> String {
    x.map(sig6).unwrap_or_default()
}

/// Writes `lines` (header included) to a fresh file, one per line.
pub fn write_lines(path: &Path, lines: &[String]) -> Result<(), HarnessError> {
    let mut file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    for line in lines {
        writeln!(file, "{line}").map_err(|e| HarnessError::io(path, e))?;
    }
    Ok(())
}

/// Appends `rows` to a CSV file, emitting `header` first when the file is
/// new or empty.
pub fn append_csv(path: &Path, header: &str, rows: &[String]) -> Result<(), HarnessError> {
    let needs_header = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| HarnessError::io(path, e))?;
    if needs_header {
        writeln!(file, "{header}").map_err(|e| HarnessError::io(path, e))?;
    }
    for row in rows {
        writeln!(file, "{row}").map_err(|e| HarnessError::io(path, e))?;
    }
    Ok(())
}
