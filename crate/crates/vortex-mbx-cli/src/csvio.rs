//! CSV artifacts with bit-round-trippable floats and LF line endings.

use std::fs;
use std::path::Path;

use crate::error::CliError;

/// 17 significant decimal digits; enough for f64 parse to return the exact
/// input bits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut text = String::with_capacity((rows.len() + 1) * header.len() * 24);
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        assert_eq!(row.len(), header.len(), "row width must match the schema");
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
