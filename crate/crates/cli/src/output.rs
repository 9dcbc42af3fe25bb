//! Deterministic CSV and manifest emission.
//!
//! Floats are written with Rust's shortest round-trip formatting, which is
//! locale-independent and never exceeds 17 significant digits, so a fixed
//! config yields byte-identical files.

use crate::config::Config;
use crate::CliError;
use std::fmt::Write as _;
use std::path::Path;

pub struct Csv {
    buffer: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buffer = String::new();
        let _ = writeln!(buffer, "{}", header.join(","));
        Self {
            buffer,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.columns, "row width mismatch");
        let cells: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(self.buffer, "{}", cells.join(","));
    }

    /// Marker line for a failed row; kept in place so partial sweeps stay
    /// aligned with their τ grid.
    pub fn failure(&mut self, note: &str) {
        let _ = writeln!(self.buffer, "# failed {note}");
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write_file(path, &self.buffer)
    }
}

pub fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("creating {}: {e}", dir.display())))?;
    }
    std::fs::write(path, content)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

/// Exact config echo plus provenance comments. The comments are ignored by
/// the parser, so the manifest itself is a runnable config.
pub fn write_manifest(path: &Path, config: &Config, wall_ms: u128) -> Result<(), CliError> {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "# manifest written by quenchlab {}",
        env!("CARGO_PKG_VERSION")
    );
    let _ = writeln!(text, "# wall_time_ms = {wall_ms}");
    text.push_str(&config.echo());
    write_file(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_formats_shortest_roundtrip() {
        let mut csv = Csv::new(&["a", "b"]);
        csv.row(&[0.1, 2.0_f64.sqrt()]);
        assert_eq!(csv.buffer, "a,b\n0.1,1.4142135623730951\n");
    }

    #[test]
    fn failure_rows_are_comments() {
        let mut csv = Csv::new(&["a"]);
        csv.failure("tau=3: gap closed");
        assert!(csv.buffer.contains("# failed tau=3"));
    }
}
