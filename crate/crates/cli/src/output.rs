//! CSV text with round-trip floats and `#` metadata lines.

use crate::error::CliResult;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

/// Shortest decimal form that parses back to the same `f64`.
pub fn float(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Default)]
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn comment(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.buf, "# {}", line.as_ref());
    }

    pub fn header<S: AsRef<str>>(&mut self, names: &[S]) {
        let names: Vec<&str> = names.iter().map(|s| s.as_ref()).collect();
        let _ = writeln!(self.buf, "{}", names.join(","));
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| float(v)).collect();
        let _ = writeln!(self.buf, "{}", cells.join(","));
    }

    pub fn raw_row(&mut self, cells: &[String]) {
        let _ = writeln!(self.buf, "{}", cells.join(","));
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Column names `prefix1..prefixN`, or just `prefix` in one dimension.
pub fn coordinate_names(prefix: &str, dim: usize) -> Vec<String> {
    if dim == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=dim).map(|i| format!("{prefix}{i}")).collect()
    }
}
