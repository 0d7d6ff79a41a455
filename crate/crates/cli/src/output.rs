//! Deterministic artifact writing: CSV with `#` comment headers and JSON
//! summaries. Floats are rendered in scientific notation with 12
//! significant digits so identical runs produce byte-identical files.

use crate::AppError;
use std::fmt::Write as _;
use std::path::Path;

/// Scientific notation, 12 significant digits, normalized -0 and nan.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    /// Start a file with the standard header: artifact version, the
    /// subcommand, and the fully resolved configuration.
    pub fn new(subcommand: &str, config_toml: &str) -> Self {
        let mut buf = String::new();
        let _ = writeln!(buf, "# rkky v{}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(buf, "# subcommand: {subcommand}");
        for line in config_toml.lines() {
            let _ = writeln!(buf, "# config: {line}");
        }
        Self { buf }
    }

    pub fn comment(&mut self, text: &str) {
        let _ = writeln!(self.buf, "# {text}");
    }

    pub fn columns(&mut self, names: &[&str]) {
        let _ = writeln!(self.buf, "# columns: {}", names.join(","));
    }

    pub fn row(&mut self, values: &[String]) {
        let _ = writeln!(self.buf, "{}", values.join(","));
    }

    pub fn row_floats(&mut self, values: &[f64]) {
        let rendered: Vec<String> = values.iter().map(|&v| fmt_float(v)).collect();
        self.row(&rendered);
    }

    pub fn finish(self, path: &Path) -> Result<(), AppError> {
        std::fs::write(path, self.buf)
            .map_err(|e| AppError::io(format!("writing {}: {e}", path.display())))
    }

    #[cfg(test)]
    pub fn as_str(&self) -> &str {
        &self.buf
    }
}

/// Serialize a config struct to TOML for the file header.
pub fn config_to_toml<T: serde::Serialize>(config: &T) -> String {
    toml::to_string(config).unwrap_or_else(|e| format!("<unserializable config: {e}>"))
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), AppError> {
    let text = format!("{:#}\n", value);
    std::fs::write(path, text).map_err(|e| AppError::io(format!("writing {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_fixed_width_scientific() {
        assert_eq!(fmt_float(199.5), "1.99500000000e2");
        assert_eq!(fmt_float(0.0), "0.00000000000e0");
        assert_eq!(fmt_float(-0.0), "0.00000000000e0");
        assert_eq!(fmt_float(f64::NAN), "nan");
        assert_eq!(fmt_float(-1.25e-7), "-1.25000000000e-7");
    }

    #[test]
    fn header_lines_are_prefixed() {
        let mut w = CsvWriter::new("kernel", "n_fermions = 10\nvp_ratio = 0.0\n");
        w.columns(&["kfr", "f"]);
        w.row_floats(&[1.0, -0.5]);
        let text = w.as_str();
        assert!(text.starts_with("# rkky v"));
        assert!(text.contains("# subcommand: kernel"));
        assert!(text.contains("# config: n_fermions = 10"));
        assert!(text.contains("# columns: kfr,f"));
        assert!(text.ends_with("1.00000000000e0,-5.00000000000e-1\n"));
    }
}
