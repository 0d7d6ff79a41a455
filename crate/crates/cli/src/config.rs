//! Declarative run configuration: TOML file plus command-line overrides.
//!
//! Precedence is command line (`--set key=value`, repeatable) over the
//! config file over built-in defaults. Values given to `--set` are parsed
//! as TOML; bare words fall back to strings so `--set mode=2d` works
//! without quoting.

use crate::AppError;
use serde::de::DeserializeOwned;
use std::path::Path;

/// Load the layered configuration table.
pub fn load_table(path: Option<&Path>, sets: &[String]) -> Result<toml::Table, AppError> {
    let mut table = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| {
                AppError::config(format!("cannot read config {}: {e}", p.display()))
            })?;
            text.parse::<toml::Table>()
                .map_err(|e| AppError::config(format!("config parse error: {e}")))?
        }
        None => toml::Table::new(),
    };
    for setting in sets {
        let Some((key, value)) = setting.split_once('=') else {
            return Err(AppError::config(format!(
                "--set needs key=value, got '{setting}'"
            )));
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(AppError::config(format!("--set has empty key: '{setting}'")));
        }
        let parsed = parse_toml_value(value.trim());
        table.insert(key.to_string(), parsed);
    }
    Ok(table)
}

fn parse_toml_value(raw: &str) -> toml::Value {
    let snippet = format!("v = {raw}");
    if let Ok(t) = snippet.parse::<toml::Table>() {
        if let Some(v) = t.get("v") {
            return v.clone();
        }
    }
    toml::Value::String(raw.to_string())
}

/// Deserialize the resolved table into a typed config. Missing required
/// keys and unknown keys surface as config errors naming the field.
pub fn resolve<T: DeserializeOwned>(table: toml::Table) -> Result<T, AppError> {
    toml::Value::Table(table)
        .try_into()
        .map_err(|e| AppError::config(format!("invalid config: {}", e.to_string().trim())))
}
