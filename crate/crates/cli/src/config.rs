//! Layered run configuration: command-line flags over a TOML file.
//!
//! Each subcommand reads its own `[section]` of flat `key = value` pairs;
//! keys are the long flag names without the leading dashes (`ja-k = -42`).
//! Whatever a run ends up using is recorded and can be written back out in
//! the same format so the run can be repeated.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use toml::{Table, Value};

use crate::error::{CliError, CliResult};

pub fn load(path: &Path) -> CliResult<Table> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|m| CliError::Validation(format!("{}: {m}", path.display())))
}

fn parse(text: &str) -> Result<Table, String> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| e.to_string())?;
    for (name, section) in &table {
        let Value::Table(section) = section else {
            return Err(format!("top-level key `{name}` must be a [section]"));
        };
        if let Some((key, _)) = section
            .iter()
            .find(|(_, v)| matches!(v, Value::Table(_) | Value::Array(_)))
        {
            return Err(format!("[{name}] {key}: nested values are not supported"));
        }
    }
    Ok(table)
}

fn raw(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Resolves one subcommand's parameters and remembers the chosen values.
pub struct Layer<'a> {
    section: &'static str,
    file: Option<&'a Table>,
    seen: Vec<String>,
    resolved: Vec<(String, String)>,
}

impl<'a> Layer<'a> {
    pub fn new(section: &'static str, file: Option<&'a Table>) -> Self {
        Layer {
            section,
            file: file.and_then(|t| t.get(section)).and_then(Value::as_table),
            seen: Vec::new(),
            resolved: Vec::new(),
        }
    }

    pub fn value<T>(&mut self, key: &str, flag: Option<T>) -> CliResult<Option<T>>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.seen.push(key.to_string());
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file.and_then(|t| t.get(key)).map(raw) {
                Some(raw) => Some(raw.trim().parse::<T>().map_err(|e| {
                    CliError::Validation(format!("config [{}] {key} = `{raw}`: {e}", self.section))
                })?),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.resolved.push((key.to_string(), v.to_string()));
        }
        Ok(value)
    }

    pub fn required<T>(&mut self, key: &str, flag: Option<T>) -> CliResult<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.value(key, flag)?.ok_or_else(|| {
            CliError::Validation(format!(
                "missing --{key} (pass the flag or set `{key}` under [{}] in the config file)",
                self.section
            ))
        })
    }

    pub fn or_default<T>(&mut self, key: &str, flag: Option<T>, default: T) -> CliResult<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        match self.value(key, flag)? {
            Some(v) => Ok(v),
            None => {
                self.resolved.push((key.to_string(), default.to_string()));
                Ok(default)
            }
        }
    }

    /// Rejects config keys that no parameter asked for, which are almost
    /// always typos.
    pub fn finish(self) -> CliResult<Resolved> {
        if let Some(section) = self.file {
            if let Some(key) = section.keys().find(|k| !self.seen.iter().any(|s| s == *k)) {
                return Err(CliError::Validation(format!(
                    "config [{}]: unknown key `{key}`",
                    self.section
                )));
            }
        }
        Ok(Resolved {
            section: self.section,
            entries: self.resolved,
        })
    }
}

/// The parameters a run actually used.
#[derive(Debug, Clone)]
pub struct Resolved {
    section: &'static str,
    entries: Vec<(String, String)>,
}

impl Resolved {
    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    /// Numbers and booleans are written bare, everything else quoted.
    pub fn to_toml(&self) -> String {
        let mut out = format!("[{}]\n", self.section);
        for (k, v) in &self.entries {
            let value = if v.parse::<i64>().is_ok() || v.parse::<bool>().is_ok() {
                v.clone()
            } else if let Ok(x) = v.parse::<f64>() {
                Value::Float(x).to_string()
            } else {
                Value::String(v.clone()).to_string()
            };
            out += &format!("{k} = {value}\n");
        }
        out
    }

    /// Writes `<out>.toml` next to an output file.
    pub fn write_sidecar(&self, out: &Path) -> CliResult<PathBuf> {
        let mut name = out.as_os_str().to_owned();
        name.push(".toml");
        let path = PathBuf::from(name);
        std::fs::write(&path, self.to_toml())
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}
