//! Flat TOML configuration files.
//!
//! A file holds `key = value` pairs. The keys `command`, `output`, `format`
//! and `quiet` are global; every other key must name a parameter of the
//! subcommand being run. Command-line flags take precedence over the file.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;

use crate::output::Format;
use crate::CliError;

/// Overlay of optional parameters: `self` wins, `base` fills the gaps.
pub trait Layered: Sized {
    fn over(self, base: Self) -> Self;
}

/// Implements [`Layered`] field by field for a struct of `Option`s.
#[macro_export]
macro_rules! layered {
    ($t:ty { $($f:ident),* $(,)? }) => {
        impl $crate::config::Layered for $t {
            fn over(self, base: Self) -> Self {
                Self { $($f: self.$f.or(base.$f)),* }
            }
        }
    };
}

#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    pub command: Option<String>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub quiet: Option<bool>,
    rest: toml::Table,
}

fn take<T: DeserializeOwned>(table: &mut toml::Table, key: &str) -> Result<Option<T>, CliError> {
    match table.remove(key) {
        None => Ok(None),
        Some(v) => v
            .try_into()
            .map(Some)
            .map_err(|e| CliError::Config(format!("key '{key}': {e}"))),
    }
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut table: toml::Table =
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if let Some((k, _)) = table.iter().find(|(_, v)| v.is_table()) {
            return Err(CliError::Config(format!(
                "key '{k}': configuration must be flat (no tables)"
            )));
        }
        Ok(Self {
            command: take(&mut table, "command")?,
            output: take(&mut table, "output")?,
            format: take(&mut table, "format")?,
            quiet: take(&mut table, "quiet")?,
            rest: table,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Subcommand parameters; unknown keys are rejected.
    pub fn args<T: DeserializeOwned>(&self, command: &str) -> Result<T, CliError> {
        if let Some(c) = &self.command {
            if c != command {
                return Err(CliError::Config(format!(
                    "file is for command '{c}' but '{command}' was requested"
                )));
            }
        }
        toml::Value::Table(self.rest.clone())
            .try_into()
            .map_err(|e| CliError::Config(format!("{command}: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Default, Deserialize, PartialEq)]
    #[serde(deny_unknown_fields)]
    struct Demo {
        kappa: Option<f64>,
        values: Option<Vec<f64>>,
    }
    layered!(Demo { kappa, values });

    #[test]
    fn globals_and_args() {
        let f = FileConfig::parse("format = \"json\"\nkappa = 1\nvalues = [1, 2.5]\n").unwrap();
        assert_eq!(f.format, Some(Format::Json));
        let d: Demo = f.args("demo").unwrap();
        assert_eq!(d.kappa, Some(1.0));
        assert_eq!(d.values, Some(vec![1.0, 2.5]));
    }

    #[test]
    fn rejects_unknown_and_nested() {
        let f = FileConfig::parse("kapa = 1\n").unwrap();
        assert!(f.args::<Demo>("demo").is_err());
        assert!(FileConfig::parse("[x]\ny = 1\n").is_err());
        let f = FileConfig::parse("command = \"state\"\n").unwrap();
        assert!(f.args::<Demo>("wigner").is_err());
    }

    #[test]
    fn flags_win() {
        let flags = Demo {
            kappa: Some(2.0),
            values: None,
        };
        let file = Demo {
            kappa: Some(1.0),
            values: Some(vec![3.0]),
        };
        assert_eq!(
            flags.over(file),
            Demo {
                kappa: Some(2.0),
                values: Some(vec![3.0])
            }
        );
    }
}
