//! Subcommand implementations. Each turns merged arguments into a [`Report`].

pub mod detect;
pub mod qcb;
pub mod spectrum;
pub mod state;
pub mod wigner;

use crate::config::Layered;
use crate::CliError;

/// Built-in values for parameters absent from both flags and config file.
pub trait Defaults: Layered {
    fn defaults() -> Self;

    fn resolved(self) -> Self {
        self.over(Self::defaults())
    }
}

pub(crate) fn check_limit(name: &str, value: usize, max: usize) -> Result<(), CliError> {
    if value > max {
        return Err(CliError::Usage(format!(
            "{name} = {value} exceeds the limit {max}"
        )));
    }
    Ok(())
}
