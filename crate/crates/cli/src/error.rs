use std::path::Path;

use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input: bad literals, files, scenarios or arguments.
    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Core(#[from] ckrenorm::Error),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Input(format!("{}: {e}", path.display()))
    }

    pub fn json(e: serde_json::Error) -> Self {
        CliError::Input(format!("JSON: {e}"))
    }

    pub fn in_file(self, path: &Path) -> Self {
        match self {
            CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
            other => other,
        }
    }

    /// 2 for bad input; 1 when a computation could not establish its result.
    pub fn exit_code(&self) -> u8 {
        use ckrenorm::Error as E;
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e) => match e {
                E::Numeric(_) | E::NoWitness(_) | E::DegenerateGradient(_) | E::Internal(_) => 1,
                _ => 2,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            1 => "verification",
            _ => "input",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": {"kind": self.kind(), "message": self.to_string()}, "exit": self.exit_code()})
    }
}
