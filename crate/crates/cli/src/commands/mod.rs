pub mod bounds;
pub mod channel;
pub mod stats;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

/// Largest `n` or `d` accepted by channel and statistics commands.
pub const DIMENSION_LIMIT: usize = 4096;
/// Largest sample count accepted by Monte Carlo commands.
pub const COUNT_LIMIT: usize = 50_000_000;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Assertion(String),
}

impl From<addlab_core::Error> for CommandError {
    fn from(e: addlab_core::Error) -> Self {
        use addlab_core::Error as E;
        match e {
            E::ResourceCap { .. } => CommandError::Resource(e.to_string()),
            E::Consistency(_) => CommandError::Assertion(e.to_string()),
            _ => CommandError::Usage(e.to_string()),
        }
    }
}

/// Result of one subcommand before it is wrapped in an envelope.
#[derive(Debug)]
pub struct Outcome {
    pub command: String,
    pub parameters: Value,
    pub payload: Value,
    /// Bulk CSV body for `--format csv`, when the command has one.
    pub csv: Option<String>,
    /// Verified inequalities that broke during the run.
    pub failed_checks: Vec<String>,
}

impl Outcome {
    pub fn new<P: Serialize, T: Serialize>(command: &str, parameters: &P, payload: &T) -> Self {
        Self {
            command: command.to_string(),
            parameters: serde_json::to_value(parameters).expect("parameters serialize"),
            payload: serde_json::to_value(payload).expect("payload serializes"),
            csv: None,
            failed_checks: Vec::new(),
        }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn check(mut self, ok: bool, description: impl Into<String>) -> Self {
        if !ok {
            self.failed_checks.push(description.into());
        }
        self
    }
}

pub fn check_dimensions(d: usize, n: usize) -> Result<(), CommandError> {
    if d == 0 || n == 0 {
        return Err(CommandError::Usage(format!("dimensions must be positive, got d = {d}, n = {n}")));
    }
    if d > DIMENSION_LIMIT || n > DIMENSION_LIMIT {
        return Err(CommandError::Resource(format!(
            "d = {d}, n = {n} exceeds the dimension limit {DIMENSION_LIMIT}"
        )));
    }
    Ok(())
}

pub fn check_count(count: usize) -> Result<(), CommandError> {
    if count == 0 {
        return Err(CommandError::Usage("count must be positive".into()));
    }
    if count > COUNT_LIMIT {
        return Err(CommandError::Resource(format!("count {count} exceeds the limit {COUNT_LIMIT}")));
    }
    Ok(())
}
