use serde::Serialize;
use serde_json::Value;

use crate::commands::Outcome;

/// Schema version of every emitted envelope.
pub const ARTIFACT_VERSION: &str = "1";

#[derive(Debug, Serialize)]
pub struct ResultEnvelope<'a> {
    pub command: &'a str,
    pub parameters: &'a Value,
    pub seed: u64,
    pub artifact_version: &'static str,
    pub payload: &'a Value,
    pub wall_time_ms: u64,
}

impl<'a> ResultEnvelope<'a> {
    pub fn new(outcome: &'a Outcome, seed: u64, wall_time_ms: u64) -> Self {
        Self {
            command: &outcome.command,
            parameters: &outcome.parameters,
            seed,
            artifact_version: ARTIFACT_VERSION,
            payload: &outcome.payload,
            wall_time_ms,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("envelope serializes");
        text.push('\n');
        text
    }

    /// Bulk CSV when the command has one, otherwise `key,value` rows of the
    /// payload's scalar fields. A leading comment line carries the run metadata.
    pub fn to_csv(&self, bulk: Option<&str>) -> String {
        let mut text = format!(
            "# command={} seed={} artifact_version={} wall_time_ms={}\n",
            self.command, self.seed, self.artifact_version, self.wall_time_ms
        );
        match bulk {
            Some(body) => text.push_str(body),
            None => {
                text.push_str("key,value\n");
                if let Value::Object(map) = self.payload {
                    for (k, v) in map {
                        match v {
                            Value::Object(_) | Value::Array(_) => {}
                            Value::String(s) => text.push_str(&format!("{k},{s}\n")),
                            other => text.push_str(&format!("{k},{other}\n")),
                        }
                    }
                }
            }
        }
        text
    }
}
