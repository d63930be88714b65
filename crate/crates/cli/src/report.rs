//! The JSON report envelope. The `results` section is deterministic for fixed
//! inputs and parameters; timing lives outside it.

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const REPORT_SCHEMA_VERSION: &str = "1";

#[derive(Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub input_digest: Option<String>,
    pub parameters: serde_json::Value,
    pub results: serde_json::Value,
    pub timing_ms: u128,
}

impl Report {
    pub fn new(
        command: &str,
        input: Option<&[u8]>,
        parameters: serde_json::Value,
        results: serde_json::Value,
        timing_ms: u128,
    ) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            input_digest: input.map(|bytes| {
                let mut hasher = Sha256::new();
                hasher.update(bytes);
                hex::encode(hasher.finalize())
            }),
            parameters,
            results,
            timing_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
