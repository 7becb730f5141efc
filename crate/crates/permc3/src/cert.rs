//! Machine-checkable certificates: every CLI verdict is emitted as JSON that
//! echoes its inputs, so re-running the referenced operation on the echo
//! reproduces the verdict.

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub const CERT_SCHEMA: &str = "permc3.cert.v1";

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub schema: &'static str,
    /// Stable claim identifier, e.g. `uk-family` or `classify`.
    pub claim: String,
    /// Echo of the inputs the verdict was computed from.
    pub inputs: Value,
    pub verdict: bool,
    pub evidence: Value,
    pub tool_version: &'static str,
    pub wall_time_ms: u128,
}

impl Certificate {
    pub fn new(claim: &str, inputs: Value, verdict: bool, evidence: Value, started: Instant) -> Self {
        Certificate {
            schema: CERT_SCHEMA,
            claim: claim.to_string(),
            inputs,
            verdict,
            evidence,
            tool_version: env!("CARGO_PKG_VERSION"),
            wall_time_ms: started.elapsed().as_millis(),
        }
    }

    pub fn to_json(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(self).expect("serializable")
        } else {
            serde_json::to_string(self).expect("serializable")
        }
    }
}
