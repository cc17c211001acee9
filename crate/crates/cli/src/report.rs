//! The versioned report envelope every subcommand emits.
//!
//! Reports are JSON with a fixed field order and canonical inner ordering
//! (all engine types serialize from ordered maps), so identical inputs
//! produce byte-identical reports.

use serde::Serialize;
use serde_json::Value;

/// Schema tag stamped on every report.
pub const SCHEMA: &str = "folia-report/1";

/// Tri-state outcome, aligned with the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Computed and the property holds (integrable, exact, classified, …).
    Holds,
    /// Computed and the property fails; the result carries a witness.
    Fails,
    /// The input or a hypothesis was rejected; no result.
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Error => 2,
        }
    }
}

/// A complete report: envelope plus echoed input and result or error.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub status: Status,
    pub exit_code: i32,
    /// The parsed input, re-serialized canonically; absent when the input
    /// itself could not be parsed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorBody>,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub message: String,
}

impl Report {
    pub fn success(command: &'static str, status: Status, input: Value, result: Value) -> Self {
        Report {
            schema: SCHEMA,
            command,
            status,
            exit_code: status.exit_code(),
            input: Some(input),
            result: Some(result),
            error: None,
        }
    }

    pub fn failure(command: &'static str, input: Option<Value>, message: String) -> Self {
        Report {
            schema: SCHEMA,
            command,
            status: Status::Error,
            exit_code: Status::Error.exit_code(),
            input,
            result: None,
            error: Some(ErrorBody { message }),
        }
    }

    /// Pretty-printed JSON with a trailing newline; the byte-stable wire
    /// form of the report.
    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("reports always serialize");
        bytes.push(b'\n');
        bytes
    }
}
