use std::path::PathBuf;

use serde::Serialize;
use sunhop::{PlanError, ScenarioIssue, SimulationError};
use thiserror::Error;

pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed scenario document at line {line}, column {column}: {message}")]
    Malformed { line: usize, column: usize, message: String },
    #[error("unsupported schema version {found} (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },
    #[error("scenario has {} problem(s)", .0.len())]
    Invalid(Vec<ScenarioIssue>),
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Simulation(#[from] SimulationError),
}

#[derive(Debug, Serialize)]
pub struct Diagnostic {
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Serialize)]
struct ErrorBody<'a> {
    code: &'static str,
    message: String,
    #[serde(skip_serializing_if = "<[Diagnostic]>::is_empty")]
    diagnostics: &'a [Diagnostic],
}

#[derive(Debug, Serialize)]
struct ErrorDocument<'a> {
    error: ErrorBody<'a>,
}

fn plan_code(e: &PlanError) -> &'static str {
    match e {
        PlanError::NoBackhaulPath { .. } => "no-backhaul-path",
        PlanError::SameEndpoints => "invalid-terminal",
        PlanError::Visibility(_) => "visibility-failure",
        PlanError::Scenario(issue) => issue.code(),
    }
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Read { .. } => "read-failure",
            CliError::Write { .. } => "write-failure",
            CliError::Malformed { .. } => "malformed-document",
            CliError::SchemaVersion { .. } => "unsupported-schema",
            CliError::Invalid(issues) => issues.first().map_or("invalid-scenario", ScenarioIssue::code),
            CliError::Parameters(_) => "invalid-parameters",
            CliError::Usage(_) => "usage",
            CliError::Plan(e) => plan_code(e),
            CliError::Simulation(SimulationError::Epoch { source, .. }) => plan_code(source),
            CliError::Simulation(SimulationError::Config(_)) => "invalid-parameters",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed { .. }
            | CliError::SchemaVersion { .. }
            | CliError::Invalid(_)
            | CliError::Parameters(_)
            | CliError::Usage(_)
            | CliError::Simulation(SimulationError::Config(_)) => EXIT_VALIDATION,
            _ => EXIT_RUNTIME,
        }
    }

    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        match self {
            CliError::Invalid(issues) => {
                issues.iter().map(|i| Diagnostic { code: i.code(), message: i.to_string() }).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> String {
        let diagnostics = self.diagnostics();
        let doc = ErrorDocument { error: ErrorBody { code: self.code(), message: self.to_string(), diagnostics: &diagnostics } };
        serde_json::to_string_pretty(&doc).expect("error documents serialize")
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Malformed { line: e.line(), column: e.column(), message: e.to_string() }
    }
}
