use std::fmt;
use std::io;
use std::path::{Path, PathBuf};

use dbrane_core::Error;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_DEGRADED: i32 = 4;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Options {
    pub tolerance: f64,
    pub degree_cap: Option<u32>,
    pub seed: u64,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Json { path: PathBuf, source: serde_json::Error },
    Io { path: PathBuf, source: io::Error },
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Json { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Numeric(_)) => EXIT_DEGRADED,
            CliError::Core(Error::Internal(_)) => EXIT_INTERNAL,
            CliError::Core(e) if e.is_validation() => EXIT_VALIDATION,
            _ => EXIT_PARSE,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => match e {
                Error::Parse(_) => "Parse",
                Error::NotCommuting { .. } => "NotCommuting",
                Error::RelationViolated { .. } => "RelationViolated",
                Error::DegreeCapExceeded { .. } => "DegreeCapExceeded",
                Error::NotSquareZero { .. } => "NotSquareZero",
                Error::NoRelation { .. } => "NoRelation",
                Error::UnknownTarget(_) => "UnknownTarget",
                Error::SingularConjugator => "SingularConjugator",
                Error::ZeroRank => "ZeroRank",
                Error::EmptyTuple => "EmptyTuple",
                Error::NonCommutativeTarget(_) => "NonCommutativeTarget",
                Error::OutsideWindow { .. } => "OutsideWindow",
                Error::Shape(_) => "Shape",
                Error::Numeric(_) => "Numeric",
                Error::Internal(_) => "Internal",
            },
            CliError::Json { .. } => "Parse",
            CliError::Io { .. } => "Io",
            CliError::Usage(_) => "Usage",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "kind": self.kind(), "message": self.to_string() });
        let details = match self {
            CliError::Core(Error::NotCommuting { i, j, commutator }) => {
                json!({ "generators": [i + 1, j + 1], "commutator": commutator })
            }
            CliError::Core(Error::RelationViolated { relation, residual }) => {
                json!({ "relation": relation, "residual": residual })
            }
            CliError::Core(Error::NotSquareZero { index, square }) => json!({ "index": index + 1, "square": square }),
            CliError::Core(Error::DegreeCapExceeded { degree, cap }) => json!({ "degree": degree, "cap": cap }),
            _ => Value::Null,
        };
        if !details.is_null() {
            v["details"] = details;
        }
        v
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_input(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, bytes: &[u8]) -> CliResult<T> {
    serde_json::from_slice(bytes).map_err(|source| CliError::Json { path: path.to_path_buf(), source })
}

/// Result of one command before wrapping.
pub struct Outcome {
    pub outputs: Value,
    pub text: String,
    pub degraded: bool,
    /// The input parsed but a checked property does not hold.
    pub rejected: bool,
}

impl Outcome {
    pub fn new(outputs: Value, text: String) -> Self {
        Self { outputs, text, degraded: false, rejected: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Degraded,
    Rejected,
    Error,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub engine_version: &'static str,
    pub inputs_digest: String,
    pub options: Options,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
    #[serde(skip)]
    pub text: String,
    #[serde(skip)]
    pub exit_code: i32,
}

/// SHA-256 over the command, its arguments, the options and every input.
pub fn digest(command: &str, args: &[String], options: &Options, inputs: &[Vec<u8>]) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    for a in args {
        h.update([0u8]);
        h.update(a.as_bytes());
    }
    h.update([0u8]);
    h.update(serde_json::to_vec(options).expect("options serialize"));
    for input in inputs {
        h.update([0u8]);
        h.update(input);
    }
    format!("{:x}", h.finalize())
}

impl RunReport {
    pub fn build(command: &str, digest: String, options: Options, result: CliResult<Outcome>) -> Self {
        let base = |status, exit_code| RunReport {
            command: command.to_string(),
            engine_version: dbrane_core::VERSION,
            inputs_digest: digest.clone(),
            options,
            status,
            outputs: None,
            error: None,
            text: String::new(),
            exit_code,
        };
        match result {
            Ok(o) => {
                let (status, code) = if o.rejected {
                    (Status::Rejected, EXIT_VALIDATION)
                } else if o.degraded {
                    (Status::Degraded, EXIT_DEGRADED)
                } else {
                    (Status::Ok, EXIT_OK)
                };
                RunReport { outputs: Some(o.outputs), text: o.text, ..base(status, code) }
            }
            Err(e) => {
                let text = format!("error: {e}");
                RunReport { error: Some(e.to_json()), text, ..base(Status::Error, e.exit_code()) }
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
