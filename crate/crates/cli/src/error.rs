use std::fmt;

use serde::Serialize;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable, malformed or incomplete configuration, or an I/O failure.
    Config(String),
    /// The computation itself rejected the input.
    Domain(skelflow::Error),
    /// A verification threshold was missed.
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Verification(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Domain(_) => "domain",
            CliError::Verification(_) => "verification",
        }
    }

    /// `{"error": {"kind": ..., "code": ..., "message": ...}}`.
    pub fn record(&self) -> String {
        #[derive(Serialize)]
        struct Inner<'a> {
            kind: &'a str,
            code: i32,
            message: String,
        }
        #[derive(Serialize)]
        struct Record<'a> {
            error: Inner<'a>,
        }
        serde_json::to_string(&Record {
            error: Inner {
                kind: self.kind(),
                code: self.exit_code(),
                message: self.to_string(),
            },
        })
        .expect("error record serializes")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Verification(m) => f.write_str(m),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<skelflow::Error> for CliError {
    fn from(e: skelflow::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Config(format!("csv: {e}"))
    }
}
