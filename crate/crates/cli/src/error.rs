use serde::Serialize;

/// Failure of a run, with the exit status it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
        }
    }

    /// `{"error": {kind, message, exit_code}}`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Inner<'a> {
            kind: &'a str,
            message: String,
            exit_code: i32,
        }
        #[derive(Serialize)]
        struct Outer<'a> {
            error: Inner<'a>,
        }
        let body = Outer {
            error: Inner {
                kind: self.kind(),
                message: self.to_string(),
                exit_code: self.exit_code(),
            },
        };
        serde_json::to_string_pretty(&body).expect("error object serializes")
    }
}

impl From<ratapprox_core::Error> for CliError {
    fn from(e: ratapprox_core::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
