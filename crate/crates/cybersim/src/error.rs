use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine failed to converge or lost too much precision.
    /// Carries enough diagnostics to reproduce the failure.
    #[error("numeric error in {context}: {detail}")]
    Numeric { context: String, detail: String },

    /// Scenario configuration failed validation. Each entry is a dotted
    /// path into the config plus a description of what is wrong with it.
    #[error("invalid configuration:\n{}", issues.join("\n"))]
    Config { issues: Vec<String> },

    /// A golden-table comparison referenced a table the report does not have.
    #[error("unknown table id: {0}")]
    UnknownTable(String),

    /// A currency literal could not be parsed.
    #[error("cannot parse {input:?} as a currency amount: {reason}")]
    Money { input: String, reason: String },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numeric(context: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Numeric {
            context: context.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
