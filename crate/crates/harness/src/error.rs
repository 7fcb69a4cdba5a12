use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("usage: `{key}`: {message}")]
    Usage { key: String, message: String },

    #[error(transparent)]
    Numeric(#[from] sympwave::Error),

    #[error("row {row}: column `{column}` has nonpositive value {value}")]
    Domain { row: usize, column: String, value: f64 },

    #[error("slope fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl HarnessError {
    pub fn usage(key: impl Into<String>, message: impl Into<String>) -> Self {
        HarnessError::Usage { key: key.into(), message: message.into() }
    }

    /// 0 success, 2 usage, 3 numeric divergence, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        use sympwave::Error as E;
        match self {
            HarnessError::Usage { .. } | HarnessError::Domain { .. } | HarnessError::TooFewPoints(_) => 2,
            HarnessError::Numeric(e) => match e {
                E::Divergent { .. } | E::Pole { .. } | E::Resolution { .. } => 3,
                _ => 2,
            },
            HarnessError::Io { .. } => 4,
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
