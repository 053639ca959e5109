use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] diracosc_core::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot read or write `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Config(#[from] serde_json::Error),
}

/// The machine-readable form written to standard error on failure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<&'static str>,
    pub message: String,
}

impl CliError {
    pub fn record(&self) -> ErrorRecord {
        use diracosc_core::Error as E;
        let (kind, field) = match self {
            CliError::Core(e) => match e {
                E::InvalidParameter { field, .. } => ("invalid_parameter", Some(*field)),
                E::NoFiniteBound => ("no_finite_bound", None),
                E::ParameterDomain(_) => ("parameter_domain", None),
                E::EmptySpectrum { .. } => ("empty_spectrum", None),
                E::Usage(_) => ("usage", None),
                E::NonConvergence { .. } => ("non_convergence", None),
                E::NonPositivePartition { .. } => ("nonpositive_partition", None),
            },
            CliError::Usage(_) => ("usage", None),
            CliError::Io { .. } => ("io", None),
            CliError::Config(_) => ("config", None),
        };
        ErrorRecord {
            kind,
            field,
            message: self.to_string(),
        }
    }

    /// 2 for problems with the request itself, 1 for failures while computing.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Core(
                diracosc_core::Error::InvalidParameter { .. }
                | diracosc_core::Error::Usage(_)
                | diracosc_core::Error::NoFiniteBound,
            ) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
