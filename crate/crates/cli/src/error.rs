use std::path::PathBuf;

use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("unknown experiment '{0}'")]
    UnknownExperiment(String),

    #[error("parameter '{key}': {message}")]
    Parameter { key: String, message: String },

    #[error("config file: {0}")]
    Config(String),

    #[error("output directory {} is not empty; pass --force to overwrite", .0.display())]
    Collision(PathBuf),

    #[error("missing artifact: {0}")]
    MissingArtifact(String),

    #[error(transparent)]
    Core(#[from] fblab_core::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("{failed} of {total} invariant checks failed")]
    Verify { failed: usize, total: usize },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn param(key: &str, message: impl Into<String>) -> Self {
        CliError::Parameter { key: key.to_string(), message: message.into() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::UnknownExperiment(_) => "unknown-experiment",
            CliError::Parameter { .. } => "invalid-parameter",
            CliError::Config(_) => "config",
            CliError::Collision(_) => "output-collision",
            CliError::MissingArtifact(_) => "missing-artifact",
            CliError::Core(e) => match e {
                fblab_core::Error::InvalidArgument(_) | fblab_core::Error::Domain(_) => "invalid-parameter",
                fblab_core::Error::Resolution { .. } | fblab_core::Error::Precision(_) => "resolution",
                _ => "computation",
            },
            CliError::Io(_) | CliError::Csv(_) => "io",
            CliError::Verify { .. } => "verification-failed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "verification-failed" => 1,
            "usage" | "unknown-experiment" | "invalid-parameter" | "config" => 2,
            "output-collision" => 3,
            "missing-artifact" => 4,
            "resolution" => 5,
            "io" => 6,
            _ => 7,
        }
    }

    /// The one-line JSON record written to stderr.
    pub fn record(&self, experiment: Option<&str>) -> serde_json::Value {
        let mut v = json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
            "experiment": experiment,
        });
        if let CliError::Parameter { key, .. } = self {
            v["parameter"] = json!(key);
        }
        if let CliError::Core(fblab_core::Error::Resolution { k_max }) = self {
            v["k_max"] = json!(k_max);
        }
        v
    }
}
