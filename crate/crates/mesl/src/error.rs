use thiserror::Error;

/// Error type shared by all simulator modules.
#[derive(Debug, Error)]
pub enum MeslError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid magnetization state: {0}")]
    InvalidState(String),

    #[error("configuration error: key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("divider solver did not converge after {iterations} iterations (residual {residual:.3e} V)")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("read disturb: |node voltage| {v_node:.4} V >= v_switch_min {v_switch_min:.4} V")]
    ReadDisturb { v_node: f64, v_switch_min: f64 },

    #[error("schedule error: {0}")]
    Schedule(String),

    #[error("statistics unreliable: {0}")]
    UnreliableStatistics(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl MeslError {
    pub fn config(key: &str, message: impl Into<String>) -> Self {
        MeslError::Config {
            key: key.to_string(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        MeslError::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable process exit code per error class, used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            MeslError::InvalidGeometry(_) => 10,
            MeslError::InvalidState(_) => 11,
            MeslError::Config { .. } => 12,
            MeslError::Parse(_) => 13,
            MeslError::NonConvergence { .. } => 14,
            MeslError::ReadDisturb { .. } => 15,
            MeslError::Schedule(_) => 16,
            MeslError::UnreliableStatistics(_) => 17,
            MeslError::Io { .. } => 18,
        }
    }
}
