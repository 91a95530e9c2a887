use serde::{Deserialize, Serialize};
use stplan_core::{Error as CoreError, ValidationError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at {pointer}: {message}")]
    Parse { pointer: String, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("oracle mismatch: {0}")]
    Mismatch(String),
    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, ServiceError>;

impl ServiceError {
    pub fn validation(errors: Vec<ValidationError>) -> Self {
        ServiceError::Core(CoreError::Validation(errors))
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        ServiceError::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::Io { .. } => "io_error",
            ServiceError::Parse { .. } => "parse_error",
            ServiceError::Usage(_) => "usage_error",
            ServiceError::NotFound(_) => "not_found",
            ServiceError::Mismatch(_) => "oracle_mismatch",
            ServiceError::Csv(_) => "csv_error",
            ServiceError::Core(e) => match e {
                CoreError::Validation(_) => "validation_error",
                CoreError::IndexOutOfRange(_) => "index_out_of_range",
                CoreError::InstanceTooLarge { .. } => "instance_too_large",
                CoreError::ZeroIdeal(_) => "zero_ideal",
                CoreError::Axes(_) => "invalid_axes",
                CoreError::MissingStakeholders(_) => "missing_stakeholders",
                CoreError::Infeasible => "infeasible",
                CoreError::Unbounded => "unbounded",
                CoreError::IterationLimit => "iteration_limit",
                CoreError::EmptyRegion => "empty_region",
                CoreError::Protocol(_) => "protocol_violation",
                CoreError::Labels(_) => "invalid_labels",
                CoreError::UnknownRule(_) => "unknown_rule",
                CoreError::UnknownStrategy(_) => "unknown_strategy",
                CoreError::Replay(_) => "replay_diverged",
            },
        }
    }

    /// HTTP status for the API.
    pub fn status(&self) -> u16 {
        match self {
            ServiceError::NotFound(_) => 404,
            ServiceError::Io { .. } | ServiceError::Mismatch(_) | ServiceError::Csv(_) => 500,
            ServiceError::Parse { .. } | ServiceError::Usage(_) => 422,
            ServiceError::Core(e) => match e {
                CoreError::Protocol(_) | CoreError::EmptyRegion | CoreError::Replay(_) => 409,
                CoreError::IterationLimit => 500,
                _ => 422,
            },
        }
    }

    pub fn body(&self) -> ErrorBody {
        let (pointer, errors) = match self {
            ServiceError::Parse { pointer, .. } => (pointer.clone(), Vec::new()),
            ServiceError::Core(CoreError::Validation(errors)) => (
                errors.first().map(|e| e.pointer.clone()).unwrap_or_default(),
                errors.clone(),
            ),
            ServiceError::Core(CoreError::Labels(_)) => ("/labels".into(), Vec::new()),
            ServiceError::Core(CoreError::UnknownStrategy(id)) => (format!("/labels/{}", escape(id)), Vec::new()),
            ServiceError::Core(CoreError::UnknownRule(_)) => ("/rule".into(), Vec::new()),
            _ => (String::new(), Vec::new()),
        };
        ErrorBody {
            code: self.code().to_string(),
            message: self.to_string(),
            pointer,
            errors,
        }
    }
}

/// The JSON shape of every error, on stderr and in API responses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    /// JSON pointer into the offending document; empty when not applicable.
    pub pointer: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<ValidationError>,
}

/// Escapes a JSON-pointer reference token.
pub fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

/// Deserializes JSON text, reporting the failing location as a JSON pointer.
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let pointer: String = err
            .path()
            .iter()
            .filter_map(|seg| match seg {
                serde_path_to_error::Segment::Seq { index } => Some(format!("/{index}")),
                serde_path_to_error::Segment::Map { key } => Some(format!("/{}", escape(key))),
                serde_path_to_error::Segment::Enum { .. } | serde_path_to_error::Segment::Unknown => None,
            })
            .collect();
        ServiceError::Parse {
            pointer,
            message: err.into_inner().to_string(),
        }
    })?;
    de.end().map_err(|e| ServiceError::Parse {
        pointer: String::new(),
        message: e.to_string(),
    })?;
    Ok(value)
}
