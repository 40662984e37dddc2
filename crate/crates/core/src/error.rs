use crate::exterior::ExteriorError;
use crate::symbolic::linalg::LinalgError;
use crate::symbolic::zero::PolicyError;
use crate::symbolic::SymbolicError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error("linear algebra in {context}: {source}")]
    Linalg {
        context: String,
        #[source]
        source: LinalgError,
    },
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("{entity}: {reason}")]
    Invalid { entity: String, reason: String },
    #[error("{0} is not cosymplectic: {1}")]
    NotCosymplectic(String, String),
    #[error("missing {0}")]
    Missing(String),
    #[error("manifest parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unresolved reference to {kind} `{name}`")]
    Unresolved { kind: String, name: String },
    #[error("{0}")]
    Undetected(String),
    #[error("{0}")]
    Other(String),
}

impl Error {
    pub fn invalid(entity: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            entity: entity.into(),
            reason: reason.into(),
        }
    }

    pub fn linalg(context: impl Into<String>, source: LinalgError) -> Self {
        Error::Linalg {
            context: context.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
