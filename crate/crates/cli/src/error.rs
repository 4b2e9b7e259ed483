use residuum_core::{
    identities::IdentityError, EvalError, GeometryError, ImproperError, ParseError, QuadError,
    ResidueError,
};
use serde_json::json;

/// Broad failure classes, each with its own exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCode {
    Validation,
    NonConvergence,
    Verification,
}

impl ErrorCode {
    pub fn name(self) -> &'static str {
        match self {
            ErrorCode::Validation => "validation",
            ErrorCode::NonConvergence => "non_convergence",
            ErrorCode::Verification => "verification",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            ErrorCode::Validation => 1,
            ErrorCode::NonConvergence => 2,
            ErrorCode::Verification => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: ErrorCode,
    pub message: String,
    /// The config field or flag the error is about, when there is one.
    pub field: Option<String>,
}

impl CliError {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> CliError {
        CliError {
            code: ErrorCode::Validation,
            message: message.into(),
            field: Some(field.into()),
        }
    }

    pub fn non_convergence(message: impl Into<String>) -> CliError {
        CliError {
            code: ErrorCode::NonConvergence,
            message: message.into(),
            field: None,
        }
    }

    pub fn with_field(mut self, field: &str) -> CliError {
        if self.field.is_none() {
            self.field = Some(field.to_string());
        }
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "error": {
                "code": self.code.name(),
                "exit_code": self.code.exit_code(),
                "message": self.message,
                "field": self.field,
            }
        })
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> CliError {
        let field = match &e {
            GeometryError::InvalidParameter { name, .. } => name.to_string(),
            _ => "geometry".to_string(),
        };
        CliError::validation(field, e.to_string())
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> CliError {
        CliError::validation("expression", e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> CliError {
        CliError::validation("expression", e.to_string())
    }
}

impl From<QuadError> for CliError {
    fn from(e: QuadError) -> CliError {
        match e {
            QuadError::NonConvergent { .. } => CliError::non_convergence(e.to_string()),
            QuadError::Geometry(g) => g.into(),
            QuadError::Schedule(_) => CliError::validation("schedule", e.to_string()),
            QuadError::InvalidExcision(_) => CliError::validation("singularities", e.to_string()),
            QuadError::SingularityOnPath(_) | QuadError::SingularityInDomain(_) => {
                CliError::validation("singularities", e.to_string())
            }
        }
    }
}

impl From<ResidueError> for CliError {
    fn from(e: ResidueError) -> CliError {
        match e {
            ResidueError::Quad(q) => q.into(),
            ResidueError::Schedule(_) => CliError::validation("schedule", e.to_string()),
            ResidueError::NonConvergent { .. }
            | ResidueError::SectorNonConvergent(_)
            | ResidueError::InversionMismatch { .. } => CliError::non_convergence(e.to_string()),
        }
    }
}

impl From<ImproperError> for CliError {
    fn from(e: ImproperError) -> CliError {
        match e {
            ImproperError::Quad(q) => q.into(),
            ImproperError::Schedule(_) => CliError::validation("schedule", e.to_string()),
            ImproperError::Oscillatory(_) | ImproperError::MismatchBeyondTolerance { .. } => {
                CliError::non_convergence(e.to_string())
            }
            ImproperError::EndpointSingular(_) | ImproperError::NotEvaluable(_) => {
                CliError::validation("interval", e.to_string())
            }
            ImproperError::InvalidSingularities(_) => {
                CliError::validation("singularities", e.to_string())
            }
        }
    }
}

impl From<IdentityError> for CliError {
    fn from(e: IdentityError) -> CliError {
        match e {
            IdentityError::Quad(q) => q.into(),
            IdentityError::Residue(r) => r.into(),
            IdentityError::Geometry(g) => g.into(),
            IdentityError::Schedule(_) => CliError::validation("schedule", e.to_string()),
            IdentityError::Invalid(_) => CliError::validation("suite", e.to_string()),
            IdentityError::NonConvergent(_) | IdentityError::TruncationNonConvergent => {
                CliError::non_convergence(e.to_string())
            }
        }
    }
}
