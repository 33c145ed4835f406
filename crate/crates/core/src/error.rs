use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("domain error in `{field}`: {reason}")]
    Domain { field: &'static str, reason: String },

    /// A numerical procedure failed to reach its target accuracy.
    #[error("numeric failure in {stage}: {detail}")]
    Numeric { stage: &'static str, detail: String },
}

impl Error {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn numeric(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::Numeric {
            stage,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(field, format!("must be finite and > 0, got {value}")))
    }
}
