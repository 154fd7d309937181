use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("S^{j} does not occur in the {part} part (multiplicity 0)")]
    ZeroMultiplicity { j: u32, part: &'static str },

    #[error("invalid real structure: {0}")]
    InvalidRealStructure(String),

    #[error("level has a double zero (relative discriminant {discriminant:e})")]
    IrregularLevel { discriminant: f64 },

    #[error("linear system is inconsistent (residual {residual:e})")]
    NoSolution { residual: f64 },

    #[error("non-finite value encountered at step {step}")]
    NonFinite { step: usize },

    #[error("singular matrix at grid index {index}")]
    Singular { index: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics (blow-up, singular or inconsistent
    /// solves) as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoSolution { .. } | Error::NonFinite { .. } | Error::Singular { .. }
        )
    }
}
