use thiserror::Error;

/// Every failure the library can report. The variants map one-to-one onto the
/// CLI exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input violates a documented precondition (bad table, bad subgroup,
    /// unsupported constructor argument, ...).
    #[error("invalid input: {message}")]
    Domain { message: String, context: String },

    /// The transfer fast path cannot be applied to this datum.
    #[error("fast path unavailable: {message}")]
    FastPathUnavailable { message: String, context: String },

    /// A configured resource cap would be exceeded.
    #[error("budget exceeded: {message}")]
    Budget { message: String, context: String },

    /// A value left the representable range.
    #[error("overflow: {message}")]
    Overflow { message: String, context: String },

    /// Two independent computations disagreed. Always a bug.
    #[error("internal consistency failure: {message}")]
    Internal { message: String, context: String },
}

impl Error {
    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain { message: message.into(), context: String::new() }
    }

    pub fn fast_path(message: impl Into<String>) -> Self {
        Error::FastPathUnavailable { message: message.into(), context: String::new() }
    }

    pub fn budget(message: impl Into<String>) -> Self {
        Error::Budget { message: message.into(), context: String::new() }
    }

    pub fn overflow(message: impl Into<String>) -> Self {
        Error::Overflow { message: message.into(), context: String::new() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Error::Internal { message: message.into(), context: String::new() }
    }

    /// Attach a free-form context string (file name, offending values, ...).
    pub fn with_context(mut self, ctx: impl Into<String>) -> Self {
        let ctx = ctx.into();
        match &mut self {
            Error::Domain { context, .. }
            | Error::FastPathUnavailable { context, .. }
            | Error::Budget { context, .. }
            | Error::Overflow { context, .. }
            | Error::Internal { context, .. } => *context = ctx,
        }
        self
    }

    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "datum_invalid",
            Error::FastPathUnavailable { .. } => "fast_path_unavailable",
            Error::Budget { .. } => "budget_exceeded",
            Error::Overflow { .. } => "overflow",
            Error::Internal { .. } => "internal",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Error::Domain { message, .. }
            | Error::FastPathUnavailable { message, .. }
            | Error::Budget { message, .. }
            | Error::Overflow { message, .. }
            | Error::Internal { message, .. } => message,
        }
    }

    pub fn context(&self) -> &str {
        match self {
            Error::Domain { context, .. }
            | Error::FastPathUnavailable { context, .. }
            | Error::Budget { context, .. }
            | Error::Overflow { context, .. }
            | Error::Internal { context, .. } => context,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
