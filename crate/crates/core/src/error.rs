use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every fallible operation in the crate reports one of these.
///
/// The enum is `Clone` so memo tables can cache failures alongside values.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("n = {n} exceeds the exact-mode cap of {cap}")]
    Capacity { n: usize, cap: usize },

    #[error("probability undefined: no realisation of {seq:?}")]
    UndefinedProbability { seq: Vec<i64> },

    #[error("singularity in {context} at {seq:?}")]
    Singularity { context: String, seq: Vec<i64> },

    #[error("{seq:?} lies outside the domain (root distance {distance}, radius {radius})")]
    OutOfDomain {
        seq: Vec<i64>,
        distance: u64,
        radius: u64,
    },

    #[error("domain radius {have} too small, {need} required")]
    RequiredRadius { need: u64, have: u64 },

    #[error("sequence graph is disconnected into {} components", components.len())]
    Disconnected { components: Vec<Vec<Vec<i64>>> },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn singular(context: impl Into<String>, seq: &[i64]) -> Self {
        Error::Singularity {
            context: context.into(),
            seq: seq.to_vec(),
        }
    }

    /// Short machine-readable tag, used by the CLI error payload.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::Capacity { .. } => "capacity",
            Error::UndefinedProbability { .. } => "undefined_probability",
            Error::Singularity { .. } => "singularity",
            Error::OutOfDomain { .. } => "out_of_domain",
            Error::RequiredRadius { .. } => "required_radius",
            Error::Disconnected { .. } => "disconnected",
        }
    }
}
