use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid too coarse: spacing {spacing} exceeds d/{per_spread} = {limit}")]
    Resolution {
        spacing: f64,
        per_spread: usize,
        limit: f64,
    },

    #[error("grid does not cover [{lo}, {hi}]")]
    Coverage { lo: f64, hi: f64 },

    #[error("grid is not uniform")]
    NonUniformGrid,

    #[error("grid is not strictly ascending")]
    UnsortedGrid,

    #[error("momentum {p} violates the Nyquist limit {limit} of the position grid")]
    Nyquist { p: f64, limit: f64 },

    #[error("photon-number cutoff {needed} exceeds the cap {cap}")]
    ResourceLimit { needed: usize, cap: usize },

    #[error("state is not an X state")]
    NotXState,

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
