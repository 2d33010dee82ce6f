use thiserror::Error;

/// Errors raised by the spin-ring computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} {size} exceeds the limit of {limit}{hint}")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error("sites must differ, got m = n = {0}")]
    InvalidPair(usize),

    #[error("site {site} is out of range for a ring of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("distance {distance} is out of range {min}..={max}")]
    DistanceOutOfRange {
        distance: usize,
        min: usize,
        max: usize,
    },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by problem size rather than bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
