use crate::pseudoanalytic::Point;

/// Errors raised by the numerical routines and the command front end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("non-finite field value at {at}")]
    NonFinite { at: Point },

    #[error("degenerate generating pair at {at}: |F conj(G) - conj(F) G| = {magnitude:e}")]
    DegeneratePair { at: Point, magnitude: f64 },

    #[error("weight p vanishes at {at}")]
    SingularWeight { at: Point },

    #[error("quadrature did not converge: error estimate {estimate:e} exceeds tolerance {tol:e}")]
    Quadrature { estimate: f64, tol: f64 },

    #[error("no closed form available for formal degree {degree}")]
    UnsupportedClosedForm { degree: u32 },

    #[error("point ({x1}, {x2}) lies outside the fitted bands")]
    OutsideDomain { x1: f64, x2: f64 },

    #[error("{0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code: 2 for usage, configuration and input problems, 3 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::OutsideDomain { .. }
            | Error::UnsupportedClosedForm { .. }
            | Error::Io(_)
            | Error::Csv(_)
            | Error::Json(_) => 2,
            Error::NonFinite { .. }
            | Error::DegeneratePair { .. }
            | Error::SingularWeight { .. }
            | Error::Quadrature { .. } => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
