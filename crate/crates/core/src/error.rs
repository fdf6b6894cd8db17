use thiserror::Error;

use crate::domains::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The two directions bounding an angle are antiparallel, so the plane
    /// containing the angle is undefined.
    #[error("degenerate angle: directions {0:?} and {1:?} are antiparallel")]
    DegenerateAngle([f64; 3], [f64; 3]),

    /// The boundary function returned a value that cannot be a radius.
    #[error("boundary function is not positive at theta={theta}, phi={phi} (value {value})")]
    Domain { theta: f64, phi: f64, value: f64 },

    #[error("expression error {0}")]
    Parse(#[from] ParseError),

    #[error("metric undefined: element {element} has zero volume")]
    ZeroVolume { element: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
