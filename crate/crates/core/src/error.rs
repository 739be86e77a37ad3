use thiserror::Error;

/// Errors raised by the tree, limit-process and numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("points are not in general position: duplicate {axis}-coordinate {value}")]
    DuplicateCoordinate { axis: char, value: f64 },

    #[error("point ({x}, {y}) lies outside the bounding cell")]
    OutOfBounds { x: f64, y: f64 },

    #[error("{what} = {value} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("moment order must be at least 1")]
    Order,

    #[error("grid has {points} points, at least {required} are required")]
    GridTooCoarse { points: usize, required: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),

    #[error("operation needs a non-empty tree")]
    EmptyTree,

    #[error("operation requires a {expected} root split")]
    AxisMismatch { expected: &'static str },

    #[error("quadrature did not converge: error estimate {estimate:e} above tolerance {tol:e}")]
    Quadrature { estimate: f64, tol: f64 },

    #[error("empty sample")]
    EmptySample,

    #[error("invalid experiment: {0}")]
    InvalidSpec(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            domain: "[0, 1]",
        })
    }
}
