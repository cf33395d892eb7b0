//! Error type shared by all modules of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Physics parameters violate their constraints (L > 0, Omega > 0, ...).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Truncation policy violates its constraints.
    #[error("invalid truncation policy: {0}")]
    Policy(String),

    /// Quadrature spec violates its constraints.
    #[error("invalid quadrature spec: {0}")]
    Quadrature(String),

    /// Malformed axis or grid passed to a map or sweep.
    #[error("invalid axis: {0}")]
    Axis(String),

    /// Mode index 0 is not a cavity mode.
    #[error("mode index must be >= 1")]
    ModeIndex,

    /// Requested mode index beyond the configured hard cap.
    #[error("mode index {requested} exceeds cap {cap}")]
    ModeCap { requested: usize, cap: usize },

    /// Detector position outside the domain of the requested quantity.
    #[error("{quantity}: position x = {x} outside domain [{lo}, {hi}]")]
    Domain {
        quantity: &'static str,
        x: f64,
        lo: f64,
        hi: f64,
    },

    /// Interaction time must be nonnegative.
    #[error("negative interaction time sigma = {0}")]
    NegativeSigma(f64),

    /// The requested mode sum has no finite value for a pointlike detector.
    #[error("{quantity}: mode sum diverges for a pointlike detector (a0 = 0)")]
    PointlikeDivergence { quantity: &'static str },

    /// The condensate support must fit inside the cavity.
    #[error("BEC support [{lo}, {hi}] sticks out of the cavity [0, {cavity}]")]
    SupportOverflow { lo: f64, hi: f64, cavity: f64 },

    /// A series term evaluated to NaN or infinity.
    #[error("non-finite series term at index {index}")]
    NonFiniteTerm { index: usize },

    /// Fidelity a_N / S_N is undefined when the partial sum vanishes.
    #[error("fidelity undefined for zero partial sum")]
    ZeroPartialSum,

    /// Wraps a per-point failure with the offending position.
    #[error("at x = {x}: {source}")]
    At {
        x: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attach the position at which a per-point evaluation failed.
    pub fn at(self, x: f64) -> Error {
        Error::At {
            x,
            source: Box::new(self),
        }
    }
}
