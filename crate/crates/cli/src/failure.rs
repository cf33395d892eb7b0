//! Exit-code contract and the error carrier used by every command.
//!
//! 0 = success, all mode sums converged
//! 1 = a requested check failed (proportionality outside --tolerance)
//! 2 = configuration error (parse failure, bad parameters, bad ranges)
//! 3 = domain error (position outside the quantity's domain, divergent
//!     pointlike sum, condensate support outside the cavity)
//! 4 = convergence failure (term ceiling exhausted or non-finite terms;
//!     values are still emitted with per-row flags in the sidecar)

use udw_cavity::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::Policy(_)
        | Error::Quadrature(_)
        | Error::Axis(_)
        | Error::ModeIndex
        | Error::ModeCap { .. } => EXIT_CONFIG,
        Error::Domain { .. }
        | Error::NegativeSigma(_)
        | Error::PointlikeDivergence { .. }
        | Error::SupportOverflow { .. } => EXIT_DOMAIN,
        Error::NonFiniteTerm { .. } | Error::ZeroPartialSum => EXIT_CONVERGENCE,
        Error::At { source, .. } => exit_code(source),
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::new(exit_code(&err), err.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::new(EXIT_CHECK_FAILED, format!("i/o error: {err}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(err: serde_json::Error) -> Self {
        Failure::new(EXIT_CONFIG, format!("config error: {err}"))
    }
}
