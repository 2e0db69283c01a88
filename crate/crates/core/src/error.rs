use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid occupation state: {0}")]
    InvalidState(String),

    #[error("mode index {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("operand mismatch: {0}")]
    Mismatch(String),

    #[error("cutoff {cutoff} too small: {reason} needs at least {required}")]
    CutoffTooSmall {
        cutoff: usize,
        required: usize,
        reason: &'static str,
    },

    #[error("incompatible sector: {0}")]
    IncompatibleSector(String),

    #[error("point outside domain: {0}")]
    OutOfDomain(String),

    #[error("basis with {size} states exceeds the limit of {limit}")]
    BasisTooLarge { size: u128, limit: usize },

    #[error("truncation tail {achieved:e} above requested {requested:e} at cutoff {cutoff}")]
    TailNotReached {
        cutoff: usize,
        achieved: f64,
        requested: f64,
    },

    #[error("quadrature did not converge: {coarse:e} vs {fine:e} (tolerance {tolerance:e})")]
    NonConvergence {
        coarse: f64,
        fine: f64,
        tolerance: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
