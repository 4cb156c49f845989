//! Exact arithmetic and numerical certification for Fourier expansions of
//! classical and Hilbert newforms at cusps.
//!
//! The crate is organised around a pipeline:
//!
//! - [`numberfield`]: totally real number fields, their fractional ideals in
//!   Hermite normal form, and the different ideal.
//! - [`cuspcore`]: cusps of `Γ₀(N)`, widths, scaling matrices and the
//!   classical field bound `N′ = N/(cd, N)`.
//! - [`hilbertbound`]: the congruence subgroup `Γ_μ(𝔫)`, the field bound
//!   `N₀` over a totally real field, and the expansion-support ideal.
//! - [`etaforms`]: an exact integer `q`-expansion corpus built from eta
//!   quotients, with rigorous evaluation tail bounds.
//! - [`cuspexpand`]: numerical Fourier expansion of `f‖ₖσ` by sampling and
//!   discrete Fourier inversion, with per-coefficient error bounds.
//! - [`recognize`]: certification that recovered coefficients lie in a
//!   cyclotomic field `ℚ(ζ_M)` via exact integer-relation detection.

pub mod bignum;
pub mod cuspcore;
pub mod cuspexpand;
pub mod cyclotomic;
pub mod etaforms;
pub mod fields;
pub mod hilbertbound;
pub mod intmat;
pub mod lll;
pub mod numberfield;
pub mod recognize;

use thiserror::Error;

/// Errors surfaced by the crate's fallible contracts.
///
/// Precondition violations, unachievable tolerances and verification
/// failures are kept distinct because callers (notably the CLI) map them to
/// different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field description: {0}")]
    InvalidField(String),
    #[error("operands belong to different number fields")]
    MismatchedFields,
    #[error("operation undefined for the zero ideal: {0}")]
    ZeroIdeal(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid eta quotient: {0}")]
    InvalidEtaQuotient(String),
    #[error("tolerance unachievable: {0}")]
    ToleranceUnachievable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
