use thiserror::Error;

/// Errors raised by the numeric core.
///
/// Payloads are stored as `f64` so the error type stays independent of the
/// scalar the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown preset `{name}`; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error("invalid root datum: {0}")]
    InvalidRootDatum(String),

    #[error("log-gamma pole at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("derivative order {order} unsupported (maximum {max})")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("divergent integral C(psi, k={k}, s={s})")]
    Divergent { k: usize, s: f64 },

    #[error("argument {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("Chebyshev proxy of degree {degree} cannot resolve order-{needed} derivatives; use degree >= {suggested}")]
    Resolution {
        degree: usize,
        needed: usize,
        suggested: usize,
    },

    #[error("vector is not unit length (|E| = {norm})")]
    Normalization { norm: f64 },

    #[error("rank-one symbol: use the wave_kernel radial path")]
    RankOne,

    #[error("invalid phase problem: {0}")]
    InvalidProblem(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
