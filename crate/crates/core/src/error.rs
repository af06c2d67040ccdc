use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {re}+{im}i is not in the open upper half-plane")]
    NotInUpperHalfPlane { re: f64, im: f64 },

    #[error("pole encountered at {at}")]
    PoleEncountered { at: Complex64 },

    #[error("degenerate linear-fractional map (|det| = {det:e})")]
    DegenerateMap { det: f64 },

    #[error("measure has neither atoms nor density mass")]
    EmptyMeasure,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("estimated mass leaks through the inversion window boundary ({side} edge: {edge_value:e} > 10 x median {median:e})")]
    WindowTooSmall {
        side: &'static str,
        edge_value: f64,
        median: f64,
    },

    #[error("function is not contractive at i: |S(i)| = {modulus}")]
    NotContractive { modulus: f64 },

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("quadrature failed to reach tolerance {tol:e} within {panels} panels (last change {last_change:e})")]
    QuadratureFailed {
        tol: f64,
        panels: usize,
        last_change: f64,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    #[error("tag mismatch: |S(i) - kappa| = {deviation:e}")]
    TagMismatch { deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
