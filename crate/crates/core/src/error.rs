//! Error type shared by every module.

use num_complex::Complex64;
use thiserror::Error;

/// Broad class of an [`Error`], used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    /// The input or a parameter is outside the domain of the operation.
    Domain,
    /// A budget, cap or convergence requirement was not met.
    Budget,
}

impl ErrorClass {
    /// Process exit status for this class: 2 for domain errors, 3 for budget
    /// errors.
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Domain => 2,
            ErrorClass::Budget => 3,
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero-freeness certificate inconclusive at grid size {grid_size}: min modulus {min_modulus:e} vs margin {margin:e}")]
    Indeterminate { grid_size: usize, min_modulus: f64, margin: f64 },

    #[error(
        "Gram matrix is numerically singular (pivot {pivot:e} below threshold {threshold:e}, condition estimate {condition_estimate:e})"
    )]
    IllConditioned { pivot: f64, threshold: f64, condition_estimate: f64 },

    #[error("root {root} lies within {tol:e} of the unit circle")]
    BoundaryRoot { root: Complex64, tol: f64 },

    #[error("series degree {degree} exceeds half the grid size {grid}")]
    Aliasing { degree: usize, grid: usize },

    #[error("grid resolution exceeded: {0}")]
    Resolution(String),

    #[error("boundary set has positive measure; only finite point sets are accepted here")]
    PositiveMeasure,

    #[error("neighbourhoods overlap at level {level}; increase the level")]
    LevelTooSmall { level: usize },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("approximation budget exhausted: {message} (best space error {space_error:e}, best boundary error {boundary_error:e})")]
    ApproximationBudget { message: String, space_error: f64, boundary_error: f64 },

    #[error("order search exceeded cap {cap}: best sup error {best:e} vs tolerance {tol:e}")]
    SearchBudget { cap: usize, best: f64, tol: f64 },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidInput(_)
            | Error::InvalidParameter(_)
            | Error::BoundaryRoot { .. }
            | Error::Aliasing { .. }
            | Error::PositiveMeasure
            | Error::LevelTooSmall { .. } => ErrorClass::Domain,
            Error::Indeterminate { .. }
            | Error::IllConditioned { .. }
            | Error::Resolution(_)
            | Error::Construction(_)
            | Error::Convergence(_)
            | Error::ApproximationBudget { .. }
            | Error::SearchBudget { .. } => ErrorClass::Budget,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Indeterminate { .. } => "indeterminate",
            Error::IllConditioned { .. } => "ill_conditioned",
            Error::BoundaryRoot { .. } => "boundary_root",
            Error::Aliasing { .. } => "aliasing",
            Error::Resolution(_) => "resolution_exceeded",
            Error::PositiveMeasure => "positive_measure",
            Error::LevelTooSmall { .. } => "level_too_small",
            Error::Construction(_) => "construction",
            Error::Convergence(_) => "convergence",
            Error::ApproximationBudget { .. } => "approximation_budget",
            Error::SearchBudget { .. } => "search_budget",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
