//! # rqit-core
//!
//! Numerical toolkit for a qubit encoded in the modes of a free scalar field and
//! observed by a uniformly accelerated partner. Tracing out the causally
//! disconnected Rindler region turns the field into an open system (the Unruh
//! channel), and this crate measures what that does to quantum information:
//!
//! - [`linalg`]: dense complex operators on truncated, composite mode spaces.
//! - [`unruh`]: Minkowski qubit states, the Unruh expansion of the vacuum and
//!   one-particle states, the shared Alice/Rob resource state, and the
//!   low-acceleration 3×3 family.
//! - [`entanglement`]: logarithmic negativity and sweeps over the
//!   orthogonality parameter.
//! - [`teleportation`]: the Schmidt-basis protocol and its Haar-averaged
//!   fidelity, both by Monte-Carlo and by the exact second moment.
//! - [`distinguishability`]: Bures angle between accelerated encodings.
//! - [`geometry`]: the trace-generalized Bures distance, the low-acceleration
//!   state-space metric and its scalar curvature.
//!
//! All operations are pure functions over immutable values.

#![forbid(unsafe_code)]

pub mod distinguishability;
pub mod entanglement;
pub mod geometry;
pub mod grid;
pub mod linalg;
pub mod teleportation;
pub mod unruh;

pub use grid::Grid;
pub use linalg::{DenseOperator, C64};
pub use unruh::{AccelerationParam, BlochVector, FockCutoff, OrthogonalityParam};

use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("space tag {dims:?} does not factor dimension {dim}")]
    InvalidSpaceTag { dims: Vec<usize>, dim: usize },

    #[error("operator with {entries} entries exceeds the size cap of {cap}")]
    SizeCap { entries: usize, cap: usize },

    #[error("factor index {index} out of range for {factors} tensor factors")]
    InvalidFactor { index: usize, factors: usize },

    #[error("operator is not Hermitian (max |A - A^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("operator is not positive semi-definite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("Bloch vector norm {0} exceeds 1")]
    InvalidBloch(f64),

    #[error("Fock cutoff n_max = {n_max} leaves a tail of {tail:e}, above tolerance {tol:e}")]
    Truncation { n_max: usize, tail: f64, tol: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point too close to the pure-state boundary (|n| = {0})")]
    Boundary(f64),

    #[error("polar chart is singular at xi = {xi}, theta = {theta}")]
    ChartSingularity { xi: f64, theta: f64 },

    #[error("outside the domain of the closed form: {0}")]
    Domain(String),
}

impl Error {
    /// True for failures of the numerics themselves (truncation, PSD, chart
    /// breakdown) as opposed to malformed arguments.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian(_)
                | Error::NotPsd(_)
                | Error::Truncation { .. }
                | Error::Boundary(_)
                | Error::ChartSingularity { .. }
                | Error::Domain(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
