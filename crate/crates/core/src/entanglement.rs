//! Logarithmic negativity of the accelerated resource state.

use rayon::prelude::*;

use crate::linalg::{partial_transpose, trace_norm, DenseOperator};
use crate::unruh::{entangled_state, AccelerationParam, FockCutoff, OrthogonalityParam};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NegativityResult {
    pub xi: f64,
    pub r: f64,
    pub log_negativity: f64,
}

/// `E_N(ρ) = log₂ ‖ρ^Γ‖₁`, with the partial transpose taken on tensor factor
/// `factor`. Returns exactly zero whenever the trace norm does not exceed one
/// by more than eigensolver rounding (`64·dim·ε`).
pub fn log_negativity(state: &DenseOperator, factor: usize) -> Result<f64> {
    let norm = trace_norm(&partial_transpose(state, factor)?)?;
    let slack = 64.0 * state.dim() as f64 * f64::EPSILON;
    Ok(if norm <= 1.0 + slack { 0.0 } else { norm.log2() })
}

/// `E_N` of the resource state at each `ξ`, transposing Alice's factor.
/// Results come back in grid order.
pub fn negativity_sweep(
    r: AccelerationParam,
    xi_grid: &[f64],
    cutoff: FockCutoff,
) -> Result<Vec<NegativityResult>> {
    xi_grid
        .par_iter()
        .map(|&xi| {
            let state = entangled_state(OrthogonalityParam::new(xi)?, r, cutoff)?;
            Ok(NegativityResult {
                xi,
                r: r.r(),
                log_negativity: log_negativity(&state, 0)?,
            })
        })
        .collect()
}
