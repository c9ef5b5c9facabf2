//! Bures angle between the accelerated images of `|+⟩` and `|φ⟩`.

use rayon::prelude::*;

use crate::linalg::{root_fidelity, DenseOperator, C64};
use crate::unruh::{unruh_channel, AccelerationParam, FockCutoff, OrthogonalityParam};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleResult {
    pub xi: f64,
    pub r: f64,
    pub theta: f64,
}

/// Root fidelities this close to one are treated as exactly one. arccos has
/// infinite slope there, so rounding of order `ε` would otherwise show up as
/// an angle of order `√ε`.
const UNIT_FIDELITY_SLACK: f64 = 64.0 * f64::EPSILON;

/// `θ = arccos Tr√(√ρ₁ ρ₂ √ρ₁)`. The root fidelity is clipped to `[0, 1]`
/// before the arccos.
pub fn bures_angle(rho1: &DenseOperator, rho2: &DenseOperator) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(rho1.dim(), rho2.dim()));
    }
    let f = root_fidelity(rho1, rho2)?;
    if f >= 1.0 - UNIT_FIDELITY_SLACK {
        return Ok(0.0);
    }
    Ok(f.max(0.0).acos())
}

fn pure(amplitudes: [f64; 2]) -> DenseOperator {
    let ket = amplitudes.map(|a| C64::new(a, 0.0));
    DenseOperator::projector(&ket, vec![2]).expect("qubit ket")
}

/// Region-I images of the two encoding states `|+⟩` and `|φ⟩`.
pub fn accelerated_pair(
    xi: OrthogonalityParam,
    r: AccelerationParam,
    cutoff: FockCutoff,
) -> Result<(DenseOperator, DenseOperator)> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = unruh_channel(&pure([h, h]), r, cutoff)?;
    let phi = unruh_channel(&pure(xi.phi()), r, cutoff)?;
    Ok((plus, phi))
}

/// `θ(ξ)` over the grid, in grid order.
pub fn angle_sweep(
    r: AccelerationParam,
    xi_grid: &[f64],
    cutoff: FockCutoff,
) -> Result<Vec<AngleResult>> {
    xi_grid
        .par_iter()
        .map(|&xi| {
            let (plus, phi) = accelerated_pair(OrthogonalityParam::new(xi)?, r, cutoff)?;
            Ok(AngleResult {
                xi,
                r: r.r(),
                theta: bures_angle(&plus, &phi)?,
            })
        })
        .collect()
}
