//! Minkowski qubit states seen through the Unruh channel.
//!
//! For a uniformly accelerated observer the Minkowski vacuum and one-particle
//! states expand over region-I/region-II Fock pairs as
//!
//! ```text
//! |0⟩_M = Σ_n  tanhⁿr / cosh r          |n⟩_I |n⟩_II
//! |1⟩_M = Σ_n  tanhⁿr √(n+1) / cosh²r   |n+1⟩_I |n⟩_II
//! ```
//!
//! Region II is causally disconnected, so it is traced out. On a truncated
//! tower of `n_max + 2` region-I levels the resulting map sends any 2×2
//! operator to a `(n_max+2)`-dimensional one.

use std::f64::consts::PI;

use crate::linalg::{DenseOperator, C64};
use crate::{Error, Result};

/// Truncation tolerance used when a cutoff is derived from an acceleration.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-12;

/// Largest `r` for which the 3×3 low-acceleration family is trusted.
pub const SMALL_R_LIMIT: f64 = 0.3;

/// Smallest cutoff ever chosen automatically.
const MIN_AUTO_CUTOFF: usize = 16;

/// Squeezing parameter `r ≥ 0` of the Unruh expansion.
///
/// Related to the dimensionless frequency `Ω = ω_R / (a/c)` through
/// `cosh r = (1 - e^{-2πΩ})^{-1/2}`, equivalently `tanh r = e^{-πΩ}`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct AccelerationParam(f64);

impl AccelerationParam {
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "acceleration parameter r must be finite and >= 0, got {r}"
            )));
        }
        Ok(Self(r))
    }

    /// The inertial limit `r = 0`.
    pub const INERTIAL: Self = Self(0.0);

    /// From `Ω = ω_R / (a/c)`; `Ω = ∞` is the inertial observer.
    pub fn from_omega(omega: f64) -> Result<Self> {
        if omega.is_nan() || omega <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "Omega must be positive, got {omega}"
            )));
        }
        Self::new((-PI * omega).exp().atanh())
    }

    /// Inverse of [`from_omega`](Self::from_omega); infinite at `r = 0`.
    pub fn to_omega(self) -> f64 {
        -self.tanh().ln() / PI
    }

    pub fn r(self) -> f64 {
        self.0
    }

    pub fn cosh(self) -> f64 {
        self.0.cosh()
    }

    pub fn tanh(self) -> f64 {
        self.0.tanh()
    }
}

/// Orthogonality parameter `ξ ∈ [0, 1)` of the encoding pair
/// `|+⟩, |φ⟩ = √((1-ξ)/2)|0⟩ - √((1+ξ)/2)|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct OrthogonalityParam(f64);

impl OrthogonalityParam {
    pub fn new(xi: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&xi) {
            return Err(Error::InvalidParameter(format!(
                "orthogonality parameter must lie in [0, 1), got {xi}"
            )));
        }
        Ok(Self(xi))
    }

    pub const ORTHOGONAL: Self = Self(0.0);

    pub fn xi(self) -> f64 {
        self.0
    }

    /// `η_{++} = 1 + √(1+ξ)`
    pub fn eta_pp(self) -> f64 {
        1.0 + (1.0 + self.0).sqrt()
    }

    /// `η_{+-} = 1 + √(1-ξ)`
    pub fn eta_pm(self) -> f64 {
        1.0 + (1.0 - self.0).sqrt()
    }

    /// `η_{-+} = 1 - √(1+ξ)`
    pub fn eta_mp(self) -> f64 {
        1.0 - (1.0 + self.0).sqrt()
    }

    /// `η_{--} = 1 - √(1-ξ)`
    pub fn eta_mm(self) -> f64 {
        1.0 - (1.0 - self.0).sqrt()
    }

    /// Amplitudes of `|φ⟩` in the number basis.
    pub fn phi(self) -> [f64; 2] {
        [((1.0 - self.0) / 2.0).sqrt(), -((1.0 + self.0) / 2.0).sqrt()]
    }

    /// `⟨+|φ⟩`, zero at `ξ = 0`.
    pub fn plus_phi_overlap(self) -> f64 {
        let [a, b] = self.phi();
        (a + b) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Bloch-ball coordinates `(x, y, z)` of a qubit state `(1 + n·σ)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: Self = Self::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array([x, y, z]: [f64; 3]) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `self + t·direction`.
    pub fn displaced(self, direction: [f64; 3], t: f64) -> Self {
        Self::new(
            self.x + t * direction[0],
            self.y + t * direction[1],
            self.z + t * direction[2],
        )
    }
}

/// Truncation of the region-I Fock tower: vacuum amplitudes run over
/// `n = 0..=n_max`, so the region-I space has `n_max + 2` levels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FockCutoff {
    n_max: usize,
    tol: f64,
}

impl FockCutoff {
    pub fn new(n_max: usize) -> Self {
        Self::with_tolerance(n_max, DEFAULT_TRUNCATION_TOL)
    }

    pub fn with_tolerance(n_max: usize, tol: f64) -> Self {
        Self { n_max, tol }
    }

    /// Smallest cutoff (at least 16) whose discarded probability is below
    /// `tol` for both the vacuum and the one-particle expansion at `r`.
    ///
    /// The vacuum tail alone gives `n_max ≥ ln(tol) / (2 ln tanh r)`; the
    /// one-particle tail carries an extra `(n+1)` weight and can need a few
    /// more levels.
    pub fn for_acceleration(r: AccelerationParam, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "truncation tolerance must lie in (0, 1), got {tol}"
            )));
        }
        let t = r.tanh();
        let mut n_max = MIN_AUTO_CUTOFF;
        if t > 0.0 {
            let geometric = (tol.ln() / (2.0 * t.ln())).ceil();
            if geometric.is_finite() && geometric > n_max as f64 {
                n_max = geometric as usize;
            }
        }
        let mut cutoff = Self::with_tolerance(n_max, tol);
        while cutoff.tail(r) > tol {
            cutoff.n_max += 1;
            if cutoff.n_max > 1 << 16 {
                return Err(Error::Truncation {
                    n_max: cutoff.n_max,
                    tail: cutoff.tail(r),
                    tol,
                });
            }
        }
        Ok(cutoff)
    }

    pub fn n_max(self) -> usize {
        self.n_max
    }

    pub fn tolerance(self) -> f64 {
        self.tol
    }

    /// Number of region-I levels kept, `n_max + 2`.
    pub fn levels(self) -> usize {
        self.n_max + 2
    }

    /// The same tolerance with twice the cutoff.
    pub fn doubled(self) -> Self {
        Self::with_tolerance(2 * self.n_max.max(1), self.tol)
    }

    /// Discarded norm of the vacuum expansion, `tanh^{2(n_max+1)} r`.
    pub fn vacuum_tail(self, r: AccelerationParam) -> f64 {
        r.tanh().powi(2 * (self.n_max as i32 + 1))
    }

    /// Discarded norm of the one-particle expansion,
    /// `x^m [(m+1) - m x]` with `x = tanh²r`, `m = n_max + 1`.
    pub fn one_particle_tail(self, r: AccelerationParam) -> f64 {
        let x = r.tanh().powi(2);
        let m = (self.n_max + 1) as f64;
        x.powf(m) * ((m + 1.0) - m * x)
    }

    /// Worst of the two tails.
    pub fn tail(self, r: AccelerationParam) -> f64 {
        self.vacuum_tail(r).max(self.one_particle_tail(r))
    }

    fn check(self, r: AccelerationParam) -> Result<()> {
        let tail = self.tail(r);
        if tail > self.tol {
            return Err(Error::Truncation {
                n_max: self.n_max,
                tail,
                tol: self.tol,
            });
        }
        Ok(())
    }
}

/// `(1 + n·σ)/2`.
pub fn minkowski_qubit(bloch: BlochVector) -> Result<DenseOperator> {
    let norm = bloch.norm();
    if !norm.is_finite() || norm > 1.0 + 1e-12 {
        return Err(Error::InvalidBloch(norm));
    }
    let BlochVector { x, y, z } = bloch;
    let m = [
        [C64::new((1.0 + z) / 2.0, 0.0), C64::new(x / 2.0, -y / 2.0)],
        [C64::new(x / 2.0, y / 2.0), C64::new((1.0 - z) / 2.0, 0.0)],
    ];
    DenseOperator::from_fn(vec![2], |i, j| m[i][j])
}

/// Vacuum amplitudes `c_n = tanhⁿr / cosh r` for `n = 0..=n_max`.
pub fn unruh_vacuum_amplitudes(r: AccelerationParam, cutoff: FockCutoff) -> Result<Vec<f64>> {
    cutoff.check(r)?;
    let (t, c) = (r.tanh(), r.cosh());
    Ok((0..=cutoff.n_max())
        .map(|n| t.powi(n as i32) / c)
        .collect())
}

/// One-particle amplitudes `d_n = tanhⁿr √(n+1) / cosh²r` on `|n+1⟩_I|n⟩_II`.
pub fn unruh_one_particle_amplitudes(
    r: AccelerationParam,
    cutoff: FockCutoff,
) -> Result<Vec<f64>> {
    cutoff.check(r)?;
    let (t, c) = (r.tanh(), r.cosh());
    Ok((0..=cutoff.n_max())
        .map(|n| t.powi(n as i32) * ((n + 1) as f64).sqrt() / (c * c))
        .collect())
}

/// Applies the region-II-traced Unruh map to an arbitrary 2×2 operator
/// written in the Minkowski `{|0⟩, |1⟩}` basis. Linear, trace preserving up
/// to truncation, and completely positive.
pub fn unruh_channel(
    op: &DenseOperator,
    r: AccelerationParam,
    cutoff: FockCutoff,
) -> Result<DenseOperator> {
    if op.dim() != 2 {
        return Err(Error::DimensionMismatch(op.dim(), 2));
    }
    let vac = unruh_vacuum_amplitudes(r, cutoff)?;
    let one = unruh_one_particle_amplitudes(r, cutoff)?;
    let levels = cutoff.levels();
    let mut out = nalgebra::DMatrix::<C64>::zeros(levels, levels);
    let (a00, a01, a10, a11) = (op.get(0, 0), op.get(0, 1), op.get(1, 0), op.get(1, 1));
    for n in 0..=cutoff.n_max() {
        let (c, d) = (vac[n], one[n]);
        out[(n, n)] += a00 * (c * c);
        out[(n + 1, n + 1)] += a11 * (d * d);
        out[(n, n + 1)] += a01 * (c * d);
        out[(n + 1, n)] += a10 * (c * d);
    }
    DenseOperator::new(out, vec![levels])
}

/// Region-I state of a Minkowski qubit with Bloch vector `bloch`.
pub fn effective_qubit(
    bloch: BlochVector,
    r: AccelerationParam,
    cutoff: FockCutoff,
) -> Result<DenseOperator> {
    unruh_channel(&minkowski_qubit(bloch)?, r, cutoff)
}

/// Alice/Rob resource state after Rob accelerates, on `2 ⊗ (n_max+2)`:
///
/// ```text
/// ρ = 1/(8 cosh²r) Σ_n tanh^{2n} r · χ[ η₊₋|0,n⟩ + η₋₋|1,n⟩
///                                      + η₋₊ √(n+1)/cosh r |0,n+1⟩
///                                      + η₊₊ √(n+1)/cosh r |1,n+1⟩ ]
/// ```
///
/// with `χ|ψ⟩ = |ψ⟩⟨ψ|`. At `r = 0` this is the pure state
/// `(|++⟩ + |-φ⟩)/√2` on the lowest two Fock levels.
pub fn entangled_state(
    xi: OrthogonalityParam,
    r: AccelerationParam,
    cutoff: FockCutoff,
) -> Result<DenseOperator> {
    cutoff.check(r)?;
    let levels = cutoff.levels();
    let dim = 2 * levels;
    let (c, t) = (r.cosh(), r.tanh());
    let prefactor = 1.0 / (8.0 * c * c);
    let mut out = nalgebra::DMatrix::<C64>::zeros(dim, dim);
    let mut ket = vec![0.0f64; dim];
    for n in 0..=cutoff.n_max() {
        ket.iter_mut().for_each(|v| *v = 0.0);
        let raise = ((n + 1) as f64).sqrt() / c;
        ket[n] = xi.eta_pm();
        ket[levels + n] = xi.eta_mm();
        ket[n + 1] = xi.eta_mp() * raise;
        ket[levels + n + 1] = xi.eta_pp() * raise;
        let weight = prefactor * t.powi(2 * n as i32);
        if weight == 0.0 {
            break;
        }
        let support: Vec<usize> = [n, n + 1, levels + n, levels + n + 1].to_vec();
        for &i in &support {
            for &j in &support {
                out[(i, j)] += C64::new(weight * (ket[i] * ket[j]), 0.0);
            }
        }
    }
    DenseOperator::new(out, vec![2, levels])
}

/// The low-acceleration 3×3 effective qubit, with `C = cosh r`, `T = tanh r`:
///
/// ```text
///           ⎛ 1+z          (x-iy)/C                   0             ⎞
/// 1/(2C²) · ⎜ (x+iy)/C     (1-z)/C² + T²(1+z)         √2T²(x-iy)/C  ⎟
///           ⎝ 0            √2T²(x+iy)/C               2T²(1-z)/C²   ⎠
/// ```
///
/// Terms of order `r⁴` are dropped, so the trace is `1 + O(r⁴)` rather than
/// exactly one; the geometry routines rely on this family verbatim.
pub fn small_r_qubit(bloch: BlochVector, r: AccelerationParam) -> DenseOperator {
    if r.r() > SMALL_R_LIMIT {
        log::warn!(
            "small_r_qubit called with r = {} > {SMALL_R_LIMIT}; O(r^4) terms are no longer negligible",
            r.r()
        );
    }
    let (c, t2) = (r.cosh(), r.tanh().powi(2));
    let BlochVector { x, y, z } = bloch;
    let lower = C64::new(x, y);
    let upper = C64::new(x, -y);
    let zero = C64::new(0.0, 0.0);
    let s2 = std::f64::consts::SQRT_2;
    let m = [
        [C64::new(1.0 + z, 0.0), upper / c, zero],
        [
            lower / c,
            C64::new((1.0 - z) / (c * c) + t2 * (1.0 + z), 0.0),
            upper * (s2 * t2 / c),
        ],
        [zero, lower * (s2 * t2 / c), C64::new(2.0 * t2 * (1.0 - z) / (c * c), 0.0)],
    ];
    let scale = 1.0 / (2.0 * c * c);
    DenseOperator::from_fn(vec![3], |i, j| m[i][j] * scale).expect("3x3 tag is valid")
}
