//! Geometry of the low-acceleration effective qubit.
//!
//! States here are the subnormalized 3×3 family of
//! [`small_r_qubit`](crate::unruh::small_r_qubit). Distances between them use
//! the trace-generalized Bures distance `D = 2(Tr ρ Tr σ − F)`, which vanishes
//! only on the diagonal even when `Tr ρ ≠ 1`. For nearby states
//! `D(ρ, ρ + dρ) = 2 ds²`, and the closed-form line element is
//!
//! ```text
//! ds² = 1/(4C⁴) { dn² + T²dz² + dS²/(1−n²) · [1 − T²(1+z)²/(1−n²)] },   dS = n·dn
//! ```
//!
//! which at `r = 0` is the round Bures metric of a qubit, a 3-sphere of radius
//! 1/2 with scalar curvature 24.

use std::sync::OnceLock;

use nalgebra::{Matrix3, SymmetricEigen};
use rayon::prelude::*;

use crate::linalg::{root_fidelity, DenseOperator};
use crate::unruh::{small_r_qubit, AccelerationParam, BlochVector, SMALL_R_LIMIT};
use crate::{Error, Result};

/// Largest Bloch radius (or polar `ξ_c`) at which geometric quantities are
/// evaluated. The metric diverges at the pure-state boundary.
pub const BOUNDARY_LIMIT: f64 = 0.9;

/// Distance from the boundary below which the closed-form metric refuses to
/// evaluate, in units of `1 − n²`.
pub const SINGULAR_MARGIN: f64 = 1e-9;

/// Polar coordinates closer than this to `ξ_c = 0` or `sin θ = 0` are
/// rejected as chart singularities.
pub const CHART_MARGIN: f64 = 1e-6;

/// Finite-difference step of the curvature oracle.
pub const CURVATURE_STEP: f64 = 1e-4;

/// Default displacement of [`numeric_metric`].
pub const DEFAULT_METRIC_STEP: f64 = 1e-3;

/// `F = (Tr √(√ρ σ √ρ))²`.
pub fn fidelity(rho: &DenseOperator, sigma: &DenseOperator) -> Result<f64> {
    Ok(root_fidelity(rho, sigma)?.powi(2))
}

/// `D = 2(Tr ρ · Tr σ − F)`.
pub fn generalized_bures_distance(rho: &DenseOperator, sigma: &DenseOperator) -> Result<f64> {
    Ok(2.0 * (rho.trace_re() * sigma.trace_re() - fidelity(rho, sigma)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// `(x, y, z)`
    CartesianBloch,
    /// `(ξ_c, θ, φ)` with `(x, y, z) = ξ_c (sinθ cosφ, sinθ sinφ, cosθ)`
    Polar,
}

/// A metric tensor at a point of the effective state space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricValue {
    pub point: [f64; 3],
    pub chart: Chart,
    pub tensor: Matrix3<f64>,
}

impl MetricValue {
    /// `vᵀ g v`.
    pub fn line_element(&self, v: [f64; 3]) -> f64 {
        let v = nalgebra::Vector3::from(v);
        v.dot(&(self.tensor * v))
    }

    pub fn eigenvalues(&self) -> [f64; 3] {
        let mut values: Vec<f64> = SymmetricEigen::new(self.tensor).eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        [values[0], values[1], values[2]]
    }

    pub fn is_positive_definite(&self) -> bool {
        self.eigenvalues()[0] > 0.0
    }

    pub fn symmetry_defect(&self) -> f64 {
        (self.tensor - self.tensor.transpose()).abs().max()
    }
}

/// Largest entrywise difference scaled by the local metric size,
/// `max_ij |a_ij − b_ij| / √(a_ii a_jj)`. Off-diagonal entries that vanish
/// by symmetry would make a plain per-entry relative error meaningless.
pub fn relative_discrepancy(reference: &MetricValue, other: &MetricValue) -> f64 {
    let (a, b) = (reference.tensor, other.tensor);
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let scale = (a[(i, i)] * a[(j, j)]).abs().sqrt();
            worst = worst.max((a[(i, j)] - b[(i, j)]).abs() / scale);
        }
    }
    worst
}

/// Closed-form metric in Bloch coordinates:
/// `g_ij = [δ_ij + T² δ_i3 δ_j3 + n_i n_j (1 − T²(1+z)²/(1−n²)) / (1−n²)] / (4C⁴)`.
pub fn metric_cartesian(bloch: BlochVector, r: AccelerationParam) -> Result<MetricValue> {
    let n2 = bloch.norm_sq();
    if n2.is_nan() || n2 >= 1.0 - SINGULAR_MARGIN {
        return Err(Error::Boundary(bloch.norm()));
    }
    let (c, t2) = (r.cosh(), r.tanh().powi(2));
    let n = nalgebra::Vector3::from(bloch.to_array());
    let gap = 1.0 - n2;
    let radial = (1.0 - t2 * (1.0 + bloch.z).powi(2) / gap) / gap;
    let mut g = Matrix3::identity() + n * n.transpose() * radial;
    g[(2, 2)] += t2;
    Ok(MetricValue {
        point: bloch.to_array(),
        chart: Chart::CartesianBloch,
        tensor: g / (4.0 * c.powi(4)),
    })
}

fn check_polar(xi_c: f64, theta: f64) -> Result<()> {
    if !(xi_c.is_finite() && theta.is_finite()) || xi_c <= CHART_MARGIN || theta.sin() <= CHART_MARGIN
    {
        return Err(Error::ChartSingularity { xi: xi_c, theta });
    }
    if xi_c > BOUNDARY_LIMIT {
        return Err(Error::Boundary(xi_c));
    }
    Ok(())
}

/// The two ways to read the bare `r` in the off-diagonal entry of the printed
/// perturbation `h`: the radial coordinate `ξ_c`, or the acceleration `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HReading {
    CoordinateXi,
    Acceleration,
}

impl HReading {
    pub fn label(self) -> &'static str {
        match self {
            Self::CoordinateXi => "xi_c",
            Self::Acceleration => "r",
        }
    }
}

/// The printed polar form `(g + h)/(4C⁴)` with
/// `g = diag(1/(1−ξ²), ξ², ξ² sin²θ)` and
///
/// ```text
///     ⎛ T²(1+ξcosθ)² + T²cos²θ/2    −T² f sinθcosθ/2    0 ⎞
/// h = ⎜ −T² f sinθcosθ/2            T²ξ²sin²θ/2         0 ⎟
///     ⎝ 0                            0                   0 ⎠
/// ```
///
/// where `f` is chosen by `reading`.
pub fn metric_polar_with(
    xi_c: f64,
    theta: f64,
    r: AccelerationParam,
    reading: HReading,
) -> Result<MetricValue> {
    check_polar(xi_c, theta)?;
    let (c, t2) = (r.cosh(), r.tanh().powi(2));
    let (s, co) = theta.sin_cos();
    let f = match reading {
        HReading::CoordinateXi => xi_c,
        HReading::Acceleration => r.r(),
    };
    let x2 = xi_c * xi_c;
    let off = -0.5 * t2 * f * s * co;
    let tensor = Matrix3::new(
        1.0 / (1.0 - x2) + t2 * (1.0 + xi_c * co).powi(2) + 0.5 * t2 * co * co,
        off,
        0.0,
        off,
        x2 + 0.5 * t2 * x2 * s * s,
        0.0,
        0.0,
        0.0,
        x2 * s * s,
    ) / (4.0 * c.powi(4));
    Ok(MetricValue {
        point: [xi_c, theta, 0.0],
        chart: Chart::Polar,
        tensor,
    })
}

/// The printed polar form with the `h` reading that best matches
/// [`metric_polar_pullback`]; see [`selected_h_reading`].
pub fn metric_polar(xi_c: f64, theta: f64, r: AccelerationParam) -> Result<MetricValue> {
    metric_polar_with(xi_c, theta, r, selected_h_reading())
}

/// `Jᵀ G J`: the Cartesian closed form carried to polar coordinates by the
/// Jacobian of `(x, y, z) = ξ_c(sinθ cosφ, sinθ sinφ, cosθ)`. The metric is
/// symmetric about the z axis, so the result does not depend on `φ` and is
/// evaluated at `φ = 0`.
pub fn metric_polar_pullback(xi_c: f64, theta: f64, r: AccelerationParam) -> Result<MetricValue> {
    check_polar(xi_c, theta)?;
    let (s, co) = theta.sin_cos();
    let cart = metric_cartesian(BlochVector::new(xi_c * s, 0.0, xi_c * co), r)?;
    #[rustfmt::skip]
    let jac = Matrix3::new(
        s,  xi_c * co,  0.0,
        0.0, 0.0,       xi_c * s,
        co, -xi_c * s,  0.0,
    );
    Ok(MetricValue {
        point: [xi_c, theta, 0.0],
        chart: Chart::Polar,
        tensor: jac.transpose() * cart.tensor * jac,
    })
}

/// Off-diagonal mismatch between each printed reading and the pullback,
/// summed over a fixed interior grid at `r = 0.1`. Only the `ξθ` entry
/// differs between the readings, so only it is compared.
pub fn h_reading_discrepancies() -> [(HReading, f64); 2] {
    let r = AccelerationParam::new(0.1).expect("valid r");
    let score = |reading| {
        let mut total = 0.0;
        for xi in [0.3, 0.5, 0.7] {
            for theta in [0.5, 1.0, 1.5, 2.0, 2.5] {
                let printed = metric_polar_with(xi, theta, r, reading).expect("interior point");
                let pulled = metric_polar_pullback(xi, theta, r).expect("interior point");
                total += (printed.tensor[(0, 1)] - pulled.tensor[(0, 1)]).abs();
            }
        }
        total
    };
    [
        (HReading::CoordinateXi, score(HReading::CoordinateXi)),
        (HReading::Acceleration, score(HReading::Acceleration)),
    ]
}

/// The reading of `h` whose off-diagonal entry is closer to the pullback.
pub fn selected_h_reading() -> HReading {
    static CHOICE: OnceLock<HReading> = OnceLock::new();
    *CHOICE.get_or_init(|| {
        let [(a, da), (b, db)] = h_reading_discrepancies();
        if da <= db {
            a
        } else {
            b
        }
    })
}

/// `D(ρ(n), ρ(n + εv))` on the low-acceleration family.
pub fn distance_along(
    bloch: BlochVector,
    direction: [f64; 3],
    eps: f64,
    r: AccelerationParam,
) -> Result<f64> {
    let base = small_r_qubit(bloch, r);
    let moved = small_r_qubit(bloch.displaced(direction, eps), r);
    generalized_bures_distance(&base, &moved)
}

/// Metric recovered from the distance itself: the quadratic form
/// `q(v) = [D(n, n+εv) + D(n, n−εv)] / (4ε²)` is sampled along the three
/// axes and the three mixed diagonals, Richardson-extrapolated over `ε` and
/// `ε/2`, and polarized into a symmetric 3×3 tensor.
pub fn numeric_metric(bloch: BlochVector, r: AccelerationParam, step: f64) -> Result<MetricValue> {
    if r.r() > SMALL_R_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "numeric metric needs r <= {SMALL_R_LIMIT}, got {}",
            r.r()
        )));
    }
    if !(step > 0.0 && step < 0.05) {
        return Err(Error::InvalidParameter(format!("metric step must lie in (0, 0.05), got {step}")));
    }
    if bloch.norm() > BOUNDARY_LIMIT {
        return Err(Error::Boundary(bloch.norm()));
    }
    let quadratic = |v: [f64; 3], eps: f64| -> Result<f64> {
        let plus = distance_along(bloch, v, eps, r)?;
        let minus = distance_along(bloch, v, -eps, r)?;
        Ok((plus + minus) / (4.0 * eps * eps))
    };
    let extrapolated = |v: [f64; 3]| -> Result<f64> {
        Ok((4.0 * quadratic(v, step / 2.0)? - quadratic(v, step)?) / 3.0)
    };
    let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut g = Matrix3::zeros();
    for i in 0..3 {
        g[(i, i)] = extrapolated(axes[i])?;
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            let v = [
                axes[i][0] + axes[j][0],
                axes[i][1] + axes[j][1],
                axes[i][2] + axes[j][2],
            ];
            let off = 0.5 * (extrapolated(v)? - g[(i, i)] - g[(j, j)]);
            g[(i, j)] = off;
            g[(j, i)] = off;
        }
    }
    Ok(MetricValue {
        point: bloch.to_array(),
        chart: Chart::CartesianBloch,
        tensor: g,
    })
}

type Christoffel = [[[f64; 3]; 3]; 3];

fn shifted(p: [f64; 3], k: usize, h: f64) -> [f64; 3] {
    let mut q = p;
    q[k] += h;
    q
}

fn inverse(g: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    g.try_inverse()
        .ok_or_else(|| Error::Domain("metric is singular".into()))
}

/// `Γ^l_ij = ½ g^{lm}(∂_i g_mj + ∂_j g_mi − ∂_m g_ij)` by central differences.
fn christoffel<F>(metric: &F, p: [f64; 3], h: f64) -> Result<Christoffel>
where
    F: Fn([f64; 3]) -> Result<Matrix3<f64>>,
{
    let gi = inverse(&metric(p)?)?;
    let mut dg = [Matrix3::zeros(); 3];
    for (k, slot) in dg.iter_mut().enumerate() {
        *slot = (metric(shifted(p, k, h))? - metric(shifted(p, k, -h))?) / (2.0 * h);
    }
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for (l, gl) in gamma.iter_mut().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                gl[i][j] = 0.5
                    * (0..3)
                        .map(|m| gi[(l, m)] * (dg[i][(m, j)] + dg[j][(m, i)] - dg[m][(i, j)]))
                        .sum::<f64>();
            }
        }
    }
    Ok(gamma)
}

fn scalar_curvature_at_step<F>(metric: &F, p: [f64; 3], h: f64) -> Result<f64>
where
    F: Fn([f64; 3]) -> Result<Matrix3<f64>>,
{
    let gi = inverse(&metric(p)?)?;
    let gamma = christoffel(metric, p, h)?;
    // dgamma[k][l][i][j] = ∂_k Γ^l_ij
    let mut dgamma = [[[[0.0; 3]; 3]; 3]; 3];
    for (k, slot) in dgamma.iter_mut().enumerate() {
        let up = christoffel(metric, shifted(p, k, h), h)?;
        let down = christoffel(metric, shifted(p, k, -h), h)?;
        for l in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    slot[l][i][j] = (up[l][i][j] - down[l][i][j]) / (2.0 * h);
                }
            }
        }
    }
    let mut scalar = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let mut ricci = 0.0;
            for k in 0..3 {
                ricci += dgamma[k][k][i][j] - dgamma[j][k][i][k];
                for l in 0..3 {
                    ricci += gamma[k][k][l] * gamma[l][i][j] - gamma[k][j][l] * gamma[l][i][k];
                }
            }
            scalar += gi[(i, j)] * ricci;
        }
    }
    Ok(scalar)
}

/// Scalar curvature of an arbitrary 3-metric at `p`, from finite-difference
/// Christoffel symbols with step `h`, Richardson-extrapolated once:
/// `R = (4R(h/2) − R(h))/3`.
pub fn scalar_curvature<F>(metric: F, p: [f64; 3], h: f64) -> Result<f64>
where
    F: Fn([f64; 3]) -> Result<Matrix3<f64>>,
{
    let coarse = scalar_curvature_at_step(&metric, p, h)?;
    let fine = scalar_curvature_at_step(&metric, p, h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

fn check_curvature_point(xi_c: f64, theta: f64) -> Result<()> {
    check_polar(xi_c, theta)?;
    // The nested stencil reaches 2h from the point in each direction.
    let reach = 2.0 * CURVATURE_STEP;
    let clear = xi_c - reach > CHART_MARGIN
        && (theta - reach).sin() > CHART_MARGIN
        && (theta + reach).sin() > CHART_MARGIN;
    if !clear {
        return Err(Error::ChartSingularity { xi: xi_c, theta });
    }
    Ok(())
}

/// Scalar curvature of the closed-form metric in polar coordinates, by the
/// finite-difference oracle.
pub fn scalar_curvature_numeric(xi_c: f64, theta: f64, r: AccelerationParam) -> Result<f64> {
    check_curvature_point(xi_c, theta)?;
    scalar_curvature(
        |q| metric_polar_pullback(q[0], q[1], r).map(|m| m.tensor),
        [xi_c, theta, 0.0],
        CURVATURE_STEP,
    )
}

/// The same oracle applied to the printed polar `g + h`.
pub fn scalar_curvature_printed(xi_c: f64, theta: f64, r: AccelerationParam) -> Result<f64> {
    check_curvature_point(xi_c, theta)?;
    scalar_curvature(
        |q| metric_polar(q[0], q[1], r).map(|m| m.tensor),
        [xi_c, theta, 0.0],
        CURVATURE_STEP,
    )
}

/// The same oracle in Bloch coordinates.
pub fn scalar_curvature_cartesian(bloch: BlochVector, r: AccelerationParam) -> Result<f64> {
    if bloch.norm() > BOUNDARY_LIMIT {
        return Err(Error::Boundary(bloch.norm()));
    }
    scalar_curvature(
        |q| metric_cartesian(BlochVector::from_array(q), r).map(|m| m.tensor),
        bloch.to_array(),
        CURVATURE_STEP,
    )
}

/// Closed-form `R = (24 + δR) cosh⁴r` with
///
/// ```text
/// δR = 2T²/(ξ²(ξ²−1)) · [4 + 8ξ² − 15ξ⁴ + 5ξ⁶
///                        − 8ξ(2ξ−3) cosθ (4 + 8ξ² − 11ξ⁴ + 5ξ⁶) cos2θ]
/// ```
///
/// The `cosθ (…) cos2θ` group is read as a plain product.
pub fn scalar_curvature_paper(xi_c: f64, theta: f64, r: AccelerationParam) -> Result<f64> {
    let x2 = xi_c * xi_c;
    let pole = x2 * (x2 - 1.0);
    if !xi_c.is_finite() || !theta.is_finite() || pole.abs() < 1e-300 {
        return Err(Error::Domain(format!("closed-form curvature has a pole at xi_c = {xi_c}")));
    }
    let t2 = r.tanh().powi(2);
    let (x4, x6) = (x2 * x2, x2 * x2 * x2);
    let bracket = 4.0 + 8.0 * x2 - 15.0 * x4 + 5.0 * x6
        - 8.0
            * xi_c
            * (2.0 * xi_c - 3.0)
            * theta.cos()
            * (4.0 + 8.0 * x2 - 11.0 * x4 + 5.0 * x6)
            * (2.0 * theta).cos();
    let delta = 2.0 * t2 / pole * bracket;
    Ok((24.0 + delta) * r.cosh().powi(4))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureResult {
    pub xi_c: f64,
    pub theta: f64,
    pub r: f64,
    pub numeric_r: f64,
    pub paper_r: f64,
    pub discrepancy: f64,
}

/// Numeric and closed-form curvature on the product grid, `ξ_c` major.
pub fn curvature_table(
    r: AccelerationParam,
    xi_grid: &[f64],
    theta_grid: &[f64],
) -> Result<Vec<CurvatureResult>> {
    let points: Vec<(f64, f64)> = xi_grid
        .iter()
        .flat_map(|&x| theta_grid.iter().map(move |&t| (x, t)))
        .collect();
    points
        .par_iter()
        .map(|&(xi_c, theta)| {
            let numeric_r = scalar_curvature_numeric(xi_c, theta, r)?;
            let paper_r = scalar_curvature_paper(xi_c, theta, r)?;
            Ok(CurvatureResult {
                xi_c,
                theta,
                r: r.r(),
                numeric_r,
                paper_r,
                discrepancy: paper_r - numeric_r,
            })
        })
        .collect()
}
