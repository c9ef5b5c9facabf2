//! Dense complex linear algebra over truncated and composite mode spaces.
//!
//! A [`DenseOperator`] is a square complex matrix together with its *space
//! tag*: the ordered list of tensor-factor dimensions whose product is the
//! matrix dimension. Partial traces and partial transposes address factors by
//! zero-based index into that tag.
//!
//! Hermitian eigendecomposition is the single spectral primitive; square
//! roots, trace norms and PSD checks are all built on [`eigh`].

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;

/// Largest tolerated `max |A - A†|` for operators treated as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues in `[-PSD_TOL, 0)` are truncation noise and get clamped to zero.
pub const PSD_TOL: f64 = 1e-10;

/// Default cap on the number of matrix entries a tensor product may create.
pub const DEFAULT_MAX_ENTRIES: usize = 1 << 20;

/// Relative eigenvalue noise floor, in units of machine epsilon times the
/// dimension. Eigenvalues at or below `floor * λ_max` are exact zeros that the
/// solver returned as rounding noise; square roots would amplify them.
const NOISE_FLOOR_ULPS: f64 = 4.0;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<C64>,
    dims: Vec<usize>,
}

impl DenseOperator {
    /// Wraps `matrix`, checking that it is square and that `dims` factors it.
    pub fn new(matrix: DMatrix<C64>, dims: Vec<usize>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::DimensionMismatch(rows, cols));
        }
        if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != rows {
            return Err(Error::InvalidSpaceTag { dims, dim: rows });
        }
        Ok(Self { matrix, dims })
    }

    /// A single-factor operator.
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        let n = matrix.nrows();
        Self::new(matrix, vec![n])
    }

    /// Builds a single-factor operator from real rows. Handy for fixtures.
    pub fn from_real<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let matrix = DMatrix::from_fn(N, N, |i, j| C64::new(rows[i][j], 0.0));
        Self {
            matrix,
            dims: vec![N],
        }
    }

    pub fn from_fn(dims: Vec<usize>, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let n = dims.iter().product();
        Self::new(DMatrix::from_fn(n, n, f), dims)
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        Self::from_fn(dims, |_, _| C64::new(0.0, 0.0))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
            dims: vec![dim],
        }
    }

    /// `|ψ⟩⟨ψ|` for the (not necessarily normalized) ket `ket`.
    pub fn projector(ket: &[C64], dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != ket.len() {
            return Err(Error::InvalidSpaceTag {
                dims,
                dim: ket.len(),
            });
        }
        Self::from_fn(dims, |i, j| ket[i] * ket[j].conj())
    }

    /// Same matrix, new factorization of its dimension.
    pub fn retagged(self, dims: Vec<usize>) -> Result<Self> {
        Self::new(self.matrix, dims)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix[(i, j)]
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Real part of the trace.
    pub fn trace_re(&self) -> f64 {
        self.trace().re
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            dims: self.dims.clone(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            matrix: self.matrix.map(|z| z * factor),
            dims: self.dims.clone(),
        }
    }

    /// `U A U†`.
    pub fn conjugated_by(&self, unitary: &DMatrix<C64>) -> Self {
        Self {
            matrix: unitary * &self.matrix * unitary.adjoint(),
            dims: self.dims.clone(),
        }
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A_ij - B_ij|`; panics on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "operator dimensions differ");
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |A - A†|` entrywise.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= HERMITIAN_TOL
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self {
            matrix: (&self.matrix + self.matrix.adjoint()).map(|z| z * 0.5),
            dims: self.dims.clone(),
        }
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;

    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        DenseOperator {
            matrix: &self.matrix + &rhs.matrix,
            dims: self.dims.clone(),
        }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;

    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        DenseOperator {
            matrix: &self.matrix - &rhs.matrix,
            dims: self.dims.clone(),
        }
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;

    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        DenseOperator {
            matrix: &self.matrix * &rhs.matrix,
            dims: self.dims.clone(),
        }
    }
}

/// `A ⊗ B` with the default entry cap.
pub fn tensor(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    tensor_with_cap(a, b, DEFAULT_MAX_ENTRIES)
}

/// `A ⊗ B`, refusing to allocate more than `max_entries` entries.
pub fn tensor_with_cap(
    a: &DenseOperator,
    b: &DenseOperator,
    max_entries: usize,
) -> Result<DenseOperator> {
    let dim = a
        .dim()
        .checked_mul(b.dim())
        .ok_or(Error::SizeCap {
            entries: usize::MAX,
            cap: max_entries,
        })?;
    let entries = dim.saturating_mul(dim);
    if entries > max_entries {
        return Err(Error::SizeCap {
            entries,
            cap: max_entries,
        });
    }
    let matrix = a.matrix.kronecker(&b.matrix);
    let dims = a.dims.iter().chain(&b.dims).copied().collect();
    DenseOperator::new(matrix, dims)
}

/// Splits the space tag around `factor` into (left, middle, right) dimensions.
fn split_around(op: &DenseOperator, factor: usize) -> Result<(usize, usize, usize)> {
    let dims = op.dims();
    if factor >= dims.len() {
        return Err(Error::InvalidFactor {
            index: factor,
            factors: dims.len(),
        });
    }
    let left = dims[..factor].iter().product();
    let right = dims[factor + 1..].iter().product();
    Ok((left, dims[factor], right))
}

/// Traces out tensor factor `factor` (zero-based).
///
/// Tracing the only factor leaves a 1×1 operator holding the trace.
pub fn partial_trace(op: &DenseOperator, factor: usize) -> Result<DenseOperator> {
    let (left, mid, right) = split_around(op, factor)?;
    let out_dim = left * right;
    let a = op.matrix();
    let matrix = DMatrix::from_fn(out_dim, out_dim, |row, col| {
        let (l, r) = (row / right, row % right);
        let (lp, rp) = (col / right, col % right);
        (0..mid)
            .map(|m| a[((l * mid + m) * right + r, (lp * mid + m) * right + rp)])
            .sum()
    });
    let mut dims: Vec<usize> = op
        .dims()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != factor)
        .map(|(_, &d)| d)
        .collect();
    if dims.is_empty() {
        dims.push(1);
    }
    DenseOperator::new(matrix, dims)
}

/// Transposes the indices of tensor factor `factor` (zero-based) only.
pub fn partial_transpose(op: &DenseOperator, factor: usize) -> Result<DenseOperator> {
    let (_, mid, right) = split_around(op, factor)?;
    let n = op.dim();
    let a = op.matrix();
    let matrix = DMatrix::from_fn(n, n, |row, col| {
        let (l, m, r) = (row / (mid * right), (row / right) % mid, row % right);
        let (lp, mp, rp) = (col / (mid * right), (col / right) % mid, col % right);
        a[((l * mid + mp) * right + r, (lp * mid + m) * right + rp)]
    });
    DenseOperator::new(matrix, op.dims().to_vec())
}

/// Spectral decomposition `A = V diag(λ) V†` of a Hermitian operator, with
/// eigenvalues in ascending order.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `V diag(f(λ)) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> DMatrix<C64> {
        let mut scaled = self.vectors.clone();
        for (j, &value) in self.values.iter().enumerate() {
            let s = f(value);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= s);
        }
        scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> DMatrix<C64> {
        self.map(|x| x)
    }

    /// Eigenvalues with `[-PSD_TOL, 0)` and rounding-level positives snapped
    /// to zero. Fails if anything lies below `-PSD_TOL`.
    pub fn clamped_values(&self) -> Result<Vec<f64>> {
        if self.min() < -PSD_TOL {
            return Err(Error::NotPsd(self.min()));
        }
        let floor = noise_floor(self.values.len(), self.max());
        Ok(self
            .values
            .iter()
            .map(|&v| if v <= floor { 0.0 } else { v })
            .collect())
    }
}

fn noise_floor(dim: usize, largest: f64) -> f64 {
    NOISE_FLOOR_ULPS * dim as f64 * f64::EPSILON * largest.max(0.0)
}

/// Hermitian eigendecomposition. The input is symmetrized first; its
/// Hermitian defect must not exceed [`HERMITIAN_TOL`].
pub fn eigh(op: &DenseOperator) -> Result<HermitianEigen> {
    let defect = op.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let sym = op.hermitian_part();
    let eig = SymmetricEigen::new(sym.into_matrix());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(op.dim(), op.dim(), |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(op: &DenseOperator) -> Result<Vec<f64>> {
    eigh(op).map(|e| e.values)
}

/// Positive square root of a PSD operator.
pub fn matrix_sqrt(op: &DenseOperator) -> Result<DenseOperator> {
    let eig = eigh(op)?;
    let clamped = eig.clamped_values()?;
    let roots = HermitianEigen {
        values: clamped.iter().map(|v| v.sqrt()).collect(),
        vectors: eig.vectors,
    };
    DenseOperator::new(roots.reconstruct(), op.dims().to_vec())
}

/// Sum of absolute eigenvalues of a Hermitian operator.
pub fn trace_norm(op: &DenseOperator) -> Result<f64> {
    Ok(eigvalsh(op)?.iter().map(|v| v.abs()).sum())
}

/// `Tr √(√A B √A)` for PSD `A`, `B` (traces need not be one), evaluated as
/// the nuclear norm `‖√A √B‖₁`. Singular values carry absolute error of
/// order `ε`, whereas the eigenvalues of `√A B √A` would pass their `ε`
/// error through a square root.
pub fn root_fidelity(a: &DenseOperator, b: &DenseOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let product = matrix_sqrt(a)?.into_matrix() * matrix_sqrt(b)?.into_matrix();
    Ok(SVD::new(product, false, false).singular_values.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn pauli_x() -> DenseOperator {
        DenseOperator::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    fn pauli_z() -> DenseOperator {
        DenseOperator::from_real([[1.0, 0.0], [0.0, -1.0]])
    }

    fn bell_projector() -> DenseOperator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DenseOperator::projector(&[c(s), c(0.0), c(0.0), c(s)], vec![2, 2]).unwrap()
    }

    #[test]
    fn identity_tensor_identity() {
        let i4 = tensor(&DenseOperator::identity(2), &DenseOperator::identity(2)).unwrap();
        assert_eq!(i4.dims(), &[2, 2]);
        assert_eq!(i4.max_abs_diff(&DenseOperator::identity(4)), 0.0);
    }

    #[test]
    fn basis_projectors_tensor_to_basis_projector() {
        let p0 = DenseOperator::from_real([[1.0, 0.0], [0.0, 0.0]]);
        let p1 = DenseOperator::from_real([[0.0, 0.0], [0.0, 1.0]]);
        let t = tensor(&p0, &p1).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == 1 && j == 1 { 1.0 } else { 0.0 };
                assert_eq!(t.get(i, j), c(expected));
            }
        }
    }

    #[test]
    fn sigma_x_tensor_sigma_z_entries() {
        let t = tensor(&pauli_x(), &pauli_z()).unwrap();
        let expected = [((0, 2), 1.0), ((1, 3), -1.0), ((2, 0), 1.0), ((3, 1), -1.0)];
        for i in 0..4 {
            for j in 0..4 {
                let want = expected
                    .iter()
                    .find(|(ij, _)| *ij == (i, j))
                    .map_or(0.0, |(_, v)| *v);
                assert_eq!(t.get(i, j), c(want), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn tensor_respects_size_cap() {
        let big = DenseOperator::identity(64);
        let err = tensor_with_cap(&big, &big, 1000).unwrap_err();
        assert!(matches!(err, Error::SizeCap { .. }));
        let cap = DenseOperator::identity(1100);
        assert!(tensor(&cap, &DenseOperator::identity(1)).is_err());
    }

    #[test]
    fn partial_trace_of_product_state() {
        let rho = DenseOperator::from_real([[0.7, 0.2], [0.2, 0.3]]);
        let sigma = DenseOperator::from_real([[0.5, 0.1, 0.0], [0.1, 0.25, 0.0], [0.0, 0.0, 0.1]]);
        let joint = tensor(&rho, &sigma).unwrap();
        let kept = partial_trace(&joint, 1).unwrap();
        assert_eq!(kept.dims(), &[2]);
        assert!(kept.max_abs_diff(&rho.scaled(0.85)) < 1e-15);
        let other = partial_trace(&joint, 0).unwrap();
        assert!(other.max_abs_diff(&sigma) < 1e-15);
    }

    #[test]
    fn bell_reductions_are_maximally_mixed() {
        let half = DenseOperator::identity(2).scaled(0.5);
        for factor in 0..2 {
            let reduced = partial_trace(&bell_projector(), factor).unwrap();
            assert!(reduced.max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_rejects_bad_factor() {
        let err = partial_trace(&bell_projector(), 2).unwrap_err();
        assert_eq!(err, Error::InvalidFactor { index: 2, factors: 2 });
        assert!(partial_transpose(&bell_projector(), 5).is_err());
    }

    #[test]
    fn tracing_everything_leaves_the_trace() {
        let single = DenseOperator::from_real([[0.25, 0.5], [0.5, 0.75]]);
        let t = partial_trace(&single, 0).unwrap();
        assert_eq!(t.dim(), 1);
        assert_abs_diff_eq!(t.get(0, 0).re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let pt = partial_transpose(&bell_projector(), 0).unwrap();
        let values = eigvalsh(&pt).unwrap();
        assert_abs_diff_eq!(values[0], -0.5, epsilon = 1e-12);
        for v in &values[1..] {
            assert_abs_diff_eq!(*v, 0.5, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(trace_norm(&pt).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let op = DenseOperator::from_fn(vec![2, 3], |i, j| C64::new(i as f64, j as f64 * 0.5)).unwrap();
        for factor in 0..2 {
            let twice = partial_transpose(&partial_transpose(&op, factor).unwrap(), factor).unwrap();
            assert_eq!(twice, op);
        }
    }

    #[test]
    fn partial_transpose_keeps_product_spectrum() {
        let rho = DenseOperator::from_real([[0.6, 0.3], [0.3, 0.4]]);
        let sigma = DenseOperator::from_real([[0.9, -0.2], [-0.2, 0.1]]);
        let product = tensor(&rho, &sigma).unwrap();
        let before = eigvalsh(&product).unwrap();
        for factor in 0..2 {
            let after = eigvalsh(&partial_transpose(&product, factor).unwrap()).unwrap();
            for (a, b) in before.iter().zip(&after) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        let i3 = DenseOperator::identity(3);
        assert!(matrix_sqrt(&i3).unwrap().max_abs_diff(&i3) < 1e-14);
        let d = DenseOperator::from_real([[4.0, 0.0], [0.0, 9.0]]);
        let root = matrix_sqrt(&d).unwrap();
        assert!(root.max_abs_diff(&DenseOperator::from_real([[2.0, 0.0], [0.0, 3.0]])) < 1e-14);
    }

    #[test]
    fn sqrt_clamps_tiny_negative_eigenvalues() {
        let nearly = DenseOperator::from_real([[1.0, 0.0], [0.0, -5e-11]]);
        let root = matrix_sqrt(&nearly).unwrap();
        assert_abs_diff_eq!(root.get(1, 1).re, 0.0);
        let bad = DenseOperator::from_real([[1.0, 0.0], [0.0, -1e-6]]);
        assert!(matches!(matrix_sqrt(&bad), Err(Error::NotPsd(_))));
    }

    #[test]
    fn trace_norm_cases() {
        assert_abs_diff_eq!(
            trace_norm(&DenseOperator::from_real([[1.0, 0.0], [0.0, -1.0]])).unwrap(),
            2.0
        );
        assert_abs_diff_eq!(trace_norm(&bell_projector()).unwrap(), 1.0, epsilon = 1e-14);
        let skew = DenseOperator::from_real([[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(trace_norm(&skew), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn root_fidelity_of_pure_states_is_overlap() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let zero = DenseOperator::projector(&[c(1.0), c(0.0)], vec![2]).unwrap();
        let plus = DenseOperator::projector(&[c(s), c(s)], vec![2]).unwrap();
        assert_abs_diff_eq!(root_fidelity(&zero, &plus).unwrap(), s, epsilon = 1e-12);
        assert_abs_diff_eq!(root_fidelity(&zero, &zero).unwrap(), 1.0, epsilon = 1e-12);
        assert!(root_fidelity(&zero, &DenseOperator::identity(3)).is_err());
    }

    #[test]
    fn new_rejects_inconsistent_tags() {
        assert!(DenseOperator::new(DMatrix::identity(4, 4), vec![2, 3]).is_err());
        assert!(DenseOperator::new(DMatrix::identity(4, 4), vec![]).is_err());
        assert!(DenseOperator::new(DMatrix::zeros(2, 3), vec![2]).is_err());
    }
}
