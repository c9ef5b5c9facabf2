//! Teleportation through the accelerated resource state.
//!
//! Alice and Rob share `|Ψ⟩ = (|+⟩|+⟩ + |-⟩|φ⟩)/√2` before Rob accelerates.
//! The protocol is the one that is optimal for that inertial state: Alice
//! measures her qubit `Q` and her half `A` in the Bell basis built from her
//! Schmidt vectors `|φ_i⟩`, and Rob undoes the outcome with a unitary `B_i`
//! that maps his Schmidt vectors `|ϑ_i⟩` back to `{|0⟩, |1⟩}`. After
//! acceleration Rob's mode lives on a truncated Fock tower; `B_i` acts on the
//! two lowest levels and as the identity above them (`B_i ⊕ 1`).
//!
//! The figure of merit is the overlap `⟨ψ|σ_R|ψ⟩` averaged over Haar-random
//! inputs, available both by Monte-Carlo sampling and exactly from the Haar
//! second moment `∫ P⊗P dμ = (I + SWAP)/6`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::linalg::{DenseOperator, C64};
use crate::unruh::{entangled_state, AccelerationParam, FockCutoff, OrthogonalityParam};
use crate::{Error, Result};

type Ket2 = [C64; 2];
type Op2 = [[C64; 2]; 2];

const ZERO: C64 = C64::new(0.0, 0.0);

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Bi-orthogonal form `|Ψ⟩ = Σ_i λ_i |φ_i⟩_A |ϑ_i⟩_R` with `λ₀ ≥ λ₁ ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtDecomposition {
    pub lambda: [f64; 2],
    pub alice: [Ket2; 2],
    pub rob: [Ket2; 2],
}

impl SchmidtDecomposition {
    /// `Σ_i λ_i |φ_i⟩ ⊗ |ϑ_i⟩`, Alice's index major.
    pub fn state_vector(&self) -> [C64; 4] {
        let mut out = [ZERO; 4];
        for i in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    out[2 * a + b] += self.alice[i][a] * self.rob[i][b] * self.lambda[i];
                }
            }
        }
        out
    }

    /// The gauge freedom `|φ_i⟩ → e^{iα_i}|φ_i⟩`, `|ϑ_i⟩ → e^{-iα_i}|ϑ_i⟩`.
    pub fn rephased(&self, phases: [f64; 2]) -> Self {
        let mut out = self.clone();
        for (i, &alpha) in phases.iter().enumerate() {
            let (up, down) = (C64::from_polar(1.0, alpha), C64::from_polar(1.0, -alpha));
            out.alice[i].iter_mut().for_each(|z| *z *= up);
            out.rob[i].iter_mut().for_each(|z| *z *= down);
        }
        out
    }
}

/// Coefficients `M_ab` of `|Ψ⟩ = Σ M_ab |a⟩_A |b⟩_R` in the number basis:
/// `M = [[η₊₋, η₋₊], [η₋₋, η₊₊]] / (2√2)`.
pub fn coefficient_matrix(xi: OrthogonalityParam) -> [[f64; 2]; 2] {
    let s = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    [
        [xi.eta_pm() * s, xi.eta_mp() * s],
        [xi.eta_mm() * s, xi.eta_pp() * s],
    ]
}

/// Makes the first non-negligible component real and positive.
fn fix_phase(v: [f64; 2]) -> [f64; 2] {
    let lead = if v[0].abs() > 1e-14 { v[0] } else { v[1] };
    if lead < 0.0 {
        [-v[0], -v[1]]
    } else {
        v
    }
}

/// Schmidt data of the inertial resource state, from the closed-form
/// eigensystem of `M Mᵀ`. Alice's vectors follow the phase convention of
/// [`fix_phase`]; Rob's are then fixed by `|ϑ_i⟩ = Mᵀ|φ_i⟩ / λ_i`.
pub fn schmidt_decompose(xi: OrthogonalityParam) -> SchmidtDecomposition {
    let m = coefficient_matrix(xi);
    let a = m[0][0] * m[0][0] + m[0][1] * m[0][1];
    let d = m[1][0] * m[1][0] + m[1][1] * m[1][1];
    let b = m[0][0] * m[1][0] + m[0][1] * m[1][1];
    let mean = 0.5 * (a + d);
    let half_gap = (0.5 * (a - d)).hypot(b);
    let top = mean + half_gap;
    let bottom = (mean - half_gap).max(0.0);

    let u0 = if half_gap <= 1e-15 {
        [1.0, 0.0]
    } else {
        let v1 = [b, top - a];
        let v2 = [top - d, b];
        let v = if v1[0].hypot(v1[1]) >= v2[0].hypot(v2[1]) { v1 } else { v2 };
        let n = v[0].hypot(v[1]);
        [v[0] / n, v[1] / n]
    };
    let u0 = fix_phase(u0);
    let u1 = fix_phase([-u0[1], u0[0]]);
    let lambda = [top.sqrt(), bottom.sqrt()];

    let rob_of = |u: [f64; 2], l: f64| -> Ket2 {
        [
            re((m[0][0] * u[0] + m[1][0] * u[1]) / l),
            re((m[0][1] * u[0] + m[1][1] * u[1]) / l),
        ]
    };
    SchmidtDecomposition {
        lambda,
        alice: [[re(u0[0]), re(u0[1])], [re(u1[0]), re(u1[1])]],
        rob: [rob_of(u0, lambda[0]), rob_of(u1, lambda[1])],
    }
}

/// `(λ₀ + λ₁)/√2`, the square root of the state's maximal overlap with a
/// maximally entangled state. Upper-bounds the average overlap.
pub fn fidelity_bound(xi: OrthogonalityParam) -> f64 {
    let s = schmidt_decompose(xi);
    (s.lambda[0] + s.lambda[1]) * std::f64::consts::FRAC_1_SQRT_2
}

/// Alice's four measurement operators on `Q ⊗ A` and Rob's four corrections.
#[derive(Clone, Debug)]
pub struct ProtocolKit {
    povms: [DenseOperator; 4],
    corrections: [Op2; 4],
    levels: usize,
}

impl ProtocolKit {
    /// POVM elements `Π^i = χ(v_i)/2` with
    /// `v = |0⟩|φ₀⟩ ± |1⟩|φ₁⟩, |0⟩|φ₁⟩ ± |1⟩|φ₀⟩`, and corrections
    /// `B = |0⟩⟨ϑ₀| ± |1⟩⟨ϑ₁|, |1⟩⟨ϑ₀| ± |0⟩⟨ϑ₁|`. The factor 1/2 makes the
    /// elements sum to the identity.
    pub fn new(schmidt: &SchmidtDecomposition, cutoff: FockCutoff) -> Self {
        let [phi0, phi1] = schmidt.alice;
        let [theta0, theta1] = schmidt.rob;
        let pair = |first: Ket2, second: Ket2, sign: f64| -> [C64; 4] {
            [first[0], first[1], second[0] * sign, second[1] * sign]
        };
        let vectors = [
            pair(phi0, phi1, 1.0),
            pair(phi0, phi1, -1.0),
            pair(phi1, phi0, 1.0),
            pair(phi1, phi0, -1.0),
        ];
        let povms = vectors.map(|v| {
            DenseOperator::projector(&v, vec![2, 2])
                .expect("4-vector on 2x2")
                .scaled(0.5)
        });
        let bra = |k: Ket2, sign: f64| -> Ket2 { [k[0].conj() * sign, k[1].conj() * sign] };
        let corrections = [
            [bra(theta0, 1.0), bra(theta1, 1.0)],
            [bra(theta0, 1.0), bra(theta1, -1.0)],
            [bra(theta1, 1.0), bra(theta0, 1.0)],
            [bra(theta1, -1.0), bra(theta0, 1.0)],
        ];
        Self {
            povms,
            corrections,
            levels: cutoff.levels(),
        }
    }

    pub fn povms(&self) -> &[DenseOperator; 4] {
        &self.povms
    }

    /// Rob's correction `B_i` on the two lowest levels.
    pub fn correction(&self, i: usize) -> Op2 {
        self.corrections[i]
    }

    /// `B_i ⊕ 1` on the full truncated tower.
    pub fn extended_correction(&self, i: usize) -> DenseOperator {
        let b = self.corrections[i];
        let mut m = DMatrix::<C64>::identity(self.levels, self.levels);
        for k in 0..2 {
            for l in 0..2 {
                m[(k, l)] = b[k][l];
            }
        }
        DenseOperator::new(m, vec![self.levels]).expect("square tower operator")
    }

    pub fn levels(&self) -> usize {
        self.levels
    }
}

/// `build_protocol` in free-function form.
pub fn build_protocol(schmidt: &SchmidtDecomposition, cutoff: FockCutoff) -> ProtocolKit {
    ProtocolKit::new(schmidt, cutoff)
}

/// Mean overlap with its Monte-Carlo standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// The protocol bound to one resource state.
#[derive(Clone, Debug)]
pub struct Teleporter {
    schmidt: SchmidtDecomposition,
    kit: ProtocolKit,
    resource: DenseOperator,
    /// `ρ[(a', b), (a, b')]` restricted to `b, b' ∈ {0, 1}`, indexed
    /// `[a'][b][a][b']`.
    low_block: [[[[C64; 2]; 2]; 2]; 2],
}

impl Teleporter {
    pub fn new(xi: OrthogonalityParam, r: AccelerationParam, cutoff: FockCutoff) -> Result<Self> {
        Self::with_schmidt(schmidt_decompose(xi), xi, r, cutoff)
    }

    /// Uses caller-supplied Schmidt vectors (e.g. a rephased gauge).
    pub fn with_schmidt(
        schmidt: SchmidtDecomposition,
        xi: OrthogonalityParam,
        r: AccelerationParam,
        cutoff: FockCutoff,
    ) -> Result<Self> {
        let resource = entangled_state(xi, r, cutoff)?;
        let kit = ProtocolKit::new(&schmidt, cutoff);
        let levels = cutoff.levels();
        let mut low_block = [[[[ZERO; 2]; 2]; 2]; 2];
        for (a2, by_b) in low_block.iter_mut().enumerate() {
            for (b, by_a) in by_b.iter_mut().enumerate() {
                for (a, by_bp) in by_a.iter_mut().enumerate() {
                    for (bp, slot) in by_bp.iter_mut().enumerate() {
                        *slot = resource.get(a2 * levels + b, a * levels + bp);
                    }
                }
            }
        }
        Ok(Self {
            schmidt,
            kit,
            resource,
            low_block,
        })
    }

    pub fn schmidt(&self) -> &SchmidtDecomposition {
        &self.schmidt
    }

    pub fn kit(&self) -> &ProtocolKit {
        &self.kit
    }

    pub fn resource(&self) -> &DenseOperator {
        &self.resource
    }

    /// `W_i[a'][a] = Σ_{q,q'} Π^i[(q,a),(q',a')] X[q'][q]`: Alice's side of
    /// `Tr_QA[(Π^i ⊗ 1)(X ⊗ ρ)]`.
    fn alice_weights(&self, i: usize, input: &Op2) -> Op2 {
        let povm = &self.kit.povms[i];
        let mut w = [[ZERO; 2]; 2];
        for (a2, row) in w.iter_mut().enumerate() {
            for (a, slot) in row.iter_mut().enumerate() {
                for q in 0..2 {
                    for q2 in 0..2 {
                        *slot += povm.get(2 * q + a, 2 * q2 + a2) * input[q2][q];
                    }
                }
            }
        }
        w
    }

    /// The protocol as a linear map on Alice's input operator `X`:
    /// `Σ_i (B_i⊕1) Tr_QA[(Π^i⊗1)(X⊗ρ)] (B_i⊕1)†`.
    pub fn apply(&self, input: &Op2) -> DenseOperator {
        let levels = self.kit.levels;
        let rho = self.resource.matrix();
        let mut out = DMatrix::<C64>::zeros(levels, levels);
        for i in 0..4 {
            let w = self.alice_weights(i, input);
            let block = DMatrix::from_fn(levels, levels, |b, bp| {
                let mut acc = ZERO;
                for (a2, row) in w.iter().enumerate() {
                    for (a, weight) in row.iter().enumerate() {
                        acc += weight * rho[(a2 * levels + b, a * levels + bp)];
                    }
                }
                acc
            });
            let b = self.kit.extended_correction(i);
            out += b.matrix() * block * b.matrix().adjoint();
        }
        DenseOperator::new(out, vec![levels]).expect("square tower operator")
    }

    /// Rob's final state `σ_R` for the pure input `ψ`.
    pub fn final_state(&self, psi: Ket2) -> DenseOperator {
        self.apply(&outer(psi))
    }

    /// `⟨ψ|σ_R|ψ⟩`, evaluating only the two-level block of `σ_R` that the
    /// overlap can see.
    pub fn overlap(&self, psi: Ket2) -> f64 {
        let input = outer(psi);
        let mut sigma = [[ZERO; 2]; 2];
        for i in 0..4 {
            let w = self.alice_weights(i, &input);
            let mut k = [[ZERO; 2]; 2];
            for (b, row) in k.iter_mut().enumerate() {
                for (bp, slot) in row.iter_mut().enumerate() {
                    for (a2, wrow) in w.iter().enumerate() {
                        for (a, weight) in wrow.iter().enumerate() {
                            *slot += weight * self.low_block[a2][b][a][bp];
                        }
                    }
                }
            }
            let bm = self.kit.corrections[i];
            for x in 0..2 {
                for y in 0..2 {
                    for b in 0..2 {
                        for bp in 0..2 {
                            sigma[x][y] += bm[x][b] * k[b][bp] * bm[y][bp].conj();
                        }
                    }
                }
            }
        }
        let mut total = ZERO;
        for x in 0..2 {
            for y in 0..2 {
                total += psi[x].conj() * sigma[x][y] * psi[y];
            }
        }
        total.re
    }

    /// Exact Haar average of the overlap:
    /// `f = (1/6)[Σ_{i,k} Λ(|i⟩⟨i|)_{kk} + Σ_{i,j} Λ(|i⟩⟨j|)_{ij}]`.
    pub fn average_fidelity_exact(&self) -> f64 {
        let mut total = ZERO;
        for i in 0..2 {
            for j in 0..2 {
                let mut unit = [[ZERO; 2]; 2];
                unit[i][j] = re(1.0);
                let image = self.apply(&unit);
                if i == j {
                    total += image.get(0, 0) + image.get(1, 1);
                }
                total += image.get(i, j);
            }
        }
        total.re / 6.0
    }

    /// Monte-Carlo average over `samples` Haar-random inputs `U|+⟩`.
    ///
    /// Sample `k` draws from its own ChaCha stream (`seed`, stream `k`), and
    /// the reduction runs in sample order, so the result does not depend on
    /// the thread count.
    pub fn average_fidelity_mc(&self, samples: usize, seed: u64) -> Result<FidelityEstimate> {
        if samples == 0 {
            return Err(Error::InvalidParameter("need at least one sample".into()));
        }
        let values: Vec<f64> = (0..samples)
            .into_par_iter()
            .map(|k| {
                let mut rng = sample_rng(seed, k as u64);
                self.overlap(haar_random_state(&mut rng))
            })
            .collect();
        let mean = neumaier_sum(values.iter().copied()) / samples as f64;
        let std_error = if samples > 1 {
            let ss = neumaier_sum(values.iter().map(|v| (v - mean) * (v - mean)));
            (ss / (samples - 1) as f64).sqrt() / (samples as f64).sqrt()
        } else {
            0.0
        };
        Ok(FidelityEstimate {
            mean,
            std_error,
            samples,
            seed,
        })
    }
}

fn outer(psi: Ket2) -> Op2 {
    [
        [psi[0] * psi[0].conj(), psi[0] * psi[1].conj()],
        [psi[1] * psi[0].conj(), psi[1] * psi[1].conj()],
    ]
}

/// Independent generator for sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Haar-random 2×2 unitary: Gram–Schmidt on a complex Ginibre draw. The
/// Gram–Schmidt `R` factor has a positive diagonal, which is the phase
/// fix that makes `Q` Haar distributed.
pub fn haar_random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Op2 {
    let mut gauss = || -> C64 {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    };
    let g0 = [gauss(), gauss()];
    let g1 = [gauss(), gauss()];
    let n0 = (g0[0].norm_sqr() + g0[1].norm_sqr()).sqrt();
    let q0 = [g0[0] / n0, g0[1] / n0];
    let proj = q0[0].conj() * g1[0] + q0[1].conj() * g1[1];
    let w = [g1[0] - q0[0] * proj, g1[1] - q0[1] * proj];
    let n1 = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
    let q1 = [w[0] / n1, w[1] / n1];
    [[q0[0], q1[0]], [q0[1], q1[1]]]
}

/// `U|+⟩` for Haar-random `U`.
pub fn haar_random_state<R: Rng + ?Sized>(rng: &mut R) -> Ket2 {
    let u = haar_random_unitary(rng);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [(u[0][0] + u[0][1]) * s, (u[1][0] + u[1][1]) * s]
}

/// Compensated summation.
fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn check_normalized(psi: Ket2) -> Result<()> {
    let norm = psi[0].norm_sqr() + psi[1].norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "input state must be normalized, |psi|^2 = {norm}"
        )));
    }
    Ok(())
}

/// Rob's final state for input `α|0⟩ + β|1⟩`.
pub fn run_protocol(
    psi: Ket2,
    xi: OrthogonalityParam,
    r: AccelerationParam,
    cutoff: FockCutoff,
) -> Result<DenseOperator> {
    check_normalized(psi)?;
    Ok(Teleporter::new(xi, r, cutoff)?.final_state(psi))
}

pub fn average_fidelity_mc(
    xi: OrthogonalityParam,
    r: AccelerationParam,
    cutoff: FockCutoff,
    samples: usize,
    seed: u64,
) -> Result<FidelityEstimate> {
    Teleporter::new(xi, r, cutoff)?.average_fidelity_mc(samples, seed)
}

pub fn average_fidelity_exact(
    xi: OrthogonalityParam,
    r: AccelerationParam,
    cutoff: FockCutoff,
) -> Result<f64> {
    Ok(Teleporter::new(xi, r, cutoff)?.average_fidelity_exact())
}

/// One point of a fidelity-versus-ξ sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityPoint {
    pub xi: f64,
    pub mc: FidelityEstimate,
    pub exact: f64,
}

/// Monte-Carlo and exact fidelity at every grid point, in grid order. Every
/// point reuses the same seed, so neighbouring points see the same inputs.
pub fn fidelity_sweep(
    r: AccelerationParam,
    xi_grid: &[f64],
    cutoff: FockCutoff,
    samples: usize,
    seed: u64,
) -> Result<Vec<FidelityPoint>> {
    xi_grid
        .iter()
        .map(|&xi| {
            let tele = Teleporter::new(OrthogonalityParam::new(xi)?, r, cutoff)?;
            Ok(FidelityPoint {
                xi,
                mc: tele.average_fidelity_mc(samples, seed)?,
                exact: tele.average_fidelity_exact(),
            })
        })
        .collect()
}
