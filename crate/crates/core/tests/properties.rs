use nalgebra::DMatrix;
use proptest::prelude::*;

use rqit_core::distinguishability::bures_angle;
use rqit_core::entanglement::log_negativity;
use rqit_core::geometry::{
    fidelity, generalized_bures_distance, metric_cartesian, metric_polar, numeric_metric,
    relative_discrepancy, scalar_curvature_paper,
};
use rqit_core::linalg::{eigh, eigvalsh, partial_trace, partial_transpose, tensor, trace_norm};
use rqit_core::teleportation::{haar_random_state, sample_rng, schmidt_decompose, Teleporter};
use rqit_core::unruh::{effective_qubit, entangled_state, small_r_qubit, DEFAULT_TRUNCATION_TOL};
use rqit_core::{AccelerationParam, BlochVector, DenseOperator, FockCutoff, OrthogonalityParam, C64};

fn complex_matrix(dim: usize, raw: &[f64]) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |i, j| {
        let k = 2 * (i * dim + j);
        C64::new(raw[k], raw[k + 1])
    })
}

fn hermitian(dim: usize) -> impl Strategy<Value = DenseOperator> {
    prop::collection::vec(-1.0..1.0f64, 2 * dim * dim).prop_map(move |raw| {
        let m = complex_matrix(dim, &raw);
        DenseOperator::new(&m + m.adjoint(), vec![dim]).unwrap()
    })
}

/// PSD with trace in `[0.05, 1]`; subnormalized unless `unit` is set.
fn density(dim: usize, unit: bool) -> impl Strategy<Value = DenseOperator> {
    (prop::collection::vec(-1.0..1.0f64, 2 * dim * dim), 0.05..1.0f64).prop_map(move |(raw, t)| {
        let g = complex_matrix(dim, &raw) + DMatrix::identity(dim, dim) * C64::new(0.05, 0.0);
        let m = &g * g.adjoint();
        let scale = if unit { 1.0 } else { t } / m.trace().re;
        DenseOperator::new(m.map(|z| z * scale), vec![dim]).unwrap().hermitian_part()
    })
}

fn unitary(dim: usize) -> impl Strategy<Value = DMatrix<C64>> {
    prop::collection::vec(-1.0..1.0f64, 2 * dim * dim).prop_map(move |raw| {
        let g = complex_matrix(dim, &raw) + DMatrix::identity(dim, dim) * C64::new(0.1, 0.0);
        g.qr().q()
    })
}

fn bloch(radius: f64) -> impl Strategy<Value = BlochVector> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.0..1.0f64).prop_map(move |(x, y, z, u)| {
        let norm = (x * x + y * y + z * z).sqrt().max(1e-9);
        let rad = radius * u;
        BlochVector::new(x / norm * rad, y / norm * rad, z / norm * rad)
    })
}

fn acc(r: f64) -> AccelerationParam {
    AccelerationParam::new(r).unwrap()
}

fn ortho(xi: f64) -> OrthogonalityParam {
    OrthogonalityParam::new(xi).unwrap()
}

fn cutoff(r: AccelerationParam) -> FockCutoff {
    FockCutoff::for_acceleration(r, DEFAULT_TRUNCATION_TOL).unwrap()
}

fn alice_local(u: &DMatrix<C64>, levels: usize) -> DMatrix<C64> {
    u.kronecker(&DMatrix::identity(levels, levels))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(a in hermitian(4)) {
        let e = eigh(&a).unwrap();
        prop_assert!((e.reconstruct() - a.matrix()).iter().all(|z| z.norm() < 1e-12));
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn partial_trace_undoes_tensor(a in density(2, false), b in density(3, false)) {
        let joint = tensor(&a, &b).unwrap();
        let left = partial_trace(&joint, 1).unwrap();
        let right = partial_trace(&joint, 0).unwrap();
        prop_assert!(left.max_abs_diff(&a.scaled(b.trace_re())) < 1e-12);
        prop_assert!(right.max_abs_diff(&b.scaled(a.trace_re())) < 1e-12);
    }

    #[test]
    fn trace_norm_of_psd_is_trace(a in density(4, false)) {
        prop_assert!((trace_norm(&a).unwrap() - a.trace_re()).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_keeps_trace_and_hermiticity(a in density(2, true), b in density(3, true)) {
        let joint = tensor(&a, &b).unwrap();
        for factor in 0..2 {
            let pt = partial_transpose(&joint, factor).unwrap();
            prop_assert!((pt.trace_re() - 1.0).abs() < 1e-12);
            prop_assert!(pt.hermitian_defect() < 1e-14);
        }
    }

    #[test]
    fn unruh_channel_is_affine(n1 in bloch(1.0), n2 in bloch(1.0), w in 0.0..1.0f64, r in 0.0..1.0f64) {
        let r = acc(r);
        let c = cutoff(r);
        let mix = BlochVector::new(
            w * n1.x + (1.0 - w) * n2.x,
            w * n1.y + (1.0 - w) * n2.y,
            w * n1.z + (1.0 - w) * n2.z,
        );
        let lhs = effective_qubit(mix, r, c).unwrap();
        let rhs = &effective_qubit(n1, r, c).unwrap().scaled(w) + &effective_qubit(n2, r, c).unwrap().scaled(1.0 - w);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn channel_trace_deficit_is_bounded_by_tail(n in bloch(1.0), r in 0.05..0.9f64, n_max in 16usize..40) {
        let r = acc(r);
        let c = FockCutoff::with_tolerance(n_max, 1.0);
        let out = effective_qubit(n, r, c).unwrap();
        let t2 = r.tanh().powi(2);
        let bound = t2.powi(n_max as i32) / (1.0 - t2) * (n_max as f64 + 2.0);
        prop_assert!(out.trace_re() <= 1.0 + 1e-12);
        prop_assert!(1.0 - out.trace_re() <= bound + 1e-14);
    }

    #[test]
    fn resource_state_is_a_density_operator(xi in 0.0..0.99f64, r in 0.0..0.9f64) {
        let r = acc(r);
        let rho = entangled_state(ortho(xi), r, cutoff(r)).unwrap();
        prop_assert_eq!(rho.hermitian_defect(), 0.0);
        prop_assert!((rho.trace_re() - 1.0).abs() < 1e-10);
        prop_assert!(eigvalsh(&rho).unwrap()[0] > -1e-10);
    }

    #[test]
    fn bures_angle_is_symmetric_and_unitarily_invariant(a in density(3, true), b in density(3, true), u in unitary(3)) {
        let ab = bures_angle(&a, &b).unwrap();
        prop_assert!((ab - bures_angle(&b, &a).unwrap()).abs() < 1e-9);
        let rotated = bures_angle(&a.conjugated_by(&u), &b.conjugated_by(&u)).unwrap();
        prop_assert!((ab - rotated).abs() < 1e-9);
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&ab));
    }

    #[test]
    fn distance_is_symmetric_and_nonnegative(a in density(3, false), b in density(3, false)) {
        let dab = generalized_bures_distance(&a, &b).unwrap();
        prop_assert!((dab - generalized_bures_distance(&b, &a).unwrap()).abs() < 1e-9);
        prop_assert!(dab >= -1e-10);
        prop_assert!(generalized_bures_distance(&a, &a).unwrap().abs() < 1e-10);
    }

    #[test]
    fn fidelity_is_bounded_by_trace_product(a in density(3, false), b in density(3, false)) {
        let f = fidelity(&a, &b).unwrap();
        prop_assert!(f >= 0.0);
        prop_assert!(f <= a.trace_re() * b.trace_re() + 1e-12);
        prop_assert!((fidelity(&a, &a).unwrap() - a.trace_re().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn distance_contracts_under_coarse_graining(a in density(3, false), b in density(3, false), e in density(3, true)) {
        // Effect 0 <= E <= 1 from a normalized state.
        let top = *eigvalsh(&e).unwrap().last().unwrap();
        let effect = e.scaled(1.0 / top);
        let grain = |rho: &DenseOperator| {
            let p = (&effect * rho).trace_re();
            DenseOperator::from_real([[p, 0.0], [0.0, rho.trace_re() - p]])
        };
        let before = generalized_bures_distance(&a, &b).unwrap();
        let after = generalized_bures_distance(&grain(&a), &grain(&b)).unwrap();
        prop_assert!(after <= before + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn negativity_ignores_local_unitaries_on_alice(xi in 0.0..0.95f64, r in 0.0..0.8f64, u in unitary(2)) {
        let r = acc(r);
        let c = cutoff(r);
        let rho = entangled_state(ortho(xi), r, c).unwrap();
        let local = alice_local(&u, c.levels());
        let rotated = rho.conjugated_by(&local).retagged(rho.dims().to_vec()).unwrap();
        let before = log_negativity(&rho, 0).unwrap();
        prop_assert!((before - log_negativity(&rotated, 0).unwrap()).abs() < 1e-10);
        prop_assert!((before - log_negativity(&rho, 1).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn teleportation_output_is_a_state(xi in 0.0..0.95f64, r in 0.0..0.8f64, seed in 0u64..1000) {
        let r = acc(r);
        let tele = Teleporter::new(ortho(xi), r, cutoff(r)).unwrap();
        let psi = haar_random_state(&mut sample_rng(seed, 0));
        let sigma = tele.final_state(psi);
        prop_assert!((sigma.trace_re() - 1.0).abs() < 1e-10);
        prop_assert!(sigma.hermitian_defect() < 1e-13);
        prop_assert!(eigvalsh(&sigma).unwrap()[0] > -1e-10);
    }

    #[test]
    fn exact_fidelity_is_gauge_invariant(xi in 0.0..0.95f64, r in 0.0..0.8f64, a in -3.2..3.2f64, b in -3.2..3.2f64) {
        let (x, r) = (ortho(xi), acc(r));
        let plain = Teleporter::new(x, r, cutoff(r)).unwrap().average_fidelity_exact();
        let rephased = schmidt_decompose(x).rephased([a, b]);
        let other = Teleporter::with_schmidt(rephased, x, r, cutoff(r)).unwrap().average_fidelity_exact();
        prop_assert!((plain - other).abs() < 1e-12);
    }

    #[test]
    fn schmidt_form_reconstructs_the_state(xi in 0.0..0.999f64, a in -3.2..3.2f64, b in -3.2..3.2f64) {
        let s = schmidt_decompose(ortho(xi));
        let vec = s.state_vector();
        let again = s.rephased([a, b]).state_vector();
        for k in 0..4 {
            prop_assert!((vec[k] - again[k]).norm() < 1e-12);
        }
        prop_assert!((s.lambda[0].powi(2) + s.lambda[1].powi(2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_metric_is_positive_definite_inside_the_ball(n in bloch(0.7), r in 0.0..0.3f64) {
        let g = metric_cartesian(n, acc(r)).unwrap();
        prop_assert!(g.is_positive_definite());
        prop_assert!(g.symmetry_defect() < 1e-12);
    }

    #[test]
    fn closed_form_metric_is_positive_definite_at_small_r(n in bloch(0.9), r in 0.0..0.1f64) {
        prop_assert!(metric_cartesian(n, acc(r)).unwrap().is_positive_definite());
    }

    #[test]
    fn numeric_metric_tracks_closed_form(n in bloch(0.7), r in 0.0..0.05f64) {
        let r = acc(r);
        let closed = metric_cartesian(n, r).unwrap();
        let numeric = numeric_metric(n, r, 1e-3).unwrap();
        prop_assert!(relative_discrepancy(&closed, &numeric) < 0.05);
    }
}

#[test]
fn closed_form_metric_loses_definiteness_near_the_north_pole() {
    let g = metric_cartesian(BlochVector::new(0.0, 0.0, 0.9), acc(0.3)).unwrap();
    assert!(!g.is_positive_definite());
}

#[test]
fn haar_sampler_averages_to_the_maximally_mixed_state() {
    let samples = 20_000;
    let mut mean = [[C64::new(0.0, 0.0); 2]; 2];
    for k in 0..samples {
        let psi = haar_random_state(&mut sample_rng(9, k));
        for i in 0..2 {
            for j in 0..2 {
                mean[i][j] += psi[i] * psi[j].conj() / samples as f64;
            }
        }
    }
    let tol = 5.0 / (samples as f64).sqrt();
    assert!((mean[0][0].re - 0.5).abs() < tol);
    assert!((mean[1][1].re - 0.5).abs() < tol);
    assert!(mean[0][1].norm() < tol);
}

#[test]
fn negativity_decreases_with_acceleration() {
    let mut last = f64::INFINITY;
    for r in [0.0, 0.2, 0.4, 0.6, 0.8, 1.0] {
        let r = acc(r);
        let value = log_negativity(&entangled_state(ortho(0.0), r, cutoff(r)).unwrap(), 0).unwrap();
        assert!(value <= last + 1e-12, "E_N rose to {value} at r = {}", r.r());
        last = value;
    }
}

#[test]
fn fidelity_decreases_with_acceleration() {
    for xi in [0.0, 0.3, 0.6] {
        let mut last_exact = f64::INFINITY;
        let mut last_mc: Option<(f64, f64)> = None;
        for r in [0.0, 0.2, 0.4, 0.6] {
            let r = acc(r);
            let tele = Teleporter::new(ortho(xi), r, cutoff(r)).unwrap();
            let exact = tele.average_fidelity_exact();
            assert!(exact <= last_exact + 1e-12);
            last_exact = exact;
            let mc = tele.average_fidelity_mc(5_000, 3).unwrap();
            if let Some((mean, err)) = last_mc {
                assert!(mc.mean <= mean + 2.0 * (err + mc.std_error));
            }
            last_mc = Some((mc.mean, mc.std_error));
        }
    }
}

#[test]
fn bures_angle_shrinks_with_acceleration() {
    let mut last = f64::INFINITY;
    for r in [0.0, 0.3, 0.6, 0.85] {
        let r = acc(r);
        let theta = rqit_core::distinguishability::angle_sweep(r, &[0.0], cutoff(r)).unwrap()[0].theta;
        assert!(theta < last);
        last = theta;
    }
}

#[test]
fn small_r_family_matches_exact_channel_to_fourth_order() {
    let points = [
        BlochVector::new(0.3, -0.2, 0.5),
        BlochVector::new(0.0, 0.0, -1.0),
        BlochVector::new(0.6, 0.1, -0.4),
    ];
    let block_error = |r: f64| -> f64 {
        let r = acc(r);
        points
            .iter()
            .map(|&n| {
                let exact = effective_qubit(n, r, cutoff(r)).unwrap();
                let approx = small_r_qubit(n, r);
                let mut worst = 0.0f64;
                for i in 0..3 {
                    for j in 0..3 {
                        worst = worst.max((exact.get(i, j) - approx.get(i, j)).norm());
                    }
                }
                worst
            })
            .fold(0.0, f64::max)
    };
    // Fit K on the calibration range, then hold the whole range to it.
    let calibration = [0.02, 0.04, 0.06, 0.08, 0.1];
    let k = calibration
        .iter()
        .map(|&r| block_error(r) / r.powi(4))
        .fold(0.0, f64::max);
    assert!(k.is_finite() && k < 50.0, "K = {k}");
    for r in [0.01, 0.03, 0.05, 0.07, 0.09] {
        assert!(block_error(r) <= 1.5 * k * r.powi(4), "r = {r}");
    }
    assert!(block_error(0.05) <= 1e-4);
}

#[test]
fn perturbation_breaks_isotropy() {
    let at_rest = metric_polar(0.5, 1.0, AccelerationParam::INERTIAL).unwrap().tensor;
    let moving = metric_polar(0.5, 1.0, acc(0.1)).unwrap().tensor;
    assert_eq!(at_rest[(0, 1)], 0.0);
    assert!(moving[(0, 1)].abs() > 1e-5);
}

#[test]
fn closed_form_curvature_scales_like_tanh_squared() {
    let delta = |r: f64| scalar_curvature_paper(0.5, 1.0, acc(r)).unwrap() / acc(r).cosh().powi(4) - 24.0;
    let ratio = delta(0.1) / delta(0.05);
    let expected = (0.1f64.tanh() / 0.05f64.tanh()).powi(2);
    assert!((ratio / expected - 1.0).abs() < 0.02);
}
