//! Invariants of the construction, detectors and ROC machinery.

use num_complex::Complex64;
use overlap_sense::covariance::overlap_multiplicities;
use overlap_sense::montecarlo::{auc_concordance, roc_curve, run_paired};
use overlap_sense::*;
use proptest::prelude::*;

fn complex_matrix(rows: usize, cols: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), rows * cols).prop_map(move |v| {
        let data = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        CMatrix::from_vec(rows, cols, data).unwrap()
    })
}

/// (X, p) with 2 <= M <= 8, 1 <= p <= M - 1, 1 <= N <= 40.
fn data_and_overlap() -> impl Strategy<Value = (CMatrix, usize)> {
    (2usize..=8, 1usize..=40)
        .prop_flat_map(|(m, n)| (complex_matrix(m, n), 1..m))
}

fn max_rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    let scale = a.max_abs().max(b.max_abs()).max(f64::MIN_POSITIVE);
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Closed-form eigenvalues of a 3x3 Hermitian matrix (trigonometric solution
/// of the characteristic cubic), sorted descending.
fn cubic_eigenvalues(a: &CMatrix) -> [f64; 3] {
    let d = [a[(0, 0)].re, a[(1, 1)].re, a[(2, 2)].re];
    let q = (d[0] + d[1] + d[2]) / 3.0;
    let p1 = a[(0, 1)].norm_sqr() + a[(0, 2)].norm_sqr() + a[(1, 2)].norm_sqr();
    let p2 = d.iter().map(|x| (x - q).powi(2)).sum::<f64>() + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q; 3];
    }
    // det(B) for Hermitian B = (A - qI) / p.
    let b = |i: usize, j: usize| {
        let v = a[(i, j)] / p;
        if i == j {
            v - q / p
        } else {
            v
        }
    };
    let det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
        - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
        + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    let r = (det.re / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    let mut e = [e1, e2, e3];
    e.sort_by(|x, y| y.total_cmp(x));
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn both_construction_paths_agree((x, p) in data_and_overlap()) {
        let direct = build_combinatorial(&x, p).unwrap().covariance();
        let blocks = assemble_covariance_from_blocks(&sample_covariance(&x), p).unwrap();
        prop_assert!(max_rel_diff(direct.entries(), blocks.entries()) <= 1e-10);
    }

    #[test]
    fn covariances_are_hermitian_psd((x, p) in data_and_overlap()) {
        let r = sample_covariance(&x);
        let rp = assemble_covariance_from_blocks(&r, p).unwrap();
        for c in [&r, &rp] {
            let e = c.entries();
            for i in 0..e.rows() {
                for j in 0..e.cols() {
                    prop_assert_eq!(e[(i, j)], e[(j, i)].conj());
                }
            }
            let spec = eigvals_hermitian(c).unwrap();
            let top = spec.largest();
            prop_assert!(spec.smallest() >= -1e-10 * top.max(1.0));
            prop_assert!((spec.values().iter().sum::<f64>() - spec.trace()).abs()
                <= 1e-10 * spec.trace().abs().max(1.0));
            prop_assert!(spec.values().windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn trace_grows_with_overlap((x, p) in data_and_overlap()) {
        prop_assume!(p >= 2);
        let r = sample_covariance(&x);
        let rp = assemble_covariance_from_blocks(&r, p).unwrap();
        prop_assert!(trace(&rp) >= trace(&r));
    }

    #[test]
    fn largest_eigenvalue_dominates_diagonal_blocks((x, p) in data_and_overlap()) {
        let r = sample_covariance(&x);
        let rp = assemble_covariance_from_blocks(&r, p).unwrap();
        let top = eigvals_hermitian(&rp).unwrap().largest();
        let m_prime = x.rows() + 1 - p;
        for i in 0..p {
            let block = sample_covariance(&build_subgroups(&x, p).unwrap()[i]);
            let b = eigvals_hermitian(&block).unwrap().largest();
            prop_assert!(top >= b * (1.0 - 1e-12) - 1e-12, "block {i} of size {m_prime}");
        }
    }

    #[test]
    fn mirrored_overlap_has_same_spectrum((x, p) in data_and_overlap()) {
        // Subgroup counts per sensor are symmetric under p <-> M + 1 - p, and
        // the two stacked matrices are row permutations of each other.
        let m = x.rows();
        let q = m + 1 - p;
        prop_assume!(q < m);
        prop_assert_eq!(overlap_multiplicities(m, p).unwrap(), overlap_multiplicities(m, q).unwrap());
        let r = sample_covariance(&x);
        let a = eigvals_hermitian(&assemble_covariance_from_blocks(&r, p).unwrap()).unwrap();
        let b = eigvals_hermitian(&assemble_covariance_from_blocks(&r, q).unwrap()).unwrap();
        let scale = a.largest().max(1.0);
        for (u, v) in a.values().iter().zip(b.values()) {
            prop_assert!((u - v).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn eigenvalues_scale_with_data((x, p) in data_and_overlap(), re in 0.1f64..3.0, im in -3.0f64..3.0) {
        let c = Complex64::new(re, im);
        let k = c.norm_sqr();
        let spec = |x: &CMatrix| {
            eigvals_hermitian(&assemble_covariance_from_blocks(&sample_covariance(x), p).unwrap())
                .unwrap()
        };
        let (a, b) = (spec(&x), spec(&x.scale(c)));
        let tol = 1e-10 * a.largest().max(1e-300) * k;
        for (u, v) in a.values().iter().zip(b.values()) {
            prop_assert!((u * k - v).abs() <= tol);
        }
    }

    #[test]
    fn blind_detectors_are_scale_invariant(
        values in prop::collection::vec(0.05f64..10.0, 2..14),
        c in 0.01f64..100.0,
    ) {
        let spec = EigenSpectrum::from_values(values).unwrap();
        let scaled = spec.scaled(c);
        let l = spec.len();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs();
        prop_assert!(close(glrt(&spec, l).unwrap(), glrt(&scaled, l).unwrap()));
        prop_assert!(close(mme(&spec).unwrap(), mme(&scaled).unwrap()));
        prop_assert!(close(eme(&spec, l).unwrap(), eme(&scaled, l).unwrap()));
        prop_assert!(close(c * rlrt(&spec, 1.3).unwrap(), rlrt(&scaled, 1.3).unwrap()));
    }

    #[test]
    fn glrt_floor(values in prop::collection::vec(0.0f64..10.0, 1..14)) {
        prop_assume!(values.iter().any(|&v| v > 0.0));
        let spec = EigenSpectrum::from_values(values.clone()).unwrap();
        let g = glrt(&spec, spec.len()).unwrap();
        prop_assert!(g >= 1.0 - 1e-12);
        let all_equal = values.iter().all(|&v| v == values[0]);
        if all_equal {
            prop_assert!((g - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn decision_is_monotone(gamma in -10.0f64..10.0, mut ts in prop::collection::vec(-20.0f64..20.0, 2..30)) {
        ts.sort_by(f64::total_cmp);
        let verdicts: Vec<Hypothesis> = ts.iter().map(|&t| decide(t, gamma).unwrap().verdict).collect();
        let first_h1 = verdicts.iter().position(|&v| v == Hypothesis::H1).unwrap_or(verdicts.len());
        prop_assert!(verdicts[first_h1..].iter().all(|&v| v == Hypothesis::H1));
    }

    #[test]
    fn auc_equals_pairwise_concordance(
        h0 in prop::collection::vec(0u8..20, 1..100),
        h1 in prop::collection::vec(0u8..20, 1..100),
    ) {
        // Small integer support forces plenty of ties.
        let h0: Vec<f64> = h0.into_iter().map(f64::from).collect();
        let h1: Vec<f64> = h1.into_iter().map(f64::from).collect();
        let mut pairs = 0.0;
        for &a in &h1 {
            for &b in &h0 {
                pairs += if a > b { 1.0 } else if a == b { 0.5 } else { 0.0 };
            }
        }
        let oracle = pairs / (h0.len() * h1.len()) as f64;
        let roc = roc_curve(&h0, &h1).unwrap();
        prop_assert!((roc.auc - oracle).abs() <= 1e-9);
        prop_assert!((auc_concordance(&h0, &h1).unwrap() - oracle).abs() <= 1e-9);
        prop_assert!(roc.points.windows(2).all(|w| w[1].0 >= w[0].0 && w[1].1 >= w[0].1));
        prop_assert_eq!(roc.points[0], (0.0, 0.0));
        prop_assert_eq!(*roc.points.last().unwrap(), (1.0, 1.0));
    }
}

#[test]
fn jacobi_matches_cubic_formula() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..500 {
        let mut a = CMatrix::zeros(3, 3);
        for i in 0..3 {
            a[(i, i)] = Complex64::new(rng.random_range(-5.0..5.0), 0.0);
            for j in (i + 1)..3 {
                let v = Complex64::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
                a[(i, j)] = v;
                a[(j, i)] = v.conj();
            }
        }
        let jac = overlap_sense::linalg::hermitian_eigenvalues(&a).unwrap();
        let cub = cubic_eigenvalues(&a);
        for (x, y) in jac.iter().zip(cub) {
            assert!((x - y).abs() < 1e-8, "{jac:?} vs {cub:?}");
        }
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let s = ScenarioConfig::default();
    let dets = [DetectorKind::Rlrt { noise_variance: 1.0 }, DetectorKind::Mme];
    let run = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| run_paired(&s, Hypothesis::H1, &[1, 2, 4], &dets, 64, 77).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}
