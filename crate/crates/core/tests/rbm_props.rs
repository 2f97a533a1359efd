mod common;

use std::io::Cursor;

use common::*;
use emprint_core::catalog::generate_family;
use emprint_core::rbm::{
    build_reduced_basis, project, projection_error_sq, read_basis, write_basis,
    write_greedy_errors, RbmError,
};
use emprint_core::{ComplexMatrix, Family, FamilySpec, TimeGrid, TrainingSet, C64};
use proptest::prelude::*;

fn random_training(k: usize, len: usize, seed: u64) -> TrainingSet {
    let grid = TimeGrid::new(0.0, 1.0, len).unwrap();
    let params = (0..k).map(|i| vec![i as f64]).collect();
    TrainingSet::new(grid, params, random_matrix(k, len, seed)).unwrap()
}

/// `‖h − Π h‖_d²` for the orthogonal projection onto `span{rows}`, via the
/// Gram system of the raw (non-orthonormal) rows.
fn oracle_proj_err_sq(rows: &[Vec<C64>], h: &[C64], dt: f64) -> f64 {
    if rows.is_empty() {
        return norm(h).powi(2) * dt;
    }
    let n = rows.len();
    let gram = ComplexMatrix::from_fn(n, n, |i, j| inner(&rows[i], &rows[j])).unwrap();
    let rhs: Vec<C64> = rows.iter().map(|r| inner(r, h)).collect();
    let coef = gauss_solve(&gram, &rhs);
    let r: Vec<C64> = (0..h.len())
        .map(|t| h[t] - coef.iter().zip(rows).map(|(c, row)| c * row[t]).sum::<C64>())
        .collect();
    norm(&r).powi(2) * dt
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn greedy_matches_brute_force(k in 2usize..10, len in 12usize..40, seed in any::<u64>()) {
        let ts = random_training(k, len, seed);
        let n_max = k.min(6);
        let rb = build_reduced_basis(&ts, 0.0, n_max).unwrap();
        let dt = ts.grid().dt();

        let mut picked: Vec<Vec<C64>> = Vec::new();
        let first = (0..k)
            .max_by(|&a, &b| norm(ts.row(a)).total_cmp(&norm(ts.row(b))).then(b.cmp(&a)))
            .unwrap();
        let mut pick = first;
        for step in 0..rb.len() {
            prop_assert_eq!(rb.greedy_params()[step], pick);
            picked.push(ts.row(pick).to_vec());
            let errs: Vec<f64> = (0..k).map(|i| oracle_proj_err_sq(&picked, ts.row(i), dt)).collect();
            let (arg, max) = errs.iter().enumerate().fold((0, f64::MIN), |acc, (i, &e)| if e > acc.1 { (i, e) } else { acc });
            let got = rb.greedy_errors()[step];
            prop_assert!((got - max).abs() <= 1e-10 * errs.iter().cloned().fold(0.0, f64::max).max(1e-300) + 1e-14,
                "step {}: {} vs {}", step, got, max);
            pick = arg;
        }
        prop_assert!(rb.orthonormality_defect() <= 1e-13);
    }

    #[test]
    fn projection_is_optimal_and_parseval_holds(k in 3usize..8, seed in any::<u64>(), pert in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8)) {
        let ts = random_training(k, 30, seed);
        let rb = build_reduced_basis(&ts, 0.0, k).unwrap();
        let dt = ts.grid().dt();
        let h = random_matrix(1, 30, seed.wrapping_add(1)).row(0).to_vec();
        for n in 1..=rb.len() {
            let p = project(&rb, &h, n).unwrap();
            let best = projection_error_sq(&rb, &h, n).unwrap();
            // any other element of the span does no better
            let mut q = p.clone();
            for (i, &(re, im)) in pert.iter().take(n).enumerate() {
                for (qt, e) in q.iter_mut().zip(rb.vector(i)) {
                    *qt += C64::new(re, im) * 1e-3 * e;
                }
            }
            let other: f64 = h.iter().zip(&q).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() * dt;
            prop_assert!(best <= other * (1.0 + 1e-12));
            // ‖P_n h‖_d² = Δt Σ|⟨ê_i, h⟩|²
            let coef_sq: f64 = rb.coefficients(&h, n).unwrap().iter().map(|z| z.norm_sqr()).sum::<f64>() * dt;
            let pn = norm(&p).powi(2) * dt;
            prop_assert!((pn - coef_sq).abs() <= 1e-12 * pn.max(1e-300));
            // Pythagoras ties it to the projection error
            let hn = norm(&h).powi(2) * dt;
            prop_assert!((hn - pn - best).abs() <= 1e-12 * hn);
        }
    }

    #[test]
    fn projection_error_is_nonincreasing(k in 3usize..9, seed in any::<u64>()) {
        let ts = random_training(k, 25, seed);
        let rb = build_reduced_basis(&ts, 0.0, k).unwrap();
        let h = random_matrix(1, 25, !seed).row(0).to_vec();
        let errs: Vec<f64> = (1..=rb.len()).map(|n| projection_error_sq(&rb, &h, n).unwrap()).collect();
        for w in errs.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-300);
        }
        for w in rb.greedy_errors().windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }
}

#[test]
fn damped_chirp_errors_decay() {
    let ts = generate_family(&FamilySpec::with_defaults(Family::DampedChirp, 41, 401).unwrap()).unwrap();
    let rb = build_reduced_basis(&ts, 1e-12, 40).unwrap();
    let e = rb.greedy_errors();
    assert!(*e.last().unwrap() <= 1e-12);
    assert!(e[0] / e.last().unwrap() >= 1e10);
    assert!(rb.len() >= 12 && rb.len() <= 25, "n = {}", rb.len());
    assert!(rb.orthonormality_defect() <= 1e-12);
    // every training row is within tolerance of the span
    for h in ts.rows() {
        assert!(projection_error_sq(&rb, h, rb.len()).unwrap() <= 1e-12 * (1.0 + 1e-6));
    }
}

#[test]
fn dependent_rows_are_degenerate() {
    let grid = TimeGrid::new(0.0, 1.0, 10).unwrap();
    let f = random_matrix(1, 10, 4).row(0).to_vec();
    let g: Vec<C64> = f.iter().map(|z| z * C64::new(0.0, 2.0)).collect();
    let ts = TrainingSet::new(grid, vec![vec![0.0], vec![1.0]], ComplexMatrix::from_rows(&[f, g]).unwrap()).unwrap();
    match build_reduced_basis(&ts, -0.0, 2) {
        Err(RbmError::DegenerateResidual { step: 2, .. }) => {}
        // exact cancellation leaves σ₁² = 0 ≤ tol and the sweep stops cleanly
        Ok(rb) => assert_eq!(rb.len(), 1),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(build_reduced_basis(&ts, -1.0, 2), Err(RbmError::InvalidSettings(_))));
    assert!(matches!(build_reduced_basis(&ts, 0.0, 0), Err(RbmError::InvalidSettings(_))));
}

#[test]
fn basis_file_round_trip() {
    let ts = random_training(6, 20, 8);
    let rb = build_reduced_basis(&ts, 0.0, 4).unwrap();
    let mut b = Vec::new();
    let mut e = Vec::new();
    write_basis(&rb, &mut b).unwrap();
    write_greedy_errors(&rb, &mut e).unwrap();
    let back = read_basis(Cursor::new(&b), Some(Cursor::new(&e))).unwrap();
    assert_eq!(back, rb);
    let bare = read_basis(Cursor::new(&b), None::<Cursor<Vec<u8>>>).unwrap();
    assert!(bare.greedy_errors().is_empty());
    assert_eq!(bare.basis(), rb.basis());
}
