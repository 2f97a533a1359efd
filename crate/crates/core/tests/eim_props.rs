mod common;

use common::*;
use emprint_core::diagnostics::{identity_checks, interpolation_operator};
use emprint_core::eim::{build_interpolant, build_interpolant_with, EimOptions, FirstNode};
use emprint_core::rbm::{build_reduced_basis, project};
use emprint_core::{ComplexMatrix, ReducedBasis, SelectionCriterion, TimeGrid, C64};
use proptest::prelude::*;

fn random_basis(n: usize, len: usize, seed: u64) -> ReducedBasis {
    let grid = TimeGrid::new(0.0, 1.0, len).unwrap();
    ReducedBasis::from_parts(grid, orthonormal_rows(n, len, seed), vec![], vec![], 0.0).unwrap()
}

fn oracle_score(c: SelectionCriterion, basis: &ComplexMatrix, nodes: &[usize]) -> f64 {
    let (k, l) = oracle_kappa_lambda(&v_of(basis, nodes));
    match c {
        SelectionCriterion::MinLambda => l,
        _ => k,
    }
}

fn criterion() -> impl Strategy<Value = SelectionCriterion> {
    prop_oneof![
        Just(SelectionCriterion::Classic),
        Just(SelectionCriterion::MinKappa),
        Just(SelectionCriterion::MinLambda),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn variant_nodes_are_exhaustive_minimizers(
        n in 2usize..6,
        len in 8usize..30,
        seed in any::<u64>(),
        objective_first in any::<bool>(),
        lambda in any::<bool>(),
    ) {
        let c = if lambda { SelectionCriterion::MinLambda } else { SelectionCriterion::MinKappa };
        let rb = random_basis(n, len, seed);
        let opts = EimOptions {
            first_node: if objective_first { FirstNode::Objective } else { FirstNode::ArgmaxBasis },
            ..Default::default()
        };
        let itp = build_interpolant_with(&rb, c, n, &opts).unwrap();
        let nodes = itp.node_indices();
        let basis = rb.basis();
        let first_rescanned = objective_first;
        if !first_rescanned {
            let e1 = basis.row(0);
            let peak = (0..len).map(|t| e1[t].norm()).fold(0.0, f64::max);
            prop_assert!(e1[nodes[0]].norm() >= peak * (1.0 - 1e-14));
        }
        let start = if first_rescanned { 0 } else { 1 };
        for j in start..n {
            let prev = &nodes[..j];
            let chosen = oracle_score(c, basis, &nodes[..=j]);
            let best = (0..len)
                .filter(|t| !prev.contains(t))
                .map(|t| {
                    let mut trial = prev.to_vec();
                    trial.push(t);
                    oracle_score(c, basis, &trial)
                })
                .fold(f64::INFINITY, f64::min);
            prop_assert!(chosen <= best * (1.0 + 1e-9), "step {}: chosen {} best {}", j + 1, chosen, best);
        }
    }

    #[test]
    fn classic_nodes_maximize_oracle_residual(n in 2usize..7, len in 8usize..40, seed in any::<u64>()) {
        let rb = random_basis(n, len, seed);
        let itp = build_interpolant(&rb, SelectionCriterion::Classic, n).unwrap();
        let nodes = itp.node_indices();
        let basis = rb.basis();
        for j in 1..n {
            let e = basis.row(j).to_vec();
            let ie = oracle_interpolate(basis, &nodes[..j], &e);
            let r: Vec<f64> = e.iter().zip(&ie).map(|(a, b)| (a - b).norm()).collect();
            let peak = r.iter().cloned().fold(0.0, f64::max);
            prop_assert!(r[nodes[j]] >= peak * (1.0 - 1e-10));
        }
    }

    #[test]
    fn cardinality_and_exactness_on_span(c in criterion(), n in 1usize..7, len in 8usize..40, seed in any::<u64>()) {
        let rb = random_basis(n, len, seed);
        let itp = build_interpolant(&rb, c, n).unwrap();
        let b = itp.b_matrix();
        for (i, _) in itp.node_indices().iter().enumerate() {
            for (k, &tk) in itp.node_indices().iter().enumerate() {
                let want = if i == k { 1.0 } else { 0.0 };
                prop_assert!((b[(i, tk)] - C64::new(want, 0.0)).norm() <= 1e-10);
            }
        }
        let coef = random_matrix(1, n, !seed);
        let h: Vec<C64> = (0..len)
            .map(|t| (0..n).map(|j| coef[(0, j)] * rb.basis()[(j, t)]).sum())
            .collect();
        let ih = itp.interpolate_function(&h).unwrap();
        prop_assert!(max_abs_diff(&h, &ih) <= 1e-9 * norm(&h).max(1.0));
        // agrees with an interpolant solved from scratch
        let g = random_matrix(1, len, seed ^ 0x55).row(0).to_vec();
        let oracle = oracle_interpolate(rb.basis(), itp.node_indices(), &g);
        prop_assert!(max_abs_diff(&itp.interpolate_function(&g).unwrap(), &oracle) <= 1e-10 * norm(&oracle).max(1.0) * itp.condition_number());
    }

    #[test]
    fn interpolation_error_bounded_by_lebesgue_constant(c in criterion(), n in 1usize..7, seed in any::<u64>()) {
        let rb = random_basis(n, 30, seed);
        let itp = build_interpolant(&rb, c, n).unwrap();
        let h = random_matrix(1, 30, seed.wrapping_mul(3)).row(0).to_vec();
        let ih = itp.interpolate_function(&h).unwrap();
        let ph = project(&rb, &h, n).unwrap();
        let ie = norm(&h.iter().zip(&ih).map(|(a, b)| a - b).collect::<Vec<_>>());
        let pe = norm(&h.iter().zip(&ph).map(|(a, b)| a - b).collect::<Vec<_>>());
        let (_, lambda) = oracle_kappa_lambda(itp.v_matrix());
        prop_assert!(pe <= ie * (1.0 + 1e-10));
        prop_assert!(ie <= lambda * pe * (1.0 + 1e-8));
        prop_assert!((itp.lebesgue_constant() - lambda).abs() <= 1e-10 * lambda);
    }

    #[test]
    fn nested_prefixes_match_fresh_builds(c in criterion(), n in 2usize..6, seed in any::<u64>()) {
        let rb = random_basis(n, 25, seed);
        let full = build_interpolant(&rb, c, n).unwrap();
        for m in 1..n {
            let fresh = build_interpolant(&rb, c, m).unwrap();
            let pre = full.prefix(m).unwrap();
            prop_assert_eq!(fresh.node_indices(), pre.node_indices());
            prop_assert_eq!(fresh.v_matrix(), pre.v_matrix());
        }
    }
}

#[test]
fn operator_norm_identity_on_random_orthonormal_basis() {
    for c in SelectionCriterion::ALL {
        let rb = random_basis(6, 60, 2024);
        let itp = build_interpolant(&rb, c, 6).unwrap();
        let checks = identity_checks(&itp).unwrap();
        let op = checks.operator.clone().unwrap();
        assert!(op.relative_residual <= 1e-8, "{c}: {op:?}");
        assert!(checks.max_kappa_residual() <= 1e-10);
        // independent: largest singular value of the operator vs ‖V⁻¹‖
        let op_norm = jacobi_singular_values(&interpolation_operator(&itp))[0];
        let (kappa, lambda) = oracle_kappa_lambda(itp.v_matrix());
        assert!((op_norm - lambda).abs() <= 1e-8 * lambda);
        let v_norm = jacobi_singular_values(itp.v_matrix())[0];
        assert!((kappa - v_norm * lambda).abs() <= 1e-10 * kappa);
    }
}

#[test]
fn determinants_recorded_per_step_match_cofactors() {
    let rb = random_basis(5, 20, 77);
    let itp = build_interpolant(&rb, SelectionCriterion::Classic, 5).unwrap();
    for (m, step) in itp.per_step().iter().enumerate() {
        let v = itp.v_matrix().leading_block(m + 1, m + 1).unwrap();
        let oracle = cofactor_det(&to_rows(&v));
        assert!((step.det_v - oracle).norm() <= 1e-12 * oracle.norm().max(1e-12));
    }
}

#[test]
fn greedy_basis_feeds_all_criteria() {
    use emprint_core::catalog::generate_family;
    use emprint_core::{Family, FamilySpec};
    let ts = generate_family(&FamilySpec::with_defaults(Family::DampedChirp, 21, 201).unwrap()).unwrap();
    let rb = build_reduced_basis(&ts, 1e-10, 30).unwrap();
    for c in SelectionCriterion::ALL {
        let itp = build_interpolant(&rb, c, rb.len()).unwrap();
        let mut sorted = itp.node_indices().to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), rb.len());
    }
}
