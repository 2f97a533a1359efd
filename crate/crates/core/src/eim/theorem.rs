//! Numerical check that the classic residual is a ratio of determinants:
//! `r_j(t) = det V_j(T_1..T_{j−1}, t) / det V_{j−1}(T_1..T_{j−1})` at every
//! grid point `t`.

use rayon::prelude::*;
use serde::Serialize;

use super::{classic_node, classic_residual, v_matrix, EimError};
use crate::numerics::{determinant, C64};
use crate::rbm::ReducedBasis;

/// Largest relative discrepancy accepted by `verify-theorem`.
pub const THEOREM_TOLERANCE: f64 = 1e-7;

/// Per-step comparison of the two sides of the identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TheoremStep {
    /// One-based step `j ≥ 2`.
    pub step: usize,
    /// Grid index picked as `T_j`.
    pub node: usize,
    /// `max_t |r_j(t)|`, attained at `T_j`.
    pub max_residual: f64,
    /// `max_t |r_j(t) − det ratio(t)|`.
    pub max_abs_discrepancy: f64,
    /// `max_abs_discrepancy / max_residual`.
    pub relative_discrepancy: f64,
}

/// Runs the classic selection loop for `n` nodes and, at every step,
/// compares the interpolation residual with the determinant ratio over the
/// whole grid. The residual comes from a linear solve; the ratio from
/// independent LU determinants of each extended V-matrix.
pub fn verify_theorem1(rb: &ReducedBasis, n: usize) -> Result<Vec<TheoremStep>, EimError> {
    if n == 0 || n > rb.len() {
        return Err(EimError::BadOrder {
            n,
            available: rb.len(),
        });
    }
    let basis = rb.basis().leading_block(n, rb.grid().len())?;
    let len = basis.cols();
    let mut nodes = vec![classic_node(&basis, &[])?];
    let mut steps = Vec::with_capacity(n.saturating_sub(1));

    for j in 1..n {
        let step = j + 1;
        let residual = classic_residual(&basis, &nodes)?;
        let det_prev = determinant(&v_matrix(&basis, &nodes)?)?;
        if det_prev == C64::new(0.0, 0.0) {
            return Err(EimError::SingularVMatrix { step: j });
        }
        let ratio: Vec<C64> = (0..len)
            .into_par_iter()
            .map(|t| {
                let mut trial = nodes.clone();
                trial.push(t);
                Ok(determinant(&v_matrix(&basis, &trial)?)? / det_prev)
            })
            .collect::<Result<_, EimError>>()?;

        let max_residual = residual.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let max_abs = residual
            .iter()
            .zip(&ratio)
            .map(|(r, q)| (r - q).norm())
            .fold(0.0, f64::max);
        let node = classic_node(&basis, &nodes)?;
        if nodes.contains(&node) {
            return Err(EimError::SingularVMatrix { step });
        }
        steps.push(TheoremStep {
            step,
            node,
            max_residual,
            max_abs_discrepancy: max_abs,
            relative_discrepancy: max_abs / max_residual,
        });
        nodes.push(node);
    }
    Ok(steps)
}
