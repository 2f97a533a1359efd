//! Empirical interpolation: nested node selection on the time grid, the
//! V-matrix `(V)_{ij} = ê_j(T_i)`, cardinal functions `B_i` with
//! `B_i(T_j) = δ_ij`, and interpolant evaluation.
//!
//! Three selection rules are available. `Classic` takes the grid point where
//! the current interpolation residual of the next basis vector is largest.
//! `MinKappa` and `MinLambda` scan every unused grid point and keep the one
//! minimizing the 2-norm condition number of the extended V-matrix, or the
//! 2-norm of its inverse.

mod record;
mod theorem;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::TimeGrid;
use crate::numerics::{
    condition_from_singular, determinant, inverse_norm_from_singular, lu_factor,
    singular_values_with, ComplexMatrix, NumericsError, SvdConfig, C64,
};
use crate::rbm::ReducedBasis;
use crate::select::{argmax, argmin};

pub use record::{InterpolantRecord, StepRecordJson};
pub use theorem::{verify_theorem1, TheoremStep, THEOREM_TOLERANCE};

/// Classic residual maxima below this fraction of `max|ê_j|` mean the next
/// basis vector is (numerically) in the span of the previous ones.
const SINGULAR_RESIDUAL_RTOL: f64 = 1e-12;

/// A V-matrix with `σ_min ≤ SINGULAR_RCOND · σ_max` is singular to working
/// precision.
const SINGULAR_RCOND: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EimError {
    #[error("interpolant order {n} outside 1..={available}")]
    BadOrder { n: usize, available: usize },
    #[error("no admissible node left at step {step}")]
    NoAdmissibleNode { step: usize },
    #[error("V-matrix is singular at step {step}")]
    SingularVMatrix { step: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionCriterion {
    /// Largest interpolation residual.
    Classic,
    /// Smallest condition number of the extended V-matrix.
    #[serde(rename = "kappa")]
    MinKappa,
    /// Smallest inverse norm of the extended V-matrix.
    #[serde(rename = "lambda")]
    MinLambda,
}

impl SelectionCriterion {
    pub const ALL: [SelectionCriterion; 3] = [
        SelectionCriterion::Classic,
        SelectionCriterion::MinKappa,
        SelectionCriterion::MinLambda,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            SelectionCriterion::Classic => "classic",
            SelectionCriterion::MinKappa => "kappa",
            SelectionCriterion::MinLambda => "lambda",
        }
    }
}

impl fmt::Display for SelectionCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for SelectionCriterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "classic" | "eim" => Ok(SelectionCriterion::Classic),
            "kappa" | "min-kappa" | "eim-kappa" => Ok(SelectionCriterion::MinKappa),
            "lambda" | "min-lambda" | "eim-lambda" => Ok(SelectionCriterion::MinLambda),
            other => Err(format!(
                "unknown criterion '{other}' (expected classic, kappa or lambda)"
            )),
        }
    }
}

/// How the first node is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstNode {
    /// `argmax_t |ê_1(t)|` for every criterion.
    #[default]
    ArgmaxBasis,
    /// Apply the criterion's own objective to the 1×1 V-matrix as well.
    Objective,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EimOptions {
    pub first_node: FirstNode,
    pub svd: SvdConfig,
}

/// Diagnostics for the prefix interpolant with `m` nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord {
    pub det_v: C64,
    pub kappa: f64,
    pub lambda: f64,
    /// `|ê_m(T_m) − I_{m−1}[ê_m](T_m)|`; for `m = 1`, `|ê_1(T_1)|`.
    pub residual_at_node: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalInterpolant {
    grid: TimeGrid,
    basis: ComplexMatrix,
    criterion: SelectionCriterion,
    node_indices: Vec<usize>,
    v_matrix: ComplexMatrix,
    b_matrix: ComplexMatrix,
    per_step: Vec<StepRecord>,
}

/// Builds an `n`-node empirical interpolant on the first `n` basis vectors.
pub fn build_interpolant(
    rb: &ReducedBasis,
    criterion: SelectionCriterion,
    n: usize,
) -> Result<EmpiricalInterpolant, EimError> {
    build_interpolant_with(rb, criterion, n, &EimOptions::default())
}

pub fn build_interpolant_with(
    rb: &ReducedBasis,
    criterion: SelectionCriterion,
    n: usize,
    options: &EimOptions,
) -> Result<EmpiricalInterpolant, EimError> {
    if n == 0 || n > rb.len() {
        return Err(EimError::BadOrder {
            n,
            available: rb.len(),
        });
    }
    let basis = rb.basis().leading_block(n, rb.grid().len())?;
    let nodes = select_nodes(&basis, criterion, n, options)?;
    EmpiricalInterpolant::assemble(*rb.grid(), basis, criterion, nodes, &options.svd)
}

fn select_nodes(
    basis: &ComplexMatrix,
    criterion: SelectionCriterion,
    n: usize,
    options: &EimOptions,
) -> Result<Vec<usize>, EimError> {
    let len = basis.cols();
    let mut nodes: Vec<usize> = Vec::with_capacity(n);
    for j in 0..n {
        if j >= len {
            return Err(EimError::NoAdmissibleNode { step: j + 1 });
        }
        let use_objective = j > 0 || options.first_node == FirstNode::Objective;
        let next = match criterion {
            SelectionCriterion::MinKappa | SelectionCriterion::MinLambda if use_objective => {
                let scores = candidate_scores(basis, &nodes, criterion, &options.svd)?;
                let (best, _) = argmin(scores).ok_or(EimError::SingularVMatrix { step: j + 1 })?;
                let mut trial = nodes.clone();
                trial.push(best);
                let s = singular_values_with(&v_matrix(basis, &trial)?, &options.svd)?;
                if condition_from_singular(&s) * SINGULAR_RCOND >= 1.0 {
                    return Err(EimError::SingularVMatrix { step: j + 1 });
                }
                best
            }
            _ => classic_node(basis, &nodes)?,
        };
        if nodes.contains(&next) {
            return Err(EimError::SingularVMatrix { step: j + 1 });
        }
        nodes.push(next);
    }
    Ok(nodes)
}

/// `r_j(t) = ê_j(t) − I_{j−1}[ê_j](t)` over the whole grid, with
/// `j = nodes.len()` (zero-based row of `basis`).
pub(crate) fn classic_residual(
    basis: &ComplexMatrix,
    nodes: &[usize],
) -> Result<Vec<C64>, EimError> {
    let j = nodes.len();
    let target = basis.row(j);
    if j == 0 {
        return Ok(target.to_vec());
    }
    let v = v_matrix(basis, nodes)?;
    let lu = lu_factor(&v).map_err(|e| singular_at(e, j))?;
    let rhs: Vec<C64> = nodes.iter().map(|&t| target[t]).collect();
    let coeffs = lu.solve_vec(&rhs)?;
    let mut r = target.to_vec();
    for (k, c) in coeffs.iter().enumerate() {
        for (ri, ek) in r.iter_mut().zip(basis.row(k)) {
            *ri -= c * ek;
        }
    }
    Ok(r)
}

fn classic_node(basis: &ComplexMatrix, nodes: &[usize]) -> Result<usize, EimError> {
    let step = nodes.len() + 1;
    let r = classic_residual(basis, nodes)?;
    let (best, value) = argmax(r.iter().map(|z| Some(z.norm())))
        .ok_or(EimError::NoAdmissibleNode { step })?;
    let scale = basis.row(nodes.len()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if value.is_nan() || value <= SINGULAR_RESIDUAL_RTOL * scale {
        return Err(EimError::SingularVMatrix { step });
    }
    Ok(best)
}

/// Objective value of every grid point as the next node; `None` for points
/// already chosen. Evaluated in parallel, returned in index order.
fn candidate_scores(
    basis: &ComplexMatrix,
    nodes: &[usize],
    criterion: SelectionCriterion,
    svd: &SvdConfig,
) -> Result<Vec<Option<f64>>, EimError> {
    let len = basis.cols();
    (0..len)
        .into_par_iter()
        .map(|t| {
            if nodes.contains(&t) {
                return Ok(None);
            }
            let mut trial = nodes.to_vec();
            trial.push(t);
            let v = v_matrix(basis, &trial)?;
            let s = singular_values_with(&v, svd)?;
            Ok(Some(objective(criterion, &s)))
        })
        .collect()
}

fn objective(criterion: SelectionCriterion, singular: &[f64]) -> f64 {
    match criterion {
        SelectionCriterion::MinLambda => inverse_norm_from_singular(singular),
        _ => condition_from_singular(singular),
    }
}

/// Square V-matrix for the given nodes on the first `nodes.len()` rows of
/// `basis`.
pub fn v_matrix(basis: &ComplexMatrix, nodes: &[usize]) -> Result<ComplexMatrix, EimError> {
    let m = nodes.len();
    if m == 0 || m > basis.rows() {
        return Err(EimError::BadOrder {
            n: m,
            available: basis.rows(),
        });
    }
    if let Some(&bad) = nodes.iter().find(|&&t| t >= basis.cols()) {
        return Err(EimError::LengthMismatch {
            expected: basis.cols(),
            found: bad,
        });
    }
    Ok(ComplexMatrix::from_fn(m, m, |i, k| basis[(k, nodes[i])])?)
}

fn singular_at(e: NumericsError, step: usize) -> EimError {
    match e {
        NumericsError::ExactlySingular { .. } => EimError::SingularVMatrix { step },
        other => other.into(),
    }
}

impl EmpiricalInterpolant {
    fn assemble(
        grid: TimeGrid,
        basis: ComplexMatrix,
        criterion: SelectionCriterion,
        nodes: Vec<usize>,
        svd: &SvdConfig,
    ) -> Result<Self, EimError> {
        let n = nodes.len();
        let v = v_matrix(&basis, &nodes)?;
        // rows of B solve Vᵀ·B = E
        let lu_t = lu_factor(&v.transpose()).map_err(|e| singular_at(e, n))?;
        let b = lu_t.solve_matrix(&basis)?;

        let mut per_step = Vec::with_capacity(n);
        for m in 1..=n {
            let vm = v.leading_block(m, m)?;
            let s = singular_values_with(&vm, svd)?;
            let residual = classic_residual(&basis, &nodes[..m - 1])?[nodes[m - 1]].norm();
            per_step.push(StepRecord {
                det_v: determinant(&vm)?,
                kappa: condition_from_singular(&s),
                lambda: inverse_norm_from_singular(&s),
                residual_at_node: residual,
            });
        }
        Ok(Self {
            grid,
            basis,
            criterion,
            node_indices: nodes,
            v_matrix: v,
            b_matrix: b,
            per_step,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Number of nodes `n`.
    pub fn len(&self) -> usize {
        self.node_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn criterion(&self) -> SelectionCriterion {
        self.criterion
    }

    pub fn node_indices(&self) -> &[usize] {
        &self.node_indices
    }

    pub fn node_times(&self) -> Vec<f64> {
        self.node_indices.iter().map(|&i| self.grid.t(i)).collect()
    }

    /// The `n` basis rows the interpolant was built on.
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn v_matrix(&self) -> &ComplexMatrix {
        &self.v_matrix
    }

    /// Row `i` holds `B_i(t)` on the grid.
    pub fn b_matrix(&self) -> &ComplexMatrix {
        &self.b_matrix
    }

    pub fn per_step(&self) -> &[StepRecord] {
        &self.per_step
    }

    /// `κ(V_n)`.
    pub fn condition_number(&self) -> f64 {
        self.per_step[self.len() - 1].kappa
    }

    /// `Λ_n = ‖V_n⁻¹‖`.
    pub fn lebesgue_constant(&self) -> f64 {
        self.per_step[self.len() - 1].lambda
    }

    /// The interpolant on the first `m` nodes and basis vectors. Identical
    /// to a fresh build of order `m` with the same criterion.
    pub fn prefix(&self, m: usize) -> Result<Self, EimError> {
        if m == 0 || m > self.len() {
            return Err(EimError::BadOrder {
                n: m,
                available: self.len(),
            });
        }
        if m == self.len() {
            return Ok(self.clone());
        }
        let basis = self.basis.leading_block(m, self.basis.cols())?;
        let nodes = self.node_indices[..m].to_vec();
        let v = self.v_matrix.leading_block(m, m)?;
        let lu_t = lu_factor(&v.transpose()).map_err(|e| singular_at(e, m))?;
        let b = lu_t.solve_matrix(&basis)?;
        Ok(Self {
            grid: self.grid,
            basis,
            criterion: self.criterion,
            node_indices: nodes,
            v_matrix: v,
            b_matrix: b,
            per_step: self.per_step[..m].to_vec(),
        })
    }

    /// `Σ_i node_values[i] · B_i(t)`.
    pub fn interpolate(&self, node_values: &[C64]) -> Result<Vec<C64>, EimError> {
        if node_values.len() != self.len() {
            return Err(EimError::LengthMismatch {
                expected: self.len(),
                found: node_values.len(),
            });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.grid.len()];
        for (i, &c) in node_values.iter().enumerate() {
            for (o, b) in out.iter_mut().zip(self.b_matrix.row(i)) {
                *o += c * b;
            }
        }
        Ok(out)
    }

    /// Interpolates a sampled function from its values at the nodes.
    pub fn interpolate_function(&self, h: &[C64]) -> Result<Vec<C64>, EimError> {
        if h.len() != self.grid.len() {
            return Err(EimError::LengthMismatch {
                expected: self.grid.len(),
                found: h.len(),
            });
        }
        let values: Vec<C64> = self.node_indices.iter().map(|&t| h[t]).collect();
        self.interpolate(&values)
    }

    pub fn to_record(&self, embed_matrices: bool) -> InterpolantRecord {
        InterpolantRecord::from_interpolant(self, embed_matrices)
    }
}
