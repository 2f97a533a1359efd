//! Comparison runs across selection criteria: condition numbers, Lebesgue
//! constants, in-sample interpolation and projection errors per order `n`,
//! plus numerical checks of the norm identities
//! `κ(V_n) = ‖V_n‖·Λ_n` and `‖I_n‖ = ‖V_n⁻¹‖`.
//!
//! All matrix norms are taken on the Euclidean-orthonormal stored basis.

mod output;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{euclidean_inner, norm_sqr, TrainingSet};
use crate::eim::{build_interpolant_with, EimError, EimOptions, EmpiricalInterpolant, SelectionCriterion};
use crate::numerics::{inverse_two_norm, two_norm, ComplexMatrix, NumericsError, C64};
use crate::rbm::{RbmError, ReducedBasis};

pub use output::{errors_csv, kappa_csv, lambda_csv, nodes_csv, ratios_csv};

/// Squared errors at or below this are treated as zero in ratio curves.
pub const ERROR_FLOOR_SQ: f64 = 1e-28;

/// Largest grid on which the explicit interpolation operator is formed.
pub const OPERATOR_CHECK_MAX_LEN: usize = 5000;

pub const BASIS_CONVENTION: &str =
    "kappa_n and lambda_n are 2-norm quantities of the V-matrix built from the Euclidean-orthonormal stored basis";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error("no selection criteria requested")]
    NoCriteria,
    #[error("grid mismatch between basis and training set")]
    GridMismatch,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Eim(#[from] EimError),
    #[error(transparent)]
    Rbm(#[from] RbmError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub t_start: f64,
    pub t_end: f64,
    #[serde(rename = "L")]
    pub len: usize,
    pub dt: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderDiagnostics {
    pub n: usize,
    pub kappa_n: f64,
    pub lambda_n: f64,
    /// `σ̃_n² = max_k ‖h_k − I_n h_k‖_d²`.
    pub max_interp_err_sq: f64,
    /// `σ_n² = max_k ‖h_k − P_n h_k‖_d²`.
    pub max_proj_err_sq: f64,
    pub nodes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub criterion: SelectionCriterion,
    pub dataset_id: String,
    pub grid: GridSummary,
    pub convention: String,
    pub per_n: Vec<OrderDiagnostics>,
}

impl DiagnosticsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Debug, Default)]
pub struct ComparisonOptions {
    pub dataset_id: String,
    pub eim: EimOptions,
    /// Largest order to evaluate; defaults to the basis size.
    pub n_max: Option<usize>,
}

/// In-sample comparison of the requested criteria on one basis.
pub fn run_comparison(
    rb: &ReducedBasis,
    ts: &TrainingSet,
    criteria: &[SelectionCriterion],
    options: &ComparisonOptions,
) -> Result<BTreeMap<SelectionCriterion, DiagnosticsReport>, DiagnosticsError> {
    if criteria.is_empty() {
        return Err(DiagnosticsError::NoCriteria);
    }
    if rb.grid() != ts.grid() {
        return Err(DiagnosticsError::GridMismatch);
    }
    let order = options.n_max.unwrap_or(rb.len()).min(rb.len());
    let proj = max_projection_errors(rb, ts, order);
    let grid = rb.grid();
    let summary = GridSummary {
        t_start: grid.t_start(),
        t_end: grid.t_end(),
        len: grid.len(),
        dt: grid.dt(),
    };

    let mut out = BTreeMap::new();
    for &criterion in criteria {
        let full = build_interpolant_with(rb, criterion, order, &options.eim)?;
        let mut per_n = Vec::with_capacity(order);
        for n in 1..=order {
            let itp = full.prefix(n)?;
            per_n.push(OrderDiagnostics {
                n,
                kappa_n: itp.condition_number(),
                lambda_n: itp.lebesgue_constant(),
                max_interp_err_sq: max_interpolation_error(&itp, ts)?,
                max_proj_err_sq: proj[n - 1],
                nodes: itp.node_indices().to_vec(),
            });
        }
        out.insert(
            criterion,
            DiagnosticsReport {
                criterion,
                dataset_id: options.dataset_id.clone(),
                grid: summary.clone(),
                convention: BASIS_CONVENTION.to_string(),
                per_n,
            },
        );
    }
    Ok(out)
}

/// `max_k ‖h_k − I h_k‖_d²` over the training rows.
pub fn max_interpolation_error(
    itp: &EmpiricalInterpolant,
    ts: &TrainingSet,
) -> Result<f64, DiagnosticsError> {
    let dt = ts.grid().dt();
    let errs = (0..ts.len())
        .into_par_iter()
        .map(|k| {
            let h = ts.row(k);
            let ih = itp.interpolate_function(h)?;
            Ok(h.iter().zip(&ih).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() * dt)
        })
        .collect::<Result<Vec<f64>, EimError>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// `σ_n²` for `n = 1..=order`, from explicit residuals updated one basis
/// vector at a time.
fn max_projection_errors(rb: &ReducedBasis, ts: &TrainingSet, order: usize) -> Vec<f64> {
    let dt = ts.grid().dt();
    let per_row: Vec<Vec<f64>> = (0..ts.len())
        .into_par_iter()
        .map(|k| {
            let mut r = ts.row(k).to_vec();
            (0..order)
                .map(|i| {
                    let e = rb.vector(i);
                    let c = euclidean_inner(e, &r);
                    for (ri, ei) in r.iter_mut().zip(e) {
                        *ri -= c * ei;
                    }
                    norm_sqr(&r) * dt
                })
                .collect()
        })
        .collect();
    (0..order)
        .map(|n| per_row.iter().map(|row| row[n]).fold(0.0, f64::max))
        .collect()
}

/// `σ̃_{n,a} / σ̃_{n,b}` for each `n`. Both squared errors at or below
/// [`ERROR_FLOOR_SQ`] give 1; a zero denominator otherwise gives infinity.
pub fn error_ratio_curve(
    a: &DiagnosticsReport,
    b: &DiagnosticsReport,
) -> Result<Vec<f64>, DiagnosticsError> {
    if a.per_n.len() != b.per_n.len() {
        return Err(DiagnosticsError::LengthMismatch(a.per_n.len(), b.per_n.len()));
    }
    Ok(a.per_n
        .iter()
        .zip(&b.per_n)
        .map(|(x, y)| ratio(x.max_interp_err_sq, y.max_interp_err_sq))
        .collect())
}

fn ratio(num_sq: f64, den_sq: f64) -> f64 {
    if num_sq <= ERROR_FLOOR_SQ && den_sq <= ERROR_FLOOR_SQ {
        1.0
    } else if den_sq == 0.0 {
        f64::INFINITY
    } else {
        (num_sq / den_sq).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorNormCheck {
    /// Largest singular value of the explicit interpolation operator.
    pub operator_norm: f64,
    /// `‖V_n⁻¹‖`.
    pub inverse_norm: f64,
    pub relative_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityChecks {
    /// `|κ_m − ‖V_m‖·Λ_m| / κ_m` for every prefix `m = 1..=n`.
    pub kappa_residuals: Vec<f64>,
    /// `None` when the grid exceeds [`OPERATOR_CHECK_MAX_LEN`].
    pub operator: Option<OperatorNormCheck>,
    pub note: Option<String>,
}

impl IdentityChecks {
    pub fn max_kappa_residual(&self) -> f64 {
        self.kappa_residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Recomputes the norm identities of an interpolant from scratch.
pub fn identity_checks(itp: &EmpiricalInterpolant) -> Result<IdentityChecks, DiagnosticsError> {
    let v = itp.v_matrix();
    let mut kappa_residuals = Vec::with_capacity(itp.len());
    for (m, step) in (1..=itp.len()).zip(itp.per_step()) {
        let vm = v.leading_block(m, m)?;
        let product = two_norm(&vm)? * inverse_two_norm(&vm)?;
        kappa_residuals.push((step.kappa - product).abs() / step.kappa);
    }

    let len = itp.grid().len();
    let (operator, note) = if len <= OPERATOR_CHECK_MAX_LEN {
        let op = interpolation_operator(itp);
        let operator_norm = two_norm(&op)?;
        let inverse_norm = inverse_two_norm(v)?;
        (
            Some(OperatorNormCheck {
                operator_norm,
                inverse_norm,
                relative_residual: (operator_norm - inverse_norm).abs() / inverse_norm,
            }),
            None,
        )
    } else {
        (
            None,
            Some(format!(
                "operator-norm check skipped: L = {len} exceeds {OPERATOR_CHECK_MAX_LEN}"
            )),
        )
    };
    Ok(IdentityChecks {
        kappa_residuals,
        operator,
        note,
    })
}

/// Nonzero columns of the `L×L` operator `h ↦ Σ_i h(T_i) B_i`: the `L×n`
/// matrix with entry `(t, i) = B_i(t)`.
pub fn interpolation_operator(itp: &EmpiricalInterpolant) -> ComplexMatrix {
    let b = itp.b_matrix();
    ComplexMatrix::from_fn(b.cols(), b.rows(), |t, i| b[(i, t)]).expect("finite entries")
}

/// `(‖h − I_n h‖_d, ‖h − P_n h‖_d)` for one sampled function.
pub fn interpolation_and_projection_error(
    itp: &EmpiricalInterpolant,
    rb: &ReducedBasis,
    h: &[C64],
) -> Result<(f64, f64), DiagnosticsError> {
    let n = itp.len();
    let interp = itp.interpolate_function(h)?;
    let proj = crate::rbm::project(rb, h, n)?;
    let ie: f64 = h.iter().zip(&interp).map(|(a, b)| (a - b).norm_sqr()).sum();
    let pe: f64 = h.iter().zip(&proj).map(|(a, b)| (a - b).norm_sqr()).sum();
    let dt = rb.grid().dt();
    Ok(((ie * dt).sqrt(), (pe * dt).sqrt()))
}
