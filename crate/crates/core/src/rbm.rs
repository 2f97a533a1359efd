//! Strong-greedy reduced bases and orthogonal projection.
//!
//! Basis rows are stored orthonormal in the plain Euclidean inner product.
//! Errors are measured in the weighted discrete norm `‖·‖_d`; since the
//! weight is the uniform `Δt`, the Euclidean projection onto the span is
//! the weighted one as well.

use std::io::{BufRead, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::catalog::io::{read_table, write_table, Header};
use crate::catalog::{euclidean_inner, norm_sqr, CatalogError, TimeGrid, TrainingSet};
use crate::numerics::{ComplexMatrix, C64};
use crate::select::argmax;

/// Default greedy tolerance on the absolute squared weighted error.
pub const DEFAULT_TOL: f64 = 1e-12;

/// A residual smaller than this, relative to the seed norm, is degenerate.
const DEGENERATE_RTOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RbmError {
    #[error("training set is empty")]
    EmptyTraining,
    #[error("invalid greedy settings: {0}")]
    InvalidSettings(String),
    #[error(
        "degenerate residual at step {step}: norm {norm:e} is below {threshold:e} before the tolerance was met"
    )]
    DegenerateResidual {
        step: usize,
        norm: f64,
        threshold: f64,
    },
    #[error("truncation {n} outside 1..={available}")]
    BadTruncation { n: usize, available: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedBasis {
    grid: TimeGrid,
    basis: ComplexMatrix,
    greedy_errors: Vec<f64>,
    greedy_params: Vec<usize>,
    tol: f64,
}

impl ReducedBasis {
    /// Assembles a basis from stored parts. Orthonormality is not checked
    /// here; see [`ReducedBasis::orthonormality_defect`]. `greedy_errors`
    /// and `greedy_params` may be empty for bases without a greedy history.
    pub fn from_parts(
        grid: TimeGrid,
        basis: ComplexMatrix,
        greedy_errors: Vec<f64>,
        greedy_params: Vec<usize>,
        tol: f64,
    ) -> Result<Self, RbmError> {
        if basis.cols() != grid.len() {
            return Err(RbmError::LengthMismatch {
                expected: grid.len(),
                found: basis.cols(),
            });
        }
        for list in [greedy_errors.len(), greedy_params.len()] {
            if list != 0 && list != basis.rows() {
                return Err(RbmError::LengthMismatch {
                    expected: basis.rows(),
                    found: list,
                });
            }
        }
        Ok(Self {
            grid,
            basis,
            greedy_errors,
            greedy_params,
            tol,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Number of basis vectors `n`.
    pub fn len(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn vector(&self, i: usize) -> &[C64] {
        self.basis.row(i)
    }

    /// `σ_m²` after `m = 1..=n` basis vectors.
    pub fn greedy_errors(&self) -> &[f64] {
        &self.greedy_errors
    }

    /// Training rows picked by the greedy sweep, in order.
    pub fn greedy_params(&self) -> &[usize] {
        &self.greedy_params
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Largest deviation of the Euclidean Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let g = euclidean_inner(self.vector(i), self.vector(j));
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Euclidean coefficients `⟨ê_i, h⟩` for `i < n`.
    pub fn coefficients(&self, h: &[C64], n: usize) -> Result<Vec<C64>, RbmError> {
        self.check(h, n)?;
        Ok((0..n).map(|i| euclidean_inner(self.vector(i), h)).collect())
    }

    fn check(&self, h: &[C64], n: usize) -> Result<(), RbmError> {
        if n == 0 || n > self.len() {
            return Err(RbmError::BadTruncation {
                n,
                available: self.len(),
            });
        }
        if h.len() != self.grid.len() {
            return Err(RbmError::LengthMismatch {
                expected: self.grid.len(),
                found: h.len(),
            });
        }
        Ok(())
    }
}

/// Builds a reduced basis by a strong greedy sweep over the training set.
///
/// Stops once the largest squared projection error is `≤ tol` or `n_max`
/// vectors have been added, whichever comes first.
pub fn build_reduced_basis(
    ts: &TrainingSet,
    tol: f64,
    n_max: usize,
) -> Result<ReducedBasis, RbmError> {
    if ts.is_empty() {
        return Err(RbmError::EmptyTraining);
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(RbmError::InvalidSettings(format!("tolerance must be >= 0, got {tol}")));
    }
    if n_max == 0 {
        return Err(RbmError::InvalidSettings("n_max must be at least 1".into()));
    }
    let grid = *ts.grid();
    let dt = grid.dt();
    let len = grid.len();

    let mut residuals: Vec<Vec<C64>> = ts.rows().map(<[C64]>::to_vec).collect();
    let mut errors: Vec<f64> = residuals.iter().map(|r| norm_sqr(r) * dt).collect();
    let (mut pick, seed_sq) = argmax(errors.iter().map(|&e| Some(e))).expect("non-empty");
    let threshold = DEGENERATE_RTOL * (seed_sq / dt).sqrt();

    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut greedy_errors = Vec::new();
    let mut greedy_params = Vec::new();

    loop {
        let step = basis.len() + 1;
        // orthogonalize the original row against the basis, then once more
        let mut v = ts.row(pick).to_vec();
        for _pass in 0..2 {
            for e in &basis {
                let c = euclidean_inner(e, &v);
                for (vi, ei) in v.iter_mut().zip(e) {
                    *vi -= c * ei;
                }
            }
        }
        let norm = norm_sqr(&v).sqrt();
        if norm.is_nan() || norm <= threshold {
            return Err(RbmError::DegenerateResidual {
                step,
                norm,
                threshold,
            });
        }
        v.iter_mut().for_each(|z| *z /= norm);

        residuals
            .par_iter_mut()
            .zip(errors.par_iter_mut())
            .for_each(|(r, err)| {
                let c = euclidean_inner(&v, r);
                for (ri, vi) in r.iter_mut().zip(&v) {
                    *ri -= c * vi;
                }
                *err = norm_sqr(r) * dt;
            });
        basis.push(v);
        greedy_params.push(pick);

        let (next, sigma_sq) = argmax(errors.iter().map(|&e| Some(e))).expect("non-empty");
        greedy_errors.push(sigma_sq);
        if sigma_sq <= tol || basis.len() >= n_max {
            break;
        }
        pick = next;
    }

    let basis = ComplexMatrix::from_rows(&basis).map_err(|_| RbmError::LengthMismatch {
        expected: len,
        found: 0,
    })?;
    ReducedBasis::from_parts(grid, basis, greedy_errors, greedy_params, tol)
}

/// `P_n h = Σ_{i<n} ⟨ê_i, h⟩ ê_i`.
pub fn project(rb: &ReducedBasis, h: &[C64], n: usize) -> Result<Vec<C64>, RbmError> {
    let coeffs = rb.coefficients(h, n)?;
    let mut out = vec![C64::new(0.0, 0.0); h.len()];
    for (i, c) in coeffs.iter().enumerate() {
        for (o, e) in out.iter_mut().zip(rb.vector(i)) {
            *o += c * e;
        }
    }
    Ok(out)
}

/// `‖h − P_n h‖_d²`, from the explicit residual.
pub fn projection_error_sq(rb: &ReducedBasis, h: &[C64], n: usize) -> Result<f64, RbmError> {
    let p = project(rb, h, n)?;
    let r: f64 = h.iter().zip(&p).map(|(a, b)| (a - b).norm_sqr()).sum();
    Ok(r * rb.grid.dt())
}

pub fn write_basis<W: Write>(rb: &ReducedBasis, out: &mut W) -> std::io::Result<()> {
    let mut extra = vec![
        ("kind".to_string(), "basis".to_string()),
        ("tol".to_string(), format!("{:e}", rb.tol)),
    ];
    if !rb.greedy_params.is_empty() {
        let picks: Vec<String> = rb.greedy_params.iter().map(usize::to_string).collect();
        extra.push(("greedy_rows".to_string(), picks.join(";")));
    }
    let header = Header {
        grid: rb.grid,
        param_dim: 0,
        extra,
    };
    write_table(out, &header, &[], rb.basis.row_iter())
}

/// Two-column `n,sigma_sq` table of the greedy error curve.
pub fn write_greedy_errors<W: Write>(rb: &ReducedBasis, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "n,sigma_sq")?;
    for (i, e) in rb.greedy_errors.iter().enumerate() {
        writeln!(out, "{},{e:e}", i + 1)?;
    }
    out.flush()
}

/// Reads a basis file, with an optional greedy-error table.
pub fn read_basis<R: BufRead, E: BufRead>(
    input: R,
    greedy_errors: Option<E>,
) -> Result<ReducedBasis, RbmError> {
    let table = read_table(input)?;
    let header = &table.header;
    if header.get("kind") != Some("basis") || header.param_dim != 0 {
        return Err(CatalogError::Parse {
            line: 1,
            message: "expected a basis file (kind=basis, d=0)".into(),
        }
        .into());
    }
    if table.rows.is_empty() {
        return Err(RbmError::EmptyTraining);
    }
    let tol = match header.get("tol") {
        Some(v) => v.parse().map_err(|_| CatalogError::Parse {
            line: 1,
            message: format!("invalid tol '{v}'"),
        })?,
        None => f64::NAN,
    };
    let greedy_params = match header.get("greedy_rows") {
        Some(v) => v
            .split(';')
            .map(|s| {
                s.parse::<usize>().map_err(|_| CatalogError::Parse {
                    line: 1,
                    message: format!("invalid greedy row '{s}'"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    let errors = match greedy_errors {
        Some(r) => read_greedy_errors(r)?,
        None => Vec::new(),
    };
    let basis = ComplexMatrix::from_rows(&table.rows)
        .map_err(|e| CatalogError::GridMismatch(e.to_string()))?;
    ReducedBasis::from_parts(header.grid, basis, errors, greedy_params, tol)
}

fn read_greedy_errors<R: BufRead>(input: R) -> Result<Vec<f64>, RbmError> {
    let mut out = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line.map_err(|e| CatalogError::Io(e.to_string()))?;
        if idx == 0 || line.trim().is_empty() {
            continue;
        }
        let value = line
            .split(',')
            .nth(1)
            .and_then(|v| v.trim().parse::<f64>().ok())
            .ok_or_else(|| CatalogError::Parse {
                line: idx + 1,
                message: format!("expected 'n,sigma_sq', got '{line}'"),
            })?;
        out.push(value);
    }
    Ok(out)
}
