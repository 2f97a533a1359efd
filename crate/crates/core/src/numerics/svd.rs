use super::{ComplexMatrix, NumericsError};

/// Ratio below which the smallest singular value counts as zero.
pub const SINGULAR_RATIO: f64 = 1e-300;

/// Iteration budget for the singular value solver.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SvdConfig {
    /// `None` uses `10 · max(rows, cols) · 100`.
    pub max_iterations: Option<usize>,
}

impl SvdConfig {
    fn cap_for(&self, m: &ComplexMatrix) -> usize {
        self.max_iterations
            .unwrap_or(10 * m.rows().max(m.cols()) * 100)
    }
}

/// Singular values in nonincreasing order.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>, NumericsError> {
    singular_values_with(m, &SvdConfig::default())
}

pub fn singular_values_with(
    m: &ComplexMatrix,
    config: &SvdConfig,
) -> Result<Vec<f64>, NumericsError> {
    let cap = config.cap_for(m);
    let svd = m
        .to_nalgebra()
        .try_svd(false, false, f64::EPSILON, cap)
        .ok_or(NumericsError::ConvergenceFailure { iterations: cap })?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Largest singular value.
pub fn two_norm(m: &ComplexMatrix) -> Result<f64, NumericsError> {
    Ok(singular_values(m)?[0])
}

/// Condition number from already computed singular values.
pub fn condition_from_singular(s: &[f64]) -> f64 {
    let (max, min) = extremes(s);
    if max == 0.0 || min <= max * SINGULAR_RATIO {
        f64::INFINITY
    } else {
        max / min
    }
}

/// `1 / σ_min` from already computed singular values.
pub fn inverse_norm_from_singular(s: &[f64]) -> f64 {
    let (max, min) = extremes(s);
    if max == 0.0 || min <= max * SINGULAR_RATIO {
        f64::INFINITY
    } else {
        1.0 / min
    }
}

/// `σ_max / σ_min` in the 2-norm; singular matrices map to infinity.
pub fn condition_number_2(m: &ComplexMatrix) -> Result<f64, NumericsError> {
    require_square(m)?;
    Ok(condition_from_singular(&singular_values(m)?))
}

/// `‖m⁻¹‖₂ = 1 / σ_min`; singular matrices map to infinity.
pub fn inverse_two_norm(m: &ComplexMatrix) -> Result<f64, NumericsError> {
    require_square(m)?;
    Ok(inverse_norm_from_singular(&singular_values(m)?))
}

fn extremes(s: &[f64]) -> (f64, f64) {
    let max = s.iter().copied().fold(0.0, f64::max);
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    (max, min)
}

fn require_square(m: &ComplexMatrix) -> Result<(), NumericsError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(NumericsError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}
