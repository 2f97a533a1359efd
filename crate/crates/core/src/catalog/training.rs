use std::cmp::Ordering;

use super::{CatalogError, TimeGrid};
use crate::numerics::{ComplexMatrix, C64};

/// Samples `h(λ_k, t_i)` of a parametrized family: one row per parameter
/// vector, one column per grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingSet {
    grid: TimeGrid,
    params: Vec<Vec<f64>>,
    samples: ComplexMatrix,
}

impl TrainingSet {
    pub fn new(
        grid: TimeGrid,
        params: Vec<Vec<f64>>,
        samples: ComplexMatrix,
    ) -> Result<Self, CatalogError> {
        if params.is_empty() {
            return Err(CatalogError::EmptyTraining);
        }
        if samples.rows() != params.len() || samples.cols() != grid.len() {
            return Err(CatalogError::GridMismatch(format!(
                "samples are {}x{}, expected {}x{}",
                samples.rows(),
                samples.cols(),
                params.len(),
                grid.len()
            )));
        }
        let d = params[0].len();
        if d == 0 {
            return Err(CatalogError::InvalidRange("parameter vectors must be non-empty".into()));
        }
        if let Some(k) = params.iter().position(|p| p.len() != d) {
            return Err(CatalogError::InvalidRange(format!(
                "parameter {k} has length {}, expected {d}",
                params[k].len()
            )));
        }
        if let Some(k) = params.iter().position(|p| p.iter().any(|x| !x.is_finite())) {
            return Err(CatalogError::InvalidRange(format!("parameter {k} is not finite")));
        }
        check_distinct(&params)?;
        Ok(Self {
            grid,
            params,
            samples,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn params(&self) -> &[Vec<f64>] {
        &self.params
    }

    /// Parameter dimension `d`.
    pub fn param_dim(&self) -> usize {
        self.params[0].len()
    }

    pub fn samples(&self) -> &ComplexMatrix {
        &self.samples
    }

    pub fn row(&self, k: usize) -> &[C64] {
        self.samples.row(k)
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[C64]> + '_ {
        self.samples.row_iter()
    }

    /// Number of waveforms `K`.
    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }
}

fn check_distinct(params: &[Vec<f64>]) -> Result<(), CatalogError> {
    let mut order: Vec<usize> = (0..params.len()).collect();
    let cmp = |a: &Vec<f64>, b: &Vec<f64>| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    };
    order.sort_by(|&i, &j| cmp(&params[i], &params[j]));
    for w in order.windows(2) {
        if params[w[0]] == params[w[1]] {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(CatalogError::DuplicateParameter { first: a, second: b });
        }
    }
    Ok(())
}
