use serde::{Deserialize, Serialize};

use super::CatalogError;
use crate::numerics::C64;

/// Uniform sampling grid `t_i = t_start + i·dt`, `i = 0..L`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_samples: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_samples: usize) -> Result<Self, CatalogError> {
        if n_samples < 2 {
            return Err(CatalogError::InvalidGrid(format!(
                "need at least 2 samples, got {n_samples}"
            )));
        }
        if !(t_start.is_finite() && t_end.is_finite()) || t_end <= t_start {
            return Err(CatalogError::InvalidGrid(format!(
                "need finite t_start < t_end, got [{t_start}, {t_end}]"
            )));
        }
        Ok(Self {
            t_start,
            t_end,
            n_samples,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Number of samples `L`.
    pub fn len(&self) -> usize {
        self.n_samples
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_samples - 1) as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        if i + 1 == self.n_samples {
            self.t_end
        } else {
            self.t_start + i as f64 * self.dt()
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_samples).map(|i| self.t(i))
    }

    fn check_len(&self, len: usize) -> Result<(), CatalogError> {
        if len == self.n_samples {
            Ok(())
        } else {
            Err(CatalogError::LengthMismatch {
                expected: self.n_samples,
                found: len,
            })
        }
    }
}

/// `⟨f, g⟩_d = Σ conj(f_i) g_i Δt`, conjugate-linear in `f`.
pub fn discrete_inner(f: &[C64], g: &[C64], grid: &TimeGrid) -> Result<C64, CatalogError> {
    grid.check_len(f.len())?;
    grid.check_len(g.len())?;
    Ok(euclidean_inner(f, g) * grid.dt())
}

/// `‖f‖_d`.
pub fn discrete_norm(f: &[C64], grid: &TimeGrid) -> Result<f64, CatalogError> {
    grid.check_len(f.len())?;
    Ok((norm_sqr(f) * grid.dt()).sqrt())
}

/// Unweighted `Σ conj(f_i) g_i`. Callers guarantee equal lengths.
#[inline]
pub(crate) fn euclidean_inner(f: &[C64], g: &[C64]) -> C64 {
    debug_assert_eq!(f.len(), g.len());
    f.iter().zip(g).map(|(a, b)| a.conj() * b).sum()
}

#[inline]
pub(crate) fn norm_sqr(f: &[C64]) -> f64 {
    f.iter().map(|z| z.norm_sqr()).sum()
}
