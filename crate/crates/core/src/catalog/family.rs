use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CatalogError, TimeGrid, TrainingSet};
use crate::numerics::{ComplexMatrix, C64};

/// Built-in synthetic waveform families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `(1 + λt²)⁻¹ · exp(i(λt + 0.1λt²))`.
    DampedChirp,
    /// `exp(−(t−λ₁)²/(2λ₂²)) · exp(20i·t·λ₁)`.
    GaussianPacket,
    /// `Σ_{m=0}^{9} λᵐ exp(imπt) / m!`, spanning exactly ten dimensions.
    PolyFourier,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::DampedChirp, Family::GaussianPacket, Family::PolyFourier];

    pub fn name(self) -> &'static str {
        match self {
            Family::DampedChirp => "damped_chirp",
            Family::GaussianPacket => "gaussian_packet",
            Family::PolyFourier => "poly_fourier",
        }
    }

    /// Parameter dimension `d`.
    pub fn dim(self) -> usize {
        match self {
            Family::GaussianPacket => 2,
            Family::DampedChirp | Family::PolyFourier => 1,
        }
    }

    pub fn default_range(self) -> Vec<(f64, f64)> {
        match self {
            Family::DampedChirp => vec![(1.0, 5.0)],
            Family::GaussianPacket => vec![(0.2, 0.8), (0.1, 0.2)],
            // wide enough that the tenth monomial direction stays well above 1e-12
            Family::PolyFourier => vec![(-8.0, 8.0)],
        }
    }

    /// Default `[t_start, t_end]`.
    pub fn default_window(self) -> (f64, f64) {
        match self {
            // long enough to need a dozen-plus basis vectors at tol 1e-12
            Family::DampedChirp => (0.0, 6.0),
            Family::GaussianPacket | Family::PolyFourier => (0.0, 1.0),
        }
    }

    pub fn eval(self, params: &[f64], t: f64) -> C64 {
        match self {
            Family::DampedChirp => {
                let lam = params[0];
                let amp = 1.0 / (1.0 + lam * t * t);
                C64::from_polar(amp, lam * t + 0.1 * lam * t * t)
            }
            Family::GaussianPacket => {
                let (center, width) = (params[0], params[1]);
                let env = (-(t - center).powi(2) / (2.0 * width * width)).exp();
                C64::from_polar(env, 20.0 * t * center)
            }
            Family::PolyFourier => {
                let lam = params[0];
                let mut coef = 1.0;
                let mut sum = C64::new(0.0, 0.0);
                for m in 0..10 {
                    if m > 0 {
                        coef *= lam / m as f64;
                    }
                    sum += C64::from_polar(coef, m as f64 * std::f64::consts::PI * t);
                }
                sum
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| CatalogError::UnknownFamily(s.to_string()))
    }
}

/// How parameter values are laid out over `param_range`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sampling {
    /// Tensor grid with `m` points per dimension, `m` the smallest integer
    /// with `mᵈ ≥ K`; the set therefore holds `mᵈ` waveforms.
    Equispaced,
    /// `K` points drawn uniformly from the parameter box.
    Random { seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub param_range: Vec<(f64, f64)>,
    pub n_params: usize,
    pub grid: TimeGrid,
    pub sampling: Sampling,
}

impl FamilySpec {
    /// Spec with the family's default range and window.
    pub fn with_defaults(family: Family, n_params: usize, n_samples: usize) -> Result<Self, CatalogError> {
        let (a, b) = family.default_window();
        Ok(Self {
            family,
            param_range: family.default_range(),
            n_params,
            grid: TimeGrid::new(a, b, n_samples)?,
            sampling: Sampling::Equispaced,
        })
    }

    fn validate(&self) -> Result<(), CatalogError> {
        if self.n_params == 0 {
            return Err(CatalogError::InvalidRange("need at least one parameter sample".into()));
        }
        if self.param_range.len() != self.family.dim() {
            return Err(CatalogError::InvalidRange(format!(
                "{} takes {} parameter range(s), got {}",
                self.family,
                self.family.dim(),
                self.param_range.len()
            )));
        }
        for (i, &(lo, hi)) in self.param_range.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
                return Err(CatalogError::InvalidRange(format!(
                    "dimension {i}: need finite lo < hi, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    fn parameter_points(&self) -> Vec<Vec<f64>> {
        match self.sampling {
            Sampling::Equispaced => {
                let d = self.param_range.len();
                let mut m = 1usize;
                while m.pow(d as u32) < self.n_params {
                    m += 1;
                }
                let axes: Vec<Vec<f64>> = self
                    .param_range
                    .iter()
                    .map(|&(lo, hi)| linspace(lo, hi, m))
                    .collect();
                let total = m.pow(d as u32);
                // last dimension varies fastest
                (0..total)
                    .map(|mut idx| {
                        let mut p = vec![0.0; d];
                        for k in (0..d).rev() {
                            p[k] = axes[k][idx % m];
                            idx /= m;
                        }
                        p
                    })
                    .collect()
            }
            Sampling::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..self.n_params)
                    .map(|_| {
                        self.param_range
                            .iter()
                            .map(|&(lo, hi)| rng.random_range(lo..hi))
                            .collect()
                    })
                    .collect()
            }
        }
    }
}

fn linspace(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (m - 1) as f64;
    (0..m)
        .map(|i| if i + 1 == m { hi } else { lo + i as f64 * step })
        .collect()
}

/// Samples a built-in family into a training set. Output is deterministic
/// for a given spec.
pub fn generate_family(spec: &FamilySpec) -> Result<TrainingSet, CatalogError> {
    spec.validate()?;
    let params = spec.parameter_points();
    let grid = spec.grid;
    let times: Vec<f64> = grid.points().collect();
    let rows: Vec<Vec<C64>> = params
        .par_iter()
        .map(|p| times.iter().map(|&t| spec.family.eval(p, t)).collect())
        .collect();
    let samples = ComplexMatrix::from_rows(&rows).map_err(|e| CatalogError::InvalidRange(e.to_string()))?;
    TrainingSet::new(grid, params, samples)
}
