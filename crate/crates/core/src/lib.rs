//! Reduced-basis construction and empirical interpolation on uniform time
//! grids, with three nested node-selection rules and diagnostics comparing
//! them.
//!
//! Pipeline: [`catalog`] supplies training waveforms, [`rbm`] builds a
//! greedy orthonormal basis, [`eim`] selects interpolation nodes and builds
//! the interpolant, [`diagnostics`] measures conditioning and accuracy.

pub mod catalog;
pub mod diagnostics;
pub mod eim;
pub mod numerics;
pub mod rbm;
mod select;

pub use catalog::{Family, FamilySpec, Sampling, TimeGrid, TrainingSet};
pub use diagnostics::{DiagnosticsReport, IdentityChecks};
pub use eim::{EmpiricalInterpolant, FirstNode, SelectionCriterion};
pub use numerics::{ComplexMatrix, C64};
pub use rbm::ReducedBasis;
