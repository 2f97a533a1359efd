//! Shared fixtures for the criterion benches.

use emprint_core::catalog::generate_family;
use emprint_core::rbm::build_reduced_basis;
use emprint_core::{Family, FamilySpec, ReducedBasis, TrainingSet};

/// Default damped-chirp training set with `k` parameters on `l` samples.
pub fn chirp_training(k: usize, l: usize) -> TrainingSet {
    generate_family(&FamilySpec::with_defaults(Family::DampedChirp, k, l).expect("valid spec"))
        .expect("family generates")
}

/// Greedy basis at tolerance `1e-12` for [`chirp_training`].
pub fn chirp_basis(k: usize, l: usize) -> (TrainingSet, ReducedBasis) {
    let ts = chirp_training(k, l);
    let rb = build_reduced_basis(&ts, 1e-12, k).expect("basis builds");
    (ts, rb)
}
