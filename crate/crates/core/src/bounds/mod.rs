//! Frustration energy and the entanglement bounds built on it.

mod excited;
mod ground;

pub use excited::{
    analyze_excited, delta_j_ent, enumerate_product_subspaces, enumerate_product_subspaces_capped,
    min_distance_outside, ExcitedAnalyzer, ExcitedBoundReport, ProductSubspace, ENUMERATION_CAP,
};
pub use ground::{
    analyze_ground, proof_step_check, report_from_spectra, FrustrationReport, ProofStepCheck, Spectra,
    TOL_ENT, UNDEFINED_REASON,
};
