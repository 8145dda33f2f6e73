//! Spin models, splittings and local spectra.

pub mod builtin;
pub mod io;
mod model;
mod split;

pub use builtin::{builtin, chain3, ising2, triangle, BUILTINS};
pub use io::{load_model, model_from_json, model_to_json};
pub use model::{
    accumulate_embedded, compose_index, decompose_index, embed_site, hermitian_operator_basis,
    strides, Factor, OperatorTerm, SiteOp, SpinModel, DEFAULT_DIM_CAP,
};
pub use split::{
    split, InteractionExtremes, LocalSpectrum, ProductLevel, SplitPolicy, Splitting, TermRole,
    STRUCTURAL_TOL,
};
