//! Dense complex linear algebra: Hermitian eigendecomposition, SVD, operator
//! absolute value, PSD ordering and unitarily invariant norms.

mod eig;
mod matrix;
mod norms;
mod svd;

pub use eig::{
    hermitian_eig, orthonormalize as orthonormalize_columns, EigenDecomposition, CLUSTER_TOL,
    CONVERGENCE_RATIO, MAX_SWEEPS,
};
pub use matrix::{
    fix_phase, inner, kron_vec, sigma_x, sigma_y, sigma_z, vec_norm, ComplexMatrix, C64, ONE,
    ZERO,
};
pub use norms::{
    appendix_norm_check, operator_abs, psd_leq, singular_dominance, ui_norm, NormKind,
    NormTriple, PsdCheck, STRUCTURAL_TOL,
};
pub use svd::{svd, Svd};
