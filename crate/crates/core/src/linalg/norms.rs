use std::fmt;

use serde::{Deserialize, Serialize};

use super::eig::hermitian_eig;
use super::matrix::ComplexMatrix;
use super::svd::svd;
use crate::error::{Error, Result};

/// Hermiticity tolerance (relative) for inputs to the PSD-order test.
pub const STRUCTURAL_TOL: f64 = 1e-9;

/// Normalized unitarily invariant norms: each gives 1 on a dyad |v⟩⟨w| of
/// unit vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormKind {
    Operator,
    HilbertSchmidt,
    Trace,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::Operator, NormKind::HilbertSchmidt, NormKind::Trace];

    /// Evaluates the norm from singular values.
    pub fn from_singular_values(self, sigma: &[f64]) -> f64 {
        match self {
            NormKind::Operator => sigma.iter().copied().fold(0.0, f64::max),
            NormKind::HilbertSchmidt => sigma.iter().map(|s| s * s).sum::<f64>().sqrt(),
            NormKind::Trace => sigma.iter().sum(),
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NormKind::Operator => "operator",
            NormKind::HilbertSchmidt => "hilbert_schmidt",
            NormKind::Trace => "trace",
        };
        f.write_str(s)
    }
}

pub fn ui_norm(s: &ComplexMatrix, kind: NormKind) -> Result<f64> {
    Ok(kind.from_singular_values(&svd(s)?.singular_values))
}

/// |S| = √(S S†), assembled as U·Σ·U† from the SVD of S.
pub fn operator_abs(s: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !s.is_square() {
        return Err(Error::NotSquare {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    let d = svd(s)?;
    let n = s.rows();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| d.u[(i, k)] * d.singular_values[k] * d.u[(j, k)].conj())
            .sum()
    }))
}

/// Outcome of a PSD-order test S ≤ T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsdCheck {
    pub holds: bool,
    /// Smallest eigenvalue of T − S.
    pub margin: f64,
}

/// Tests S ≤ T in the positive-semidefinite order: the smallest eigenvalue
/// of T − S must be at least −tol·max(1, ‖T − S‖).
pub fn psd_leq(s: &ComplexMatrix, t: &ComplexMatrix, tol: f64) -> Result<PsdCheck> {
    if s.rows() != t.rows() || s.cols() != t.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            s.rows(),
            s.cols(),
            t.rows(),
            t.cols()
        )));
    }
    for m in [s, t] {
        let allowed = STRUCTURAL_TOL * m.frobenius_norm().max(1.0);
        let asymmetry = m.hermitian_defect();
        if asymmetry > allowed {
            return Err(Error::NotHermitian { asymmetry, allowed });
        }
    }
    let diff = (t - s).hermitian_part();
    let e = hermitian_eig(&diff, STRUCTURAL_TOL)?;
    let margin = e.min();
    Ok(PsdCheck {
        holds: margin >= -tol * e.scale(),
        margin,
    })
}

/// Sorted singular-value dominance σ_k(S) ≤ σ_k(T) + tol for every k.
///
/// Two PSD matrices satisfy |S| ≤ U|T|U† for some unitary U exactly when
/// their eigenvalues dominate in sorted order, so this is the certificate
/// used for the existential operator inequality.
pub fn singular_dominance(s: &ComplexMatrix, t: &ComplexMatrix, tol: f64) -> Result<bool> {
    if s.rows() != t.rows() || s.cols() != t.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            s.rows(),
            s.cols(),
            t.rows(),
            t.cols()
        )));
    }
    let ss = svd(s)?.singular_values;
    let ts = svd(t)?.singular_values;
    Ok(ss.iter().zip(&ts).all(|(a, b)| *a <= b + tol))
}

/// All three normalized norms of S.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormTriple {
    pub operator: f64,
    pub hilbert_schmidt: f64,
    pub trace: f64,
}

impl NormTriple {
    pub fn of(s: &ComplexMatrix) -> Result<Self> {
        let sigma = svd(s)?.singular_values;
        Ok(Self {
            operator: NormKind::Operator.from_singular_values(&sigma),
            hilbert_schmidt: NormKind::HilbertSchmidt.from_singular_values(&sigma),
            trace: NormKind::Trace.from_singular_values(&sigma),
        })
    }

    pub fn get(&self, kind: NormKind) -> f64 {
        match kind {
            NormKind::Operator => self.operator,
            NormKind::HilbertSchmidt => self.hilbert_schmidt,
            NormKind::Trace => self.trace,
        }
    }
}

/// ‖S‖ ≤ ‖S‖_HS ≤ ‖S‖_tr, with slack 1e-12·max(1, ‖S‖_tr).
pub fn appendix_norm_check(s: &ComplexMatrix) -> Result<bool> {
    let n = NormTriple::of(s)?;
    let slack = 1e-12 * n.trace.max(1.0);
    Ok(n.operator <= n.hilbert_schmidt + slack && n.hilbert_schmidt <= n.trace + slack)
}
