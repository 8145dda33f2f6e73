use super::matrix::{fix_phase, inner, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius mass, relative to ‖M‖_F, at which Jacobi stops.
pub const CONVERGENCE_RATIO: f64 = 1e-14;

/// Relative eigenvalue gap below which eigenvectors are treated as one
/// degenerate cluster.
pub const CLUSTER_TOL: f64 = 1e-9;

/// Eigenvalues in ascending order with orthonormal eigenvectors stored as
/// matrix columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// Largest |λ|, which for a Hermitian matrix is its operator norm.
    pub fn spectral_radius(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// V·diag(λ)·V†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj())
                .sum()
        })
    }

    /// Indices whose eigenvalue lies within `tol` of eigenvalue `k`.
    pub fn cluster_of(&self, k: usize, tol: f64) -> Vec<usize> {
        let target = self.eigenvalues[k];
        (0..self.dim())
            .filter(|&i| (self.eigenvalues[i] - target).abs() <= tol)
            .collect()
    }

    /// max(1, spectral radius), the scale used for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.spectral_radius().max(1.0)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.
///
/// The input must satisfy ‖M − M†‖_F ≤ tol·max(1, ‖M‖_F); its Hermitian part
/// is diagonalized. Pivots are visited in row-major order (p < q), so the
/// output is a deterministic function of the input. Eigenvalues are sorted
/// ascending (stable on ties), vectors inside a degenerate cluster are
/// re-orthonormalized in order, and every vector is phase-fixed so its
/// largest entry is real positive.
pub fn hermitian_eig(m: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let allowed = tol * m.frobenius_norm().max(1.0);
    let asymmetry = m.hermitian_defect();
    if asymmetry > allowed {
        return Err(Error::NotHermitian { asymmetry, allowed });
    }

    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = CONVERGENCE_RATIO * a.frobenius_norm();

    let mut sweep = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                residual: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweep += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut columns: Vec<Vec<C64>> = order.iter().map(|&i| v.column(i)).collect();

    let scale = eigenvalues
        .iter()
        .fold(1.0_f64, |acc, x| acc.max(x.abs()));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] < CLUSTER_TOL * scale {
            end += 1;
        }
        if end - start > 1 {
            orthonormalize(&mut columns[start..end]);
        }
        start = end;
    }
    for c in columns.iter_mut() {
        fix_phase(c);
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_columns(&columns),
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One two-sided Jacobi rotation annihilating a[p,q].
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let zeta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + zeta.hypot(1.0))
    } else {
        -1.0 / (-zeta + zeta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    let phase = apq / mag;
    let phase_c = phase.conj();
    let n = a.rows();

    // A ← A·J, V ← V·J with J[:,p] = c e_p − s e^{-iφ} e_q, J[:,q] = s e_p + c e^{-iφ} e_q.
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * c - akq * phase_c * s;
        a[(k, q)] = akp * s + akq * phase_c * c;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c - vkq * phase_c * s;
        v[(k, q)] = vkp * s + vkq * phase_c * c;
    }
    // A ← J†·A
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = apk * c - aqk * phase * s;
        a[(q, k)] = apk * s + aqk * phase * c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

/// Modified Gram-Schmidt in place, in slice order.
pub fn orthonormalize(vectors: &mut [Vec<C64>]) {
    for i in 0..vectors.len() {
        let (done, rest) = vectors.split_at_mut(i);
        let vi = &mut rest[0];
        for _ in 0..2 {
            for u in done.iter() {
                let proj = inner(u, vi);
                for (x, y) in vi.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
        }
        let norm = vi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for x in vi.iter_mut() {
                *x /= norm;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{sigma_x, sigma_z, ComplexMatrix};
    use crate::random::{random_hermitian, seeded_rng};

    fn residual(m: &ComplexMatrix, e: &EigenDecomposition) -> f64 {
        (&e.reconstruct() - m).frobenius_norm()
    }

    #[test]
    fn sigma_z_spectrum() {
        let e = hermitian_eig(&sigma_z(), 1e-9).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 1.0]);
        assert!((e.vector(0)[1].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sigma_x_eigenvectors_follow_phase_convention() {
        let e = hermitian_eig(&sigma_x(), 1e-9).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
        // |−⟩ = (|0⟩ − |1⟩)/√2, first entry real positive
        let minus = e.vector(0);
        assert!((minus[0] - C64::new(s, 0.0)).norm() < 1e-14);
        assert!((minus[1] + C64::new(s, 0.0)).norm() < 1e-14);
        let plus = e.vector(1);
        assert!((plus[0] - C64::new(s, 0.0)).norm() < 1e-14);
        assert!((plus[1] - C64::new(s, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn random_8x8_reconstructs() {
        let mut rng = seeded_rng(8);
        let m = random_hermitian(&mut rng, 8, 1.0);
        let e = hermitian_eig(&m, 1e-9).unwrap();
        assert!(residual(&m, &e) <= 1e-10 * m.frobenius_norm().max(1.0));
        for w in e.eigenvalues.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(hermitian_eig(&m, 1e-9), Err(Error::NotHermitian { .. })));
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&r, 1e-9), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn degenerate_cluster_is_orthonormal() {
        let m = ComplexMatrix::diag_real(&[2.0, -1.0, 2.0, -1.0, 2.0]);
        let mut rng = seeded_rng(3);
        let u = crate::random::random_unitary(&mut rng, 5);
        let rotated = u.matmul(&m).matmul(&u.adjoint());
        let e = hermitian_eig(&rotated, 1e-9).unwrap();
        let gram = e.eigenvectors.adjoint().matmul(&e.eigenvectors);
        assert!((&gram - &ComplexMatrix::identity(5)).max_abs() < 1e-12);
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((e.eigenvalues[4] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let e = hermitian_eig(&ComplexMatrix::zeros(3, 3), 1e-9).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn identical_input_gives_identical_output() {
        let mut rng = seeded_rng(11);
        let m = random_hermitian(&mut rng, 12, 2.0);
        let a = hermitian_eig(&m, 1e-9).unwrap();
        let b = hermitian_eig(&m, 1e-9).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }
}
