//! Seeded random ensembles used by the verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hamiltonian::{OperatorTerm, SiteOp, SpinModel};
use crate::linalg::{hermitian_eig, ComplexMatrix, C64};

pub type SuiteRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Gaussian Hermitian matrix (G + G†)/2, multiplied by `scale`.
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize, scale: f64) -> ComplexMatrix {
    random_complex_matrix(rng, n, n).hermitian_part().scale(scale)
}

/// Gaussian Hermitian matrix rescaled to operator norm `norm`.
pub fn random_hermitian_with_norm<R: Rng>(rng: &mut R, n: usize, norm: f64) -> ComplexMatrix {
    let h = random_hermitian(rng, n, 1.0);
    let r = hermitian_eig(&h, 1e-9)
        .expect("Gaussian Hermitian matrix diagonalizes")
        .spectral_radius();
    h.scale(norm / r)
}

/// Unitary from Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = random_complex_matrix(rng, n, n);
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| g.column(j)).collect();
    crate::linalg::orthonormalize_columns(&mut cols);
    ComplexMatrix::from_columns(&cols)
}

pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n).map(|_| gaussian_complex(rng)).collect();
    let norm = crate::linalg::vec_norm(&v);
    for z in v.iter_mut() {
        *z /= norm;
    }
    v
}

/// Two-site model with a random Hermitian term on each site plus 1–3
/// random product interactions of log-uniform overall strength in [0.1, 10].
pub fn random_two_site_model<R: Rng>(rng: &mut R, d: usize) -> SpinModel {
    let mut terms = Vec::new();
    for site in 0..2 {
        terms.push(OperatorTerm::new(
            1.0,
            vec![(site, SiteOp::Matrix(random_hermitian(rng, d, 1.0)))],
        ));
    }
    let strength = 10f64.powf(rng.random_range(-1.0..1.0));
    let count = rng.random_range(1..=3);
    for _ in 0..count {
        terms.push(OperatorTerm::new(
            strength,
            vec![
                (0, SiteOp::Matrix(random_hermitian(rng, d, 1.0))),
                (1, SiteOp::Matrix(random_hermitian(rng, d, 1.0))),
            ],
        ));
    }
    SpinModel::new(format!("random2x{d}"), vec![d, d], terms).expect("valid random model")
}

/// Bipartite model from a full Gaussian Hermitian matrix on C^d ⊗ C^d.
pub fn random_bipartite_dense_model<R: Rng>(rng: &mut R, d: usize) -> SpinModel {
    let h = random_hermitian(rng, d * d, 1.0);
    SpinModel::from_dense("random_dense", vec![d, d], &h).expect("valid dense model")
}

/// Weakly coupled qubit chain: each site has a local term with gap drawn
/// from [1, 3], and a random product interaction whose operator norm is at
/// most a tenth of the smallest local gap.
pub fn random_weakly_coupled_model<R: Rng>(rng: &mut R, sites: usize) -> SpinModel {
    let mut terms = Vec::new();
    let mut min_gap = f64::INFINITY;
    for site in 0..sites {
        let gap = rng.random_range(1.0..3.0);
        min_gap = min_gap.min(gap);
        // traceless Hermitian with eigenvalues ±gap/2, plus a random shift
        let h = random_hermitian_with_norm(rng, 2, 1.0);
        let tr = h.trace().re / 2.0;
        let traceless = &h - &ComplexMatrix::identity(2).scale(tr);
        let r = hermitian_eig(&traceless, 1e-9).unwrap().spectral_radius();
        let shift: f64 = rng.random_range(-1.0..1.0);
        let local = &traceless.scale(gap / (2.0 * r)) + &ComplexMatrix::identity(2).scale(shift);
        terms.push(OperatorTerm::new(1.0, vec![(site, SiteOp::Matrix(local))]));
    }
    let target = min_gap / 10.0 * rng.random_range(0.2..1.0);
    let mut raw = Vec::new();
    for a in 0..sites {
        for b in (a + 1)..sites {
            raw.push(OperatorTerm::new(
                1.0,
                vec![
                    (a, SiteOp::Matrix(random_hermitian(rng, 2, 1.0))),
                    (b, SiteOp::Matrix(random_hermitian(rng, 2, 1.0))),
                ],
            ));
        }
    }
    let probe = SpinModel::new("probe", vec![2; sites], raw.clone()).expect("valid probe");
    let norm = hermitian_eig(&probe.build_dense().expect("small"), 1e-9)
        .unwrap()
        .spectral_radius();
    for t in raw {
        terms.push(t.rescaled(target / norm));
    }
    SpinModel::new(format!("weak{sites}"), vec![2; sites], terms).expect("valid model")
}
