//! Geometric measure of entanglement E(ψ) = 1 − max |⟨ψ|ψ₁⊗…⊗ψ_n⟩|².

mod alternating;
mod oracle;
mod schmidt;
pub mod standard_states;
mod state;

use serde::Serialize;

pub use alternating::geometric_measure_alternating;
pub use oracle::{brute_force_geometric_measure, ORACLE_MAX_DIM, ORACLE_MAX_LEAVES};
pub use schmidt::{geometric_measure_bipartite, schmidt, Bipartition, SchmidtDecomposition};
pub use state::{ProductAnsatz, PureState};

use crate::error::Result;
use crate::linalg::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Method {
    SchmidtExact,
    Alternating { restarts: usize, iterations: usize },
    BruteForce,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeometricMeasureResult {
    pub value: f64,
    pub overlap_sq: f64,
    #[serde(skip)]
    pub maximizer: ProductAnsatz,
    pub method: Method,
    pub converged: bool,
}

/// Settings for the alternating optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementOptions {
    pub restarts: usize,
    /// Stop once a full sweep gains less than this in overlap².
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for EntanglementOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            tol: 1e-10,
            max_iters: 1000,
            seed: 0x5EED,
        }
    }
}

/// Alternating optimizer with every site as its own party.
pub fn geometric_measure_multipartite(psi: &PureState, opts: &EntanglementOptions) -> Result<GeometricMeasureResult> {
    geometric_measure_alternating(psi, &psi.singleton_parties(), opts)
}

/// Exact Schmidt route for two sites, alternating optimizer otherwise. A
/// single-site state is trivially a product state.
pub fn geometric_measure(psi: &PureState, opts: &EntanglementOptions) -> Result<GeometricMeasureResult> {
    match psi.n_sites() {
        1 => Ok(GeometricMeasureResult {
            value: 0.0,
            overlap_sq: 1.0,
            maximizer: ProductAnsatz::new(vec![vec![0]], vec![psi.amplitudes().to_vec()])?,
            method: Method::SchmidtExact,
            converged: true,
        }),
        2 => geometric_measure_bipartite(psi, &Bipartition::first_vs_rest(2)?),
        _ => geometric_measure_multipartite(psi, opts),
    }
}

/// Amplitudes of a product of per-site vectors, site 0 most significant.
pub fn product_state(dims: Vec<usize>, vectors: &[Vec<C64>]) -> Result<PureState> {
    let amps = vectors
        .iter()
        .fold(vec![C64::new(1.0, 0.0)], |acc, v| crate::linalg::kron_vec(&acc, v));
    PureState::normalized(dims, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_unit_vector, seeded_rng};

    #[test]
    fn zero_iff_product() {
        let mut rng = seeded_rng(90);
        let opts = EntanglementOptions::default();
        for dims in [vec![2, 3], vec![2, 2, 2]] {
            let vs: Vec<Vec<C64>> = dims.iter().map(|&d| random_unit_vector(&mut rng, d)).collect();
            let psi = product_state(dims.clone(), &vs).unwrap();
            assert!(geometric_measure(&psi, &opts).unwrap().value < 1e-9);
            // mixing in an orthogonal product term makes it entangled
            let mut ws = vs.clone();
            for w in ws.iter_mut() {
                let a = w[0];
                let b = w[1];
                w[0] = -b.conj();
                w[1] = a.conj();
                for z in w.iter_mut().skip(2) {
                    *z = C64::new(0.0, 0.0);
                }
            }
            let other = product_state(dims.clone(), &ws).unwrap();
            let sum: Vec<C64> = psi
                .amplitudes()
                .iter()
                .zip(other.amplitudes())
                .map(|(a, b)| a + b)
                .collect();
            let ent = PureState::normalized(dims, sum).unwrap();
            assert!(geometric_measure(&ent, &opts).unwrap().value > 1e-3);
        }
    }

    #[test]
    fn bipartite_bound_by_dimension() {
        let mut rng = seeded_rng(91);
        for d in 2..5 {
            for _ in 0..10 {
                let psi = PureState::new(vec![d, d], random_unit_vector(&mut rng, d * d)).unwrap();
                let g = geometric_measure(&psi, &EntanglementOptions::default()).unwrap();
                assert!(g.value >= 0.0 && g.value <= 1.0 - 1.0 / d as f64 + 1e-12);
            }
        }
    }
}
