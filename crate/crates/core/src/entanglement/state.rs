use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{compose_index, decompose_index};
use crate::linalg::{inner, kron_vec, vec_norm, C64};

/// Normalized state vector over ⊗ C^{d_i}; site 0 most significant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        check_len(&dims, &amplitudes)?;
        let norm = vec_norm(&amplitudes);
        if (norm * norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { dims, amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(dims: Vec<usize>, mut amplitudes: Vec<C64>) -> Result<Self> {
        check_len(&dims, &amplitudes)?;
        let norm = vec_norm(&amplitudes);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        for a in amplitudes.iter_mut() {
            *a /= norm;
        }
        Ok(Self { dims, amplitudes })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn n_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Amplitudes re-indexed party-major: the flat index is composed from
    /// per-party indices, each composed from its member sites in listed
    /// order. Returns (party dimensions, amplitudes).
    pub fn by_parties(&self, parties: &[Vec<usize>]) -> Result<(Vec<usize>, Vec<C64>)> {
        validate_parties(parties, self.n_sites())?;
        let pdims: Vec<usize> = parties
            .iter()
            .map(|m| m.iter().map(|&s| self.dims[s]).product())
            .collect();
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (i, &a) in self.amplitudes.iter().enumerate() {
            let config = decompose_index(i, &self.dims);
            let pidx: Vec<usize> = parties
                .iter()
                .map(|m| {
                    let c: Vec<usize> = m.iter().map(|&s| config[s]).collect();
                    let d: Vec<usize> = m.iter().map(|&s| self.dims[s]).collect();
                    compose_index(&c, &d)
                })
                .collect();
            out[compose_index(&pidx, &pdims)] = a;
        }
        Ok((pdims, out))
    }

    /// Every site its own party.
    pub fn singleton_parties(&self) -> Vec<Vec<usize>> {
        (0..self.n_sites()).map(|s| vec![s]).collect()
    }
}

fn check_len(dims: &[usize], amplitudes: &[C64]) -> Result<()> {
    let dim: usize = dims.iter().product();
    if dims.is_empty() || dim != amplitudes.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} amplitudes for site dimensions {dims:?}",
            amplitudes.len()
        )));
    }
    Ok(())
}

pub(crate) fn validate_parties(parties: &[Vec<usize>], n_sites: usize) -> Result<()> {
    let mut seen = vec![false; n_sites];
    for p in parties {
        if p.is_empty() {
            return Err(Error::InvalidBipartition("empty party".into()));
        }
        for &s in p {
            if s >= n_sites {
                return Err(Error::InvalidBipartition(format!("site {s} out of range")));
            }
            if seen[s] {
                return Err(Error::InvalidBipartition(format!("site {s} listed twice")));
            }
            seen[s] = true;
        }
    }
    if seen.iter().any(|&x| !x) {
        return Err(Error::InvalidBipartition("parties do not cover every site".into()));
    }
    Ok(())
}

/// Candidate product state ψ₁ ⊗ … ⊗ ψ_m over the given parties.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductAnsatz {
    pub parties: Vec<Vec<usize>>,
    pub vectors: Vec<Vec<C64>>,
}

impl ProductAnsatz {
    pub fn new(parties: Vec<Vec<usize>>, vectors: Vec<Vec<C64>>) -> Result<Self> {
        if parties.len() != vectors.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} vectors for {} parties",
                vectors.len(),
                parties.len()
            )));
        }
        for v in &vectors {
            if (vec_norm(v) - 1.0).abs() > 1e-12 {
                return Err(Error::NotNormalized(vec_norm(v)));
            }
        }
        Ok(Self { parties, vectors })
    }

    /// ⟨ansatz|ψ⟩.
    pub fn overlap(&self, psi: &PureState) -> Result<C64> {
        let (pdims, amps) = psi.by_parties(&self.parties)?;
        for (v, &d) in self.vectors.iter().zip(&pdims) {
            if v.len() != d {
                return Err(Error::DimensionMismatch(format!(
                    "party vector of length {} for dimension {d}",
                    v.len()
                )));
            }
        }
        Ok(inner(&self.party_major_vector(), &amps))
    }

    pub fn overlap_sq(&self, psi: &PureState) -> Result<f64> {
        Ok(self.overlap(psi)?.norm_sqr())
    }

    fn party_major_vector(&self) -> Vec<C64> {
        self.vectors
            .iter()
            .fold(vec![C64::new(1.0, 0.0)], |acc, v| kron_vec(&acc, v))
    }
}
