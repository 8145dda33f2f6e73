use serde::Serialize;

use super::model::{compose_index, decompose_index, OperatorTerm, SpinModel};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron_vec, ComplexMatrix, EigenDecomposition, C64, CLUSTER_TOL};

/// Eigensolver symmetry tolerance used throughout the analyses.
pub const STRUCTURAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TermRole {
    Local,
    Interaction,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SplitPolicy {
    /// Degree ≤ 1 terms are local, everything else interaction.
    ByLocalityDegree,
    /// One role per model term, in term order.
    Explicit(Vec<TermRole>),
}

impl SplitPolicy {
    /// Explicit policy with exactly the listed term indices local.
    pub fn local_indices(n_terms: usize, local: &[usize]) -> Result<Self> {
        let mut roles = vec![TermRole::Interaction; n_terms];
        for &i in local {
            if i >= n_terms {
                return Err(Error::InvalidAssignment(format!(
                    "term index {i} out of range for {n_terms} terms"
                )));
            }
            if roles[i] == TermRole::Local {
                return Err(Error::InvalidAssignment(format!("term {i} assigned twice")));
            }
            roles[i] = TermRole::Local;
        }
        Ok(SplitPolicy::Explicit(roles))
    }
}

/// A model together with a local/interaction role for each of its terms.
#[derive(Debug, Clone)]
pub struct Splitting {
    model: SpinModel,
    roles: Vec<TermRole>,
}

pub fn split(model: &SpinModel, policy: &SplitPolicy) -> Result<Splitting> {
    let roles = match policy {
        SplitPolicy::ByLocalityDegree => model
            .terms()
            .iter()
            .map(|t| {
                if t.degree() <= 1 {
                    TermRole::Local
                } else {
                    TermRole::Interaction
                }
            })
            .collect(),
        SplitPolicy::Explicit(roles) => {
            if roles.len() != model.terms().len() {
                return Err(Error::InvalidAssignment(format!(
                    "{} roles for {} terms",
                    roles.len(),
                    model.terms().len()
                )));
            }
            for (i, (role, term)) in roles.iter().zip(model.terms()).enumerate() {
                if *role == TermRole::Local && term.degree() > 1 {
                    return Err(Error::InvalidAssignment(format!(
                        "term {i} acts on {} sites and cannot be local",
                        term.degree()
                    )));
                }
            }
            roles.clone()
        }
    };
    Ok(Splitting {
        model: model.clone(),
        roles,
    })
}

impl Splitting {
    pub fn model(&self) -> &SpinModel {
        &self.model
    }

    pub fn roles(&self) -> &[TermRole] {
        &self.roles
    }

    pub fn local_terms(&self) -> impl Iterator<Item = &OperatorTerm> {
        self.with_role(TermRole::Local)
    }

    pub fn interaction_terms(&self) -> impl Iterator<Item = &OperatorTerm> {
        self.with_role(TermRole::Interaction)
    }

    fn with_role(&self, role: TermRole) -> impl Iterator<Item = &OperatorTerm> {
        self.model
            .terms()
            .iter()
            .zip(&self.roles)
            .filter(move |(_, r)| **r == role)
            .map(|(t, _)| t)
    }

    pub fn dense_hamiltonian(&self) -> Result<ComplexMatrix> {
        self.model.build_dense()
    }

    pub fn dense_local(&self) -> Result<ComplexMatrix> {
        self.model.dense_of(self.local_terms())
    }

    pub fn dense_interaction(&self) -> Result<ComplexMatrix> {
        self.model.dense_of(self.interaction_terms())
    }

    /// H_j for every site. A constant (degree-0) local term is attributed
    /// to site 0.
    pub fn per_site_local(&self) -> Vec<ComplexMatrix> {
        let sites = self.model.sites();
        let mut hs: Vec<ComplexMatrix> = sites.iter().map(|&d| ComplexMatrix::zeros(d, d)).collect();
        for term in self.local_terms() {
            match term.factors.first() {
                Some(f) => {
                    hs[f.site] = &hs[f.site] + &f.op.matrix().scale(term.coefficient);
                }
                None => {
                    hs[0] = &hs[0] + &ComplexMatrix::identity(sites[0]).scale(term.coefficient);
                }
            }
        }
        hs
    }

    pub fn local_spectrum(&self) -> Result<LocalSpectrum> {
        LocalSpectrum::new(self.model.sites(), &self.per_site_local())
    }

    pub fn interaction_extremes(&self) -> Result<InteractionExtremes> {
        let e = hermitian_eig(&self.dense_interaction()?, STRUCTURAL_TOL)?;
        Ok(InteractionExtremes::from_spectrum(&e))
    }
}

/// Extremal eigenvalues of H_I.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InteractionExtremes {
    pub ground: f64,
    pub max: f64,
    /// max − ground
    pub total: f64,
    /// max |eigenvalue| = ‖H_I‖_op
    pub spectral_radius: f64,
}

impl InteractionExtremes {
    pub fn from_spectrum(e: &EigenDecomposition) -> Self {
        Self {
            ground: e.min(),
            max: e.max(),
            total: (e.max() - e.min()).max(0.0),
            spectral_radius: e.spectral_radius(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductLevel {
    pub config: Vec<usize>,
    pub energy: f64,
}

/// Spectra of the per-site local terms and the induced product basis.
#[derive(Debug, Clone)]
pub struct LocalSpectrum {
    pub dims: Vec<usize>,
    pub per_site: Vec<EigenDecomposition>,
    pub gaps: Vec<f64>,
    /// Second smallest per-site gap; 0 for a single site.
    pub delta_e_ent: f64,
    /// All ∏d_i product levels, ascending in energy. Ties keep the order of
    /// the flat configuration index.
    pub product_basis: Vec<ProductLevel>,
    position: Vec<usize>,
}

impl LocalSpectrum {
    pub fn new(dims: &[usize], per_site_h: &[ComplexMatrix]) -> Result<Self> {
        if dims.len() != per_site_h.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} local terms for {} sites",
                per_site_h.len(),
                dims.len()
            )));
        }
        let per_site: Vec<EigenDecomposition> = per_site_h
            .iter()
            .map(|h| hermitian_eig(h, STRUCTURAL_TOL))
            .collect::<Result<_>>()?;
        let gaps: Vec<f64> = per_site
            .iter()
            .map(|e| {
                let gap = e.eigenvalues[1] - e.eigenvalues[0];
                if gap < CLUSTER_TOL * e.scale() {
                    0.0
                } else {
                    gap
                }
            })
            .collect();
        let delta_e_ent = if gaps.len() < 2 {
            0.0
        } else {
            let mut sorted = gaps.clone();
            sorted.sort_by(f64::total_cmp);
            sorted[1]
        };
        let dim: usize = dims.iter().product();
        let mut product_basis: Vec<ProductLevel> = (0..dim)
            .map(|i| {
                let config = decompose_index(i, dims);
                let energy = config
                    .iter()
                    .zip(&per_site)
                    .map(|(&n, e)| e.eigenvalues[n])
                    .sum();
                ProductLevel { config, energy }
            })
            .collect();
        product_basis.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        let mut position = vec![0; dim];
        for (k, level) in product_basis.iter().enumerate() {
            position[compose_index(&level.config, dims)] = k;
        }
        Ok(Self {
            dims: dims.to_vec(),
            per_site,
            gaps,
            delta_e_ent,
            product_basis,
            position,
        })
    }

    pub fn dim(&self) -> usize {
        self.product_basis.len()
    }

    pub fn n_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn ground_energy(&self) -> f64 {
        self.product_basis[0].energy
    }

    /// Index in `product_basis` of a configuration.
    pub fn position_of(&self, config: &[usize]) -> usize {
        self.position[compose_index(config, &self.dims)]
    }

    pub fn energy_of(&self, config: &[usize]) -> f64 {
        config
            .iter()
            .zip(&self.per_site)
            .map(|(&n, e)| e.eigenvalues[n])
            .sum()
    }

    pub fn site_vector(&self, site: usize, level: usize) -> Vec<C64> {
        self.per_site[site].vector(level)
    }

    pub fn config_vector(&self, config: &[usize]) -> Vec<C64> {
        let mut v = vec![C64::new(1.0, 0.0)];
        for (s, &n) in config.iter().enumerate() {
            v = kron_vec(&v, &self.site_vector(s, n));
        }
        v
    }

    /// |E^L_k⟩ for the k-th level in ascending energy order.
    pub fn product_vector(&self, k: usize) -> Vec<C64> {
        self.config_vector(&self.product_basis[k].config)
    }

    /// max(1, max over sites of the spectral radius of H_j).
    pub fn scale(&self) -> f64 {
        self.per_site.iter().map(|e| e.scale()).fold(1.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::builtin::{ising2, triangle};
    use crate::hamiltonian::SiteOp;
    use crate::linalg::inner;
    use crate::random::{random_two_site_model, seeded_rng};

    #[test]
    fn ising2_symmetric_split() {
        let m = ising2(1.0);
        let s = split(&m, &SplitPolicy::ByLocalityDegree).unwrap();
        let hl = s.dense_local().unwrap();
        let hi = s.dense_interaction().unwrap();
        let rebuilt = &hl + &hi;
        assert!((&rebuilt - &m.build_dense().unwrap()).max_abs() < 1e-12);
        let spec = s.local_spectrum().unwrap();
        assert!((spec.gaps[0] - 2.0).abs() < 1e-12);
        assert!((spec.gaps[1] - 2.0).abs() < 1e-12);
        assert!((spec.delta_e_ent - 2.0).abs() < 1e-12);
        assert!((spec.ground_energy() + 2.0).abs() < 1e-12);
        let ext = s.interaction_extremes().unwrap();
        assert!((ext.ground + 1.0).abs() < 1e-12);
        assert!((ext.max - 1.0).abs() < 1e-12);
        assert!((ext.total - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ising2_asymmetric_split() {
        let m = ising2(1.0);
        let policy = SplitPolicy::local_indices(m.terms().len(), &[0]).unwrap();
        let s = split(&m, &policy).unwrap();
        let spec = s.local_spectrum().unwrap();
        assert!((spec.gaps[0] - 2.0).abs() < 1e-12);
        assert_eq!(spec.gaps[1], 0.0);
        assert!((spec.delta_e_ent - 2.0).abs() < 1e-12);
        let ext = s.interaction_extremes().unwrap();
        assert!((ext.ground + 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn all_interaction_model() {
        let m = triangle(1.0);
        let s = split(&m, &SplitPolicy::ByLocalityDegree).unwrap();
        let spec = s.local_spectrum().unwrap();
        assert!(spec.gaps.iter().all(|&g| g == 0.0));
        assert_eq!(spec.delta_e_ent, 0.0);
        assert_eq!(s.dense_local().unwrap(), ComplexMatrix::zeros(8, 8));
    }

    #[test]
    fn explicit_assignment_errors() {
        let m = ising2(1.0);
        assert!(matches!(
            split(&m, &SplitPolicy::Explicit(vec![TermRole::Local; 3])),
            Err(Error::InvalidAssignment(_))
        ));
        assert!(matches!(
            split(&m, &SplitPolicy::Explicit(vec![TermRole::Local; 2])),
            Err(Error::InvalidAssignment(_))
        ));
        assert!(SplitPolicy::local_indices(3, &[0, 0]).is_err());
        assert!(SplitPolicy::local_indices(3, &[5]).is_err());
    }

    #[test]
    fn product_basis_is_orthonormal_and_additive() {
        let mut rng = seeded_rng(31);
        let m = random_two_site_model(&mut rng, 3);
        let s = split(&m, &SplitPolicy::ByLocalityDegree).unwrap();
        let spec = s.local_spectrum().unwrap();
        assert_eq!(spec.dim(), 9);
        let vecs: Vec<Vec<C64>> = (0..9).map(|k| spec.product_vector(k)).collect();
        for i in 0..9 {
            for j in 0..9 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((inner(&vecs[i], &vecs[j]) - C64::new(expected, 0.0)).norm() < 1e-10);
            }
        }
        let hl = s.dense_local().unwrap();
        for (k, level) in spec.product_basis.iter().enumerate() {
            assert!((hl.expectation(&vecs[k]) - level.energy).abs() < 1e-10 * spec.scale());
            assert!((spec.energy_of(&level.config) - level.energy).abs() < 1e-12);
            assert_eq!(spec.position_of(&level.config), k);
        }
        for w in spec.product_basis.windows(2) {
            assert!(w[0].energy <= w[1].energy);
        }
    }

    #[test]
    fn constant_term_goes_to_first_site() {
        let m = SpinModel::new(
            "c",
            vec![2, 2],
            vec![
                OperatorTerm::new(0.5, vec![]),
                OperatorTerm::new(1.0, vec![(1, SiteOp::Z)]),
            ],
        )
        .unwrap();
        let s = split(&m, &SplitPolicy::ByLocalityDegree).unwrap();
        let hs = s.per_site_local();
        assert_eq!(hs[0], ComplexMatrix::identity(2).scale(0.5));
        let rebuilt = s.dense_local().unwrap();
        assert!((&rebuilt - &m.build_dense().unwrap()).max_abs() < 1e-15);
    }
}
