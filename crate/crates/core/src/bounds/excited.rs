use serde::Serialize;

use super::ground::Spectra;
use crate::entanglement::{geometric_measure, EntanglementOptions, Method, PureState};
use crate::error::{Error, Result};
use crate::hamiltonian::{LocalSpectrum, Splitting, STRUCTURAL_TOL};
use crate::linalg::{inner, CLUSTER_TOL};

/// Default cap on the total number of subspace members enumerated.
pub const ENUMERATION_CAP: usize = 1_000_000;

/// Span of the product levels that differ from a fixed configuration only
/// at `varying_site`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductSubspace {
    pub varying_site: usize,
    /// Levels of the other sites; `None` at the varying site.
    pub fixed_configuration: Vec<Option<usize>>,
    /// Positions in the energy-sorted product basis.
    pub members: Vec<usize>,
    pub member_energies: Vec<f64>,
}

impl ProductSubspace {
    fn build(spec: &LocalSpectrum, site: usize, config: &[usize]) -> Self {
        let mut c = config.to_vec();
        let mut members = Vec::with_capacity(spec.dims[site]);
        let mut member_energies = Vec::with_capacity(spec.dims[site]);
        for level in 0..spec.dims[site] {
            c[site] = level;
            let k = spec.position_of(&c);
            members.push(k);
            member_energies.push(spec.product_basis[k].energy);
        }
        let fixed_configuration = config
            .iter()
            .enumerate()
            .map(|(i, &n)| (i != site).then_some(n))
            .collect();
        Self {
            varying_site: site,
            fixed_configuration,
            members,
            member_energies,
        }
    }

    /// Whether a configuration lies in this subspace.
    pub fn contains(&self, config: &[usize]) -> bool {
        self.fixed_configuration
            .iter()
            .zip(config)
            .all(|(f, &n)| f.is_none_or(|f| f == n))
    }
}

pub fn enumerate_product_subspaces(spec: &LocalSpectrum) -> Result<Vec<ProductSubspace>> {
    enumerate_product_subspaces_capped(spec, ENUMERATION_CAP)
}

/// Every product subspace, by varying site and then by the lexicographic
/// order of the other sites' levels.
pub fn enumerate_product_subspaces_capped(spec: &LocalSpectrum, cap: usize) -> Result<Vec<ProductSubspace>> {
    let n = spec.n_sites();
    if n < 2 {
        return Err(Error::InvalidArgument("product subspaces need at least two sites".into()));
    }
    let needed = n * spec.dim();
    if needed > cap {
        return Err(Error::EnumerationCap { needed, cap });
    }
    let mut out = Vec::new();
    for site in 0..n {
        let others: Vec<usize> = (0..n).filter(|&i| i != site).collect();
        let count: usize = others.iter().map(|&i| spec.dims[i]).product();
        let mut config = vec![0usize; n];
        for _ in 0..count {
            out.push(ProductSubspace::build(spec, site, &config));
            for &i in others.iter().rev() {
                config[i] += 1;
                if config[i] < spec.dims[i] {
                    break;
                }
                config[i] = 0;
            }
        }
    }
    Ok(out)
}

/// min over product levels outside `k` of |energy − E^L_l|.
pub fn min_distance_outside(spec: &LocalSpectrum, k: &ProductSubspace, energy: f64) -> f64 {
    spec.product_basis
        .iter()
        .filter(|l| !k.contains(&l.config))
        .map(|l| (energy - l.energy).abs())
        .fold(f64::INFINITY, f64::min)
}

/// ΔE_{j,ent}: the largest, over product subspaces through `config`, of the
/// smallest local-energy distance from `config` to a level outside the
/// subspace. Ties go to the lowest varying site.
pub fn delta_j_ent(spec: &LocalSpectrum, config: &[usize]) -> Result<(f64, ProductSubspace)> {
    if config.len() != spec.n_sites() || config.iter().zip(&spec.dims).any(|(&n, &d)| n >= d) {
        return Err(Error::InvalidArgument(format!("invalid configuration {config:?}")));
    }
    if spec.n_sites() < 2 {
        return Err(Error::InvalidArgument("product subspaces need at least two sites".into()));
    }
    let e_j = spec.energy_of(config);
    let mut best: Option<(f64, ProductSubspace)> = None;
    for site in 0..spec.n_sites() {
        let k = ProductSubspace::build(spec, site, config);
        let d = min_distance_outside(spec, &k, e_j);
        if best.as_ref().is_none_or(|(b, _)| d > *b) {
            best = Some((d, k));
        }
    }
    Ok(best.expect("at least two sites"))
}

#[derive(Debug, Clone, Serialize)]
pub struct ExcitedBoundReport {
    pub j: usize,
    pub e_j: f64,
    pub degenerate_level: bool,
    pub local_configuration: Vec<usize>,
    pub local_energy: f64,
    pub chosen_subspace: ProductSubspace,
    pub delta_j_ent: f64,
    pub delta_j_kperp: f64,
    pub h_i_norm: f64,
    /// Largest eigenvalue of H_I.
    pub e_i_max: f64,
    /// Largest |eigenvalue| of H_I; the quantity used in bound_29.
    pub e_i_max_abs: f64,
    pub bound_29: Option<f64>,
    pub bound_30: Option<f64>,
    pub bound_dk: Option<f64>,
    pub precondition_met: bool,
    pub precondition_30: bool,
    pub entanglement: f64,
    pub entanglement_method: Method,
    /// Set when the local level with the largest overlap with |E_j⟩ is not
    /// the j-th one (beyond a 1e-9 tie margin).
    pub pairing_ambiguous: bool,
    pub max_overlap_level: usize,
}

/// Caches the spectra of a splitting for repeated excited-state analyses.
pub struct ExcitedAnalyzer<'a> {
    split: &'a Splitting,
    spectra: Spectra,
}

impl<'a> ExcitedAnalyzer<'a> {
    pub fn new(split: &'a Splitting) -> Result<Self> {
        Ok(Self {
            split,
            spectra: Spectra::new(split)?,
        })
    }

    pub fn spectra(&self) -> &Spectra {
        &self.spectra
    }

    pub fn analyze(&self, j: usize, opts: &EntanglementOptions) -> Result<ExcitedBoundReport> {
        let sp = &self.spectra;
        let dim = sp.eig.dim();
        if j >= dim {
            return Err(Error::IndexOutOfRange { index: j, dim });
        }
        let spec = &sp.local;
        let e_j = sp.eig.eigenvalues[j];
        let v = sp.eig.vector(j);
        let degenerate_level = sp.eig.cluster_of(j, CLUSTER_TOL * sp.scale).len() > 1;
        let config = spec.product_basis[j].config.clone();
        let (delta, subspace) = delta_j_ent(spec, &config)?;
        let delta_kperp = min_distance_outside(spec, &subspace, e_j);

        let h_i_norm = sp.eig_i.spectral_radius();
        let e_i_max = sp.eig_i.max();
        let e_i_max_abs = h_i_norm;
        let tol = STRUCTURAL_TOL * sp.scale;
        let ratio = |num: f64, den: f64| (den > tol).then(|| num * num / (den * den));
        let precondition_met = delta > e_i_max_abs;
        let precondition_30 = delta >= h_i_norm;
        let bound_29 = if precondition_met {
            ratio(h_i_norm, delta - e_i_max_abs)
        } else {
            None
        };
        let bound_30 = if precondition_30 {
            ratio(h_i_norm, delta - h_i_norm)
        } else {
            None
        };
        let bound_dk = ratio(h_i_norm, delta_kperp);

        let mut max_overlap_level = j;
        let mut best = inner(&spec.product_vector(j), &v).norm_sqr();
        let own = best;
        for k in 0..dim {
            let o = inner(&spec.product_vector(k), &v).norm_sqr();
            if o > best {
                best = o;
                max_overlap_level = k;
            }
        }
        let pairing_ambiguous = max_overlap_level != j && best > own + 1e-9;

        let psi = PureState::normalized(self.split.model().sites().to_vec(), v)?;
        let ent = geometric_measure(&psi, opts)?;
        Ok(ExcitedBoundReport {
            j,
            e_j,
            degenerate_level,
            local_energy: spec.product_basis[j].energy,
            local_configuration: config,
            chosen_subspace: subspace,
            delta_j_ent: delta,
            delta_j_kperp: delta_kperp,
            h_i_norm,
            e_i_max,
            e_i_max_abs,
            bound_29,
            bound_30,
            bound_dk,
            precondition_met,
            precondition_30,
            entanglement: ent.value,
            entanglement_method: ent.method,
            pairing_ambiguous,
            max_overlap_level: if pairing_ambiguous { max_overlap_level } else { j },
        })
    }
}

pub fn analyze_excited(s: &Splitting, j: usize, opts: &EntanglementOptions) -> Result<ExcitedBoundReport> {
    ExcitedAnalyzer::new(s)?.analyze(j, opts)
}
