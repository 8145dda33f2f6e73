//! Splittings that drive the ground-state bound towards saturation.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{report_from_spectra, FrustrationReport, Spectra, UNDEFINED_REASON};
use crate::entanglement::{geometric_measure, schmidt, Bipartition, EntanglementOptions, PureState};
use crate::error::{Error, Result};
use crate::hamiltonian::{split, OperatorTerm, SiteOp, SpinModel, SplitPolicy, Splitting, TermRole, STRUCTURAL_TOL};
use crate::linalg::{inner, vec_norm, ComplexMatrix, C64};

/// Smallest γ accepted by a sweep.
pub const GAMMA_FLOOR: f64 = 1e-6;

/// Result of [`schmidt_splitting`].
#[derive(Debug, Clone)]
pub struct SchmidtSplitting {
    pub splitting: Splitting,
    pub gamma: f64,
    /// Left Schmidt vector of the largest coefficient.
    pub a0: Vec<C64>,
    pub schmidt_coefficients: Vec<f64>,
    /// The largest Schmidt coefficient is tied, so a₀ is not unique.
    pub degenerate_schmidt: bool,
    pub degenerate_ground: bool,
}

/// H_L = −γ|a₀⟩⟨a₀| ⊗ I on party 0 and H_I = H − H_L.
///
/// The model must have exactly two sites (group a larger model first with
/// [`SpinModel::grouped`]). The returned model carries the original terms
/// plus the pair ∓γ|a₀⟩⟨a₀| on party 0, so its dense matrix is H while
/// the explicit split puts only the −γ term in H_L.
pub fn schmidt_splitting(model: &SpinModel, gamma: f64) -> Result<SchmidtSplitting> {
    if model.n_sites() != 2 {
        return Err(Error::NotBipartite(format!(
            "model {} has {} parties",
            model.name,
            model.n_sites()
        )));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    let base = split(model, &SplitPolicy::Explicit(vec![TermRole::Interaction; model.terms().len()]))?;
    let sp = Spectra::new(&base)?;
    let (v, degenerate_ground) = sp.ground_state();
    let psi = PureState::normalized(model.sites().to_vec(), v)?;
    let sd = schmidt(&psi, &Bipartition::first_vs_rest(2)?)?;
    let a0 = sd.left[0].clone();
    let degenerate_schmidt = sd.coefficients.len() > 1 && sd.coefficients[0] - sd.coefficients[1] < 1e-9;

    let projector = ComplexMatrix::outer(&a0, &a0).hermitian_part();
    let mut terms = model.terms().to_vec();
    let mut roles = vec![TermRole::Interaction; terms.len()];
    terms.push(OperatorTerm::new(-gamma, vec![(0, SiteOp::Matrix(projector.clone()))]));
    roles.push(TermRole::Local);
    terms.push(OperatorTerm::new(gamma, vec![(0, SiteOp::Matrix(projector))]));
    roles.push(TermRole::Interaction);
    let extended = SpinModel::with_labels(
        format!("{}+schmidt", model.name),
        model.sites().to_vec(),
        model.labels().to_vec(),
        terms,
    )?
    .with_dim_cap(model.dim_cap());
    Ok(SchmidtSplitting {
        splitting: split(&extended, &SplitPolicy::Explicit(roles))?,
        gamma,
        a0,
        schmidt_coefficients: sd.coefficients,
        degenerate_schmidt,
        degenerate_ground,
    })
}

/// The three sources of slack in the ground-state bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExcessDecomposition {
    pub ef_bound: f64,
    pub entanglement: f64,
    /// Σ |α_k|² over product levels below E₀^L + ΔE_ent.
    pub weight_below: f64,
    pub overshoot_local: f64,
    pub overshoot_interaction: f64,
    pub entanglement_gap: f64,
}

impl ExcessDecomposition {
    pub fn excess(&self) -> f64 {
        self.ef_bound - self.entanglement
    }

    /// |excess − (sum of the three parts)|.
    pub fn identity_residual(&self) -> f64 {
        (self.excess() - (self.overshoot_local + self.overshoot_interaction + self.entanglement_gap)).abs()
    }
}

pub fn excess_decomposition(s: &Splitting, opts: &EntanglementOptions) -> Result<ExcessDecomposition> {
    let sp = Spectra::new(s)?;
    let report = report_from_spectra(s, &sp, opts)?;
    excess_from_report(&sp, &report)
}

fn excess_from_report(sp: &Spectra, report: &FrustrationReport) -> Result<ExcessDecomposition> {
    let delta = report.delta_e_ent;
    let ef_bound = report
        .ef_bound
        .ok_or_else(|| Error::UndefinedBound(UNDEFINED_REASON.into()))?;
    let psi = report.ground_state.amplitudes();
    let threshold = sp.local.ground_energy() + delta - STRUCTURAL_TOL * sp.scale;
    let mut weight = 0.0;
    for (k, level) in sp.local.product_basis.iter().enumerate() {
        if level.energy >= threshold {
            break;
        }
        weight += inner(&sp.local.product_vector(k), psi).norm_sqr();
    }
    let outside = 1.0 - weight;
    Ok(ExcessDecomposition {
        ef_bound,
        entanglement: report.entanglement,
        weight_below: weight,
        overshoot_local: (report.local_frustration - outside * delta) / delta,
        overshoot_interaction: report.interaction_frustration / delta,
        entanglement_gap: outside - report.entanglement,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SaturationRecord {
    pub gamma: f64,
    pub e0: f64,
    pub e0_l: f64,
    pub e0_i: f64,
    pub e_f: f64,
    pub delta_e_ent: f64,
    pub ef_bound: f64,
    pub entanglement: f64,
    pub excess: f64,
    pub overshoot_interaction: f64,
    pub decomposition: ExcessDecomposition,
    /// E_f is below 1e-9·scale, so E_f/γ is dominated by rounding.
    pub unreliable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SaturationSweep {
    pub gammas: Vec<f64>,
    pub records: Vec<SaturationRecord>,
    pub degenerate_schmidt: bool,
    pub degenerate_ground: bool,
}

impl SaturationSweep {
    /// Largest spread of the entanglement across γ.
    pub fn entanglement_spread(&self) -> f64 {
        let (lo, hi) = self
            .records
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                (lo.min(r.entanglement), hi.max(r.entanglement))
            });
        hi - lo
    }
}

pub fn saturation_record(s: &SchmidtSplitting, opts: &EntanglementOptions) -> Result<SaturationRecord> {
    let sp = Spectra::new(&s.splitting)?;
    let report = report_from_spectra(&s.splitting, &sp, opts)?;
    let decomposition = excess_from_report(&sp, &report)?;
    Ok(SaturationRecord {
        gamma: s.gamma,
        e0: report.e0,
        e0_l: report.e0_l,
        e0_i: report.e0_i,
        e_f: report.e_f,
        delta_e_ent: report.delta_e_ent,
        ef_bound: decomposition.ef_bound,
        entanglement: report.entanglement,
        excess: decomposition.excess(),
        overshoot_interaction: decomposition.overshoot_interaction,
        decomposition,
        unreliable: report.e_f.abs() < STRUCTURAL_TOL * report.scale,
    })
}

/// Runs the Schmidt splitting at each γ (descending, each ≥ 1e-6).
pub fn saturation_sweep(model: &SpinModel, gammas: &[f64], opts: &EntanglementOptions) -> Result<SaturationSweep> {
    validate_gammas(gammas)?;
    let runs = gammas
        .par_iter()
        .map(|&g| {
            let s = schmidt_splitting(model, g)?;
            let r = saturation_record(&s, opts)?;
            Ok((s.degenerate_schmidt, s.degenerate_ground, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let degenerate_schmidt = runs.iter().any(|r| r.0);
    let degenerate_ground = runs.iter().any(|r| r.1);
    let records = runs.into_iter().map(|r| r.2).collect();
    Ok(SaturationSweep {
        gammas: gammas.to_vec(),
        records,
        degenerate_schmidt,
        degenerate_ground,
    })
}

pub fn validate_gammas(gammas: &[f64]) -> Result<()> {
    if gammas.is_empty() {
        return Err(Error::InvalidArgument("no gamma values".into()));
    }
    for &g in gammas {
        if !(g >= GAMMA_FLOOR) || !g.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "gamma {g} is below the floor {GAMMA_FLOOR}"
            )));
        }
    }
    if gammas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("gammas must be strictly descending".into()));
    }
    Ok(())
}

/// Geometric measure of the ground state of a two-party model.
pub fn ground_entanglement(model: &SpinModel, opts: &EntanglementOptions) -> Result<f64> {
    let s = split(model, &SplitPolicy::Explicit(vec![TermRole::Interaction; model.terms().len()]))?;
    let (v, _) = Spectra::new(&s)?.ground_state();
    debug_assert!((vec_norm(&v) - 1.0).abs() < 1e-9);
    Ok(geometric_measure(&PureState::normalized(model.sites().to_vec(), v)?, opts)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{ising2, triangle};
    use crate::random::{random_bipartite_dense_model, seeded_rng};

    #[test]
    fn ising2_schmidt_vector_is_plus() {
        let s = schmidt_splitting(&ising2(1.0), 0.1).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.a0[0] - C64::new(r, 0.0)).norm() < 1e-12);
        assert!((s.a0[1] - C64::new(r, 0.0)).norm() < 1e-12);
        let spec = s.splitting.local_spectrum().unwrap();
        assert!((spec.delta_e_ent - 0.1).abs() < 1e-15);
        let rebuilt = &s.splitting.dense_local().unwrap() + &s.splitting.dense_interaction().unwrap();
        assert!((&rebuilt - &ising2(1.0).build_dense().unwrap()).max_abs() < 1e-12);
    }

    #[test]
    fn not_bipartite() {
        assert!(matches!(schmidt_splitting(&triangle(1.0), 0.1), Err(Error::NotBipartite(_))));
        assert!(schmidt_splitting(&ising2(1.0), 0.0).is_err());
    }

    #[test]
    fn ising2_sweep_decreases() {
        let sweep = saturation_sweep(&ising2(1.0), &[1e-1, 1e-2, 1e-3], &EntanglementOptions::default()).unwrap();
        let ex: Vec<f64> = sweep.records.iter().map(|r| r.excess).collect();
        assert!(ex[0] > ex[1] && ex[1] > ex[2] && ex[2] > 0.0);
        assert!(ex[2] <= 0.3 * ex[1]);
        assert!(sweep.entanglement_spread() < 1e-8);
        for r in &sweep.records {
            assert!(r.decomposition.identity_residual() < 1e-9);
            assert!(r.decomposition.overshoot_local.abs() < 1e-9);
            assert!(r.decomposition.entanglement_gap.abs() < 1e-9);
        }
    }

    #[test]
    fn bell_ground_state() {
        // H = −|Φ⁺⟩⟨Φ⁺|
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let phi = [C64::new(r, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(r, 0.0)];
        let h = ComplexMatrix::outer(&phi, &phi).scale(-1.0);
        let m = SpinModel::from_dense("bell", vec![2, 2], &h).unwrap();
        let sweep = saturation_sweep(&m, &[1e-1, 1e-2, 1e-3], &EntanglementOptions::default()).unwrap();
        assert!(sweep.degenerate_schmidt);
        for r in &sweep.records {
            assert!((r.entanglement - 0.5).abs() < 1e-12);
            assert!(r.excess >= -1e-9);
        }
        assert!((sweep.records[2].ef_bound - 0.5).abs() < 1e-2);
    }

    #[test]
    fn product_ground_state() {
        let m = SpinModel::new(
            "diag",
            vec![2, 2],
            vec![
                OperatorTerm::new(-1.0, vec![(0, SiteOp::Z)]),
                OperatorTerm::new(-0.5, vec![(1, SiteOp::Z)]),
                OperatorTerm::new(-0.25, vec![(0, SiteOp::Z), (1, SiteOp::Z)]),
            ],
        )
        .unwrap();
        let sweep = saturation_sweep(&m, &[1e-1, 1e-2, 1e-3], &EntanglementOptions::default()).unwrap();
        for r in &sweep.records {
            assert_eq!(r.entanglement, 0.0);
            assert!(r.ef_bound.abs() < 1e-9);
        }
    }

    #[test]
    fn random_qutrit_rebuild() {
        let mut rng = seeded_rng(3);
        let m = random_bipartite_dense_model(&mut rng, 3);
        let s = schmidt_splitting(&m, 0.05).unwrap();
        let rebuilt = &s.splitting.dense_local().unwrap() + &s.splitting.dense_interaction().unwrap();
        let h = m.build_dense().unwrap();
        assert!((&rebuilt - &h).max_abs() < 1e-12 * h.max_abs().max(1.0));
        let spec = s.splitting.local_spectrum().unwrap();
        assert!((spec.delta_e_ent - 0.05).abs() < 1e-14);
    }

    #[test]
    fn symmetric_ising_decomposition() {
        let s = split(&ising2(1.0), &SplitPolicy::ByLocalityDegree).unwrap();
        let d = excess_decomposition(&s, &EntanglementOptions::default()).unwrap();
        let e = 0.5 - 1.0 / 5f64.sqrt();
        assert!((d.overshoot_local - e).abs() < 1e-12);
        assert!(d.entanglement_gap.abs() < 1e-12);
        assert!((d.ef_bound - (2.0 * e + d.overshoot_interaction)).abs() < 1e-12);
        assert!((d.overshoot_interaction - 0.2763932022500210).abs() < 1e-12);
    }

    #[test]
    fn gamma_validation() {
        assert!(validate_gammas(&[1e-1, 1e-2]).is_ok());
        assert!(validate_gammas(&[1e-2, 1e-1]).is_err());
        assert!(validate_gammas(&[1e-7]).is_err());
        assert!(validate_gammas(&[]).is_err());
    }
}
