use serde::Serialize;

use crate::entanglement::{geometric_measure, EntanglementOptions, Method, PureState};
use crate::error::{Error, Result};
use crate::hamiltonian::{LocalSpectrum, Splitting, STRUCTURAL_TOL};
use crate::linalg::{hermitian_eig, inner, vec_norm, ComplexMatrix, EigenDecomposition, C64, CLUSTER_TOL};

/// Slack on the bound-versus-entanglement comparisons, covering the
/// optimizer's tolerance on multipartite states.
pub const TOL_ENT: f64 = 1e-6;

/// Reason attached to a bound that is undefined because ΔE_ent vanishes.
pub const UNDEFINED_REASON: &str = "delta_e_ent = 0";

/// Dense operators and spectra shared by the ground and excited analyses.
#[derive(Debug, Clone)]
pub struct Spectra {
    pub h: ComplexMatrix,
    pub h_l: ComplexMatrix,
    pub h_i: ComplexMatrix,
    pub eig: EigenDecomposition,
    pub eig_i: EigenDecomposition,
    pub local: LocalSpectrum,
    /// max(1, ‖H‖, ‖H_L‖, ‖H_I‖)
    pub scale: f64,
}

impl Spectra {
    pub fn new(s: &Splitting) -> Result<Self> {
        let h = s.dense_hamiltonian()?;
        let h_l = s.dense_local()?;
        let h_i = s.dense_interaction()?;
        let eig = hermitian_eig(&h, STRUCTURAL_TOL)?;
        let eig_i = hermitian_eig(&h_i, STRUCTURAL_TOL)?;
        let local = s.local_spectrum()?;
        let l_radius = local
            .ground_energy()
            .abs()
            .max(local.product_basis.last().map_or(0.0, |l| l.energy.abs()));
        let scale = eig
            .spectral_radius()
            .max(eig_i.spectral_radius())
            .max(l_radius)
            .max(1.0);
        Ok(Self {
            h,
            h_l,
            h_i,
            eig,
            eig_i,
            local,
            scale,
        })
    }

    /// Ground state and whether the ground level is degenerate.
    ///
    /// For a degenerate ground level the state is the normalized projection
    /// of the uniform superposition of basis states onto the ground space,
    /// falling back to the first solver vector when that projection is
    /// too short (< 1e-6).
    pub fn ground_state(&self) -> (Vec<C64>, bool) {
        let tol = CLUSTER_TOL * self.scale;
        let cluster = self.eig.cluster_of(0, tol);
        if cluster.len() == 1 {
            return (self.eig.vector(0), false);
        }
        let dim = self.eig.dim();
        let uniform = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        let mut v = vec![C64::new(0.0, 0.0); dim];
        for &k in &cluster {
            let u = self.eig.vector(k);
            let c: C64 = u.iter().map(|z| z.conj() * uniform).sum();
            for (x, y) in v.iter_mut().zip(&u) {
                *x += c * y;
            }
        }
        let norm = vec_norm(&v);
        if norm < 1e-6 {
            return (self.eig.vector(0), true);
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        crate::linalg::fix_phase(&mut v);
        (v, true)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FrustrationReport {
    pub model: String,
    pub e0: f64,
    pub e0_l: f64,
    pub e0_i: f64,
    pub e_i_max: f64,
    pub e_i_tot: f64,
    pub e_f: f64,
    pub gaps: Vec<f64>,
    pub delta_e_ent: f64,
    pub entanglement: f64,
    pub entanglement_method: Method,
    pub ef_bound: Option<f64>,
    pub ratio_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_note: Option<String>,
    pub expect_h_l: f64,
    pub expect_h_i: f64,
    pub local_frustration: f64,
    pub interaction_frustration: f64,
    pub degenerate_ground: bool,
    pub scale: f64,
    pub ground_state: PureState,
}

impl FrustrationReport {
    /// Descriptions of every report invariant that fails.
    pub fn violations(&self) -> Vec<String> {
        let s = self.scale;
        let mut out = Vec::new();
        if (self.e_f - (self.e0 - self.e0_l - self.e0_i)).abs() > 1e-10 * s {
            out.push("e_f differs from e0 - e0_l - e0_i".into());
        }
        if self.e_f < -1e-9 * s {
            out.push(format!("negative frustration energy {}", self.e_f));
        }
        if (self.local_frustration + self.interaction_frustration - self.e_f).abs() > 1e-9 * s {
            out.push("frustration components do not sum to e_f".into());
        }
        if self.local_frustration > self.e_f + 1e-9 * s {
            out.push("local frustration exceeds e_f".into());
        }
        if self.interaction_frustration < -1e-9 * s {
            out.push("negative interaction frustration".into());
        }
        if self.e_f > self.e_i_tot + 1e-9 * s {
            out.push("e_f exceeds e_i_tot".into());
        }
        if let Some(b) = self.ef_bound {
            if self.entanglement > b + TOL_ENT {
                out.push(format!("entanglement {} above ef_bound {b}", self.entanglement));
            }
        }
        if let Some(b) = self.ratio_bound {
            if self.entanglement > b + TOL_ENT {
                out.push(format!("entanglement {} above ratio_bound {b}", self.entanglement));
            }
        }
        out
    }
}

pub fn analyze_ground(s: &Splitting, opts: &EntanglementOptions) -> Result<FrustrationReport> {
    let sp = Spectra::new(s)?;
    report_from_spectra(s, &sp, opts)
}

pub fn report_from_spectra(s: &Splitting, sp: &Spectra, opts: &EntanglementOptions) -> Result<FrustrationReport> {
    let (v, degenerate_ground) = sp.ground_state();
    let psi = PureState::normalized(s.model().sites().to_vec(), v.clone())?;
    let ent = geometric_measure(&psi, opts)?;

    let e0 = sp.eig.min();
    let e0_l = sp.local.ground_energy();
    let e0_i = sp.eig_i.min();
    let e_i_max = sp.eig_i.max();
    let e_i_tot = (e_i_max - e0_i).max(0.0);
    let e_f = e0 - e0_l - e0_i;
    let expect_h_l = sp.h_l.expectation(&v);
    let expect_h_i = sp.h_i.expectation(&v);
    let delta = sp.local.delta_e_ent;
    let defined = delta > STRUCTURAL_TOL * sp.scale;
    Ok(FrustrationReport {
        model: s.model().name.clone(),
        e0,
        e0_l,
        e0_i,
        e_i_max,
        e_i_tot,
        e_f,
        gaps: sp.local.gaps.clone(),
        delta_e_ent: delta,
        entanglement: ent.value,
        entanglement_method: ent.method,
        ef_bound: defined.then(|| e_f / delta),
        ratio_bound: defined.then(|| e_i_tot / delta),
        bound_note: (!defined).then(|| UNDEFINED_REASON.to_string()),
        expect_h_l,
        expect_h_i,
        local_frustration: expect_h_l - e0_l,
        interaction_frustration: expect_h_i - e0_i,
        degenerate_ground,
        scale: sp.scale,
        ground_state: psi,
    })
}

/// Recomputation of the intermediate inequalities behind the ground-state
/// bound.
#[derive(Debug, Clone, Serialize)]
pub struct ProofStepCheck {
    /// Product levels with E^L < E₀^L + ΔE_ent.
    pub below_threshold: Vec<Vec<usize>>,
    /// Σ |α_k|² over those levels.
    pub weight_below: f64,
    /// E of the normalized truncated component.
    pub truncated_entanglement: f64,
    /// 1 − weight_below
    pub outside_weight: f64,
    pub truncated_is_product: bool,
    pub outside_within_bound: bool,
    pub entanglement_within_outside: bool,
}

impl ProofStepCheck {
    pub fn all_ok(&self) -> bool {
        self.truncated_is_product && self.outside_within_bound && self.entanglement_within_outside
    }
}

pub fn proof_step_check(
    s: &Splitting,
    report: &FrustrationReport,
    opts: &EntanglementOptions,
) -> Result<ProofStepCheck> {
    let spec = s.local_spectrum()?;
    let scale = report.scale;
    if spec.delta_e_ent <= STRUCTURAL_TOL * scale {
        return Err(Error::UndefinedBound(UNDEFINED_REASON.into()));
    }
    let psi = report.ground_state.amplitudes();
    let threshold = spec.ground_energy() + spec.delta_e_ent - STRUCTURAL_TOL * scale;
    let mut truncated = vec![C64::new(0.0, 0.0); psi.len()];
    let mut weight = 0.0;
    let mut below = Vec::new();
    for (k, level) in spec.product_basis.iter().enumerate() {
        if level.energy >= threshold {
            break;
        }
        let e = spec.product_vector(k);
        let alpha = inner(&e, psi);
        weight += alpha.norm_sqr();
        for (t, x) in truncated.iter_mut().zip(&e) {
            *t += alpha * x;
        }
        below.push(level.config.clone());
    }
    let truncated_entanglement = if vec_norm(&truncated) > 1e-12 {
        let t = PureState::normalized(s.model().sites().to_vec(), truncated)?;
        geometric_measure(&t, opts)?.value
    } else {
        0.0
    };
    let outside = (1.0 - weight).max(0.0);
    let ef_bound = report.e_f / spec.delta_e_ent;
    Ok(ProofStepCheck {
        below_threshold: below,
        weight_below: weight,
        truncated_entanglement,
        outside_weight: outside,
        truncated_is_product: truncated_entanglement <= 1e-9,
        outside_within_bound: outside <= ef_bound + 1e-9,
        entanglement_within_outside: report.entanglement <= outside + TOL_ENT,
    })
}
