//! Seeded randomized property suites run by `frustra selftest`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{analyze_ground, ExcitedAnalyzer};
use crate::entanglement::standard_states::{ghz, w};
use crate::entanglement::{
    brute_force_geometric_measure, geometric_measure_alternating, geometric_measure_bipartite, Bipartition,
    EntanglementOptions, PureState,
};
use crate::error::Result;
use crate::hamiltonian::{split, SplitPolicy};
use crate::linalg::{appendix_norm_check, ComplexMatrix, NormTriple};
use crate::perturbation::{check_theorem, random_hermitian_instance, random_normal_instance, sharpness_witness, PerturbationCheckReport};
use crate::random::{
    random_bipartite_dense_model, random_complex_matrix, random_two_site_model, random_unit_vector,
    random_weakly_coupled_model, seeded_rng,
};
use crate::saturation::saturation_sweep;

/// Gammas used by the saturation suite.
pub const SATURATION_GAMMAS: [f64; 3] = [1e-1, 1e-2, 1e-3];
/// Perturbation norms cycled by the theorem suite.
pub const THEOREM_C_NORMS: [f64; 3] = [0.01, 0.1, 1.0];
const MAX_LISTED: usize = 10;

/// Independent stream for trial `index` of a suite seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = seeded_rng(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// The first few failure descriptions.
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    fn collect(name: &str, trials: usize, failures: Vec<String>) -> Self {
        Self {
            name: name.into(),
            trials,
            failures: failures.len(),
            notes: failures.into_iter().take(MAX_LISTED).collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Random two-site models with local dimension 2 and 3, `per_dim` of each.
pub fn bound_suite(per_dim: usize, seed: u64, opts: &EntanglementOptions) -> SuiteOutcome {
    let failures: Vec<String> = (0..2 * per_dim)
        .into_par_iter()
        .filter_map(|t| {
            let d = if t < per_dim { 2 } else { 3 };
            let mut rng = trial_rng(seed, t as u64);
            let m = random_two_site_model(&mut rng, d);
            let r = split(&m, &SplitPolicy::ByLocalityDegree).and_then(|s| analyze_ground(&s, opts));
            match r {
                Ok(rep) => {
                    let v = rep.violations();
                    (!v.is_empty()).then(|| format!("trial {t}: {}", v.join("; ")))
                }
                Err(e) => Some(format!("trial {t}: {e}")),
            }
        })
        .collect();
    SuiteOutcome::collect("bounds", 2 * per_dim, failures)
}

#[derive(Debug, Clone, Serialize)]
pub struct SaturationStats {
    pub instances: usize,
    pub nonpositive_excess: usize,
    /// Fraction of instances with excess(1e-3) ≤ 0.3·excess(1e-2).
    pub decay_fraction: f64,
    /// Median of excess(1e-3)/E over instances with E ≥ 0.05.
    pub median_relative_excess: Option<f64>,
}

impl SaturationStats {
    pub fn passed(&self) -> bool {
        self.nonpositive_excess == 0
            && self.decay_fraction >= 0.9
            && self.median_relative_excess.is_none_or(|m| m <= 0.05)
    }
}

/// Dense random bipartite models, alternating d = 2 and d = 3.
pub fn saturation_suite(instances: usize, seed: u64, opts: &EntanglementOptions) -> Result<SaturationStats> {
    let sweeps = (0..instances)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let m = random_bipartite_dense_model(&mut rng, 2 + t % 2);
            saturation_sweep(&m, &SATURATION_GAMMAS, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut nonpositive = 0;
    let mut decayed = 0;
    let mut relative = Vec::new();
    for s in &sweeps {
        let ex: Vec<f64> = s.records.iter().map(|r| r.excess).collect();
        nonpositive += ex.iter().filter(|&&e| !(e > 0.0)).count();
        if ex[2] <= 0.3 * ex[1] {
            decayed += 1;
        }
        let e = s.records[2].entanglement;
        if e >= 0.05 {
            relative.push(ex[2] / e);
        }
    }
    relative.sort_by(f64::total_cmp);
    let median = (!relative.is_empty()).then(|| {
        let n = relative.len();
        if n % 2 == 1 {
            relative[n / 2]
        } else {
            0.5 * (relative[n / 2 - 1] + relative[n / 2])
        }
    });
    Ok(SaturationStats {
        instances,
        nonpositive_excess: nonpositive,
        decay_fraction: decayed as f64 / instances.max(1) as f64,
        median_relative_excess: median,
    })
}

/// Hermitian trial `t`: dimension and ‖C‖ cycle through `dims` and
/// [`THEOREM_C_NORMS`].
pub fn theorem_trial(seed: u64, t: usize, dims: &[usize]) -> Result<(usize, f64, PerturbationCheckReport)> {
    let dim = dims[t % dims.len()];
    let c_norm = THEOREM_C_NORMS[(t / dims.len()) % THEOREM_C_NORMS.len()];
    let mut rng = trial_rng(seed, t as u64);
    let inst = random_hermitian_instance(&mut rng, dim, c_norm)?;
    Ok((dim, c_norm, check_theorem(&inst)?))
}

pub fn theorem_suite(trials: usize, dims: &[usize], seed: u64) -> SuiteOutcome {
    let mut failures: Vec<String> = (0..trials)
        .into_par_iter()
        .filter_map(|t| match theorem_trial(seed, t, dims) {
            Ok((_, _, r)) if r.passed() => None,
            Ok((dim, c, r)) => Some(format!("trial {t} (dim {dim}, |C| = {c}): margin {:e}", r.op_ineq_margin)),
            Err(e) => Some(format!("trial {t}: {e}")),
        })
        .collect();
    for t in 0..10 {
        let mut rng = trial_rng(seed ^ 0x4E4F524D, t);
        match random_normal_instance(&mut rng, 6).and_then(|i| check_theorem(&i)) {
            Ok(r) if r.passed() => {}
            Ok(r) => failures.push(format!("normal {t}: margin {:e}", r.op_ineq_margin)),
            Err(e) => failures.push(format!("normal {t}: {e}")),
        }
    }
    match sharpness_witness(1e-3) {
        Ok(wit) if wit.ratio >= 0.99 => {}
        Ok(wit) => failures.push(format!("sharpness ratio {}", wit.ratio)),
        Err(e) => failures.push(format!("sharpness: {e}")),
    }
    SuiteOutcome::collect("theorem", trials + 11, failures)
}

/// Weakly coupled three-qubit models, every eigenstate.
pub fn excited_suite(instances: usize, seed: u64, opts: &EntanglementOptions) -> SuiteOutcome {
    let failures: Vec<String> = (0..instances)
        .into_par_iter()
        .flat_map_iter(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let m = random_weakly_coupled_model(&mut rng, 3);
            let mut out = Vec::new();
            let s = match split(&m, &SplitPolicy::ByLocalityDegree) {
                Ok(s) => s,
                Err(e) => return vec![format!("instance {t}: {e}")],
            };
            let an = match ExcitedAnalyzer::new(&s) {
                Ok(a) => a,
                Err(e) => return vec![format!("instance {t}: {e}")],
            };
            for j in 0..8 {
                match an.analyze(j, opts) {
                    Ok(r) => {
                        if let (true, Some(b)) = (r.precondition_met, r.bound_29) {
                            if r.entanglement > b + 1e-6 {
                                out.push(format!("instance {t}, j {j}: {} > {b}", r.entanglement));
                            }
                        }
                        if let (Some(b29), Some(b30)) = (r.bound_29, r.bound_30) {
                            if b30 < b29 - 1e-12 {
                                out.push(format!("instance {t}, j {j}: bound_30 < bound_29"));
                            }
                        }
                    }
                    Err(e) => out.push(format!("instance {t}, j {j}: {e}")),
                }
            }
            out
        })
        .collect();
    SuiteOutcome::collect("excited", instances, failures)
}

/// Alternating optimizer against the Schmidt value and the grid oracle.
pub fn oracle_suite(two_qubit: usize, three_qubit: usize, seed: u64, opts: &EntanglementOptions) -> SuiteOutcome {
    let mut failures: Vec<String> = (0..two_qubit)
        .into_par_iter()
        .filter_map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let psi = PureState::new(vec![2, 2], random_unit_vector(&mut rng, 4)).ok()?;
            let exact = geometric_measure_bipartite(&psi, &Bipartition::first_vs_rest(2).ok()?).ok()?;
            let alt = geometric_measure_alternating(&psi, &psi.singleton_parties(), opts).ok()?;
            ((alt.value - exact.value).abs() > 1e-6).then(|| format!("2-qubit {t}: {} vs {}", alt.value, exact.value))
        })
        .collect();
    failures.extend(
        (0..three_qubit)
            .into_par_iter()
            .filter_map(|t| {
                let mut rng = trial_rng(seed ^ 0x3B17, t as u64);
                let psi = PureState::new(vec![2, 2, 2], random_unit_vector(&mut rng, 8)).ok()?;
                let oracle = brute_force_geometric_measure(&psi, 5).ok()?;
                let alt = geometric_measure_alternating(&psi, &psi.singleton_parties(), opts).ok()?;
                ((alt.value - oracle.value).abs() > 1e-3).then(|| format!("3-qubit {t}: {} vs {}", alt.value, oracle.value))
            })
            .collect::<Vec<_>>(),
    );
    for (name, psi, target, tol) in [("GHZ3", ghz(3), 0.5, 1e-6), ("W3", w(3), 5.0 / 9.0, 1e-4)] {
        match geometric_measure_alternating(&psi, &psi.singleton_parties(), opts) {
            Ok(r) if (r.value - target).abs() <= tol => {}
            Ok(r) => failures.push(format!("{name}: {}", r.value)),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    SuiteOutcome::collect("oracle", two_qubit + three_qubit + 2, failures)
}

/// Norm ordering on random square matrices plus exact equality on dyads.
pub fn norm_suite(trials: usize, seed: u64) -> SuiteOutcome {
    let mut failures = Vec::new();
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let n = rng.random_range(2..=16);
        let m = random_complex_matrix(&mut rng, n, n);
        match appendix_norm_check(&m) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("matrix {t}: norm order fails")),
            Err(e) => failures.push(format!("matrix {t}: {e}")),
        }
        let v = random_unit_vector(&mut rng, n);
        let u = random_unit_vector(&mut rng, n);
        match NormTriple::of(&ComplexMatrix::outer(&v, &u)) {
            Ok(nt) if [nt.operator, nt.hilbert_schmidt, nt.trace].iter().all(|x| (x - 1.0).abs() <= 1e-12) => {}
            Ok(nt) => failures.push(format!("dyad {t}: {nt:?}")),
            Err(e) => failures.push(format!("dyad {t}: {e}")),
        }
    }
    SuiteOutcome::collect("norms", trials, failures)
}

/// Trial counts for [`run_all`].
#[derive(Debug, Clone, Copy)]
pub struct SuiteSizes {
    pub bound_per_dim: usize,
    pub saturation: usize,
    pub theorem: usize,
    pub excited: usize,
    pub oracle_two_qubit: usize,
    pub oracle_three_qubit: usize,
    pub norms: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        Self {
            bound_per_dim: 500,
            saturation: 50,
            theorem: 500,
            excited: 100,
            oracle_two_qubit: 200,
            oracle_three_qubit: 50,
            norms: 200,
        }
    }
}

impl SuiteSizes {
    /// Every count replaced by `n`.
    pub fn uniform(n: usize) -> Self {
        Self {
            bound_per_dim: n,
            saturation: n,
            theorem: n,
            excited: n,
            oracle_two_qubit: n,
            oracle_three_qubit: n,
            norms: n,
        }
    }
}

pub fn run_all(sizes: &SuiteSizes, seed: u64, opts: &EntanglementOptions) -> Vec<SuiteOutcome> {
    let sat = match saturation_suite(sizes.saturation, seed, opts) {
        Ok(st) if st.passed() => SuiteOutcome::collect("saturation", st.instances, vec![]),
        Ok(st) => SuiteOutcome::collect("saturation", st.instances, vec![format!("{st:?}")]),
        Err(e) => SuiteOutcome::collect("saturation", sizes.saturation, vec![e.to_string()]),
    };
    vec![
        bound_suite(sizes.bound_per_dim, seed, opts),
        sat,
        theorem_suite(sizes.theorem, &[4, 8, 16], seed),
        excited_suite(sizes.excited, seed, opts),
        oracle_suite(sizes.oracle_two_qubit, sizes.oracle_three_qubit, seed, opts),
        norm_suite(sizes.norms, seed),
    ]
}
