use rayon::prelude::*;

use super::alternating::contraction;
use super::state::{ProductAnsatz, PureState};
use super::{GeometricMeasureResult, Method};
use crate::error::{Error, Result};
use crate::linalg::{fix_phase, vec_norm, C64};

/// Largest total dimension the oracle accepts.
pub const ORACLE_MAX_DIM: usize = 64;

/// Largest number of grid leaves (grid points per site to the power of the
/// number of gridded sites).
pub const ORACLE_MAX_LEAVES: usize = 1 << 26;

const REFINE_ROUNDS: usize = 3;

fn bloch(theta: f64, phi: f64) -> [C64; 2] {
    [
        C64::new((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// Contracts the leading qubit of `t` with ⟨v|.
fn contract_first(t: &[C64], v: &[C64; 2]) -> Vec<C64> {
    let half = t.len() / 2;
    (0..half)
        .map(|k| v[0].conj() * t[k] + v[1].conj() * t[half + k])
        .collect()
}

/// max over the remaining qubits' grid of the squared overlap, with the
/// last qubit maximized in closed form (the norm of the residual vector).
fn grid_max(t: &[C64], grid: &[(f64, f64)], angles: &mut Vec<(f64, f64)>) -> f64 {
    if t.len() == 2 {
        return t[0].norm_sqr() + t[1].norm_sqr();
    }
    let mut best = -1.0;
    let mut best_angles = Vec::new();
    let depth = angles.len();
    for &(th, ph) in grid {
        let sub = contract_first(t, &bloch(th, ph));
        angles.push((th, ph));
        let val = grid_max(&sub, grid, angles);
        if val > best {
            best = val;
            best_angles = angles.clone();
        }
        angles.truncate(depth);
    }
    *angles = best_angles;
    best
}

fn evaluate(t: &[C64], angles: &[(f64, f64)]) -> f64 {
    let mut cur = t.to_vec();
    for &(th, ph) in angles {
        cur = contract_first(&cur, &bloch(th, ph));
    }
    cur.iter().map(|z| z.norm_sqr()).sum()
}

/// Exhaustive Bloch-sphere grid search over product states of qubits.
///
/// Every qubit but the last runs over θ ∈ [0, π] (2^depth points including
/// both poles) × φ ∈ [0, 2π) (2^depth points); the last qubit is optimal in
/// closed form. The best cell is then refined by pattern search over the
/// 3^(2(n−1)) neighbouring offsets, for three rounds with the step halved
/// each round.
pub fn brute_force_geometric_measure(psi: &PureState, grid_depth: u32) -> Result<GeometricMeasureResult> {
    if psi.dims().iter().any(|&d| d != 2) {
        return Err(Error::OracleScaleExceeded("the grid oracle handles qubits only".into()));
    }
    if psi.dim() > ORACLE_MAX_DIM {
        return Err(Error::OracleScaleExceeded(format!(
            "dimension {} exceeds {ORACLE_MAX_DIM}",
            psi.dim()
        )));
    }
    let n = psi.n_sites();
    let t = psi.amplitudes();
    let parties = psi.singleton_parties();
    if n == 1 {
        let v = t.to_vec();
        return finish(psi, parties, vec![v]);
    }
    let per_axis = 1usize << grid_depth;
    let leaves = (per_axis * per_axis).checked_pow((n - 1) as u32);
    if leaves.is_none_or(|l| l > ORACLE_MAX_LEAVES) || per_axis < 2 {
        return Err(Error::OracleScaleExceeded(format!(
            "grid depth {grid_depth} over {} qubits",
            n
        )));
    }
    let dtheta = std::f64::consts::PI / (per_axis - 1) as f64;
    let dphi = 2.0 * std::f64::consts::PI / per_axis as f64;
    let grid: Vec<(f64, f64)> = (0..per_axis)
        .flat_map(|i| (0..per_axis).map(move |j| (i as f64 * dtheta, j as f64 * dphi)))
        .collect();

    let candidates: Vec<(f64, Vec<(f64, f64)>)> = grid
        .par_iter()
        .map(|&(th, ph)| {
            let sub = contract_first(t, &bloch(th, ph));
            let mut angles = vec![(th, ph)];
            let val = grid_max(&sub, &grid, &mut angles);
            (val, angles)
        })
        .collect();
    let mut best = 0;
    for (i, c) in candidates.iter().enumerate() {
        if c.0 > candidates[best].0 {
            best = i;
        }
    }
    let (mut value, mut angles) = candidates.into_iter().nth(best).expect("nonempty grid");

    let dof = 2 * (n - 1);
    let offsets = 3usize.pow(dof as u32);
    let (mut st, mut sp) = (dtheta / 2.0, dphi / 2.0);
    for _ in 0..REFINE_ROUNDS {
        for _ in 0..64 {
            let mut improved = false;
            for code in 0..offsets {
                let mut trial = angles.clone();
                let mut c = code;
                for a in trial.iter_mut() {
                    a.0 += (c % 3) as f64 * st - st;
                    c /= 3;
                    a.1 += (c % 3) as f64 * sp - sp;
                    c /= 3;
                }
                let v = evaluate(t, &trial);
                if v > value {
                    value = v;
                    angles = trial;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        st /= 2.0;
        sp /= 2.0;
    }

    let mut vectors: Vec<Vec<C64>> = angles.iter().map(|&(th, ph)| bloch(th, ph).to_vec()).collect();
    vectors.push(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    let c = contraction(t, psi.dims(), &vectors, n - 1);
    let norm = vec_norm(&c);
    if norm > 0.0 {
        vectors[n - 1] = c.iter().map(|z| z / norm).collect();
    }
    finish(psi, parties, vectors)
}

fn finish(
    psi: &PureState,
    parties: Vec<Vec<usize>>,
    mut vectors: Vec<Vec<C64>>,
) -> Result<GeometricMeasureResult> {
    for v in vectors.iter_mut() {
        fix_phase(v);
    }
    let maximizer = ProductAnsatz::new(parties, vectors)?;
    let overlap_sq = maximizer.overlap_sq(psi)?.min(1.0);
    Ok(GeometricMeasureResult {
        value: (1.0 - overlap_sq).max(0.0),
        overlap_sq,
        maximizer,
        method: Method::BruteForce,
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::standard_states::{bell, ghz, w};
    use crate::entanglement::{geometric_measure_bipartite, Bipartition};
    use crate::random::{random_unit_vector, seeded_rng};

    #[test]
    fn bell_and_ghz() {
        assert!((brute_force_geometric_measure(&bell(), 5).unwrap().value - 0.5).abs() < 1e-3);
        assert!((brute_force_geometric_measure(&ghz(3), 5).unwrap().value - 0.5).abs() < 1e-3);
        assert!((brute_force_geometric_measure(&w(3), 5).unwrap().value - 5.0 / 9.0).abs() < 1e-3);
    }

    #[test]
    fn matches_schmidt_on_two_qubits() {
        let mut rng = seeded_rng(77);
        for _ in 0..10 {
            let psi = PureState::new(vec![2, 2], random_unit_vector(&mut rng, 4)).unwrap();
            let exact = geometric_measure_bipartite(&psi, &Bipartition::first_vs_rest(2).unwrap()).unwrap();
            let oracle = brute_force_geometric_measure(&psi, 5).unwrap();
            assert!((exact.value - oracle.value).abs() < 1e-3);
        }
    }

    #[test]
    fn scale_limits() {
        let psi = PureState::normalized(vec![3, 3], vec![C64::new(1.0, 0.0); 9]).unwrap();
        assert!(matches!(
            brute_force_geometric_measure(&psi, 3),
            Err(Error::OracleScaleExceeded(_))
        ));
        let big = ghz(7);
        assert!(matches!(
            brute_force_geometric_measure(&big, 2),
            Err(Error::OracleScaleExceeded(_))
        ));
        assert!(matches!(
            brute_force_geometric_measure(&ghz(5), 5),
            Err(Error::OracleScaleExceeded(_))
        ));
    }
}
