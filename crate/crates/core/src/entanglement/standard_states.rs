//! Frequently used reference states.

use super::state::PureState;
use crate::linalg::C64;

/// (|00⟩ + |11⟩)/√2
pub fn bell() -> PureState {
    maximally_entangled(2)
}

/// Σ_k |kk⟩/√d on C^d ⊗ C^d.
pub fn maximally_entangled(d: usize) -> PureState {
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    for k in 0..d {
        amps[k * d + k] = C64::new(1.0, 0.0);
    }
    PureState::normalized(vec![d, d], amps).expect("nonzero")
}

/// (|0…0⟩ + |1…1⟩)/√2 on n qubits.
pub fn ghz(n: usize) -> PureState {
    let dim = 1 << n;
    let mut amps = vec![C64::new(0.0, 0.0); dim];
    amps[0] = C64::new(1.0, 0.0);
    amps[dim - 1] = C64::new(1.0, 0.0);
    PureState::normalized(vec![2; n], amps).expect("nonzero")
}

/// Equal superposition of the n single-excitation basis states.
pub fn w(n: usize) -> PureState {
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    for k in 0..n {
        amps[1 << k] = C64::new(1.0, 0.0);
    }
    PureState::normalized(vec![2; n], amps).expect("nonzero")
}
