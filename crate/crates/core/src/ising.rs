//! Closed forms for the symmetric two-qubit transverse-field Ising model
//! H = −g(X₁ + X₂) − Z₁Z₂ with H_L = −g(X₁ + X₂) and H_I = −Z₁Z₂.

/// Ground energy −√(1 + 4g²).
pub fn e0(g: f64) -> f64 {
    -(1.0 + 4.0 * g * g).sqrt()
}

/// Ground-state geometric measure 1/2 − g/√(1 + 4g²).
pub fn entanglement(g: f64) -> f64 {
    0.5 - g / (1.0 + 4.0 * g * g).sqrt()
}

/// Squared overlap of the ground state with |++⟩.
pub fn lambda0_sq(g: f64) -> f64 {
    1.0 - entanglement(g)
}

/// E_f/ΔE_ent = (1 + 2g − √(1 + 4g²)) / (2g).
pub fn ef_bound(g: f64) -> f64 {
    (1.0 + 2.0 * g - (1.0 + 4.0 * g * g).sqrt()) / (2.0 * g)
}

/// Bound with the single-site split H_L = −g X₁ (so ΔE_ent = 2g and
/// E₀^I = −√(1 + g²)).
pub fn ef_bound_single_site(g: f64) -> f64 {
    0.5 - ((1.0 + 4.0 * g * g).sqrt() - (1.0 + g * g).sqrt()) / (2.0 * g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits() {
        assert!((entanglement(1e-8) - 0.5).abs() < 1e-7);
        assert!(entanglement(1e6) < 1e-12);
        assert!((ef_bound(1.0) - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
        for g in [0.1, 0.5, 1.0, 3.0] {
            assert!(ef_bound(g) >= entanglement(g));
            assert!(ef_bound_single_site(g) >= entanglement(g));
        }
    }
}
