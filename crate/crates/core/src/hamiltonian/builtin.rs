use std::collections::BTreeMap;

use super::model::{OperatorTerm, SiteOp, SpinModel};
use crate::error::{Error, Result};

/// Two-spin transverse Ising model −g(X₁ + X₂) − Z₁Z₂.
///
/// Term order: −gX₀, −gX₁, −Z₀Z₁.
pub fn ising2(g: f64) -> SpinModel {
    SpinModel::new(
        "ising2",
        vec![2, 2],
        vec![
            OperatorTerm::new(-g, vec![(0, SiteOp::X)]),
            OperatorTerm::new(-g, vec![(1, SiteOp::X)]),
            OperatorTerm::new(-1.0, vec![(0, SiteOp::Z), (1, SiteOp::Z)]),
        ],
    )
    .expect("ising2 is well formed")
}

/// Antiferromagnetic triangle J(Z₀Z₁ + Z₁Z₂ + Z₀Z₂).
pub fn triangle(j: f64) -> SpinModel {
    SpinModel::new(
        "triangle",
        vec![2, 2, 2],
        vec![
            OperatorTerm::new(j, vec![(0, SiteOp::Z), (1, SiteOp::Z)]),
            OperatorTerm::new(j, vec![(1, SiteOp::Z), (2, SiteOp::Z)]),
            OperatorTerm::new(j, vec![(0, SiteOp::Z), (2, SiteOp::Z)]),
        ],
    )
    .expect("triangle is well formed")
}

/// Three spins A, B, C with local fields −g_a Z_A − g_b Z_B − g_c Z_C and
/// couplings X_A X_B + X_B X_C.
pub fn chain3(ga: f64, gb: f64, gc: f64) -> SpinModel {
    SpinModel::with_labels(
        "chain3",
        vec![2, 2, 2],
        vec!["A".into(), "B".into(), "C".into()],
        vec![
            OperatorTerm::new(-ga, vec![(0, SiteOp::Z)]),
            OperatorTerm::new(-gb, vec![(1, SiteOp::Z)]),
            OperatorTerm::new(-gc, vec![(2, SiteOp::Z)]),
            OperatorTerm::new(1.0, vec![(0, SiteOp::X), (1, SiteOp::X)]),
            OperatorTerm::new(1.0, vec![(1, SiteOp::X), (2, SiteOp::X)]),
        ],
    )
    .expect("chain3 is well formed")
}

pub struct BuiltinInfo {
    pub name: &'static str,
    pub params: &'static [(&'static str, f64)],
    pub description: &'static str,
}

pub const BUILTINS: &[BuiltinInfo] = &[
    BuiltinInfo {
        name: "ising2",
        params: &[("g", 1.0)],
        description: "two-spin transverse Ising: -g(X1 + X2) - Z1 Z2",
    },
    BuiltinInfo {
        name: "triangle",
        params: &[("J", 1.0)],
        description: "Ising antiferromagnet on a triangle: J(Z1 Z2 + Z2 Z3 + Z1 Z3)",
    },
    BuiltinInfo {
        name: "chain3",
        params: &[("ga", 1.0), ("gb", 1.0), ("gc", 1.0)],
        description: "sites A,B,C: -ga Z_A - gb Z_B - gc Z_C + X_A X_B + X_B X_C",
    },
];

/// Builds a named model, filling unspecified parameters with defaults.
pub fn builtin(name: &str, params: &BTreeMap<String, f64>) -> Result<SpinModel> {
    let info = BUILTINS
        .iter()
        .find(|b| b.name == name)
        .ok_or_else(|| Error::InvalidModel(format!("unknown model {name:?}")))?;
    for key in params.keys() {
        if !info.params.iter().any(|(p, _)| p == key) {
            return Err(Error::InvalidModel(format!(
                "model {name} has no parameter {key:?}"
            )));
        }
    }
    let get = |key: &str| {
        params.get(key).copied().unwrap_or_else(|| {
            info.params
                .iter()
                .find(|(p, _)| *p == key)
                .map(|(_, v)| *v)
                .expect("known parameter")
        })
    };
    Ok(match name {
        "ising2" => ising2(get("g")),
        "triangle" => triangle(get("J")),
        _ => chain3(get("ga"), get("gb"), get("gc")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eig;

    #[test]
    fn ising2_ground_energy() {
        for g in [0.0, 0.5, 1.0, 2.0] {
            let h = ising2(g).build_dense().unwrap();
            let e = hermitian_eig(&h, 1e-9).unwrap();
            assert!((e.min() + (1.0 + 4.0 * g * g).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_is_diagonal_and_frustrated() {
        let h = triangle(1.0).build_dense().unwrap();
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    assert_eq!(h[(i, j)].norm(), 0.0);
                }
            }
        }
        // classical energies: all-equal configurations cost +3, the rest −1
        let mut diag: Vec<f64> = (0..8).map(|i| h[(i, i)].re).collect();
        diag.sort_by(f64::total_cmp);
        assert_eq!(diag, vec![-1.0, -1.0, -1.0, -1.0, -1.0, -1.0, 3.0, 3.0]);
    }

    #[test]
    fn builtin_lookup() {
        let mut p = BTreeMap::new();
        p.insert("gb".to_string(), 10.0);
        let m = builtin("chain3", &p).unwrap();
        assert_eq!(m.terms()[1].coefficient, -10.0);
        assert_eq!(m.terms()[0].coefficient, -1.0);
        assert!(builtin("nope", &p).is_err());
        assert!(builtin("ising2", &p).is_err());
    }
}
