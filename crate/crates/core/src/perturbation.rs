//! Numerical certificates for the eigenspace perturbation theorem
//! |P_a Q| ≤ |P_a C Q|/Δ_a ≤ U|C|U†/Δ_a, with A = B + C.

use rand::Rng;
use serde::Serialize;

use crate::bounds::{ProductSubspace, Spectra, TOL_ENT};
use crate::entanglement::{geometric_measure, EntanglementOptions, PureState};
use crate::error::{Error, Result};
use crate::hamiltonian::Splitting;
use crate::linalg::{
    hermitian_eig, inner, operator_abs, orthonormalize_columns, psd_leq, singular_dominance, svd, ui_norm,
    ComplexMatrix, NormKind, C64, CLUSTER_TOL, STRUCTURAL_TOL,
};
use crate::random::{gaussian_complex, random_complex_matrix, random_hermitian, random_hermitian_with_norm, random_unitary};

/// Relative tolerance when selecting eigenvalues by value.
pub const MATCH_TOL: f64 = 1e-8;
const PROJECTOR_TOL: f64 = 1e-10;

/// Picks the eigenvalue a of A.
#[derive(Debug, Clone, PartialEq)]
pub enum EigenSelector {
    Ground,
    Index(usize),
    Value(f64),
}

/// Picks the set β of eigenvalues of B. Indices refer to the ascending
/// spectrum; every selection is widened to whole eigenspaces.
#[derive(Debug, Clone, PartialEq)]
pub enum SetSelector {
    UpperHalf,
    Indices(Vec<usize>),
    Values(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct PerturbationInstance {
    pub a_mat: ComplexMatrix,
    pub b_mat: ComplexMatrix,
    pub c_mat: ComplexMatrix,
    pub a: C64,
    pub p_a: ComplexMatrix,
    pub beta: Vec<C64>,
    pub q: ComplexMatrix,
    pub delta_a: f64,
}

fn op_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(svd(m)?.singular_values.first().copied().unwrap_or(0.0))
}

fn matching(values: &[C64], target: C64, tol: f64) -> Vec<usize> {
    (0..values.len()).filter(|&i| (values[i] - target).norm() <= tol).collect()
}

fn projector_onto(u: &ComplexMatrix, cols: &[usize]) -> ComplexMatrix {
    let n = u.rows();
    let mut p = ComplexMatrix::zeros(n, n);
    for &k in cols {
        let v = u.column(k);
        p = &p + &ComplexMatrix::outer(&v, &v);
    }
    p.hermitian_part()
}

fn min_separation(a: C64, beta: &[C64]) -> f64 {
    beta.iter().map(|b| (a - b).norm()).fold(f64::INFINITY, f64::min)
}

impl PerturbationInstance {
    /// Hermitian B and C; A = B + C is diagonalized here.
    pub fn hermitian(b: ComplexMatrix, c: ComplexMatrix, a_sel: &EigenSelector, beta_sel: &SetSelector) -> Result<Self> {
        if b.rows() != c.rows() || b.cols() != c.cols() {
            return Err(Error::DimensionMismatch(format!("B is {}x{}, C is {}x{}", b.rows(), b.cols(), c.rows(), c.cols())));
        }
        let a_mat = &b + &c;
        let ea = hermitian_eig(&a_mat, STRUCTURAL_TOL)?;
        let eb = hermitian_eig(&b, STRUCTURAL_TOL)?;
        let ec = hermitian_eig(&c, STRUCTURAL_TOL)?;
        let scale = ea.scale().max(eb.scale()).max(ec.scale());
        let n = ea.dim();

        let idx = match *a_sel {
            EigenSelector::Ground => 0,
            EigenSelector::Index(k) if k < n => k,
            EigenSelector::Index(k) => return Err(Error::IndexOutOfRange { index: k, dim: n }),
            EigenSelector::Value(x) => (0..n)
                .find(|&i| (ea.eigenvalues[i] - x).abs() <= MATCH_TOL * scale)
                .ok_or_else(|| Error::InvalidArgument(format!("{x} is not an eigenvalue of A")))?,
        };
        let a = ea.eigenvalues[idx];
        let p_a = projector_onto(&ea.eigenvectors, &ea.cluster_of(idx, CLUSTER_TOL * scale));

        let picked: Vec<usize> = match beta_sel {
            SetSelector::UpperHalf => (n / 2..n).collect(),
            SetSelector::Indices(ix) => {
                if let Some(&k) = ix.iter().find(|&&k| k >= n) {
                    return Err(Error::IndexOutOfRange { index: k, dim: n });
                }
                ix.clone()
            }
            SetSelector::Values(vals) => {
                let mut out = Vec::new();
                for &x in vals {
                    let k = (0..n)
                        .find(|&i| (eb.eigenvalues[i] - x).abs() <= MATCH_TOL * scale)
                        .ok_or_else(|| Error::InvalidArgument(format!("{x} is not an eigenvalue of B")))?;
                    out.push(k);
                }
                out
            }
        };
        let mut cols: Vec<usize> = picked
            .iter()
            .flat_map(|&k| eb.cluster_of(k, CLUSTER_TOL * scale))
            .collect();
        cols.sort_unstable();
        cols.dedup();
        if cols.is_empty() {
            return Err(Error::InvalidArgument("beta is empty".into()));
        }
        let beta: Vec<C64> = cols.iter().map(|&k| C64::new(eb.eigenvalues[k], 0.0)).collect();
        let q = projector_onto(&eb.eigenvectors, &cols);
        let a = C64::new(a, 0.0);
        let inst = Self {
            delta_a: min_separation(a, &beta),
            a_mat,
            b_mat: b,
            c_mat: c,
            a,
            p_a,
            beta,
            q,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Normal A = U_A diag(α) U_A† and B = U_B diag(β) U_B† with C = A − B.
    /// `a_index` selects a from α; `beta_indices` select β from the
    /// eigenvalues of B. Equal eigenvalues are grouped.
    pub fn normal(
        u_a: &ComplexMatrix,
        alpha: &[C64],
        u_b: &ComplexMatrix,
        b_eigs: &[C64],
        a_index: usize,
        beta_indices: &[usize],
    ) -> Result<Self> {
        let n = alpha.len();
        if u_a.rows() != n || u_b.rows() != n || b_eigs.len() != n {
            return Err(Error::DimensionMismatch("eigenvalue and eigenvector counts differ".into()));
        }
        for &k in beta_indices.iter().chain(std::iter::once(&a_index)) {
            if k >= n {
                return Err(Error::IndexOutOfRange { index: k, dim: n });
            }
        }
        let build = |u: &ComplexMatrix, d: &[C64]| u.matmul(&ComplexMatrix::diag(d)).matmul(&u.adjoint());
        let a_mat = build(u_a, alpha);
        let b_mat = build(u_b, b_eigs);
        let c_mat = &a_mat - &b_mat;
        let scale = op_norm(&a_mat)?.max(op_norm(&b_mat)?).max(1.0);
        let a = alpha[a_index];
        let p_a = projector_onto(u_a, &matching(alpha, a, CLUSTER_TOL * scale));
        let mut cols: Vec<usize> = beta_indices
            .iter()
            .flat_map(|&k| matching(b_eigs, b_eigs[k], CLUSTER_TOL * scale))
            .collect();
        cols.sort_unstable();
        cols.dedup();
        if cols.is_empty() {
            return Err(Error::InvalidArgument("beta is empty".into()));
        }
        let beta: Vec<C64> = cols.iter().map(|&k| b_eigs[k]).collect();
        let inst = Self {
            delta_a: min_separation(a, &beta),
            q: projector_onto(u_b, &cols),
            a_mat,
            b_mat,
            c_mat,
            a,
            p_a,
            beta,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn scale(&self) -> Result<f64> {
        Ok(op_norm(&self.a_mat)?
            .max(op_norm(&self.b_mat)?)
            .max(op_norm(&self.c_mat)?)
            .max(1.0))
    }

    pub fn validate(&self) -> Result<()> {
        let scale = self.scale()?;
        let sum = &self.b_mat + &self.c_mat;
        let defect = (&self.a_mat - &sum).max_abs();
        if defect > 1e-12 * scale {
            return Err(Error::InvalidArgument(format!("A − (B + C) = {defect:e}")));
        }
        projector_defect(&self.p_a)?;
        projector_defect(&self.q)?;
        let pa = self.p_a.matmul(&self.a_mat);
        let ap = self.p_a.scale_complex(self.a);
        let d = (&pa - &ap).max_abs();
        if d > 1e-9 * scale {
            return Err(Error::InvalidArgument(format!("P_a is not in the a-eigenspace ({d:e})")));
        }
        let d = (&self.q.matmul(&self.b_mat) - &self.b_mat.matmul(&self.q)).max_abs();
        if d > 1e-9 * scale {
            return Err(Error::InvalidArgument(format!("Q does not commute with B ({d:e})")));
        }
        Ok(())
    }
}

fn projector_defect(p: &ComplexMatrix) -> Result<()> {
    if p.rows() != p.cols() {
        return Err(Error::NotSquare { rows: p.rows(), cols: p.cols() });
    }
    let d = p.hermitian_defect().max((&p.matmul(p) - p).max_abs());
    if d > PROJECTOR_TOL {
        return Err(Error::NotProjector(d));
    }
    Ok(())
}

/// Singular values of P·Q (descending, clipped to [0, 1]), one per
/// dimension of the smaller subspace.
pub fn canonical_cosines(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<Vec<f64>> {
    projector_defect(p)?;
    projector_defect(q)?;
    if p.rows() != q.rows() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", p.rows(), q.rows())));
    }
    let rank = |m: &ComplexMatrix| m.trace().re.round().max(0.0) as usize;
    let k = rank(p).min(rank(q));
    let s = svd(&p.matmul(q))?.singular_values;
    Ok(s.into_iter().take(k).map(|x| x.clamp(0.0, 1.0)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormChain {
    pub kind: NormKind,
    /// |||P_a Q|||
    pub projector_overlap: f64,
    /// |||P_a C Q|||/Δ_a
    pub restricted: f64,
    /// |||C|||/Δ_a
    pub full: f64,
}

impl NormChain {
    pub fn nondecreasing(&self) -> bool {
        let ok = |x: f64, y: f64| x <= y + 1e-9 * y.abs().max(1.0);
        ok(self.projector_overlap, self.restricted) && ok(self.restricted, self.full)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbationCheckReport {
    pub delta_a: f64,
    pub scale: f64,
    pub op_ineq_margin: f64,
    pub op_ineq_ok: bool,
    pub dominance_ok: bool,
    pub norm_chain: Vec<NormChain>,
    pub canonical_cosines: Vec<f64>,
}

impl PerturbationCheckReport {
    pub fn norm_chain_ok(&self) -> bool {
        self.norm_chain.iter().all(NormChain::nondecreasing)
    }

    pub fn cosines_ok(&self) -> bool {
        self.canonical_cosines.iter().all(|&c| (0.0..=1.0 + PROJECTOR_TOL).contains(&c))
    }

    pub fn passed(&self) -> bool {
        self.op_ineq_ok && self.dominance_ok && self.norm_chain_ok() && self.cosines_ok()
    }
}

pub fn check_theorem(inst: &PerturbationInstance) -> Result<PerturbationCheckReport> {
    inst.validate()?;
    let scale = inst.scale()?;
    let delta = inst.delta_a;
    if !(delta > STRUCTURAL_TOL * scale) {
        return Err(Error::DegenerateSeparation(delta));
    }
    let pq = inst.p_a.matmul(&inst.q);
    let pcq = inst.p_a.matmul(&inst.c_mat).matmul(&inst.q);
    let lhs = operator_abs(&pq)?;
    let rhs = operator_abs(&pcq)?.scale(1.0 / delta);
    let psd = psd_leq(&lhs, &rhs, 1e-8)?;
    let dominance_ok = singular_dominance(&pcq, &inst.c_mat, STRUCTURAL_TOL * scale)?;
    let mut norm_chain = Vec::with_capacity(3);
    for kind in NormKind::ALL {
        norm_chain.push(NormChain {
            kind,
            projector_overlap: ui_norm(&pq, kind)?,
            restricted: ui_norm(&pcq, kind)? / delta,
            full: ui_norm(&inst.c_mat, kind)? / delta,
        });
    }
    Ok(PerturbationCheckReport {
        delta_a: delta,
        scale,
        op_ineq_margin: psd.margin,
        op_ineq_ok: psd.margin >= -1e-8 * scale,
        dominance_ok,
        norm_chain,
        canonical_cosines: canonical_cosines(&inst.p_a, &inst.q)?,
    })
}

/// Random Hermitian instance: Gaussian B, C rescaled to ‖C‖ = `c_norm`,
/// a the ground eigenvalue of A and β the upper half of B's spectrum.
pub fn random_hermitian_instance<R: Rng>(rng: &mut R, dim: usize, c_norm: f64) -> Result<PerturbationInstance> {
    let b = random_hermitian(rng, dim, 1.0);
    let c = random_hermitian_with_norm(rng, dim, c_norm);
    PerturbationInstance::hermitian(b, c, &EigenSelector::Ground, &SetSelector::UpperHalf)
}

/// Random normal, generally non-Hermitian instance. A's eigenbasis is a
/// perturbed copy of B's, and α a perturbed copy of B's eigenvalues.
pub fn random_normal_instance<R: Rng>(rng: &mut R, dim: usize) -> Result<PerturbationInstance> {
    let u_b = random_unitary(rng, dim);
    let b_eigs: Vec<C64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
    let noise = random_complex_matrix(rng, dim, dim).scale(0.1);
    let tilted = &u_b + &noise;
    let mut cols: Vec<Vec<C64>> = (0..dim).map(|j| tilted.column(j)).collect();
    orthonormalize_columns(&mut cols);
    let u_a = ComplexMatrix::from_columns(&cols);
    let alpha: Vec<C64> = b_eigs.iter().map(|&b| b + gaussian_complex(rng) * 0.05).collect();
    // a is α's entry nearest the origin, β the half of B's spectrum farthest from it
    let a_index = (0..dim)
        .min_by(|&i, &j| alpha[i].norm().total_cmp(&alpha[j].norm()))
        .unwrap_or(0);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| (b_eigs[i] - alpha[a_index]).norm().total_cmp(&(b_eigs[j] - alpha[a_index]).norm()));
    PerturbationInstance::normal(&u_a, &alpha, &u_b, &b_eigs, a_index, &order[dim / 2..])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpnessWitness {
    pub epsilon: f64,
    pub cosine: f64,
    pub delta_a: f64,
    /// cosine·Δ_a/‖C‖, which tends to 1 as ε → 0.
    pub ratio: f64,
}

/// B = diag(0, 1), C = ε σ_x, a the lower eigenvalue of A, β = {1}.
pub fn sharpness_witness(epsilon: f64) -> Result<SharpnessWitness> {
    let b = ComplexMatrix::diag_real(&[0.0, 1.0]);
    let c = crate::linalg::sigma_x().scale(epsilon);
    let inst = PerturbationInstance::hermitian(b, c, &EigenSelector::Ground, &SetSelector::Values(vec![1.0]))?;
    let cosine = canonical_cosines(&inst.p_a, &inst.q)?[0];
    Ok(SharpnessWitness {
        epsilon,
        cosine,
        delta_a: inst.delta_a,
        ratio: cosine * inst.delta_a / epsilon.abs(),
    })
}

/// The route from the perturbation theorem to the excited-state bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DkChain {
    /// ‖P_j Q_{K⊥}‖, the weight of |E_j⟩ outside K.
    pub pjq_norm: f64,
    pub hi_over_delta: f64,
    pub delta_kperp: f64,
    pub entanglement: f64,
    pub chain_ok: bool,
    pub entanglement_ok: bool,
}

pub fn dk_entanglement_chain(
    s: &Splitting,
    j: usize,
    subspace: &ProductSubspace,
    opts: &EntanglementOptions,
) -> Result<DkChain> {
    dk_chain_with(s, &Spectra::new(s)?, j, subspace, opts)
}

pub fn dk_chain_with(
    s: &Splitting,
    sp: &Spectra,
    j: usize,
    subspace: &ProductSubspace,
    opts: &EntanglementOptions,
) -> Result<DkChain> {
    let dim = sp.eig.dim();
    if j >= dim {
        return Err(Error::IndexOutOfRange { index: j, dim });
    }
    let e_j = sp.eig.eigenvalues[j];
    let delta = crate::bounds::min_distance_outside(&sp.local, subspace, e_j);
    if !(delta > STRUCTURAL_TOL * sp.scale) {
        return Err(Error::DegenerateSeparation(delta));
    }
    let v = sp.eig.vector(j);
    let outside: f64 = (0..dim)
        .filter(|k| !subspace.members.contains(k))
        .map(|k| inner(&sp.local.product_vector(k), &v).norm_sqr())
        .sum();
    let pjq_norm = outside.sqrt();
    let hi_over_delta = sp.eig_i.spectral_radius() / delta;
    let psi = PureState::normalized(s.model().sites().to_vec(), v)?;
    let entanglement = geometric_measure(&psi, opts)?.value;
    Ok(DkChain {
        pjq_norm,
        hi_over_delta,
        delta_kperp: delta,
        entanglement,
        chain_ok: pjq_norm <= hi_over_delta + 1e-9,
        entanglement_ok: entanglement <= pjq_norm * pjq_norm + TOL_ENT,
    })
}
