use crate::error::{Error, Result};
use crate::linalg::{sigma_x, sigma_y, sigma_z, ComplexMatrix, C64};

/// Default cap on the total Hilbert-space dimension (12 qubits).
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Single-site operator: a Pauli matrix (qubits only) or an explicit
/// Hermitian d×d matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum SiteOp {
    X,
    Y,
    Z,
    Matrix(ComplexMatrix),
}

impl SiteOp {
    pub fn matrix(&self) -> ComplexMatrix {
        match self {
            SiteOp::X => sigma_x(),
            SiteOp::Y => sigma_y(),
            SiteOp::Z => sigma_z(),
            SiteOp::Matrix(m) => m.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SiteOp::Matrix(m) => m.rows(),
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub site: usize,
    pub op: SiteOp,
}

/// Real coefficient times a tensor product of single-site operators.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTerm {
    pub coefficient: f64,
    pub factors: Vec<Factor>,
}

impl OperatorTerm {
    pub fn new(coefficient: f64, factors: Vec<(usize, SiteOp)>) -> Self {
        Self {
            coefficient,
            factors: factors
                .into_iter()
                .map(|(site, op)| Factor { site, op })
                .collect(),
        }
    }

    /// Number of sites the term acts on.
    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn rescaled(&self, factor: f64) -> Self {
        Self {
            coefficient: self.coefficient * factor,
            factors: self.factors.clone(),
        }
    }
}

/// A many-body Hamiltonian as a sum of operator strings on labeled sites.
///
/// Site 0 is the most significant factor of the product basis: basis index
/// Σ n_i·stride_i with stride_i = ∏_{k>i} d_k.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinModel {
    pub name: String,
    sites: Vec<usize>,
    labels: Vec<String>,
    terms: Vec<OperatorTerm>,
    dim_cap: usize,
}

impl SpinModel {
    pub fn new(name: impl Into<String>, sites: Vec<usize>, terms: Vec<OperatorTerm>) -> Result<Self> {
        let labels = (0..sites.len()).map(|i| i.to_string()).collect();
        Self::with_labels(name, sites, labels, terms)
    }

    pub fn with_labels(
        name: impl Into<String>,
        sites: Vec<usize>,
        labels: Vec<String>,
        terms: Vec<OperatorTerm>,
    ) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidModel("model has no sites".into()));
        }
        if let Some(d) = sites.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidModel(format!("local dimension {d} < 2")));
        }
        if labels.len() != sites.len() {
            return Err(Error::InvalidModel(format!(
                "{} labels for {} sites",
                labels.len(),
                sites.len()
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::InvalidModel(format!("duplicate site label {a:?}")));
            }
        }
        for (t, term) in terms.iter().enumerate() {
            if !term.coefficient.is_finite() {
                return Err(Error::InvalidModel(format!("term {t} has a non-finite coefficient")));
            }
            for (k, f) in term.factors.iter().enumerate() {
                if f.site >= sites.len() {
                    return Err(Error::InvalidModel(format!(
                        "term {t} references site {} of {}",
                        f.site,
                        sites.len()
                    )));
                }
                if term.factors[..k].iter().any(|g| g.site == f.site) {
                    return Err(Error::InvalidModel(format!(
                        "term {t} acts on site {} twice",
                        f.site
                    )));
                }
                let d = sites[f.site];
                match &f.op {
                    SiteOp::Matrix(m) => {
                        if m.rows() != d || m.cols() != d {
                            return Err(Error::NonHermitianTerm {
                                term: t,
                                reason: format!(
                                    "{}x{} operator on site {} of dimension {d}",
                                    m.rows(),
                                    m.cols(),
                                    f.site
                                ),
                            });
                        }
                        if !m.is_hermitian(1e-12) {
                            return Err(Error::NonHermitianTerm {
                                term: t,
                                reason: format!("operator on site {} is not Hermitian", f.site),
                            });
                        }
                    }
                    _ if d != 2 => {
                        return Err(Error::NonHermitianTerm {
                            term: t,
                            reason: format!("Pauli operator on site {} of dimension {d}", f.site),
                        });
                    }
                    _ => {}
                }
            }
        }
        Ok(Self {
            name: name.into(),
            sites,
            labels,
            terms,
            dim_cap: DEFAULT_DIM_CAP,
        })
    }

    pub fn with_dim_cap(mut self, cap: usize) -> Self {
        self.dim_cap = cap;
        self
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }

    /// ∏ d_i, saturating on overflow.
    pub fn dim(&self) -> usize {
        self.sites
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .unwrap_or(usize::MAX)
    }

    pub fn check_dim(&self) -> Result<usize> {
        let dim = self.dim();
        if dim > self.dim_cap {
            return Err(Error::DimensionCap {
                dim,
                cap: self.dim_cap,
            });
        }
        Ok(dim)
    }

    /// Dense D×D matrix of the full Hamiltonian.
    pub fn build_dense(&self) -> Result<ComplexMatrix> {
        self.dense_of(self.terms.iter())
    }

    /// Dense matrix of a subset of this model's terms.
    pub fn dense_of<'a>(&self, terms: impl Iterator<Item = &'a OperatorTerm>) -> Result<ComplexMatrix> {
        let dim = self.check_dim()?;
        let mut h = ComplexMatrix::zeros(dim, dim);
        for term in terms {
            let ops: Vec<(usize, ComplexMatrix)> = term
                .factors
                .iter()
                .map(|f| (f.site, f.op.matrix()))
                .collect();
            accumulate_embedded(&mut h, &self.sites, &ops, term.coefficient);
        }
        Ok(h)
    }

    pub fn strides(&self) -> Vec<usize> {
        strides(&self.sites)
    }
}

pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Splits a flat basis index into per-site levels.
pub fn decompose_index(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut config = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        config[i] = index % dims[i];
        index /= dims[i];
    }
    config
}

pub fn compose_index(config: &[usize], dims: &[usize]) -> usize {
    config.iter().zip(dims).fold(0, |acc, (&n, &d)| acc * d + n)
}

/// Adds `coeff · (⊗ ops ⊗ identities)` into `h`.
///
/// Works column by column, touching only the ∏ d_s rows reachable through
/// the factors, so the cost is D·∏ d_s instead of D².
pub fn accumulate_embedded(
    h: &mut ComplexMatrix,
    dims: &[usize],
    ops: &[(usize, ComplexMatrix)],
    coeff: f64,
) {
    let dim: usize = dims.iter().product();
    let st = strides(dims);
    if ops.is_empty() {
        for i in 0..dim {
            h[(i, i)] += C64::new(coeff, 0.0);
        }
        return;
    }
    let fdims: Vec<usize> = ops.iter().map(|(s, _)| dims[*s]).collect();
    let combos: usize = fdims.iter().product();
    let mut out = vec![0usize; ops.len()];
    for col in 0..dim {
        let input: Vec<usize> = ops.iter().map(|(s, _)| (col / st[*s]) % dims[*s]).collect();
        let base = col
            - ops
                .iter()
                .zip(&input)
                .map(|((s, _), n)| n * st[*s])
                .sum::<usize>();
        out.iter_mut().for_each(|o| *o = 0);
        for _ in 0..combos {
            let mut amp = C64::new(coeff, 0.0);
            let mut row = base;
            for (k, (s, m)) in ops.iter().enumerate() {
                amp *= m[(out[k], input[k])];
                row += out[k] * st[*s];
            }
            if amp != C64::new(0.0, 0.0) {
                h[(row, col)] += amp;
            }
            for k in (0..out.len()).rev() {
                out[k] += 1;
                if out[k] < fdims[k] {
                    break;
                }
                out[k] = 0;
            }
        }
    }
}

/// Embeds a single-site operator into the full space.
pub fn embed_site(dims: &[usize], site: usize, op: &ComplexMatrix) -> ComplexMatrix {
    let dim: usize = dims.iter().product();
    let mut h = ComplexMatrix::zeros(dim, dim);
    accumulate_embedded(&mut h, dims, &[(site, op.clone())], 1.0);
    h
}

/// Orthonormal Hermitian operator basis on C^d under the Hilbert-Schmidt
/// inner product (generalized Gell-Mann matrices), with I/√d first.
pub fn hermitian_operator_basis(d: usize) -> Vec<ComplexMatrix> {
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = vec![ComplexMatrix::identity(d).scale(1.0 / (d as f64).sqrt())];
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym[(j, k)] = C64::new(r2, 0.0);
            sym[(k, j)] = C64::new(r2, 0.0);
            basis.push(sym);
            let mut anti = ComplexMatrix::zeros(d, d);
            anti[(j, k)] = C64::new(0.0, -r2);
            anti[(k, j)] = C64::new(0.0, r2);
            basis.push(anti);
        }
    }
    for l in 1..d {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for x in diag.iter_mut().take(l) {
            *x = 1.0 / norm;
        }
        diag[l] = -(l as f64) / norm;
        basis.push(ComplexMatrix::diag_real(&diag));
    }
    basis
}

impl SpinModel {
    /// Expands a dense Hermitian operator on ⊗ C^{d_i} into product terms
    /// over a Hermitian operator basis. Identity factors are dropped, so
    /// single-site content ends up in degree-1 terms. Qubit factors are
    /// emitted as Pauli operators.
    pub fn from_dense(name: impl Into<String>, dims: Vec<usize>, h: &ComplexMatrix) -> Result<Self> {
        let dim: usize = dims.iter().product();
        if h.rows() != dim || !h.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for dimension {dim}",
                h.rows(),
                h.cols()
            )));
        }
        if !h.is_hermitian(1e-12) {
            return Err(Error::NonHermitianTerm {
                term: 0,
                reason: "dense operator is not Hermitian".into(),
            });
        }
        let bases: Vec<Vec<ComplexMatrix>> = dims.iter().map(|&d| hermitian_operator_basis(d)).collect();
        let sizes: Vec<usize> = dims.iter().map(|d| d * d).collect();
        let n_combos: usize = sizes.iter().product();
        let cutoff = 1e-14 * h.frobenius_norm();
        let mut terms = Vec::new();
        for combo in 0..n_combos {
            let ks = decompose_index(combo, &sizes);
            // c = tr(H · ⊗B_k) = Σ_{i,j} H[i,j] (⊗B)[j,i]
            let mut c = C64::new(0.0, 0.0);
            for i in 0..dim {
                let ci = decompose_index(i, &dims);
                for j in 0..dim {
                    let hij = h[(i, j)];
                    if hij == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let cj = decompose_index(j, &dims);
                    let mut b = C64::new(1.0, 0.0);
                    for s in 0..dims.len() {
                        b *= bases[s][ks[s]][(cj[s], ci[s])];
                        if b == C64::new(0.0, 0.0) {
                            break;
                        }
                    }
                    c += hij * b;
                }
            }
            if c.re.abs() <= cutoff {
                continue;
            }
            let mut coeff = c.re;
            let mut factors = Vec::new();
            for (s, &k) in ks.iter().enumerate() {
                let d = dims[s];
                if k == 0 {
                    coeff /= (d as f64).sqrt();
                } else if d == 2 {
                    coeff *= std::f64::consts::FRAC_1_SQRT_2;
                    // basis order for d = 2: I, X, Y, Z (each /√2)
                    let op = match k {
                        1 => SiteOp::X,
                        2 => SiteOp::Y,
                        _ => SiteOp::Z,
                    };
                    factors.push((s, op));
                } else {
                    factors.push((s, SiteOp::Matrix(bases[s][k].clone())));
                }
            }
            terms.push(OperatorTerm::new(coeff, factors));
        }
        Self::new(name, dims, terms)
    }
}

impl SpinModel {
    /// Regroups the sites into parties. Each party's local dimension is the
    /// product of its members' dimensions, ordered as listed; every term
    /// factor on a party is the Kronecker product over its members with
    /// identities on untouched members. Every site must appear exactly once.
    pub fn grouped(&self, groups: &[Vec<usize>]) -> Result<SpinModel> {
        let n = self.n_sites();
        let mut owner = vec![usize::MAX; n];
        for (g, members) in groups.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidBipartition(format!("party {g} is empty")));
            }
            for &s in members {
                if s >= n {
                    return Err(Error::InvalidBipartition(format!("site {s} out of range")));
                }
                if owner[s] != usize::MAX {
                    return Err(Error::InvalidBipartition(format!("site {s} appears twice")));
                }
                owner[s] = g;
            }
        }
        if let Some(s) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidBipartition(format!(
                "site {} is not assigned to a party",
                self.labels[s]
            )));
        }
        let dims: Vec<usize> = groups
            .iter()
            .map(|m| m.iter().map(|&s| self.sites[s]).product())
            .collect();
        let labels: Vec<String> = groups
            .iter()
            .map(|m| {
                let parts: Vec<&str> = m.iter().map(|&s| self.labels[s].as_str()).collect();
                if parts.iter().all(|p| p.chars().count() == 1) {
                    parts.concat()
                } else {
                    parts.join("+")
                }
            })
            .collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let mut factors = Vec::new();
            for (g, members) in groups.iter().enumerate() {
                let touched: Vec<&Factor> = term.factors.iter().filter(|f| owner[f.site] == g).collect();
                if touched.is_empty() {
                    continue;
                }
                if members.len() == 1 {
                    factors.push((g, touched[0].op.clone()));
                    continue;
                }
                let mut op = ComplexMatrix::identity(1);
                for &s in members {
                    let m = match touched.iter().find(|f| f.site == s) {
                        Some(f) => f.op.matrix(),
                        None => ComplexMatrix::identity(self.sites[s]),
                    };
                    op = op.kron(&m);
                }
                factors.push((g, SiteOp::Matrix(op)));
            }
            terms.push(OperatorTerm::new(term.coefficient, factors));
        }
        Ok(SpinModel::with_labels(self.name.clone(), dims, labels, terms)?.with_dim_cap(self.dim_cap))
    }

    /// Index of the site carrying `label`.
    pub fn site_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}
