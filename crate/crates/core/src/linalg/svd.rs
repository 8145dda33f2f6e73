use super::eig::{orthonormalize, MAX_SWEEPS};
use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Thin singular value decomposition M = U·diag(σ)·V†.
///
/// For an m×n input with k = min(m, n): `u` is m×k, `v` is n×k, and the k
/// singular values are sorted descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n, k) = (self.u.rows(), self.v.rows(), self.singular_values.len());
        ComplexMatrix::from_fn(m, n, |i, j| {
            (0..k)
                .map(|l| self.u[(i, l)] * self.singular_values[l] * self.v[(j, l)].conj())
                .sum()
        })
    }

    pub fn largest(&self) -> f64 {
        self.singular_values[0]
    }
}

/// SVD by one-sided (Hestenes) Jacobi orthogonalization of the columns.
///
/// Small singular values come out with absolute error near machine epsilon
/// times ‖M‖, so rank-deficient inputs report true zeros rather than the
/// √ε-sized values a Gram-matrix route would produce.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m.rows() < m.cols() {
        let t = svd(&m.adjoint())?;
        return Ok(Svd {
            singular_values: t.singular_values,
            u: t.v,
            v: t.u,
        });
    }

    let (rows, n) = (m.rows(), m.cols());
    let mut a: Vec<Vec<C64>> = (0..n).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    let orth_tol = (rows as f64 * f64::EPSILON).max(1e-15);
    // columns below this squared norm are rounding noise and cannot be
    // orthogonalized any further
    let noise_floor = (f64::EPSILON * m.frobenius_norm()).powi(2);

    let mut converged = false;
    let mut worst = 0.0;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        worst = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = a[p].iter().zip(&a[q]).map(|(x, y)| x.conj() * y).sum();
                let mag = gamma.norm();
                if mag < f64::MIN_POSITIVE
                    || alpha <= noise_floor
                    || beta <= noise_floor
                    || mag <= orth_tol * (alpha * beta).sqrt()
                {
                    continue;
                }
                worst = worst.max(mag / (alpha * beta).sqrt());
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * mag);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + zeta.hypot(1.0))
                } else {
                    -1.0 / (-zeta + zeta.hypot(1.0))
                };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                let phase_c = (gamma / mag).conj();
                rotate_pair(&mut a, p, q, c, s, phase_c);
                rotate_pair(&mut v, p, q, c, s, phase_c);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            residual: worst,
        });
    }

    let norms: Vec<f64> = a
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma_max = norms[order[0]];
    let mut singular_values = Vec::with_capacity(n);
    let mut us: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut vs: Vec<Vec<C64>> = Vec::with_capacity(n);
    for &j in &order {
        let sigma = norms[j];
        let mut vj = v[j].clone();
        let mut uj = a[j].clone();
        // phase-fix the right vector, carrying the same phase to the left one
        let vmax = vj.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(pivot) = vj.iter().position(|z| z.norm() >= vmax * (1.0 - 1e-9)) {
            let phase = vj[pivot].conj() / vj[pivot].norm();
            for z in vj.iter_mut() {
                *z *= phase;
            }
            for z in uj.iter_mut() {
                *z *= phase;
            }
        }
        let negligible = sigma == 0.0 || sigma * sigma <= noise_floor.max(sigma_max * sigma_max * 1e-300);
        if negligible {
            uj = vec![C64::new(0.0, 0.0); rows];
        } else {
            for z in uj.iter_mut() {
                *z /= sigma;
            }
        }
        singular_values.push(sigma);
        us.push(uj);
        vs.push(vj);
    }

    complete_orthonormal(&mut us);
    orthonormalize(&mut vs);

    Ok(Svd {
        singular_values,
        u: ComplexMatrix::from_columns(&us),
        v: ComplexMatrix::from_columns(&vs),
    })
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase_c: C64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yp = *y * phase_c;
        let xp = *x;
        *x = xp * c - yp * s;
        *y = xp * s + yp * c;
    }
}

/// Re-orthonormalizes the columns in order; columns that are zero or lose
/// their norm under projection are replaced by completions drawn from the
/// standard basis.
fn complete_orthonormal(cols: &mut [Vec<C64>]) {
    let dim = cols.first().map_or(0, |c| c.len());
    for i in 0..cols.len() {
        let (done, rest) = cols.split_at_mut(i);
        let ci = &mut rest[0];
        let before: f64 = ci.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut after = 0.0;
        if before > 0.0 {
            project_out(ci, done);
            after = ci.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        }
        if before == 0.0 || after < 0.5 * before {
            // the standard basis vector with the largest residual; at least
            // one has squared residual ≥ (dim − i)/dim
            let mut best = (Vec::new(), -1.0);
            for k in 0..dim {
                let mut e = vec![C64::new(0.0, 0.0); dim];
                e[k] = C64::new(1.0, 0.0);
                project_out(&mut e, done);
                project_out(&mut e, done);
                let norm = e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if norm > best.1 {
                    best = (e, norm);
                }
            }
            assert!(best.1 > 0.0, "cannot complete orthonormal set");
            *ci = best.0;
            after = best.1;
        }
        for z in ci.iter_mut() {
            *z /= after;
        }
    }
}

fn project_out(x: &mut [C64], basis: &[Vec<C64>]) {
    for _ in 0..2 {
        for u in basis {
            let proj: C64 = u.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
            for (xi, ui) in x.iter_mut().zip(u) {
                *xi -= proj * ui;
            }
        }
    }
}
