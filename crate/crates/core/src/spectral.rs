//! Spectral decomposition of the integral operator of a step graphon.
//!
//! With `D = diag(b)`, the operator `(T f)(x) = Σ_y A[x,y] b_y f(y)` is
//! similar to the symmetric matrix `D^{1/2} A D^{1/2}`; its eigenvectors `u`
//! give π-orthonormal eigenfunctions `f = D^{-1/2} u`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphon::{Kernel, StepKernel};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Eigenvalues closer than this (relative to the spectral radius) are
/// treated as one eigenvalue.
const CLUSTER_TOL: f64 = 1e-8;
/// Distance below which a threshold counts as hitting an eigenvalue.
pub const COLLISION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct SpectralDecomposition {
    pub weights: Vec<f64>,
    /// Nonzero eigenvalues, by decreasing absolute value; on ties the
    /// positive one comes first.
    pub eigenvalues: Vec<f64>,
    /// `q × r`; column `r` is the eigenfunction of `eigenvalues[r]`.
    pub eigenfunctions: Matrix<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralEmbedding {
    pub dimension: usize,
    pub eigenvalues: Vec<f64>,
    /// `points[x] = (f_1(x), ..., f_d(x))`.
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

pub fn default_rank_tol(q: usize) -> f64 {
    1e-10 * q as f64
}

/// Decomposes `T_W`, discarding eigenvalues with `|λ| <= rank_tol`
/// (default `1e-10 q`).
pub fn decompose<T: Scalar>(w: &impl Kernel<T>, rank_tol: Option<f64>) -> SpectralDecomposition {
    let q = w.steps();
    let rank_tol = rank_tol.unwrap_or_else(|| default_rank_tol(q));
    let b: Vec<f64> = w.weights().iter().map(Scalar::to_f64).collect();
    let sqrt_b: Vec<f64> = b.iter().map(|x| x.sqrt()).collect();
    let a = w.matrix().to_f64();
    let s = DMatrix::from_fn(q, q, |i, j| {
        let v = sqrt_b[i] * a[(i, j)] * sqrt_b[j];
        // symmetrize exactly so tiny input asymmetry does not leak in
        (v + sqrt_b[j] * a[(j, i)] * sqrt_b[i]) / 2.0
    });
    let eig = SymmetricEigen::new(s);
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    let mut kept: Vec<(f64, DVector<f64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, l)| l.abs() > rank_tol)
        .map(|(i, &l)| (l, eig.eigenvectors.column(i).into_owned()))
        .collect();
    kept.sort_by(|x, y| y.0.total_cmp(&x.0));

    // group numerically equal eigenvalues, replace each eigenspace basis by a
    // canonical one
    let mut groups: Vec<(f64, Vec<DVector<f64>>)> = Vec::new();
    for (l, v) in kept {
        match groups.last_mut() {
            Some((rep, vs)) if (*rep - l).abs() <= CLUSTER_TOL * scale => {
                let n = vs.len() as f64;
                *rep = (*rep * n + l) / (n + 1.0);
                vs.push(v);
            }
            _ => groups.push((l, vec![v])),
        }
    }
    groups.sort_by(|x, y| {
        let (ax, ay) = (x.0.abs(), y.0.abs());
        if (ax - ay).abs() <= CLUSTER_TOL * scale {
            y.0.total_cmp(&x.0)
        } else {
            ay.total_cmp(&ax)
        }
    });
    let mut eigenvalues = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (l, vs) in groups {
        for u in canonical_basis(&vs, q) {
            let mut f: Vec<f64> = (0..q).map(|x| if b[x] > 0.0 { u[x] / sqrt_b[x] } else { 0.0 }).collect();
            // zero-weight steps: f(x) = λ^{-1} Σ_y A[x,y] b_y f(y)
            for x in (0..q).filter(|&x| b[x] <= 0.0) {
                f[x] = (0..q).map(|y| a[(x, y)] * b[y] * f[y]).sum::<f64>() / l;
            }
            fix_sign(&mut f);
            eigenvalues.push(l);
            columns.push(f);
        }
    }
    let r = columns.len();
    let eigenfunctions = Matrix::from_fn(q, r, |x, c| columns[c][x]);
    SpectralDecomposition { weights: b, eigenvalues, eigenfunctions }
}

/// Orthonormal basis of `span(vs)` obtained by Gram–Schmidt on the
/// projections of the standard basis vectors, so it depends only on the
/// subspace.
fn canonical_basis(vs: &[DVector<f64>], q: usize) -> Vec<DVector<f64>> {
    if vs.len() == 1 {
        return vs.to_vec();
    }
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for x in 0..q {
        if basis.len() == vs.len() {
            break;
        }
        let mut p = DVector::zeros(q);
        for v in vs {
            p += v * v[x];
        }
        for e in &basis {
            let c = e.dot(&p);
            p -= e * c;
        }
        let norm = p.norm();
        if norm > 1e-6 {
            basis.push(p / norm);
        }
    }
    basis
}

/// Makes the entry of largest absolute value positive (first such entry on
/// ties).
fn fix_sign(f: &mut [f64]) {
    let max = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(pos) = f.iter().position(|v| (v.abs() - max).abs() <= 1e-9 * max.max(1.0)) {
        if f[pos] < 0.0 {
            f.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

impl SpectralDecomposition {
    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn steps(&self) -> usize {
        self.weights.len()
    }

    pub fn eigenfunction(&self, r: usize) -> Vec<f64> {
        (0..self.steps()).map(|x| self.eigenfunctions[(x, r)]).collect()
    }

    /// `Σ_{|λ_r| >= threshold} λ_r^m f_r(x) f_r(y)`.
    pub fn partial_power_entry(&self, m: u32, threshold: f64, x: usize, y: usize) -> f64 {
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, l)| l.abs() >= threshold)
            .map(|(r, l)| l.powi(m as i32) * self.eigenfunctions[(x, r)] * self.eigenfunctions[(y, r)])
            .sum()
    }

    /// `Σ_r λ_r^m f_r(x) f_r(y)`, the kernel of `T_W^m`.
    pub fn power_entry(&self, m: u32, x: usize, y: usize) -> f64 {
        self.partial_power_entry(m, 0.0, x, y)
    }

    /// Groups of column indices sharing one eigenvalue.
    pub fn eigenspaces(&self) -> Vec<Vec<usize>> {
        let scale = self.eigenvalues.iter().fold(1.0f64, |m, l| m.max(l.abs()));
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (r, l) in self.eigenvalues.iter().enumerate() {
            match out.last_mut() {
                Some(g) if (self.eigenvalues[g[0]] - l).abs() <= CLUSTER_TOL * scale => g.push(r),
                _ => out.push(vec![r]),
            }
        }
        out
    }

    fn check_threshold(&self, threshold: f64) -> Result<()> {
        if !(threshold > 0.0) {
            return Err(Error::invalid("threshold must be positive"));
        }
        if let Some(&l) = self.eigenvalues.iter().find(|l| (l.abs() - threshold).abs() <= COLLISION_TOL) {
            return Err(Error::EigenvalueCollision { threshold, eigenvalue: l });
        }
        Ok(())
    }

    /// `[W]_λ`, the partial spectral sum over `|λ_r| >= threshold`.
    pub fn truncate(&self, threshold: f64) -> Result<StepKernel<f64>> {
        self.check_threshold(threshold)?;
        let q = self.steps();
        let m = Matrix::from_fn(q, q, |x, y| self.partial_power_entry(1, threshold, x, y));
        StepKernel::new(self.weights.clone(), m)
    }

    /// Steps mapped to `(f_1(x), ..., f_d(x))` over the eigenvalues with
    /// `|λ| >= threshold`.
    pub fn embedding(&self, threshold: f64) -> Result<SpectralEmbedding> {
        self.check_threshold(threshold)?;
        let cols: Vec<usize> = (0..self.rank()).filter(|&r| self.eigenvalues[r].abs() >= threshold).collect();
        Ok(self.embed_columns(&cols))
    }

    /// Embedding with every nonzero eigenvalue.
    pub fn full_embedding(&self) -> SpectralEmbedding {
        let cols: Vec<usize> = (0..self.rank()).collect();
        self.embed_columns(&cols)
    }

    fn embed_columns(&self, cols: &[usize]) -> SpectralEmbedding {
        SpectralEmbedding {
            dimension: cols.len(),
            eigenvalues: cols.iter().map(|&r| self.eigenvalues[r]).collect(),
            points: (0..self.steps())
                .map(|x| cols.iter().map(|&r| self.eigenfunctions[(x, r)]).collect())
                .collect(),
            weights: self.weights.clone(),
        }
    }
}

impl SpectralEmbedding {
    /// `Σ_i λ_i p_x[i] p_y[i]`.
    pub fn kernel_value(&self, x: usize, y: usize) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.points[x])
            .zip(&self.points[y])
            .map(|((l, a), b)| l * a * b)
            .sum()
    }

    /// True when distinct steps land on points at distance above `tol`.
    pub fn is_injective(&self, tol: f64) -> bool {
        let q = self.points.len();
        (0..q).all(|x| {
            (x + 1..q).all(|y| {
                let d2: f64 = self.points[x].iter().zip(&self.points[y]).map(|(a, b)| (a - b).powi(2)).sum();
                d2.sqrt() > tol
            })
        })
    }

    /// Support of the pushforward measure: distinct points (within `tol`)
    /// with their total weights, in first-occurrence order.
    pub fn support(&self, tol: f64) -> Vec<(Vec<f64>, f64)> {
        let mut out: Vec<(Vec<f64>, f64)> = Vec::new();
        for (p, w) in self.points.iter().zip(&self.weights) {
            match out.iter_mut().find(|(o, _)| o.iter().zip(p).all(|(a, b)| (a - b).abs() <= tol)) {
                Some((_, total)) => *total += w,
                None => out.push((p.clone(), *w)),
            }
        }
        out
    }
}

/// Convenience wrapper: decompose and truncate.
pub fn truncate<T: Scalar>(w: &impl Kernel<T>, threshold: f64) -> Result<StepKernel<f64>> {
    decompose(w, None).truncate(threshold)
}

/// Convenience wrapper: decompose and embed.
pub fn embedding<T: Scalar>(w: &impl Kernel<T>, threshold: f64) -> Result<SpectralEmbedding> {
    decompose(w, None).embedding(threshold)
}
