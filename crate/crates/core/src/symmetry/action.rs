//! The averaging operator `r(h, x)` and the action of automorphisms on
//! eigenspaces.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphon::Kernel;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::spectral::SpectralDecomposition;
use crate::symmetry::automorphism::{tuple_count, Permutation};

/// `r(h, x) = Σ_{x_1..x_n} Π_i b_{x_i} A[x, x_i] · h(x_1, ..., x_n)` for `h`
/// given on `[q]^n` (base-`q` layout, first coordinate most significant).
pub fn r_operator<T: Scalar>(w: &impl Kernel<T>, h: &[T], n: usize) -> Result<Vec<T>> {
    let q = w.steps();
    let size = tuple_count(q, n)?;
    if h.len() != size {
        return Err(Error::invalid(format!("h has {} values, expected {q}^{n} = {size}", h.len())));
    }
    let b = w.weights();
    Ok((0..q)
        .map(|x| {
            let c: Vec<T> = (0..q).map(|y| b[y].clone() * w.entry(x, y).clone()).collect();
            // contract the last coordinate n times
            let mut cur: Vec<T> = h.to_vec();
            for _ in 0..n {
                cur = cur
                    .chunks(q)
                    .map(|chunk| {
                        chunk
                            .iter()
                            .zip(&c)
                            .filter(|(v, cy)| !v.is_zero() && !cy.is_zero())
                            .fold(T::zero(), |acc, (v, cy)| acc + v.clone() * cy.clone())
                    })
                    .collect();
            }
            cur.pop().expect("fully contracted")
        })
        .collect())
}

/// `h ∘ σ^{⊗n}`: `(x_1..x_n) ↦ h(σ x_1, ..., σ x_n)`.
pub fn permute_tuple_function<T: Clone>(h: &[T], sigma: &Permutation, n: usize) -> Vec<T> {
    let q = sigma.len();
    let mut digits = vec![0; n];
    (0..h.len())
        .map(|t| {
            crate::symmetry::automorphism::decode(t, q, &mut digits);
            let image = digits.iter().fold(0, |acc, &x| acc * q + sigma.apply(x));
            h[image].clone()
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralActionReport {
    /// Eigenvalue of each block.
    pub eigenvalues: Vec<f64>,
    /// `C[s][r] = <f_r ∘ σ, f_s>_π` for each eigenspace.
    pub blocks: Vec<Matrix<f64>>,
    /// Largest π-norm of `f_r ∘ σ` minus its projection onto its eigenspace.
    pub max_residual: f64,
    /// Largest entry of `|CᵀC - I|` over all blocks.
    pub max_orthogonality_defect: f64,
}

/// Expresses each permuted eigenfunction in its own eigenspace.
pub fn spectral_action_check(dec: &SpectralDecomposition, sigma: &Permutation) -> Result<SpectralActionReport> {
    let q = dec.steps();
    if sigma.len() != q {
        return Err(Error::invalid("permutation degree differs from the number of steps"));
    }
    let b = &dec.weights;
    let inner = |f: &[f64], g: &[f64]| -> f64 { (0..q).map(|x| b[x] * f[x] * g[x]).sum() };
    let mut report = SpectralActionReport {
        eigenvalues: Vec::new(),
        blocks: Vec::new(),
        max_residual: 0.0,
        max_orthogonality_defect: 0.0,
    };
    for space in dec.eigenspaces() {
        let fs: Vec<Vec<f64>> = space.iter().map(|&r| dec.eigenfunction(r)).collect();
        let d = space.len();
        let mut block = Matrix::filled(d, d, 0.0);
        for (ri, f) in fs.iter().enumerate() {
            let g: Vec<f64> = (0..q).map(|x| f[sigma.apply(x)]).collect();
            let mut residual = g.clone();
            for (si, fs_s) in fs.iter().enumerate() {
                let c = inner(&g, fs_s);
                block[(si, ri)] = c;
                for x in 0..q {
                    residual[x] -= c * fs_s[x];
                }
            }
            report.max_residual = report.max_residual.max(inner(&residual, &residual).sqrt());
        }
        for i in 0..d {
            for j in 0..d {
                let dot: f64 = (0..d).map(|s| block[(s, i)] * block[(s, j)]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                report.max_orthogonality_defect = report.max_orthogonality_defect.max((dot - target).abs());
            }
        }
        report.eigenvalues.push(dec.eigenvalues[space[0]]);
        report.blocks.push(block);
    }
    Ok(report)
}
