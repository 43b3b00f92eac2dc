//! Point metrics on the steps of a graphon, twin merging and the `U_n`
//! kernel recovery.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphon::{l1_distance, operator_product, Kernel, StepGraphon, StepKernel};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    /// Neighborhood distance: weighted L1 distance of kernel rows.
    R,
    /// Squared L2 distance of kernel rows (kept squared so it stays exact).
    L2Squared,
    /// Similarity distance: the neighborhood distance of `W ∘ W`.
    RBar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix<T> {
    pub kind: MetricKind,
    pub values: Matrix<T>,
}

impl<T: Scalar> MetricMatrix<T> {
    pub fn get(&self, x: usize, y: usize) -> &T {
        &self.values[(x, y)]
    }

    pub fn size(&self) -> usize {
        self.values.rows()
    }

    /// First triple `(x, y, z)` with `m(x,z) > m(x,y) + m(y,z)`, if any.
    /// For squared distances the inequality is checked on the square roots.
    pub fn triangle_violation(&self, tol: f64) -> Option<(usize, usize, usize)> {
        let n = self.size();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (a, b, c) = (self.get(x, z), self.get(x, y), self.get(y, z));
                    let ok = match self.kind {
                        MetricKind::L2Squared => sqrt_le_sum(a, b, c, tol),
                        _ => a.approx_le(&(b.clone() + c.clone()), tol),
                    };
                    if !ok {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_symmetric_with_zero_diagonal(&self, tol: f64) -> bool {
        self.values.is_symmetric(tol) && (0..self.size()).all(|x| self.get(x, x).approx_eq(&T::zero(), tol))
    }
}

/// `sqrt(a) <= sqrt(b) + sqrt(c)` for nonnegative `a, b, c`, decided without
/// square roots: it holds iff `a - b - c <= 0` or `(a - b - c)^2 <= 4bc`.
pub fn sqrt_le_sum<T: Scalar>(a: &T, b: &T, c: &T, tol: f64) -> bool {
    let s = a.clone() - b.clone() - c.clone();
    if s.approx_le(&T::zero(), tol) {
        return true;
    }
    let four = T::from_int(4);
    (s.clone() * s).approx_le(&(four * b.clone() * c.clone()), tol)
}

fn row_metric<T: Scalar>(w: &impl Kernel<T>, kind: MetricKind, dist: impl Fn(&T, &T) -> T) -> MetricMatrix<T> {
    let q = w.steps();
    let b = w.weights();
    let mut values = Matrix::zeros(q, q);
    for x in 0..q {
        for y in x + 1..q {
            let mut total = T::zero();
            for (z, bz) in b.iter().enumerate() {
                let d = dist(w.entry(x, z), w.entry(y, z));
                if !d.is_zero() {
                    total = total + bz.clone() * d;
                }
            }
            values[(x, y)] = total.clone();
            values[(y, x)] = total;
        }
    }
    MetricMatrix { kind, values }
}

/// `r(x, y) = Σ_z b_z |A[x,z] - A[y,z]|`.
pub fn neighborhood_metric<T: Scalar>(w: &impl Kernel<T>) -> MetricMatrix<T> {
    row_metric(w, MetricKind::R, |a, b| (a.clone() - b.clone()).abs())
}

/// `d(x, y)^2 = Σ_z b_z (A[x,z] - A[y,z])^2`.
pub fn l2_squared_metric<T: Scalar>(w: &impl Kernel<T>) -> MetricMatrix<T> {
    row_metric(w, MetricKind::L2Squared, |a, b| {
        let d = a.clone() - b.clone();
        d.clone() * d
    })
}

/// `d(x, y)` itself, as floats.
pub fn l2_metric<T: Scalar>(w: &impl Kernel<T>) -> Matrix<f64> {
    l2_squared_metric(w).values.map(|v| v.to_f64().max(0.0).sqrt())
}

/// `r̄ = r_{W∘W}`.
pub fn similarity_metric<T: Scalar>(w: &impl Kernel<T>) -> MetricMatrix<T> {
    let sq = operator_product(w, w).expect("a kernel shares its own weights");
    MetricMatrix { kind: MetricKind::RBar, values: neighborhood_metric(&sq).values }
}

/// A single entry `r̄(x, y)` without forming `W ∘ W`:
/// `Σ_z b_z |Σ_w (A[x,w] - A[y,w]) b_w A[w,z]|`, iterating only over nonzero
/// kernel entries. Suited to graphons with many steps and sparse kernels.
pub fn similarity_distance<T: Scalar>(w: &impl Kernel<T>, x: usize, y: usize) -> T {
    let q = w.steps();
    let b = w.weights();
    let mut acc = vec![T::zero(); q];
    for m in 0..q {
        let diff = w.entry(x, m).clone() - w.entry(y, m).clone();
        if diff.is_zero() || b[m].is_zero() {
            continue;
        }
        let coef = diff * b[m].clone();
        for (z, slot) in acc.iter_mut().enumerate() {
            let a = w.entry(m, z);
            if !a.is_zero() {
                *slot = slot.clone() + coef.clone() * a.clone();
            }
        }
    }
    acc.into_iter()
        .zip(b)
        .filter(|(v, _)| !v.is_zero())
        .fold(T::zero(), |total, (v, bz)| total + bz.clone() * v.abs())
}

/// Result of twin merging.
#[derive(Debug, Clone, PartialEq)]
pub struct Purified<T> {
    pub graphon: StepGraphon<T>,
    /// For each original step, its merged step; `None` for dropped
    /// zero-weight steps.
    pub partition: Vec<Option<usize>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut cur = x;
        while self.0[cur] != root {
            let next = self.0[cur];
            self.0[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Merges twin steps (neighborhood distance at most `tol`; exactly zero in
/// exact mode) and drops zero-weight steps. The output has strictly
/// positive weights and pairwise distinct kernel rows.
pub fn merge_twins<T: Scalar>(w: &StepGraphon<T>, tol: f64) -> Result<Purified<T>> {
    let mut current = w.clone();
    let mut partition: Vec<Option<usize>> = (0..w.steps()).map(Some).collect();
    loop {
        let (next, map) = merge_once(&current, tol)?;
        let changed = next.steps() != current.steps();
        for p in partition.iter_mut() {
            *p = p.and_then(|s| map[s]);
        }
        current = next;
        if !changed {
            return Ok(Purified { graphon: current, partition });
        }
    }
}

fn merge_once<T: Scalar>(w: &StepGraphon<T>, tol: f64) -> Result<(StepGraphon<T>, Vec<Option<usize>>)> {
    let q = w.steps();
    let b = w.weights();
    let live: Vec<usize> = (0..q).filter(|&x| b[x].is_positive()).collect();
    let r = neighborhood_metric(w);
    let close = |x: usize, y: usize| r.get(x, y).approx_le(&T::zero(), tol);
    let mut uf = UnionFind((0..q).collect());
    for (i, &x) in live.iter().enumerate() {
        for &y in &live[i + 1..] {
            if close(x, y) {
                uf.union(x, y);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of = vec![None; q];
    for &x in &live {
        let root = uf.find(x);
        let g = match group_of[root] {
            Some(g) => g,
            None => {
                groups.push(Vec::new());
                group_of[root] = Some(groups.len() - 1);
                groups.len() - 1
            }
        };
        groups[g].push(x);
        group_of[x] = Some(g);
    }
    for g in &groups {
        for (i, &x) in g.iter().enumerate() {
            for &y in &g[i + 1..] {
                if !close(x, y) {
                    return Err(Error::invalid(format!(
                        "twin tolerance {tol} is not transitive: steps {x} and {y} are linked \
                         through a chain of twins but lie at distance {}",
                        r.get(x, y)
                    )));
                }
            }
        }
    }
    let weights: Vec<T> = groups
        .iter()
        .map(|g| g.iter().fold(T::zero(), |acc, &x| acc + b[x].clone()))
        .collect();
    let p = groups.len();
    let kernel = Matrix::from_fn(p, p, |g, h| {
        let mut total = T::zero();
        for &x in &groups[g] {
            for &y in &groups[h] {
                total = total + b[x].clone() * b[y].clone() * w.entry(x, y).clone();
            }
        }
        total / (weights[g].clone() * weights[h].clone())
    });
    let map: Vec<Option<usize>> = (0..q).map(|x| if b[x].is_positive() { group_of[x] } else { None }).collect();
    Ok((StepGraphon::new(weights, kernel)?, map))
}

/// Pure: positive weights and no two steps within `tol` of each other.
pub fn is_pure<T: Scalar>(w: &StepGraphon<T>, tol: f64) -> bool {
    if w.weights().iter().any(|b| !b.is_positive()) {
        return false;
    }
    let r = neighborhood_metric(w);
    let q = w.steps();
    (0..q).all(|x| (x + 1..q).all(|y| !r.get(x, y).approx_le(&T::zero(), tol)))
}

#[derive(Debug, Clone)]
pub struct UnApproximation {
    pub n: u32,
    pub kernel: StepKernel<f64>,
    pub l1_error: f64,
    /// `Σ_y b_y |U_n(x,y) - W(x,y)|` for each step `x`.
    pub row_errors: Vec<f64>,
}

/// `U_n(x,y) = Σ_u b_u (1 - d(x,u)^2)^n A[u,y] / Σ_u b_u (1 - d(x,u)^2)^n`.
pub fn un_approximation<T: Scalar>(w: &StepGraphon<T>, n: u32) -> Result<UnApproximation> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if !is_pure(w, T::default_tol()) {
        return Err(Error::NotPure("merge twins before recovering the kernel".into()));
    }
    let q = w.steps();
    let d2 = l2_squared_metric(w).values.to_f64();
    let b: Vec<f64> = w.weights().iter().map(Scalar::to_f64).collect();
    let a = w.matrix().to_f64();
    let mut u = Matrix::filled(q, q, 0.0);
    for x in 0..q {
        let coef: Vec<f64> = (0..q).map(|v| b[v] * (1.0 - d2[(x, v)]).max(0.0).powi(n as i32)).collect();
        let den: f64 = coef.iter().sum();
        for y in 0..q {
            let num: f64 = coef.iter().enumerate().map(|(v, c)| c * a[(v, y)]).sum();
            u[(x, y)] = num / den;
        }
    }
    let kernel = StepKernel::new(b.clone(), u)?;
    let row_errors: Vec<f64> = (0..q)
        .map(|x| (0..q).map(|y| b[y] * (kernel.entry(x, y) - a[(x, y)]).abs()).sum())
        .collect();
    let l1_error = l1_distance(&kernel, &w.to_f64())?;
    Ok(UnApproximation { n, kernel, l1_error, row_errors })
}
