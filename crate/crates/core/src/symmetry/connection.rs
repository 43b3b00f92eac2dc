//! Connection matrices, graph-algebra dimensions and the node-transitivity
//! report.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::graphon::{Kernel, StepGraphon};
use crate::graphs::{enumerate_klabeled, LabeledGraph};
use crate::homdensity::DensityEngine;
use crate::matrix::Matrix;
use crate::metrics::merge_twins;
use crate::scalar::{Mode, Scalar};
use crate::symmetry::automorphism::{automorphisms, decode, tuple_count};
use crate::symmetry::closure::closure_dimension;
use crate::symmetry::linalg::{is_psd, rank, SpanBuilder, FLOAT_RANK_TOL};
use crate::symmetry::oracle::{density_table, signature_partition_from_table};

#[derive(Debug, Clone)]
pub struct ConnectionMatrix<T> {
    pub k: usize,
    /// Number of anchor tuples `q^k`, an upper bound on the rank.
    pub anchors: usize,
    pub graphs: Vec<LabeledGraph>,
    /// `M[G,H] = t(unlabel(GH), W)`.
    pub matrix: Matrix<T>,
}

impl<T: Scalar> ConnectionMatrix<T> {
    /// Exact rank in exact mode, certified modulo a prime once it reaches
    /// `min(|graphs|, q^k)`; singular-value rank in float mode.
    pub fn rank(&self) -> usize {
        if T::MODE == Mode::Float {
            return rank(&self.matrix, FLOAT_RANK_TOL);
        }
        let bound = self.anchors.min(self.matrix.rows());
        let mut span = SpanBuilder::new(self.matrix.cols());
        for i in 0..self.matrix.rows() {
            span.push(self.matrix.row(i).to_vec());
            if span.certified(bound) {
                return bound;
            }
        }
        span.rank(FLOAT_RANK_TOL)
    }

    pub fn is_psd(&self) -> bool {
        is_psd(&self.matrix, 1e-9)
    }
}

/// Bitmask of the label-label edges of a graph, over pairs `(i, j)` with
/// `i < j < k`.
fn label_edge_mask(g: &LabeledGraph) -> u64 {
    let k = g.label_count();
    g.edges()
        .iter()
        .filter(|&&(u, v)| u < k && v < k)
        .fold(0u64, |m, &(u, v)| m | 1 << (u * k + v))
}

/// Connection matrix over all `k`-labeled simple graphs with at most
/// `max_nodes` nodes.
///
/// Entries are assembled from restricted densities: labeled nodes pinned to
/// an anchor `a` split `unlabel(GH)` into the label-label edges of `G ∪ H`
/// and the two remaining parts, so
/// `M[G,H] = Σ_a Π_i b_{a_i} Π_{ij ∈ E_lab} A[a_i,a_j] t'_a(G) t'_a(H)`
/// where `t'` ignores label-label edges.
pub fn connection_matrix<T: Scalar>(
    w: &impl Kernel<T>,
    k: usize,
    max_nodes: usize,
    independent_only: bool,
) -> Result<ConnectionMatrix<T>> {
    let graphs = enumerate_klabeled(k, max_nodes, independent_only)?;
    let q = w.steps();
    let size = tuple_count(q, k)?;
    let engine = DensityEngine::new(w);
    let stripped: Vec<LabeledGraph> = graphs.iter().map(LabeledGraph::without_label_edges).collect();
    let table = density_table(&engine, &stripped)?;
    let masks: Vec<u64> = graphs.iter().map(label_edge_mask).collect();

    let mut weight_cache: HashMap<u64, Vec<T>> = HashMap::new();
    let mut digits = vec![0; k];
    for i in 0..graphs.len() {
        for j in i..graphs.len() {
            let mask = masks[i] | masks[j];
            weight_cache.entry(mask).or_insert_with(|| {
                (0..size)
                    .map(|t| {
                        decode(t, q, &mut digits);
                        let mut v = digits.iter().fold(T::one(), |acc, &x| acc * w.weights()[x].clone());
                        for u in 0..k {
                            for x in u + 1..k {
                                if mask >> (u * k + x) & 1 == 1 {
                                    v = v * w.entry(digits[u], digits[x]).clone();
                                }
                            }
                        }
                        v
                    })
                    .collect()
            });
        }
    }
    let n = graphs.len();
    let rows: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let weights = &weight_cache[&(masks[i] | masks[j])];
                    let mut total = T::zero();
                    for t in 0..size {
                        let (a, b) = (&table[i][t], &table[j][t]);
                        if a.is_zero() || b.is_zero() || weights[t].is_zero() {
                            continue;
                        }
                        total = total + weights[t].clone() * a.clone() * b.clone();
                    }
                    total
                })
                .collect()
        })
        .collect();
    let matrix = Matrix::from_rows(rows).unwrap_or_else(|| Matrix::zeros(0, 0));
    Ok(ConnectionMatrix { k, anchors: size, graphs, matrix })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraDimension {
    /// Dimension of the algebra generated by the functions under gluing,
    /// which multiplies them pointwise.
    pub dimension: usize,
    /// Dimension of the linear span of the enumerated functions alone.
    pub span_dimension: usize,
    /// Number of tuple classes not separated by any enumerated graph; an
    /// upper bound on both dimensions.
    pub signature_classes: usize,
    pub graphs_used: usize,
}

/// Dimensions of the span of the functions `a ↦ t_a(F, W)` on `[q]^k` over
/// the enumerated graphs `F`, and of the algebra they generate.
///
/// Gluing two `k`-labeled graphs multiplies their functions, so the algebra
/// is the span over all gluing products of enumerated graphs. Every such
/// function is constant on joint-signature classes, so columns are
/// compressed to one representative per class and the class count bounds
/// both dimensions; building stops as soon as that bound is reached.
pub fn algebra_dimension<T: Scalar>(
    w: &impl Kernel<T>,
    k: usize,
    max_nodes: usize,
    independent_only: bool,
) -> Result<AlgebraDimension> {
    let size = tuple_count(w.steps(), k)?;
    let graphs = enumerate_klabeled(k, max_nodes, independent_only)?;
    let engine = DensityEngine::new(w);
    let table = density_table(&engine, &graphs)?;
    let classes = signature_partition_from_table(&table, size);
    let mut reps = vec![usize::MAX; classes.count];
    for (t, &c) in classes.id.iter().enumerate() {
        if reps[c] == usize::MAX {
            reps[c] = t;
        }
    }
    let compressed: Vec<Vec<T>> = table.iter().map(|row| reps.iter().map(|&t| row[t].clone()).collect()).collect();
    let mut span = SpanBuilder::new(classes.count);
    let mut used = 0;
    for row in &compressed {
        span.push(row.clone());
        used += 1;
        if span.certified(classes.count) {
            break;
        }
    }
    let span_dimension = span.rank(FLOAT_RANK_TOL);
    let dimension = closure_dimension(&compressed, classes.count, FLOAT_RANK_TOL);
    Ok(AlgebraDimension { dimension, span_dimension, signature_classes: classes.count, graphs_used: used })
}

#[derive(Debug, Clone, Serialize)]
pub struct TransitivityReport {
    /// Steps of the purified graphon the verdicts refer to.
    pub purified_steps: usize,
    pub max_nodes: usize,
    /// (i) the automorphism group acts transitively on steps.
    pub aut_transitive: bool,
    /// (ii) every `t_x(F, W)` is constant in `x`.
    pub densities_constant: bool,
    /// (iii) the 1-labeled algebra has dimension one.
    pub algebra_dimension_one: bool,
    /// (iv) the first connection matrix has rank one.
    pub connection_rank_one: bool,
    /// (v) `t(F²) t(H²) = t(FH)²` for all enumerated pairs.
    pub product_identity: bool,
    /// `max |t(F²) t(H²) - t(FH)²|` as a float.
    pub product_residual: f64,
    pub verdicts_agree: bool,
}

/// Evaluates the five equivalent node-transitivity conditions on the
/// purified graphon.
pub fn node_transitivity_report<T: Scalar>(w: &StepGraphon<T>, max_nodes: usize) -> Result<TransitivityReport> {
    let pure = merge_twins(w, T::default_tol())?.graphon;
    let aut_transitive = automorphisms(&pure)?.is_transitive();
    let tol = T::default_tol();

    let conn = connection_matrix(&pure, 1, max_nodes, false)?;
    let engine = DensityEngine::new(&pure);
    let table = density_table(&engine, &conn.graphs)?;
    let densities_constant = table.iter().all(|row| row.iter().all(|v| v.approx_eq(&row[0], tol)));
    let algebra_dimension_one = algebra_dimension(&pure, 1, max_nodes, false)?.dimension == 1;
    let connection_rank_one = conn.rank() == 1;
    let (product_identity, product_residual) = product_identity(&conn.matrix, tol);

    let verdicts = [aut_transitive, densities_constant, algebra_dimension_one, connection_rank_one, product_identity];
    Ok(TransitivityReport {
        purified_steps: pure.steps(),
        max_nodes,
        aut_transitive,
        densities_constant,
        algebra_dimension_one,
        connection_rank_one,
        product_identity,
        product_residual,
        verdicts_agree: verdicts.iter().all(|&v| v == verdicts[0]),
    })
}

/// Checks `M[F,F] M[H,H] = M[F,H]^2` for all pairs of a 1-labeled connection
/// matrix, returning the verdict and the largest residual.
pub fn product_identity<T: Scalar>(m: &Matrix<T>, tol: f64) -> (bool, f64) {
    let n = m.rows();
    let mut holds = true;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let lhs = m[(i, i)].clone() * m[(j, j)].clone();
            let rhs = m[(i, j)].clone() * m[(i, j)].clone();
            if !lhs.approx_eq(&rhs, tol) {
                holds = false;
            }
            worst = worst.max((lhs - rhs).abs().to_f64());
        }
    }
    (holds, worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphon::generators::*;
    use crate::homdensity::t;
    use crate::scalar::{rat, Rational};

    fn graphon(g: &LabeledGraph) -> StepGraphon<Rational> {
        StepGraphon::from_simple_graph(g).unwrap()
    }

    #[test]
    fn entries_match_glued_densities() {
        let w = random_rational(3, 4, 2).unwrap();
        for (k, indep) in [(1, false), (2, false), (2, true)] {
            let c = connection_matrix(&w, k, 3, indep).unwrap();
            for (i, g) in c.graphs.iter().enumerate() {
                for (j, h) in c.graphs.iter().enumerate() {
                    let glued = g.glue_product(h).unwrap().unlabel();
                    assert_eq!(c.matrix[(i, j)], t(&glued, &w).unwrap(), "{g:?} {h:?}");
                }
            }
            assert!(c.is_psd());
        }
    }

    #[test]
    fn ranks_of_examples() {
        assert_eq!(connection_matrix(&constant(rat(1, 3)).unwrap(), 1, 2, false).unwrap().rank(), 1);
        assert_eq!(connection_matrix(&graphon(&LabeledGraph::petersen()), 1, 4, false).unwrap().rank(), 1);
        assert_eq!(connection_matrix(&graphon(&LabeledGraph::path(3)), 1, 3, false).unwrap().rank(), 2);
    }

    #[test]
    fn algebra_dimensions() {
        assert_eq!(algebra_dimension(&constant(rat(1, 2)).unwrap(), 1, 4, false).unwrap().dimension, 1);
        assert_eq!(algebra_dimension(&graphon(&LabeledGraph::path(3)), 1, 4, false).unwrap().dimension, 2);
        let c5 = algebra_dimension(&graphon(&LabeledGraph::cycle(5)), 2, 5, true).unwrap();
        assert_eq!(c5.dimension, 3);
        assert_eq!(c5.signature_classes, 3);
    }

    #[test]
    fn transitivity_reports() {
        let r = node_transitivity_report(&graphon(&LabeledGraph::petersen()), 4).unwrap();
        assert!(r.aut_transitive && r.densities_constant && r.algebra_dimension_one);
        assert!(r.connection_rank_one && r.product_identity && r.verdicts_agree);
        assert_eq!(r.product_residual, 0.0);
        let r = node_transitivity_report(&graphon(&LabeledGraph::path(3)), 4).unwrap();
        assert_eq!(r.purified_steps, 2);
        assert!(!r.aut_transitive && !r.densities_constant && !r.algebra_dimension_one);
        assert!(!r.connection_rank_one && !r.product_identity && r.verdicts_agree);
    }
}
