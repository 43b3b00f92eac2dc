//! Separating anchor tuples by restricted homomorphism densities.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphon::Kernel;
use crate::graphs::{enumerate_klabeled, LabeledGraph};
use crate::homdensity::DensityEngine;
use crate::scalar::Scalar;
use crate::symmetry::automorphism::{encode, tuple_count};

/// Default pattern size for `k`-tuples: `k + 4` nodes.
pub fn default_max_nodes(k: usize) -> usize {
    k + 4
}

/// Restricted densities of each graph at every anchor tuple; row `i`
/// belongs to `graphs[i]`.
pub fn density_table<T: Scalar>(engine: &DensityEngine<T>, graphs: &[LabeledGraph]) -> Result<Vec<Vec<T>>> {
    graphs.par_iter().map(|f| engine.all_anchors(f)).collect()
}

/// Partition of `[q]^k` by the joint values of a list of functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignaturePartition {
    pub id: Vec<usize>,
    pub count: usize,
    pub graphs_checked: usize,
}

/// Splits classes by one more function.
pub(crate) fn refine<T: Scalar>(id: &[usize], values: &[T], tol: f64) -> (Vec<usize>, usize) {
    let mut seen: std::collections::HashMap<(usize, T::Key), usize> = std::collections::HashMap::new();
    let next: Vec<usize> = id
        .iter()
        .zip(values)
        .map(|(&c, v)| {
            let n = seen.len();
            *seen.entry((c, v.key(tol))).or_insert(n)
        })
        .collect();
    (next, seen.len())
}

pub fn signature_partition_from_table<T: Scalar>(table: &[Vec<T>], size: usize) -> SignaturePartition {
    let tol = T::default_tol();
    let mut id = vec![0; size];
    let mut count = usize::from(size > 0);
    for row in table {
        (id, count) = refine(&id, row, tol);
    }
    SignaturePartition { id, count, graphs_checked: table.len() }
}

/// Classes of `k`-tuples that no enumerated `k`-labeled graph with at most
/// `max_nodes` nodes separates.
pub fn signature_partition<T: Scalar>(
    w: &impl Kernel<T>,
    k: usize,
    max_nodes: usize,
    independent_only: bool,
) -> Result<SignaturePartition> {
    let size = tuple_count(w.steps(), k)?;
    let graphs = enumerate_klabeled(k, max_nodes, independent_only)?;
    let engine = DensityEngine::new(w);
    let table = density_table(&engine, &graphs)?;
    Ok(signature_partition_from_table(&table, size))
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleVerdict {
    pub equivalent: bool,
    /// First separating graph in canonical order, when not equivalent.
    pub witness: Option<LabeledGraph>,
    pub witness_values: Option<(String, String)>,
    pub graphs_checked: usize,
    pub max_nodes: usize,
}

/// Decides whether `t_a(F, W) = t_b(F, W)` for every enumerated `F`.
pub fn orbit_equiv_oracle<T: Scalar>(
    w: &impl Kernel<T>,
    a: &[usize],
    b: &[usize],
    max_nodes: usize,
    independent_only: bool,
) -> Result<OracleVerdict> {
    if a.len() != b.len() {
        return Err(Error::invalid("tuples differ in length"));
    }
    let q = w.steps();
    if let Some(&x) = a.iter().chain(b).find(|&&x| x >= q) {
        return Err(Error::invalid(format!("step {x} out of range (q = {q})")));
    }
    let graphs = enumerate_klabeled(a.len(), max_nodes, independent_only)?;
    let engine = DensityEngine::new(w);
    let tol = T::default_tol();
    let found = graphs
        .par_iter()
        .map(|f| -> Result<Option<(T, T)>> {
            let (ta, tb) = (engine.restricted(f, a)?, engine.restricted(f, b)?);
            Ok((!ta.approx_eq(&tb, tol)).then_some((ta, tb)))
        })
        .enumerate()
        .map(|(i, r)| r.map(|o| o.map(|v| (i, v))))
        .find_first(|r| !matches!(r, Ok(None)));
    let verdict = match found {
        None => OracleVerdict {
            equivalent: true,
            witness: None,
            witness_values: None,
            graphs_checked: graphs.len(),
            max_nodes,
        },
        Some(Err(e)) => return Err(e),
        Some(Ok(Some((i, (ta, tb))))) => OracleVerdict {
            equivalent: false,
            witness: Some(graphs[i].clone()),
            witness_values: Some((ta.to_string(), tb.to_string())),
            graphs_checked: i + 1,
            max_nodes,
        },
        Some(Ok(None)) => unreachable!("filtered by find_first"),
    };
    Ok(verdict)
}

/// True when two labelings of the same set describe the same partition.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut ab = std::collections::HashMap::new();
    let mut ba = std::collections::HashMap::new();
    a.iter().zip(b).all(|(&x, &y)| *ab.entry(x).or_insert(y) == y && *ba.entry(y).or_insert(x) == x)
}

/// Index of a tuple in the base-`q` layout used by partitions.
pub fn tuple_index(tuple: &[usize], q: usize) -> usize {
    encode(tuple, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphon::StepGraphon;
    use crate::scalar::{rat, Rational};

    fn p3() -> StepGraphon<Rational> {
        StepGraphon::from_simple_graph(&LabeledGraph::path(3)).unwrap()
    }

    #[test]
    fn path_ends_are_equivalent() {
        let v = orbit_equiv_oracle(&p3(), &[0], &[2], 5, true).unwrap();
        assert!(v.equivalent);
        assert!(v.witness.is_none());
        assert!(orbit_equiv_oracle(&p3(), &[1], &[1], 5, true).unwrap().equivalent);
    }

    #[test]
    fn path_end_and_middle_are_separated_by_an_edge() {
        let v = orbit_equiv_oracle(&p3(), &[0], &[1], 5, true).unwrap();
        assert!(!v.equivalent);
        assert_eq!(v.witness.unwrap(), LabeledGraph::simple(2, 1, &[(0, 1)]).unwrap());
        assert_eq!(v.witness_values.unwrap(), (rat(1, 3).to_string(), rat(2, 3).to_string()));
    }

    #[test]
    fn partitions() {
        let s = signature_partition(&p3(), 1, 4, true).unwrap();
        assert_eq!(s.count, 2);
        assert!(same_partition(&s.id, &[0, 1, 0]));
        assert!(!same_partition(&[0, 0, 1], &[0, 1, 1]));
        assert!(same_partition(&[0, 0, 1], &[5, 5, 2]));
    }

    #[test]
    fn rejects_bad_tuples() {
        assert!(orbit_equiv_oracle(&p3(), &[0], &[0, 1], 4, true).is_err());
        assert!(orbit_equiv_oracle(&p3(), &[0], &[3], 4, true).is_err());
    }
}
