mod common;

use common::*;
use graphon_core::graphon::generators::*;
use graphon_core::graphon::Kernel;
use graphon_core::graphs::enumerate_klabeled;
use graphon_core::homdensity::{t, t_graph, t_restricted, t_restricted_naive, DensityEngine};
use graphon_core::metrics::neighborhood_metric;
use graphon_core::scalar::rat;
use graphon_core::symmetry::automorphism::automorphisms;
use graphon_core::{LabeledGraph, Rational, StepGraphon};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Same graph with every edge doubled.
fn doubled(g: &LabeledGraph) -> LabeledGraph {
    let edges: Vec<_> = g.edges().iter().flat_map(|&e| [e, e]).collect();
    LabeledGraph::multi(g.node_count(), g.label_count(), &edges).unwrap()
}

fn multigraph(labels: usize) -> impl Strategy<Value = LabeledGraph> {
    (labels.max(1)..=4, any::<u64>(), any::<u64>()).prop_map(move |(n, a, b)| {
        let base = graph_from_mask(n, labels, a, true);
        let extra = graph_from_mask(n, labels, a & b, true);
        let edges: Vec<_> = base.edges().iter().chain(extra.edges()).copied().collect();
        LabeledGraph::multi(n, labels, &edges).unwrap()
    })
}

#[test]
fn graphon_densities_match_graph_densities() {
    let targets = [
        LabeledGraph::complete(2),
        LabeledGraph::path(3),
        LabeledGraph::cycle(5),
        LabeledGraph::petersen(),
    ];
    for g in &targets {
        let w: StepGraphon<Rational> = StepGraphon::from_simple_graph(g).unwrap();
        for f in enumerate_klabeled(0, 5, false).unwrap() {
            assert_eq!(t(&f, &w).unwrap(), t_graph(&f, g).unwrap(), "{f:?} into {g:?}");
        }
    }
}

/// `|t_a(F) - t_b(F)| <= |E(F)| max_i r(a_i, b_i)` for multigraphs with
/// independent labels.
fn check_lipschitz(w: &StepGraphon<Rational>, k: usize) {
    let q = w.steps();
    let r = neighborhood_metric(w);
    let engine = DensityEngine::new(w);
    let size = q.pow(k as u32);
    let tuple = |i: usize| -> Vec<usize> { if k == 1 { vec![i] } else { vec![i / q, i % q] } };
    let mut graphs = enumerate_klabeled(k, 4, true).unwrap();
    graphs.extend(graphs.clone().iter().map(doubled));
    for f in &graphs {
        let values = engine.all_anchors(f).unwrap();
        let edges = rat(f.edge_count() as i64, 1);
        for i in 0..size {
            for j in i + 1..size {
                let (a, b) = (tuple(i), tuple(j));
                let dist = (0..k).map(|l| r.get(a[l], b[l]).clone()).max().unwrap();
                let diff = (values[i].clone() - values[j].clone()).abs();
                assert!(diff <= edges.clone() * dist, "{f:?} at {a:?}, {b:?}");
            }
        }
    }
}

#[test]
fn lipschitz_bound_on_examples() {
    let nl = nonlip(&rat(1, 100)).unwrap();
    check_lipschitz(&nl, 1);
    check_lipschitz(&nl, 2);
    let dy = dyadic(3).unwrap();
    check_lipschitz(&dy, 1);
    check_lipschitz(&dy, 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn engine_matches_brute_force(w in exact_graphon(4), f in multigraph(2)) {
        let q = w.steps();
        for a in 0..q {
            for b in 0..q {
                prop_assert_eq!(t_restricted(&f, &w, &[a, b]).unwrap(), t_restricted_naive(&f, &w, &[a, b]));
            }
        }
    }

    #[test]
    fn float_engine_matches_brute_force(w in float_graphon(4), f in multigraph(1)) {
        for a in 0..w.steps() {
            let (fast, slow) = (t_restricted(&f, &w, &[a]).unwrap(), t_restricted_naive(&f, &w, &[a]));
            prop_assert!((fast - slow).abs() <= 1e-12);
        }
    }

    #[test]
    fn disjoint_unions_multiply(w in exact_graphon(4), a in any::<u64>(), b in any::<u64>(), na in 1usize..=3, nb in 1usize..=3) {
        let (f, g) = (graph_from_mask(na, 0, a, false), graph_from_mask(nb, 0, b, false));
        let u = f.disjoint_union(&g).unwrap();
        prop_assert_eq!(t(&u, &w).unwrap(), t(&f, &w).unwrap() * t(&g, &w).unwrap());
    }

    #[test]
    fn gluing_is_the_weighted_inner_product(w in exact_graphon(4), k in 1usize..=2, a in any::<u64>(), b in any::<u64>(), na in 0usize..=2, nb in 0usize..=2) {
        let (g, h) = (graph_from_mask(k + na, k, a, true), graph_from_mask(k + nb, k, b, true));
        let engine = DensityEngine::new(&w);
        let (tg, th) = (engine.all_anchors(&g).unwrap(), engine.all_anchors(&h).unwrap());
        let q = w.steps();
        let mut inner = Rational::zero();
        for i in 0..tg.len() {
            let anchor: Vec<usize> = if k == 1 { vec![i] } else { vec![i / q, i % q] };
            let weight = anchor.iter().fold(Rational::one(), |acc, &x| acc * w.weights()[x].clone());
            inner += weight * tg[i].clone() * th[i].clone();
        }
        prop_assert_eq!(t(&g.glue_product(&h).unwrap().unlabel(), &w).unwrap(), inner);
    }

    #[test]
    fn orbit_mates_share_multigraph_densities(which in 0usize..4, f in multigraph(2)) {
        let g = [LabeledGraph::path(4), LabeledGraph::cycle(5), LabeledGraph::cycle(6), LabeledGraph::petersen()][which].clone();
        let w: StepGraphon<Rational> = StepGraphon::from_simple_graph(&g).unwrap();
        let q = w.steps();
        let values = DensityEngine::new(&w).all_anchors(&f).unwrap();
        for sigma in automorphisms(&w).unwrap().elements {
            for a in 0..q {
                for b in 0..q {
                    prop_assert_eq!(&values[a * q + b], &values[sigma.apply(a) * q + sigma.apply(b)]);
                }
            }
        }
    }
}
