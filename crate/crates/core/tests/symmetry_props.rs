mod common;

use common::*;
use graphon_core::cayley::{cayley_graphon, random_symmetric_function, transitive_to_cayley, FiniteGroup, CAYLEY_GROUP_CAP};
use graphon_core::scalar::rat;
use graphon_core::symmetry::automorphism::automorphisms;
use graphon_core::symmetry::connection::{connection_matrix, node_transitivity_report};
use graphon_core::symmetry::{permute_tuple_function, r_operator};
use graphon_core::{Error, Kernel, LabeledGraph, Rational, StepGraphon};
use proptest::prelude::*;

fn symmetric_graphon(which: usize) -> StepGraphon<Rational> {
    let g = [LabeledGraph::path(4), LabeledGraph::cycle(5), LabeledGraph::cycle(6), LabeledGraph::petersen()];
    StepGraphon::from_simple_graph(&g[which % g.len()]).unwrap()
}

fn group(which: usize) -> FiniteGroup {
    match which % 5 {
        0 => FiniteGroup::cyclic(7),
        1 => FiniteGroup::dihedral(4),
        2 => FiniteGroup::dihedral(5),
        3 => FiniteGroup::symmetric(3),
        _ => FiniteGroup::direct_product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(4).unwrap()),
    }
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn r_operator_is_equivariant(which in 0usize..4, n in 1usize..=2, values in proptest::collection::vec(0i64..7, 100)) {
        let w = symmetric_graphon(which);
        let q = w.steps();
        let h: Vec<Rational> = (0..q.pow(n as u32)).map(|i| rat(values[i % values.len()] - 3, 5)).collect();
        let base = r_operator(&w, &h, n).unwrap();
        for sigma in automorphisms(&w).unwrap().elements {
            let moved = r_operator(&w, &permute_tuple_function(&h, &sigma, n), n).unwrap();
            for x in 0..q {
                prop_assert_eq!(&moved[x], &base[sigma.apply(x)]);
            }
        }
    }

    #[test]
    fn connection_matrices_are_psd(w in exact_graphon(4), k in 1usize..=2) {
        prop_assert!(connection_matrix(&w, k, k + 2, false).unwrap().is_psd());
    }

    #[test]
    fn float_connection_matrices_are_psd(w in float_graphon(5)) {
        prop_assert!(connection_matrix(&w, 1, 4, false).unwrap().is_psd());
    }

    #[test]
    fn cayley_graphons_are_node_transitive(which in 0usize..5, denom in 1u32..=6, seed in any::<u64>()) {
        let g = group(which);
        let w = cayley_graphon(&g, &random_symmetric_function(&g, denom, seed)).unwrap();
        let r = node_transitivity_report(&w, 4).unwrap();
        prop_assert!(r.aut_transitive && r.densities_constant && r.algebra_dimension_one);
        prop_assert!(r.connection_rank_one && r.product_identity && r.verdicts_agree);
    }

    #[test]
    fn cayley_round_trip(which in 0usize..5, seed in any::<u64>()) {
        let g = group(which);
        let w = cayley_graphon(&g, &random_symmetric_function(&g, 4, seed)).unwrap();
        let rep = match transitive_to_cayley(&w, 4) {
            Err(Error::CapExceeded(_)) => {
                prop_assert!(automorphisms(&w).unwrap().order() > CAYLEY_GROUP_CAP);
                return Ok(());
            }
            other => other.unwrap(),
        };
        prop_assert!(rep.densities_match);
        prop_assert!(node_transitivity_report(&rep.graphon, 3).unwrap().aut_transitive);
        prop_assert_eq!(rep.graphon.steps(), rep.group.order());
    }

    #[test]
    fn transitivity_verdicts_agree(w in exact_graphon(5)) {
        prop_assert!(node_transitivity_report(&w, 4).unwrap().verdicts_agree);
    }
}
