#![allow(dead_code)]

use graphon_core::graphon::generators::{random_float, random_rational};
use graphon_core::{LabeledGraph, Rational, StepGraphon};
use proptest::prelude::*;

/// Simple graph on `nodes` nodes with the first `labels` labeled, edges
/// chosen by the bits of `mask`.
pub fn graph_from_mask(nodes: usize, labels: usize, mask: u64, independent: bool) -> LabeledGraph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..nodes {
        for v in u + 1..nodes {
            if mask >> bit & 1 == 1 && !(independent && v < labels) {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    LabeledGraph::simple(nodes, labels, &edges).unwrap()
}

pub fn labeled_graph(labels: usize, max_nodes: usize) -> impl Strategy<Value = LabeledGraph> {
    (labels.max(1)..=max_nodes, any::<u64>()).prop_map(move |(n, mask)| graph_from_mask(n, labels, mask, false))
}

pub fn independent_graph(labels: usize, max_nodes: usize) -> impl Strategy<Value = LabeledGraph> {
    (labels.max(1)..=max_nodes, any::<u64>()).prop_map(move |(n, mask)| graph_from_mask(n, labels, mask, true))
}

pub fn exact_graphon(max_q: usize) -> impl Strategy<Value = StepGraphon<Rational>> {
    (1..=max_q, any::<u64>()).prop_map(|(q, seed)| random_rational(q, 4, seed).unwrap())
}

pub fn float_graphon(max_q: usize) -> impl Strategy<Value = StepGraphon<f64>> {
    (1..=max_q, any::<u64>()).prop_map(|(q, seed)| random_float(q, seed).unwrap())
}
