//! k-labeled simple graphs and multigraphs, and quantum graphs over them.
//!
//! Nodes are 0-based internally; the labeled nodes are always `0..k`. The
//! text format is 1-based:
//!
//! ```text
//! 3 2 multi
//! 1 3
//! 1 3
//! ```
//!
//! declares three nodes, the first two labeled, with a double edge `1-3`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational};

/// Largest graph accepted by [`canonical_key`].
pub const CANONICAL_NODE_CAP: usize = 12;
/// Largest node count accepted by [`enumerate_klabeled`].
pub const ENUMERATION_NODE_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Simple,
    Multi,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphKind::Simple => "simple",
            GraphKind::Multi => "multi",
        })
    }
}

/// A graph whose first `label_count` nodes carry the labels `1..=k`.
///
/// Edges are stored normalized (`u < v`) and sorted; multigraphs repeat a
/// pair once per parallel edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    nodes: usize,
    labels: usize,
    edges: Vec<(usize, usize)>,
    kind: GraphKind,
}

impl LabeledGraph {
    pub fn new(
        nodes: usize,
        labels: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        kind: GraphKind,
    ) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::invalid("a graph needs at least one node"));
        }
        if labels > nodes {
            return Err(Error::invalid(format!("{labels} labels on {nodes} nodes")));
        }
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= nodes || v >= nodes {
                return Err(Error::invalid(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::invalid(format!("loop at node {u}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if kind == GraphKind::Simple && normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("repeated edge in a simple graph"));
        }
        Ok(LabeledGraph { nodes, labels, edges: normalized, kind })
    }

    pub fn simple(nodes: usize, labels: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(nodes, labels, edges.iter().copied(), GraphKind::Simple)
    }

    pub fn multi(nodes: usize, labels: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(nodes, labels, edges.iter().copied(), GraphKind::Multi)
    }

    pub fn empty(nodes: usize, labels: usize) -> Self {
        Self::simple(nodes, labels, &[]).expect("edgeless graph is valid")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::simple(n, 0, &edges).expect("complete graph is valid")
    }

    /// Path on `n` nodes, `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::simple(n, 0, &edges).expect("path is valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "simple cycles need three nodes");
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Self::simple(n, 0, &edges).expect("cycle is valid")
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Self::simple(leaves + 1, 0, &edges).expect("star is valid")
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::simple(10, 0, &edges).expect("Petersen graph is valid")
    }

    /// The Frucht graph: 3-regular on 12 nodes with trivial automorphism group.
    pub fn frucht() -> Self {
        const LCF: [i64; 12] = [-5, -2, -4, 2, 5, -2, 2, 5, -2, -5, 4, 2];
        let mut edges: Vec<(usize, usize)> = (0..12).map(|v| (v, (v + 1) % 12)).collect();
        for (v, jump) in LCF.iter().enumerate() {
            let w = (v as i64 + jump).rem_euclid(12) as usize;
            edges.push((v.min(w), v.max(w)));
        }
        edges.iter_mut().for_each(|e| *e = (e.0.min(e.1), e.0.max(e.1)));
        edges.sort_unstable();
        edges.dedup();
        Self::simple(12, 0, &edges).expect("Frucht graph is valid")
    }

    /// `P_{m+1}` with both endpoints labeled: labeled nodes 0 and 1 joined by
    /// a path of `m` edges through the unlabeled nodes `2..=m`.
    pub fn labeled_path(m: usize) -> Self {
        assert!(m >= 1);
        let mut chain = vec![0];
        chain.extend(2..=m);
        chain.push(1);
        let edges: Vec<_> = chain.windows(2).map(|w| (w[0], w[1])).collect();
        Self::simple(m + 1, 2, &edges).expect("labeled path is valid")
    }

    /// Same graph with the first `k` nodes labeled.
    pub fn with_labels(&self, k: usize) -> Result<Self> {
        Self::new(self.nodes, k, self.edges.iter().copied(), self.kind)
    }

    /// Same edges, reinterpreted as a multigraph.
    pub fn to_multi(&self) -> Self {
        LabeledGraph { kind: GraphKind::Multi, ..self.clone() }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn label_count(&self) -> usize {
        self.labels
    }

    pub fn unlabeled_count(&self) -> usize {
        self.nodes - self.labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge count with multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn is_labeled(&self, v: usize) -> bool {
        v < self.labels
    }

    /// Distinct node pairs with their multiplicities.
    pub fn edge_multiplicities(&self) -> Vec<((usize, usize), u32)> {
        let mut out: Vec<((usize, usize), u32)> = Vec::new();
        for &e in &self.edges {
            match out.last_mut() {
                Some((last, m)) if *last == e => *m += 1,
                _ => out.push((e, 1)),
            }
        }
        out
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let e = (u.min(v), u.max(v));
        self.edges.iter().filter(|&&x| x == e).count()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// True when no edge joins two labeled nodes.
    pub fn labels_independent(&self) -> bool {
        self.edges.iter().all(|&(u, v)| !(self.is_labeled(u) && self.is_labeled(v)))
    }

    pub fn adjacency(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.nodes]; self.nodes];
        for &(u, v) in &self.edges {
            m[u][v] = m[u][v].saturating_add(1);
            m[v][u] = m[v][u].saturating_add(1);
        }
        m
    }

    /// Product of two k-labeled graphs: labeled nodes are identified, the
    /// unlabeled nodes of `other` are appended after those of `self`.
    /// Parallel edges are reduced for simple graphs and added for multigraphs.
    pub fn glue_product(&self, other: &LabeledGraph) -> Result<LabeledGraph> {
        if self.labels != other.labels {
            return Err(Error::invalid(format!(
                "label counts differ ({} vs {})",
                self.labels, other.labels
            )));
        }
        if self.kind != other.kind {
            return Err(Error::invalid("cannot glue a simple graph to a multigraph"));
        }
        let k = self.labels;
        let shift = self.nodes - k;
        let remap = |v: usize| if v < k { v } else { v + shift };
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (remap(u), remap(v))));
        if self.kind == GraphKind::Simple {
            edges.iter_mut().for_each(|e| *e = (e.0.min(e.1), e.0.max(e.1)));
            edges.sort_unstable();
            edges.dedup();
        }
        LabeledGraph::new(self.nodes + other.nodes - k, k, edges, self.kind)
    }

    pub fn unlabel(&self) -> LabeledGraph {
        LabeledGraph { labels: 0, ..self.clone() }
    }

    /// Replaces one copy of `edge` by a path of `m` edges through `m - 1`
    /// fresh unlabeled nodes.
    pub fn subdivide_edge(&self, edge: (usize, usize), m: usize) -> Result<LabeledGraph> {
        let e = (edge.0.min(edge.1), edge.0.max(edge.1));
        let pos = self
            .edges
            .iter()
            .position(|&x| x == e)
            .ok_or_else(|| Error::invalid(format!("edge ({},{}) not present", e.0, e.1)))?;
        if self.is_labeled(e.0) && self.is_labeled(e.1) {
            return Err(Error::invalid("cannot subdivide an edge between two labeled nodes"));
        }
        if m == 0 {
            return Err(Error::invalid("subdivision count must be at least 1"));
        }
        if m == 1 {
            return Ok(self.clone());
        }
        let mut edges = self.edges.clone();
        edges.remove(pos);
        let mut chain = vec![e.0];
        chain.extend(self.nodes..self.nodes + m - 1);
        chain.push(e.1);
        edges.extend(chain.windows(2).map(|w| (w[0], w[1])));
        LabeledGraph::new(self.nodes + m - 1, self.labels, edges, self.kind)
    }

    /// Replaces every node by `m` copies and every edge by `K_{m,m}`.
    pub fn blow_up(&self, m: usize) -> Result<LabeledGraph> {
        if self.kind != GraphKind::Simple || self.labels != 0 {
            return Err(Error::invalid("blow-up needs a simple unlabeled graph"));
        }
        if m == 0 {
            return Err(Error::invalid("blow-up factor must be at least 1"));
        }
        let mut edges = Vec::with_capacity(self.edges.len() * m * m);
        for &(u, v) in &self.edges {
            for i in 0..m {
                for j in 0..m {
                    edges.push((u * m + i, v * m + j));
                }
            }
        }
        LabeledGraph::new(self.nodes * m, 0, edges, GraphKind::Simple)
    }

    /// Disjoint union; labels of `self` are kept, `other` must be unlabeled.
    pub fn disjoint_union(&self, other: &LabeledGraph) -> Result<LabeledGraph> {
        if other.labels != 0 {
            return Err(Error::invalid("right operand of a disjoint union must be unlabeled"));
        }
        let shift = self.nodes;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        let kind = if self.kind == GraphKind::Multi || other.kind == GraphKind::Multi {
            GraphKind::Multi
        } else {
            GraphKind::Simple
        };
        LabeledGraph::new(self.nodes + other.nodes, self.labels, edges, kind)
    }

    /// The same graph without the edges between labeled nodes.
    pub fn without_label_edges(&self) -> LabeledGraph {
        let edges: Vec<_> = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| !(self.is_labeled(u) && self.is_labeled(v)))
            .collect();
        LabeledGraph { edges, ..self.clone() }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.nodes, self.labels, self.kind);
        for &(u, v) in &self.edges {
            s.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        s
    }
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> =
            self.edges.iter().map(|(u, v)| format!("{}-{}", u + 1, v + 1)).collect();
        write!(f, "[{} nodes, {} labeled, {}: {}]", self.nodes, self.labels, self.kind, edges.join(" "))
    }
}

impl FromStr for LabeledGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty graph description".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse(format!("bad graph header `{header}`")));
        }
        let parse_usize = |t: &str| {
            t.parse::<usize>().map_err(|_| Error::Parse(format!("not a count: `{t}`")))
        };
        let n = parse_usize(fields[0])?;
        let k = parse_usize(fields[1])?;
        let kind = match fields.get(2) {
            None | Some(&"simple") => GraphKind::Simple,
            Some(&"multi") => GraphKind::Multi,
            Some(other) => return Err(Error::Parse(format!("unknown graph kind `{other}`"))),
        };
        let mut edges = Vec::new();
        for line in lines {
            let ends: Vec<&str> = line.split_whitespace().collect();
            if ends.len() != 2 {
                return Err(Error::Parse(format!("bad edge line `{line}`")));
            }
            let u = parse_usize(ends[0])?;
            let v = parse_usize(ends[1])?;
            if u == 0 || v == 0 {
                return Err(Error::Parse("node numbers are 1-based".into()));
            }
            edges.push((u - 1, v - 1));
        }
        LabeledGraph::new(n, k, edges, kind)
    }
}

/// Builds a named unlabeled motif: `K<n>`, `P<n>` (n nodes), `C<n>`, `S<n>`
/// (star with n leaves), `E<n>` (edgeless), `petersen`, `frucht`.
pub fn named_graph(name: &str) -> Result<LabeledGraph> {
    let lower = name.trim().to_ascii_lowercase();
    match lower.as_str() {
        "petersen" => return Ok(LabeledGraph::petersen()),
        "frucht" => return Ok(LabeledGraph::frucht()),
        _ => {}
    }
    let bad = || Error::Parse(format!("unknown motif `{name}`"));
    let (head, tail) = lower.split_at(1);
    let n: usize = tail.parse().map_err(|_| bad())?;
    match head {
        "k" if n >= 1 => Ok(LabeledGraph::complete(n)),
        "p" if n >= 1 => Ok(LabeledGraph::path(n)),
        "c" if n >= 3 => Ok(LabeledGraph::cycle(n)),
        "s" => Ok(LabeledGraph::star(n)),
        "e" if n >= 1 => Ok(LabeledGraph::empty(n, 0)),
        _ => Err(bad()),
    }
}

/// Canonical byte string of a labeled graph: two graphs get equal keys iff
/// they are isomorphic by a map fixing every labeled node.
///
/// Keys are the lexicographically smallest column-wise upper-triangle
/// encoding over orderings of the unlabeled nodes that respect a stable
/// color refinement; search is branch and bound on the encoding prefix.
pub fn canonical_key(g: &LabeledGraph) -> Result<Vec<u8>> {
    let n = g.nodes;
    if n > CANONICAL_NODE_CAP {
        return Err(Error::cap(format!(
            "canonical keys are limited to {CANONICAL_NODE_CAP} nodes (got {n})"
        )));
    }
    if n > u8::MAX as usize {
        return Err(Error::cap("node count does not fit the key header"));
    }
    let adj = g.adjacency();
    let colors = refine_colors(&adj, g.labels);

    let mut header = vec![n as u8, g.labels as u8, g.kind as u8];
    let mut order: Vec<usize> = (0..g.labels).collect();
    for j in 1..g.labels {
        for i in 0..j {
            header.push(adj[i][j]);
        }
    }
    let mut slots: Vec<usize> = (g.labels..n).map(|v| colors[v]).collect();
    slots.sort_unstable();

    let mut search = KeySearch {
        adj: &adj,
        colors: &colors,
        slots: &slots,
        labels: g.labels,
        used: vec![false; n],
        cur: header,
        best: None,
    };
    search.run(&mut order);
    Ok(search.best.expect("at least one ordering exists"))
}

fn refine_colors(adj: &[Vec<u8>], labels: usize) -> Vec<usize> {
    let n = adj.len();
    let mut colors: Vec<usize> = (0..n)
        .map(|v| if v < labels { v } else { labels })
        .collect();
    let mut classes = count_classes(&colors);
    loop {
        let sigs: Vec<(usize, Vec<(usize, u8)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(usize, u8)> =
                    (0..n).filter(|&u| adj[v][u] > 0).map(|u| (colors[u], adj[v][u])).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> =
            sigs.iter().map(|s| distinct.binary_search(s).expect("present")).collect();
        let next_classes = count_classes(&next);
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn count_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

struct KeySearch<'a> {
    adj: &'a [Vec<u8>],
    colors: &'a [usize],
    slots: &'a [usize],
    labels: usize,
    used: Vec<bool>,
    cur: Vec<u8>,
    best: Option<Vec<u8>>,
}

impl KeySearch<'_> {
    fn run(&mut self, order: &mut Vec<usize>) {
        let pos = order.len();
        let n = self.adj.len();
        if pos == n {
            if self.best.as_ref().is_none_or(|b| self.cur < *b) {
                self.best = Some(self.cur.clone());
            }
            return;
        }
        let want = self.slots[pos - self.labels];
        for v in 0..n {
            if self.used[v] || v < self.labels || self.colors[v] != want {
                continue;
            }
            let mark = self.cur.len();
            for &u in order.iter() {
                self.cur.push(self.adj[u][v]);
            }
            let worse = self.best.as_ref().is_some_and(|b| self.cur[..] > b[..self.cur.len()]);
            if !worse {
                self.used[v] = true;
                order.push(v);
                self.run(order);
                order.pop();
                self.used[v] = false;
            }
            self.cur.truncate(mark);
        }
    }
}

/// All k-labeled simple graphs on at most `max_nodes` nodes up to
/// label-fixing isomorphism, sorted by canonical key. With
/// `independent_labels` the labeled nodes are pairwise nonadjacent.
pub fn enumerate_klabeled(
    k: usize,
    max_nodes: usize,
    independent_labels: bool,
) -> Result<Vec<LabeledGraph>> {
    if max_nodes > ENUMERATION_NODE_CAP {
        return Err(Error::cap(format!(
            "enumeration is limited to {ENUMERATION_NODE_CAP} nodes (got {max_nodes})"
        )));
    }
    if k > max_nodes {
        return Err(Error::invalid(format!("{k} labels exceed {max_nodes} nodes")));
    }
    if max_nodes == 0 {
        return Ok(Vec::new());
    }

    let start = k.max(1);
    let mut level: BTreeMap<Vec<u8>, LabeledGraph> = BTreeMap::new();
    let label_pairs: Vec<(usize, usize)> =
        (0..start).flat_map(|u| (u + 1..start).map(move |v| (u, v))).collect();
    let label_pairs: Vec<(usize, usize)> =
        label_pairs.into_iter().filter(|&(u, v)| u < k && v < k).collect();
    let subsets = if independent_labels { 1 } else { 1usize << label_pairs.len() };
    for mask in 0..subsets {
        let edges: Vec<_> = label_pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = LabeledGraph::simple(start, k, &edges)?;
        level.insert(canonical_key(&g)?, g);
    }

    let mut all: BTreeMap<Vec<u8>, LabeledGraph> = level.clone();
    for n in start..max_nodes {
        let parents: Vec<&LabeledGraph> = level.values().collect();
        let children: Vec<(Vec<u8>, LabeledGraph)> = parents
            .par_iter()
            .flat_map_iter(|g| {
                (0..1usize << n).map(move |mask| {
                    let mut edges = g.edges.clone();
                    edges.extend((0..n).filter(|u| mask >> u & 1 == 1).map(|u| (u, n)));
                    let child = LabeledGraph::new(n + 1, k, edges, GraphKind::Simple)
                        .expect("augmentation keeps the graph valid");
                    let key = canonical_key(&child).expect("below the canonical cap");
                    (key, child)
                })
            })
            .collect();
        level = children.into_iter().collect();
        all.extend(level.iter().map(|(key, g)| (key.clone(), g.clone())));
    }
    Ok(all.into_values().collect())
}

/// Formal rational linear combination of k-labeled graphs. Terms with
/// isomorphic constituents are merged and zero terms dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGraph {
    labels: usize,
    terms: Vec<(Rational, LabeledGraph)>,
}

impl QuantumGraph {
    pub fn new(terms: impl IntoIterator<Item = (Rational, LabeledGraph)>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<u8>, (Rational, LabeledGraph)> = BTreeMap::new();
        let mut labels = None;
        for (c, g) in terms {
            match labels {
                None => labels = Some(g.labels),
                Some(k) if k != g.labels => {
                    return Err(Error::invalid("quantum graph terms have different label counts"))
                }
                _ => {}
            }
            let key = canonical_key(&g)?;
            merged
                .entry(key)
                .and_modify(|(acc, _)| *acc += c.clone())
                .or_insert((c, g));
        }
        let labels = labels.ok_or_else(|| Error::invalid("quantum graph needs a term"))?;
        let terms = merged.into_values().filter(|(c, _)| !c.is_zero()).collect();
        Ok(QuantumGraph { labels, terms })
    }

    pub fn single(g: LabeledGraph) -> Self {
        QuantumGraph { labels: g.labels, terms: vec![(Rational::one(), g)] }
    }

    pub fn label_count(&self) -> usize {
        self.labels
    }

    pub fn terms(&self) -> &[(Rational, LabeledGraph)] {
        &self.terms
    }

    /// Distributive extension of the gluing product.
    pub fn product(&self, other: &QuantumGraph) -> Result<QuantumGraph> {
        let mut terms = Vec::new();
        for (a, g) in &self.terms {
            for (b, h) in &other.terms {
                terms.push((a.clone() * b.clone(), g.glue_product(h)?));
            }
        }
        if terms.is_empty() {
            return Ok(QuantumGraph { labels: self.labels, terms });
        }
        QuantumGraph::new(terms)
    }

    pub fn unlabel(&self) -> Result<QuantumGraph> {
        QuantumGraph::new(self.terms.iter().map(|(c, g)| (c.clone(), g.unlabel())))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Vec<QuantumTermJson> =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let terms = raw
            .into_iter()
            .map(|t| Ok((parse_rational(&t.coef)?, t.graph.into_graph()?)))
            .collect::<Result<Vec<_>>>()?;
        QuantumGraph::new(terms)
    }

    pub fn to_json(&self) -> String {
        let raw: Vec<QuantumTermJson> = self
            .terms
            .iter()
            .map(|(c, g)| QuantumTermJson { coef: c.to_string(), graph: GraphJson::from_graph(g) })
            .collect();
        serde_json::to_string_pretty(&raw).expect("serializable")
    }
}

#[derive(Serialize, Deserialize)]
struct QuantumTermJson {
    coef: String,
    graph: GraphJson,
}

/// Inline graph inside quantum-graph JSON: either the text format as a
/// string or an object with 1-based edges.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphJson {
    Text(String),
    Object {
        nodes: usize,
        labels: usize,
        #[serde(default = "default_kind")]
        kind: GraphKind,
        edges: Vec<(usize, usize)>,
    },
}

impl Serialize for LabeledGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from_graph(self).serialize(s)
    }
}

fn default_kind() -> GraphKind {
    GraphKind::Simple
}

impl GraphJson {
    pub fn into_graph(self) -> Result<LabeledGraph> {
        match self {
            GraphJson::Text(s) => s.parse(),
            GraphJson::Object { nodes, labels, kind, edges } => {
                if edges.iter().any(|&(u, v)| u == 0 || v == 0) {
                    return Err(Error::Parse("node numbers are 1-based".into()));
                }
                LabeledGraph::new(nodes, labels, edges.into_iter().map(|(u, v)| (u - 1, v - 1)), kind)
            }
        }
    }

    pub fn from_graph(g: &LabeledGraph) -> Self {
        GraphJson::Object {
            nodes: g.nodes,
            labels: g.labels,
            kind: g.kind,
            edges: g.edges.iter().map(|&(u, v)| (u + 1, v + 1)).collect(),
        }
    }
}

/// Named quantum graphs used for metric recovery.
///
/// * `h`: 2-labeled, `t_xy(h, W) = d_W(x, y)^2`. Its terms are the double
///   edge at label 1, minus twice the path through a common neighbor, plus
///   the double edge at label 2.
/// * `f`: the edgeless 2-labeled graph minus `h`, so `t_xu(f, W) = 1 - d_W(x, u)^2`.
pub fn builtin_quantum(name: &str) -> Result<QuantumGraph> {
    let double_at = |label: usize| {
        LabeledGraph::multi(3, 2, &[(label, 2), (label, 2)]).expect("valid multigraph")
    };
    let h_terms = || {
        vec![
            (Rational::one(), double_at(0)),
            (Rational::from_integer((-2).into()), LabeledGraph::multi(3, 2, &[(0, 2), (1, 2)]).expect("valid")),
            (Rational::one(), double_at(1)),
        ]
    };
    match name {
        "h" => QuantumGraph::new(h_terms()),
        "f" => {
            let mut terms: Vec<_> =
                h_terms().into_iter().map(|(c, g)| (-c, g)).collect();
            terms.push((Rational::one(), LabeledGraph::multi(2, 2, &[]).expect("valid")));
            QuantumGraph::new(terms)
        }
        other => Err(Error::invalid(format!("unknown quantum graph `{other}`"))),
    }
}
