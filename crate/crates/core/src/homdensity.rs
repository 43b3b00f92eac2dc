//! Homomorphism densities of (labeled, multi-) graphs in step graphons.
//!
//! Densities are evaluated by variable elimination over the nodes of `F`:
//! each edge is a factor on its two endpoints, each unlabeled node carries
//! its step weight, and unlabeled nodes are summed out one at a time in a
//! greedy smallest-scope order. The result equals the plain sum over all
//! `q^{|V(F)|}` maps but usually costs far less.
//!
//! In exact mode the graphon is scaled to integers (weights by the common
//! denominator `D_b`, kernel entries by `D_a`) and the sum is accumulated in
//! checked `i128`, falling back to `BigInt` on overflow. The rational value
//! is recovered by dividing by `D_b^{#unlabeled} · D_a^{#edges}`.

use std::marker::PhantomData;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graphon::{common_denominator, Kernel};
use crate::graphs::{GraphKind, LabeledGraph, QuantumGraph};
use crate::scalar::{Mode, Rational, Repr, Scalar};

/// Resource limits for a single density evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityCaps {
    /// Largest allowed `|V(F)|`.
    pub max_nodes: usize,
    /// Largest allowed size of the assignment space (`q` to the number of
    /// free nodes).
    pub max_assignments: f64,
}

impl Default for DensityCaps {
    fn default() -> Self {
        DensityCaps { max_nodes: 8, max_assignments: 1e9 }
    }
}

/// Largest intermediate table the eliminator will allocate.
const MAX_TABLE: usize = 1 << 26;

trait Ring: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
}

impl Ring for i128 {
    fn zero() -> Self {
        0
    }

    fn one() -> Self {
        1
    }

    fn is_zero(&self) -> bool {
        *self == 0
    }

    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }

    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        num_traits::One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }

    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }

    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
}

/// Weights and kernel in one arithmetic backend.
#[derive(Clone)]
struct Tables<R> {
    q: usize,
    weights: Vec<R>,
    kernel: Vec<R>,
}

impl<R: Ring> Tables<R> {
    fn kernel_power(&self, m: u32) -> Option<Vec<R>> {
        if m == 1 {
            return Some(self.kernel.clone());
        }
        self.kernel
            .iter()
            .map(|a| {
                let mut acc = a.clone();
                for _ in 1..m {
                    acc = acc.mul(a)?;
                }
                Some(acc)
            })
            .collect()
    }
}

enum Fail {
    Overflow,
    TableTooLarge,
}

struct Factor<R> {
    vars: Vec<usize>,
    data: Vec<R>,
}

/// Evaluates the density tensor of `F` over the labeled nodes. `domains[v]`
/// lists the step indices node `v` ranges over.
fn eliminate<R: Ring>(f: &LabeledGraph, t: &Tables<R>, domains: &[Vec<usize>]) -> std::result::Result<Vec<R>, Fail> {
    let n = f.node_count();
    let k = f.label_count();
    let q = t.q;
    let mut factors: Vec<Factor<R>> = Vec::new();
    let mut powers: Vec<(u32, Vec<R>)> = Vec::new();
    for ((u, v), m) in f.edge_multiplicities() {
        let table = match powers.iter().find(|(p, _)| *p == m) {
            Some((_, table)) => table,
            None => {
                powers.push((m, t.kernel_power(m).ok_or(Fail::Overflow)?));
                &powers.last().expect("just pushed").1
            }
        };
        let mut data = Vec::with_capacity(domains[u].len() * domains[v].len());
        for &x in &domains[u] {
            for &y in &domains[v] {
                data.push(table[x * q + y].clone());
            }
        }
        factors.push(Factor { vars: vec![u, v], data });
    }
    for v in k..n {
        let data = domains[v].iter().map(|&x| t.weights[x].clone()).collect();
        factors.push(Factor { vars: vec![v], data });
    }
    let mut remaining: Vec<usize> = (k..n).collect();
    while !remaining.is_empty() {
        // greedy choice: the node whose elimination creates the smallest table
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut scope: Vec<usize> = factors
                    .iter()
                    .filter(|fa| fa.vars.contains(&v))
                    .flat_map(|fa| fa.vars.iter().copied())
                    .collect();
                scope.sort_unstable();
                scope.dedup();
                let size: f64 = scope.iter().filter(|&&w| w != v).map(|&w| domains[w].len() as f64).product();
                (i, size)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        let v = remaining.remove(pos);
        let (involved, rest): (Vec<_>, Vec<_>) = factors.into_iter().partition(|fa| fa.vars.contains(&v));
        factors = rest;
        let mut scope: Vec<usize> = involved.iter().flat_map(|fa| fa.vars.iter().copied()).filter(|&w| w != v).collect();
        scope.sort_unstable();
        scope.dedup();
        factors.push(combine(&involved, &scope, Some(v), domains)?);
    }
    let labels: Vec<usize> = (0..k).collect();
    let out = combine(&factors, &labels, None, domains)?;
    Ok(out.data)
}

/// Multiplies `factors` into a table over `scope`, summing out `sum_var`.
fn combine<R: Ring>(
    factors: &[Factor<R>],
    scope: &[usize],
    sum_var: Option<usize>,
    domains: &[Vec<usize>],
) -> std::result::Result<Factor<R>, Fail> {
    let dims: Vec<usize> = scope.iter().map(|&v| domains[v].len()).collect();
    let size = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).ok_or(Fail::TableTooLarge)?;
    if size > MAX_TABLE {
        return Err(Fail::TableTooLarge);
    }
    // stride of each scope variable (and of the summed variable) in each factor
    let strides: Vec<(Vec<usize>, usize)> = factors
        .iter()
        .map(|fa| {
            let fdims: Vec<usize> = fa.vars.iter().map(|&v| domains[v].len()).collect();
            let stride_of = |var: usize| -> usize {
                match fa.vars.iter().position(|&w| w == var) {
                    Some(p) => fdims[p + 1..].iter().product(),
                    None => 0,
                }
            };
            (scope.iter().map(|&s| stride_of(s)).collect(), sum_var.map_or(0, stride_of))
        })
        .collect();
    let sum_len = sum_var.map_or(1, |v| domains[v].len());
    let mut data = Vec::with_capacity(size);
    let mut digits = vec![0usize; scope.len()];
    let mut offsets = vec![0usize; factors.len()];
    for _ in 0..size {
        for (fi, (s, _)) in strides.iter().enumerate() {
            offsets[fi] = digits.iter().zip(s).map(|(d, st)| d * st).sum();
        }
        let mut total = R::zero();
        'inner: for z in 0..sum_len {
            let mut prod = R::one();
            for (fi, fa) in factors.iter().enumerate() {
                let val = &fa.data[offsets[fi] + z * strides[fi].1];
                if val.is_zero() {
                    continue 'inner;
                }
                prod = prod.mul(val).ok_or(Fail::Overflow)?;
            }
            total = total.add(&prod).ok_or(Fail::Overflow)?;
        }
        data.push(total);
        for i in (0..digits.len()).rev() {
            digits[i] += 1;
            if digits[i] < dims[i] {
                break;
            }
            digits[i] = 0;
        }
    }
    Ok(Factor { vars: scope.to_vec(), data })
}

fn table_error(_: Fail) -> Error {
    Error::cap("intermediate table of the density evaluation is too large")
}

enum Backend {
    Exact {
        small: Option<Tables<i128>>,
        big: Tables<BigInt>,
        weight_den: BigInt,
        kernel_den: BigInt,
    },
    Float(Tables<f64>),
}

/// Precomputed arithmetic tables for repeated density queries on one
/// graphon.
pub struct DensityEngine<T> {
    q: usize,
    backend: Backend,
    caps: DensityCaps,
    _mode: PhantomData<T>,
}

impl<T: Scalar> DensityEngine<T> {
    pub fn new(w: &impl Kernel<T>) -> Self {
        Self::with_caps(w, DensityCaps::default())
    }

    pub fn with_caps(w: &impl Kernel<T>, caps: DensityCaps) -> Self {
        let q = w.steps();
        let backend = match T::MODE {
            Mode::Exact => {
                let as_rat = |x: &T| match x.repr() {
                    Repr::Exact(r) => r.clone(),
                    Repr::Float(_) => unreachable!("exact mode"),
                };
                let weights: Vec<Rational> = w.weights().iter().map(as_rat).collect();
                let kernel: Vec<Rational> = w.matrix().iter().map(as_rat).collect();
                let weight_den = common_denominator(&weights);
                let kernel_den = common_denominator(&kernel);
                let scale = |xs: &[Rational], d: &BigInt| -> Vec<BigInt> {
                    xs.iter().map(|x| (x * Rational::from_integer(d.clone())).to_integer()).collect()
                };
                let big = Tables { q, weights: scale(&weights, &weight_den), kernel: scale(&kernel, &kernel_den) };
                let small = (|| {
                    Some(Tables {
                        q,
                        weights: big.weights.iter().map(ToPrimitive::to_i128).collect::<Option<_>>()?,
                        kernel: big.kernel.iter().map(ToPrimitive::to_i128).collect::<Option<_>>()?,
                    })
                })();
                Backend::Exact { small, big, weight_den, kernel_den }
            }
            Mode::Float => Backend::Float(Tables {
                q,
                weights: w.weights().iter().map(Scalar::to_f64).collect(),
                kernel: w.matrix().iter().map(Scalar::to_f64).collect(),
            }),
        };
        DensityEngine { q, backend, caps, _mode: PhantomData }
    }

    pub fn steps(&self) -> usize {
        self.q
    }

    pub fn caps(&self) -> DensityCaps {
        self.caps
    }

    fn check_caps(&self, f: &LabeledGraph, free_nodes: usize) -> Result<()> {
        if f.node_count() > self.caps.max_nodes {
            return Err(Error::cap(format!(
                "pattern has {} nodes, limit is {}",
                f.node_count(),
                self.caps.max_nodes
            )));
        }
        let space = (self.q as f64).powi(free_nodes as i32);
        if space > self.caps.max_assignments {
            return Err(Error::cap(format!(
                "{}^{free_nodes} assignments exceed the limit of {}",
                self.q, self.caps.max_assignments
            )));
        }
        Ok(())
    }

    fn evaluate(&self, f: &LabeledGraph, anchor: Option<&[usize]>) -> Result<Vec<T>> {
        let k = f.label_count();
        let all: Vec<usize> = (0..self.q).collect();
        let mut domains: Vec<Vec<usize>> = Vec::with_capacity(f.node_count());
        for v in 0..f.node_count() {
            domains.push(match anchor {
                Some(a) if v < k => vec![a[v]],
                _ => all.clone(),
            });
        }
        match &self.backend {
            Backend::Float(t) => {
                // zero-weight steps contribute nothing to unlabeled nodes
                for d in domains.iter_mut().skip(k) {
                    d.retain(|&x| t.weights[x] != 0.0);
                }
                let out = eliminate(f, t, &domains).map_err(table_error)?;
                Ok(out.into_iter().map(T::from_float).collect())
            }
            Backend::Exact { small, big, weight_den, kernel_den } => {
                for d in domains.iter_mut().skip(k) {
                    d.retain(|&x| !Zero::is_zero(&big.weights[x]));
                }
                let fast = match small {
                    Some(s) => eliminate(f, s, &domains),
                    None => Err(Fail::Overflow),
                };
                let raw: Vec<BigInt> = match fast {
                    Ok(v) => v.into_iter().map(BigInt::from).collect(),
                    Err(Fail::Overflow) => eliminate(f, big, &domains).map_err(table_error)?,
                    Err(fail) => return Err(table_error(fail)),
                };
                let edges: usize = f.edges().len();
                let den = num_traits::pow(weight_den.clone(), f.unlabeled_count())
                    * num_traits::pow(kernel_den.clone(), edges);
                Ok(raw
                    .into_iter()
                    .map(|num| T::from_rational(&Rational::new(num, den.clone())))
                    .collect())
            }
        }
    }

    /// `t(F, W)` for an unlabeled graph (labels, if any, are ignored).
    pub fn t(&self, f: &LabeledGraph) -> Result<T> {
        let f = f.unlabel();
        self.check_caps(&f, f.node_count())?;
        Ok(self.evaluate(&f, Some(&[]))?.pop().expect("scalar result"))
    }

    /// Restricted density with labeled node `i` pinned to step `anchor[i]`.
    pub fn restricted(&self, f: &LabeledGraph, anchor: &[usize]) -> Result<T> {
        if anchor.len() != f.label_count() {
            return Err(Error::invalid(format!(
                "anchor has {} entries but the graph has {} labels",
                anchor.len(),
                f.label_count()
            )));
        }
        if let Some(&bad) = anchor.iter().find(|&&a| a >= self.q) {
            return Err(Error::invalid(format!("anchor step {bad} out of range (q = {})", self.q)));
        }
        self.check_caps(f, f.unlabeled_count())?;
        Ok(self.evaluate(f, Some(anchor))?.pop().expect("scalar result"))
    }

    /// Restricted densities for every anchor tuple in `[q]^k`, indexed in
    /// base `q` with the first label most significant.
    pub fn all_anchors(&self, f: &LabeledGraph) -> Result<Vec<T>> {
        self.check_caps(f, f.node_count())?;
        self.evaluate(f, None)
    }

    /// Linear extension of [`DensityEngine::restricted`] to quantum graphs.
    pub fn quantum(&self, g: &QuantumGraph, anchor: &[usize]) -> Result<T> {
        let mut total = T::zero();
        for (c, f) in g.terms() {
            total = total + T::from_rational(c) * self.restricted(f, anchor)?;
        }
        Ok(total)
    }

    /// Linear extension of [`DensityEngine::all_anchors`] to quantum graphs.
    pub fn quantum_all_anchors(&self, g: &QuantumGraph) -> Result<Vec<T>> {
        let size = self.q.pow(g.label_count() as u32);
        let mut total = vec![T::zero(); size];
        for (c, f) in g.terms() {
            let c = T::from_rational(c);
            for (acc, v) in total.iter_mut().zip(self.all_anchors(f)?) {
                *acc = acc.clone() + c.clone() * v;
            }
        }
        Ok(total)
    }
}

pub fn t<T: Scalar>(f: &LabeledGraph, w: &impl Kernel<T>) -> Result<T> {
    DensityEngine::new(w).t(f)
}

pub fn t_restricted<T: Scalar>(f: &LabeledGraph, w: &impl Kernel<T>, anchor: &[usize]) -> Result<T> {
    DensityEngine::new(w).restricted(f, anchor)
}

pub fn t_quantum<T: Scalar>(g: &QuantumGraph, w: &impl Kernel<T>, anchor: &[usize]) -> Result<T> {
    DensityEngine::new(w).quantum(g, anchor)
}

/// Number of homomorphisms `F -> G` between simple graphs, by backtracking.
pub fn hom_count(f: &LabeledGraph, g: &LabeledGraph) -> Result<u128> {
    if f.kind() != GraphKind::Simple || g.kind() != GraphKind::Simple {
        return Err(Error::invalid("hom counts are defined here for simple graphs"));
    }
    let caps = DensityCaps::default();
    if f.node_count() > caps.max_nodes {
        return Err(Error::cap(format!("pattern has more than {} nodes", caps.max_nodes)));
    }
    if (g.node_count() as f64).powi(f.node_count() as i32) > caps.max_assignments {
        return Err(Error::cap("assignment space exceeds the limit"));
    }
    let fadj = f.adjacency();
    let gadj = g.adjacency();
    let n = f.node_count();
    let mut phi = vec![0usize; n];
    fn go(i: usize, phi: &mut [usize], fadj: &[Vec<u8>], gadj: &[Vec<u8>]) -> u128 {
        if i == phi.len() {
            return 1;
        }
        let mut count = 0;
        for x in 0..gadj.len() {
            if (0..i).all(|j| fadj[i][j] == 0 || gadj[x][phi[j]] > 0) {
                phi[i] = x;
                count += go(i + 1, phi, fadj, gadj);
            }
        }
        count
    }
    Ok(go(0, &mut phi, &fadj, &gadj))
}

/// `t(F, G) = hom(F, G) / |V(G)|^{|V(F)|}` for simple graphs.
pub fn t_graph(f: &LabeledGraph, g: &LabeledGraph) -> Result<Rational> {
    let f = f.unlabel();
    let g = g.unlabel();
    let hom = hom_count(&f, &g)?;
    let den = num_traits::pow(BigInt::from(g.node_count()), f.node_count());
    Ok(Rational::new(BigInt::from(hom), den))
}

/// Plain sum over all maps; the reference the eliminator is tested against.
#[doc(hidden)]
pub fn t_restricted_naive<T: Scalar>(f: &LabeledGraph, w: &impl Kernel<T>, anchor: &[usize]) -> T {
    let q = w.steps();
    let n = f.node_count();
    let k = f.label_count();
    let mult = f.edge_multiplicities();
    let mut phi: Vec<usize> = anchor.to_vec();
    phi.resize(n, 0);
    let mut total = T::zero();
    loop {
        let mut term = T::one();
        for v in k..n {
            term = term * w.weights()[phi[v]].clone();
        }
        for &((u, v), m) in &mult {
            term = term * w.entry(phi[u], phi[v]).pow_u32(m);
        }
        total = total + term;
        let mut i = n;
        loop {
            if i == k {
                return total;
            }
            i -= 1;
            phi[i] += 1;
            if phi[i] < q {
                break;
            }
            phi[i] = 0;
        }
    }
}
