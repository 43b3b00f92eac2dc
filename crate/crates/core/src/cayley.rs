//! Finite groups, Cayley graphons, and Cayley representations of
//! node-transitive step graphons.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphon::{Kernel, StepGraphon};
use crate::graphs::enumerate_klabeled;
use crate::homdensity::{DensityCaps, DensityEngine};
use crate::matrix::Matrix;
use crate::metrics::merge_twins;
use crate::scalar::{rat, Rational, Scalar};
use crate::symmetry::automorphism::{automorphisms, Permutation};

/// Groups up to this order get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOCIATIVITY_ORDER: usize = 64;
/// Largest automorphism group converted into a Cayley graphon.
pub const CAYLEY_GROUP_CAP: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    order: usize,
    /// `table[a][b] = a · b`.
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct GroupJson {
    order: usize,
    table: Vec<Vec<usize>>,
    names: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a multiplication table: Latin square, identity, inverses
    /// and associativity (exhaustive up to order 64, sampled above).
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::invalid("a group has at least one element"));
        }
        fn latin_line(n: usize, mut line: impl Iterator<Item = usize>) -> bool {
            let mut seen = vec![false; n];
            line.all(|x| x < n && !std::mem::replace(&mut seen[x], true))
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n || !latin_line(n, row.iter().copied()) {
                return Err(Error::invalid(format!("row {a} is not a permutation of the elements")));
            }
        }
        for b in 0..n {
            if !latin_line(n, (0..n).map(|a| table[a][b])) {
                return Err(Error::invalid(format!("column {b} is not a permutation of the elements")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::invalid("no identity element"))?;
        let inverse: Vec<usize> = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::invalid("an element has no two-sided inverse"))?;
        let assoc = |a: usize, b: usize, c: usize| table[table[a][b]][c] == table[a][table[b][c]];
        if n <= EXHAUSTIVE_ASSOCIATIVITY_ORDER {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(Error::invalid(format!("not associative at ({a}, {b}, {c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..100_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(Error::invalid(format!("not associative at ({a}, {b}, {c})")));
                }
            }
        }
        Ok(FiniteGroup { order: n, table, identity, inverse, names: None })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: GroupJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if j.order != j.table.len() {
            return Err(Error::invalid("order does not match the table"));
        }
        let mut g = FiniteGroup::from_table(j.table)?;
        if let Some(names) = j.names {
            if names.len() != g.order {
                return Err(Error::invalid("one name per element is required"));
            }
            g.names = Some(names);
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// `Z_n` under addition.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        Self::from_table((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
    }

    /// Symmetries of the regular `n`-gon, order `2n`; element `i + n j` is
    /// `r^i s^j`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        let mul = |x: usize, y: usize| {
            let (a, j) = (x % n, x / n);
            let (b, l) = (y % n, y / n);
            let rot = if j == 0 { (a + b) % n } else { (a + n - b) % n };
            rot + n * ((j + l) % 2)
        };
        Self::from_table((0..2 * n).map(|x| (0..2 * n).map(|y| mul(x, y)).collect()).collect())
    }

    /// All permutations of `n <= 5` points in lexicographic order, with
    /// `(p q)(x) = p(q(x))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(Error::invalid("symmetric groups are available for 1 <= n <= 5"));
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            perms.push(current.clone());
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).expect("exists");
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| index[&q.iter().map(|&x| p[x]).collect::<Vec<_>>()]).collect())
            .collect();
        Self::from_table(table)
    }

    /// `G × H`, element `(g, h)` at index `g |H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let (n, m) = (g.order, h.order);
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| g.table[x / m][y / m] * m + h.table[x % m][y % m])
                    .collect()
            })
            .collect();
        Self::from_table(table)
    }

    /// Parses `cyclic:7`, `dihedral:5`, `symmetric:3` or `product:A,B`
    /// with `A`, `B` in the first three forms.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad group spec `{spec}`"));
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match spec.split_once(':').ok_or_else(bad)? {
            ("cyclic", n) => Self::cyclic(int(n)?),
            ("dihedral", n) => Self::dihedral(int(n)?),
            ("symmetric", n) => Self::symmetric(int(n)?),
            ("product", rest) => {
                let (a, b) = rest.split_once(',').ok_or_else(bad)?;
                Self::direct_product(&Self::from_spec(a)?, &Self::from_spec(b)?)
            }
            _ => Err(bad()),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

/// Cayley graphon `W(x, y) = f(x y^{-1})` with uniform weights.
pub fn cayley_graphon<T: Scalar>(g: &FiniteGroup, f: &[T]) -> Result<StepGraphon<T>> {
    let n = g.order();
    if f.len() != n {
        return Err(Error::invalid(format!("f has {} values for a group of order {n}", f.len())));
    }
    if let Some(x) = (0..n).find(|&x| !f[x].approx_eq(&f[g.inv(x)], 0.0)) {
        return Err(Error::invalid(format!("f is not symmetric: f({x}) differs from f of its inverse")));
    }
    let kernel = Matrix::from_fn(n, n, |x, y| f[g.mul(x, g.inv(y))].clone());
    StepGraphon::new(vec![T::ratio(1, n as i64); n], kernel)
}

/// A symmetric function on the group with values in `{0, 1/denom, ..., 1}`.
pub fn random_symmetric_function(g: &FiniteGroup, denom: u32, seed: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = vec![None; g.order()];
    for x in 0..g.order() {
        if f[x].is_none() {
            let v = rat(rng.gen_range(0..=denom) as i64, denom as i64);
            f[g.inv(x)] = Some(v.clone());
            f[x] = Some(v);
        }
    }
    f.into_iter().map(|v| v.expect("assigned")).collect()
}

#[derive(Debug, Clone)]
pub struct CayleyRepresentation<T> {
    /// The automorphism group of the purified input, elements in
    /// lexicographic order, multiplied so that `c^{gh} = (c^g)^h`.
    pub group: FiniteGroup,
    pub automorphisms: Vec<Permutation>,
    /// `f(g) = W(c^g, c)` with base point `c = 0`.
    pub f: Vec<T>,
    pub graphon: StepGraphon<T>,
    /// Step of the purified input each group element maps to.
    pub base_point_orbit: Vec<usize>,
    pub densities_match: bool,
    pub graphs_checked: usize,
}

/// Builds a Cayley graphon weakly isomorphic to a node-transitive graphon
/// and verifies `t(F, ·)` agreement for simple `F` up to `max_nodes`.
pub fn transitive_to_cayley<T: Scalar>(w: &StepGraphon<T>, max_nodes: usize) -> Result<CayleyRepresentation<T>> {
    let pure = merge_twins(w, T::default_tol())?.graphon;
    let aut = automorphisms(&pure)?;
    if !aut.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let n = aut.order();
    if n > CAYLEY_GROUP_CAP {
        return Err(Error::cap(format!("automorphism group of order {n} exceeds {CAYLEY_GROUP_CAP}")));
    }
    let index: HashMap<&Permutation, usize> = aut.elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    // right action: c^{gh} = (c^g)^h, i.e. σ_{gh} = σ_h ∘ σ_g
    let table = (0..n)
        .map(|g| (0..n).map(|h| index[&aut.elements[h].compose(&aut.elements[g])]).collect())
        .collect();
    let group = FiniteGroup::from_table(table)?;
    let c = 0;
    let f: Vec<T> = aut.elements.iter().map(|s| pure.entry(s.apply(c), c).clone()).collect();
    let graphon = cayley_graphon(&group, &f)?;

    let graphs = enumerate_klabeled(0, max_nodes, false)?;
    let caps = DensityCaps { max_nodes: max_nodes.max(8), max_assignments: (n as f64).powi(max_nodes as i32).max(1e9) };
    let (lhs, rhs) = (DensityEngine::with_caps(&graphon, caps), DensityEngine::with_caps(w, caps));
    let mut densities_match = true;
    for f in &graphs {
        if !lhs.t(f)?.approx_eq(&rhs.t(f)?, T::default_tol()) {
            densities_match = false;
            break;
        }
    }
    Ok(CayleyRepresentation {
        base_point_orbit: aut.elements.iter().map(|s| s.apply(c)).collect(),
        automorphisms: aut.elements,
        group,
        f,
        graphon,
        densities_match,
        graphs_checked: graphs.len(),
    })
}
