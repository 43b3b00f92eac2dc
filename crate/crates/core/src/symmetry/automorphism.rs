//! Automorphism groups of pure step graphons and their orbits on tuples.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphon::{Kernel, StepGraphon};
use crate::metrics::is_pure;
use crate::scalar::Scalar;

/// Largest number of steps for exhaustive automorphism search.
pub const AUT_STEP_CAP: usize = 12;
/// Largest number of tuples for orbit enumeration.
pub const ORBIT_TUPLE_CAP: usize = 1_000_000;

/// A bijection of step indices, `x ↦ self.0[x]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::invalid("not a permutation"));
            }
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// All automorphisms, sorted lexicographically (the identity first).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AutGroup {
    pub degree: usize,
    pub elements: Vec<Permutation>,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    /// Checks identity, closure under composition and inverses.
    pub fn is_closed(&self) -> bool {
        let set: HashSet<&Permutation> = self.elements.iter().collect();
        self.elements.first().is_some_and(Permutation::is_identity)
            && self.elements.iter().all(|g| set.contains(&g.inverse()))
            && self.elements.iter().all(|g| self.elements.iter().all(|h| set.contains(&g.compose(h))))
    }

    /// Orbit partition of `[q]^k` under the diagonal action. Tuples are
    /// indexed in base `q`, first coordinate most significant; orbit ids are
    /// numbered by first occurrence.
    pub fn orbits(&self, k: usize) -> Result<Orbits> {
        let q = self.degree;
        let size = tuple_count(q, k)?;
        let mut id = vec![usize::MAX; size];
        let mut count = 0;
        let mut digits = vec![0usize; k];
        for t in 0..size {
            if id[t] != usize::MAX {
                continue;
            }
            decode(t, q, &mut digits);
            for g in &self.elements {
                let image = digits.iter().fold(0, |acc, &x| acc * q + g.apply(x));
                id[image] = count;
            }
            count += 1;
        }
        Ok(Orbits { q, k, id, count })
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits(1).map(|o| o.count == 1).unwrap_or(false)
    }
}

pub(crate) fn tuple_count(q: usize, k: usize) -> Result<usize> {
    match q.checked_pow(k as u32) {
        Some(n) if n <= ORBIT_TUPLE_CAP => Ok(n),
        _ => Err(Error::cap(format!("{q}^{k} tuples exceed the limit of {ORBIT_TUPLE_CAP}"))),
    }
}

pub(crate) fn decode(mut t: usize, q: usize, digits: &mut [usize]) {
    for d in digits.iter_mut().rev() {
        *d = t % q;
        t /= q;
    }
}

pub fn encode(tuple: &[usize], q: usize) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * q + x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbits {
    pub q: usize,
    pub k: usize,
    /// Orbit id of each tuple.
    pub id: Vec<usize>,
    pub count: usize,
}

impl Orbits {
    pub fn same_orbit(&self, a: &[usize], b: &[usize]) -> bool {
        self.id[encode(a, self.q)] == self.id[encode(b, self.q)]
    }

    /// Orbits as lists of tuples.
    pub fn classes(&self) -> Vec<Vec<Vec<usize>>> {
        let mut out = vec![Vec::new(); self.count];
        let mut digits = vec![0; self.k];
        for (t, &o) in self.id.iter().enumerate() {
            decode(t, self.q, &mut digits);
            out[o].push(digits.clone());
        }
        out
    }
}

/// Stable coloring of steps by weight and the multiset of (neighbor color,
/// kernel value) pairs.
pub fn refine_step_colors<T: Scalar>(w: &impl Kernel<T>, tol: f64) -> Vec<usize> {
    let q = w.steps();
    let relabel = |keys: Vec<(usize, Vec<(usize, T::Key)>)>| -> Vec<usize> {
        let mut sorted: Vec<_> = keys.clone();
        sorted.sort();
        sorted.dedup();
        let index: BTreeMap<_, usize> = sorted.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
        keys.iter().map(|k| index[k]).collect()
    };
    let mut colors = {
        let keys: Vec<T::Key> = w.weights().iter().map(|b| b.key(tol)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        keys.iter().map(|k| sorted.binary_search(k).expect("present")).collect::<Vec<usize>>()
    };
    loop {
        let keys: Vec<(usize, Vec<(usize, T::Key)>)> = (0..q)
            .map(|x| {
                let mut row: Vec<(usize, T::Key)> = (0..q).map(|y| (colors[y], w.entry(x, y).key(tol))).collect();
                row.sort();
                (colors[x], row)
            })
            .collect();
        let next = relabel(keys);
        let old_count = colors.iter().max().map_or(0, |m| m + 1);
        let new_count = next.iter().max().map_or(0, |m| m + 1);
        colors = next;
        if new_count == old_count {
            return colors;
        }
    }
}

/// All step permutations preserving weights and kernel, by color
/// refinement and backtracking. Requires a pure graphon with at most
/// [`AUT_STEP_CAP`] steps.
pub fn automorphisms<T: Scalar>(w: &StepGraphon<T>) -> Result<AutGroup> {
    automorphisms_with_cap(w, AUT_STEP_CAP)
}

pub fn automorphisms_with_cap<T: Scalar>(w: &StepGraphon<T>, cap: usize) -> Result<AutGroup> {
    let q = w.steps();
    if q > cap {
        return Err(Error::cap(format!("automorphism search is limited to {cap} steps, got {q}")));
    }
    let tol = T::default_tol();
    if !is_pure(w, tol) {
        return Err(Error::NotPure("automorphisms are defined for pure graphons".into()));
    }
    let colors = refine_step_colors(w, tol);
    let keys: Vec<Vec<T::Key>> = (0..q).map(|x| (0..q).map(|y| w.entry(x, y).key(tol)).collect()).collect();
    let mut elements = Vec::new();
    let mut image = vec![usize::MAX; q];
    let mut used = vec![false; q];
    search(0, &colors, &keys, &mut image, &mut used, &mut elements);
    elements.sort();
    let group = AutGroup { degree: q, elements };
    debug_assert!(group.is_closed());
    Ok(group)
}

fn search<K: Eq>(
    x: usize,
    colors: &[usize],
    keys: &[Vec<K>],
    image: &mut [usize],
    used: &mut [bool],
    out: &mut Vec<Permutation>,
) {
    let q = colors.len();
    if x == q {
        out.push(Permutation(image.to_vec()));
        return;
    }
    for y in 0..q {
        if used[y] || colors[y] != colors[x] || keys[x][x] != keys[y][y] {
            continue;
        }
        if (0..x).any(|z| keys[x][z] != keys[y][image[z]]) {
            continue;
        }
        image[x] = y;
        used[y] = true;
        search(x + 1, colors, keys, image, used, out);
        used[y] = false;
    }
    image[x] = usize::MAX;
}
