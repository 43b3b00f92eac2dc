//! Step graphons: a probability vector of step weights and a symmetric
//! kernel matrix with entries in `[0, 1]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graphs::{GraphKind, LabeledGraph};
use crate::matrix::Matrix;
use crate::scalar::{parse_rational, rat, Mode, Rational, Scalar};

/// Symmetry tolerance for float-mode validation.
pub const FLOAT_SYMMETRY_TOL: f64 = 1e-12;
/// Tolerance on the weight sum in float mode.
pub const FLOAT_WEIGHT_SUM_TOL: f64 = 1e-9;

/// Anything that carries step weights and a square kernel matrix.
pub trait Kernel<T: Scalar> {
    fn weights(&self) -> &[T];
    fn matrix(&self) -> &Matrix<T>;

    fn steps(&self) -> usize {
        self.weights().len()
    }

    fn entry(&self, x: usize, y: usize) -> &T {
        &self.matrix()[(x, y)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepGraphon<T> {
    weights: Vec<T>,
    kernel: Matrix<T>,
}

/// A kernel derived from a graphon (operator powers, truncations, the U_n
/// approximation); entries are not range-checked.
#[derive(Debug, Clone, PartialEq)]
pub struct StepKernel<T> {
    weights: Vec<T>,
    kernel: Matrix<T>,
}

impl<T: Scalar> Kernel<T> for StepGraphon<T> {
    fn weights(&self) -> &[T] {
        &self.weights
    }

    fn matrix(&self) -> &Matrix<T> {
        &self.kernel
    }
}

impl<T: Scalar> Kernel<T> for StepKernel<T> {
    fn weights(&self) -> &[T] {
        &self.weights
    }

    fn matrix(&self) -> &Matrix<T> {
        &self.kernel
    }
}

impl<T: Scalar> StepKernel<T> {
    pub fn new(weights: Vec<T>, kernel: Matrix<T>) -> Result<Self> {
        if !kernel.is_square() || kernel.rows() != weights.len() {
            return Err(Error::invalid("kernel shape does not match the weights"));
        }
        Ok(StepKernel { weights, kernel })
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.kernel
    }

    /// Smallest and largest entry.
    pub fn range(&self) -> (T, T) {
        let mut it = self.kernel.iter();
        let first = it.next().cloned().unwrap_or_else(T::zero);
        it.fold((first.clone(), first), |(lo, hi), v| {
            (if *v < lo { v.clone() } else { lo }, if *v > hi { v.clone() } else { hi })
        })
    }
}

impl<T: Scalar> StepGraphon<T> {
    /// Validated constructor: positive weights summing to one, symmetric
    /// kernel with entries in `[0, 1]`.
    pub fn new(weights: Vec<T>, kernel: Matrix<T>) -> Result<Self> {
        let g = Self::raw(weights, kernel)?;
        if g.weights.iter().any(|b| !b.is_positive()) {
            return Err(Error::invalid("step weights must be positive"));
        }
        Ok(g)
    }

    /// Like [`StepGraphon::new`] but zero weights are allowed (input to
    /// purification).
    pub fn raw(weights: Vec<T>, kernel: Matrix<T>) -> Result<Self> {
        let q = weights.len();
        if q == 0 {
            return Err(Error::invalid("a graphon needs at least one step"));
        }
        if !kernel.is_square() || kernel.rows() != q {
            return Err(Error::invalid(format!(
                "kernel is {}x{} but there are {q} weights",
                kernel.rows(),
                kernel.cols()
            )));
        }
        if weights.iter().any(|b| b.is_negative()) {
            return Err(Error::invalid("negative step weight"));
        }
        let sum = weights.iter().cloned().fold(T::zero(), |a, b| a + b);
        if !sum.approx_eq(&T::one(), FLOAT_WEIGHT_SUM_TOL) {
            return Err(Error::invalid(format!("step weights sum to {sum}, not 1")));
        }
        if !kernel.is_symmetric(FLOAT_SYMMETRY_TOL) {
            return Err(Error::invalid("kernel is not symmetric"));
        }
        if kernel.iter().any(|a| a.is_negative() || *a > T::one()) {
            return Err(Error::invalid("kernel entries must lie in [0, 1]"));
        }
        Ok(StepGraphon { weights, kernel })
    }

    pub fn mode(&self) -> Mode {
        T::MODE
    }

    pub fn as_kernel(&self) -> StepKernel<T> {
        StepKernel { weights: self.weights.clone(), kernel: self.kernel.clone() }
    }

    pub fn to_f64(&self) -> StepGraphon<f64> {
        StepGraphon {
            weights: self.weights.iter().map(Scalar::to_f64).collect(),
            kernel: self.kernel.to_f64(),
        }
    }

    /// Uniform weights and the 0/1 adjacency matrix of a simple graph.
    pub fn from_simple_graph(g: &LabeledGraph) -> Result<Self> {
        if g.kind() != GraphKind::Simple || g.label_count() != 0 {
            return Err(Error::invalid("expected a simple unlabeled graph"));
        }
        let n = g.node_count();
        let adj = g.adjacency();
        let weights = vec![T::ratio(1, n as i64); n];
        let kernel = Matrix::from_fn(n, n, |i, j| if adj[i][j] > 0 { T::one() } else { T::zero() });
        Self::new(weights, kernel)
    }

    /// Pullback along `map` (fine step -> coarse step) with the given fine
    /// weights, which must push forward to this graphon's weights.
    pub fn pullback(&self, map: &[usize], fine_weights: Vec<T>) -> Result<StepGraphon<T>> {
        if map.len() != fine_weights.len() {
            return Err(Error::invalid("map and fine weights differ in length"));
        }
        let q = self.steps();
        let mut pushed = vec![T::zero(); q];
        for (&c, w) in map.iter().zip(&fine_weights) {
            if c >= q {
                return Err(Error::invalid(format!("map target {c} out of range")));
            }
            pushed[c] = pushed[c].clone() + w.clone();
        }
        if pushed.iter().zip(&self.weights).any(|(a, b)| !a.approx_eq(b, FLOAT_WEIGHT_SUM_TOL)) {
            return Err(Error::invalid("fine weights do not push forward to the graphon weights"));
        }
        let kernel = Matrix::from_fn(map.len(), map.len(), |x, y| self.kernel[(map[x], map[y])].clone());
        StepGraphon::raw(fine_weights, kernel)
    }

    /// Block-diagonal sum with weights `(alpha * b1, (1 - alpha) * b2)`.
    pub fn direct_sum(&self, other: &StepGraphon<T>, alpha: T) -> Result<StepGraphon<T>> {
        if !(alpha.is_positive() && alpha < T::one()) {
            return Err(Error::invalid("mixing weight must lie in (0, 1)"));
        }
        let (p, q) = (self.steps(), other.steps());
        let beta = T::one() - alpha.clone();
        let weights: Vec<T> = self
            .weights
            .iter()
            .map(|b| alpha.clone() * b.clone())
            .chain(other.weights.iter().map(|b| beta.clone() * b.clone()))
            .collect();
        let kernel = Matrix::from_fn(p + q, p + q, |x, y| match (x < p, y < p) {
            (true, true) => self.kernel[(x, y)].clone(),
            (false, false) => other.kernel[(x - p, y - p)].clone(),
            _ => T::zero(),
        });
        StepGraphon::new(weights, kernel)
    }

    /// A W-random graph on `n` nodes: i.i.d. steps drawn from the weights,
    /// each pair joined independently with the kernel value as probability.
    pub fn sample_wrandom(&self, n: usize, seed: u64) -> Result<LabeledGraph> {
        if n == 0 {
            return Err(Error::invalid("sample size must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cumulative: Vec<f64> = self
            .weights
            .iter()
            .scan(0.0, |acc, b| {
                *acc += b.to_f64();
                Some(*acc)
            })
            .collect();
        let total = *cumulative.last().expect("nonempty");
        let steps: Vec<usize> = (0..n)
            .map(|_| {
                let u: f64 = rng.gen::<f64>() * total;
                cumulative.iter().position(|&c| u < c).unwrap_or(cumulative.len() - 1)
            })
            .collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let p = self.kernel[(steps[i], steps[j])].to_f64();
                if rng.gen::<f64>() < p {
                    edges.push((i, j));
                }
            }
        }
        LabeledGraph::simple(n, 0, &edges)
    }
}

fn same_weights<T: Scalar>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, FLOAT_SYMMETRY_TOL))
}

/// `(K1 ∘ K2)(x, y) = Σ_z K1(x, z) b_z K2(z, y)`, i.e. `A1 · diag(b) · A2`.
pub fn operator_product<T: Scalar>(a: &impl Kernel<T>, b: &impl Kernel<T>) -> Result<StepKernel<T>> {
    if !same_weights(a.weights(), b.weights()) {
        return Err(Error::WeightMismatch);
    }
    let kernel = a.matrix().mul_diag_mul(a.weights(), b.matrix());
    StepKernel::new(a.weights().to_vec(), kernel)
}

/// `m`-fold operator product; `m = 1` returns the kernel itself.
pub fn operator_power<T: Scalar>(w: &impl Kernel<T>, m: usize) -> Result<StepKernel<T>> {
    if m == 0 {
        return Err(Error::invalid("operator power must be at least 1"));
    }
    let mut acc = StepKernel::new(w.weights().to_vec(), w.matrix().clone())?;
    for _ in 1..m {
        acc = operator_product(&acc, w)?;
    }
    Ok(acc)
}

/// Weighted L1 distance `Σ b_x b_y |K1(x,y) - K2(x,y)|`.
pub fn l1_distance<T: Scalar>(a: &impl Kernel<T>, b: &impl Kernel<T>) -> Result<T> {
    if !same_weights(a.weights(), b.weights()) {
        return Err(Error::WeightMismatch);
    }
    let w = a.weights();
    let mut total = T::zero();
    for x in 0..w.len() {
        for y in 0..w.len() {
            let d = (a.entry(x, y).clone() - b.entry(x, y).clone()).abs();
            if !d.is_zero() {
                total = total + w[x].clone() * w[y].clone() * d;
            }
        }
    }
    Ok(total)
}

/// Named generator families. All are exact.
pub mod generators {
    use super::*;

    pub fn constant(p: Rational) -> Result<StepGraphon<Rational>> {
        StepGraphon::new(vec![Rational::one()], Matrix::filled(1, 1, p))
    }

    /// The balanced two-step bipartite graphon (the graphon of `K_2`).
    pub fn bipartite() -> StepGraphon<Rational> {
        StepGraphon::from_simple_graph(&LabeledGraph::complete(2)).expect("K2 is simple")
    }

    fn check_alpha(alpha: &Rational) -> Result<()> {
        if !(alpha.is_positive() && *alpha < rat(1, 2)) {
            return Err(Error::invalid("alpha must lie in (0, 1/2)"));
        }
        Ok(())
    }

    /// Circulant graph on `n` nodes, each joined to the `floor(alpha n)`
    /// nearest successors and predecessors, as a uniform step graphon.
    pub fn cyclic(n: usize, alpha: &Rational) -> Result<StepGraphon<Rational>> {
        check_alpha(alpha)?;
        if n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        let reach = (alpha * Rational::from_integer(BigInt::from(n))).floor().to_integer();
        let reach = reach.to_usize().expect("reach below n");
        let kernel = Matrix::from_fn(n, n, |i, j| {
            let d = i.abs_diff(j);
            let d = d.min(n - d);
            if d >= 1 && d <= reach {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        StepGraphon::new(vec![rat(1, n as i64); n], kernel)
    }

    /// Circle graphon discretized into `q` equal arcs: arcs are joined when
    /// the circular distance of their midpoints is at most `alpha`.
    pub fn circle(q: usize, alpha: &Rational) -> Result<StepGraphon<Rational>> {
        check_alpha(alpha)?;
        if q == 0 {
            return Err(Error::invalid("q must be at least 1"));
        }
        let qr = Rational::from_integer(BigInt::from(q));
        let kernel = Matrix::from_fn(q, q, |i, j| {
            let d = i.abs_diff(j);
            let d = Rational::from_integer(BigInt::from(d.min(q - d))) / qr.clone();
            if d <= *alpha {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        StepGraphon::new(vec![rat(1, q as i64); q], kernel)
    }

    /// Step version of the binary-expansion graphon truncated at depth `n`.
    ///
    /// Step layout: step 0 is the residual band next to the point 0 (weight
    /// `2^{-n-1}`, kernel value 1/2 to the whole second half); steps `1..=n`
    /// are the bands `k = 1..n` of the first half with weight `2^{-k-1}`;
    /// steps `n+1..` are the `2^n` dyadic intervals `j` of the second half,
    /// each of weight `2^{-n-1}`. Band `k` is joined to interval `j` with the
    /// `k`-th binary digit of `j`; all other pairs are 0.
    pub fn dyadic(n: usize) -> Result<StepGraphon<Rational>> {
        if n == 0 {
            return Err(Error::invalid("depth must be at least 1"));
        }
        if n > 16 {
            return Err(Error::cap("dyadic depth is limited to 16"));
        }
        let half_steps = 1usize << n;
        let q = 1 + n + half_steps;
        let pow2 = |e: usize| Rational::new(BigInt::one(), BigInt::one() << e);
        let mut weights = vec![pow2(n + 1)];
        weights.extend((1..=n).map(|k| pow2(k + 1)));
        weights.extend(std::iter::repeat_n(pow2(n + 1), half_steps));
        let kernel = Matrix::from_fn(q, q, |x, y| {
            let (band, interval) = match (x <= n, y <= n) {
                (true, false) => (x, y - n - 1),
                (false, true) => (y, x - n - 1),
                _ => return Rational::zero(),
            };
            if band == 0 {
                rat(1, 2)
            } else if (interval >> (n - band)) & 1 == 1 {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        StepGraphon::new(weights, kernel)
    }

    /// Index of the residual step of [`dyadic`].
    pub const DYADIC_RESIDUAL: usize = 0;

    /// Index of the band-`k` step of [`dyadic`] (`1 <= k <= n`).
    pub fn dyadic_band(k: usize) -> usize {
        k
    }

    /// The four-step weighted graph whose first-neighborhood densities are
    /// far apart at two points that are close in the similarity metric.
    pub fn nonlip(eps: &Rational) -> Result<StepGraphon<Rational>> {
        if !(eps.is_positive() && *eps < rat(1, 3)) {
            return Err(Error::invalid("epsilon must lie in (0, 1/3)"));
        }
        let r = |n, d| rat(n, d);
        let kernel = Matrix::from_rows(vec![
            vec![r(1, 4), r(1, 2), r(0, 1), r(1, 1)],
            vec![r(1, 2), r(1, 1), r(1, 1), r(0, 1)],
            vec![r(0, 1), r(1, 1), r(0, 1), r(0, 1)],
            vec![r(1, 1), r(0, 1), r(0, 1), r(0, 1)],
        ])
        .expect("square");
        let weights = vec![r(2, 3) - eps.clone(), r(1, 3) - eps.clone(), eps.clone(), eps.clone()];
        StepGraphon::new(weights, kernel)
    }

    /// Random exact graphon: integer weights in `1..=4` normalized, kernel
    /// entries drawn from `{0, 1/denom, ..., 1}`.
    pub fn random_rational(q: usize, denom: u32, seed: u64) -> Result<StepGraphon<Rational>> {
        if q == 0 || denom == 0 {
            return Err(Error::invalid("q and denom must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<i64> = (0..q).map(|_| rng.gen_range(1..=4)).collect();
        let total: i64 = raw.iter().sum();
        let weights = raw.iter().map(|&w| rat(w, total)).collect();
        let mut kernel = Matrix::filled(q, q, Rational::zero());
        for x in 0..q {
            for y in x..q {
                let v = rat(rng.gen_range(0..=denom) as i64, denom as i64);
                kernel[(x, y)] = v.clone();
                kernel[(y, x)] = v;
            }
        }
        StepGraphon::new(weights, kernel)
    }

    /// Random float graphon with weights and entries drawn uniformly.
    pub fn random_float(q: usize, seed: u64) -> Result<StepGraphon<f64>> {
        if q == 0 {
            return Err(Error::invalid("q must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<f64> = (0..q).map(|_| rng.gen_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let mut kernel = Matrix::filled(q, q, 0.0);
        for x in 0..q {
            for y in x..q {
                let v = rng.gen::<f64>();
                kernel[(x, y)] = v;
                kernel[(y, x)] = v;
            }
        }
        // renormalize so the weights sum to one within rounding
        let s: f64 = weights.iter().sum();
        StepGraphon::new(weights.iter().map(|w| w / s).collect(), kernel)
    }

    /// Parses a generator spec such as `nonlip:1/100`, `dyadic:3`,
    /// `cyclic:40:1/4`, `circle:64:1/4`, `constant:1/2`, `random:5:7`
    /// (q and seed) or `graph:petersen`.
    pub fn from_spec(spec: &str) -> Result<StepGraphon<Rational>> {
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = || Error::Parse(format!("bad generator spec `{spec}`"));
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["constant", p] => constant(parse_rational(p)?),
            ["bipartite"] => Ok(bipartite()),
            ["cyclic", n, a] => cyclic(int(n)?, &parse_rational(a)?),
            ["circle", q, a] => circle(int(q)?, &parse_rational(a)?),
            ["dyadic", n] => dyadic(int(n)?),
            ["nonlip", e] => nonlip(&parse_rational(e)?),
            ["random", q, seed] => random_rational(int(q)?, 4, int(seed)? as u64),
            ["graph", name] => StepGraphon::from_simple_graph(&crate::graphs::named_graph(name)?),
            _ => Err(bad()),
        }
    }
}

/// Reads the optional `"mode"` field of a graphon JSON document.
pub fn json_mode(s: &str) -> Result<Option<Mode>> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    match v.get("mode") {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(m)) => m.parse().map(Some),
        Some(_) => Err(Error::Parse("mode must be a string".into())),
    }
}

fn json_number<T: Scalar>(v: &Value) -> Result<T> {
    match v {
        Value::String(s) => Ok(T::from_rational(&parse_rational(s)?)),
        Value::Number(n) => match T::MODE {
            Mode::Exact => Ok(T::from_rational(&parse_rational(&n.to_string())?)),
            Mode::Float => {
                let f = n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}")))?;
                Ok(T::from_rational(&crate::scalar::rational_from_f64(f)?))
            }
        },
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

/// Parses `{"weights": [...], "matrix": [[...]], "mode": "exact"}`. Entries
/// may be `"p/q"` strings or JSON numbers; `raw` allows zero weights.
pub fn graphon_from_json<T: Scalar>(s: &str, raw: bool) -> Result<StepGraphon<T>> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    let weights = v
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing `weights` array".into()))?
        .iter()
        .map(json_number)
        .collect::<Result<Vec<T>>>()?;
    let rows = v
        .get("matrix")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing `matrix` array".into()))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?
                .iter()
                .map(json_number)
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let kernel = Matrix::from_rows(rows).ok_or_else(|| Error::Parse("ragged matrix".into()))?;
    if raw {
        StepGraphon::raw(weights, kernel)
    } else {
        StepGraphon::new(weights, kernel)
    }
}

/// JSON value of a scalar: `"p/q"` strings for rationals, numbers for floats.
pub fn scalar_json<T: Scalar>(x: &T) -> Value {
    match T::MODE {
        Mode::Exact => Value::String(x.to_string()),
        Mode::Float => serde_json::json!(x.to_f64()),
    }
}

pub fn graphon_to_json<T: Scalar>(w: &impl Kernel<T>) -> Value {
    serde_json::json!({
        "weights": w.weights().iter().map(scalar_json).collect::<Vec<_>>(),
        "matrix": w.matrix().to_rows().iter()
            .map(|r| r.iter().map(scalar_json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "mode": T::MODE,
    })
}

/// Least common multiple of the denominators of a list of rationals.
pub(crate) fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::generators::*;
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        rat(n, d)
    }

    #[test]
    fn validation_examples() {
        assert!(constant(r(1, 2)).is_ok());
        let bad = StepGraphon::new(vec![r(1, 2), r(3, 4)], Matrix::filled(2, 2, r(0, 1)));
        assert!(bad.is_err());
        assert!(nonlip(&r(1, 100)).is_ok());
        let asym = Matrix::from_rows(vec![vec![r(0, 1), r(1, 2)], vec![r(1, 3), r(0, 1)]]).unwrap();
        assert!(StepGraphon::new(vec![r(1, 2), r(1, 2)], asym).is_err());
        assert!(StepGraphon::new(vec![r(1, 1)], Matrix::filled(1, 1, r(3, 2))).is_err());
        assert!(StepGraphon::new(vec![r(-1, 2), r(3, 2)], Matrix::filled(2, 2, r(0, 1))).is_err());
        assert!(StepGraphon::raw(vec![r(0, 1), r(1, 1)], Matrix::filled(2, 2, r(0, 1))).is_ok());
        assert!(StepGraphon::new(vec![r(0, 1), r(1, 1)], Matrix::filled(2, 2, r(0, 1))).is_err());
    }

    #[test]
    fn float_symmetry_tolerance() {
        let m = Matrix::from_rows(vec![vec![0.0, 0.5], vec![0.5 + 1e-13, 0.0]]).unwrap();
        assert!(StepGraphon::new(vec![0.5, 0.5], m).is_ok());
        let m = Matrix::from_rows(vec![vec![0.0, 0.5], vec![0.5 + 1e-9, 0.0]]).unwrap();
        assert!(StepGraphon::new(vec![0.5, 0.5], m).is_err());
    }

    #[test]
    fn graph_embeddings() {
        let k2 = bipartite();
        assert_eq!(k2.weights(), &[r(1, 2), r(1, 2)]);
        assert_eq!(k2.entry(0, 1), &r(1, 1));
        assert_eq!(k2.entry(0, 0), &r(0, 1));
        let p: StepGraphon<Rational> = StepGraphon::from_simple_graph(&LabeledGraph::petersen()).unwrap();
        for x in 0..10 {
            let ones = (0..10).filter(|&y| p.entry(x, y).is_one()).count();
            assert_eq!(ones, 3);
        }
        let c5: StepGraphon<Rational> = StepGraphon::from_simple_graph(&LabeledGraph::cycle(5)).unwrap();
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(c5.entry(x, y), c5.entry((x + 1) % 5, (y + 1) % 5));
            }
        }
    }

    #[test]
    fn nonlip_operator_square_at_zero_epsilon() {
        // the epsilon = 0 limit is not a valid graphon (zero weights), so use raw
        let g = nonlip(&r(1, 100)).unwrap();
        let zero_eps = StepGraphon::raw(
            vec![r(2, 3), r(1, 3), r(0, 1), r(0, 1)],
            g.matrix().clone(),
        )
        .unwrap();
        let sq = operator_product(&zero_eps, &zero_eps).unwrap();
        let expected = [
            [r(1, 8), r(1, 4), r(1, 6), r(1, 6)],
            [r(1, 4), r(1, 2), r(1, 3), r(1, 3)],
            [r(1, 6), r(1, 3), r(1, 3), r(0, 1)],
            [r(1, 6), r(1, 3), r(0, 1), r(2, 3)],
        ];
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(sq.entry(x, y), &expected[x][y], "entry ({x},{y})");
            }
        }
    }

    #[test]
    fn operator_powers() {
        let c = constant(r(1, 3)).unwrap();
        let sq = operator_product(&c, &c).unwrap();
        assert_eq!(sq.entry(0, 0), &r(1, 9));
        let b = bipartite();
        assert_eq!(operator_power(&b, 1).unwrap().matrix(), b.matrix());
        let p2 = operator_power(&b, 2).unwrap();
        assert_eq!(p2, operator_product(&b, &b).unwrap());
        assert_eq!(p2.entry(0, 0), &r(1, 2));
        assert_eq!(p2.entry(0, 1), &r(0, 1));
        assert!(operator_power(&b, 0).is_err());
    }

    #[test]
    fn operator_product_rejects_weight_mismatch() {
        let a = bipartite();
        let b = StepGraphon::new(vec![r(1, 3), r(2, 3)], a.matrix().clone()).unwrap();
        assert_eq!(operator_product(&a, &b).unwrap_err(), Error::WeightMismatch);
        assert_eq!(l1_distance(&a, &b).unwrap_err(), Error::WeightMismatch);
    }

    #[test]
    fn l1_distance_examples() {
        let z = constant(r(0, 1)).unwrap();
        let o = constant(r(1, 1)).unwrap();
        assert_eq!(l1_distance(&z, &o).unwrap(), r(1, 1));
        assert_eq!(l1_distance(&o, &o).unwrap(), r(0, 1));
        let a = constant(r(1, 4)).unwrap();
        let b = constant(r(3, 4)).unwrap();
        assert_eq!(l1_distance(&a, &b).unwrap(), r(1, 2));
    }

    #[test]
    fn pullback_examples() {
        let c = constant(r(1, 2)).unwrap();
        let fine = c.pullback(&[0, 0, 0], vec![r(1, 3), r(1, 3), r(1, 3)]).unwrap();
        assert!(fine.matrix().iter().all(|v| *v == r(1, 2)));
        let same = c.pullback(&[0], vec![r(1, 1)]).unwrap();
        assert_eq!(same, c);
        assert!(c.pullback(&[0, 0], vec![r(1, 3), r(1, 3)]).is_err());
        assert!(c.pullback(&[1], vec![r(1, 1)]).is_err());
    }

    #[test]
    fn direct_sum_of_constants() {
        let o = constant(r(1, 1)).unwrap();
        let s = o.direct_sum(&o, r(1, 2)).unwrap();
        assert_eq!(s.weights(), &[r(1, 2), r(1, 2)]);
        assert_eq!(s.entry(0, 0), &r(1, 1));
        assert_eq!(s.entry(0, 1), &r(0, 1));
        assert!(o.direct_sum(&o, r(1, 1)).is_err());
    }

    #[test]
    fn generator_parameter_errors() {
        assert!(cyclic(10, &r(1, 2)).is_err());
        assert!(cyclic(10, &r(0, 1)).is_err());
        assert!(cyclic(0, &r(1, 4)).is_err());
        assert!(dyadic(0).is_err());
        assert!(nonlip(&r(1, 3)).is_err());
        assert!(nonlip(&r(0, 1)).is_err());
        assert!(circle(8, &r(3, 5)).is_err());
    }

    #[test]
    fn cyclic_structure() {
        let g = cyclic(40, &r(1, 4)).unwrap();
        for x in 0..40 {
            let deg = (0..40).filter(|&y| g.entry(x, y).is_one()).count();
            assert_eq!(deg, 20);
            assert!(g.entry(x, x).is_zero());
        }
        let c = circle(8, &r(1, 4)).unwrap();
        // distances 0, 1/8, 2/8 are within 1/4 (closed threshold)
        assert_eq!((0..8).filter(|&y| c.entry(0, y).is_one()).count(), 5);
    }

    #[test]
    fn dyadic_layout() {
        let g = dyadic(3).unwrap();
        assert_eq!(g.steps(), 1 + 3 + 8);
        assert_eq!(g.weights()[0], r(1, 16));
        assert_eq!(g.weights()[1], r(1, 4));
        assert_eq!(g.weights()[3], r(1, 16));
        // band 1 reads the leading binary digit of the interval index
        assert_eq!(g.entry(1, 4), &r(0, 1));
        assert_eq!(g.entry(1, 4 + 4), &r(1, 1));
        assert_eq!(g.entry(0, 5), &r(1, 2));
        assert_eq!(g.entry(1, 2), &r(0, 1));
    }

    #[test]
    fn sampling_extremes_and_determinism() {
        let full = constant(r(1, 1)).unwrap().sample_wrandom(6, 1).unwrap();
        assert_eq!(full.edge_count(), 15);
        let none = constant(r(0, 1)).unwrap().sample_wrandom(6, 1).unwrap();
        assert_eq!(none.edge_count(), 0);
        let w = nonlip(&r(1, 10)).unwrap();
        assert_eq!(w.sample_wrandom(30, 9).unwrap(), w.sample_wrandom(30, 9).unwrap());
    }

    #[test]
    fn sampled_edge_density_concentrates() {
        let g = constant(r(1, 2)).unwrap().sample_wrandom(2_000, 42).unwrap();
        let n = 2_000f64;
        let density = g.edge_count() as f64 / (n * (n - 1.0) / 2.0);
        assert!((density - 0.5).abs() < 0.02, "density {density}");
    }

    #[test]
    fn json_round_trip_and_modes() {
        let doc = r#"{"weights":["2/3","1/3"],"matrix":[["1/4","1/2"],["1/2","1"]],"mode":"exact"}"#;
        let g: StepGraphon<Rational> = graphon_from_json(doc, false).unwrap();
        assert_eq!(g.weights()[0], r(2, 3));
        assert_eq!(json_mode(doc).unwrap(), Some(Mode::Exact));
        let back: StepGraphon<Rational> =
            graphon_from_json(&graphon_to_json(&g).to_string(), false).unwrap();
        assert_eq!(back, g);
        let float_doc = r#"{"weights":[0.5,0.5],"matrix":[[0.25,1],[1,0]]}"#;
        let f: StepGraphon<f64> = graphon_from_json(float_doc, false).unwrap();
        assert_eq!(f.entry(0, 0), &0.25);
        let exact_from_decimal: StepGraphon<Rational> = graphon_from_json(float_doc, false).unwrap();
        assert_eq!(exact_from_decimal.entry(0, 0), &r(1, 4));
        assert!(graphon_from_json::<Rational>(r#"{"weights":[1]}"#, false).is_err());
    }

    #[test]
    fn spec_strings() {
        assert_eq!(from_spec("nonlip:1/100").unwrap(), nonlip(&r(1, 100)).unwrap());
        assert_eq!(from_spec("graph:C5").unwrap().steps(), 5);
        assert!(from_spec("mystery:1").is_err());
    }
}
