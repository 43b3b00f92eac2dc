//! Rank and positive-semidefiniteness for exact and float matrices.

use nalgebra::SymmetricEigen;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::matrix::Matrix;
use crate::scalar::{Mode, Rational, Repr, Scalar};

/// Default relative singular-value threshold in float mode.
pub const FLOAT_RANK_TOL: f64 = 1e-9;

/// Rank by exact Gaussian elimination (rationals) or by counting singular
/// values above `tol · σ_max` (floats).
pub fn rank<T: Scalar>(m: &Matrix<T>, tol: f64) -> usize {
    match T::MODE {
        Mode::Exact => rank_exact(m.to_rows().iter().map(|r| r.iter().map(as_rational).collect()).collect()),
        Mode::Float => rank_float(&m.to_f64(), tol),
    }
}

pub(crate) fn as_rational<T: Scalar>(x: &T) -> Rational {
    match x.repr() {
        Repr::Exact(r) => r.clone(),
        Repr::Float(f) => crate::scalar::rational_from_f64(f).expect("finite"),
    }
}

pub fn rank_exact(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        let prow = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone() / pivot.clone();
            for c in col..ncols {
                if !prow[c].is_zero() {
                    row[c] = row[c].clone() - factor.clone() * prow[c].clone();
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub fn rank_float(m: &Matrix<f64>, tol: f64) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let sv = m.to_nalgebra().singular_values();
    let max = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * max).count()
}

/// Exact PSD test by symmetric elimination with diagonal pivoting: pivot on
/// a positive diagonal entry and take the Schur complement; a negative
/// diagonal, or a zero diagonal with a nonzero row, rules PSD out.
pub fn is_psd_exact(m: &Matrix<Rational>) -> bool {
    let mut a = m.to_rows();
    let mut active: Vec<usize> = (0..a.len()).collect();
    while !active.is_empty() {
        if active.iter().any(|&i| a[i][i].is_negative()) {
            return false;
        }
        let Some(pos) = active.iter().position(|&i| a[i][i].is_positive()) else {
            return active.iter().all(|&i| active.iter().all(|&j| a[i][j].is_zero()));
        };
        let p = active.remove(pos);
        let d = a[p][p].clone();
        for &i in &active {
            if a[i][p].is_zero() {
                continue;
            }
            let f = a[i][p].clone() / d.clone();
            for &j in &active {
                if !a[p][j].is_zero() {
                    a[i][j] = a[i][j].clone() - f.clone() * a[p][j].clone();
                }
            }
        }
    }
    true
}

/// Smallest eigenvalue of a symmetric float matrix.
pub fn min_eigenvalue(m: &Matrix<f64>) -> f64 {
    if m.rows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(m.to_nalgebra()).eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b))
}

/// PSD test: exact in rational mode, `λ_min >= -tol · max(1, ‖M‖_max)` for
/// floats.
pub fn is_psd<T: Scalar>(m: &Matrix<T>, tol: f64) -> bool {
    match T::MODE {
        Mode::Exact => is_psd_exact(&m.map(as_rational)),
        Mode::Float => {
            let f = m.to_f64();
            let scale = f.max_abs().max(1.0);
            min_eigenvalue(&f) >= -tol * scale
        }
    }
}

pub(crate) const PRIME: u64 = (1 << 61) - 1;

pub(crate) fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    acc
}

fn big_mod(x: &BigInt) -> u64 {
    x.mod_floor(&BigInt::from(PRIME)).to_u64().expect("reduced")
}

/// Residue of a rational modulo the prime, or `None` if the denominator
/// vanishes there.
pub(crate) fn rational_mod(r: &Rational) -> Option<u64> {
    let den = big_mod(r.denom());
    if den == 0 {
        return None;
    }
    Some(mul_mod(big_mod(r.numer()), pow_mod(den, PRIME - 2)))
}

/// Incrementally built row space with rank queries.
///
/// Exact vectors are reduced modulo a large prime. The rank there never
/// exceeds the rank over the rationals, so it settles the question whenever
/// it reaches a known upper bound; otherwise [`SpanBuilder::rank`] falls back
/// to exact elimination over every vector seen.
pub struct SpanBuilder<T> {
    len: usize,
    modular: Vec<(usize, Vec<u64>)>,
    modular_ok: bool,
    all: Vec<Vec<T>>,
}

impl<T: Scalar> SpanBuilder<T> {
    pub fn new(len: usize) -> Self {
        SpanBuilder { len, modular: Vec::new(), modular_ok: T::MODE == Mode::Exact, all: Vec::new() }
    }

    /// Lower bound on the rank (exact when the modular reduction is
    /// faithful); cheap to query after every insertion.
    pub fn modular_rank(&self) -> usize {
        self.modular.len()
    }

    pub fn push(&mut self, v: Vec<T>) {
        assert_eq!(v.len(), self.len);
        if self.modular_ok {
            match v.iter().map(|x| rational_mod(&as_rational(x))).collect::<Option<Vec<u64>>>() {
                Some(mut r) => {
                    for (pc, row) in &self.modular {
                        let c = r[*pc];
                        if c != 0 {
                            for (a, b) in r.iter_mut().zip(row) {
                                *a = (*a + PRIME - mul_mod(c, *b)) % PRIME;
                            }
                        }
                    }
                    if let Some(pc) = r.iter().position(|&x| x != 0) {
                        let inv = pow_mod(r[pc], PRIME - 2);
                        r.iter_mut().for_each(|x| *x = mul_mod(*x, inv));
                        for (_, row) in self.modular.iter_mut() {
                            let c = row[pc];
                            if c != 0 {
                                for (a, b) in row.iter_mut().zip(&r) {
                                    *a = (*a + PRIME - mul_mod(c, *b)) % PRIME;
                                }
                            }
                        }
                        self.modular.push((pc, r));
                    }
                }
                None => self.modular_ok = false,
            }
        }
        self.all.push(v);
    }

    /// True when the modular rank alone certifies `rank == bound`, given
    /// that `bound` is an upper bound on the true rank.
    pub fn certified(&self, bound: usize) -> bool {
        self.modular_ok && self.modular.len() >= bound
    }

    pub fn rank(&self, tol: f64) -> usize {
        if self.all.is_empty() {
            return 0;
        }
        match T::MODE {
            Mode::Exact => {
                if self.modular_ok && self.modular.len() == self.len.min(self.all.len()) {
                    return self.modular.len();
                }
                rank_exact(self.all.iter().map(|r| r.iter().map(as_rational).collect()).collect())
            }
            Mode::Float => {
                let m = Matrix::from_fn(self.all.len(), self.len, |i, j| self.all[i][j].to_f64());
                rank_float(&m, tol)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()).unwrap()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]]), 0.0), 0);
        assert_eq!(rank(&m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), 0.0), 3);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[3, 6, 9]]), 0.0), 1);
        let f = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-13]]).unwrap();
        assert_eq!(rank(&f, FLOAT_RANK_TOL), 1);
        assert_eq!(rank(&Matrix::<f64>::identity(4), FLOAT_RANK_TOL), 4);
    }

    #[test]
    fn psd_checks() {
        assert!(is_psd(&m(&[&[2, 1], &[1, 2]]), 0.0));
        assert!(is_psd(&m(&[&[1, 1], &[1, 1]]), 0.0));
        assert!(!is_psd(&m(&[&[1, 2], &[2, 1]]), 0.0));
        assert!(!is_psd(&m(&[&[0, 1], &[1, 0]]), 0.0));
        assert!(is_psd(&m(&[&[0, 0], &[0, 3]]), 0.0));
        assert!(!is_psd(&m(&[&[1, 0], &[0, -1]]), 0.0));
        let f = Matrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0 - 1e-14]]).unwrap();
        assert!(is_psd(&f, 1e-9));
    }

    #[test]
    fn span_builder_modular_and_exact_agree() {
        let mut s = SpanBuilder::<Rational>::new(3);
        s.push(vec![rat(1, 3), rat(2, 3), rat(1, 1)]);
        s.push(vec![rat(2, 3), rat(4, 3), rat(2, 1)]);
        assert_eq!(s.modular_rank(), 1);
        s.push(vec![rat(0, 1), rat(1, 7), rat(0, 1)]);
        assert_eq!(s.modular_rank(), 2);
        assert_eq!(s.rank(0.0), 2);
        assert!(s.certified(2));
        let mut f = SpanBuilder::<f64>::new(2);
        f.push(vec![1.0, 0.0]);
        f.push(vec![2.0, 0.0]);
        assert_eq!(f.rank(FLOAT_RANK_TOL), 1);
    }
}
