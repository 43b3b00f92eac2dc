//! Dimension of the algebra generated by functions on a finite set under
//! pointwise multiplication.

use num_traits::{One, Zero};

use crate::scalar::{Mode, Rational, Scalar};
use crate::symmetry::linalg::{as_rational, mul_mod, pow_mod, rational_mod, PRIME};

trait Field: Clone {
    fn is_zero(&self) -> bool;
    fn sub_mul(&self, c: &Self, x: &Self) -> Self;
    fn mul(&self, x: &Self) -> Self;
    fn inv(&self) -> Self;
}

#[derive(Clone, Copy)]
struct ModP(u64);

impl Field for ModP {
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn sub_mul(&self, c: &Self, x: &Self) -> Self {
        ModP((self.0 + PRIME - mul_mod(c.0, x.0)) % PRIME)
    }
    fn mul(&self, x: &Self) -> Self {
        ModP(mul_mod(self.0, x.0))
    }
    fn inv(&self) -> Self {
        ModP(pow_mod(self.0, PRIME - 2))
    }
}

impl Field for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub_mul(&self, c: &Self, x: &Self) -> Self {
        self - c * x
    }
    fn mul(&self, x: &Self) -> Self {
        self * x
    }
    fn inv(&self) -> Self {
        Rational::one() / self
    }
}

/// Reduced row echelon basis with unit pivots.
struct Echelon<F> {
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Echelon<F> {
    fn insert(&mut self, mut v: Vec<F>) -> bool {
        for (pc, row) in &self.rows {
            let c = v[*pc].clone();
            if !c.is_zero() {
                for (a, b) in v.iter_mut().zip(row) {
                    *a = a.sub_mul(&c, b);
                }
            }
        }
        let Some(pc) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pc].inv();
        v.iter_mut().for_each(|x| *x = x.mul(&inv));
        for (_, row) in self.rows.iter_mut() {
            let c = row[pc].clone();
            if !c.is_zero() {
                for (a, b) in row.iter_mut().zip(&v) {
                    *a = a.sub_mul(&c, b);
                }
            }
        }
        self.rows.push((pc, v));
        true
    }

    fn product(&self, i: usize, j: usize) -> Vec<F> {
        self.rows[i].1.iter().zip(&self.rows[j].1).map(|(a, b)| a.mul(b)).collect()
    }

    fn len(&self) -> usize {
        self.rows.len()
    }
}

/// Adds products of basis pairs until the span is closed or `bound` is hit.
fn close<F: Field>(generators: Vec<Vec<F>>, bound: usize) -> usize {
    let mut basis = Echelon { rows: Vec::new() };
    for g in generators {
        basis.insert(g);
        if basis.len() >= bound {
            return basis.len();
        }
    }
    let mut i = 0;
    while i < basis.len() {
        for j in 0..=i {
            let p = basis.product(i, j);
            basis.insert(p);
            if basis.len() >= bound {
                return basis.len();
            }
        }
        i += 1;
    }
    basis.len()
}

/// Float version: orthonormal basis, a product joins when its residual is
/// above `tol` relative to its norm.
fn close_float(generators: Vec<Vec<f64>>, bound: usize, tol: f64) -> usize {
    fn insert(basis: &mut Vec<Vec<f64>>, mut v: Vec<f64>, tol: f64) {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return;
        }
        for _ in 0..2 {
            for e in basis.iter() {
                let c: f64 = e.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(e).for_each(|(a, b)| *a -= c * b);
            }
        }
        let rest = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if rest > tol * norm {
            basis.push(v.into_iter().map(|x| x / rest).collect());
        }
    }
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for g in generators {
        insert(&mut basis, g, tol);
        if basis.len() >= bound {
            return basis.len();
        }
    }
    let mut i = 0;
    while i < basis.len() {
        for j in 0..=i {
            let p: Vec<f64> = basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).collect();
            insert(&mut basis, p, tol);
            if basis.len() >= bound {
                return basis.len();
            }
        }
        i += 1;
    }
    basis.len()
}

/// Dimension of the smallest space containing `generators` and closed under
/// pointwise products. `bound` must be an upper bound on the answer; the
/// search stops once it is reached.
///
/// Exact inputs are first closed modulo a prime, which can only lose
/// dimension; reaching `bound` there is conclusive, otherwise the closure is
/// redone over the rationals.
pub fn closure_dimension<T: Scalar>(generators: &[Vec<T>], bound: usize, tol: f64) -> usize {
    match T::MODE {
        Mode::Float => close_float(generators.iter().map(|g| g.iter().map(Scalar::to_f64).collect()).collect(), bound, tol),
        Mode::Exact => {
            let exact: Vec<Vec<Rational>> = generators.iter().map(|g| g.iter().map(as_rational).collect()).collect();
            let modular: Option<Vec<Vec<ModP>>> =
                exact.iter().map(|g| g.iter().map(|x| rational_mod(x).map(ModP)).collect()).collect();
            if let Some(m) = modular {
                let d = close(m, bound);
                if d >= bound {
                    return d;
                }
            }
            close(exact, bound)
        }
    }
}
