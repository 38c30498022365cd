use num::{BigInt, Integer};

use super::fp::{is_prime, Fp};
use super::matrix::{ExactMatrix, Matrix};
use super::ring::{Field as FieldOps, IntegralDomain, Ring};
use super::Field;
use crate::error::{Error, Result};

/// Fraction-free (Bareiss) elimination over an integral domain. Returns the
/// rank and the pivot columns, which index a lexicographically first maximal
/// set of linearly independent columns.
pub fn bareiss_rank<D: IntegralDomain>(mut m: Matrix<D>) -> (usize, Vec<usize>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = D::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in c..cols {
                let a = m.get(r, j).clone();
                let b = m.get(p, j).clone();
                m.set(r, j, b);
                m.set(p, j, a);
            }
        }
        let piv = m.get(r, c).clone();
        for i in r + 1..rows {
            let lead = m.get(i, c).clone();
            for j in c + 1..cols {
                let v = piv
                    .mul_ref(m.get(i, j))
                    .sub_ref(&lead.mul_ref(m.get(r, j)))
                    .div_exact(&prev);
                m.set(i, j, v);
            }
            m.set(i, c, D::zero());
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    (r, pivots)
}

/// Scales each row by the lcm of its denominators.
fn clear_denominators(m: &ExactMatrix) -> Matrix<BigInt> {
    let mut data = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        let row = m.row(i);
        let l = row
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        data.extend(row.iter().map(|x| x.numer() * (&l / x.denom())));
    }
    Matrix::from_vec(m.rows(), m.cols(), data).expect("shape preserved")
}

/// Exact rank over the rationals.
pub fn rank(m: &ExactMatrix) -> usize {
    bareiss_rank(clear_denominators(m)).0
}

/// Indices of a maximal linearly independent set of columns, chosen greedily
/// left to right.
pub fn independent_columns(m: &ExactMatrix) -> Vec<usize> {
    bareiss_rank(clear_denominators(m)).1
}

/// Rank of the reduction of `m` modulo the prime `p`. Never exceeds the
/// rational rank.
pub fn rank_mod_p(m: &ExactMatrix, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Fp> = m
        .entries()
        .iter()
        .map(|x| Fp::from_rational(x, p))
        .collect::<Result<_>>()?;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if piv != r {
            for j in c..cols {
                a.swap(r * cols + j, piv * cols + j);
            }
        }
        let inv = a[r * cols + c].inv();
        for i in r + 1..rows {
            let f = a[i * cols + c] * inv;
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                let v = a[i * cols + j] - f * a[r * cols + j];
                a[i * cols + j] = v;
            }
        }
        r += 1;
    }
    Ok(r)
}

pub fn rank_in(m: &ExactMatrix, field: Field) -> Result<usize> {
    match field {
        Field::Rational => Ok(rank(m)),
        Field::Prime(p) => rank_mod_p(m, p),
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref<F: FieldOps>(m: &Matrix<F>) -> (Matrix<F>, Vec<usize>) {
    let mut m = m.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let a = m.get(r, j).clone();
                let b = m.get(p, j).clone();
                m.set(r, j, b);
                m.set(p, j, a);
            }
        }
        let inv = m.get(r, c).inv();
        for j in c..cols {
            let v = m.get(r, j).mul_ref(&inv);
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let f = m.get(i, c).clone();
            for j in c..cols {
                let v = m.get(i, j).sub_ref(&f.mul_ref(m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn kernel<F: FieldOps>(m: &Matrix<F>) -> Vec<Vec<F>> {
    let (red, pivots) = rref(m);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![F::zero(); cols];
            x[f] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = red.get(r, f).neg_ref();
            }
            x
        })
        .collect()
}

/// Some solution of `a x = b`, or `None` when the system is inconsistent.
pub fn solve<F: FieldOps>(a: &Matrix<F>, b: &[F]) -> Result<Option<Vec<F>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: b.len(),
        });
    }
    let aug = a.hcat(&Matrix::from_columns(a.rows(), &[b.to_vec()])?)?;
    let (red, pivots) = rref(&aug);
    if pivots.last() == Some(&a.cols()) {
        return Ok(None);
    }
    let mut x = vec![F::zero(); a.cols()];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = red.get(r, a.cols()).clone();
    }
    Ok(Some(x))
}
