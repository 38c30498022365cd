use rand::Rng;

use super::elim::{independent_columns, solve};
use super::matrix::ExactMatrix;
use super::ring::Ring;
use super::{is_zero_vector, rat, Rational, Vector};
use crate::error::{Error, Result};

/// Linear subspace of `Q^ambient_dim` held by an independent spanning set.
///
/// Dimensions are affine (cone) dimensions. Equality is decided by mutual
/// membership, never by comparing bases.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    /// Span of `vectors`. The stored basis is a subset of the inputs, so
    /// integral generators give an integral basis.
    pub fn span(ambient_dim: usize, vectors: Vec<Vector>) -> Result<Self> {
        if vectors.is_empty() {
            return Ok(Subspace::zero(ambient_dim));
        }
        let m = ExactMatrix::from_columns(ambient_dim, &vectors)?;
        let keep = independent_columns(&m);
        let mut vectors: Vec<Option<Vector>> = vectors.into_iter().map(Some).collect();
        let basis = keep.iter().map(|&j| vectors[j].take().unwrap()).collect();
        Ok(Subspace { ambient_dim, basis })
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut e = vec![Rational::zero(); ambient_dim];
                e[i] = rat(1);
                e
            })
            .collect();
        Subspace { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Vector> {
        self.basis
    }

    /// Basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn basis_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_columns(self.ambient_dim, &self.basis).expect("basis lengths checked")
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        Ok(solve_membership(self, v)?.is_some())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        check_ambient(self, other)?;
        for v in &self.basis {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, other: &Subspace) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.is_subspace_of(other)?)
    }
}

fn check_ambient(a: &Subspace, b: &Subspace) -> Result<()> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: a.ambient_dim,
            got: b.ambient_dim,
        });
    }
    Ok(())
}

pub fn span_sum(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    check_ambient(a, b)?;
    let gens = a.basis.iter().chain(&b.basis).cloned().collect();
    Subspace::span(a.ambient_dim, gens)
}

/// Coordinates of `v` in the basis of `s`, or `None` when `v` is not in `s`.
pub fn solve_membership(s: &Subspace, v: &[Rational]) -> Result<Option<Vector>> {
    if v.len() != s.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: s.ambient_dim,
            got: v.len(),
        });
    }
    if s.basis.is_empty() {
        return Ok(is_zero_vector(v).then(Vec::new));
    }
    solve(&s.basis_matrix(), v)
}

/// Nonzero integer combination of the basis with coefficients in
/// `[-bound, bound]`.
pub fn random_in_span<R: Rng + ?Sized>(s: &Subspace, bound: u64, rng: &mut R) -> Result<Vector> {
    if s.dim() == 0 {
        return Err(Error::EmptySubspace);
    }
    if bound == 0 {
        return Err(Error::InvalidArgument("coefficient bound must be at least 1".into()));
    }
    let b = bound as i64;
    loop {
        let coeffs: Vec<i64> = (0..s.dim()).map(|_| rng.gen_range(-b..=b)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        let mut v = vec![Rational::zero(); s.ambient_dim];
        for (c, u) in coeffs.iter().zip(&s.basis) {
            if *c == 0 {
                continue;
            }
            let c = rat(*c);
            for (x, y) in v.iter_mut().zip(u) {
                *x += &c * y;
            }
        }
        // basis is independent, so a nonzero coefficient vector gives v != 0
        debug_assert!(!is_zero_vector(&v));
        return Ok(v);
    }
}
