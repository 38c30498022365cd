use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Rational, Ring};

/// A linear map `W -> Hom(k^cols, k^rows)`: a matrix of linear forms on `W`.
///
/// `M(F)[i][j] = sum_w coeff(w, i, j) * F[w]`. Coefficients are kept per
/// coordinate of `W` as sparse `(i, j, c)` triples; most builtin maps have
/// one nonzero entry per `(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMatrixMap {
    rows: usize,
    cols: usize,
    terms: Vec<Vec<(usize, usize, Rational)>>,
}

impl LinearMatrixMap {
    pub fn zero(rows: usize, cols: usize, wdim: usize) -> Self {
        LinearMatrixMap {
            rows,
            cols,
            terms: vec![Vec::new(); wdim],
        }
    }

    /// From a dense coefficient array indexed `[w][i][j]`, row-major.
    pub fn from_dense(wdim: usize, rows: usize, cols: usize, coeffs: &[Rational]) -> Result<Self> {
        if coeffs.len() != wdim * rows * cols {
            return Err(Error::DimensionMismatch {
                expected: wdim * rows * cols,
                got: coeffs.len(),
            });
        }
        let mut m = Self::zero(rows, cols, wdim);
        for w in 0..wdim {
            for i in 0..rows {
                for j in 0..cols {
                    let c = &coeffs[(w * rows + i) * cols + j];
                    if !c.is_zero() {
                        m.terms[w].push((i, j, c.clone()));
                    }
                }
            }
        }
        Ok(m)
    }

    pub(crate) fn push(&mut self, w: usize, i: usize, j: usize, c: Rational) {
        debug_assert!(i < self.rows && j < self.cols);
        if !c.is_zero() {
            self.terms[w].push((i, j, c));
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn wdim(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: usize, i: usize, j: usize) -> Rational {
        self.terms[w]
            .iter()
            .filter(|t| t.0 == i && t.1 == j)
            .fold(Rational::zero(), |acc, t| acc + &t.2)
    }

    /// Dense `[w][i][j]` coefficient array.
    pub fn to_dense(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.wdim() * self.rows * self.cols];
        for (w, ts) in self.terms.iter().enumerate() {
            for (i, j, c) in ts {
                out[(w * self.rows + i) * self.cols + j] += c;
            }
        }
        out
    }

    pub fn evaluate(&self, f: &[Rational]) -> Result<ExactMatrix> {
        if f.len() != self.wdim() {
            return Err(Error::DimensionMismatch {
                expected: self.wdim(),
                got: f.len(),
            });
        }
        let mut data = vec![Rational::zero(); self.rows * self.cols];
        for (x, ts) in f.iter().zip(&self.terms) {
            if x.is_zero() {
                continue;
            }
            for (i, j, c) in ts {
                data[i * self.cols + j] += x * c;
            }
        }
        ExactMatrix::from_vec(self.rows, self.cols, data)
    }
}
