use crate::exactalg::{Rational, Ring};

/// Truncated power series `c_0 + c_1 s + ... + c_{order-1} s^{order-1}`
/// over a ring. Constants carry an unbounded order so they combine with any
/// truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<R> {
    coeffs: Vec<R>,
    order: usize,
}

impl<R: Ring> Jet<R> {
    pub fn new(mut coeffs: Vec<R>, order: usize) -> Self {
        coeffs.truncate(order);
        Jet { coeffs, order }
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

impl<R: Ring> Ring for Jet<R> {
    fn zero() -> Self {
        Jet {
            coeffs: Vec::new(),
            order: usize::MAX,
        }
    }

    fn one() -> Self {
        Jet {
            coeffs: vec![R::one()],
            order: usize::MAX,
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(R::is_zero)
    }

    fn add_ref(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let n = self.coeffs.len().max(other.coeffs.len()).min(order);
        Jet {
            coeffs: (0..n).map(|k| self.coeff(k).add_ref(&other.coeff(k))).collect(),
            order,
        }
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Jet {
                coeffs: Vec::new(),
                order,
            };
        }
        let n = (self.coeffs.len() + other.coeffs.len() - 1).min(order);
        let mut out = vec![R::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n.saturating_sub(i)) {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Jet { coeffs: out, order }
    }

    fn neg_ref(&self) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(R::neg_ref).collect(),
            order: self.order,
        }
    }

    fn from_rational(r: &Rational) -> Self {
        Jet {
            coeffs: vec![R::from_rational(r)],
            order: usize::MAX,
        }
    }
}
