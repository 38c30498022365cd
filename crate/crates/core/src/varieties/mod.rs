//! Segre, Veronese and Segre-Veronese varieties in affine charts.
//!
//! A factor `(n, d)` is `P^n` embedded by all degree-`d` monomials. The
//! chart sets `x_0 = 1` and uses `(u_1, ..., u_n)` for the remaining
//! coordinates. Monomials of a factor are ordered by exponent vector in
//! descending lexicographic order, so for `d = 1` the coordinates are
//! `x_0, x_1, ..., x_n`. The ambient space is the tensor product of the
//! factors' monomial spaces, first factor slowest.
//!
//! Symmetric coordinates are read in the divided-power basis: the chart map
//! sends `u` to the plain monomial values `u^a`, without multinomial
//! coefficients. This keeps the coefficient-extraction catalecticant at
//! rank one on the variety in every characteristic.

mod jet;

pub use jet::Jet;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactalg::{rat, Rational, Ring, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    /// Dimension of the projective factor, i.e. chart dimension.
    pub n: usize,
    /// Veronese degree.
    pub d: usize,
}

impl Factor {
    pub fn monomial_count(self) -> usize {
        binomial(self.n + self.d, self.d)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Exponent vectors of all degree-`d` monomials in `nvars` variables, in
/// descending lexicographic order.
pub fn monomials(nvars: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(nvars: usize, d: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if nvars == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(nvars - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, d, &mut Vec::new(), &mut out);
    out
}

/// Position of an exponent vector in [`monomials`] order.
pub fn monomial_index(exponents: &[usize]) -> usize {
    // Count monomials that precede `exponents` in descending lex order.
    let nvars = exponents.len();
    let mut remaining: usize = exponents.iter().sum();
    let mut idx = 0;
    for (k, &e) in exponents.iter().enumerate().take(nvars.saturating_sub(1)) {
        let rest = nvars - k - 1;
        // larger exponents at position k come first
        for bigger in e + 1..=remaining {
            idx += binomial(remaining - bigger + rest - 1, rest - 1);
        }
        remaining -= e;
    }
    idx
}

/// Parameterization of a Segre-Veronese variety.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarietyParam {
    factors: Vec<Factor>,
}

impl VarietyParam {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidVariety("no factors".into()));
        }
        if let Some(f) = factors.iter().find(|f| f.n == 0 || f.d == 0) {
            return Err(Error::InvalidVariety(format!(
                "factor (n={}, d={}) needs n >= 1 and d >= 1",
                f.n, f.d
            )));
        }
        Ok(VarietyParam { factors })
    }

    /// Segre variety of `P^{a_1 - 1} x ... x P^{a_k - 1}`.
    pub fn segre(dims: &[usize]) -> Result<Self> {
        if dims.iter().any(|&a| a < 2) {
            return Err(Error::InvalidVariety("segre factors need dimension >= 2".into()));
        }
        Self::new(dims.iter().map(|&a| Factor { n: a - 1, d: 1 }).collect())
    }

    pub fn veronese(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![Factor { n, d }])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim_x(&self) -> usize {
        self.factors.iter().map(|f| f.n).sum()
    }

    pub fn dim_w(&self) -> usize {
        self.factors.iter().map(|f| f.monomial_count()).product()
    }

    /// Tensor shape of the ambient space: one mode per factor.
    pub fn shape(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.monomial_count()).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.factors.iter().map(|f| f.d).max().unwrap_or(1)
    }

    pub fn is_segre(&self) -> bool {
        self.factors.len() >= 2 && self.factors.iter().all(|f| f.d == 1)
    }

    pub fn is_veronese(&self) -> bool {
        self.factors.len() == 1
    }

    fn check_point_len(&self, len: usize) -> Result<()> {
        if len != self.dim_x() {
            return Err(Error::DimensionMismatch {
                expected: self.dim_x(),
                got: len,
            });
        }
        Ok(())
    }

    /// The chart map over any commutative ring.
    pub fn chart_map<R: Ring>(&self, coords: &[R]) -> Result<Vec<R>> {
        self.check_point_len(coords.len())?;
        let mut out = vec![R::one()];
        let mut offset = 0;
        for f in &self.factors {
            let u = &coords[offset..offset + f.n];
            offset += f.n;
            // powers[j][e] = u_j^e
            let powers: Vec<Vec<R>> = u
                .iter()
                .map(|x| {
                    let mut p = vec![R::one()];
                    for e in 1..=f.d {
                        p.push(p[e - 1].mul_ref(x));
                    }
                    p
                })
                .collect();
            let values: Vec<R> = monomials(f.n + 1, f.d)
                .iter()
                .map(|exps| {
                    exps[1..]
                        .iter()
                        .zip(&powers)
                        .filter(|(&e, _)| e > 0)
                        .fold(R::one(), |acc, (&e, p)| acc.mul_ref(&p[e]))
                })
                .collect();
            out = out
                .iter()
                .flat_map(|a| values.iter().map(move |b| a.mul_ref(b)))
                .collect();
        }
        Ok(out)
    }

    /// Point of the affine cone over the chart point. Never zero: the
    /// leading coordinate is 1.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Vector> {
        self.chart_map(point)
    }

    /// Taylor coefficient vectors (orders `0..len`) of `s -> chart(base +
    /// dirs[0] s + dirs[1] s^2 + ...)`, by truncated polynomial composition.
    pub fn jet_vectors<R: Ring>(&self, base: &[R], dirs: &[Vec<R>], len: usize) -> Result<Vec<Vec<R>>> {
        self.check_point_len(base.len())?;
        for d in dirs {
            self.check_point_len(d.len())?;
        }
        let coords: Vec<Jet<R>> = (0..base.len())
            .map(|j| {
                let mut c = vec![base[j].clone()];
                c.extend(dirs.iter().map(|d| d[j].clone()));
                Jet::new(c, len)
            })
            .collect();
        let image = self.chart_map(&coords)?;
        Ok((0..len)
            .map(|k| image.iter().map(|x| x.coeff(k)).collect())
            .collect())
    }

    /// The point and its first partial derivatives.
    pub fn tangent_vectors<R: Ring>(&self, base: &[R]) -> Result<Vec<Vec<R>>> {
        let n = self.dim_x();
        let mut out = vec![self.chart_map(base)?];
        for i in 0..n {
            let mut dir = vec![R::zero(); n];
            dir[i] = R::one();
            let jets = self.jet_vectors(base, &[dir], 2)?;
            out.push(jets[1].clone());
        }
        Ok(out)
    }

    pub fn jet_span(&self, germ: &Germ, len: usize) -> Result<Subspace> {
        if len == 0 {
            return Err(Error::InvalidArgument("jet length must be at least 1".into()));
        }
        if len >= 2 && germ.coeffs.is_empty() {
            return Err(Error::DegenerateGerm);
        }
        let dirs = &germ.coeffs[..germ.coeffs.len().min(len - 1)];
        let vecs = self.jet_vectors(&germ.base, dirs, len)?;
        Subspace::span(self.dim_w(), vecs)
    }

    pub fn tangent_frame(&self, point: &[Rational]) -> Result<Subspace> {
        Subspace::span(self.dim_w(), self.tangent_vectors(point)?)
    }

    pub fn random_chart_point<G: Rng + ?Sized>(&self, bound: u64, rng: &mut G) -> Vec<Rational> {
        let b = bound as i64;
        (0..self.dim_x()).map(|_| rat(rng.gen_range(-b..=b))).collect()
    }

    pub fn random_point<G: Rng + ?Sized>(&self, bound: u64, rng: &mut G) -> Vector {
        let p = self.random_chart_point(bound, rng);
        self.evaluate(&p).expect("chart point has the right length")
    }

    /// Refuses prime fields too small for the monomial expansions involved.
    pub fn check_characteristic(&self, prime: u64, jet_length: usize) -> Result<()> {
        let need = (self.max_degree() * jet_length.max(1)) as u64;
        if prime <= need {
            return Err(Error::CharacteristicTooSmall {
                prime,
                degree: self.max_degree(),
                jet_length,
            });
        }
        Ok(())
    }
}

impl fmt::Display for VarietyParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_segre() {
            let dims: Vec<String> = self.factors.iter().map(|x| (x.n + 1).to_string()).collect();
            write!(f, "segre:{}", dims.join("x"))
        } else if self.is_veronese() {
            write!(f, "veronese:{},{}", self.factors[0].n, self.factors[0].d)
        } else {
            let parts: Vec<String> = self
                .factors
                .iter()
                .map(|x| format!("({},{})", x.n, x.d))
                .collect();
            write!(f, "segre-veronese:{}", parts.join("x"))
        }
    }
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what}: {s:?}")))
}

impl FromStr for VarietyParam {
    type Err = Error;

    /// `segre:a x b x c`, `veronese:n,d` or `segre-veronese:(n1,d1)x(n2,d2)x...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("variety spec {s:?} lacks a ':'")))?;
        match kind.trim() {
            "segre" => {
                let dims = body
                    .split('x')
                    .map(|a| parse_usize(a, "segre dimension"))
                    .collect::<Result<Vec<_>>>()?;
                if dims.len() < 2 {
                    return Err(Error::Parse("segre needs at least two factors".into()));
                }
                Self::segre(&dims)
            }
            "veronese" => {
                let (n, d) = body
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("veronese spec {body:?} should be n,d")))?;
                Self::veronese(parse_usize(n, "n")?, parse_usize(d, "d")?)
            }
            "segre-veronese" => {
                let factors = body
                    .split('x')
                    .map(|part| {
                        let inner = part
                            .trim()
                            .strip_prefix('(')
                            .and_then(|p| p.strip_suffix(')'))
                            .ok_or_else(|| Error::Parse(format!("factor {part:?} should be (n,d)")))?;
                        let (n, d) = inner
                            .split_once(',')
                            .ok_or_else(|| Error::Parse(format!("factor {part:?} should be (n,d)")))?;
                        Ok(Factor {
                            n: parse_usize(n, "n")?,
                            d: parse_usize(d, "d")?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::new(factors)
            }
            other => Err(Error::Parse(format!("unknown variety kind {other:?}"))),
        }
    }
}

/// Polynomial curve germ `base + c_1 t + ... + c_{l-1} t^{l-1}` in chart
/// coordinates, standing in for a curvilinear scheme of length `l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Germ {
    base: Vec<Rational>,
    coeffs: Vec<Vec<Rational>>,
}

impl Germ {
    /// `coeffs[0]` must be nonzero when present.
    pub fn new(base: Vec<Rational>, coeffs: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(c1) = coeffs.first() {
            if c1.iter().all(|x| x.is_zero()) {
                return Err(Error::DegenerateGerm);
            }
        }
        if let Some(c) = coeffs.iter().find(|c| c.len() != base.len()) {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                got: c.len(),
            });
        }
        Ok(Germ { base, coeffs })
    }

    /// The straight germ `base + direction * t`.
    pub fn line(base: Vec<Rational>, direction: Vec<Rational>) -> Result<Self> {
        Self::new(base, vec![direction])
    }

    pub fn base(&self) -> &[Rational] {
        &self.base
    }

    pub fn coeffs(&self) -> &[Vec<Rational>] {
        &self.coeffs
    }
}
