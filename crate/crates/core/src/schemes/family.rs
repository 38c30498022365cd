use std::fmt;

use rand::Rng;

use super::{scheme_span, FiniteScheme, LocalPiece};
use crate::error::{Error, Result};
use crate::exactalg::{bareiss_rank, kernel, rat, ExactMatrix, Matrix, Poly, Rational, Ring, Subspace};
use crate::varieties::{Germ, VarietyParam};

/// Vectors with entries in `Q[t]`, spanning a subspace for general `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanFamily {
    ambient_dim: usize,
    basis: Vec<Vec<Poly>>,
}

impl SpanFamily {
    pub fn new(ambient_dim: usize, basis: Vec<Vec<Poly>>) -> Result<Self> {
        if let Some(v) = basis.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                got: v.len(),
            });
        }
        Ok(SpanFamily { ambient_dim, basis })
    }

    /// Keeps a maximal subset of `generators` independent over `Q(t)`.
    pub fn from_generators(ambient_dim: usize, generators: Vec<Vec<Poly>>) -> Result<Self> {
        let fam = SpanFamily::new(ambient_dim, generators)?;
        if fam.basis.is_empty() {
            return Ok(fam);
        }
        let (_, pivots) = bareiss_rank(fam.matrix());
        let basis = pivots.iter().map(|&j| fam.basis[j].clone()).collect();
        Ok(SpanFamily { ambient_dim, basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<Poly>] {
        &self.basis
    }

    fn matrix(&self) -> Matrix<Poly> {
        Matrix::from_columns(self.ambient_dim, &self.basis).expect("lengths checked")
    }

    /// Rank over the rational function field `Q(t)`.
    pub fn generic_rank(&self) -> usize {
        if self.basis.is_empty() {
            return 0;
        }
        bareiss_rank(self.matrix()).0
    }

    /// Naive specialization of every basis vector at `t`.
    pub fn specialize(&self, t: &Rational) -> Vec<Vec<Rational>> {
        self.basis
            .iter()
            .map(|v| v.iter().map(|p| p.eval(t)).collect())
            .collect()
    }
}

fn at_zero(v: &[Poly]) -> Vec<Rational> {
    v.iter().map(Poly::at_zero).collect()
}

/// Divides a vector by the largest power of `t` dividing all entries.
fn remove_t_content(v: &[Poly]) -> Option<Vec<Poly>> {
    let val = v.iter().filter_map(Poly::valuation).min()?;
    Some(v.iter().map(|p| p.shift_down(val)).collect())
}

/// The limit at `t = 0` of the subspaces spanned by the family.
///
/// The basis is saturated with respect to `t`: while the specialization at
/// `t = 0` is dependent, a dependent combination is divided by the largest
/// power of `t` it is divisible by and replaces one of its terms. Each step
/// strictly enlarges the `Q[t]`-lattice spanned by the basis inside its
/// saturation, so the loop terminates.
pub fn limit_of_spans(fam: &SpanFamily) -> Result<Subspace> {
    let m = fam.basis.len();
    let rank = fam.generic_rank();
    if rank != m {
        return Err(Error::GenericRankDrop { rank, len: m });
    }
    let mut basis: Vec<Vec<Poly>> = fam
        .basis
        .iter()
        .map(|v| {
            remove_t_content(v).ok_or_else(|| Error::MalformedFamily("zero basis vector".into()))
        })
        .collect::<Result<_>>()?;
    loop {
        let specialized: Vec<Vec<Rational>> = basis.iter().map(|v| at_zero(v)).collect();
        if specialized.is_empty() {
            return Ok(Subspace::zero(fam.ambient_dim));
        }
        let m0 = ExactMatrix::from_columns(fam.ambient_dim, &specialized)?;
        let Some(lambda) = kernel(&m0).into_iter().next() else {
            return Subspace::span(fam.ambient_dim, specialized);
        };
        let j = lambda
            .iter()
            .position(|x| !x.is_zero())
            .expect("kernel vectors are nonzero");
        let mut combo = vec![Poly::zero(); fam.ambient_dim];
        for (c, v) in lambda.iter().zip(&basis) {
            if c.is_zero() {
                continue;
            }
            for (acc, p) in combo.iter_mut().zip(v) {
                *acc = acc.add_ref(&p.scale(c));
            }
        }
        // Nonzero by generic independence, and divisible by t since it
        // vanishes at t = 0.
        basis[j] = remove_t_content(&combo)
            .ok_or_else(|| Error::MalformedFamily("zero column after saturation".into()))?;
    }
}

/// Dimensions of the span of the limit scheme and of the limit of spans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LimitReport {
    pub dim_span_limit: usize,
    pub dim_limit_spans: usize,
    pub inclusion_holds: bool,
}

impl LimitReport {
    pub fn strict(&self) -> bool {
        self.inclusion_holds && self.dim_span_limit < self.dim_limit_spans
    }
}

impl fmt::Display for LimitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (rel, verdict) = match (self.inclusion_holds, self.strict()) {
            (true, true) => ("≤", "inclusion holds (strict)"),
            (true, false) => ("≤", "inclusion holds (equal)"),
            (false, _) => ("vs", "inclusion FAILS"),
        };
        write!(
            f,
            "dim span(limit)={} {rel} dim lim(spans)={}: {verdict}",
            self.dim_span_limit, self.dim_limit_spans
        )
    }
}

/// Checks that the span of `limit` lies in the limit of the family's spans.
pub fn compare_limit(param: &VarietyParam, fam: &SpanFamily, limit: &FiniteScheme) -> Result<LimitReport> {
    if fam.ambient_dim != param.dim_w() {
        return Err(Error::DimensionMismatch {
            expected: param.dim_w(),
            got: fam.ambient_dim,
        });
    }
    let lim = limit_of_spans(fam)?;
    let span0 = scheme_span(param, limit)?;
    Ok(LimitReport {
        dim_span_limit: span0.dim(),
        dim_limit_spans: lim.dim(),
        inclusion_holds: span0.is_subspace_of(&lim)?,
    })
}

/// A local piece whose chart data are polynomials in `t`.
#[derive(Clone, Debug, PartialEq)]
pub enum MovingPiece {
    Reduced(Vec<Poly>),
    Curvilinear {
        base: Vec<Poly>,
        directions: Vec<Vec<Poly>>,
        length: usize,
    },
    FirstNeighborhood(Vec<Poly>),
}

impl MovingPiece {
    pub fn degree(&self) -> usize {
        match self {
            MovingPiece::Reduced(_) => 1,
            MovingPiece::Curvilinear { length, .. } => *length,
            MovingPiece::FirstNeighborhood(p) => p.len() + 1,
        }
    }

    fn generators(&self, param: &VarietyParam) -> Result<Vec<Vec<Poly>>> {
        match self {
            MovingPiece::Reduced(p) => Ok(vec![param.chart_map(p)?]),
            MovingPiece::Curvilinear {
                base,
                directions,
                length,
            } => {
                if *length < 2 || directions.is_empty() {
                    return Err(Error::MalformedFamily(
                        "moving curvilinear piece needs length >= 2 and a direction".into(),
                    ));
                }
                let dirs = &directions[..directions.len().min(length - 1)];
                param.jet_vectors(base, dirs, *length)
            }
            MovingPiece::FirstNeighborhood(p) => param.tangent_vectors(p),
        }
    }

    /// The piece at `t = 0`.
    pub fn specialize(&self) -> Result<LocalPiece> {
        let at0 = |v: &[Poly]| v.iter().map(Poly::at_zero).collect::<Vec<_>>();
        Ok(match self {
            MovingPiece::Reduced(p) => LocalPiece::Reduced(at0(p)),
            MovingPiece::FirstNeighborhood(p) => LocalPiece::FirstNeighborhood(at0(p)),
            MovingPiece::Curvilinear {
                base,
                directions,
                length,
            } => LocalPiece::Curvilinear {
                germ: Germ::new(at0(base), directions.iter().map(|d| at0(d)).collect())?,
                length: *length,
            },
        })
    }
}

/// One-parameter family of finite schemes, `R_t` for general `t`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SchemeFamily {
    pub pieces: Vec<MovingPiece>,
}

impl SchemeFamily {
    pub fn degree(&self) -> usize {
        self.pieces.iter().map(MovingPiece::degree).sum()
    }

    /// Generically independent spanning vectors of `<R_t>`.
    pub fn span_family(&self, param: &VarietyParam) -> Result<SpanFamily> {
        let mut gens = Vec::new();
        for p in &self.pieces {
            gens.extend(p.generators(param)?);
        }
        SpanFamily::from_generators(param.dim_w(), gens)
    }
}

/// Compares the span of the supplied flat limit with the limit of spans.
pub fn span_of_limit_vs_limit_of_spans(
    param: &VarietyParam,
    family: &SchemeFamily,
    limit: &FiniteScheme,
) -> Result<LimitReport> {
    if family.degree() != limit.degree() {
        return Err(Error::NonFlat {
            family: family.degree(),
            limit: limit.degree(),
        });
    }
    compare_limit(param, &family.span_family(param)?, limit)
}

fn random_path<G: Rng + ?Sized>(start: &[Rational], degree: usize, bound: u64, rng: &mut G) -> Vec<Poly> {
    let b = bound as i64;
    start
        .iter()
        .map(|c| {
            let mut coeffs = vec![c.clone()];
            coeffs.extend((0..degree).map(|_| rat(rng.gen_range(-b..=b))));
            Poly::new(coeffs)
        })
        .collect()
}

fn constant_path(v: &[Rational]) -> Vec<Poly> {
    v.iter().map(|c| Poly::constant(c.clone())).collect()
}

/// Random family of total degree `degree` whose pieces move along random
/// polynomial paths, together with its flat limit. Supports at `t = 0` are
/// distinct. Some pairs of reduced points collide along a tangent direction,
/// in which case the limit holds a curvilinear piece of length 2.
pub fn random_family<G: Rng + ?Sized>(
    param: &VarietyParam,
    degree: usize,
    bound: u64,
    rng: &mut G,
) -> Result<(SchemeFamily, FiniteScheme)> {
    let limit_shape = super::random_scheme(param, degree, super::PieceMix::MIXED, bound, rng)?;
    let mut family = SchemeFamily::default();
    let mut limit = Vec::new();
    for piece in limit_shape.pieces() {
        let path_degree = rng.gen_range(0..=2);
        let base = random_path(piece.support(), path_degree, bound, rng);
        match piece {
            LocalPiece::Reduced(_) => {
                family.pieces.push(MovingPiece::Reduced(base));
                limit.push(piece.clone());
            }
            LocalPiece::FirstNeighborhood(_) => {
                family.pieces.push(MovingPiece::FirstNeighborhood(base));
                limit.push(piece.clone());
            }
            LocalPiece::Curvilinear { germ, length } if *length == 2 && rng.gen_bool(0.5) => {
                // p(t) and p(t) + t v collide to the tangent vector v at p(0)
                let v = &germ.coeffs()[0];
                let moved: Vec<Poly> = base
                    .iter()
                    .zip(v)
                    .map(|(p, c)| p.add_ref(&Poly::monomial(c.clone(), 1)))
                    .collect();
                family.pieces.push(MovingPiece::Reduced(base));
                family.pieces.push(MovingPiece::Reduced(moved));
                limit.push(piece.clone());
            }
            LocalPiece::Curvilinear { germ, length } => {
                family.pieces.push(MovingPiece::Curvilinear {
                    base,
                    directions: germ.coeffs().iter().map(|d| constant_path(d)).collect(),
                    length: *length,
                });
                limit.push(piece.clone());
            }
        }
    }
    Ok((family, FiniteScheme::new(limit)))
}
