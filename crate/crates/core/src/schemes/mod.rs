//! Finite subschemes of a variety built from local pieces, their linear
//! spans, and limits of spans along one-parameter families.

mod family;

pub use family::{
    compare_limit, limit_of_spans, random_family, span_of_limit_vs_limit_of_spans, LimitReport,
    MovingPiece, SchemeFamily, SpanFamily,
};

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactalg::{Rational, Subspace, Vector};
use crate::varieties::{Germ, VarietyParam};

/// One connected component of a finite scheme.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LocalPiece {
    /// A single point, degree 1.
    Reduced(Vec<Rational>),
    /// `Spec k[t]/(t^length)` mapped along a germ, degree `length >= 2`.
    Curvilinear { germ: Germ, length: usize },
    /// The point with all tangent directions, degree `dim X + 1`.
    FirstNeighborhood(Vec<Rational>),
}

impl LocalPiece {
    pub fn support(&self) -> &[Rational] {
        match self {
            LocalPiece::Reduced(p) | LocalPiece::FirstNeighborhood(p) => p,
            LocalPiece::Curvilinear { germ, .. } => germ.base(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            LocalPiece::Reduced(_) => 1,
            LocalPiece::Curvilinear { length, .. } => *length,
            LocalPiece::FirstNeighborhood(p) => p.len() + 1,
        }
    }

    /// Vectors spanning the piece's linear span.
    pub fn generators(&self, param: &VarietyParam) -> Result<Vec<Vector>> {
        match self {
            LocalPiece::Reduced(p) => Ok(vec![param.evaluate(p)?]),
            LocalPiece::Curvilinear { germ, length } => {
                if *length < 2 {
                    return Err(Error::InvalidArgument(
                        "curvilinear pieces need length >= 2".into(),
                    ));
                }
                Ok(param.jet_span(germ, *length)?.into_basis())
            }
            LocalPiece::FirstNeighborhood(p) => param.tangent_vectors(p),
        }
    }

    pub fn span(&self, param: &VarietyParam) -> Result<Subspace> {
        Subspace::span(param.dim_w(), self.generators(param)?)
    }
}

/// Disjoint union of local pieces with distinct supports.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FiniteScheme {
    pieces: Vec<LocalPiece>,
}

impl FiniteScheme {
    pub fn new(pieces: Vec<LocalPiece>) -> Self {
        FiniteScheme { pieces }
    }

    pub fn empty() -> Self {
        FiniteScheme::default()
    }

    pub fn pieces(&self) -> &[LocalPiece] {
        &self.pieces
    }

    pub fn degree(&self) -> usize {
        self.pieces.iter().map(LocalPiece::degree).sum()
    }

    /// Disjoint union; fails if a support is shared.
    pub fn union(&self, other: &FiniteScheme) -> Result<FiniteScheme> {
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        let u = FiniteScheme { pieces };
        u.check_disjoint()?;
        Ok(u)
    }

    fn check_disjoint(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for p in &self.pieces {
            if !seen.insert(p.support()) {
                return Err(Error::OverlappingSupports);
            }
        }
        Ok(())
    }

    pub fn validate(&self, param: &VarietyParam) -> Result<()> {
        for p in &self.pieces {
            if p.support().len() != param.dim_x() {
                return Err(Error::DimensionMismatch {
                    expected: param.dim_x(),
                    got: p.support().len(),
                });
            }
            if let LocalPiece::Curvilinear { length, .. } = p {
                if *length < 2 {
                    return Err(Error::InvalidArgument(
                        "curvilinear pieces need length >= 2".into(),
                    ));
                }
            }
        }
        self.check_disjoint()
    }

    /// Largest jet length among the pieces; used for characteristic checks.
    pub fn max_jet_length(&self) -> usize {
        self.pieces
            .iter()
            .map(|p| match p {
                LocalPiece::Reduced(_) => 1,
                LocalPiece::Curvilinear { length, .. } => *length,
                LocalPiece::FirstNeighborhood(_) => 2,
            })
            .max()
            .unwrap_or(1)
    }
}

/// Linear span of a finite scheme: the sum of the pieces' spans.
pub fn scheme_span(param: &VarietyParam, scheme: &FiniteScheme) -> Result<Subspace> {
    scheme.validate(param)?;
    let mut gens = Vec::new();
    for p in &scheme.pieces {
        gens.extend(p.generators(param)?);
    }
    Subspace::span(param.dim_w(), gens)
}

/// Relative weights of piece types drawn by [`random_scheme`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PieceMix {
    pub reduced: u32,
    pub curvilinear: u32,
    pub neighborhood: u32,
}

impl PieceMix {
    pub const MIXED: PieceMix = PieceMix {
        reduced: 1,
        curvilinear: 1,
        neighborhood: 1,
    };
    pub const REDUCED: PieceMix = PieceMix {
        reduced: 1,
        curvilinear: 0,
        neighborhood: 0,
    };
    pub const CURVILINEAR: PieceMix = PieceMix {
        reduced: 0,
        curvilinear: 1,
        neighborhood: 0,
    };
    pub const NEIGHBORHOOD: PieceMix = PieceMix {
        reduced: 0,
        curvilinear: 0,
        neighborhood: 1,
    };
}

impl Default for PieceMix {
    fn default() -> Self {
        PieceMix::MIXED
    }
}

impl FromStr for PieceMix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "reduced" => Ok(PieceMix::REDUCED),
            "curv" | "curvilinear" => Ok(PieceMix::CURVILINEAR),
            "nbhd" | "neighborhood" => Ok(PieceMix::NEIGHBORHOOD),
            "mixed" => Ok(PieceMix::MIXED),
            other => Err(Error::Parse(format!("unknown piece mix {other:?}"))),
        }
    }
}

impl fmt::Display for PieceMix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match *self {
            PieceMix::REDUCED => "reduced",
            PieceMix::CURVILINEAR => "curv",
            PieceMix::NEIGHBORHOOD => "nbhd",
            PieceMix::MIXED => "mixed",
            m => return write!(f, "{}:{}:{}", m.reduced, m.curvilinear, m.neighborhood),
        };
        write!(f, "{name}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Reduced,
    Curvilinear,
    Neighborhood,
}

/// `feasible[k]` says whether degree `k` is a sum of admissible piece degrees.
fn feasibility(mix: PieceMix, nbhd_degree: usize, r: usize) -> Vec<bool> {
    let mut ok = vec![false; r + 1];
    ok[0] = true;
    for k in 1..=r {
        ok[k] = (mix.reduced > 0 && ok[k - 1])
            || (mix.curvilinear > 0 && (2..=k).any(|l| ok[k - l]))
            || (mix.neighborhood > 0 && k >= nbhd_degree && ok[k - nbhd_degree]);
    }
    ok
}

/// Random scheme of total degree exactly `r` with pairwise distinct integer
/// supports in `[-bound, bound]^dim X`.
pub fn random_scheme<G: Rng + ?Sized>(
    param: &VarietyParam,
    r: usize,
    mix: PieceMix,
    bound: u64,
    rng: &mut G,
) -> Result<FiniteScheme> {
    if r == 0 {
        return Err(Error::InvalidArgument("scheme degree must be at least 1".into()));
    }
    if bound == 0 {
        return Err(Error::InvalidArgument("coordinate bound must be at least 1".into()));
    }
    let nbhd = param.dim_x() + 1;
    let ok = feasibility(mix, nbhd, r);
    if !ok[r] {
        return Err(Error::InadmissibleDegree(r));
    }
    let mut used: HashSet<Vec<Rational>> = HashSet::new();
    let mut pieces = Vec::new();
    let mut rem = r;
    while rem > 0 {
        let mut choices: Vec<(Kind, u32)> = Vec::new();
        if mix.reduced > 0 && ok[rem - 1] {
            choices.push((Kind::Reduced, mix.reduced));
        }
        if mix.curvilinear > 0 && (2..=rem).any(|l| ok[rem - l]) {
            choices.push((Kind::Curvilinear, mix.curvilinear));
        }
        if mix.neighborhood > 0 && rem >= nbhd && ok[rem - nbhd] {
            choices.push((Kind::Neighborhood, mix.neighborhood));
        }
        let total: u32 = choices.iter().map(|c| c.1).sum();
        let mut pick = rng.gen_range(0..total);
        let kind = choices
            .iter()
            .find(|(_, w)| {
                if pick < *w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .map(|c| c.0)
            .expect("weights sum to total");

        let support = fresh_support(param, bound, &mut used, rng)?;
        let piece = match kind {
            Kind::Reduced => LocalPiece::Reduced(support),
            Kind::Neighborhood => LocalPiece::FirstNeighborhood(support),
            Kind::Curvilinear => {
                let lengths: Vec<usize> = (2..=rem).filter(|&l| ok[rem - l]).collect();
                let length = lengths[rng.gen_range(0..lengths.len())];
                LocalPiece::Curvilinear {
                    germ: random_germ(param, support, length, bound, rng),
                    length,
                }
            }
        };
        rem -= piece.degree();
        pieces.push(piece);
    }
    Ok(FiniteScheme { pieces })
}

fn fresh_support<G: Rng + ?Sized>(
    param: &VarietyParam,
    bound: u64,
    used: &mut HashSet<Vec<Rational>>,
    rng: &mut G,
) -> Result<Vec<Rational>> {
    for _ in 0..10_000 {
        let p = param.random_chart_point(bound, rng);
        if used.insert(p.clone()) {
            return Ok(p);
        }
    }
    Err(Error::InvalidArgument(format!(
        "could not find distinct supports with coordinate bound {bound}"
    )))
}

fn random_germ<G: Rng + ?Sized>(
    param: &VarietyParam,
    base: Vec<Rational>,
    length: usize,
    bound: u64,
    rng: &mut G,
) -> Germ {
    let mut coeffs = Vec::with_capacity(length - 1);
    loop {
        let c1 = param.random_chart_point(bound, rng);
        if c1.iter().any(|x| !num::Zero::is_zero(x)) {
            coeffs.push(c1);
            break;
        }
    }
    for _ in 2..length {
        coeffs.push(param.random_chart_point(bound, rng));
    }
    Germ::new(base, coeffs).expect("first direction is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, span_sum};
    use crate::seed;

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn span_examples() {
        let v2 = VarietyParam::veronese(1, 2).unwrap();
        let two = FiniteScheme::new(vec![LocalPiece::Reduced(r(&[0])), LocalPiece::Reduced(r(&[1]))]);
        let s = scheme_span(&v2, &two).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s
            .same_as(&Subspace::span(3, vec![r(&[1, 0, 0]), r(&[1, 1, 1])]).unwrap())
            .unwrap());
        let curv = FiniteScheme::new(vec![LocalPiece::Curvilinear {
            germ: Germ::line(r(&[0]), r(&[1])).unwrap(),
            length: 2,
        }]);
        assert_eq!(scheme_span(&v2, &curv).unwrap().dim(), 2);
        let overlap = FiniteScheme::new(vec![LocalPiece::Reduced(r(&[0])), LocalPiece::FirstNeighborhood(r(&[0]))]);
        assert_eq!(scheme_span(&v2, &overlap).unwrap_err(), Error::OverlappingSupports);
    }

    #[test]
    fn three_random_points_on_segre_222() {
        let p = VarietyParam::segre(&[2, 2, 2]).unwrap();
        let mut rng = seed::rng(3);
        for _ in 0..20 {
            let s = random_scheme(&p, 3, PieceMix::REDUCED, 50, &mut rng).unwrap();
            assert_eq!(scheme_span(&p, &s).unwrap().dim(), 3);
        }
    }

    #[test]
    fn degree_examples() {
        let pts = FiniteScheme::new((0..3).map(|i| LocalPiece::Reduced(r(&[i, 0, 0]))).collect());
        assert_eq!(pts.degree(), 3);
        let germ = Germ::new(r(&[0]), vec![r(&[1]), r(&[0]), r(&[2])]).unwrap();
        let c = FiniteScheme::new(vec![LocalPiece::Curvilinear { germ, length: 4 }]);
        assert_eq!(c.degree(), 4);
        let n = FiniteScheme::new(vec![LocalPiece::FirstNeighborhood(r(&[0, 0, 0]))]);
        assert_eq!(n.degree(), 4);
        assert_eq!(FiniteScheme::empty().degree(), 0);
    }

    #[test]
    fn random_scheme_examples() {
        let p = VarietyParam::segre(&[2, 2, 2]).unwrap();
        let mut rng = seed::rng(11);
        let one = random_scheme(&p, 1, PieceMix::MIXED, 3, &mut rng).unwrap();
        assert!(matches!(one.pieces(), [LocalPiece::Reduced(_)]));
        let two = random_scheme(&p, 2, PieceMix::CURVILINEAR, 3, &mut rng).unwrap();
        assert!(matches!(two.pieces(), [LocalPiece::Curvilinear { length: 2, .. }]));
        for _ in 0..50 {
            let s = random_scheme(&p, 5, PieceMix::MIXED, 3, &mut rng).unwrap();
            assert_eq!(s.degree(), 5);
            s.validate(&p).unwrap();
        }
        assert_eq!(
            random_scheme(&p, 1, PieceMix::CURVILINEAR, 3, &mut rng).unwrap_err(),
            Error::InadmissibleDegree(1)
        );
        assert_eq!(
            random_scheme(&p, 5, PieceMix::NEIGHBORHOOD, 3, &mut rng).unwrap_err(),
            Error::InadmissibleDegree(5)
        );
        let nb = random_scheme(&p, 8, PieceMix::NEIGHBORHOOD, 3, &mut rng).unwrap();
        assert_eq!(nb.pieces().len(), 2);
    }

    #[test]
    fn disjoint_union_span_is_sum_of_spans() {
        let p = VarietyParam::veronese(2, 3).unwrap();
        let mut rng = seed::rng(21);
        for _ in 0..20 {
            let s = random_scheme(&p, 6, PieceMix::MIXED, 4, &mut rng).unwrap();
            let whole = scheme_span(&p, &s).unwrap();
            let summed = s
                .pieces()
                .iter()
                .map(|x| x.span(&p).unwrap())
                .fold(Subspace::zero(p.dim_w()), |acc, x| span_sum(&acc, &x).unwrap());
            assert!(whole.same_as(&summed).unwrap());
            assert!(whole.dim() <= s.degree());
        }
    }

    #[test]
    fn mix_names() {
        for s in ["reduced", "curv", "nbhd", "mixed"] {
            assert_eq!(s.parse::<PieceMix>().unwrap().to_string(), s);
        }
        assert!("all".parse::<PieceMix>().is_err());
    }
}
