//! Instance-level checks of the cactus barrier for linear rank methods.
//!
//! For a smooth variety `X` with `rk M <= k` on `X`, every `F` in the span
//! of a degree-`r` finite subscheme of `X` has `rk M(F) <= k r`. The
//! verifiers here sample such `F` and check the inequality exactly. A
//! failure over the rationals is an implementation bug.

mod ceilings;

pub use ceilings::{ceilings, CeilingReport, Labeled};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{
    is_zero_vector, random_in_span, rank, rank_mod_p, rat, ExactMatrix, Field, Rational, Subspace,
    Vector, DEFAULT_PRIME,
};
use crate::rankmethods::{KSource, LinearMatrixMap, RankMethod};
use crate::schemes::{random_scheme, scheme_span, FiniteScheme, PieceMix};
use crate::seed;
use crate::varieties::VarietyParam;

/// How ranks are certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verification {
    /// Every rank over the rationals.
    Exact,
    /// Rank modulo `prime` first; boundary-tight or failing instances, and
    /// instances where the prime is bad, are confirmed over the rationals.
    Screened { prime: u64 },
}

impl Default for Verification {
    fn default() -> Self {
        Verification::Screened {
            prime: DEFAULT_PRIME,
        }
    }
}

impl From<Field> for Verification {
    fn from(f: Field) -> Self {
        match f {
            Field::Rational => Verification::Exact,
            Field::Prime(prime) => Verification::Screened { prime },
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub verification: Verification,
    /// Coefficient height for sampling `F` in a span.
    pub bound: u64,
    /// Also compute the minimal factor subspace of `<R>`.
    pub factorization: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            verification: Verification::default(),
            bound: 10,
            factorization: false,
        }
    }
}

/// Outcome of one barrier check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BarrierReport {
    pub variety: String,
    pub method: String,
    pub k: usize,
    pub k_source: KSource,
    pub degree: usize,
    pub span_dim: usize,
    pub rank: usize,
    pub bound: usize,
    pub pass: bool,
    /// `"Q"` when `rank` is a rational rank, `"F_p"` for a screened rank.
    pub field: String,
    /// Rank modulo the screening prime, when one was computed.
    pub screened_rank: Option<usize>,
    /// Dimension of the minimal factor subspace of `<R>`, when requested.
    pub factor_dim: Option<usize>,
    pub seed: u64,
}

impl BarrierReport {
    pub fn confirmed(&self) -> bool {
        self.field == "Q"
    }

    /// A rationally confirmed violation of `rk M(F) <= k r`.
    pub fn confirmed_failure(&self) -> bool {
        self.confirmed() && !self.pass
    }
}

struct RankOutcome {
    rank: usize,
    field: &'static str,
    screened: Option<usize>,
}

fn certified_rank(m: &ExactMatrix, bound: usize, verification: Verification) -> RankOutcome {
    match verification {
        Verification::Exact => RankOutcome {
            rank: rank(m),
            field: "Q",
            screened: None,
        },
        Verification::Screened { prime } => match rank_mod_p(m, prime) {
            Ok(rp) if rp < bound => RankOutcome {
                rank: rp,
                field: "F_p",
                screened: Some(rp),
            },
            Ok(rp) => RankOutcome {
                rank: rank(m),
                field: "Q",
                screened: Some(rp),
            },
            Err(_) => RankOutcome {
                rank: rank(m),
                field: "Q",
                screened: None,
            },
        },
    }
}

fn check_method(param_wdim: usize, method: &RankMethod) -> Result<()> {
    if method.map.wdim() != param_wdim {
        return Err(Error::DimensionMismatch {
            expected: param_wdim,
            got: method.map.wdim(),
        });
    }
    if method.k == 0 {
        return Err(Error::VacuousMethod);
    }
    Ok(())
}

fn guard_characteristic(param: &VarietyParam, scheme: &FiniteScheme, v: Verification) -> Result<()> {
    if let Verification::Screened { prime } = v {
        param.check_characteristic(prime, scheme.max_jet_length())?;
    }
    Ok(())
}

struct Instance {
    variety: String,
    degree: usize,
    span_dim: usize,
    factor_dim: Option<usize>,
    seed: u64,
}

fn build_report(method: &RankMethod, m: &ExactMatrix, opts: &VerifyOptions, inst: Instance) -> BarrierReport {
    let Instance {
        variety,
        degree,
        span_dim,
        factor_dim,
        seed,
    } = inst;
    let bound = method.k * degree;
    let out = certified_rank(m, bound, opts.verification);
    BarrierReport {
        variety,
        method: method.name.clone(),
        k: method.k,
        k_source: method.k_source,
        degree,
        span_dim,
        rank: out.rank,
        bound,
        pass: out.rank <= bound,
        field: out.field.into(),
        screened_rank: out.screened,
        factor_dim,
        seed,
    }
}

/// Samples `F` in `<R>` and checks `rk M(F) <= k deg R`.
pub fn verify_instance(
    param: &VarietyParam,
    scheme: &FiniteScheme,
    method: &RankMethod,
    opts: &VerifyOptions,
    seed: u64,
) -> Result<BarrierReport> {
    check_method(param.dim_w(), method)?;
    guard_characteristic(param, scheme, opts.verification)?;
    let span = scheme_span(param, scheme)?;
    let mut rng = seed::rng(seed);
    let f = if span.dim() == 0 {
        vec![rat(0); param.dim_w()]
    } else {
        random_in_span(&span, opts.bound, &mut rng)?
    };
    let m = method.map.evaluate(&f)?;
    let factor_dim = if opts.factorization {
        Some(minimal_factor_subspace(&method.map, &span)?.dim())
    } else {
        None
    };
    Ok(build_report(
        method,
        &m,
        opts,
        Instance {
            variety: param.to_string(),
            degree: scheme.degree(),
            span_dim: span.dim(),
            factor_dim,
            seed,
        },
    ))
}

/// The smallest subspace `B'` of the row space `k^rows` with `M(u)` mapping
/// into `B'` for every `u` in `U`: the sum of the column spaces of `M(u)`
/// over a basis of `U`.
pub fn minimal_factor_subspace(map: &LinearMatrixMap, u: &Subspace) -> Result<Subspace> {
    if u.ambient_dim() != map.wdim() {
        return Err(Error::DimensionMismatch {
            expected: map.wdim(),
            got: u.ambient_dim(),
        });
    }
    let mut cols: Vec<Vector> = Vec::new();
    for v in u.basis() {
        let m = map.evaluate(v)?;
        cols.extend(m.columns().into_iter().filter(|c| !is_zero_vector(c)));
    }
    Subspace::span(map.rows(), cols)
}

/// True iff `E` lies in the span of `R`, witnessing membership of `E` in the
/// Grassmann cactus locus (before closure).
pub fn grassmann_containment(e: &Subspace, param: &VarietyParam, scheme: &FiniteScheme) -> Result<bool> {
    if e.ambient_dim() != param.dim_w() {
        return Err(Error::DimensionMismatch {
            expected: param.dim_w(),
            got: e.ambient_dim(),
        });
    }
    e.is_subspace_of(&scheme_span(param, scheme)?)
}

/// One component of a disconnected variety: a Segre-Veronese variety, placed
/// in the common ambient space by an optional invertible linear map.
#[derive(Clone, Debug, PartialEq)]
pub struct JoinComponent {
    pub param: VarietyParam,
    pub embedding: Option<ExactMatrix>,
}

impl JoinComponent {
    pub fn new(param: VarietyParam) -> Self {
        JoinComponent {
            param,
            embedding: None,
        }
    }

    /// A copy of `param` moved by a random invertible integer matrix.
    pub fn random_copy<G: Rng + ?Sized>(param: VarietyParam, bound: u64, rng: &mut G) -> Self {
        let n = param.dim_w();
        let b = bound.max(1) as i64;
        loop {
            let data = (0..n * n).map(|_| rat(rng.gen_range(-b..=b))).collect();
            let g = ExactMatrix::from_vec(n, n, data).expect("square");
            if rank(&g) == n {
                return JoinComponent {
                    param,
                    embedding: Some(g),
                };
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.embedding.as_ref().map_or(self.param.dim_w(), |g| g.rows())
    }

    fn place(&self, v: Vector) -> Result<Vector> {
        match &self.embedding {
            None => Ok(v),
            Some(g) => g.mul_vec(&v),
        }
    }

    pub fn span(&self, scheme: &FiniteScheme) -> Result<Subspace> {
        let s = scheme_span(&self.param, scheme)?;
        let placed = s
            .into_basis()
            .into_iter()
            .map(|v| self.place(v))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(self.ambient_dim(), placed)
    }

    /// Largest `rk M(x)` over random points of this component.
    pub fn estimate_k(&self, map: &LinearMatrixMap, trials: usize, bound: u64, seed: u64) -> Result<usize> {
        let mut best = 0;
        for t in 0..trials as u64 {
            let mut rng = seed::rng(seed::trial_seed(seed, t));
            let x = self.place(self.param.random_point(bound, &mut rng))?;
            best = best.max(rank(&map.evaluate(&x)?));
        }
        Ok(best)
    }
}

/// Result of a join check: the combined report and the per-side degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinReport {
    pub report: BarrierReport,
    pub left_degree: usize,
    pub right_degree: usize,
}

impl JoinReport {
    /// `k r1 + k r2`, which must equal the combined bound.
    pub fn summed_bounds(&self) -> usize {
        self.report.k * self.left_degree + self.report.k * self.right_degree
    }
}

fn sample_or_zero<G: Rng + ?Sized>(span: &Subspace, bound: u64, rng: &mut G) -> Result<Vector> {
    if span.dim() == 0 {
        Ok(vec![rat(0); span.ambient_dim()])
    } else {
        random_in_span(span, bound, rng)
    }
}

/// Samples `F1` in `<R1>`, `F2` in `<R2>` and `F` on the line through them,
/// and checks `rk M(F) <= k (deg R1 + deg R2)`. An empty scheme contributes
/// nothing, matching `Y + {} = Y`.
pub fn verify_join_decomposition(
    left: &JoinComponent,
    right: &JoinComponent,
    r1: &FiniteScheme,
    r2: &FiniteScheme,
    method: &RankMethod,
    opts: &VerifyOptions,
    seed: u64,
) -> Result<JoinReport> {
    let n = left.ambient_dim();
    if right.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: right.ambient_dim(),
        });
    }
    check_method(n, method)?;
    guard_characteristic(&left.param, r1, opts.verification)?;
    guard_characteristic(&right.param, r2, opts.verification)?;
    if left == right {
        r1.union(r2)?;
    }
    let s1 = left.span(r1)?;
    let s2 = right.span(r2)?;
    let mut rng = seed::rng(seed);
    let f1 = sample_or_zero(&s1, opts.bound, &mut rng)?;
    let f2 = sample_or_zero(&s2, opts.bound, &mut rng)?;
    let b = opts.bound.max(1) as i64;
    let mut coeff = || loop {
        let c = rng.gen_range(-b..=b);
        if c != 0 {
            return rat(c);
        }
    };
    let (a1, a2) = (coeff(), coeff());
    let f: Vec<Rational> = f1.iter().zip(&f2).map(|(x, y)| &a1 * x + &a2 * y).collect();
    let m = method.map.evaluate(&f)?;
    let joint = crate::exactalg::span_sum(&s1, &s2)?;
    let factor_dim = if opts.factorization {
        Some(minimal_factor_subspace(&method.map, &joint)?.dim())
    } else {
        None
    };
    let variety = format!("join({}, {})", describe(left), describe(right));
    Ok(JoinReport {
        report: build_report(
            method,
            &m,
            opts,
            Instance {
                variety,
                degree: r1.degree() + r2.degree(),
                span_dim: joint.dim(),
                factor_dim,
                seed,
            },
        ),
        left_degree: r1.degree(),
        right_degree: r2.degree(),
    })
}

fn describe(c: &JoinComponent) -> String {
    match c.embedding {
        None => c.param.to_string(),
        Some(_) => format!("g*{}", c.param),
    }
}

/// Where the schemes of a campaign come from.
#[derive(Clone, Debug, PartialEq)]
pub enum SchemeSource {
    Random {
        degree: usize,
        mix: PieceMix,
        /// Coordinate bound for supports and germs.
        bound: u64,
    },
    Fixed(FiniteScheme),
}

/// Runs `trials` independent checks in parallel. Trial `i` uses
/// `trial_seed(root_seed, i)`, so output depends only on the root seed and
/// comes back in trial order.
pub fn run_campaign(
    param: &VarietyParam,
    source: &SchemeSource,
    method: &RankMethod,
    trials: usize,
    opts: &VerifyOptions,
    root_seed: u64,
) -> Vec<Result<BarrierReport>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed::trial_seed(root_seed, i);
            let scheme = match source {
                SchemeSource::Fixed(r) => r.clone(),
                SchemeSource::Random { degree, mix, bound } => {
                    let mut rng = seed::rng(seed::trial_seed(s, 0));
                    random_scheme(param, *degree, *mix, *bound, &mut rng)?
                }
            };
            let mut report = verify_instance(param, &scheme, method, opts, seed::trial_seed(s, 1))?;
            report.seed = s;
            Ok(report)
        })
        .collect()
}
