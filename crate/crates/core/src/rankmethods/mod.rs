//! Matrices of linear forms used as border rank lower-bound methods.
//!
//! A method is a matrix of linear forms `M` on `W` together with a constant
//! `k` bounding `rk M(x)` on the variety. For any `F`, `ceil(rk M(F) / k)`
//! bounds the border rank of `F` from below.

mod builtins;
mod map;

pub use builtins::{catalecticant, flattening, koszul_flattening, subsets};
pub use map::LinearMatrixMap;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactalg::{rank, rank_in, Field, Rational};
use crate::seed;
use crate::varieties::{binomial, VarietyParam};

/// Where the method constant `k` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KSource {
    /// Closed formula for a builtin method.
    Declared,
    /// Maximum over random points: a lower estimate of the true constant.
    Empirical,
}

impl fmt::Display for KSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KSource::Declared => write!(f, "declared"),
            KSource::Empirical => write!(f, "empirical (lower estimate)"),
        }
    }
}

/// Textual method description, `flattening:split=1|23`, `catalecticant:i=1`,
/// `koszul:p=1` or `custom:file=PATH`. Flattening modes are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MethodSpec {
    Flattening {
        row_modes: Vec<usize>,
        col_modes: Vec<usize>,
    },
    Catalecticant { i: usize },
    Koszul { p: usize },
    Custom { path: PathBuf },
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodSpec::Flattening {
                row_modes,
                col_modes,
            } => {
                let show = |ms: &[usize]| ms.iter().map(|m| (m + 1).to_string()).collect::<String>();
                write!(f, "flattening:split={}|{}", show(row_modes), show(col_modes))
            }
            MethodSpec::Catalecticant { i } => write!(f, "catalecticant:i={i}"),
            MethodSpec::Koszul { p } => write!(f, "koszul:p={p}"),
            MethodSpec::Custom { path } => write!(f, "custom:file={}", path.display()),
        }
    }
}

fn param_value<'a>(body: &'a str, key: &str) -> Result<&'a str> {
    body.split(',')
        .find_map(|kv| {
            let (k, v) = kv.split_once('=')?;
            (k.trim() == key).then_some(v.trim())
        })
        .ok_or_else(|| Error::Parse(format!("missing {key}= in {body:?}")))
}

fn parse_modes(s: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = if s.contains(',') {
        s.split(',').collect()
    } else {
        s.trim().split("").filter(|x| !x.is_empty()).collect()
    };
    parts
        .iter()
        .map(|p| {
            let m: usize = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad mode {p:?}")))?;
            m.checked_sub(1)
                .ok_or_else(|| Error::Parse("modes are numbered from 1".into()))
        })
        .collect()
}

impl FromStr for MethodSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("method spec {s:?} lacks a ':'")))?;
        let usize_param = |key: &str| -> Result<usize> {
            let v = param_value(body, key)?;
            v.parse().map_err(|_| Error::Parse(format!("bad {key}: {v:?}")))
        };
        match kind.trim() {
            "flattening" => {
                let split = param_value(body, "split")?;
                let (rows, cols) = split
                    .split_once('|')
                    .ok_or_else(|| Error::Parse(format!("split {split:?} needs a '|'")))?;
                let mut row_modes = parse_modes(rows)?;
                let mut col_modes = parse_modes(cols)?;
                row_modes.sort_unstable();
                col_modes.sort_unstable();
                let mut all: Vec<usize> = row_modes.iter().chain(&col_modes).copied().collect();
                all.sort_unstable();
                if row_modes.is_empty()
                    || col_modes.is_empty()
                    || all != (0..all.len()).collect::<Vec<_>>()
                {
                    return Err(Error::Parse(format!(
                        "split {split:?} must partition the modes 1..n into two nonempty groups"
                    )));
                }
                Ok(MethodSpec::Flattening {
                    row_modes,
                    col_modes,
                })
            }
            "catalecticant" => Ok(MethodSpec::Catalecticant { i: usize_param("i")? }),
            "koszul" => Ok(MethodSpec::Koszul { p: usize_param("p")? }),
            "custom" => Ok(MethodSpec::Custom {
                path: PathBuf::from(param_value(body, "file")?),
            }),
            other => Err(Error::Parse(format!("unknown method kind {other:?}"))),
        }
    }
}

impl MethodSpec {
    /// Builds a builtin method for `param` with its declared constant.
    pub fn build(&self, param: &VarietyParam) -> Result<RankMethod> {
        let name = self.to_string();
        match self {
            MethodSpec::Flattening {
                row_modes,
                col_modes,
            } => {
                let modes = param.factors().len();
                if row_modes.len() + col_modes.len() != modes {
                    return Err(Error::MethodNotApplicable(format!(
                        "{name} on {param} with {modes} modes"
                    )));
                }
                Ok(RankMethod {
                    map: flattening(&param.shape(), row_modes)?,
                    k: 1,
                    k_source: KSource::Declared,
                    name,
                })
            }
            MethodSpec::Catalecticant { i } => {
                if !param.is_veronese() {
                    return Err(Error::MethodNotApplicable(format!(
                        "catalecticant needs a Veronese variety, got {param}"
                    )));
                }
                let f = param.factors()[0];
                Ok(RankMethod {
                    map: catalecticant(f.n + 1, f.d, *i)?,
                    k: 1,
                    k_source: KSource::Declared,
                    name,
                })
            }
            MethodSpec::Koszul { p } => {
                if !param.is_segre() || param.factors().len() != 3 {
                    return Err(Error::MethodNotApplicable(format!(
                        "koszul flattening needs a three-factor Segre variety, got {param}"
                    )));
                }
                let s = param.shape();
                Ok(RankMethod {
                    map: koszul_flattening(s[0], s[1], s[2], *p)?,
                    k: binomial(s[0] - 1, *p),
                    k_source: KSource::Declared,
                    name,
                })
            }
            MethodSpec::Custom { .. } => Err(Error::MethodNotApplicable(
                "custom maps are loaded from a file and need an estimated k".into(),
            )),
        }
    }
}

/// Every builtin method that applies to `param`: all flattenings (one per
/// unordered split), every catalecticant, and the `p = 1` Koszul flattening.
pub fn builtin_methods(param: &VarietyParam) -> Vec<MethodSpec> {
    let modes = param.factors().len();
    let mut out = Vec::new();
    if modes >= 2 {
        // row sets that exclude the last mode enumerate each unordered split once
        for mask in 1u32..(1 << (modes - 1)) {
            let (row_modes, col_modes) = (0..modes).partition(|m| mask & (1 << m) != 0);
            out.push(MethodSpec::Flattening {
                row_modes,
                col_modes,
            });
        }
    }
    if param.is_veronese() {
        let d = param.factors()[0].d;
        out.extend((1..d).map(|i| MethodSpec::Catalecticant { i }));
    }
    if param.is_segre() && modes == 3 {
        out.push(MethodSpec::Koszul { p: 1 });
    }
    out
}

/// A matrix of linear forms together with its constant on the variety.
#[derive(Clone, Debug)]
pub struct RankMethod {
    pub map: LinearMatrixMap,
    pub k: usize,
    pub k_source: KSource,
    pub name: String,
}

impl RankMethod {
    /// Wraps a user-supplied map, estimating `k` from random points.
    pub fn custom(
        map: LinearMatrixMap,
        name: impl Into<String>,
        param: &VarietyParam,
        trials: usize,
        bound: u64,
        seed: u64,
    ) -> Result<Self> {
        let k = estimate_k(&map, param, trials, bound, seed)?;
        Ok(RankMethod {
            map,
            k,
            k_source: KSource::Empirical,
            name: name.into(),
        })
    }

    /// Samples `trials` points of the variety and checks `rk M(x) <= k`.
    /// Returns the largest rank observed.
    pub fn validate(&self, param: &VarietyParam, trials: usize, bound: u64, seed: u64) -> Result<usize> {
        let observed = estimate_k(&self.map, param, trials, bound, seed)?;
        if observed > self.k {
            return Err(Error::KConstantViolated {
                declared: self.k,
                observed,
            });
        }
        Ok(observed)
    }
}

impl fmt::Display for RankMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (k={}, {})", self.name, self.k, self.k_source)
    }
}

pub fn evaluate_map(map: &LinearMatrixMap, f: &[Rational]) -> Result<crate::exactalg::ExactMatrix> {
    map.evaluate(f)
}

/// Maximum of `rk M(x)` over `trials` random points of the variety. Trials
/// run in parallel with per-trial seeds, so the result depends only on
/// `seed`.
pub fn estimate_k(
    map: &LinearMatrixMap,
    param: &VarietyParam,
    trials: usize,
    bound: u64,
    seed: u64,
) -> Result<usize> {
    if trials == 0 {
        return Err(Error::InvalidArgument("estimate_k needs at least one trial".into()));
    }
    if map.wdim() != param.dim_w() {
        return Err(Error::DimensionMismatch {
            expected: param.dim_w(),
            got: map.wdim(),
        });
    }
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed::rng(seed::trial_seed(seed, t));
            let x = param.random_point(bound, &mut rng);
            Ok(rank(&map.evaluate(&x)?))
        })
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))
}

/// `ceil(rk M(F) / k)`, a lower bound for border rank and border cactus rank.
pub fn lower_bound(method: &RankMethod, f: &[Rational]) -> Result<usize> {
    lower_bound_in(method, f, Field::Rational)
}

/// As [`lower_bound`], with the rank taken over `field`. Prime-field ranks
/// never exceed rational ranks, so the bound stays valid.
pub fn lower_bound_in(method: &RankMethod, f: &[Rational], field: Field) -> Result<usize> {
    if method.k == 0 {
        return Err(Error::VacuousMethod);
    }
    let r = rank_in(&method.map.evaluate(f)?, field)?;
    Ok(r.div_ceil(method.k))
}
