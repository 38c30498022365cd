//! JSON formats for finite schemes and one-parameter span families.
//!
//! ```json
//! {"pieces": [
//!   {"type": "reduced", "point": ["0", "1"]},
//!   {"type": "curvilinear", "base": ["1", "1"], "coeffs": [["1", "0"]], "length": 2},
//!   {"type": "neighborhood", "point": ["2", "-1"]}
//! ]}
//! ```
//!
//! A family file lists basis vectors whose entries are coefficient lists in
//! `t`, lowest degree first, and the flat limit at `t = 0`:
//!
//! ```json
//! {"variety": "veronese:1,2",
//!  "basis": [[["1"], [], []], [["1"], ["0", "1"], ["0", "0", "1"]]],
//!  "limit": {"pieces": [...]}}
//! ```

use std::path::Path;

use cactus_core::exactalg::{format_rational, parse_rational, Poly};
use cactus_core::schemes::{FiniteScheme, LocalPiece, SpanFamily};
use cactus_core::varieties::{Germ, VarietyParam};
use cactus_core::Rational;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum PieceRepr {
    Reduced {
        point: Vec<String>,
    },
    Curvilinear {
        base: Vec<String>,
        coeffs: Vec<Vec<String>>,
        length: usize,
    },
    Neighborhood {
        point: Vec<String>,
    },
}

#[derive(Serialize, Deserialize)]
struct SchemeRepr {
    pieces: Vec<PieceRepr>,
}

#[derive(Deserialize)]
struct FamilyRepr {
    variety: String,
    basis: Vec<Vec<Vec<String>>>,
    limit: SchemeRepr,
}

fn rats(v: &[String]) -> Result<Vec<Rational>, CliError> {
    v.iter().map(|s| Ok(parse_rational(s)?)).collect()
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn scheme_from_repr(repr: SchemeRepr) -> Result<FiniteScheme, CliError> {
    let pieces = repr
        .pieces
        .into_iter()
        .map(|p| {
            Ok(match p {
                PieceRepr::Reduced { point } => LocalPiece::Reduced(rats(&point)?),
                PieceRepr::Neighborhood { point } => LocalPiece::FirstNeighborhood(rats(&point)?),
                PieceRepr::Curvilinear { base, coeffs, length } => {
                    let coeffs = coeffs.iter().map(|c| rats(c)).collect::<Result<_, CliError>>()?;
                    LocalPiece::Curvilinear {
                        germ: Germ::new(rats(&base)?, coeffs)?,
                        length,
                    }
                }
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(FiniteScheme::new(pieces))
}

pub fn parse_scheme(text: &str) -> Result<FiniteScheme, CliError> {
    let repr: SchemeRepr = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("scheme: {e}")))?;
    scheme_from_repr(repr)
}

pub fn scheme_to_json(scheme: &FiniteScheme) -> serde_json::Value {
    let pieces = scheme
        .pieces()
        .iter()
        .map(|p| match p {
            LocalPiece::Reduced(x) => PieceRepr::Reduced { point: strs(x) },
            LocalPiece::FirstNeighborhood(x) => PieceRepr::Neighborhood { point: strs(x) },
            LocalPiece::Curvilinear { germ, length } => PieceRepr::Curvilinear {
                base: strs(germ.base()),
                coeffs: germ.coeffs().iter().map(|c| strs(c)).collect(),
                length: *length,
            },
        })
        .collect();
    serde_json::to_value(SchemeRepr { pieces }).expect("plain data")
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn load_scheme(path: &Path) -> Result<FiniteScheme, CliError> {
    parse_scheme(&read(path)?)
}

/// A family of spans over `Q[t]` together with its declared flat limit.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyFile {
    pub variety: VarietyParam,
    pub family: SpanFamily,
    pub limit: FiniteScheme,
}

pub fn parse_family(text: &str) -> Result<FamilyFile, CliError> {
    let repr: FamilyRepr = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("family file: {e}")))?;
    let variety: VarietyParam = repr.variety.parse()?;
    let basis = repr
        .basis
        .iter()
        .map(|v| v.iter().map(|c| Ok(Poly::new(rats(c)?))).collect())
        .collect::<Result<Vec<Vec<Poly>>, CliError>>()?;
    let limit = scheme_from_repr(repr.limit)?;
    limit.validate(&variety)?;
    Ok(FamilyFile {
        family: SpanFamily::new(variety.dim_w(), basis)?,
        variety,
        limit,
    })
}

pub fn load_family(path: &Path) -> Result<FamilyFile, CliError> {
    parse_family(&read(path)?)
}
