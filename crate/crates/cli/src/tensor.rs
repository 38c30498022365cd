//! JSON tensor files. Rationals are written as `"p/q"` strings.
//!
//! ```json
//! {"format": "dense", "shape": [2, 2], "entries": [["1", "0"], ["0", "1/2"]]}
//! {"format": "sparse", "shape": [2, 2], "entries": [{"idx": [1, 1], "value": "1/2"}]}
//! {"format": "symmetric", "vars": 2, "degree": 2, "terms": [{"monomial": [1, 1], "coeff": "2"}]}
//! ```

use std::path::Path;

use cactus_core::exactalg::{format_rational, parse_rational};
use cactus_core::varieties::{binomial, monomial_index, monomials, VarietyParam};
use cactus_core::{Rational, Vector};
use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// How the entries of a tensor are indexed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Layout {
    /// A multi-array with the given mode sizes, flattened row-major.
    General { shape: Vec<usize> },
    /// A homogeneous form, one coordinate per monomial in descending lex
    /// order. Coordinates are stored in the divided-power basis, where
    /// `l^d` has coordinates `u^alpha`.
    Symmetric { vars: usize, degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    pub layout: Layout,
    pub data: Vector,
}

#[derive(Serialize, Deserialize)]
struct SparseEntry {
    idx: Vec<usize>,
    value: Value,
}

#[derive(Serialize, Deserialize)]
struct Term {
    monomial: Vec<usize>,
    coeff: Value,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "lowercase")]
enum Repr {
    Dense { shape: Vec<usize>, entries: Value },
    Sparse { shape: Vec<usize>, entries: Vec<SparseEntry> },
    Symmetric { vars: usize, degree: usize, terms: Vec<Term> },
}

fn parse_value(v: &Value) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => Ok(parse_rational(s)?),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| CliError::Usage(format!("non-integer number {n}; write rationals as \"p/q\""))),
        other => Err(CliError::Usage(format!("expected a rational, got {other}"))),
    }
}

fn write_value(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// `d! / prod(alpha_i!)`.
pub fn multinomial(alpha: &[usize]) -> BigInt {
    let mut total = 0;
    let mut out = BigInt::one();
    for &a in alpha {
        total += a;
        out *= BigInt::from(binomial(total, a));
    }
    out
}

fn flatten_dense(v: &Value, shape: &[usize], out: &mut Vector) -> Result<(), CliError> {
    if shape.is_empty() {
        out.push(parse_value(v)?);
        return Ok(());
    }
    let items = v
        .as_array()
        .filter(|a| a.len() == shape[0])
        .ok_or_else(|| CliError::Usage(format!("dense entries do not match mode size {}", shape[0])))?;
    for item in items {
        flatten_dense(item, &shape[1..], out)?;
    }
    Ok(())
}

fn nest_dense(data: &[Rational], shape: &[usize]) -> Value {
    if shape.is_empty() {
        return write_value(&data[0]);
    }
    let stride = data.len() / shape[0].max(1);
    Value::Array(
        (0..shape[0])
            .map(|i| nest_dense(&data[i * stride..(i + 1) * stride], &shape[1..]))
            .collect(),
    )
}

fn check_shape(shape: &[usize]) -> Result<(), CliError> {
    if shape.is_empty() || shape.contains(&0) {
        return Err(CliError::Usage(format!("invalid shape {shape:?}")));
    }
    Ok(())
}

impl Tensor {
    pub fn general(shape: Vec<usize>, data: Vector) -> Result<Self, CliError> {
        check_shape(&shape)?;
        if shape.iter().product::<usize>() != data.len() {
            return Err(CliError::Usage("entry count does not match shape".into()));
        }
        Ok(Tensor {
            layout: Layout::General { shape },
            data,
        })
    }

    pub fn symmetric(vars: usize, degree: usize, data: Vector) -> Result<Self, CliError> {
        if vars == 0 || degree == 0 {
            return Err(CliError::Usage("symmetric tensors need vars >= 1 and degree >= 1".into()));
        }
        if binomial(vars + degree - 1, degree) != data.len() {
            return Err(CliError::Usage("entry count does not match monomial count".into()));
        }
        Ok(Tensor {
            layout: Layout::Symmetric { vars, degree },
            data,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let repr: Repr = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("tensor file: {e}")))?;
        match repr {
            Repr::Dense { shape, entries } => {
                check_shape(&shape)?;
                let mut data = Vec::new();
                flatten_dense(&entries, &shape, &mut data)?;
                Tensor::general(shape, data)
            }
            Repr::Sparse { shape, entries } => {
                check_shape(&shape)?;
                let mut data = vec![Rational::zero(); shape.iter().product()];
                for e in entries {
                    if e.idx.len() != shape.len() || e.idx.iter().zip(&shape).any(|(i, s)| i >= s) {
                        return Err(CliError::Usage(format!("index {:?} outside shape {shape:?}", e.idx)));
                    }
                    let flat = e.idx.iter().zip(&shape).fold(0, |acc, (i, s)| acc * s + i);
                    data[flat] += parse_value(&e.value)?;
                }
                Tensor::general(shape, data)
            }
            Repr::Symmetric { vars, degree, terms } => {
                if vars == 0 || degree == 0 {
                    return Err(CliError::Usage("symmetric tensors need vars >= 1 and degree >= 1".into()));
                }
                let mut data = vec![Rational::zero(); binomial(vars + degree - 1, degree)];
                for t in terms {
                    if t.monomial.len() != vars || t.monomial.iter().sum::<usize>() != degree {
                        return Err(CliError::Usage(format!(
                            "monomial {:?} is not of degree {degree} in {vars} variables",
                            t.monomial
                        )));
                    }
                    let c = parse_value(&t.coeff)?;
                    data[monomial_index(&t.monomial)] += c / Rational::from_integer(multinomial(&t.monomial));
                }
                Tensor::symmetric(vars, degree, data)
            }
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Tensor::parse(&text)
    }

    fn shape_or_err(&self) -> Result<&[usize], CliError> {
        match &self.layout {
            Layout::General { shape } => Ok(shape),
            Layout::Symmetric { .. } => Err(CliError::Usage("expected a general tensor".into())),
        }
    }

    pub fn to_dense_json(&self) -> Result<Value, CliError> {
        let shape = self.shape_or_err()?;
        Ok(serde_json::json!({
            "format": "dense",
            "shape": shape,
            "entries": nest_dense(&self.data, shape),
        }))
    }

    pub fn to_sparse_json(&self) -> Result<Value, CliError> {
        let shape = self.shape_or_err()?;
        let mut entries = Vec::new();
        for (flat, v) in self.data.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let mut idx = vec![0; shape.len()];
            let mut rest = flat;
            for (slot, s) in idx.iter_mut().zip(shape).rev() {
                *slot = rest % s;
                rest /= s;
            }
            entries.push(SparseEntry {
                idx,
                value: write_value(v),
            });
        }
        serde_json::to_value(Repr::Sparse {
            shape: shape.to_vec(),
            entries,
        })
        .map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn to_symmetric_json(&self) -> Result<Value, CliError> {
        let Layout::Symmetric { vars, degree } = self.layout else {
            return Err(CliError::Usage("expected a symmetric tensor".into()));
        };
        let terms = monomials(vars, degree)
            .into_iter()
            .zip(&self.data)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| {
                let coeff = c * Rational::from_integer(multinomial(&m));
                Term {
                    monomial: m,
                    coeff: write_value(&coeff),
                }
            })
            .collect();
        serde_json::to_value(Repr::Symmetric { vars, degree, terms }).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Dense for general tensors, term lists for symmetric ones.
    pub fn to_json(&self) -> Value {
        match self.layout {
            Layout::General { .. } => self.to_dense_json(),
            Layout::Symmetric { .. } => self.to_symmetric_json(),
        }
        .expect("layout matched")
    }

    /// The variety whose ambient space holds this tensor.
    pub fn variety(&self) -> Result<VarietyParam, CliError> {
        Ok(match &self.layout {
            Layout::General { shape } => VarietyParam::segre(shape)?,
            Layout::Symmetric { vars, degree } => VarietyParam::veronese(vars - 1, *degree)?,
        })
    }
}
