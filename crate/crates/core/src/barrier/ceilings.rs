use std::fmt;

use serde::Serialize;

use crate::varieties::VarietyParam;

/// A number together with the formula that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Labeled {
    pub value: usize,
    pub formula: String,
}

impl Labeled {
    fn new(value: usize, formula: impl Into<String>) -> Self {
        Labeled {
            value,
            formula: formula.into(),
        }
    }
}

/// Ceilings beyond which no linear rank method can certify border rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CeilingReport {
    pub variety: String,
    /// `g` with the `g`-th cactus variety filling the ambient space.
    pub cactus_ceiling: Option<Labeled>,
    /// Lower bound on the generic rank: the secant index needed to fill the
    /// ambient space.
    pub secant_fill_in: Labeled,
    /// Grassmann cactus ceiling for balanced three-factor Segre varieties.
    pub grassmann_ceiling: Option<Labeled>,
    pub notes: Vec<String>,
}

/// Ceiling constants for `param`. Unsupported quantities are left empty and
/// explained in `notes`.
pub fn ceilings(param: &VarietyParam) -> CeilingReport {
    let dim_w = param.dim_w();
    let dim_x = param.dim_x();
    let mut notes = Vec::new();
    let mut cactus_ceiling = None;
    let mut grassmann_ceiling = None;
    let mut fill_formula = "ceil(dim W/(dim X+1))".to_string();

    if param.is_segre() && param.factors().len() == 3 {
        let s = param.shape();
        let (a, b, c) = (s[0], s[1], s[2]);
        let g = 2 * (a + b + c - 2);
        fill_formula = "ceil(abc/(a+b+c-2))".into();
        if a == b && b == c {
            cactus_ceiling = Some(Labeled::new(g, "2(a+b+c-2) = 6m-4"));
            grassmann_ceiling = Some(Labeled::new(3 * a - 1, "3m-1"));
        } else {
            cactus_ceiling = Some(Labeled::new(g, "2(a+b+c-2)"));
            notes.push("Grassmann ceiling only reported for balanced m x m x m".into());
        }
    } else if param.is_veronese() && param.factors()[0].d == 3 {
        notes.push(
            "cubic forms: generic cactus rank is bounded by explicit short apolar schemes; \
             no closed formula reported"
                .into(),
        );
    } else {
        notes.push(format!("no closed-form cactus ceiling known for {param}"));
    }

    CeilingReport {
        variety: param.to_string(),
        cactus_ceiling,
        secant_fill_in: Labeled::new(dim_w.div_ceil(dim_x + 1), fill_formula),
        grassmann_ceiling,
        notes,
    }
}

impl fmt::Display for CeilingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variety: {}", self.variety)?;
        match &self.cactus_ceiling {
            Some(g) => writeln!(f, "cactus ceiling g = {}  [{}]", g.value, g.formula)?,
            None => writeln!(f, "cactus ceiling g = unknown")?,
        }
        writeln!(
            f,
            "secant fill-in >= {}  [{}]",
            self.secant_fill_in.value, self.secant_fill_in.formula
        )?;
        if let Some(g2) = &self.grassmann_ceiling {
            writeln!(f, "grassmann cactus ceiling g2 = {}  [{}]", g2.value, g2.formula)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
