use serde::{Deserialize, Serialize};

use super::{ActionTerm, Constraint, FiberLabel, Layout, ModuleError, PolyWeightModule, Puncture};
use crate::scalar::{Field, Poly, QuadExt, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum ConstraintDoc {
    SourceAt(Vec<i64>),
    TargetAt(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    /// 1-based.
    pub dir: usize,
    pub src: String,
    pub tgt: String,
    pub poly: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<ConstraintDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PunctureDoc {
    pub offset: Vec<i64>,
    pub labels: Vec<String>,
}

/// On-disk form of a [`PolyWeightModule`].
///
/// `algebra` is `W<n>` (rank `n`) or `W<n>^0` (rank `n-1`, with the last
/// direction acting along the fiber). Coefficients are polynomials in
/// `params ++ m ++ s` (`m1.., s1..` when the rank exceeds one).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub algebra: String,
    #[serde(default = "default_field")]
    pub field: String,
    #[serde(default)]
    pub params: Vec<String>,
    pub beta: Vec<String>,
    pub fiber: Vec<FiberDoc>,
    pub terms: Vec<TermDoc>,
    #[serde(default)]
    pub punctures: Vec<PunctureDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<serde_json::Value>,
}

fn default_field() -> String {
    "Q".into()
}

fn parse_algebra(s: &str) -> Result<(usize, usize), ModuleError> {
    let bad = || ModuleError::Parse(format!("algebra must be `W<n>` or `W<n>^0`, got `{s}`"));
    let rest = s.strip_prefix('W').ok_or_else(bad)?;
    let (num, zero) = match rest.strip_suffix("^0") {
        Some(r) => (r, true),
        None => (rest, false),
    };
    let n: usize = num.parse().map_err(|_| bad())?;
    match (n, zero) {
        (0, _) | (1, true) => Err(bad()),
        (n, true) => Ok((n - 1, n)),
        (n, false) => Ok((n, n)),
    }
}

fn algebra_name(layout: &Layout) -> String {
    if layout.dirs() == layout.rank() {
        format!("W{}", layout.rank())
    } else {
        format!("W{}^0", layout.dirs())
    }
}

impl<F: Field> PolyWeightModule<F> {
    pub fn to_doc(&self) -> ModuleDoc {
        let layout = self.layout();
        let name = |i: usize| self.fiber()[i].name.clone();
        let field = self
            .terms()
            .iter()
            .flat_map(|t| t.coeff.terms().map(|(_, c)| c.context_name()).collect::<Vec<_>>())
            .find(|c| c != "Q")
            .unwrap_or_else(default_field);
        ModuleDoc {
            algebra: algebra_name(layout),
            field,
            params: layout.params().to_vec(),
            beta: self.beta().iter().map(Poly::to_string).collect(),
            fiber: self.fiber().iter().map(|f| FiberDoc { name: f.name.clone(), at: f.at.clone() }).collect(),
            terms: self
                .terms()
                .iter()
                .map(|t| TermDoc {
                    dir: t.dir + 1,
                    src: name(t.src),
                    tgt: name(t.tgt),
                    poly: t.coeff.to_string(),
                    constraint: t.constraint.as_ref().map(|c| match c {
                        Constraint::SourceAt(p) => ConstraintDoc::SourceAt(p.clone()),
                        Constraint::TargetAt(p) => ConstraintDoc::TargetAt(p.clone()),
                    }),
                })
                .collect(),
            punctures: self
                .punctures()
                .iter()
                .map(|p| PunctureDoc { offset: p.offset.clone(), labels: p.labels.iter().map(|&l| name(l)).collect() })
                .collect(),
            witnesses: None,
        }
    }

    pub fn from_doc(doc: &ModuleDoc) -> Result<Self, ModuleError> {
        let (rank, dirs) = parse_algebra(&doc.algebra)?;
        let params: Vec<&str> = doc.params.iter().map(String::as_str).collect();
        let layout = Layout::new(rank, dirs, &params);
        let parse = |text: &str, vars| Poly::<F>::parse(text, vars).map_err(|e| ModuleError::Parse(format!("`{text}`: {e}")));
        let beta = doc.beta.iter().map(|b| parse(b, layout.pvars())).collect::<Result<Vec<_>, _>>()?;
        let fiber: Vec<FiberLabel> = doc.fiber.iter().map(|f| FiberLabel { name: f.name.clone(), at: f.at.clone() }).collect();
        let label = |name: &str| {
            fiber.iter().position(|f| f.name == name).ok_or_else(|| ModuleError::Parse(format!("unknown fiber label `{name}`")))
        };
        let mut terms = Vec::with_capacity(doc.terms.len());
        for t in &doc.terms {
            if t.dir == 0 {
                return Err(ModuleError::Parse("directions are 1-based".into()));
            }
            terms.push(ActionTerm {
                dir: t.dir - 1,
                src: label(&t.src)?,
                tgt: label(&t.tgt)?,
                coeff: parse(&t.poly, layout.vars())?,
                constraint: t.constraint.as_ref().map(|c| match c {
                    ConstraintDoc::SourceAt(p) => Constraint::SourceAt(p.clone()),
                    ConstraintDoc::TargetAt(p) => Constraint::TargetAt(p.clone()),
                }),
            });
        }
        let punctures = doc
            .punctures
            .iter()
            .map(|p| Ok(Puncture { offset: p.offset.clone(), labels: p.labels.iter().map(|l| label(l)).collect::<Result<_, _>>()? }))
            .collect::<Result<Vec<_>, ModuleError>>()?;
        PolyWeightModule::new(layout, beta, fiber, terms, punctures)
    }
}

/// A module over one of the supported coefficient fields.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyModule {
    Rational(PolyWeightModule<Rational>),
    Quad(PolyWeightModule<QuadExt>),
}

impl AnyModule {
    pub fn from_json(text: &str) -> Result<Self, ModuleError> {
        let doc: ModuleDoc = serde_json::from_str(text).map_err(|e| ModuleError::Parse(e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn from_doc(doc: &ModuleDoc) -> Result<Self, ModuleError> {
        if doc.field == "Q" {
            return PolyWeightModule::from_doc(doc).map(AnyModule::Rational);
        }
        let d = doc
            .field
            .strip_prefix("Q(sqrt(")
            .and_then(|r| r.strip_suffix("))"))
            .and_then(|r| r.parse::<u32>().ok())
            .ok_or_else(|| ModuleError::Parse(format!("field must be `Q` or `Q(sqrt(d))`, got `{}`", doc.field)))?;
        let m = PolyWeightModule::<QuadExt>::from_doc(doc)?;
        let stray = m.terms().iter().flat_map(|t| t.coeff.terms().map(|(_, c)| c.radicand()).collect::<Vec<_>>()).any(|r| r != 0 && r != d);
        if stray {
            return Err(ModuleError::Parse(format!("coefficients outside {}", doc.field)));
        }
        Ok(AnyModule::Quad(m))
    }

    pub fn to_doc(&self) -> ModuleDoc {
        match self {
            AnyModule::Rational(m) => m.to_doc(),
            AnyModule::Quad(m) => m.to_doc(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{build_preset, gamma_module, GlnRep, Param, PRESETS};

    #[test]
    fn presets_round_trip() {
        for name in PRESETS {
            let m = build_preset(name).unwrap();
            let back = AnyModule::from_json(&m.to_json()).unwrap();
            assert_eq!(back, m, "{name}");
        }
    }

    #[test]
    fn gamma_module_round_trip() {
        let m = gamma_module(&GlnRep::<Rational>::natural(1), &[Param::sym("b")], Param::sym("g")).unwrap();
        let doc = m.to_doc();
        assert_eq!(doc.algebra, "W2^0");
        assert_eq!(PolyWeightModule::<Rational>::from_doc(&doc).unwrap(), m);
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"{"algebra":"W1","beta":["0"],"fiber":[{"name":"v"}],"terms":[],"extra":1}"#;
        assert!(AnyModule::from_json(text).is_err());
        let text = r#"{"algebra":"W1","beta":["0"],"fiber":[{"name":"v"}],"terms":[{"dir":1,"src":"v","tgt":"v","poly":"s + x"}]}"#;
        assert!(AnyModule::from_json(text).is_err());
    }
}
