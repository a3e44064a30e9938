//! Declarative JSON form of presentations and elements.

use serde::{Deserialize, Serialize};

use super::{Element, Presentation, PresentationError, RewriteRule, Word};
use crate::expr::parse_scalar;
use crate::scalar::Var;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u8,
    pub parity: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub coeff: String,
    pub word: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub lhs: Vec<String>,
    pub rhs: Vec<TermSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationSpec {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub generators: Vec<GeneratorSpec>,
    pub rules: Vec<RuleSpec>,
    pub params: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Out-of-order pairs that are left without a rule.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub free: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementSpec {
    pub terms: Vec<TermSpec>,
}

fn lookup(names: &[String], n: &str) -> Result<u8, PresentationError> {
    names
        .iter()
        .position(|g| g == n)
        .map(|i| i as u8)
        .ok_or_else(|| PresentationError::UnknownGenerator(n.to_string()))
}

fn word_of(names: &[String], w: &[String]) -> Result<Word, PresentationError> {
    w.iter().map(|n| lookup(names, n)).collect()
}

fn terms_to_element(names: &[String], label: &str, terms: &[TermSpec]) -> Result<Element, PresentationError> {
    let mut e = Element::zero();
    for t in terms {
        let c = parse_scalar(&t.coeff)
            .map_err(|err| PresentationError::Coefficient { rule: label.to_string(), source: err.into() })?;
        e.add_term(word_of(names, &t.word)?, c);
    }
    Ok(e)
}

fn element_to_terms(p: &Presentation, e: &Element) -> Vec<TermSpec> {
    e.iter()
        .rev()
        .map(|(w, c)| TermSpec {
            coeff: c.to_string(),
            word: w.iter().map(|&g| p.generators()[g as usize].name.clone()).collect(),
        })
        .collect()
}

impl PresentationSpec {
    pub fn build(&self) -> Result<Presentation, PresentationError> {
        let names: Vec<String> = self.generators.iter().map(|g| g.name.clone()).collect();
        let mut rules = Vec::with_capacity(self.rules.len());
        for r in &self.rules {
            let lhs = word_of(&names, &r.lhs)?;
            let rhs = terms_to_element(&names, &r.lhs.join("*"), &r.rhs)?;
            rules.push(RewriteRule { lhs, rhs });
        }
        let params = self
            .params
            .iter()
            .map(|s| Var::from_name(s).ok_or_else(|| PresentationError::UnknownParam(s.clone())))
            .collect::<Result<_, _>>()?;
        let free = self
            .free
            .iter()
            .map(|[a, b]| Ok((lookup(&names, a)? as usize, lookup(&names, b)? as usize)))
            .collect::<Result<_, PresentationError>>()?;
        Presentation::new(
            self.name.clone(),
            self.generators.iter().map(|g| (g.name.clone(), g.degree, g.parity)).collect(),
            rules,
            params,
            self.notes.clone(),
            free,
        )
    }

    pub fn from_presentation(p: &Presentation) -> Self {
        let gname = |g: usize| p.generators()[g].name.clone();
        PresentationSpec {
            name: p.name().to_string(),
            generators: p
                .generators()
                .iter()
                .map(|g| GeneratorSpec { name: g.name.clone(), degree: g.degree, parity: g.parity })
                .collect(),
            rules: p
                .rules()
                .iter()
                .map(|r| RuleSpec {
                    lhs: r.lhs.iter().map(|&g| gname(g as usize)).collect(),
                    rhs: element_to_terms(p, &r.rhs),
                })
                .collect(),
            params: p.params().iter().map(|v| v.name()).collect(),
            notes: p.notes().to_vec(),
            free: p.free_pairs().iter().map(|&(a, b)| [gname(a), gname(b)]).collect(),
        }
    }
}

impl Presentation {
    pub fn from_json(text: &str) -> Result<Presentation, PresentationError> {
        let spec: PresentationSpec = serde_json::from_str(text).map_err(|e| PresentationError::Json(e.to_string()))?;
        spec.build()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PresentationSpec::from_presentation(self)).expect("serializable")
    }

    pub fn element_to_spec(&self, e: &Element) -> ElementSpec {
        ElementSpec { terms: element_to_terms(self, e) }
    }

    pub fn element_from_spec(&self, spec: &ElementSpec) -> Result<Element, PresentationError> {
        let names: Vec<String> = self.generators().iter().map(|g| g.name.clone()).collect();
        terms_to_element(&names, "element", &spec.terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PLANE: &str = r#"{
        "generators": [{"name": "x", "degree": 0, "parity": 0}, {"name": "y", "degree": 0, "parity": 0}],
        "rules": [{"lhs": ["y", "x"], "rhs": [{"coeff": "1/q", "word": ["x", "y"]}]}],
        "params": ["q"]
    }"#;

    #[test]
    fn load_and_round_trip() {
        let p = Presentation::from_json(PLANE).unwrap();
        assert_eq!(p.rules().len(), 1);
        let again = Presentation::from_json(&p.to_json()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn length_increasing_rule_is_rejected() {
        let bad = PLANE.replace(r#""word": ["x", "y"]"#, r#""word": ["x", "y", "y"]"#);
        assert!(matches!(Presentation::from_json(&bad), Err(PresentationError::NonDecreasing(_))));
    }

    #[test]
    fn unknown_generator_is_rejected() {
        let bad = PLANE.replace(r#""lhs": ["y", "x"]"#, r#""lhs": ["y", "w"]"#);
        assert!(matches!(Presentation::from_json(&bad), Err(PresentationError::UnknownGenerator(_))));
    }
}
