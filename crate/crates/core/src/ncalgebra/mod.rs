//! Graded noncommutative words, elements and rewrite-rule presentations.

mod element;
mod json;
mod rewrite;

pub use element::{Element, Word};
pub use json::{ElementSpec, GeneratorSpec, PresentationSpec, RuleSpec, TermSpec};
pub use rewrite::{Obstruction, Strategy};

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::{Scalar, ScalarError, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub rank: usize,
    /// Form degree: 0 for coordinates and group entries, 1 for first
    /// differentials, 2 for second differentials.
    pub degree: u8,
    /// Grassmann parity, 0 (even) or 1 (odd).
    pub parity: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: Word,
    pub rhs: Element,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("rule {0}: left-hand side must have length 2 or 3")]
    BadLhsLength(String),
    #[error("rule {0}: right-hand side is not smaller than the left-hand side")]
    NonDecreasing(String),
    #[error("duplicate rule for {0}")]
    DuplicateRule(String),
    #[error("no rule reorders the pair {0}")]
    MissingRule(String),
    #[error("rule {rule}: {source}")]
    Coefficient { rule: String, source: ScalarError },
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
    #[error("{0}")]
    Json(String),
}

/// An ordered generator set with oriented rewrite rules.
///
/// Rules are validated on construction: every right-hand word is strictly
/// below its left-hand side in the deg-lex order, and every out-of-order
/// adjacent pair is handled by exactly one length-2 rule unless declared
/// free.
#[derive(Clone, Debug)]
pub struct Presentation {
    name: String,
    generators: Vec<Generator>,
    rules: Vec<RewriteRule>,
    params: Vec<Var>,
    notes: Vec<String>,
    free: Vec<(usize, usize)>,
    pair_rule: Vec<Option<usize>>,
    long_rules: HashMap<Word, usize>,
}

impl PartialEq for Presentation {
    fn eq(&self, o: &Self) -> bool {
        self.generators == o.generators && self.rules == o.rules && self.free == o.free
    }
}

impl Presentation {
    pub fn new(
        name: impl Into<String>,
        generators: Vec<(String, u8, u8)>,
        rules: Vec<RewriteRule>,
        params: Vec<Var>,
        notes: Vec<String>,
        free: Vec<(usize, usize)>,
    ) -> Result<Self, PresentationError> {
        let mut gens = Vec::with_capacity(generators.len());
        for (rank, (name, degree, parity)) in generators.into_iter().enumerate() {
            if gens.iter().any(|g: &Generator| g.name == name) {
                return Err(PresentationError::DuplicateGenerator(name));
            }
            gens.push(Generator { name, rank, degree, parity });
        }
        let n = gens.len();
        let mut p = Presentation {
            name: name.into(),
            generators: gens,
            rules: Vec::new(),
            params,
            notes,
            free,
            pair_rule: vec![None; n * n],
            long_rules: HashMap::new(),
        };
        for rule in rules {
            p.add_rule(rule)?;
        }
        p.check_complete()?;
        Ok(p)
    }

    fn add_rule(&mut self, rule: RewriteRule) -> Result<(), PresentationError> {
        let n = self.generators.len();
        let label = self.word_name(&rule.lhs);
        if rule.lhs.iter().chain(rule.rhs.words().flat_map(|w| w.iter())).any(|&g| g as usize >= n) {
            return Err(PresentationError::UnknownGenerator(label));
        }
        if !(2..=3).contains(&rule.lhs.len()) {
            return Err(PresentationError::BadLhsLength(label));
        }
        if rule.rhs.words().any(|w| *w >= rule.lhs) {
            return Err(PresentationError::NonDecreasing(label));
        }
        let idx = self.rules.len();
        if rule.lhs.len() == 2 {
            let slot = &mut self.pair_rule[rule.lhs[0] as usize * n + rule.lhs[1] as usize];
            if slot.is_some() {
                return Err(PresentationError::DuplicateRule(label));
            }
            *slot = Some(idx);
        } else if self.long_rules.insert(rule.lhs.clone(), idx).is_some() {
            return Err(PresentationError::DuplicateRule(label));
        }
        self.rules.push(rule);
        Ok(())
    }

    fn check_complete(&self) -> Result<(), PresentationError> {
        let n = self.generators.len();
        for a in 0..n {
            for b in 0..a {
                if self.pair_rule[a * n + b].is_none() && !self.free.contains(&(a, b)) {
                    return Err(PresentationError::MissingRule(format!(
                        "{}*{}",
                        self.generators[a].name, self.generators[b].name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn params(&self) -> &[Var] {
        &self.params
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn free_pairs(&self) -> &[(usize, usize)] {
        &self.free
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.name == name)
    }

    pub fn rank_of(&self, name: &str) -> Option<u8> {
        self.generator(name).map(|g| g.rank as u8)
    }

    /// The word spelled by generator names.
    pub fn word(&self, names: &[&str]) -> Result<Word, PresentationError> {
        names
            .iter()
            .map(|n| self.rank_of(n).ok_or_else(|| PresentationError::UnknownGenerator(n.to_string())))
            .collect()
    }

    /// Rule whose left-hand side is `lhs`, if any.
    pub fn rule_for(&self, lhs: &[u8]) -> Option<&RewriteRule> {
        match lhs.len() {
            2 => {
                let n = self.generators.len();
                self.pair_rule[lhs[0] as usize * n + lhs[1] as usize].map(|i| &self.rules[i])
            }
            3 => self.long_rules.get(lhs).map(|&i| &self.rules[i]),
            _ => None,
        }
    }

    pub fn has_long_rules(&self) -> bool {
        !self.long_rules.is_empty()
    }

    pub fn word_degree(&self, w: &[u8]) -> u32 {
        w.iter().map(|&g| self.generators[g as usize].degree as u32).sum()
    }

    pub fn word_parity(&self, w: &[u8]) -> u8 {
        w.iter().map(|&g| self.generators[g as usize].parity).sum::<u8>() % 2
    }

    pub fn word_name(&self, w: &[u8]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|&g| self.generators.get(g as usize).map(|g| g.name.as_str()).unwrap_or("?"))
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Canonical text of an element, e.g. `(1/q)*x*y - dx*y`.
    pub fn show(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in e.iter().rev().enumerate() {
            let (neg, mag) = if c.prints_negative() { (true, -c) } else { (false, c.clone()) };
            let body = if w.is_empty() {
                if mag.is_integer() {
                    mag.to_string()
                } else {
                    format!("({mag})")
                }
            } else if mag.is_one() {
                self.word_name(w)
            } else if mag.is_integer() {
                format!("{}*{}", mag, self.word_name(w))
            } else {
                format!("({})*{}", mag, self.word_name(w))
            };
            match (i, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        out
    }

    /// Substitutes into every rule coefficient and re-validates. A pole names
    /// the offending rule.
    pub fn substitute(&self, bindings: &[(Var, Scalar)]) -> Result<Presentation, PresentationError> {
        let mut rules = Vec::with_capacity(self.rules.len());
        for r in &self.rules {
            let rhs = r.rhs.try_map_coeffs(|c| c.substitute(bindings)).map_err(|source| {
                PresentationError::Coefficient { rule: self.word_name(&r.lhs), source }
            })?;
            rules.push(RewriteRule { lhs: r.lhs.clone(), rhs });
        }
        let params = self
            .params
            .iter()
            .copied()
            .filter(|v| !bindings.iter().any(|(b, _)| b == v))
            .collect();
        let mut notes = self.notes.clone();
        notes.push(format!(
            "specialized at {}",
            bindings.iter().map(|(v, s)| format!("{v}={s}")).collect::<Vec<_>>().join(", ")
        ));
        Presentation::new(
            self.name.clone(),
            self.generator_table(),
            rules,
            params,
            notes,
            self.free.clone(),
        )
    }

    /// Same presentation under a different name.
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> Self {
        self.notes = notes;
        self
    }

    pub fn generator_table(&self) -> Vec<(String, u8, u8)> {
        self.generators.iter().map(|g| (g.name.clone(), g.degree, g.parity)).collect()
    }

    /// All normal words of length at most `max_len`, shortest first.
    pub fn normal_words(&self, max_len: usize) -> Vec<Word> {
        let n = self.generators.len() as u8;
        let mut out = vec![Word::new()];
        let mut frontier = vec![Word::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for g in 0..n {
                    let mut nw = w.clone();
                    nw.push(g);
                    if !self.has_redex_at_end(&nw) {
                        next.push(nw);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    fn has_redex_at_end(&self, w: &[u8]) -> bool {
        let l = w.len();
        (l >= 2 && self.rule_for(&w[l - 2..]).is_some()) || (l >= 3 && self.rule_for(&w[l - 3..]).is_some())
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.name,
            self.generators.iter().map(|g| g.name.as_str()).collect::<Vec<_>>().join(" < ")
        )?;
        for r in &self.rules {
            writeln!(f, "  {} -> {}", self.word_name(&r.lhs), self.show(&r.rhs))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(names: &[&str]) -> Vec<(String, u8, u8)> {
        names.iter().map(|n| (n.to_string(), 0, 0)).collect()
    }

    fn rule(lhs: &[u8], rhs: &[(Scalar, &[u8])]) -> RewriteRule {
        let mut e = Element::zero();
        for (c, w) in rhs {
            e.add_term(Word::from_slice(w), c.clone());
        }
        RewriteRule { lhs: Word::from_slice(lhs), rhs: e }
    }

    #[test]
    fn quantum_plane_is_valid() {
        let qi = Scalar::q().inv().unwrap();
        let p = Presentation::new("qp", gens(&["x", "y"]), vec![rule(&[1, 0], &[(qi, &[0, 1])])], vec![Var::Q], vec![], vec![]);
        assert!(p.is_ok());
    }

    #[test]
    fn rejects_length_increasing_rule() {
        let r = rule(&[1, 0], &[(Scalar::one(), &[0, 1, 1])]);
        let err = Presentation::new("bad", gens(&["x", "y"]), vec![r], vec![], vec![], vec![]).unwrap_err();
        assert!(matches!(err, PresentationError::NonDecreasing(_)));
    }

    #[test]
    fn rejects_unknown_generator_and_duplicates() {
        let r = rule(&[2, 0], &[(Scalar::one(), &[0, 2])]);
        let err = Presentation::new("bad", gens(&["x", "y"]), vec![r], vec![], vec![], vec![]).unwrap_err();
        assert!(matches!(err, PresentationError::UnknownGenerator(_)));

        let r = rule(&[1, 0], &[(Scalar::one(), &[0, 1])]);
        let err = Presentation::new("dup", gens(&["x", "y"]), vec![r.clone(), r], vec![], vec![], vec![]).unwrap_err();
        assert!(matches!(err, PresentationError::DuplicateRule(_)));
    }

    #[test]
    fn incomplete_table_is_reported_unless_free() {
        let err = Presentation::new("free", gens(&["x", "y"]), vec![], vec![], vec![], vec![]).unwrap_err();
        assert!(matches!(err, PresentationError::MissingRule(_)));
        assert!(Presentation::new("free", gens(&["x", "y"]), vec![], vec![], vec![], vec![(1, 0)]).is_ok());
    }
}
