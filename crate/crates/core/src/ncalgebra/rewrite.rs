use std::collections::BTreeMap;

use super::{Element, Presentation, Word};
use crate::scalar::Scalar;

/// Which redex a reduction step rewrites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

/// An overlap word whose two one-step reductions have different normal forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub overlap: Word,
    /// Normal form of path A minus path B. Never zero.
    pub difference: Element,
}

impl Presentation {
    /// Position and length of the redex the strategy picks, if any.
    pub fn find_redex(&self, w: &[u8], strategy: Strategy) -> Option<(usize, usize)> {
        let at = |i: usize| {
            if i + 2 <= w.len() && self.rule_for(&w[i..i + 2]).is_some() {
                Some((i, 2))
            } else if i + 3 <= w.len() && self.rule_for(&w[i..i + 3]).is_some() {
                Some((i, 3))
            } else {
                None
            }
        };
        match strategy {
            Strategy::Leftmost => (0..w.len()).find_map(at),
            Strategy::Rightmost => (0..w.len()).rev().find_map(at),
        }
    }

    pub fn is_normal(&self, w: &[u8]) -> bool {
        self.find_redex(w, Strategy::Leftmost).is_none()
    }

    /// Rewrites the factor of length `len` at `at` by its rule.
    pub fn rewrite_at(&self, w: &[u8], at: usize, len: usize) -> Element {
        let rule = self.rule_for(&w[at..at + len]).expect("redex has a rule");
        let w = Word::from_slice(w);
        rule.rhs.iter().map(|(r, c)| (w.splice(at, len, r), c.clone())).collect()
    }

    pub fn normalize(&self, e: &Element) -> Element {
        self.normalize_with(e, Strategy::Leftmost)
    }

    /// Reduces to normal form. Every rewrite replaces a word by strictly
    /// smaller ones, so draining the largest pending word first touches each
    /// word once.
    pub fn normalize_with(&self, e: &Element, strategy: Strategy) -> Element {
        let mut pending: BTreeMap<Word, Scalar> = e.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        let mut out = Element::zero();
        while let Some((w, c)) = pending.pop_last() {
            if c.is_zero() {
                continue;
            }
            match self.find_redex(&w, strategy) {
                None => out.add_term(w, c),
                Some((at, len)) => {
                    let rule = self.rule_for(&w[at..at + len]).expect("redex has a rule");
                    for (r, rc) in rule.rhs.iter() {
                        let nw = w.splice(at, len, r);
                        let add = &c * rc;
                        match pending.get_mut(&nw) {
                            Some(slot) => *slot = &*slot + &add,
                            None => {
                                pending.insert(nw, add);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Normalized product of two elements.
    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        self.normalize(&a.concat(b))
    }

    /// Left-to-right product of several elements, normalizing after each
    /// factor.
    pub fn multiply_all<'a, I: IntoIterator<Item = &'a Element>>(&self, factors: I) -> Element {
        let mut acc = Element::one();
        for f in factors {
            acc = self.multiply(&acc, f);
        }
        acc
    }

    /// All overlap words of rule left-hand sides: proper suffix/prefix
    /// overlaps and inclusions.
    pub fn overlaps(&self) -> Vec<(Word, (usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for r1 in self.rules() {
            let l1 = &r1.lhs;
            for r2 in self.rules() {
                let l2 = &r2.lhs;
                // suffix of l1 of length k equals prefix of l2
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] == l2[..k] {
                        let w = l1.concat(&l2[k..]);
                        out.push((w, (0, l1.len()), (l1.len() - k, l2.len())));
                    }
                }
                if l2.len() < l1.len() {
                    for at in 0..=l1.len() - l2.len() {
                        if l1[at..at + l2.len()] == l2[..] {
                            out.push((l1.clone(), (0, l1.len()), (at, l2.len())));
                        }
                    }
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        out.dedup();
        out
    }

    /// Reduces every overlap both ways and reports the disagreements.
    pub fn critical_pairs(&self) -> Vec<Obstruction> {
        let mut out = Vec::new();
        for (w, (a_at, a_len), (b_at, b_len)) in self.overlaps() {
            let ra = self.normalize(&self.rewrite_at(&w, a_at, a_len));
            let rb = self.normalize(&self.rewrite_at(&w, b_at, b_len));
            let difference = ra.sub(&rb);
            if !difference.is_zero() {
                out.push(Obstruction { overlap: w, difference });
            }
        }
        out
    }
}
