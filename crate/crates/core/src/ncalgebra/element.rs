use std::cmp::Ordering;
use std::collections::btree_map::{self, BTreeMap};
use std::ops::Deref;

use smallvec::SmallVec;

use crate::scalar::{Scalar, ScalarError};

/// A word of generator ranks. Ordered deg-lex: shorter words first, then
/// lexicographically by rank.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Word(SmallVec<[u8; 8]>);

impl Word {
    pub fn new() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_slice(s: &[u8]) -> Self {
        Word(SmallVec::from_slice(s))
    }

    pub fn letter(g: u8) -> Self {
        Word::from_slice(&[g])
    }

    pub fn push(&mut self, g: u8) {
        self.0.push(g);
    }

    pub fn concat(&self, o: &[u8]) -> Word {
        let mut w = self.0.clone();
        w.extend_from_slice(o);
        Word(w)
    }

    /// `self[..at] ++ mid ++ self[at + len..]`
    pub fn splice(&self, at: usize, len: usize, mid: &[u8]) -> Word {
        let mut w = SmallVec::with_capacity(self.len() - len + mid.len());
        w.extend_from_slice(&self.0[..at]);
        w.extend_from_slice(mid);
        w.extend_from_slice(&self.0[at + len..]);
        Word(w)
    }
}

impl Deref for Word {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl std::borrow::Borrow<[u8]> for Word {
    fn borrow(&self) -> &[u8] {
        &self.0
    }
}

impl FromIterator<u8> for Word {
    fn from_iter<I: IntoIterator<Item = u8>>(it: I) -> Self {
        Word(it.into_iter().collect())
    }
}

impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        self.len().cmp(&o.len()).then_with(|| self.0.as_slice().cmp(o.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A finite linear combination of words with nonzero scalar coefficients.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Element {
    terms: BTreeMap<Word, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::scalar(Scalar::one())
    }

    pub fn scalar(c: Scalar) -> Self {
        Self::term(c, Word::new())
    }

    pub fn word(w: Word) -> Self {
        Self::term(Scalar::one(), w)
    }

    pub fn letter(g: u8) -> Self {
        Self::word(Word::letter(g))
    }

    pub fn term(c: Scalar, w: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[u8]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Terms in increasing word order.
    pub fn iter(&self) -> btree_map::Iter<'_, Word, Scalar> {
        self.terms.iter()
    }

    pub fn words(&self) -> btree_map::Keys<'_, Word, Scalar> {
        self.terms.keys()
    }

    pub fn coeffs(&self) -> btree_map::Values<'_, Word, Scalar> {
        self.terms.values()
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, o: &Element, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, a) in &o.terms {
            self.add_term(w.clone(), if c.is_one() { a.clone() } else { a * c });
        }
    }

    pub fn add(&self, o: &Element) -> Element {
        let mut r = self.clone();
        r.add_scaled(o, &Scalar::one());
        r
    }

    pub fn sub(&self, o: &Element) -> Element {
        let mut r = self.clone();
        r.add_scaled(o, &-Scalar::one());
        r
    }

    pub fn neg(&self) -> Element {
        Element { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect() }
    }

    /// Termwise concatenation, without any rewriting.
    pub fn concat(&self, o: &Element) -> Element {
        let mut r = Element::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                r.add_term(w1.concat(w2), c1 * c2);
            }
        }
        r
    }

    pub fn try_map_coeffs<F>(&self, mut f: F) -> Result<Element, ScalarError>
    where
        F: FnMut(&Scalar) -> Result<Scalar, ScalarError>,
    {
        let mut r = Element::zero();
        for (w, c) in &self.terms {
            r.add_term(w.clone(), f(c)?);
        }
        Ok(r)
    }

    /// The coefficient of the empty word when that is the only term.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Word::new()[..]).cloned(),
            _ => None,
        }
    }
}

impl FromIterator<(Word, Scalar)> for Element {
    fn from_iter<I: IntoIterator<Item = (Word, Scalar)>>(it: I) -> Self {
        let mut e = Element::zero();
        for (w, c) in it {
            e.add_term(w, c);
        }
        e
    }
}

impl<'a> IntoIterator for &'a Element {
    type Item = (&'a Word, &'a Scalar);
    type IntoIter = btree_map::Iter<'a, Word, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deg_lex_order() {
        let a = Word::from_slice(&[3]);
        let b = Word::from_slice(&[0, 0]);
        let c = Word::from_slice(&[0, 1]);
        assert!(a < b && b < c);
        assert!(Word::new() < a);
    }

    #[test]
    fn zero_terms_are_pruned() {
        let mut e = Element::word(Word::letter(1));
        e.add_term(Word::letter(1), -Scalar::one());
        assert!(e.is_zero());
    }

    #[test]
    fn concatenation_is_ordered() {
        let x = Element::letter(0);
        let y = Element::letter(1);
        let xy = x.concat(&y);
        assert_eq!(xy.coeff(&[0, 1]), Scalar::one());
        assert!(xy.coeff(&[1, 0]).is_zero());
    }
}
