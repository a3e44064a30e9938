//! The graded differential and its nilpotency and Leibniz checks.
//!
//! On a word `g w` the differential is
//! `d(g w) = d(g) w + (-1)^parity(g) * s^degree(g) * g d(w)`
//! with `s = -1` for d^2 = 0 and `s = j` for d^3 = 0, peeling letters off the
//! left of the word and normalizing every partial product. In the
//! non-associative d^3 algebras this fixes one bracketing; the resulting
//! dependence on bracketing is exactly what the critical pairs expose.

use std::cell::RefCell;
use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::ncalgebra::{Element, Presentation, Word};
use crate::presets::{preset, PresetId};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct CalculusSpec {
    pub presentation: Presentation,
    pub nilpotency: u8,
    /// Image of each generator under d, indexed by rank.
    pub dmap: Vec<Element>,
    pub signbase: Scalar,
}

impl CalculusSpec {
    /// Builds the calculus for a presentation whose differentials follow the
    /// naming scheme `x -> dx -> d2x`. Generators without a differential
    /// partner (group entries, top-degree forms) are d-constants.
    pub fn new(presentation: Presentation, nilpotency: u8) -> Self {
        assert!(nilpotency == 2 || nilpotency == 3, "nilpotency must be 2 or 3");
        let image = |name: &str, degree: u8| -> Element {
            let target = match (degree, nilpotency) {
                (0, _) => format!("d{name}"),
                (1, 3) => format!("d2{}", &name[1..]),
                _ => return Element::zero(),
            };
            presentation
                .generator(&target)
                .filter(|t| t.degree == degree + 1)
                .map(|t| Element::letter(t.rank as u8))
                .unwrap_or_default()
        };
        let dmap = presentation.generators().iter().map(|g| image(&g.name, g.degree)).collect();
        let signbase = if nilpotency == 2 { -Scalar::one() } else { Scalar::j() };
        CalculusSpec { presentation, nilpotency, dmap, signbase }
    }

    pub fn for_preset(id: PresetId) -> Self {
        let n = id.nilpotency().unwrap_or_else(|| panic!("{id} is not a calculus"));
        Self::new(preset(id), n)
    }

    pub fn with_presentation(&self, presentation: Presentation) -> Self {
        Self::new(presentation, self.nilpotency)
    }

    /// `(-1)^parity * signbase^degree` of a word.
    pub fn sign(&self, w: &[u8]) -> Scalar {
        let p = &self.presentation;
        let s = self.signbase.pow(p.word_degree(w) as i32).expect("nonnegative power");
        if p.word_parity(w) == 1 {
            -s
        } else {
            s
        }
    }

    pub fn d(&self, e: &Element) -> Element {
        Differentiator::new(self).d(e)
    }

    /// `d` applied `times` times.
    pub fn d_times(&self, e: &Element, times: usize) -> Element {
        let dd = Differentiator::new(self);
        (0..times).fold(e.clone(), |acc, _| dd.d(&acc))
    }
}

/// Memoizes `d` on words across one sweep.
pub struct Differentiator<'a> {
    spec: &'a CalculusSpec,
    cache: RefCell<HashMap<Word, Element>>,
}

impl<'a> Differentiator<'a> {
    pub fn new(spec: &'a CalculusSpec) -> Self {
        Differentiator { spec, cache: RefCell::new(HashMap::new()) }
    }

    pub fn d(&self, e: &Element) -> Element {
        let mut out = Element::zero();
        for (w, c) in e {
            out.add_scaled(&self.d_word(w), c);
        }
        out
    }

    fn d_word(&self, w: &Word) -> Element {
        if w.is_empty() {
            return Element::zero();
        }
        if let Some(hit) = self.cache.borrow().get(w) {
            return hit.clone();
        }
        let p = &self.spec.presentation;
        let g = w[0];
        let rest = Word::from_slice(&w[1..]);
        let mut out = p.multiply(&self.spec.dmap[g as usize], &Element::word(rest.clone()));
        if !rest.is_empty() {
            let tail = self.d_word(&rest);
            if !tail.is_zero() {
                let head = Element::letter(g);
                out.add_scaled(&p.multiply(&head, &tail), &self.spec.sign(&[g]));
            }
        }
        self.cache.borrow_mut().insert(w.clone(), out.clone());
        out
    }

    pub fn d_times(&self, e: &Element, times: usize) -> Element {
        (0..times).fold(e.clone(), |acc, _| self.d(&acc))
    }
}

/// Outcome of a sweep; failures are data, not errors.
#[derive(Clone, Debug)]
pub struct Report {
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<(Element, Element)>,
    /// Offending inputs with what they produced, capped in length.
    pub counterexamples: Vec<(Element, Element)>,
    pub failures: usize,
    pub notes: Vec<String>,
}

const MAX_COUNTEREXAMPLES: usize = 10;

impl Report {
    fn new() -> Self {
        Report { passed: true, checked: 0, witness: None, counterexamples: Vec::new(), failures: 0, notes: Vec::new() }
    }

    fn fail(&mut self, input: Element, output: Element) {
        self.passed = false;
        self.failures += 1;
        if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push((input, output));
        }
    }

    pub fn status(&self) -> &'static str {
        if self.passed {
            "pass"
        } else {
            "fail"
        }
    }

    pub fn to_json(&self, p: &Presentation) -> Value {
        json!({
            "status": self.status(),
            "checked": self.checked,
            "failures": self.failures,
            "witness": self.witness.as_ref().map(|(i, o)| json!({"input": p.show(i), "output": p.element_to_spec(o)})),
            "counterexamples": self.counterexamples.iter().map(|(i, o)| json!({
                "input": p.show(i),
                "output": p.element_to_spec(o),
            })).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }

    pub fn to_text(&self, p: &Presentation) -> String {
        let mut s = format!("{}: {} checked, {} failed\n", self.status(), self.checked, self.failures);
        if let Some((i, o)) = &self.witness {
            s.push_str(&format!("witness: {} = {}\n", p.show(i), p.show(o)));
        }
        for (i, o) in &self.counterexamples {
            s.push_str(&format!("counterexample: {} -> {}\n", p.show(i), p.show(o)));
        }
        for n in &self.notes {
            s.push_str(n);
            s.push('\n');
        }
        s
    }
}

fn random_word<R: Rng>(rng: &mut R, n: usize, len: usize) -> Word {
    (0..len).map(|_| rng.gen_range(0..n) as u8).collect()
}

/// d^n on every normal word up to `max_len` and on `samples` random words of
/// length up to 6, plus a witness that d^(n-1) does not vanish.
pub fn check_nilpotency<R: Rng>(c: &CalculusSpec, max_len: usize, samples: usize, rng: &mut R) -> Report {
    let p = &c.presentation;
    let n = c.nilpotency as usize;
    let dd = Differentiator::new(c);
    let mut report = Report::new();
    for w in p.normal_words(max_len) {
        let e = Element::word(w);
        let r = dd.d_times(&e, n);
        report.checked += 1;
        if !r.is_zero() {
            report.fail(e, r);
        }
    }
    let ngen = p.generators().len();
    for _ in 0..samples {
        let len = rng.gen_range(1..=6);
        let e = p.normalize(&Element::word(random_word(rng, ngen, len)));
        let r = dd.d_times(&e, n);
        report.checked += 1;
        if !r.is_zero() {
            report.fail(e, r);
        }
    }
    let base = p
        .generator("x")
        .or_else(|| p.generators().iter().find(|g| g.degree == 0))
        .expect("a coordinate generator");
    let x = Element::letter(base.rank as u8);
    let top = dd.d_times(&x, n - 1);
    if top.is_zero() {
        report.passed = false;
        report.notes.push(format!("d^{} vanishes on {}", n - 1, base.name));
    }
    report.witness = Some((x, top));
    report
}

/// `d(uv) - (d(u) v + sign(u) u d(v))`, all products normalized.
pub fn leibniz_defect(c: &CalculusSpec, u: &Word, v: &Word) -> Element {
    let p = &c.presentation;
    let dd = Differentiator::new(c);
    let ue = Element::word(u.clone());
    let ve = Element::word(v.clone());
    let lhs = dd.d(&p.multiply(&ue, &ve));
    let mut rhs = p.multiply(&dd.d(&ue), &ve);
    rhs.add_scaled(&p.multiply(&ue, &dd.d(&ve)), &c.sign(u));
    lhs.sub(&rhs)
}

/// Leibniz rule on random pairs of normal words of length 1 to 3. The
/// report notes how many critical-pair obstructions the presentation has,
/// since in a non-confluent algebra the two sides may legitimately differ.
pub fn check_leibniz<R: Rng>(c: &CalculusSpec, samples: usize, rng: &mut R) -> Report {
    let p = &c.presentation;
    let words: Vec<Word> = p.normal_words(3).into_iter().filter(|w| !w.is_empty()).collect();
    let mut report = Report::new();
    for _ in 0..samples {
        let u = words.choose(rng).expect("nonempty").clone();
        let v = words.choose(rng).expect("nonempty").clone();
        let defect = leibniz_defect(c, &u, &v);
        report.checked += 1;
        if !defect.is_zero() {
            report.fail(Element::word(u.concat(&v)), defect);
        }
    }
    let obstructions = p.critical_pairs().len();
    report.notes.push(format!("critical-pair obstructions: {obstructions}"));
    report
}

/// Normal form of d applied to each rule `L -> R` read as `L - R`; the
/// entries that fail to vanish.
pub fn d_compatibility(c: &CalculusSpec) -> Vec<(Word, Element)> {
    let p = &c.presentation;
    let dd = Differentiator::new(c);
    p.rules()
        .iter()
        .filter_map(|r| {
            let rel = Element::word(r.lhs.clone()).sub(&r.rhs);
            let out = p.normalize(&dd.d(&rel));
            (!out.is_zero()).then(|| (r.lhs.clone(), out))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn el(c: &CalculusSpec, s: &str) -> Element {
        parse_expr(s, &c.presentation).unwrap()
    }

    #[test]
    fn d_of_coordinate() {
        let c = CalculusSpec::for_preset(PresetId::PlanePqD2);
        assert_eq!(c.d(&el(&c, "x")), el(&c, "dx"));
    }

    #[test]
    fn second_differentials() {
        let c = CalculusSpec::for_preset(PresetId::PlanePqD3);
        let y = el(&c, "y");
        assert_eq!(c.d_times(&y, 2), el(&c, "d2y"));
        assert!(c.d_times(&y, 3).is_zero());
    }

    #[test]
    fn leibniz_on_xy() {
        let c = CalculusSpec::for_preset(PresetId::PlanePqD2);
        let p = &c.presentation;
        let got = p.normalize(&c.d(&el(&c, "x*y")));
        assert_eq!(got, p.normalize(&el(&c, "dx*y + p^-1*dy*x")));
    }

    #[test]
    fn nilpotency_of_d2_plane() {
        let c = CalculusSpec::for_preset(PresetId::PlanePqD2);
        let r = check_nilpotency(&c, 3, 20, &mut ChaCha8Rng::seed_from_u64(1));
        assert!(r.passed, "{}", r.to_text(&c.presentation));
    }

    #[test]
    fn theta_theta_leibniz() {
        let c = CalculusSpec::for_preset(PresetId::SplaneQD2);
        let t = word(&c, "theta");
        assert!(leibniz_defect(&c, &t, &t).is_zero());
    }

    fn word(c: &CalculusSpec, s: &str) -> Word {
        c.presentation.word(&[s]).unwrap()
    }
}
