//! Covariance of the calculi under the quantum (super)group coactions.
//!
//! A combined algebra holds the group entries, the plane generators and the
//! cross rules `g h = q_gh h g` between them. Covariance is checked by
//! substituting the coaction images into each relation and reducing there.

mod ansatz;
mod linear;

pub use ansatz::{
    ansatz_combined, associativity, constraint_bindings, solve_ansatz, AnsatzEquation, AnsatzSolution, AnsatzSystem,
    Associativity, Root, Stage,
};
pub use linear::{eliminate, Elimination};

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::differential::CalculusSpec;
use crate::expr::parse_scalar;
use crate::ncalgebra::{Element, Presentation, PresentationError, RewriteRule, Word};
use crate::presets::{displayed_relations, preset, PresetId};
use crate::scalar::{Scalar, ScalarError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CovarianceError {
    #[error("cross table has no entry for ({0}, {1})")]
    MissingEntry(String, String),
    #[error("cross entry ({0}, {1}) is zero")]
    ZeroEntry(String, String),
    #[error("no coordinate behind generator `{0}`")]
    NoCoordinate(String),
    #[error("generator `{0}` appears in both algebras")]
    Clash(String),
    #[error("{0} has no matching group")]
    NoGroup(PresetId),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("ansatz: {0}")]
    Ansatz(String),
}

/// The coefficients `q_gh` in `g h = q_gh h g` for plane generator `g` and
/// group entry `h`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CrossTable {
    entries: BTreeMap<(String, String), Scalar>,
}

fn table_from(rows: &[(&str, &str, &str)]) -> CrossTable {
    let mut t = CrossTable::default();
    for (g, h, c) in rows {
        t.insert(g, h, parse_scalar(c).expect("valid cross entry"));
    }
    t
}

impl CrossTable {
    pub fn insert(&mut self, plane: &str, group: &str, c: Scalar) {
        self.entries.insert((plane.to_string(), group.to_string()), c);
    }

    pub fn remove(&mut self, plane: &str, group: &str) -> Option<Scalar> {
        self.entries.remove(&(plane.to_string(), group.to_string()))
    }

    pub fn get(&self, plane: &str, group: &str) -> Option<&Scalar> {
        self.entries.get(&(plane.to_string(), group.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, &Scalar)> {
        self.entries.iter().map(|((g, h), c)| (g.as_str(), h.as_str(), c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The plane table with symbolic `q'` and `k` (and `q-bar = q`).
    pub fn plane_general() -> Self {
        let br = "(q - (p - 1/q')*k)";
        table_from(&[
            ("x", "a", "1"),
            ("x", "b", "q/p"),
            ("x", "c", "q/q'"),
            ("x", "dgen", "q*k/q'"),
            ("y", "a", "q*k/q'"),
            ("y", "b", &format!("q^2/p*{br}")),
            ("y", "c", &format!("q^2/q'*{br}")),
            ("y", "dgen", &format!("q^3/(q'*p)*{br}")),
        ])
    }

    /// The plane table once `q' = q` and `k = q/p`.
    pub fn plane_constrained() -> Self {
        table_from(&[
            ("x", "a", "1"),
            ("x", "c", "1"),
            ("x", "b", "q/p"),
            ("x", "dgen", "q/p"),
            ("y", "a", "q/p"),
            ("y", "c", "q/p"),
            ("y", "b", "q^2/p^2"),
            ("y", "dgen", "q^2/p^2"),
        ])
    }

    /// `GL_q(1|1)`: `a, d` commute with both coordinates, `beta, gamma`
    /// commute with `x` and anticommute with `theta`.
    pub fn super_one_param() -> Self {
        table_from(&[
            ("x", "a", "1"),
            ("x", "beta", "1"),
            ("x", "gamma", "1"),
            ("x", "dgen", "1"),
            ("theta", "a", "1"),
            ("theta", "beta", "-1"),
            ("theta", "gamma", "-1"),
            ("theta", "dgen", "1"),
        ])
    }

    /// `GL_{p,q'}(1|1)` with symbolic `q'` and `k` (and `q-bar = q`).
    pub fn super_general() -> Self {
        table_from(&[
            ("x", "a", "k"),
            ("x", "beta", "q/p*k"),
            ("x", "gamma", "q/q'*k"),
            ("x", "dgen", "q^2/(q'*p)*k"),
            ("theta", "a", "q^2/(q'*p)*k"),
            ("theta", "beta", "-q^3/(q'*p^2)*k"),
            ("theta", "gamma", "-q^3/(q'^2*p)*k"),
            ("theta", "dgen", "q^4/(q'^2*p^2)*k"),
        ])
    }

    /// The two-parameter super table once `q' = q` and `k = q/p`.
    pub fn super_constrained() -> Self {
        table_from(&[
            ("x", "a", "q/p"),
            ("x", "beta", "q^2/p^2"),
            ("x", "gamma", "q/p"),
            ("x", "dgen", "q^2/p^2"),
            ("theta", "a", "q^2/p^2"),
            ("theta", "beta", "-q^3/p^3"),
            ("theta", "gamma", "-q^2/p^2"),
            ("theta", "dgen", "q^3/p^3"),
        ])
    }

    pub fn substitute(&self, bindings: &[(Var, Scalar)]) -> Result<Self, ScalarError> {
        let mut entries = BTreeMap::new();
        for (key, c) in &self.entries {
            entries.insert(key.clone(), c.substitute(bindings)?);
        }
        Ok(CrossTable { entries })
    }

    /// Fills in the differentials of the plane from their coordinates. A
    /// generator whose total parity (parity plus degree) differs from its
    /// coordinate's picks up a sign against odd group entries. Entries
    /// already present are kept.
    pub fn extend(&self, plane: &Presentation, group: &Presentation) -> Result<Self, CovarianceError> {
        let mut out = self.clone();
        for g in plane.generators() {
            if g.degree == 0 {
                continue;
            }
            let base = coordinate_of(&g.name, g.degree).ok_or_else(|| CovarianceError::NoCoordinate(g.name.clone()))?;
            let bg = plane.generator(&base).ok_or_else(|| CovarianceError::NoCoordinate(g.name.clone()))?;
            let flip = (g.parity + g.degree + bg.parity + bg.degree) % 2;
            for h in group.generators() {
                if out.get(&g.name, &h.name).is_some() {
                    continue;
                }
                if let Some(c) = self.get(&base, &h.name) {
                    let c = if flip * h.parity % 2 == 1 { -c.clone() } else { c.clone() };
                    out.insert(&g.name, &h.name, c);
                }
            }
        }
        Ok(out)
    }
}

/// `dx -> x`, `d2theta -> theta`.
fn coordinate_of(name: &str, degree: u8) -> Option<String> {
    match degree {
        1 => name.strip_prefix('d').map(str::to_string),
        2 => name.strip_prefix("d2").map(str::to_string),
        _ => None,
    }
}

/// Group entries first, then the plane generators in their own order.
/// Every pair needs an explicit cross entry.
pub fn build_combined(plane: &Presentation, group: &Presentation, cross: &CrossTable) -> Result<Presentation, CovarianceError> {
    let offset = group.generators().len() as u8;
    for g in plane.generators() {
        if group.generator(&g.name).is_some() {
            return Err(CovarianceError::Clash(g.name.clone()));
        }
    }
    let mut gens = group.generator_table();
    gens.extend(plane.generator_table());

    let shift = |w: &Word| -> Word { w.iter().map(|&g| g + offset).collect() };
    let mut rules: Vec<RewriteRule> = group.rules().to_vec();
    for r in plane.rules() {
        let rhs = r.rhs.iter().map(|(w, c)| (shift(w), c.clone())).collect();
        rules.push(RewriteRule { lhs: shift(&r.lhs), rhs });
    }
    for g in plane.generators() {
        for h in group.generators() {
            let c = cross
                .get(&g.name, &h.name)
                .ok_or_else(|| CovarianceError::MissingEntry(g.name.clone(), h.name.clone()))?;
            if c.is_zero() {
                return Err(CovarianceError::ZeroEntry(g.name.clone(), h.name.clone()));
            }
            let gr = g.rank as u8 + offset;
            let hr = h.rank as u8;
            rules.push(RewriteRule { lhs: Word::from_slice(&[gr, hr]), rhs: Element::term(c.clone(), Word::from_slice(&[hr, gr])) });
        }
    }

    let mut params = group.params().to_vec();
    for v in plane.params() {
        if !params.contains(v) {
            params.push(*v);
        }
    }
    params.sort();
    let mut free: Vec<(usize, usize)> = group.free_pairs().to_vec();
    let o = offset as usize;
    free.extend(plane.free_pairs().iter().map(|&(a, b)| (a + o, b + o)));
    let p = Presentation::new(format!("{}+{}", group.name(), plane.name()), gens, rules, params, vec![], free)?;
    Ok(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    T,
    Transpose,
    Supertranspose,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::T => "T",
            Variant::Transpose => "transpose",
            Variant::Supertranspose => "supertranspose",
        }
    }
}

/// Images of the plane generators under a coaction, indexed by rank in the
/// combined algebra. Group entries map to themselves.
#[derive(Clone, Debug)]
pub struct TransformationSpec {
    pub variant: Variant,
    images: Vec<Element>,
}

impl TransformationSpec {
    /// Coordinates `(u, v)` go to the matrix image; the differentials are
    /// obtained by applying d, for which group entries are constants.
    pub fn new(variant: Variant, combined: &CalculusSpec, coords: [&str; 2]) -> Result<Self, CovarianceError> {
        let p = &combined.presentation;
        let letter = |n: &str| -> Result<Element, CovarianceError> {
            p.rank_of(n).map(Element::letter).ok_or_else(|| CovarianceError::NoCoordinate(n.to_string()))
        };
        let group: Vec<&str> = match p.generator("b") {
            Some(_) => vec!["a", "b", "c", "dgen"],
            None => vec!["a", "beta", "gamma", "dgen"],
        };
        let [a, b, c, d] = [0, 1, 2, 3].map(|i| letter(group[i]));
        let (a, b, c, d) = (a?, b?, c?, d?);
        let (u, v) = (letter(coords[0])?, letter(coords[1])?);
        let lin = |m: &Element, s: &Element, n: &Element, t: &Element| m.concat(s).add(&n.concat(t));
        let (u1, v1) = match variant {
            Variant::T => (lin(&a, &u, &b, &v), lin(&c, &u, &d, &v)),
            Variant::Transpose => (lin(&a, &u, &c, &v), lin(&b, &u, &d, &v)),
            Variant::Supertranspose => (lin(&a, &u, &c.neg(), &v), lin(&b, &u, &d, &v)),
        };
        let mut images: Vec<Element> = (0..p.generators().len()).map(|g| Element::letter(g as u8)).collect();
        let mut set = |name: String, e: Element| {
            if let Some(r) = p.rank_of(&name) {
                images[r as usize] = e;
            }
        };
        let mut layer = [(coords[0].to_string(), u1), (coords[1].to_string(), v1)];
        for step in 0..combined.nilpotency {
            for (name, e) in &layer {
                set(name.clone(), e.clone());
            }
            if step + 1 == combined.nilpotency {
                break;
            }
            let prefix = if step == 0 { "d" } else { "d2" };
            layer = [0, 1].map(|i| (format!("{prefix}{}", coords[i]), combined.d(&layer[i].1)));
        }
        Ok(TransformationSpec { variant, images })
    }

    pub fn image(&self, rank: u8) -> &Element {
        &self.images[rank as usize]
    }

    /// Substitutes every letter of `e` by its image, multiplying left to
    /// right and normalizing each partial product.
    pub fn apply(&self, p: &Presentation, e: &Element) -> Element {
        let mut out = Element::zero();
        for (w, c) in e {
            let img = p.multiply_all(w.iter().map(|&g| &self.images[g as usize]));
            out.add_scaled(&img, c);
        }
        out
    }
}

/// Residual of every relation; covariant when all of them vanish.
#[derive(Clone, Debug)]
pub struct CovarianceReport {
    pub variant: Variant,
    pub residuals: Vec<(String, Element)>,
}

impl CovarianceReport {
    pub fn covariant(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    pub fn failing(&self) -> impl Iterator<Item = &(String, Element)> {
        self.residuals.iter().filter(|(_, r)| !r.is_zero())
    }

    pub fn to_json(&self, p: &Presentation) -> Value {
        json!({
            "variant": self.variant.as_str(),
            "status": if self.covariant() { "pass" } else { "fail" },
            "residuals": self.residuals.iter().map(|(l, r)| json!({
                "relation": l,
                "zero": r.is_zero(),
                "residual": p.show(r),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self, p: &Presentation) -> String {
        let mut s = format!(
            "{} under {}: {} of {} relations fail\n",
            if self.covariant() { "pass" } else { "fail" },
            self.variant.as_str(),
            self.failing().count(),
            self.residuals.len()
        );
        for (l, r) in self.failing() {
            s.push_str(&format!("  {l}: residual {}\n", p.show(r)));
        }
        s
    }
}

/// Relations must be written over the combined generators.
pub fn check_covariance(combined: &Presentation, t: &TransformationSpec, relations: &[(String, Element)]) -> CovarianceReport {
    let residuals = relations.iter().map(|(l, e)| (l.clone(), combined.normalize(&t.apply(combined, e)))).collect();
    CovarianceReport { variant: t.variant, residuals }
}

/// Everything needed to check one shipped calculus.
#[derive(Clone, Debug)]
pub struct CovarianceSetup {
    pub calculus: PresetId,
    pub combined: CalculusSpec,
    pub coords: [&'static str; 2],
    pub variants: [Variant; 2],
    /// Displayed relations of the calculus, over the combined generators.
    pub relations: Vec<(String, Element)>,
}

/// The group, the specialization applied to it, and the coordinate table.
pub fn matching_group(id: PresetId) -> Result<(Presentation, CrossTable), CovarianceError> {
    let qq = [(Var::QPRIME, Scalar::q())];
    let pq = [(Var::P, Scalar::q()), (Var::QPRIME, Scalar::q())];
    Ok(match id {
        PresetId::PlanePqD2 | PresetId::PlanePqD3 => {
            (preset(PresetId::GlPq2).substitute(&qq)?, CrossTable::plane_constrained())
        }
        PresetId::PlaneQD2 => (
            preset(PresetId::GlPq2).substitute(&pq)?.renamed("gl-q-2"),
            CrossTable::plane_constrained().substitute(&pq[..1])?,
        ),
        PresetId::SplaneQD2 | PresetId::SplaneQD3 => (preset(PresetId::GlQ11), CrossTable::super_one_param()),
        PresetId::SplanePqD2 | PresetId::SplanePqD3 => {
            (preset(PresetId::GlPq11).substitute(&qq)?, CrossTable::super_constrained())
        }
        other => return Err(CovarianceError::NoGroup(other)),
    })
}

impl CovarianceSetup {
    pub fn for_preset(id: PresetId) -> Result<Self, CovarianceError> {
        let (group, table) = matching_group(id)?;
        Self::with_table(id, &group, &table)
    }

    /// Same as [`CovarianceSetup::for_preset`] with a replacement coordinate
    /// table, for perturbation tests.
    pub fn with_table(id: PresetId, group: &Presentation, table: &CrossTable) -> Result<Self, CovarianceError> {
        let plane = preset(id);
        let n = id.nilpotency().ok_or(CovarianceError::NoGroup(id))?;
        let full = table.extend(&plane, group)?;
        let combined = build_combined(&plane, group, &full)?;
        let offset = group.generators().len() as u8;
        let relations = displayed_relations(id)
            .into_iter()
            .map(|(l, e)| (l, e.iter().map(|(w, c)| (w.iter().map(|&g| g + offset).collect(), c.clone())).collect()))
            .collect();
        let (coords, variants) = if id.is_super() {
            (["x", "theta"], [Variant::T, Variant::Supertranspose])
        } else {
            (["x", "y"], [Variant::T, Variant::Transpose])
        };
        Ok(CovarianceSetup { calculus: id, combined: CalculusSpec::new(combined, n), coords, variants, relations })
    }

    pub fn transformation(&self, variant: Variant) -> Result<TransformationSpec, CovarianceError> {
        TransformationSpec::new(variant, &self.combined, self.coords)
    }

    /// Covariance of the displayed relations under both coactions.
    pub fn check(&self) -> Result<Vec<CovarianceReport>, CovarianceError> {
        self.check_relations(&self.relations)
    }

    pub fn check_relations(&self, relations: &[(String, Element)]) -> Result<Vec<CovarianceReport>, CovarianceError> {
        self.variants
            .iter()
            .map(|&v| Ok(check_covariance(&self.combined.presentation, &self.transformation(v)?, relations)))
            .collect()
    }

    /// A relation of the calculus lifted to the combined generators.
    pub fn lift(&self, e: &Element) -> Element {
        let offset = self.combined.presentation.generators().len() as u8 - preset(self.calculus).generators().len() as u8;
        e.iter().map(|(w, c)| (w.iter().map(|&g| g + offset).collect(), c.clone())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn bindings() -> Vec<(Var, Scalar)> {
        vec![(Var::QPRIME, Scalar::q()), (Var::K, &Scalar::q() / &Scalar::p())]
    }

    #[test]
    fn general_tables_specialize_to_constrained() {
        assert_eq!(CrossTable::plane_general().substitute(&bindings()).unwrap(), CrossTable::plane_constrained());
        assert_eq!(CrossTable::super_general().substitute(&bindings()).unwrap(), CrossTable::super_constrained());
        let p_is_q = [(Var::P, Scalar::q())];
        assert_eq!(CrossTable::super_constrained().substitute(&p_is_q).unwrap(), CrossTable::super_one_param());
    }

    #[test]
    fn combined_plane_has_eight_generators() {
        let s = CovarianceSetup::for_preset(PresetId::PlanePqD2).unwrap();
        assert_eq!(s.combined.presentation.generators().len(), 8);
    }

    #[test]
    fn missing_entry_is_reported() {
        let plane = preset(PresetId::PlanePqD2);
        let (group, table) = matching_group(PresetId::PlanePqD2).unwrap();
        let mut full = table.extend(&plane, &group).unwrap();
        full.remove("dy", "c");
        let err = build_combined(&plane, &group, &full).unwrap_err();
        assert_eq!(err, CovarianceError::MissingEntry("dy".into(), "c".into()));
    }

    #[test]
    fn quantum_plane_relation_is_covariant() {
        let s = CovarianceSetup::for_preset(PresetId::PlanePqD2).unwrap();
        let p = &s.combined.presentation;
        let rel = vec![("xy".to_string(), parse_expr("x*y - q*y*x", p).unwrap())];
        for r in s.check_relations(&rel).unwrap() {
            assert!(r.covariant(), "{}", r.to_text(p));
        }
    }

    #[test]
    fn differential_image_uses_d() {
        let s = CovarianceSetup::for_preset(PresetId::SplaneQD2).unwrap();
        let p = &s.combined.presentation;
        let t = s.transformation(Variant::T).unwrap();
        let dx = t.image(p.rank_of("dx").unwrap());
        assert_eq!(*dx, parse_expr("a*dx - beta*dtheta", p).unwrap());
    }

    #[test]
    fn perturbed_entry_breaks_covariance() {
        let (group, mut table) = matching_group(PresetId::PlanePqD2).unwrap();
        table.insert("x", "b", Scalar::one());
        let s = CovarianceSetup::with_table(PresetId::PlanePqD2, &group, &table).unwrap();
        let p = &s.combined.presentation;
        let rel = vec![("x*dx".to_string(), parse_expr("x*dx - (1/(p*q))*dx*x", p).unwrap())];
        let reports = s.check_relations(&rel).unwrap();
        assert!(!reports[0].covariant());
    }

    #[test]
    fn extension_flips_sign_for_odd_differential() {
        let plane = preset(PresetId::SplaneQD2);
        let (group, table) = matching_group(PresetId::SplaneQD2).unwrap();
        let full = table.extend(&plane, &group).unwrap();
        assert_eq!(full.get("dx", "beta"), Some(&-Scalar::one()));
        assert_eq!(full.get("dtheta", "beta"), Some(&Scalar::one()));
        assert_eq!(full.get("dtheta", "a"), Some(&Scalar::one()));
    }
}
