//! Re-derivation of the first-order d^2 plane calculus from a 16-coefficient
//! ansatz
//!
//! ```text
//! x dx = C1 dx x + C2 dy x + C3 dx y + C4 dy y
//! x dy = C5 dx x + ...
//! y dx = C9 dx x + ...
//! y dy = C13 dx x + ... + C16 dy y
//! ```
//!
//! Covariance under `T` and its transpose and the differentiated plane
//! relation give a linear system in the unknowns. It leaves one unknown free;
//! the associativity of `x dx dy` then constrains that last one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::linear::eliminate;
use super::{build_combined, check_covariance, CovarianceError, CrossTable, TransformationSpec, Variant};
use crate::differential::{check_nilpotency, CalculusSpec};
use crate::ncalgebra::{Element, Presentation, RewriteRule, Word};
use crate::presets::{preset, PresetId};
use crate::scalar::{gcd, Poly, Scalar, Var};

const LHS: [[&str; 2]; 4] = [["x", "dx"], ["x", "dy"], ["y", "dx"], ["y", "dy"]];
const BASIS: [[&str; 2]; 4] = [["dx", "x"], ["dy", "x"], ["dx", "y"], ["dy", "y"]];
const PLANE_GENS: [(&str, u8, u8); 4] = [("dy", 1, 0), ("dx", 1, 0), ("x", 0, 0), ("y", 0, 0)];

fn unknown(i: usize, m: usize) -> Var {
    Var::unknown(4 * i + m + 1)
}

fn rank(name: &str) -> u8 {
    PLANE_GENS.iter().position(|g| g.0 == name).expect("plane generator") as u8
}

fn w2(pair: [&str; 2]) -> Word {
    Word::from_slice(&[rank(pair[0]), rank(pair[1])])
}

/// The plane with the quantum-plane rule, the four ansatz rules with
/// coefficients `coeff(i, m)`, and optional rules for products of
/// differentials. Without them `dx*dy` is left free.
fn ansatz_plane(coeff: &dyn Fn(usize, usize) -> Scalar, dd: Option<[Scalar; 3]>) -> Result<Presentation, CovarianceError> {
    let mut rules = vec![RewriteRule {
        lhs: w2(["y", "x"]),
        rhs: Element::term(Scalar::q().inv().expect("q is nonzero"), w2(["x", "y"])),
    }];
    for (i, lhs) in LHS.iter().enumerate() {
        let rhs = BASIS.iter().enumerate().map(|(m, b)| (w2(*b), coeff(i, m))).collect();
        rules.push(RewriteRule { lhs: w2(*lhs), rhs });
    }
    let mut free = vec![];
    match dd {
        Some([xx, xy, yy]) => {
            let dydx = w2(["dy", "dx"]);
            for (lhs, c) in [(["dx", "dx"], xx), (["dx", "dy"], xy), (["dy", "dy"], yy)] {
                rules.push(RewriteRule { lhs: w2(lhs), rhs: Element::term(c, dydx.clone()) });
            }
        }
        None => free.push((rank("dx") as usize, rank("dy") as usize)),
    }
    let gens = PLANE_GENS.iter().map(|(n, d, p)| (n.to_string(), *d, *p)).collect();
    Ok(Presentation::new("ansatz", gens, rules, vec![Var::Q, Var::P], vec![], free)?)
}

/// `gl-pq-2` with the ansatz plane, cross entries with symbolic `q'`, `k`.
pub fn ansatz_combined() -> Result<CalculusSpec, CovarianceError> {
    let plane = ansatz_plane(&|i, m| Scalar::var(unknown(i, m)), None)?;
    let group = preset(PresetId::GlPq2);
    let table = CrossTable::plane_general().extend(&plane, &group)?;
    Ok(CalculusSpec::new(build_combined(&plane, &group, &table)?, 2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Covariance,
    Differentiation,
}

#[derive(Clone, Debug)]
pub struct AnsatzEquation {
    pub stage: Stage,
    pub source: String,
    /// Coefficients of `C1 .. C16` followed by the constant term.
    pub row: Vec<Scalar>,
}

/// Splits a scalar that is affine in the unknowns into a row, clearing its
/// denominator.
fn linear_row(s: &Scalar) -> Result<Vec<Scalar>, CovarianceError> {
    let unknowns: Vec<Var> = (1..=16).map(Var::unknown).collect();
    if unknowns.iter().any(|&v| s.den().contains_var(v)) {
        return Err(CovarianceError::Ansatz(format!("unknown in a denominator: {s}")));
    }
    let mut parts = vec![Vec::new(); 17];
    for (m, c) in s.num().terms() {
        let hits: Vec<usize> = (0..16).filter(|&i| m.exp(unknowns[i]) > 0).collect();
        match hits.as_slice() {
            [] => parts[16].push((*m, c.clone())),
            [i] if m.exp(unknowns[*i]) == 1 => parts[*i].push((m.with_exp(unknowns[*i], 0), c.clone())),
            _ => return Err(CovarianceError::Ansatz(format!("nonlinear equation: {s}"))),
        }
    }
    Ok(parts.into_iter().map(|t| Scalar::from_poly(Poly::from_terms(t))).collect())
}

/// Scales a row so its first nonzero entry is 1; used to drop duplicates.
fn monic_row(row: &[Scalar]) -> Vec<Scalar> {
    match row.iter().find(|c| !c.is_zero()) {
        Some(lead) => {
            let inv = lead.inv().expect("nonzero");
            row.iter().map(|c| c * &inv).collect()
        }
        None => row.to_vec(),
    }
}

#[derive(Clone, Debug)]
pub struct AnsatzSystem {
    pub combined: CalculusSpec,
    pub equations: Vec<AnsatzEquation>,
}

impl AnsatzSystem {
    /// Equations from covariance of the four ansatz relations under `T` and
    /// its transpose and from `d(xy - q yx) = 0`.
    pub fn generate() -> Result<Self, CovarianceError> {
        let combined = ansatz_combined()?;
        let p = &combined.presentation;
        let at = |n: &str| p.rank_of(n).expect("combined generator");
        let word = |names: [&str; 2]| Word::from_slice(&[at(names[0]), at(names[1])]);
        let mut relations = Vec::new();
        for (i, lhs) in LHS.iter().enumerate() {
            let mut e = Element::word(word(*lhs));
            for (m, b) in BASIS.iter().enumerate() {
                e.add_term(word(*b), -Scalar::var(unknown(i, m)));
            }
            relations.push((lhs.join("*"), e));
        }

        let mut equations = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut push = |stage: Stage, source: String, s: &Scalar| -> Result<(), CovarianceError> {
            let row = linear_row(s)?;
            let key: Vec<String> = monic_row(&row).iter().map(|c| c.to_string()).collect();
            if seen.insert(key) {
                equations.push(AnsatzEquation { stage, source, row });
            }
            Ok(())
        };

        for variant in [Variant::T, Variant::Transpose] {
            let t = TransformationSpec::new(variant, &combined, ["x", "y"])?;
            let report = check_covariance(p, &t, &relations);
            for (label, residual) in &report.residuals {
                for (w, c) in residual {
                    push(Stage::Covariance, format!("{label} under {}, {}", variant.as_str(), p.word_name(w)), c)?;
                }
            }
        }

        let mut xy = Element::word(word(["x", "y"]));
        xy.add_term(word(["y", "x"]), -Scalar::q());
        let dxy = p.normalize(&combined.d(&xy));
        for (w, c) in &dxy {
            push(Stage::Differentiation, format!("d(x*y - q*y*x), {}", p.word_name(w)), c)?;
        }
        Ok(AnsatzSystem { combined, equations })
    }

    fn rows(&self, bindings: &[(Var, Scalar)]) -> Result<Vec<Vec<Scalar>>, CovarianceError> {
        self.equations
            .iter()
            .map(|e| e.row.iter().map(|c| c.substitute(bindings).map_err(Into::into)).collect())
            .collect()
    }

    /// Rank in all 16 unknowns after the given substitution.
    pub fn rank(&self, bindings: &[(Var, Scalar)]) -> Result<usize, CovarianceError> {
        Ok(eliminate(&self.rows(bindings)?, 16).rank)
    }

    /// Solves for every unknown except `free`, which is kept as a symbol.
    pub fn solve(&self, free: Var, bindings: &[(Var, Scalar)]) -> Result<AnsatzSolution, CovarianceError> {
        let fc = free.index() - Var::unknown(1).index();
        let sym = Scalar::var(free);
        let rows: Vec<Vec<Scalar>> = self
            .rows(bindings)?
            .into_iter()
            .map(|r| {
                let mut out: Vec<Scalar> = r.iter().enumerate().filter(|(j, _)| *j != fc && *j < 16).map(|(_, c)| c.clone()).collect();
                out.push(&r[16] + &(&r[fc] * &sym));
                out
            })
            .collect();
        let e = eliminate(&rows, 15);
        if let Some(bad) = e.residuals.iter().find(|r| r.is_constant()) {
            return Err(CovarianceError::Ansatz(format!("inconsistent system, residual {bad}")));
        }
        let column_var = |j: usize| Var::unknown(if j < fc { j + 1 } else { j + 2 });
        let mut coefficients = Vec::with_capacity(16);
        for i in 1..=16 {
            let v = Var::unknown(i);
            if v == free {
                coefficients.push((v, sym.clone()));
                continue;
            }
            let j = if i - 1 < fc { i - 1 } else { i - 2 };
            let value = match e.solved(j) {
                Some((c, rest)) => rest.iter().fold(c, |acc, (k, a)| &acc + &(a * &Scalar::var(column_var(*k)))),
                None => Scalar::var(v),
            };
            coefficients.push((v, value));
        }
        Ok(AnsatzSolution {
            coefficients,
            rank: e.rank,
            free: free_unknowns(free, &e.pivots, column_var),
            residual_constraints: e.residuals.iter().map(|r| r.num().clone()).collect(),
            bindings: bindings.to_vec(),
        })
    }
}

fn free_unknowns(free: Var, pivots: &[usize], column_var: impl Fn(usize) -> Var) -> Vec<Var> {
    let mut out = vec![free];
    out.extend((0..15).filter(|j| !pivots.contains(j)).map(column_var));
    out.sort();
    out
}

#[derive(Clone, Debug)]
pub struct AnsatzSolution {
    /// `C1 .. C16` in order; free unknowns map to themselves.
    pub coefficients: Vec<(Var, Scalar)>,
    pub rank: usize,
    pub free: Vec<Var>,
    /// Numerators that must vanish for the system to be consistent.
    pub residual_constraints: Vec<Poly>,
    pub bindings: Vec<(Var, Scalar)>,
}

impl AnsatzSolution {
    pub fn coefficient(&self, i: usize, m: usize) -> &Scalar {
        &self.coefficients[4 * i + m].1
    }

    pub fn to_json(&self) -> Value {
        let coefficients: serde_json::Map<String, Value> =
            self.coefficients.iter().map(|(v, c)| (v.name(), Value::String(c.to_string()))).collect();
        json!({
            "coefficients": coefficients,
            "rank": self.rank,
            "free": self.free.iter().map(|v| v.name()).collect::<Vec<_>>(),
            "residual_constraints": self.residual_constraints.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        })
    }

    /// The rules the solution stands for, e.g. `x*dx = ...`.
    pub fn describe(&self) -> Vec<String> {
        let plane = ansatz_plane(&|i, m| self.coefficient(i, m).clone(), None).expect("valid ansatz plane");
        plane.rules()[1..].iter().map(|r| format!("{} = {}", plane.word_name(&r.lhs), plane.show(&r.rhs))).collect()
    }
}

/// One root of the associativity condition on the free unknown.
#[derive(Clone, Debug)]
pub struct Root {
    pub value: Scalar,
    pub coefficients: Vec<Scalar>,
    /// `dx dx`, `dx dy`, `dy dy` as multiples of `dy dx`.
    pub dd: [Scalar; 3],
    pub matches_displayed: bool,
    pub confluent: bool,
    pub nilpotent: bool,
}

#[derive(Clone, Debug)]
pub struct Associativity {
    pub free: Var,
    /// Numerator of the `x*dx*dy` overlap condition, content in the other
    /// variables removed.
    pub equation: Poly,
    pub dd: [Scalar; 3],
    pub roots: Vec<Root>,
}

impl Associativity {
    pub fn unique(&self) -> bool {
        self.roots.len() == 1
    }

    pub fn to_json(&self) -> Value {
        json!({
            "free": self.free.name(),
            "equation": self.equation.to_string(),
            "dd": {"dx*dx": self.dd[0].to_string(), "dx*dy": self.dd[1].to_string(), "dy*dy": self.dd[2].to_string()},
            "unique": self.unique(),
            "roots": self.roots.iter().map(|r| json!({
                "value": r.value.to_string(),
                "matches_displayed": r.matches_displayed,
                "confluent": r.confluent,
                "nilpotent": r.nilpotent,
                "coefficients": r.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Products of differentials implied by differentiating the ansatz rules:
/// `dx dx`, `dx dy`, `dy dy` as multiples of `dy dx`.
fn dd_relations(sol: &AnsatzSolution) -> Result<[Scalar; 3], CovarianceError> {
    let plane = ansatz_plane(&|i, m| sol.coefficient(i, m).clone(), None)?;
    let calc = CalculusSpec::new(plane, 2);
    let p = &calc.presentation;
    let cols = [w2(["dx", "dx"]), w2(["dx", "dy"]), w2(["dy", "dy"]), w2(["dy", "dx"])];
    let mut rows = Vec::new();
    for r in &p.rules()[1..] {
        let rel = Element::word(r.lhs.clone()).sub(&r.rhs);
        let out = p.normalize(&calc.d(&rel));
        if out.words().any(|w| !cols.contains(w)) {
            return Err(CovarianceError::Ansatz(format!("unexpected term in d({})", p.word_name(&r.lhs))));
        }
        rows.push(cols.iter().map(|w| out.coeff(w)).collect::<Vec<_>>());
    }
    let e = eliminate(&rows, 3);
    if e.rank < 3 || !e.residuals.is_empty() {
        return Err(CovarianceError::Ansatz("differentiated rules do not fix the products of differentials".into()));
    }
    let get = |j: usize| e.solved(j).expect("pivot").0;
    Ok([get(0), get(1), get(2)])
}

/// Roots of a polynomial of degree 1 or 2 in `t` with exact square roots.
fn roots_in(f: &Poly, t: Var) -> Vec<Scalar> {
    let c = f.coeffs_in(t);
    let s = |p: &Poly| Scalar::from_poly(p.clone());
    match c.len() {
        2 => vec![-&(&s(&c[0]) / &s(&c[1]))],
        3 => {
            let disc = c[1].mul(&c[1]).sub(&c[2].mul(&c[0]).scale(&crate::scalar::CycloRational::from_int(4)));
            let Some(root) = disc.sqrt() else {
                return vec![];
            };
            let two_a = s(&c[2]) * Scalar::from_int(2);
            let mut out = vec![&(&-s(&c[1]) + &s(&root)) / &two_a, &(&-s(&c[1]) - &s(&root)) / &two_a];
            out.dedup();
            out
        }
        _ => vec![],
    }
}

/// Imposes `(x dx) dy = x (dx dy)` on a one-parameter solution.
pub fn associativity(sol: &AnsatzSolution) -> Result<Associativity, CovarianceError> {
    let [t] = sol.free[..] else {
        return Err(CovarianceError::Ansatz(format!("expected one free unknown, found {}", sol.free.len())));
    };
    let dd = dd_relations(sol)?;
    let plane = ansatz_plane(&|i, m| sol.coefficient(i, m).clone(), Some(dd.clone()))?;
    let w = Word::from_slice(&[rank("x"), rank("dx"), rank("dy")]);
    let a = plane.normalize(&plane.rewrite_at(&w, 0, 2));
    let b = plane.normalize(&plane.rewrite_at(&w, 1, 2));
    let diff = a.sub(&b);
    let mut f = Poly::zero();
    for c in diff.coeffs() {
        f = gcd(&f, c.num());
    }
    if !f.is_zero() {
        let content = f.coeffs_in(t).iter().fold(Poly::zero(), |g, c| gcd(&g, c));
        f = f.div_exact(&content).expect("content divides");
    }

    let displayed = preset(PresetId::PlanePqD2);
    let target: Vec<Scalar> = LHS
        .iter()
        .flat_map(|lhs| {
            let r = displayed.rule_for(&w2(*lhs)).expect("displayed rule");
            BASIS.iter().map(move |b| r.rhs.coeff(&w2(*b))).collect::<Vec<_>>()
        })
        .collect();
    let mut roots = Vec::new();
    for value in roots_in(&f, t) {
        let bind = [(t, value.clone())];
        let coefficients: Vec<Scalar> =
            sol.coefficients.iter().map(|(_, c)| c.substitute(&bind)).collect::<Result<_, _>>()?;
        let dd_at: [Scalar; 3] = [0, 1, 2].map(|i| dd[i].substitute(&bind).expect("no pole in dd"));
        let at = ansatz_plane(&|i, m| coefficients[4 * i + m].clone(), Some(dd_at.clone()))?;
        let confluent = at.critical_pairs().is_empty();
        let calc = CalculusSpec::new(at, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let nilpotent = check_nilpotency(&calc, 3, 0, &mut rng).passed;
        roots.push(Root {
            matches_displayed: coefficients == target && dd_at[1] == target_dd(&displayed),
            value,
            coefficients,
            dd: dd_at,
            confluent,
            nilpotent,
        });
    }
    Ok(Associativity { free: t, equation: f, dd, roots })
}

fn target_dd(displayed: &Presentation) -> Scalar {
    displayed.rule_for(&w2(["dx", "dy"])).expect("dx*dy rule").rhs.coeff(&w2(["dy", "dx"]))
}

/// Binding `q' = q`, `k = q/p`.
pub fn constraint_bindings() -> Vec<(Var, Scalar)> {
    vec![(Var::QPRIME, Scalar::q()), (Var::K, &Scalar::q() / &Scalar::p())]
}

/// The full derivation: the generic solve with `C1` free, the solve after
/// the parameter constraint, and the associativity condition.
pub fn solve_ansatz() -> Result<(AnsatzSystem, AnsatzSolution, AnsatzSolution, Associativity), CovarianceError> {
    let system = AnsatzSystem::generate()?;
    let free = Var::unknown(1);
    let generic = system.solve(free, &[])?;
    let constrained = system.solve(free, &constraint_bindings())?;
    let assoc = associativity(&constrained)?;
    Ok((system, generic, constrained, assoc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equations_are_linear_and_rank_is_fifteen_with_one_free() {
        let system = AnsatzSystem::generate().unwrap();
        let sol = system.solve(Var::unknown(1), &[]).unwrap();
        assert_eq!(sol.rank, 15);
        assert_eq!(sol.free, vec![Var::unknown(1)]);
        let constraint = constraint_bindings();
        for r in &sol.residual_constraints {
            assert!(Scalar::from_poly(r.clone()).substitute(&constraint).unwrap().is_zero());
        }
    }

    #[test]
    fn linear_row_rejects_products_of_unknowns() {
        let s = &Scalar::var(Var::unknown(1)) * &Scalar::var(Var::unknown(2));
        assert!(linear_row(&s).is_err());
    }

    #[test]
    fn quadratic_roots() {
        // (t - q)(t + q) = t^2 - q^2
        let t = Var::unknown(1);
        let f = Scalar::var(t).num().mul(Scalar::var(t).num()).sub(&Scalar::q().num().mul(Scalar::q().num()));
        let mut r = roots_in(&f, t);
        r.sort_by_key(|s| s.to_string());
        assert_eq!(r, vec![-Scalar::q(), Scalar::q()]);
    }
}
