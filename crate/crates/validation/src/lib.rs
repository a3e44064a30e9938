//! Random inputs for the acceptance checks: pairs of scalar expressions that
//! may or may not be equal, and elements of a presentation.
//!
//! The scalar oracle evaluates expression trees directly at random points,
//! so it never goes through the canonical forms it is meant to audit.

use num_bigint::BigInt;
use rand::Rng;

use qdc_core::expr::Expr;
use qdc_core::ncalgebra::{Element, Presentation, Word};
use qdc_core::scalar::{random_point, Scalar};

fn num(n: i64) -> Expr {
    Expr::Num(BigInt::from(n))
}

fn sym(s: &str) -> Expr {
    Expr::Sym(s.to_string())
}

fn add(a: Expr, b: Expr) -> Expr {
    Expr::Sum(vec![a, b])
}

fn mul(a: Expr, b: Expr) -> Expr {
    Expr::Product(vec![a, b])
}

fn div(a: Expr, b: Expr) -> Expr {
    Expr::Quotient(Box::new(a), Box::new(b))
}

fn pow(a: Expr, e: i32) -> Expr {
    Expr::Power(Box::new(a), e)
}

/// A polynomial in `q`, `p` with positive coefficients: never identically
/// zero, so it is safe as a denominator.
pub fn positive_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.35) {
        return match rng.gen_range(0..3) {
            0 => num(rng.gen_range(1..=5)),
            1 => sym("q"),
            _ => sym("p"),
        };
    }
    match rng.gen_range(0..3) {
        0 => add(positive_expr(rng, depth - 1), positive_expr(rng, depth - 1)),
        1 => mul(positive_expr(rng, depth - 1), positive_expr(rng, depth - 1)),
        _ => pow(positive_expr(rng, depth - 1), rng.gen_range(1..=3)),
    }
}

/// A random scalar expression over `q`, `p`, `j` and small integers.
pub fn scalar_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..4) {
            0 => num(rng.gen_range(-4..=5)),
            1 => sym("q"),
            2 => sym("p"),
            _ => sym("j"),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => add(scalar_expr(rng, d), scalar_expr(rng, d)),
        1 => Expr::Neg(Box::new(scalar_expr(rng, d))),
        2 | 3 => mul(scalar_expr(rng, d), scalar_expr(rng, d)),
        4 => div(scalar_expr(rng, d), positive_expr(rng, 2)),
        _ => pow(positive_expr(rng, 1), rng.gen_range(-2..=2)),
    }
}

/// Two expressions and whether they were built to be equal.
pub fn identity_pair<R: Rng>(rng: &mut R) -> (Expr, Expr, bool) {
    let a = scalar_expr(rng, 3);
    let b = scalar_expr(rng, 3);
    let x = positive_expr(rng, 2);
    match rng.gen_range(0..10) {
        0 => (a.clone(), Expr::Sum(vec![a, x.clone(), Expr::Neg(Box::new(x))]), true),
        1 => (a.clone(), div(mul(a, x.clone()), x), true),
        2 => {
            let lhs = pow(add(a.clone(), b.clone()), 2);
            let rhs = Expr::Sum(vec![pow(a.clone(), 2), Expr::Product(vec![num(2), a, b.clone()]), pow(b, 2)]);
            (lhs, rhs, true)
        }
        3 => (mul(a.clone(), b.clone()), mul(b, a), true),
        4 => (add(div(a.clone(), x.clone()), div(b.clone(), x.clone())), div(add(a, b), x), true),
        5 => (mul(a.clone(), Expr::Sum(vec![pow(sym("j"), 2), sym("j"), num(1)])), num(0), true),
        6 => (a.clone(), add(a, num(1)), false),
        7 => (pow(add(a.clone(), b.clone()), 2), add(pow(a, 2), pow(b, 2)), false),
        8 => (mul(a.clone(), x.clone()), add(a, x), false),
        _ => (mul(a, pow(sym("j"), 3)), b, false),
    }
}

/// Evaluates both trees at `trials` random points, redrawing at poles of
/// either one, and reports whether they agreed everywhere.
pub fn oracle_equal<R: Rng>(a: &Expr, b: &Expr, trials: usize, rng: &mut R) -> bool {
    let mut agreed = 0;
    let mut draws = 0;
    while agreed < trials {
        draws += 1;
        assert!(draws < 100 * trials, "oracle keeps hitting poles");
        let point = random_point(rng);
        let (Some(x), Some(y)) = (a.eval_at(&point), b.eval_at(&point)) else {
            continue;
        };
        if x != y {
            return false;
        }
        agreed += 1;
    }
    true
}

fn coefficient<R: Rng>(rng: &mut R) -> Scalar {
    let q = Scalar::q();
    let p = Scalar::p();
    match rng.gen_range(0..6) {
        0 => Scalar::from_int(rng.gen_range(-3..=3)),
        1 => q,
        2 => p.inv().expect("p is nonzero"),
        3 => Scalar::j(),
        4 => &q / &(&p + &Scalar::one()),
        _ => Scalar::from_frac(rng.gen_range(1..=5), rng.gen_range(1..=5)),
    }
}

/// Up to three terms, words of length 1 to 5 over all generators.
pub fn random_element<R: Rng>(rng: &mut R, p: &Presentation) -> Element {
    let n = p.generators().len();
    let mut e = Element::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(1..=5);
        let w: Word = (0..len).map(|_| rng.gen_range(0..n) as u8).collect();
        e.add_term(w, coefficient(rng));
    }
    e
}
