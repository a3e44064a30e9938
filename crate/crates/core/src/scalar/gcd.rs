//! Multivariate polynomial gcd over Q(j).
//!
//! The exact algorithm is a recursive primitive pseudo-remainder sequence.
//! Most gcds met while canonicalizing are trivial, so a modular test runs
//! first: reduce modulo a prime `P = 1 mod 3` (where j maps to a cube root of
//! unity), evaluate all but one variable at random points and check that the
//! univariate images are coprime with their leading coefficients intact. A
//! true common factor survives every such image, so a positive answer proves
//! coprimality; a negative one just falls through to the exact path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cyclo::CycloRational;
use super::poly::{Monomial, Poly, Var, NVARS};

/// 2^61 - 1, which is 1 mod 3.
const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64) -> u64 {
    powmod(a, PRIME - 2)
}

/// A primitive cube root of unity modulo `PRIME`.
fn omega() -> u64 {
    let mut g = 2;
    loop {
        let w = powmod(g, (PRIME - 1) / 3);
        if w != 1 {
            return w;
        }
        g += 1;
    }
}

fn bigint_mod(n: &BigInt) -> u64 {
    let m = BigInt::from(PRIME);
    let mut r = n % &m;
    if r.is_negative() {
        r += &m;
    }
    r.to_u64().expect("residue fits in u64")
}

fn rational_mod(r: &BigRational) -> Option<u64> {
    let d = bigint_mod(r.denom());
    if d == 0 {
        return None;
    }
    Some(mulmod(bigint_mod(r.numer()), invmod(d)))
}

fn cyclo_mod(c: &CycloRational, w: u64) -> Option<u64> {
    Some(addmod(rational_mod(c.re())?, mulmod(rational_mod(c.jc())?, w)))
}

/// Image of `f` in F_P[v] with every other variable set to `point`.
fn image(f: &Poly, v: Var, point: &[u64; NVARS], w: u64) -> Option<Vec<u64>> {
    let mut out = vec![0u64; f.degree_in(v) as usize + 1];
    for (m, c) in f.terms() {
        let mut t = cyclo_mod(c, w)?;
        for u in Var::all() {
            let e = m.exp(u);
            if u != v && e > 0 {
                t = mulmod(t, powmod(point[u.index()], e as u64));
            }
        }
        let slot = &mut out[m.exp(v) as usize];
        *slot = addmod(*slot, t);
    }
    Some(out)
}

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn uni_rem(mut a: Vec<u64>, b: &[u64]) -> Vec<u64> {
    let db = b.len() - 1;
    let inv = invmod(b[db]);
    while a.len() > db {
        let lead = *a.last().unwrap();
        if lead != 0 {
            let s = mulmod(lead, inv);
            let off = a.len() - 1 - db;
            for (i, &bc) in b.iter().enumerate() {
                a[off + i] = submod(a[off + i], mulmod(s, bc));
            }
        }
        a.pop();
    }
    trim(a)
}

/// Degree of the gcd of two univariate polynomials over F_P.
fn uni_gcd_degree(a: Vec<u64>, b: Vec<u64>) -> usize {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = uni_rem(a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

/// True when `a` and `b` are certainly coprime. `false` means "unknown".
fn modular_coprime(a: &Poly, b: &Poly) -> bool {
    let shared = a.support() & b.support();
    if shared == 0 {
        return true;
    }
    let w = omega();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_9cd);
    for v in Var::all().filter(|v| shared & (1 << v.index()) != 0) {
        let mut proved = false;
        for _ in 0..3 {
            let mut point = [0u64; NVARS];
            for slot in point.iter_mut() {
                *slot = rng.gen_range(2..PRIME);
            }
            let (Some(ia), Some(ib)) = (image(a, v, &point, w), image(b, v, &point, w)) else {
                return false;
            };
            let intact = ia.last() != Some(&0) && ib.last() != Some(&0);
            if intact && uni_gcd_degree(ia, ib) == 0 {
                proved = true;
                break;
            }
        }
        if !proved {
            return false;
        }
    }
    true
}

/// Componentwise minimum exponent over all terms.
fn monomial_content(f: &Poly) -> Monomial {
    let mut it = f.terms().iter();
    let Some((first, _)) = it.next() else {
        return Monomial::one();
    };
    it.fold(*first, |acc, (m, _)| acc.gcd(m))
}

/// Normalizes a gcd candidate to leading coefficient 1.
fn unit_normal(f: Poly) -> Poly {
    f.monic()
}

/// Greatest common divisor with leading coefficient 1 (zero only when both
/// inputs are zero).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return unit_normal(b.clone());
    }
    if b.is_zero() {
        return unit_normal(a.clone());
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return unit_normal(a.clone());
    }
    let ma = monomial_content(a);
    let mb = monomial_content(b);
    let mono = Poly::term(ma.gcd(&mb), CycloRational::one());
    if a.len() == 1 || b.len() == 1 {
        return mono;
    }
    let a1 = if ma.is_one() { a.clone() } else { a.div_exact(&Poly::term(ma, CycloRational::one())).unwrap() };
    let b1 = if mb.is_one() { b.clone() } else { b.div_exact(&Poly::term(mb, CycloRational::one())).unwrap() };
    if modular_coprime(&a1, &b1) {
        return mono;
    }
    let g = gcd_exact(&a1, &b1);
    unit_normal(mono.mul(&g))
}

/// gcd of the coefficients of `f` viewed as a polynomial in `v`.
fn content_in(f: &Poly, v: Var) -> Poly {
    let coeffs = f.coeffs_in(v);
    let mut g = Poly::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn pick_main_var(a: &Poly, b: &Poly) -> Option<Var> {
    let shared = a.support() & b.support();
    Var::all()
        .filter(|v| shared & (1 << v.index()) != 0)
        .min_by_key(|&v| (a.degree_in(v).min(b.degree_in(v)), v))
}

fn lead_in(f: &Poly, v: Var) -> Poly {
    let mut cs = f.coeffs_in(v);
    cs.pop().unwrap_or_default()
}

fn gcd_exact(a: &Poly, b: &Poly) -> Poly {
    let Some(v) = pick_main_var(a, b) else {
        // No shared variable: any common factor is a constant.
        return Poly::one();
    };
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let gc = gcd(&ca, &cb);
    let mut r0 = a.div_exact(&ca).expect("content divides");
    let mut r1 = b.div_exact(&cb).expect("content divides");
    if r0.degree_in(v) < r1.degree_in(v) {
        std::mem::swap(&mut r0, &mut r1);
    }
    // Primitive pseudo-remainder sequence in v.
    while !r1.is_zero() && r1.degree_in(v) > 0 {
        let r = pseudo_rem(&r0, &r1, v);
        r0 = r1;
        r1 = if r.is_zero() { r } else { r.div_exact(&content_in(&r, v)).expect("content divides") };
    }
    let gp = if r1.is_zero() { r0 } else { Poly::one() };
    unit_normal(gc.mul(&gp))
}

fn pseudo_rem(a: &Poly, b: &Poly, v: Var) -> Poly {
    let db = b.degree_in(v);
    let lb = lead_in(b, v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = lead_in(&r, v);
        let shift = Monomial::var(v, dr - db);
        r = r.mul(&lb).sub(&b.mul(&lr).mul_monomial(&shift));
    }
    r
}

/// Least common multiple with leading coefficient 1.
pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    unit_normal(a.div_exact(&g).expect("gcd divides").mul(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: Var) -> Poly {
        Poly::var(x)
    }

    fn c(n: i64) -> Poly {
        Poly::from(n)
    }

    #[test]
    fn coprime_inputs() {
        let a = v(Var::Q).add(&v(Var::P));
        let b = v(Var::Q).sub(&v(Var::P));
        assert!(gcd(&a, &b).is_one());
        assert!(modular_coprime(&a, &b));
    }

    #[test]
    fn shared_factor_is_recovered() {
        let g = v(Var::Q).mul(&v(Var::P)).add(&c(1));
        let a = g.mul(&v(Var::Q).sub(&c(2)));
        let b = g.mul(&v(Var::P).add(&v(Var::K)));
        assert_eq!(gcd(&a, &b), g);
        assert!(!modular_coprime(&a, &b));
    }

    #[test]
    fn factor_with_j_coefficients() {
        let jq = Poly::var(Var::Q).scale(&CycloRational::j());
        let g = jq.add(&v(Var::P)).add(&c(1));
        let a = g.mul(&g).mul(&v(Var::QPRIME));
        let b = g.mul(&v(Var::Q).add(&c(3)));
        assert_eq!(gcd(&a, &b), g.monic());
    }

    #[test]
    fn monomial_gcds() {
        let a = v(Var::Q).pow(3).mul(&v(Var::P));
        let b = v(Var::Q).pow(2).mul(&v(Var::P).add(&c(1)));
        assert_eq!(gcd(&a, &b), v(Var::Q).pow(2));
    }

    #[test]
    fn lcm_of_overlapping_factors() {
        let a = v(Var::Q).mul(&v(Var::P).add(&c(1)));
        let b = v(Var::P).add(&c(1)).mul(&v(Var::K));
        assert_eq!(lcm(&a, &b), v(Var::Q).mul(&v(Var::P).add(&c(1))).mul(&v(Var::K)));
    }
}
