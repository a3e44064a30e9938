use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use super::cyclo::CycloRational;
use super::gcd::gcd;
use super::poly::{Monomial, Poly, Var, NVARS};
use super::ScalarError;

/// An element of Q(j)(q, p, q', k, C1..C16) kept as a reduced fraction.
///
/// Canonical form: `num` and `den` are coprime and `den` has leading
/// coefficient 1 in the lexicographic monomial order. Zero is `0/1`. Since the
/// form is unique, derived equality and hashing are field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Scalar { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_cyclo(CycloRational::from_int(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_cyclo(CycloRational::from_frac(n, d))
    }

    pub fn from_cyclo(c: CycloRational) -> Self {
        Scalar { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar { num: p, den: Poly::one() }
    }

    pub fn j() -> Self {
        Self::from_cyclo(CycloRational::j())
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(Poly::var(v))
    }

    pub fn q() -> Self {
        Self::var(Var::Q)
    }

    pub fn p() -> Self {
        Self::var(Var::P)
    }

    pub fn qprime() -> Self {
        Self::var(Var::QPRIME)
    }

    pub fn k() -> Self {
        Self::var(Var::K)
    }

    /// Builds `num / den` in canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Self::normalize_lead(num, den)
    }

    fn normalize_lead(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.inv().expect("nonzero denominator");
            Scalar { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    /// Re-canonicalizes; a no-op on values built through this API.
    pub fn canonical(&self) -> Self {
        Self::reduce(self.num.clone(), self.den.clone())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as an element of Q(j) when it involves no variable.
    pub fn as_constant(&self) -> Option<CycloRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Bit set of variables occurring in the value.
    pub fn support(&self) -> u32 {
        self.num.support() | self.den.support()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.support() & (1 << v.index()) != 0
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalize_lead(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i32) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.inv().ok_or(ScalarError::DivisionByZero)? } else { self.clone() };
        let n = e.unsigned_abs();
        // Powers of a reduced fraction stay reduced.
        Ok(Self::normalize_lead(base.num.pow(n), base.den.pow(n)))
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Self, ScalarError> {
        Ok(self * &o.inv().ok_or(ScalarError::DivisionByZero)?)
    }

    /// Simultaneous substitution of variables by scalars.
    pub fn substitute(&self, bindings: &[(Var, Scalar)]) -> Result<Self, ScalarError> {
        if bindings.iter().all(|(v, _)| !self.contains_var(*v)) {
            return Ok(self.clone());
        }
        let num = eval_poly(&self.num, bindings);
        let den = eval_poly(&self.den, bindings);
        if den.is_zero() {
            return Err(ScalarError::Pole(self.to_string()));
        }
        Ok(&num * &den.inv().expect("nonzero"))
    }

    /// Value at a point of Q(j)^NVARS, or `None` at a pole.
    pub fn eval(&self, point: &[CycloRational; NVARS]) -> Option<CycloRational> {
        let d = self.den.eval(point);
        let dinv = d.inv()?;
        Some(&self.num.eval(point) * &dinv)
    }

    /// Random-substitution zero test: every variable gets an independent
    /// random rational n/d with n, d in 1..=97, redrawn at poles.
    pub fn is_zero_randomized<R: Rng>(&self, trials: usize, rng: &mut R) -> bool {
        for _ in 0..trials.max(1) {
            loop {
                let point = random_point(rng);
                if let Some(v) = self.eval(&point) {
                    if !v.is_zero() {
                        return false;
                    }
                    break;
                }
            }
        }
        true
    }

    /// True when the printed form starts with a minus sign.
    pub fn prints_negative(&self) -> bool {
        match self.num.leading() {
            Some((_, c)) if self.den.is_one() || self.num.len() == 1 => c.prints_negative(),
            _ => false,
        }
    }

    /// Whether the printed form is a bare integer (possibly negative).
    pub fn is_integer(&self) -> bool {
        match self.as_constant() {
            Some(c) => c.is_rational() && c.re().is_integer(),
            None => false,
        }
    }
}

/// A random point with every coordinate a small positive rational.
pub fn random_point<R: Rng>(rng: &mut R) -> [CycloRational; NVARS] {
    std::array::from_fn(|_| {
        let n: i64 = rng.gen_range(1..=97);
        let d: i64 = rng.gen_range(1..=97);
        CycloRational::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    })
}

fn eval_poly(p: &Poly, bindings: &[(Var, Scalar)]) -> Scalar {
    let mut acc = Scalar::zero();
    let lookup = |v: Var| bindings.iter().find(|(b, _)| *b == v).map(|(_, s)| s);
    for (m, c) in p.terms() {
        let mut rest = Monomial::one();
        let mut t = Scalar::from_cyclo(c.clone());
        for v in Var::all() {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            match lookup(v) {
                Some(s) => t = &t * &s.pow(e as i32).expect("positive power"),
                None => rest = rest.with_exp(v, e),
            }
        }
        if !rest.is_one() {
            t = &t * &Scalar::from_poly(Poly::term(rest, CycloRational::one()));
        }
        acc = &acc + &t;
    }
    acc
}

fn needs_parens(p: &Poly) -> bool {
    p.len() > 1
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if needs_parens(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let den_simple = self.den.len() == 1 && {
            let (m, c) = &self.den.terms()[0];
            c.is_one() && m.support().count_ones() == 1
        };
        if den_simple {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let num = self.num.add(&o.num);
            if self.den.is_one() {
                return Scalar { num, den: Poly::one() };
            }
            return Scalar::reduce(num, self.den.clone());
        }
        // a/b + c/d with g = gcd(b, d): only g can share factors with the
        // new numerator.
        let g = gcd(&self.den, &o.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = o.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d1).add(&o.num.mul(&b1));
        if num.is_zero() {
            return Scalar::zero();
        }
        let den = b1.mul(&d1);
        if g.is_one() {
            return Scalar::normalize_lead(num, den);
        }
        let h = gcd(&num, &g);
        if h.is_one() {
            Scalar::normalize_lead(num, den.mul(&g))
        } else {
            let g1 = g.div_exact(&h).expect("gcd divides");
            Scalar::normalize_lead(num.div_exact(&h).expect("gcd divides"), den.mul(&g1))
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = self.as_constant() {
            return Scalar { num: o.num.scale(&c), den: o.den.clone() };
        }
        if let Some(c) = o.as_constant() {
            return Scalar { num: self.num.scale(&c), den: self.den.clone() };
        }
        // (a/b)(c/d) = (a/g1)(c/g2) / ((b/g2)(d/g1))
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let quo = |x: &Poly, g: &Poly| if g.is_one() { x.clone() } else { x.div_exact(g).expect("gcd divides") };
        let num = quo(&self.num, &g1).mul(&quo(&o.num, &g2));
        let den = quo(&self.den, &g2).mul(&quo(&o.den, &g1));
        Scalar::normalize_lead(num, den)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero; see [`Scalar::checked_div`].
    fn div(self, o: &Scalar) -> Scalar {
        self.checked_div(o).expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                $tr::$m(&self, &o)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl From<CycloRational> for Scalar {
    fn from(c: CycloRational) -> Self {
        Scalar::from_cyclo(c)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Var> for Scalar {
    fn from(v: Var) -> Self {
        Scalar::var(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> Scalar {
        Scalar::q()
    }
    fn p() -> Scalar {
        Scalar::p()
    }
    fn one() -> Scalar {
        Scalar::one()
    }

    #[test]
    fn one_plus_j_plus_j_squared_vanishes() {
        let j = Scalar::j();
        let s = &(&(&one() + &j) + &(&j * &j)) * &q();
        assert!(s.is_zero());
    }

    #[test]
    fn polynomial_cancellation() {
        let num = &(&q() * &q()) - &(&p() * &p());
        let den = &q() - &p();
        assert_eq!(&num / &den, &q() + &p());
    }

    #[test]
    fn commuting_variables_cancel() {
        let s = &(&(&p() * &q()) - &(&q() * &p())) / &(&one() + &p());
        assert!(s.is_zero());
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(Scalar::new(Poly::one(), Poly::zero()), Err(ScalarError::ZeroDenominator));
    }

    #[test]
    fn substitution_examples() {
        let s = &one() / &(&p() * &q());
        let r = s.substitute(&[(Var::P, q())]).unwrap();
        assert_eq!(r, q().pow(-2).unwrap());

        let j = Scalar::j();
        let j2 = &j * &j;
        let qp = &q() * &p();
        let s = &(&(&j2 * &qp) - &one()) / &(&one() + &qp);
        let r = s.substitute(&[(Var::P, &j2 / &q())]).unwrap();
        assert_eq!(r, &Scalar::from_int(-2) - &j);

        let k = Scalar::k();
        let step = k.substitute(&[(Var::K, &Scalar::qprime() / &p())]).unwrap();
        assert_eq!(step.substitute(&[(Var::QPRIME, q())]).unwrap(), &q() / &p());
    }

    #[test]
    fn substitution_pole_is_an_error() {
        let s = &one() / &(&q() - &p());
        assert!(matches!(s.substitute(&[(Var::P, q())]), Err(ScalarError::Pole(_))));
    }

    #[test]
    fn randomized_zero_test() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(Scalar::zero().is_zero_randomized(5, &mut rng));
        assert!(!(&q() - &p()).is_zero_randomized(5, &mut rng));
    }

    #[test]
    fn display() {
        assert_eq!((&one() / &q()).to_string(), "1/q");
        let s = &(&one() / &(&p() * &q())) - &one();
        assert_eq!(s.to_string(), "(-q*p + 1)/(q*p)");
        assert_eq!(Scalar::from_frac(-3, 2).to_string(), "-3/2");
    }
}
