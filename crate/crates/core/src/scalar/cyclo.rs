//! Exact arithmetic in the cyclotomic field Q(j), j a primitive cube root of unity.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An element `re + jc * j` of Q(j) = Q[j]/(j^2 + j + 1).
///
/// The pair form is canonical: every product is reduced with `j^2 = -1 - j`,
/// so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CycloRational {
    re: BigRational,
    jc: BigRational,
}

impl CycloRational {
    pub fn new(re: BigRational, jc: BigRational) -> Self {
        CycloRational { re, jc }
    }

    pub fn from_rational(re: BigRational) -> Self {
        CycloRational { re, jc: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The cube root of unity itself.
    pub fn j() -> Self {
        CycloRational { re: BigRational::zero(), jc: BigRational::one() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn jc(&self) -> &BigRational {
        &self.jc
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.jc.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.jc.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.jc.is_zero()
    }

    /// Field norm `N(a + bj) = a^2 - ab + b^2`, positive for nonzero elements.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re - &self.re * &self.jc + &self.jc * &self.jc
    }

    /// Galois conjugate `a + b j^2 = (a - b) - b j`.
    pub fn conj(&self) -> Self {
        CycloRational { re: &self.re - &self.jc, jc: -&self.jc }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(CycloRational { re: c.re / &n, jc: c.jc / &n })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloRational { re: &self.re * r, jc: &self.jc * r }
    }

    /// Exact square root when the element is the square of a rational.
    pub fn sqrt_rational(&self) -> Option<Self> {
        if !self.is_rational() || self.re.is_negative() {
            return None;
        }
        let n = self.re.numer().sqrt();
        let d = self.re.denom().sqrt();
        if &n * &n == *self.re.numer() && &d * &d == *self.re.denom() {
            Some(Self::from_rational(BigRational::new(n, d)))
        } else {
            None
        }
    }

    /// True when the textual form needs parentheses inside a product.
    pub(crate) fn is_compound(&self) -> bool {
        !self.re.is_zero() && !self.jc.is_zero()
    }

    /// True when the element prints with a leading minus sign.
    pub(crate) fn prints_negative(&self) -> bool {
        if self.jc.is_zero() {
            self.re.is_negative()
        } else if self.re.is_zero() {
            self.jc.is_negative()
        } else {
            false
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_jcoeff(r: &BigRational) -> String {
    if r.is_one() {
        "j".to_string()
    } else if (-r).is_one() {
        "-j".to_string()
    } else {
        format!("{}*j", fmt_rational(r))
    }
}

impl fmt::Display for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.jc.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}", fmt_jcoeff(&self.jc));
        }
        let jpart = fmt_jcoeff(&self.jc);
        if jpart.starts_with('-') {
            write!(f, "({}{})", fmt_rational(&self.re), jpart)
        } else {
            write!(f, "({}+{})", fmt_rational(&self.re), jpart)
        }
    }
}

impl fmt::Debug for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a CycloRational> for &'a CycloRational {
    type Output = CycloRational;
    fn add(self, o: &CycloRational) -> CycloRational {
        CycloRational { re: &self.re + &o.re, jc: &self.jc + &o.jc }
    }
}

impl<'a> Sub<&'a CycloRational> for &'a CycloRational {
    type Output = CycloRational;
    fn sub(self, o: &CycloRational) -> CycloRational {
        CycloRational { re: &self.re - &o.re, jc: &self.jc - &o.jc }
    }
}

impl<'a> Mul<&'a CycloRational> for &'a CycloRational {
    type Output = CycloRational;
    fn mul(self, o: &CycloRational) -> CycloRational {
        // (a + bj)(c + dj) = ac + (ad + bc) j + bd j^2,  j^2 = -1 - j
        let ac = &self.re * &o.re;
        let bd = &self.jc * &o.jc;
        let ad_bc = &self.re * &o.jc + &self.jc * &o.re;
        CycloRational { re: &ac - &bd, jc: ad_bc - bd }
    }
}

impl Neg for &CycloRational {
    type Output = CycloRational;
    fn neg(self) -> CycloRational {
        CycloRational { re: -&self.re, jc: -&self.jc }
    }
}

impl Neg for CycloRational {
    type Output = CycloRational;
    fn neg(self) -> CycloRational {
        CycloRational { re: -self.re, jc: -self.jc }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_identities() {
        let j = CycloRational::j();
        let j2 = &j * &j;
        assert_eq!(j.pow(3), CycloRational::one());
        assert!((&(&CycloRational::one() + &j) + &j2).is_zero());
        assert_eq!(j2, CycloRational::new(BigRational::from_integer((-1).into()), BigRational::from_integer((-1).into())));
    }

    #[test]
    fn inverse_round_trip() {
        let a = CycloRational::new(BigRational::new(3.into(), 7.into()), BigRational::new((-5).into(), 2.into()));
        let ai = a.inv().unwrap();
        assert!((&a * &ai).is_one());
        assert!(CycloRational::zero().inv().is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(CycloRational::j().to_string(), "j");
        let m = &CycloRational::from_int(-2) - &CycloRational::j();
        assert_eq!(m.to_string(), "(-2-j)");
        assert_eq!(CycloRational::from_frac(3, 2).to_string(), "3/2");
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(CycloRational::from_frac(9, 4).sqrt_rational(), Some(CycloRational::from_frac(3, 2)));
        assert_eq!(CycloRational::from_int(2).sqrt_rational(), None);
        assert_eq!(CycloRational::j().sqrt_rational(), None);
    }
}
