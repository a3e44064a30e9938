//! Sparse multivariate polynomials over Q(j) in a fixed, ordered variable set.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::cyclo::CycloRational;

/// Number of scalar variables: q, p, q', k and the sixteen ansatz unknowns.
pub const NVARS: usize = 20;

/// Index of a scalar variable. Lower indices are more significant in the
/// lexicographic monomial order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(pub u8);

impl Var {
    pub const Q: Var = Var(0);
    pub const P: Var = Var(1);
    pub const QPRIME: Var = Var(2);
    pub const K: Var = Var(3);

    /// The `i`-th ansatz unknown, 1-based (`C1` .. `C16`).
    pub fn unknown(i: usize) -> Var {
        assert!((1..=16).contains(&i), "ansatz unknown index out of range: {i}");
        Var((3 + i) as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn name(self) -> String {
        match self.0 {
            0 => "q".into(),
            1 => "p".into(),
            2 => "q'".into(),
            3 => "k".into(),
            n => format!("C{}", n - 3),
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        match s {
            "q" => Some(Var::Q),
            "p" => Some(Var::P),
            "q'" => Some(Var::QPRIME),
            "k" => Some(Var::K),
            _ => {
                let n: usize = s.strip_prefix('C')?.parse().ok()?;
                if (1..=16).contains(&n) && !s[1..].starts_with('0') {
                    Some(Var::unknown(n))
                } else {
                    None
                }
            }
        }
    }

    pub fn all() -> impl Iterator<Item = Var> {
        (0..NVARS as u8).map(Var)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Exponent vector. Compared lexicographically with variable 0 first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u8; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var, e: u8) -> Self {
        let mut m = Self::one();
        m.0[v.index()] = e;
        m
    }

    pub fn exp(&self, v: Var) -> u8 {
        self.0[v.index()]
    }

    pub fn with_exp(mut self, v: Var, e: u8) -> Self {
        self.0[v.index()] = e;
        self
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut r = [0u8; NVARS];
        for (i, slot) in r.iter_mut().enumerate() {
            *slot = self.0[i].checked_add(o.0[i]).expect("monomial exponent overflow");
        }
        Monomial(r)
    }

    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut r = [0u8; NVARS];
        for (i, slot) in r.iter_mut().enumerate() {
            *slot = self.0[i].checked_sub(o.0[i])?;
        }
        Some(Monomial(r))
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut r = [0u8; NVARS];
        for (i, slot) in r.iter_mut().enumerate() {
            *slot = self.0[i].min(o.0[i]);
        }
        Monomial(r)
    }

    /// Bit set of variables with a nonzero exponent.
    pub fn support(&self) -> u32 {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).fold(0, |acc, (i, _)| acc | (1 << i))
    }

    pub fn exponents(&self) -> &[u8; NVARS] {
        &self.0
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::all() {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A polynomial stored as terms sorted by strictly decreasing monomial, with
/// no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, CycloRational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(CycloRational::one())
    }

    pub fn constant(c: CycloRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn var(v: Var) -> Self {
        Poly { terms: vec![(Monomial::var(v, 1), CycloRational::one())] }
    }

    pub fn term(m: Monomial, c: CycloRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, CycloRational)>>(it: I) -> Self {
        let mut acc: BTreeMap<Monomial, CycloRational> = BTreeMap::new();
        for (m, c) in it {
            let slot = acc.entry(m).or_default();
            *slot = &*slot + &c;
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, CycloRational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<CycloRational> {
        match self.terms.as_slice() {
            [] => Some(CycloRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, CycloRational)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> CycloRational {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_default()
    }

    /// Bit set of variables occurring in the polynomial.
    pub fn support(&self) -> u32 {
        self.terms.iter().fold(0, |acc, (m, _)| acc | m.support())
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.support() & (1 << v.index()) != 0
    }

    pub fn degree_in(&self, v: Var) -> u8 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.merge(o, true)
    }

    fn merge(&self, o: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut k) = (0, 0);
        while i < self.terms.len() && k < o.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &o.terms[k];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((*mb, if negate { -cb } else { cb.clone() }));
                    k += 1;
                }
                Ordering::Equal => {
                    let c = if negate { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((*ma, c));
                    }
                    i += 1;
                    k += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(o.terms[k..].iter().map(|(m, c)| (*m, if negate { -c } else { c.clone() })));
        Poly { terms: out }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return o.scale(&c);
        }
        if let Some(c) = o.constant_value() {
            return self.scale(&c);
        }
        let mut acc: BTreeMap<Monomial, CycloRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let slot = acc.entry(ma.mul(mb)).or_default();
                *slot = &*slot + &(ca * cb);
            }
        }
        Poly { terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn scale(&self, c: &CycloRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides out the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.terms.first()?;
        if d.terms.len() == 1 {
            let inv = dc.inv()?;
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                out.push((m.div(dm)?, c * &inv));
            }
            return Some(Poly { terms: out });
        }
        let dinv = dc.inv()?;
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, CycloRational)> = Vec::new();
        while let Some((rm, rc)) = rem.terms.first() {
            let qm = rm.div(dm)?;
            let qc = rc * &dinv;
            rem = rem.sub(&d.mul_monomial(&qm).scale(&qc));
            quot.push((qm, qc));
        }
        Some(Poly { terms: quot })
    }

    /// Coefficients with respect to `v`: entry `e` is the coefficient of `v^e`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, CycloRational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            buckets[e].push((m.with_exp(v, 0), c.clone()));
        }
        // Zeroing one exponent keeps the relative order of a bucket's terms.
        buckets.into_iter().map(|terms| Poly { terms }).collect()
    }

    pub fn from_coeffs(v: Var, coeffs: &[Poly]) -> Poly {
        let mut acc = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&c.mul_monomial(&Monomial::var(v, e as u8)));
            }
        }
        acc
    }

    /// Evaluates with every variable bound to a value of Q(j).
    pub fn eval(&self, point: &[CycloRational; NVARS]) -> CycloRational {
        let mut acc = CycloRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::all() {
                let e = m.exp(v);
                if e > 0 {
                    t = &t * &point[v.index()].pow(e as u32);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Exact square root when `self` is the square of a polynomial whose
    /// leading coefficient is a rational square.
    pub fn sqrt(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (lm, lc) = self.terms.first()?;
        let mut half = [0u8; NVARS];
        for (i, slot) in half.iter_mut().enumerate() {
            let e = lm.0[i];
            if e % 2 != 0 {
                return None;
            }
            *slot = e / 2;
        }
        let root_lm = Monomial(half);
        let root_lc = lc.sqrt_rational()?;
        let two_lc_inv = (&root_lc + &root_lc).inv()?;
        let mut root = Poly::term(root_lm, root_lc);
        let mut rem = self.sub(&root.mul(&root));
        let bound = self.terms.len() * 4 + 8;
        for _ in 0..bound {
            let Some((rm, rc)) = rem.terms.first().cloned() else {
                return Some(root);
            };
            let m = rm.div(&root_lm)?;
            if m >= root_lm {
                return None;
            }
            let t = Poly::term(m, &rc * &two_lc_inv);
            // (root + t)^2 = root^2 + 2 root t + t^2
            rem = rem.sub(&root.mul(&t).scale(&CycloRational::from_int(2))).sub(&t.mul(&t));
            root = root.add(&t);
        }
        None
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let body = if m.is_one() {
                c.to_string()
            } else if c.is_one() {
                m.to_string()
            } else if (-c).is_one() {
                format!("-{m}")
            } else if c.is_compound() {
                format!("{c}*{m}")
            } else {
                format!("{c}*{m}")
            };
            if i == 0 {
                f.write_str(&body)?;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<CycloRational> for Poly {
    fn from(c: CycloRational) -> Self {
        Poly::constant(c)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Poly::constant(CycloRational::from_int(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Poly {
        Poly::var(Var::Q)
    }
    fn p() -> Poly {
        Poly::var(Var::P)
    }

    #[test]
    fn lex_order_puts_q_first() {
        let f = p().pow(3).add(&q());
        assert_eq!(f.to_string(), "q + p^3");
    }

    #[test]
    fn exact_division() {
        let a = q().add(&p());
        let b = q().sub(&p());
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!(prod.div_exact(&q().add(&Poly::one())), None);
    }

    #[test]
    fn coefficient_split_round_trips() {
        let f = q().pow(2).mul(&p()).add(&q().mul(&p().pow(2))).add(&Poly::from(3));
        let cs = f.coeffs_in(Var::Q);
        assert_eq!(cs.len(), 3);
        assert_eq!(Poly::from_coeffs(Var::Q, &cs), f);
    }

    #[test]
    fn polynomial_square_root() {
        let f = q().mul(&p()).sub(&Poly::one()).scale(&CycloRational::from_frac(3, 2));
        assert_eq!(f.mul(&f).sqrt(), Some(f.clone()));
        assert_eq!(f.mul(&f).add(&Poly::one()).sqrt(), None);
    }

    #[test]
    fn variable_names_round_trip() {
        for v in Var::all() {
            assert_eq!(Var::from_name(&v.name()), Some(v));
        }
        assert_eq!(Var::from_name("C0"), None);
        assert_eq!(Var::from_name("C17"), None);
        assert_eq!(Var::from_name("C01"), None);
    }
}
