//! Text syntax shared by scalars, elements and the command line.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | power
//! power  := atom ['^' ['-'] integer]
//! atom   := integer | symbol | '(' expr ')'
//! ```
//!
//! Symbols `j q p q' k C1..C16` are scalars; any other symbol must name a
//! generator of the presentation in use. Products keep their written order.
//! Division and negative powers are only allowed on scalar-valued operands.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::ncalgebra::{Element, Presentation, Word};
use crate::scalar::{CycloRational, Scalar, ScalarError, Var, NVARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("`{0}` is not a scalar symbol")]
    NotScalar(String),
    #[error("division by a non-scalar expression")]
    NonScalarDivisor,
    #[error("negative power of a non-scalar expression")]
    NonScalarPower,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl From<ExprError> for ScalarError {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::Scalar(s) => s,
            other => ScalarError::Parse(other.to_string()),
        }
    }
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Sym(String),
    Sum(Vec<Expr>),
    Neg(Box<Expr>),
    /// Ordered product; order matters for generators.
    Product(Vec<Expr>),
    Quotient(Box<Expr>, Box<Expr>),
    Power(Box<Expr>, i32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(src[start..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'\'' {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ExprError::Syntax { pos: i, msg: format!("unexpected character `{}`", &src[i..].chars().next().unwrap()) });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut terms = Vec::new();
        let first_neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let t = self.term()?;
        terms.push(if first_neg { Expr::Neg(Box::new(t)) } else { t });
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(Expr::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Sum(terms) })
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = match acc {
                    Expr::Product(mut fs) => {
                        fs.push(rhs);
                        Expr::Product(fs)
                    }
                    other => Expr::Product(vec![other, rhs]),
                };
            } else if self.eat('/') {
                let rhs = self.unary()?;
                acc = Expr::Quotient(Box::new(acc), Box::new(rhs));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                let e: i32 = match i32::try_from(n) {
                    Ok(e) => e,
                    Err(_) => return self.err("exponent too large"),
                };
                Ok(Expr::Power(Box::new(base), if neg { -e } else { e }))
            }
            _ => self.err("expected an integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) => {
                self.at += 1;
                Ok(Expr::Sym(s))
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses text into an expression tree.
pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, end: src.len() };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Scalar meaning of a symbol, if it has one.
pub fn scalar_symbol(name: &str) -> Option<Scalar> {
    if name == "j" {
        return Some(Scalar::j());
    }
    Var::from_name(name).map(Scalar::var)
}

impl Expr {
    /// Evaluates as a scalar; generator symbols are rejected.
    pub fn to_scalar(&self) -> Result<Scalar, ExprError> {
        Ok(match self {
            Expr::Num(n) => Scalar::from_cyclo(CycloRational::from_rational(n.clone().into())),
            Expr::Sym(s) => scalar_symbol(s).ok_or_else(|| ExprError::NotScalar(s.clone()))?,
            Expr::Sum(ts) => {
                let mut acc = Scalar::zero();
                for t in ts {
                    acc = &acc + &t.to_scalar()?;
                }
                acc
            }
            Expr::Neg(e) => -e.to_scalar()?,
            Expr::Product(fs) => {
                let mut acc = Scalar::one();
                for f in fs {
                    acc = &acc * &f.to_scalar()?;
                }
                acc
            }
            Expr::Quotient(a, b) => a.to_scalar()?.checked_div(&b.to_scalar()?)?,
            Expr::Power(b, e) => b.to_scalar()?.pow(*e)?,
        })
    }

    /// Evaluates as an (unnormalized) element over `p`.
    pub fn to_element(&self, p: &Presentation) -> Result<Element, ExprError> {
        self.to_element_with(&|name| p.rank_of(name))
    }

    /// Like [`Expr::to_element`] with an explicit generator lookup.
    pub fn to_element_with(&self, rank: &dyn Fn(&str) -> Option<u8>) -> Result<Element, ExprError> {
        Ok(match self {
            Expr::Num(_) => Element::scalar(self.to_scalar()?),
            Expr::Sym(s) => match scalar_symbol(s) {
                Some(c) => Element::scalar(c),
                None => Element::letter(rank(s).ok_or_else(|| ExprError::UnknownGenerator(s.clone()))?),
            },
            Expr::Sum(ts) => {
                let mut acc = Element::zero();
                for t in ts {
                    acc.add_scaled(&t.to_element_with(rank)?, &Scalar::one());
                }
                acc
            }
            Expr::Neg(e) => e.to_element_with(rank)?.neg(),
            Expr::Product(fs) => {
                let mut acc = Element::one();
                for f in fs {
                    acc = acc.concat(&f.to_element_with(rank)?);
                }
                acc
            }
            Expr::Quotient(a, b) => {
                let d = b.to_element_with(rank)?.as_scalar().ok_or(ExprError::NonScalarDivisor)?;
                let inv = d.inv().ok_or(ExprError::Scalar(ScalarError::DivisionByZero))?;
                a.to_element_with(rank)?.scale(&inv)
            }
            Expr::Power(b, e) => {
                let base = b.to_element_with(rank)?;
                if let Some(s) = base.as_scalar() {
                    Element::scalar(s.pow(*e)?)
                } else if *e < 0 {
                    return Err(ExprError::NonScalarPower);
                } else {
                    let mut acc = Element::scalar(Scalar::one());
                    for _ in 0..*e {
                        acc = acc.concat(&base);
                    }
                    acc
                }
            }
        })
    }

    /// Direct numeric evaluation at a point, bypassing canonical forms.
    /// `None` at a pole.
    pub fn eval_at(&self, point: &[CycloRational; NVARS]) -> Option<CycloRational> {
        Some(match self {
            Expr::Num(n) => CycloRational::from_rational(n.clone().into()),
            Expr::Sym(s) if s == "j" => CycloRational::j(),
            Expr::Sym(s) => point[Var::from_name(s)?.index()].clone(),
            Expr::Sum(ts) => {
                let mut acc = CycloRational::zero();
                for t in ts {
                    acc = &acc + &t.eval_at(point)?;
                }
                acc
            }
            Expr::Neg(e) => -e.eval_at(point)?,
            Expr::Product(fs) => {
                let mut acc = CycloRational::one();
                for f in fs {
                    acc = &acc * &f.eval_at(point)?;
                }
                acc
            }
            Expr::Quotient(a, b) => &a.eval_at(point)? * &b.eval_at(point)?.inv()?,
            Expr::Power(b, e) => {
                let v = b.eval_at(point)?;
                let v = if *e < 0 { v.inv()? } else { v };
                v.pow(e.unsigned_abs())
            }
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Sym(s) => f.write_str(s),
            Expr::Sum(ts) => {
                f.write_str("(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Product(fs) => {
                f.write_str("(")?;
                for (i, t) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
            Expr::Quotient(a, b) => write!(f, "({a}/{b})"),
            Expr::Power(b, e) => write!(f, "({b}^{e})"),
        }
    }
}

/// Parses scalar text such as `(j^2*q*p-1)/(1+q*p)`.
pub fn parse_scalar(src: &str) -> Result<Scalar, ExprError> {
    parse(src)?.to_scalar()
}

/// Parses an element over `p` without normalizing it.
pub fn parse_expr(src: &str, p: &Presentation) -> Result<Element, ExprError> {
    parse(src)?.to_element(p)
}

/// Parses a comma-separated list of `var=scalar` bindings.
pub fn parse_bindings(src: &str) -> Result<Vec<(Var, Scalar)>, ExprError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in src.split(',') {
        let Some((lhs, rhs)) = part.split_once('=') else {
            return Err(ExprError::Syntax { pos: offset, msg: "expected `var=value`".into() });
        };
        let name = lhs.trim();
        let v = Var::from_name(name).ok_or_else(|| ExprError::Syntax {
            pos: offset,
            msg: format!("`{name}` is not a substitutable variable"),
        })?;
        let value = parse(rhs).map_err(|e| match e {
            ExprError::Syntax { pos, msg } => ExprError::Syntax { pos: pos + offset + lhs.len() + 1, msg },
            other => other,
        })?;
        out.push((v, value.to_scalar()?));
        offset += part.len() + 1;
    }
    Ok(out)
}

/// The single word of an element that is exactly one word with coefficient 1.
pub fn as_word(e: &Element) -> Option<Word> {
    let mut it = e.iter();
    match (it.next(), it.next()) {
        (Some((w, c)), None) if c.is_one() => Some(w.clone()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_syntax() {
        let s = parse_scalar("(j^2*q*p-1)/(1+q*p)").unwrap();
        let j = Scalar::j();
        let qp = &Scalar::q() * &Scalar::p();
        let expected = &(&(&(&j * &j) * &qp) - &Scalar::one()) / &(&Scalar::one() + &qp);
        assert_eq!(s, expected);
        assert_eq!(parse_scalar("q^-1").unwrap(), Scalar::q().inv().unwrap());
        assert_eq!(parse_scalar("3/2").unwrap(), Scalar::from_frac(3, 2));
        assert_eq!(parse_scalar("-q^2").unwrap(), -(&Scalar::q() * &Scalar::q()));
        assert_eq!(parse_scalar("q'").unwrap(), Scalar::qprime());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("q + * p") {
            Err(ExprError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("(q"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("q $ p"), Err(ExprError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_scalar("x"), Err(ExprError::NotScalar(_))));
        assert!(parse_scalar("1/(q-q)").is_err());
    }

    #[test]
    fn bindings() {
        let b = parse_bindings("p=j^2*q^-1, q'=q").unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].0, Var::P);
        assert_eq!(b[1], (Var::QPRIME, Scalar::q()));
        assert!(parse_bindings("x=1").is_err());
        assert!(parse_bindings("p").is_err());
    }

    #[test]
    fn direct_evaluation_matches_canonical() {
        let e = parse("(q^2 - p^2)/(q - p) - j*(1 + j) ").unwrap();
        let mut point: [CycloRational; NVARS] = Default::default();
        point[0] = CycloRational::from_frac(3, 5);
        point[1] = CycloRational::from_frac(7, 2);
        assert_eq!(e.eval_at(&point), e.to_scalar().unwrap().eval(&point));
    }
}
