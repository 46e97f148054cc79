//! Small expression language shared by every textual input.
//!
//! Grammar: sums and differences of products and quotients of powers;
//! atoms are integers, identifiers and parenthesized expressions. Exponents
//! are integers, optionally negative, or parenthesized rationals `(a/b)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, FieldElement};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, BigRational),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Int(digits.parse().unwrap()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}` at token {}", self.pos)))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => Err(Error::Parse(format!("expected an integer at token {}", self.pos))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let exp = if self.eat('(') {
            let neg = self.eat('-');
            let num = self.int()?;
            let den = if self.eat('/') { self.int()? } else { BigInt::one() };
            self.expect(')')?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator in exponent".into()));
            }
            let q = BigRational::new(num, den);
            if neg { -q } else { q }
        } else {
            let neg = self.eat('-');
            let q = BigRational::from_integer(self.int()?);
            if neg { -q } else { q }
        };
        Ok(Expr::Pow(Box::new(base), exp))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Var(name))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.power()?)))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in `{s}`")));
    }
    Ok(e)
}

/// Target of expression evaluation.
pub trait Algebra {
    type Elem: Clone;

    fn int(&self, n: &BigInt) -> Result<Self::Elem>;
    fn var(&self, name: &str) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn pow(&self, a: &Self::Elem, e: &BigRational) -> Result<Self::Elem>;
}

pub fn evaluate<A: Algebra>(alg: &A, e: &Expr) -> Result<A::Elem> {
    match e {
        Expr::Int(n) => alg.int(n),
        Expr::Var(v) => alg.var(v),
        Expr::Add(a, b) => alg.add(&evaluate(alg, a)?, &evaluate(alg, b)?),
        Expr::Sub(a, b) => alg.sub(&evaluate(alg, a)?, &evaluate(alg, b)?),
        Expr::Mul(a, b) => alg.mul(&evaluate(alg, a)?, &evaluate(alg, b)?),
        Expr::Div(a, b) => alg.div(&evaluate(alg, a)?, &evaluate(alg, b)?),
        Expr::Neg(a) => alg.neg(&evaluate(alg, a)?),
        Expr::Pow(a, q) => alg.pow(&evaluate(alg, a)?, q),
    }
}

pub fn parse_with<A: Algebra>(alg: &A, s: &str) -> Result<A::Elem> {
    evaluate(alg, &parse_expr(s)?)
}

/// Constants of a coefficient field: integers, `z` (or `p`-adic uniformizer) and `u`.
pub struct FieldAlgebra(pub FieldDescriptor);

impl Algebra for FieldAlgebra {
    type Elem = FieldElement;

    fn int(&self, n: &BigInt) -> Result<FieldElement> {
        Ok(self.0.bigint(n))
    }

    fn var(&self, name: &str) -> Result<FieldElement> {
        match name {
            "z" => Ok(self.0.uniformizer()),
            "u" => self.0.u(),
            _ => Err(Error::Parse(format!("unknown symbol `{name}` in field {}", self.0))),
        }
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(a + b)
    }

    fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(a - b)
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(a * b)
    }

    fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        // coefficient-only quotients like (1)/(u) go through the residue field
        if b.valuation().is_zero() && b.terms().is_some_and(|t| t.len() == 1) {
            let r = b.residue()?.inv()?;
            return Ok(a.scale_residue(&r));
        }
        a.div(b)
    }

    fn neg(&self, a: &FieldElement) -> Result<FieldElement> {
        Ok(-a)
    }

    fn pow(&self, a: &FieldElement, e: &BigRational) -> Result<FieldElement> {
        a.pow_rational(e)
    }
}

pub fn parse_field_element(s: &str, field: FieldDescriptor) -> Result<FieldElement> {
    parse_with(&FieldAlgebra(field), s)
}
