//! A small infix expression language for ring elements and polynomials:
//! integers, identifiers, `+ - * ^`, division by units, parentheses and
//! implicit multiplication (`6a^2/b^3`, `2(x+1)`).

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::rings::Ring;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
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
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Int(text.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
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
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = if self.eat('-') { Expr::Neg(Box::new(self.product()?)) } else { self.product()? };
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.power()?));
            } else if matches!(self.peek(), Some(Tok::Int(_) | Tok::Ident(_) | Tok::Op('('))) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    let e: u32 = e.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(Error::Parse("exponent must be a non-negative integer".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.power()?)))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

impl Expr {
    pub fn parse(s: &str) -> Result<Expr> {
        let mut p = Parser { toks: lex(s)?, pos: 0 };
        let e = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(e)
    }

    /// Variable names in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Int(_) => {}
                Expr::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Expr::Neg(a) | Expr::Pow(a, _) => walk(a, out),
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Evaluates in `ring`, resolving identifiers through `lookup`.
    pub fn eval<R: Ring>(&self, ring: &R, lookup: &dyn Fn(&str) -> Option<R::Elem>) -> Result<R::Elem> {
        Ok(match self {
            Expr::Int(n) => ring.from_bigint(n),
            Expr::Var(v) => lookup(v).ok_or_else(|| Error::Parse(format!("unknown name {v}")))?,
            Expr::Neg(a) => ring.neg(&a.eval(ring, lookup)?),
            Expr::Add(a, b) => ring.add(&a.eval(ring, lookup)?, &b.eval(ring, lookup)?),
            Expr::Sub(a, b) => ring.sub(&a.eval(ring, lookup)?, &b.eval(ring, lookup)?),
            Expr::Mul(a, b) => ring.mul(&a.eval(ring, lookup)?, &b.eval(ring, lookup)?),
            Expr::Div(a, b) => ring.mul(&a.eval(ring, lookup)?, &ring.inv(&b.eval(ring, lookup)?)?),
            Expr::Pow(a, e) => ring.pow(&a.eval(ring, lookup)?, *e as u64),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{Symbolic, Zmod};

    #[test]
    fn implicit_products_and_division() {
        let r = Symbolic::generic(None);
        let e = Expr::parse("6a^2/b^3 - 2(a+1)").unwrap();
        let v = e.eval(&r, &|n| r.gen(n).ok()).unwrap();
        assert_eq!(r.display(&v), "-2 - 2*a + 6*a^2/b^3");
    }

    #[test]
    fn modular_evaluation() {
        let z = Zmod::new(25).unwrap();
        let e = Expr::parse("-(3 + x)^2 / 2").unwrap();
        let v = e.eval(&z, &|n| (n == "x").then_some(4)).unwrap();
        // -49 = 1 mod 25 and 1/2 = 13
        assert_eq!(v, 13);
        assert!(Expr::parse("x^y").is_err());
        assert!(Expr::parse("(x").is_err());
    }
}
