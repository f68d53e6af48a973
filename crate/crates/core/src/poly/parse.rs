//! Text syntax for polynomials: `3/2*y1^2*y2 - y3 + 5`, `(1+2*i)*x`, and
//! commutators `[xi1*xi3, xi2*xi4]` for free-algebra relations.
//!
//! `i` denotes the imaginary unit unless it is a declared variable.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::free::FreePoly;
use super::multi::MultiPoly;
use super::univariate::UniPoly;
use crate::error::{ParseError, Result};
use crate::linalg::Matrix;
use crate::ring::Pretty;
use crate::scalar::{parse_rational, GaussianRational};

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Num(GaussianRational),
    Ident(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Bracket(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> std::result::Result<Vec<Tok>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            out.push(Tok::Num(chars[start..k].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push(Tok::Ident(chars[start..k].iter().collect()));
        } else if "+-*/^()[],".contains(c) {
            out.push(Tok::Sym(c));
            k += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
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

    fn expect(&mut self, c: char) -> std::result::Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> std::result::Result<Expr, String> {
        let mut lhs = self.term()?;
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

    fn term(&mut self) -> std::result::Result<Expr, String> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<Expr, String> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> std::result::Result<Expr, String> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| format!("invalid exponent `{n}`"))?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return Err("exponent must be a non-negative integer".into()),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> std::result::Result<Expr, String> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let q = parse_rational(&n).map_err(|e| e.to_string())?;
                Ok(Expr::Num(GaussianRational::from(q)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Ident(name))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b)))
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of input".into()),
        }
    }
}

fn parse_expr(input: &str) -> std::result::Result<Expr, ParseError> {
    let err = |message: String| ParseError::Polynomial { input: input.to_string(), message };
    let toks = tokenize(input).map_err(err)?;
    if toks.is_empty() {
        return Err(err("empty polynomial".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr().map_err(err)?;
    if p.pos != p.toks.len() {
        return Err(err(format!("trailing input at token {}", p.pos + 1)));
    }
    Ok(e)
}

/// A carrier that parsed expressions can be built in.
trait Build: Sized + Clone {
    fn constant(&self, c: GaussianRational) -> Self;
    fn variable(&self, name: &str) -> Option<Self>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Result<Self>;
    fn scale(&self, c: &GaussianRational) -> Self;
    fn as_constant(&self) -> Option<GaussianRational>;
    fn declared(&self) -> String;
}

fn build<B: Build>(proto: &B, e: &Expr, input: &str) -> Result<B> {
    let rec = |x: &Expr| build(proto, x, input);
    Ok(match e {
        Expr::Num(c) => proto.constant(c.clone()),
        Expr::Ident(name) => match proto.variable(name) {
            Some(v) => v,
            None if name == "i" => proto.constant(GaussianRational::i()),
            None => return Err(ParseError::UnknownVariable { name: name.clone(), declared: proto.declared() }.into()),
        },
        Expr::Add(a, b) => rec(a)?.add(&rec(b)?),
        Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?),
        Expr::Mul(a, b) => rec(a)?.mul(&rec(b)?)?,
        Expr::Neg(a) => rec(a)?.scale(&-GaussianRational::one()),
        Expr::Div(a, b) => {
            let d = rec(b)?.as_constant().ok_or_else(|| ParseError::Polynomial {
                input: input.to_string(),
                message: "division is only allowed by constants".into(),
            })?;
            let inv = d.inv().ok_or_else(|| ParseError::ZeroDenominator(input.to_string()))?;
            rec(a)?.scale(&inv)
        }
        Expr::Pow(a, k) => {
            let base = rec(a)?;
            let mut acc = proto.constant(GaussianRational::one());
            for _ in 0..*k {
                acc = acc.mul(&base)?;
            }
            acc
        }
        Expr::Bracket(a, b) => {
            let (a, b) = (rec(a)?, rec(b)?);
            a.mul(&b)?.sub(&b.mul(&a)?)
        }
    })
}

impl Build for MultiPoly {
    fn constant(&self, c: GaussianRational) -> Self {
        MultiPoly::constant(self.variables(), c)
    }
    fn variable(&self, name: &str) -> Option<Self> {
        self.variables().iter().position(|v| v == name).map(|i| MultiPoly::var(self.variables(), i))
    }
    fn add(&self, o: &Self) -> Self {
        MultiPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        MultiPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(MultiPoly::mul(self, o))
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        MultiPoly::scale(self, c)
    }
    fn as_constant(&self) -> Option<GaussianRational> {
        match self.total_degree() {
            None => Some(GaussianRational::zero()),
            Some(0) => self.leading().map(|(_, c)| c.clone()),
            _ => None,
        }
    }
    fn declared(&self) -> String {
        self.variables().join(", ")
    }
}

impl Build for FreePoly {
    fn constant(&self, c: GaussianRational) -> Self {
        FreePoly::constant(self.generators(), self.cap(), c)
    }
    fn variable(&self, name: &str) -> Option<Self> {
        self.generators().iter().position(|v| v == name).map(|i| FreePoly::var(self.generators(), self.cap(), i))
    }
    fn add(&self, o: &Self) -> Self {
        FreePoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        FreePoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Result<Self> {
        FreePoly::mul(self, o)
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        FreePoly::scale(self, c)
    }
    fn as_constant(&self) -> Option<GaussianRational> {
        match self.degree() {
            None => Some(GaussianRational::zero()),
            Some(0) => self.terms().next().map(|(_, c)| c.clone()),
            _ => None,
        }
    }
    fn declared(&self) -> String {
        self.generators().join(", ")
    }
}

#[derive(Clone)]
struct NamedUni {
    var: String,
    poly: UniPoly<GaussianRational>,
}

impl Build for NamedUni {
    fn constant(&self, c: GaussianRational) -> Self {
        Self { var: self.var.clone(), poly: UniPoly::constant(c) }
    }
    fn variable(&self, name: &str) -> Option<Self> {
        (name == self.var).then(|| Self { var: self.var.clone(), poly: UniPoly::var() })
    }
    fn add(&self, o: &Self) -> Self {
        Self { var: self.var.clone(), poly: self.poly.clone() + o.poly.clone() }
    }
    fn sub(&self, o: &Self) -> Self {
        Self { var: self.var.clone(), poly: self.poly.clone() - o.poly.clone() }
    }
    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(Self { var: self.var.clone(), poly: self.poly.clone() * o.poly.clone() })
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        Self { var: self.var.clone(), poly: self.poly.scale(c) }
    }
    fn as_constant(&self) -> Option<GaussianRational> {
        match self.poly.degree() {
            None => Some(GaussianRational::zero()),
            Some(0) => Some(self.poly.coeff(0)),
            _ => None,
        }
    }
    fn declared(&self) -> String {
        self.var.clone()
    }
}

/// Parses a commutative polynomial over the given variables.
pub fn parse_multi(input: &str, variables: &[String]) -> Result<MultiPoly> {
    let e = parse_expr(input)?;
    build(&MultiPoly::zero(variables), &e, input)
}

/// Parses a free-algebra element; words longer than `cap` are rejected.
pub fn parse_free(input: &str, generators: &[String], cap: usize) -> Result<FreePoly> {
    let e = parse_expr(input)?;
    build(&FreePoly::zero(generators, cap), &e, input)
}

/// Parses a univariate polynomial in `var`.
pub fn parse_univariate(input: &str, var: &str) -> Result<UniPoly<GaussianRational>> {
    let e = parse_expr(input)?;
    Ok(build(&NamedUni { var: var.to_string(), poly: UniPoly::zero() }, &e, input)?.poly)
}

/// A matrix entry in JSON: polynomial text or a bare integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyEntry {
    Text(String),
    Int(i64),
}

/// Parses rows of entries as polynomials in `var`.
pub fn parse_univariate_matrix(rows: &[Vec<PolyEntry>], var: &str) -> Result<Matrix<UniPoly<GaussianRational>>> {
    let parsed = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    PolyEntry::Text(s) => parse_univariate(s, var),
                    PolyEntry::Int(n) => Ok(UniPoly::constant(GaussianRational::from_int(*n))),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(parsed).ok_or_else(|| ParseError::Schema("ragged matrix rows".into()).into())
}

/// Inverse of [`parse_univariate_matrix`].
pub fn univariate_matrix_entries(m: &Matrix<UniPoly<GaussianRational>>, var: &str) -> Vec<Vec<PolyEntry>> {
    m.to_rows().iter().map(|r| r.iter().map(|e| PolyEntry::Text(e.pretty(&[var]))).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn multivariate_text_round_trip() {
        let v = vars(&["y1", "y2", "y3"]);
        let p = parse_multi("3/2*y1^2*y2 - y3 + 5", &v).unwrap();
        assert_eq!(p.to_string(), "3/2*y1^2*y2 - y3 + 5");
        assert_eq!(parse_multi(&p.to_string(), &v).unwrap(), p);
        let q = parse_multi("(y1 - 3)^2", &vars(&["y1"])).unwrap();
        assert_eq!(q.to_string(), "y1^2 - 6*y1 + 9");
    }

    #[test]
    fn imaginary_unit_and_complex_coefficients() {
        let v = vars(&["x"]);
        let p = parse_multi("(1+2*i)*x - i/2", &v).unwrap();
        assert_eq!(p.to_string(), "(1+2*i)*x - 1/2*i");
        assert_eq!(parse_multi(&p.to_string(), &v).unwrap(), p);
        // A declared `i` is a variable.
        let w = vars(&["i", "j"]);
        assert_eq!(parse_multi("i*j", &w).unwrap().total_degree(), Some(2));
    }

    #[test]
    fn commutator_syntax_in_free_algebra() {
        let g = vars(&["xi1", "xi2", "xi3", "xi4"]);
        let r = parse_free("[xi1*xi3, xi2*xi4]", &g, 4).unwrap();
        assert_eq!(r.to_string(), "-xi2*xi4*xi1*xi3 + xi1*xi3*xi2*xi4");
        assert!(matches!(parse_free("xi1^5", &g, 4), Err(Error::DegreeCapExceeded { .. })));
    }

    #[test]
    fn errors() {
        let v = vars(&["y"]);
        assert!(matches!(parse_multi("y + z", &v), Err(Error::Parse(ParseError::UnknownVariable { .. }))));
        assert!(parse_multi("y +", &v).is_err());
        assert!(parse_multi("y / y", &v).is_err());
        assert!(parse_multi("y / 0", &v).is_err());
        assert!(parse_multi("y^x", &v).is_err());
        assert!(parse_multi("", &v).is_err());
        assert!(parse_multi("y $ 2", &v).is_err());
    }

    #[test]
    fn univariate_in_parameter() {
        let p = parse_univariate("t^2 - 2*t + 1/3", "t").unwrap();
        assert_eq!(p.pretty(&["t"]), "t^2 - 2*t + 1/3");
    }
}
