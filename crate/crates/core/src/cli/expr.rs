//! Element literals: rationals and the generators `u`, `pi`, `s` combined
//! with `+ - * /`, integer powers and parentheses.

use crate::arith::{Field, Ring, Q};
use crate::error::{Error, Result};
use crate::etale::{EtaleElement, QuadraticEtale};
use crate::localfield::{ExtensionTower, FieldElement};
use num_bigint::BigInt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

#[derive(Clone, Debug)]
enum Expr {
    Num(Q),
    Gen(String, usize),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64, usize),
}

/// A literal failed to parse or evaluate; `offset` is a character offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralError {
    pub offset: usize,
    pub message: String,
}

type LResult<T> = std::result::Result<T, LiteralError>;

fn err<T>(offset: usize, message: impl Into<String>) -> LResult<T> {
    Err(LiteralError {
        offset,
        message: message.into(),
    })
}

fn lex(src: &str) -> LResult<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
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
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(BigInt::from_str(&s).expect("digits")), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return err(i, format!("unexpected character '{c}'"));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> LResult<Expr> {
        let mut lhs = self.product()?;
        loop {
            let at = self.offset();
            let op = if self.eat('+') {
                '+'
            } else if self.eat('-') {
                '-'
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.product()?), at);
        }
    }

    fn product(&mut self) -> LResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let at = self.offset();
            let op = if self.eat('*') {
                '*'
            } else if self.eat('/') {
                '/'
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?), at);
        }
    }

    fn unary(&mut self) -> LResult<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        let at = self.offset();
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let k: i64 = n
                    .try_into()
                    .or_else(|_| err(at, "exponent out of range"))?;
                Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }, at))
            }
            _ => err(self.offset(), "expected an integer exponent"),
        }
    }

    fn atom(&mut self) -> LResult<Expr> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Q::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Gen(name, at))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return err(self.offset(), "expected ')'");
                }
                Ok(e)
            }
            Some(t) => err(at, format!("unexpected token {t:?}")),
            None => err(at, "unexpected end of literal"),
        }
    }
}

fn parse(src: &str) -> LResult<Expr> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.chars().count(),
    };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return err(p.offset(), "trailing input");
    }
    Ok(e)
}

trait Target {
    type E: Field;
    fn constant(&self, x: &Q) -> Self::E;
    fn generator(&self, name: &str) -> std::result::Result<Self::E, String>;
}

impl Target for Arc<ExtensionTower> {
    type E = FieldElement;
    fn constant(&self, x: &Q) -> FieldElement {
        self.from_q(x)
    }
    fn generator(&self, name: &str) -> std::result::Result<FieldElement, String> {
        let r = match name {
            "u" => self.gen_u(),
            "pi" => self.pi(),
            _ => return Err(format!("unknown generator '{name}'")),
        };
        r.map_err(|e| e.to_string())
    }
}

impl Target for Arc<QuadraticEtale> {
    type E = EtaleElement;
    fn constant(&self, x: &Q) -> EtaleElement {
        self.from_q(x)
    }
    fn generator(&self, name: &str) -> std::result::Result<EtaleElement, String> {
        if name == "s" {
            return Ok(self.s());
        }
        self.base().generator(name).map(|x| self.from_base(&x))
    }
}

fn eval<T: Target>(t: &T, e: &Expr) -> LResult<T::E> {
    Ok(match e {
        Expr::Num(x) => t.constant(x),
        Expr::Gen(name, at) => t.generator(name).or_else(|m| err(*at, m))?,
        Expr::Neg(a) => eval(t, a)?.neg(),
        Expr::Bin(op, a, b, at) => {
            let (a, b) = (eval(t, a)?, eval(t, b)?);
            match op {
                '+' => a.add(&b),
                '-' => a.sub(&b),
                '*' => a.mul(&b),
                _ => match b.inv() {
                    Some(bi) => a.mul(&bi),
                    None => return err(*at, "division by a non-invertible element"),
                },
            }
        }
        Expr::Pow(a, k, at) => {
            let a = eval(t, a)?;
            let base = if *k < 0 {
                a.inv().ok_or_else(|| LiteralError {
                    offset: *at,
                    message: "negative power of a non-invertible element".into(),
                })?
            } else {
                a
            };
            let mut out = base.one_like();
            for _ in 0..k.unsigned_abs() {
                out = out.mul(&base);
            }
            out
        }
    })
}

/// Parse a literal in the tower, with `u` and `pi` as generators.
pub fn parse_field(src: &str, tower: &Arc<ExtensionTower>) -> std::result::Result<FieldElement, LiteralError> {
    eval(tower, &parse(src)?)
}

/// Parse a literal in the algebra, with `s` as the square root of δ.
pub fn parse_etale(src: &str, alg: &Arc<QuadraticEtale>) -> std::result::Result<EtaleElement, LiteralError> {
    eval(alg, &parse(src)?)
}

impl LiteralError {
    /// Convert to a parse error positioned inside a document.
    pub fn at(self, line: usize, column: usize) -> Error {
        Error::Parse {
            line,
            column: column + self.offset,
            message: self.message,
        }
    }
}

/// A literal must parse even when the caller has no document position.
pub fn field(src: &str, tower: &Arc<ExtensionTower>) -> Result<FieldElement> {
    parse_field(src, tower).map_err(|e| e.at(1, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qf;
    use crate::localfield::{make_extension, BaseField};

    #[test]
    fn literals_evaluate() {
        let t = BaseField::padic(5).unwrap().trivial_tower();
        assert_eq!(parse_field("3/4", &t).unwrap(), t.from_q(&qf(3, 4)));
        assert_eq!(parse_field("-2^3 + 1", &t).unwrap(), t.from_int(-7));
        assert_eq!(parse_field("pi^-1", &t).unwrap(), t.from_q(&qf(1, 5)));
        let k = make_extension(BaseField::padic(5).unwrap(), 2, &[-5, 1]).unwrap();
        let u = k.gen_u().unwrap();
        assert_eq!(parse_field("(1 + u)*u", &k).unwrap(), u.add(&k.one()).mul(&u));
        let e = QuadraticEtale::field(&t, t.from_int(2)).unwrap();
        assert_eq!(parse_etale("1 + 3*s", &e).unwrap(), e.elem(t.one(), t.from_int(3)));
        let z = e.elem(t.from_q(&qf(-1, 3)), t.from_int(2));
        assert_eq!(parse_etale(&z.to_string(), &e).unwrap(), z);
    }

    #[test]
    fn malformed_literals_report_offsets() {
        let t = BaseField::padic(5).unwrap().trivial_tower();
        assert_eq!(parse_field("1 + * 2", &t).unwrap_err().offset, 4);
        assert_eq!(parse_field("2 $", &t).unwrap_err().offset, 2);
        assert_eq!(parse_field("u", &t).unwrap_err().offset, 0);
        assert_eq!(parse_field("(1 + 2", &t).unwrap_err().offset, 6);
        assert!(parse_field("1/0", &t).is_err());
    }
}
