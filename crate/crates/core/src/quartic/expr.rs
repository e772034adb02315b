//! Parser for exact coordinates.
//!
//! ```text
//! point  := '(' expr (sep expr)* ')' | expr (sep expr)*      sep := ':' | ','
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ['^' ['-'] integer]
//! atom   := integer | decimal | 'theta' | 'i' | 'omega' | 'zeta'
//!         | 'zeta' '(' integer ')' | '(' expr ')'
//! ```
//!
//! `theta`, `i`, `omega` are exp(2πi/5), exp(2πi/4), exp(2πi/3); `zeta` is
//! exp(2πi/m) for the working conductor m and `zeta(k)` is exp(2πi/k), k | m.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::QuarticPoint;
use crate::cyclotomic::CyclotomicNumber as K;
use crate::error::{Error, Result};

pub const DEFAULT_CONDUCTOR: u32 = 20;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Sym(char),
}

fn err(col: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("column {}: {msg}", col + 1))
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == '.') {
                i += 1;
            }
            let text: String = b[start..i].iter().collect();
            let r = crate::rational::parse(&text).map_err(|_| err(start, format!("bad number {text:?}")))?;
            out.push((start, Tok::Num(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < b.len() && b[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(b[start..i].iter().collect())));
        } else if "+-*/^():,".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(err(i, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    m: u32,
}

impl Parser {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn peek_sym(&self, c: char) -> bool {
        matches!(self.toks.get(self.pos), Some((_, Tok::Sym(x))) if *x == c)
    }

    fn eat(&mut self, c: char) -> bool {
        let hit = self.peek_sym(c);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.col(), format!("expected {c:?}")))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let col = self.col();
        match self.toks.get(self.pos) {
            Some((_, Tok::Num(r))) if r.is_integer() => {
                self.pos += 1;
                i64::try_from(r.numer()).map_err(|_| err(col, "integer too large"))
            }
            _ => Err(err(col, "expected an integer")),
        }
    }

    fn expr(&mut self) -> Result<K> {
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<K> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek_sym('/') {
                let col = self.col();
                self.pos += 1;
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|_| err(col, "division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<K> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        let base = self.atom()?;
        if self.peek_sym('^') {
            let col = self.col();
            self.pos += 1;
            let neg = self.eat('-');
            let e = self.integer()?;
            return base.pow(if neg { -e } else { e }).map_err(|_| err(col, "zero to a negative power"));
        }
        Ok(base)
    }

    fn root(&self, col: usize, order: i64) -> Result<K> {
        if order <= 0 || !self.m.is_multiple_of(order as u32) {
            return Err(err(
                col,
                format!("exp(2 pi i/{order}) is not in Q(zeta_{}); choose a conductor divisible by {order}", self.m),
            ));
        }
        K::root_of_unity(self.m, order as u32, 1)
    }

    fn atom(&mut self) -> Result<K> {
        let col = self.col();
        let Some((_, t)) = self.toks.get(self.pos).cloned() else {
            return Err(err(col, "unexpected end of input"));
        };
        self.pos += 1;
        match t {
            Tok::Num(r) => Ok(K::from_rational(self.m, r)),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Ident(name) => match name.as_str() {
                "theta" => self.root(col, 5),
                "i" => self.root(col, 4),
                "omega" => self.root(col, 3),
                "zeta" if self.peek_sym('(') => {
                    self.pos += 1;
                    let k = self.integer()?;
                    self.expect(')')?;
                    self.root(col, k)
                }
                "zeta" => Ok(K::zeta_power(self.m, 1)),
                _ => Err(err(col, format!("unknown name {name:?}"))),
            },
            Tok::Sym(c) => Err(err(col, format!("unexpected {c:?}"))),
        }
    }
}

fn parser(s: &str, m: u32) -> Result<Parser> {
    K::root_of_unity(m, 1, 0)?;
    Ok(Parser { toks: lex(s)?, pos: 0, end: s.chars().count(), m })
}

/// Parses one element of Q(ζ_m).
pub fn parse_expr(s: &str, m: u32) -> Result<K> {
    let mut p = parser(s, m)?;
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(p.col(), "trailing input"));
    }
    Ok(v)
}

/// Parses `(x1 : ... : x6)`; commas also separate.
pub fn parse_point(s: &str, m: u32) -> Result<QuarticPoint> {
    let mut p = parser(s, m)?;
    let paren = p.eat('(');
    let mut coords = vec![p.expr()?];
    while p.eat(':') || p.eat(',') {
        coords.push(p.expr()?);
    }
    if paren {
        p.expect(')')?;
    }
    if p.pos != p.toks.len() {
        return Err(err(p.col(), "trailing input"));
    }
    QuarticPoint::new(coords)
}
