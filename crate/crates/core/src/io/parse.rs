//! Polynomial expressions: `+ -` (binary, lowest), unary `-`, `*`, then
//! right-associative `^` with non-negative integer exponents. Rational
//! literals `a/b` bind tighter than `*`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Q};

pub const X_VARS: [&str; 3] = ["x1", "x2", "x3"];
/// Variables of a test polynomial `φ(y, z, w)` substituted by components.
pub const PHI_VARS: [&str; 3] = ["y", "z", "w"];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str, line0: usize, col0: usize) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (line0, col0);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Spanned { tok: Tok::Num(s.parse().unwrap()), line: l, col: k });
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Spanned { tok: Tok::Ident(s), line: l, col: k });
        } else if "+-*/^()".contains(c) {
            chars.next();
            col += 1;
            out.push(Spanned { tok: Tok::Sym(c), line: l, col: k });
        } else {
            return Err(Error::Syntax { line: l, col: k, msg: format!("unexpected character `{}`", c) });
        }
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    names: [&'a str; 3],
}

impl Parser<'_> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = self.peek();
        Err(Error::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn sum(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.is_sym('+') {
                self.bump();
                acc = acc + self.unary()?;
            } else if self.is_sym('-') {
                self.bump();
                acc = acc - self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.is_sym('-') {
            self.bump();
            return Ok(-self.unary()?);
        }
        if self.is_sym('+') {
            self.bump();
            return self.unary();
        }
        self.product()
    }

    fn product(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        while self.is_sym('*') {
            self.bump();
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.is_sym('^') {
            self.bump();
            let e = self.exponent()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32> {
        let t = self.peek().clone();
        let Tok::Num(n) = t.tok else { return self.err("expected a non-negative integer exponent") };
        self.bump();
        let mut e = n.to_u32().ok_or_else(|| Error::Syntax { line: t.line, col: t.col, msg: "exponent too large".into() })?;
        if self.is_sym('^') {
            self.bump();
            let r = self.exponent()?;
            e = e.checked_pow(r).ok_or_else(|| Error::Syntax { line: t.line, col: t.col, msg: "exponent too large".into() })?;
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Poly> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(n) => {
                self.bump();
                if self.is_sym('/') {
                    self.bump();
                    let d = self.peek().clone();
                    let Tok::Num(m) = d.tok else { return self.err("expected a denominator") };
                    if m.is_zero() {
                        return Err(Error::Syntax { line: d.line, col: d.col, msg: "zero denominator".into() });
                    }
                    self.bump();
                    return Ok(Poly::constant(Q::new(n, m)));
                }
                Ok(Poly::constant(Q::from_integer(n)))
            }
            Tok::Ident(name) => match self.names.iter().position(|v| *v == name) {
                Some(i) => {
                    self.bump();
                    Ok(Poly::var(i))
                }
                None => Err(Error::UnknownVariable { name, line: t.line, col: t.col }),
            },
            Tok::Sym('(') => {
                self.bump();
                let p = self.sum()?;
                if !self.is_sym(')') {
                    return self.err("expected `)`");
                }
                self.bump();
                Ok(p)
            }
            Tok::End => self.err("unexpected end of input"),
            Tok::Sym(c) => self.err(format!("unexpected `{}`", c)),
        }
    }
}

/// Parses with explicit variable names; positions start at `(line, col)`.
pub fn parse_in(src: &str, names: [&str; 3], line: usize, col: usize) -> Result<Poly> {
    let toks = lex(src, line, col)?;
    let mut p = Parser { toks, pos: 0, names };
    let out = p.sum()?;
    if p.peek().tok != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

pub fn parse_poly(src: &str) -> Result<Poly> {
    parse_in(src, X_VARS, 1, 1)
}

/// Parses a rational literal such as `-3/4`.
pub fn parse_rational(src: &str) -> Result<Q> {
    let p = parse_in(src, X_VARS, 1, 1)?;
    if !p.is_constant() {
        return Err(Error::Syntax { line: 1, col: 1, msg: format!("`{}` is not a number", src) });
    }
    Ok(p.constant_term())
}

pub fn print_poly(p: &Poly) -> String {
    p.to_string()
}

pub fn print_rational(c: &Q) -> String {
    crate::poly::fmt_rational(c)
}
