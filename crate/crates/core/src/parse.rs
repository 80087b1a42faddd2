//! Text grammar shared by operators and polynomials.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' integer)?
//! atom   := integer ['/' integer] | name | '(' expr ')'
//! ```
//!
//! Products are evaluated left to right in the target algebra, so
//! `d1*x1` parses to the normal form `x1*d1 + 1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::{Poly, Ring};
use crate::scalar::Scalar;
use crate::weyl::WeylOp;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected `{token}` at offset {offset}")]
    Unexpected { token: String, offset: usize },
    #[error("unexpected end of input")]
    Eof,
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("division by zero at offset {offset}")]
    ZeroDenominator { offset: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().map(|p| p.1).collect();
            out.push((Tok::Int(text.parse().expect("digits")), off));
            i = j;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_alphabetic() {
                j += 1;
            }
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            out.push((Tok::Name(chars[i..j].iter().map(|p| p.1).collect()), off));
            i = j;
        } else if "+-*^/()".contains(c) {
            out.push((Tok::Sym(c), off));
            i += 1;
        } else {
            return Err(ParseError::Unexpected { token: c.to_string(), offset: off });
        }
    }
    Ok(out)
}

/// Target of expression evaluation.
trait Algebra: Clone {
    fn scalar(&self, c: Scalar) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Algebra for WeylOp {
    fn scalar(&self, c: Scalar) -> Self {
        WeylOp::constant(self.dim(), c)
    }
    fn add(&self, o: &Self) -> Self {
        WeylOp::add(self, o).expect("same dimension")
    }
    fn mul(&self, o: &Self) -> Self {
        self.multiply(o).expect("same dimension")
    }
    fn neg(&self) -> Self {
        WeylOp::neg(self)
    }
}

impl Algebra for Poly {
    fn scalar(&self, c: Scalar) -> Self {
        Poly::constant(self.nvars(), c)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
}

struct Parser<'a, A, F> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    proto: &'a A,
    var: F,
}

impl<A: Algebra, F: Fn(&str) -> Option<A>> Parser<'_, A, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(usize::MAX, |t| t.1)
    }

    fn unexpected(&self) -> ParseError {
        match self.toks.get(self.pos) {
            None => ParseError::Eof,
            Some((t, off)) => ParseError::Unexpected {
                token: match t {
                    Tok::Int(i) => i.to_string(),
                    Tok::Name(n) => n.clone(),
                    Tok::Sym(c) => c.to_string(),
                },
                offset: *off,
            },
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<A, ParseError> {
        let mut acc = self.proto.scalar(Scalar::zero());
        let mut sign = if self.eat('-') {
            false
        } else {
            self.eat('+');
            true
        };
        loop {
            let t = self.term()?;
            acc = acc.add(&if sign { t } else { t.neg() });
            if self.eat('+') {
                sign = true;
            } else if self.eat('-') {
                sign = false;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<A, ParseError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<A, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    let e: u32 = e.try_into().map_err(|_| self.unexpected())?;
                    let mut acc = self.proto.scalar(Scalar::one());
                    for _ in 0..e {
                        acc = acc.mul(&base);
                    }
                    Ok(acc)
                }
                _ => Err(self.unexpected()),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<A, ParseError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                if self.eat('/') {
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) => {
                            self.pos += 1;
                            if d.is_zero() {
                                return Err(ParseError::ZeroDenominator { offset });
                            }
                            Ok(self.proto.scalar(Scalar::new(n, d)))
                        }
                        _ => Err(self.unexpected()),
                    }
                } else {
                    Ok(self.proto.scalar(Scalar::from_integer(n)))
                }
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                (self.var)(&name).ok_or(ParseError::UnknownVariable { name, offset })
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.unexpected());
                }
                Ok(e)
            }
            _ => Err(self.unexpected()),
        }
    }
}

fn run<A: Algebra, F: Fn(&str) -> Option<A>>(s: &str, proto: &A, var: F) -> Result<A, ParseError> {
    let mut p = Parser { toks: lex(s)?, pos: 0, proto, var };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.unexpected());
    }
    Ok(e)
}

fn split_name(name: &str) -> Option<(&str, usize)> {
    let idx = name.find(|c: char| c.is_ascii_digit())?;
    let (prefix, digits) = name.split_at(idx);
    let i: usize = digits.parse().ok()?;
    (i >= 1).then_some((prefix, i - 1))
}

/// Parses an operator in `n` variables: `x<i>`/`z<i>` positions, `d<i>`
/// derivations, 1-based indices.
pub fn parse_op(s: &str, n: usize) -> Result<WeylOp, ParseError> {
    run(s, &WeylOp::zero(n), |name| {
        let (prefix, i) = split_name(name)?;
        if i >= n {
            return None;
        }
        match prefix {
            "x" | "z" => Some(WeylOp::x(n, i)),
            "d" => Some(WeylOp::d(n, i)),
            _ => None,
        }
    })
}

/// Largest variable index mentioned in an operator or polynomial string.
pub fn infer_dim(s: &str) -> usize {
    lex(s)
        .unwrap_or_default()
        .iter()
        .filter_map(|(t, _)| match t {
            Tok::Name(n) => split_name(n).map(|(_, i)| i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(1)
}

/// Parses a polynomial over `ring`, variables looked up by name.
pub fn parse_poly(s: &str, ring: &Ring) -> Result<Poly, ParseError> {
    let n = ring.nvars();
    run(s, &Poly::zero(n), |name| ring.index_of(name).map(|i| Poly::var(n, i)))
}
