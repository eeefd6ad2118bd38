//! Recursive-descent parser for generator expressions such as
//! `s1^2 s2(x) * s2^4(x) - 1` or `s1^2 s2(x) + 2 s2^3(x)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{DiffTerm, Family, SliceVector};
use crate::error::{ParseError, ParseErrorKind, Result};
use crate::monoid::ShiftMonomial;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Shift(usize),
    Ident(String),
    LParen,
    RParen,
    Caret,
    Star,
    Slash,
    Plus,
    Minus,
    End,
}

fn syntax(position: usize, msg: impl Into<String>) -> ParseError {
    ParseError { position, kind: ParseErrorKind::Syntax(msg.into()) }
}

fn lex(text: &str) -> std::result::Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        let start = k;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            out.push((Tok::Int(text[start..k].parse().expect("digits")), start));
            continue;
        }
        if c == 's' && k + 1 < bytes.len() && bytes[k + 1].is_ascii_digit() {
            k += 1;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            let index = text[start + 1..k]
                .parse::<usize>()
                .map_err(|_| syntax(start, "shift index too large"))?;
            out.push((Tok::Shift(index), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
                k += 1;
            }
            out.push((Tok::Ident(text[start..k].to_string()), start));
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '^' => Tok::Caret,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            _ => {
                let ch = text[k..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, start));
        k += c.len_utf8();
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// `τ(y)^e` inside a product.
struct Factor {
    term: DiffTerm,
    exponent: BigInt,
    explicit_exponent: bool,
    position: usize,
}

/// One signed summand: rational coefficient times variable factors.
struct Summand {
    coeff: BigRational,
    factors: Vec<Factor>,
    position: usize,
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    n: usize,
    variables: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> std::result::Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn int(&mut self) -> std::result::Result<BigInt, ParseError> {
        match self.bump() {
            (Tok::Int(v), _) => Ok(v),
            (_, p) => Err(syntax(p, "expected an integer")),
        }
    }

    fn signed_int(&mut self) -> std::result::Result<BigInt, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            Ok(-self.int()?)
        } else {
            self.int()
        }
    }

    fn expr(&mut self) -> std::result::Result<Vec<Summand>, ParseError> {
        let mut out = Vec::new();
        let mut negative = false;
        match self.peek() {
            Tok::Minus => {
                negative = true;
                self.bump();
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let mut s = self.product()?;
            if negative {
                s.coeff = -s.coeff;
            }
            out.push(s);
            match self.peek() {
                Tok::Plus => negative = false,
                Tok::Minus => negative = true,
                Tok::End => return Ok(out),
                _ => return Err(syntax(self.pos(), "expected `+`, `-` or end of expression")),
            }
            self.bump();
        }
    }

    fn starts_item(tok: &Tok) -> bool {
        matches!(tok, Tok::Int(_) | Tok::Shift(_) | Tok::Ident(_) | Tok::LParen)
    }

    fn product(&mut self) -> std::result::Result<Summand, ParseError> {
        let position = self.pos();
        let mut coeff = BigRational::one();
        let mut factors = Vec::new();
        let mut last_was_number = false;
        let mut first = true;
        loop {
            if !first {
                match self.peek() {
                    Tok::Star => {
                        self.bump();
                    }
                    t if last_was_number && Self::starts_item(t) => {}
                    _ => break,
                }
            }
            first = false;
            match self.peek().clone() {
                Tok::Int(_) => {
                    let p = self.int()?;
                    let c = if *self.peek() == Tok::Slash {
                        let slash = self.pos();
                        self.bump();
                        let q = self.int()?;
                        if q.is_zero() {
                            return Err(syntax(slash, "zero denominator"));
                        }
                        BigRational::new(p, q)
                    } else {
                        BigRational::from_integer(p)
                    };
                    coeff *= c;
                    last_was_number = true;
                }
                Tok::Shift(_) | Tok::Ident(_) | Tok::LParen => {
                    factors.push(self.factor()?);
                    last_was_number = false;
                }
                _ => return Err(syntax(self.pos(), "expected a coefficient or a shifted variable")),
            }
        }
        Ok(Summand { coeff, factors, position })
    }

    fn factor(&mut self) -> std::result::Result<Factor, ParseError> {
        let position = self.pos();
        let mut shift = vec![0u32; self.n];
        let mut any_shift = false;
        while let Tok::Shift(index) = *self.peek() {
            let at = self.pos();
            self.bump();
            if index == 0 || index > self.n {
                return Err(ParseError { position: at, kind: ParseErrorKind::ShiftIndex { index, n: self.n } });
            }
            let mut e = 1u32;
            if *self.peek() == Tok::Caret {
                self.bump();
                let p = self.pos();
                e = self.int()?.to_u32().ok_or_else(|| syntax(p, "shift exponent too large"))?;
            }
            shift[index - 1] += e;
            any_shift = true;
        }
        let var_name = match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let name = match self.bump() {
                    (Tok::Ident(name), p) => (name, p),
                    (_, p) => return Err(syntax(p, "expected a variable name")),
                };
                self.expect(Tok::RParen, "`)`")?;
                name
            }
            Tok::Ident(name) if !any_shift => {
                let p = self.pos();
                self.bump();
                (name, p)
            }
            _ => return Err(syntax(self.pos(), "expected `(` followed by a variable name")),
        };
        let var = self
            .variables
            .iter()
            .position(|v| *v == var_name.0)
            .ok_or(ParseError { position: var_name.1, kind: ParseErrorKind::UnknownVariable(var_name.0.clone()) })?;
        let mut exponent = BigInt::one();
        let mut explicit_exponent = false;
        if *self.peek() == Tok::Caret {
            self.bump();
            exponent = self.signed_int()?;
            explicit_exponent = true;
        }
        Ok(Factor {
            term: DiffTerm::new(var, ShiftMonomial::new(shift)),
            exponent,
            explicit_exponent,
            position,
        })
    }
}

/// Parses one generator expression for a descriptor with `n` shift operators
/// and the given variable names.
pub fn parse_generator(text: &str, family: Family, n: usize, variables: &[String]) -> Result<SliceVector> {
    if n == 0 {
        return Err(crate::error::Error::InvalidDimension(0));
    }
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, n, variables };
    let summands = p.expr()?;
    Ok(match family {
        Family::Additive => additive(n, summands)?,
        Family::Multiplicative => multiplicative(n, summands)?,
    })
}

fn additive(n: usize, summands: Vec<Summand>) -> std::result::Result<SliceVector, ParseError> {
    let mut v = SliceVector::zero(n);
    for s in summands {
        match s.factors.as_slice() {
            [] if s.coeff.is_zero() => {}
            [f] if !f.explicit_exponent || f.exponent.is_one() => v.add_term(f.term.clone(), s.coeff),
            [] => return Err(ParseError { position: s.position, kind: ParseErrorKind::Nonlinear }),
            [f] | [_, f, ..] => {
                return Err(ParseError { position: f.position, kind: ParseErrorKind::Nonlinear })
            }
        }
    }
    Ok(v)
}

fn multiplicative(n: usize, summands: Vec<Summand>) -> std::result::Result<SliceVector, ParseError> {
    let non_monomial = |position| ParseError { position, kind: ParseErrorKind::NonMonomial };
    let (mono, rest) = summands.split_first().expect("expression has at least one summand");
    if !mono.coeff.is_one() {
        return Err(non_monomial(mono.position));
    }
    match rest {
        [] => {}
        [one] if one.factors.is_empty() && one.coeff == -BigRational::one() => {}
        [other, ..] => return Err(non_monomial(other.position)),
    }
    let mut v = SliceVector::zero(n);
    for f in &mono.factors {
        v.add_term(f.term.clone(), BigRational::from_integer(f.exponent.clone()));
    }
    Ok(v)
}
