//! Recursive-descent parser for the scalar grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'sqrt2' | name | 'exp' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `exp` takes a linear form `q1*c1 + q2*c2 + ...` with rational `q`.
//! Division is only allowed by nonzero constants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Zero};

use super::algnum::AlgNum;
use super::expr::{Monomial, Scalar};
use super::ScalarError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ScalarError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() || c == '.' => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                out.push((Tok::Num(parse_decimal(&lit, start)?), start));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), start));
                continue;
            }
            other => {
                return Err(ScalarError::Syntax {
                    position: start,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

fn parse_decimal(lit: &str, position: usize) -> Result<BigRational, ScalarError> {
    let bad = || ScalarError::Syntax { position, message: format!("malformed number '{lit}'") };
    match lit.split_once('.') {
        None => BigInt::from_str_radix(lit, 10).map(BigRational::from_integer).map_err(|_| bad()),
        Some((int, frac)) => {
            if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
                return Err(bad());
            }
            let digits = format!("{int}{frac}");
            let n = BigInt::from_str_radix(&digits, 10).map_err(|_| bad())?;
            let d = num_traits::pow(BigInt::from(10), frac.len());
            Ok(BigRational::new(n, d))
        }
    }
}

pub(crate) struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &str, names: &'a [String]) -> Result<Self, ScalarError> {
        Ok(Parser { toks: tokenize(text)?, pos: 0, end: text.chars().count(), names })
    }

    pub(crate) fn parse_all(mut self) -> Result<Scalar, ScalarError> {
        if self.toks.is_empty() {
            return Err(ScalarError::Syntax { position: 0, message: "empty expression".into() });
        }
        let s = self.expr()?;
        if let Some((t, p)) = self.toks.get(self.pos) {
            return Err(ScalarError::Syntax { position: *p, message: format!("unexpected token {t:?}") });
        }
        Ok(s)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ScalarError> {
        let position = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(ScalarError::Syntax { position, message: format!("expected {what}") }),
        }
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc * self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let position = self.here();
                    let rhs = self.unary()?;
                    let inv = rhs
                        .as_constant()
                        .and_then(|c| c.inverse())
                        .ok_or_else(|| ScalarError::Syntax {
                            position,
                            message: "division is only defined by nonzero constants".into(),
                        })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar, ScalarError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let position = self.here();
            match self.bump() {
                Some(Tok::Num(k)) if k.is_integer() => {
                    let k: u32 = k.to_integer().try_into().map_err(|_| ScalarError::Syntax {
                        position,
                        message: "exponent out of range".into(),
                    })?;
                    return Ok(base.pow(k));
                }
                _ => {
                    return Err(ScalarError::Syntax {
                        position,
                        message: "exponent must be a non-negative integer literal".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar, ScalarError> {
        let position = self.here();
        match self.bump() {
            Some(Tok::Num(q)) => Ok(Scalar::constant(AlgNum::from_rational(q))),
            Some(Tok::LParen) => {
                let s = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(s)
            }
            Some(Tok::Ident(name)) if name == "sqrt2" => Ok(Scalar::constant(AlgNum::sqrt2())),
            Some(Tok::Ident(name)) if name == "exp" => {
                self.expect(Tok::LParen, "'(' after exp")?;
                let arg_pos = self.here();
                let arg = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                exp_of_linear_form(&arg, arg_pos)
            }
            Some(Tok::Ident(name)) => {
                if self.names.contains(&name) {
                    Ok(Scalar::variable(&name))
                } else {
                    Err(ScalarError::UnknownCoordinate { name, position })
                }
            }
            Some(t) => Err(ScalarError::Syntax { position, message: format!("unexpected token {t:?}") }),
            None => Err(ScalarError::Syntax { position, message: "unexpected end of input".into() }),
        }
    }
}

fn exp_of_linear_form(arg: &Scalar, position: usize) -> Result<Scalar, ScalarError> {
    let mut out = Scalar::one();
    for (e, c) in arg.terms() {
        if e.is_constant() {
            return Err(ScalarError::Syntax {
                position,
                message: "exp argument must not contain a nonzero constant term".into(),
            });
        }
        let linear = e.rates().is_empty() && e.powers().len() == 1 && e.degree() == 1;
        if !linear {
            return Err(ScalarError::Syntax {
                position,
                message: "exp argument must be linear in the coordinates".into(),
            });
        }
        let rate = c.to_rational().ok_or(ScalarError::NonRationalRate { position })?;
        let coord = e.powers().keys().next().unwrap();
        debug_assert!(!rate.is_zero());
        out = out * Scalar::from_monomial(Monomial::exp(coord, rate));
    }
    Ok(out)
}
