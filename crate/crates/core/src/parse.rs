//! Recursive-descent parser for rational-function and rational literals.
//!
//! Grammar (whitespace ignored, `x` is the only variable):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary | power)*     // juxtaposition multiplies: 2x, 3(x+1)
//! unary   := ('+' | '-') unary | power
//! power   := primary ('^' '-'? integer)?
//! primary := integer | 'x' | '(' expr ')'
//! ```
//!
//! Literals are exact: `2/3` is the rational two thirds. Decimal points are
//! rejected so no float ever leaks into an exact computation.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::ratfun::{BigRat, RatFun, RatFunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at offset {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected {found} at offset {pos}, expected {expected}")]
    Unexpected {
        found: String,
        expected: &'static str,
        pos: usize,
    },
    #[error("exponent too large at offset {pos}")]
    Exponent { pos: usize },
    #[error("expression is not a constant: {0}")]
    NotConstant(String),
    #[error(transparent)]
    Arith(#[from] RatFunError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number {n}"),
            Tok::X => "'x'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, ch)) = chars.peek() {
        let tok = match ch {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    digits.push(d);
                    chars.next();
                }
                out.push((Tok::Int(digits.parse().expect("ascii digits")), pos));
                continue;
            }
            'x' | 'X' => Tok::X,
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(ParseError::UnexpectedChar { ch, pos }),
        };
        chars.next();
        out.push((tok, pos));
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError::Unexpected {
            found: self.peek().describe(),
            expected,
            pos: self.pos(),
        }
    }

    fn expr(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs)?;
                }
                Tok::Int(_) | Tok::X | Tok::LParen => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFun, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFun, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let pos = self.pos();
        let e = match self.bump() {
            Tok::Int(n) => n.to_u32().filter(|&e| e <= 4096),
            _ => {
                self.at -= 1;
                return Err(self.unexpected("integer exponent"));
            }
        }
        .ok_or(ParseError::Exponent { pos })?;
        let p = base.pow(e);
        if negative {
            Ok(p.recip()?)
        } else {
            Ok(p)
        }
    }

    fn primary(&mut self) -> Result<RatFun, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(RatFun::constant(BigRat::from_integer(n)))
            }
            Tok::X => {
                self.bump();
                Ok(RatFun::x())
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("')'"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("number, 'x' or '('")),
        }
    }
}

/// Parses a rational-function literal such as `"-2x"` or `"(x^2+1)/(3x)"`.
pub fn parse_ratfun(src: &str) -> Result<RatFun, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
    };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("operator or end of input"));
    }
    Ok(out)
}

/// Parses an exact rational literal such as `"-2/3"` or `"5"`.
///
/// Any constant expression is accepted (`"1/2 - 1/3"`), but not one
/// mentioning `x`.
pub fn parse_rational(src: &str) -> Result<BigRat, ParseError> {
    let r = parse_ratfun(src)?;
    r.as_constant()
        .ok_or_else(|| ParseError::NotConstant(src.to_string()))
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &BigRat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact rational from a plain decimal string (`"-0.6"` is `-3/5`).
///
/// Used where inputs are physical energies typed as decimals but the
/// downstream polynomial algebra is exact.
pub fn parse_decimal(src: &str) -> Option<BigRat> {
    let s = src.trim();
    if let Ok(r) = parse_rational(s) {
        return Some(r);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.')?;
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRat::new(digits, scale);
    Some(if neg { -r } else { r })
}
