//! Surface syntax for operator expressions.
//!
//! ```text
//! expr     := signed (('+' | '-') signed)*
//! signed   := '-' signed | product
//! product  := power (['*'] power)*
//! power    := postfix ['^' integer]
//! postfix  := atom "'"*
//! atom     := 'S' | 'T' | 'i' | number ['i'] | '(' expr ')'
//! number   := digits ['.' digits] ['/' digits]
//! ```
//!
//! Juxtaposition is a product, `'` is the adjoint, and literals are exact
//! Gaussian rationals, so `(1-i) T' - 1/2 S'` parses without rounding.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use weakcr_core::ncpoly::{Gen, NCPoly};
use weakcr_core::GaussRational;

const MAX_EXPONENT: u32 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    UnknownIdentifier(String),
    BadNumber(String),
    ExponentTooLarge(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => format!("unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken(t) => format!("unexpected {t}"),
            ParseErrorKind::UnexpectedEnd => "unexpected end of input".to_string(),
            ParseErrorKind::UnknownIdentifier(s) => format!("unknown identifier {s:?}"),
            ParseErrorKind::BadNumber(s) => format!("invalid number {s:?}"),
            ParseErrorKind::ExponentTooLarge(s) => format!("exponent {s} exceeds {MAX_EXPONENT}"),
        };
        write!(f, "syntax error at line {}, column {}: {what}", self.line, self.column)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorExpr {
    Gen(Gen),
    Scalar(GaussRational),
    Neg(Box<OperatorExpr>),
    Add(Box<OperatorExpr>, Box<OperatorExpr>),
    Sub(Box<OperatorExpr>, Box<OperatorExpr>),
    Mul(Box<OperatorExpr>, Box<OperatorExpr>),
    Pow(Box<OperatorExpr>, u32),
    Dagger(Box<OperatorExpr>),
}

impl OperatorExpr {
    /// The polynomial denoted by the expression, without reordering.
    pub fn lower(&self) -> NCPoly {
        match self {
            OperatorExpr::Gen(g) => NCPoly::gen(*g),
            OperatorExpr::Scalar(c) => NCPoly::scalar(c.clone()),
            OperatorExpr::Neg(e) => -e.lower(),
            OperatorExpr::Add(a, b) => a.lower() + b.lower(),
            OperatorExpr::Sub(a, b) => a.lower() - b.lower(),
            OperatorExpr::Mul(a, b) => a.lower() * b.lower(),
            OperatorExpr::Pow(e, k) => e.lower().pow(*k),
            OperatorExpr::Dagger(e) => e.lower().adjoint(),
        }
    }
}

/// Parses and lowers in one step.
pub fn parse_poly(text: &str) -> Result<NCPoly, ParseError> {
    Ok(parse_operator_expr(text)?.lower())
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Gen(Gen),
    Num(BigRational, bool),
    Plus,
    Minus,
    Star,
    Caret,
    Quote,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Gen(g) => format!("generator {g}"),
            Tok::Num(..) => "number".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Quote => "\"'\"".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self, Tok::Gen(_) | Tok::Num(..) | Tok::LParen)
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
    text: String,
}

fn err(kind: ParseErrorKind, line: usize, column: usize) -> ParseError {
    ParseError { kind, line, column }
}

fn digits_value(s: &str) -> BigInt {
    s.parse::<BigInt>().expect("ascii digits")
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let single = |tok: Tok| Spanned {
            tok,
            line: l0,
            column: c0,
            text: c.to_string(),
        };
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '+' => out.push(single(Tok::Plus)),
            '-' => out.push(single(Tok::Minus)),
            '*' => out.push(single(Tok::Star)),
            '^' => out.push(single(Tok::Caret)),
            '\'' => out.push(single(Tok::Quote)),
            '(' => out.push(single(Tok::LParen)),
            ')' => out.push(single(Tok::RParen)),
            c if c.is_ascii_digit() => {
                let start = i;
                let take_digits = |i: &mut usize| {
                    while *i < chars.len() && chars[*i].is_ascii_digit() {
                        *i += 1;
                    }
                };
                take_digits(&mut i);
                let mut value = BigRational::from_integer(digits_value(&chars[start..i].iter().collect::<String>()));
                if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                    let fs = i + 1;
                    i += 1;
                    take_digits(&mut i);
                    let frac: String = chars[fs..i].iter().collect();
                    let den = num_traits::pow(BigInt::from(10), frac.len());
                    value += BigRational::new(digits_value(&frac), den);
                }
                if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                    let ds = i + 1;
                    i += 1;
                    take_digits(&mut i);
                    let den = digits_value(&chars[ds..i].iter().collect::<String>());
                    if den.is_zero() {
                        let s: String = chars[start..i].iter().collect();
                        return Err(err(ParseErrorKind::BadNumber(s), l0, c0));
                    }
                    value /= BigRational::from_integer(den);
                }
                let imaginary =
                    i < chars.len() && chars[i] == 'i' && !chars.get(i + 1).is_some_and(|c| c.is_alphanumeric());
                if imaginary {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Spanned {
                    tok: Tok::Num(value, imaginary),
                    line: l0,
                    column: c0,
                    text,
                });
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "S" => Tok::Gen(Gen::S),
                    "T" => Tok::Gen(Gen::T),
                    "i" => Tok::Num(BigRational::one(), true),
                    _ => return Err(err(ParseErrorKind::UnknownIdentifier(word), l0, c0)),
                };
                col += i - start;
                out.push(Spanned {
                    tok,
                    line: l0,
                    column: c0,
                    text: word,
                });
                continue;
            }
            other => return Err(err(ParseErrorKind::UnexpectedChar(other), l0, c0)),
        }
        i += 1;
        col += 1;
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column: col,
        text: String::new(),
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self) -> ParseError {
        let s = &self.toks[self.pos];
        let kind = match s.tok {
            Tok::End => ParseErrorKind::UnexpectedEnd,
            ref t => ParseErrorKind::UnexpectedToken(t.describe()),
        };
        err(kind, s.line, s.column)
    }

    fn expr(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut lhs = self.signed()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = OperatorExpr::Add(Box::new(lhs), Box::new(self.signed()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = OperatorExpr::Sub(Box::new(lhs), Box::new(self.signed()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn signed(&mut self) -> Result<OperatorExpr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(OperatorExpr::Neg(Box::new(self.signed()?)));
        }
        self.product()
    }

    fn product(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut lhs = self.power()?;
        loop {
            if *self.peek() == Tok::Star {
                self.bump();
            } else if !self.peek().starts_atom() {
                return Ok(lhs);
            }
            lhs = OperatorExpr::Mul(Box::new(lhs), Box::new(self.power()?));
        }
    }

    fn power(&mut self) -> Result<OperatorExpr, ParseError> {
        let base = self.postfix()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.toks[self.pos].clone();
        match at.tok {
            Tok::Num(ref v, false) if v.is_integer() && !at.text.contains(['.', '/']) => {
                self.bump();
                let k = v
                    .to_integer()
                    .to_string()
                    .parse::<u32>()
                    .ok()
                    .filter(|&k| k <= MAX_EXPONENT)
                    .ok_or_else(|| err(ParseErrorKind::ExponentTooLarge(at.text.clone()), at.line, at.column))?;
                Ok(OperatorExpr::Pow(Box::new(base), k))
            }
            Tok::Num(..) => Err(err(ParseErrorKind::BadNumber(at.text), at.line, at.column)),
            _ => Err(self.unexpected()),
        }
    }

    fn postfix(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut e = self.atom()?;
        while *self.peek() == Tok::Quote {
            self.bump();
            e = OperatorExpr::Dagger(Box::new(e));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<OperatorExpr, ParseError> {
        match self.peek().clone() {
            Tok::Gen(g) => {
                self.bump();
                Ok(OperatorExpr::Gen(g))
            }
            Tok::Num(v, imaginary) => {
                self.bump();
                let c = if imaginary {
                    GaussRational::new(BigRational::zero(), v)
                } else {
                    GaussRational::new(v, BigRational::zero())
                };
                Ok(OperatorExpr::Scalar(c))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected());
                }
                self.bump();
                Ok(e)
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse_operator_expr(text: &str) -> Result<OperatorExpr, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected());
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use weakcr_core::ncpoly::{normal_order, Word};

    #[test]
    fn juxtaposition_is_a_word() {
        let p = parse_poly("S T").unwrap();
        assert_eq!(p, NCPoly::word(Word::new(vec![Gen::S, Gen::T])));
    }

    #[test]
    fn precedence() {
        let a = parse_poly("-S T^2 + 2 T'").unwrap();
        let b = parse_poly("(-(S (T T))) + (2 * (T'))").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_poly("S'^2").unwrap(), parse_poly("S' S'").unwrap());
        assert_eq!(parse_poly("(S T)'").unwrap(), parse_poly("T' S'").unwrap());
    }

    #[test]
    fn literals_are_exact() {
        let p = parse_poly("1/2 T + 0.25 S + 2i + (1-i) S'").unwrap();
        assert_eq!(p.to_string(), "1/2 T + 1/4 S + (1-i) S' + 2i");
    }

    #[test]
    fn rearranged_identity_vanishes() {
        assert!(normal_order(&parse_poly("S^2 T - T S^2 - 2 S").unwrap()).is_zero());
    }

    #[test]
    fn trailing_operator_reports_end_column() {
        let e = parse_operator_expr("S T' +").unwrap_err();
        assert_eq!((e.line, e.column, e.kind), (1, 7, ParseErrorKind::UnexpectedEnd));
    }

    #[test]
    fn positions_track_lines() {
        let e = parse_operator_expr("S +\n  X").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("X".into()));
        assert!(matches!(
            parse_operator_expr("S^1/2").unwrap_err().kind,
            ParseErrorKind::BadNumber(_)
        ));
        assert!(matches!(
            parse_operator_expr("1/0").unwrap_err().kind,
            ParseErrorKind::BadNumber(_)
        ));
    }
}
