//! Text front-end for characteristic classes.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' uint)?
//! atom   := rational | var | basis | '(' expr ')'
//! basis  := 's[' uint (',' uint)* ']' | ('e' | 'p' | 'h') uint
//! var    := ('z' | 't') uint
//! rational := uint ('/' uint)?
//! ```
//!
//! `t` variables are accepted so that every polynomial printed by the engine
//! parses back; a characteristic class itself may only use `z1..zn`.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::{MultiPoly, Rat, VarClass, VarId};
use crate::pushforward::{CharClass, PushforwardError};
use crate::symfun::{elementary_power_complete, schur_bialternant, BasisKind, Partition, SymfunError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("variable {var} is out of range for n = {n}")]
    IndexOutOfRange { var: String, n: usize },
    #[error("s[{0}] is not a partition (parts must be weakly decreasing)")]
    NonPartition(String),
    #[error("partition has {parts} nonzero parts but n = {n}")]
    TooManyParts { parts: usize, n: usize },
    #[error("class is not symmetric in z1..z{0}")]
    NotSymmetric(usize),
    #[error("a characteristic class may only involve z1..z{n}, found {var}")]
    ForeignVariable { var: VarId, n: usize },
    #[error("rank must be at least 1")]
    ZeroRank,
}

/// Parsed class expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassExpr {
    Const(Rat),
    Var(VarId),
    Schur(Vec<u32>),
    Basis(BasisKind, u32),
    Neg(Box<ClassExpr>),
    Add(Box<ClassExpr>, Box<ClassExpr>),
    Sub(Box<ClassExpr>, Box<ClassExpr>),
    Mul(Box<ClassExpr>, Box<ClassExpr>),
    Pow(Box<ClassExpr>, u32),
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpr::Const(c) => write!(f, "{c}"),
            ClassExpr::Var(v) => write!(f, "{v}"),
            ClassExpr::Schur(parts) => {
                let s: Vec<String> = parts.iter().map(u32::to_string).collect();
                write!(f, "s[{}]", s.join(","))
            }
            ClassExpr::Basis(kind, k) => {
                let c = match kind {
                    BasisKind::Elementary => 'e',
                    BasisKind::PowerSum => 'p',
                    BasisKind::Complete => 'h',
                };
                write!(f, "{c}{k}")
            }
            ClassExpr::Neg(a) => write!(f, "-({a})"),
            ClassExpr::Add(a, b) => write!(f, "({a} + {b})"),
            ClassExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            ClassExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            ClassExpr::Pow(a, e) => write!(f, "({a})^{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(char, Option<u32>),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

fn syntax(pos: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        pos,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |mut j: usize| {
        let start = j;
        while j < chars.len() && chars[j].1.is_ascii_digit() {
            j += 1;
        }
        (start, j)
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '/' => Some(Tok::Slash),
            ',' => Some(Tok::Comma),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((pos, t));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let (s, e) = digits(i);
            let lit: String = chars[s..e].iter().map(|&(_, ch)| ch).collect();
            out.push((pos, Tok::Int(lit.parse().expect("digits"))));
            i = e;
        } else if matches!(c, 'z' | 't' | 's' | 'e' | 'p' | 'h') {
            let (s, e) = digits(i + 1);
            let index = if s == e {
                None
            } else {
                let lit: String = chars[s..e].iter().map(|&(_, ch)| ch).collect();
                Some(lit.parse::<u32>().map_err(|_| syntax(chars[s].0, "index too large"))?)
            };
            if e < chars.len() && chars[e].1.is_alphanumeric() {
                return Err(syntax(chars[e].0, format!("unexpected character '{}'", chars[e].1)));
            }
            out.push((pos, Tok::Ident(c, index)));
            i = e;
        } else {
            return Err(syntax(pos, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    n: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(syntax(pos, format!("expected {what}"))),
        }
    }

    fn uint(&mut self, what: &str) -> Result<u32, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(v)) => u32::try_from(&v).map_err(|_| syntax(pos, format!("{what} too large"))),
            _ => Err(syntax(pos, format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<ClassExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = ClassExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = ClassExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ClassExpr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            lhs = ClassExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ClassExpr, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(ClassExpr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<ClassExpr, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let e = self.uint("nonnegative integer exponent")?;
            return Ok(ClassExpr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ClassExpr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(num)) => {
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Int(d)) if d != BigInt::from(0) => Ok(ClassExpr::Const(Rat::new(num, d))),
                        Some(Tok::Int(_)) => Err(syntax(dpos, "zero denominator")),
                        _ => Err(syntax(dpos, "expected denominator")),
                    }
                } else {
                    Ok(ClassExpr::Const(Rat::from_int(num)))
                }
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Ident('s', None)) => self.schur(),
            Some(Tok::Ident(c @ ('z' | 't'), Some(k))) => {
                let class = if c == 'z' { VarClass::Z } else { VarClass::T };
                VarId::checked(class, k, self.n)
                    .map(ClassExpr::Var)
                    .map_err(|_| ParseError::IndexOutOfRange {
                        var: format!("{c}{k}"),
                        n: self.n,
                    })
            }
            Some(Tok::Ident(c @ ('e' | 'p' | 'h'), Some(k))) => {
                let kind = match c {
                    'e' => BasisKind::Elementary,
                    'p' => BasisKind::PowerSum,
                    _ => BasisKind::Complete,
                };
                Ok(ClassExpr::Basis(kind, k))
            }
            Some(Tok::Ident(c, _)) => Err(syntax(pos, format!("malformed atom starting with '{c}'"))),
            Some(_) => Err(syntax(pos, "expected a number, variable, basis element or '('")),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }

    fn schur(&mut self) -> Result<ClassExpr, ParseError> {
        self.expect(Tok::LBracket, "'[' after 's'")?;
        let start = self.pos();
        let mut parts = vec![self.uint("partition part")?];
        while let Some(Tok::Comma) = self.peek() {
            self.bump();
            parts.push(self.uint("partition part")?);
        }
        let stop = self.pos();
        self.expect(Tok::RBracket, "',' or ']'")?;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(ParseError::NonPartition(self.text[start..stop].trim().to_string()));
        }
        Ok(ClassExpr::Schur(parts))
    }
}

/// Parses `text` into a class expression over variables with index at most
/// `n`.
pub fn parse_class_expr(text: &str, n: usize) -> Result<ClassExpr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        n,
        text,
    };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Evaluates an expression to a polynomial, expanding basis atoms in
/// `z1..zn`.
pub fn elaborate_poly(expr: &ClassExpr, n: usize) -> Result<MultiPoly, ParseError> {
    let zs = VarId::zs(n);
    Ok(match expr {
        ClassExpr::Const(c) => MultiPoly::constant(c.clone()),
        ClassExpr::Var(v) => MultiPoly::var(*v),
        ClassExpr::Schur(parts) => {
            let lambda = Partition::new(parts, n).map_err(|e| match e {
                SymfunError::TooManyParts { parts, n } => ParseError::TooManyParts {
                    parts: parts.iter().filter(|&&p| p > 0).count(),
                    n,
                },
                _ => ParseError::NonPartition(format!("{parts:?}")),
            })?;
            schur_bialternant(&lambda, &zs)
        }
        ClassExpr::Basis(kind, k) => elementary_power_complete(*k, *kind, &zs),
        ClassExpr::Neg(a) => -elaborate_poly(a, n)?,
        ClassExpr::Add(a, b) => elaborate_poly(a, n)? + elaborate_poly(b, n)?,
        ClassExpr::Sub(a, b) => elaborate_poly(a, n)? - elaborate_poly(b, n)?,
        ClassExpr::Mul(a, b) => elaborate_poly(a, n)? * elaborate_poly(b, n)?,
        ClassExpr::Pow(a, e) => elaborate_poly(a, n)?.pow(*e),
    })
}

/// Evaluates an expression and checks that it is a symmetric polynomial in
/// `z1..zn`.
pub fn elaborate(expr: &ClassExpr, n: usize) -> Result<CharClass, ParseError> {
    let phi = elaborate_poly(expr, n)?;
    CharClass::new(phi, n).map_err(|e| match e {
        PushforwardError::NotSymmetric(n) => ParseError::NotSymmetric(n),
        PushforwardError::ForeignVariable { var, n } => ParseError::ForeignVariable { var, n },
        _ => ParseError::ZeroRank,
    })
}

/// Parses and elaborates in one step.
pub fn parse_class(text: &str, n: usize) -> Result<CharClass, ParseError> {
    elaborate(&parse_class_expr(text, n)?, n)
}

/// Parses a partition written as `2,1`, `(2,1)` or `[2,1]`, padded to `n`
/// parts.
pub fn parse_partition(text: &str, n: usize) -> Result<Partition, ParseError> {
    let body = text.trim();
    let body = body
        .strip_prefix('(')
        .and_then(|b| b.strip_suffix(')'))
        .or_else(|| body.strip_prefix('[').and_then(|b| b.strip_suffix(']')))
        .unwrap_or(body);
    let mut parts = Vec::new();
    if !body.trim().is_empty() {
        for piece in body.split(',') {
            let piece = piece.trim();
            let offset = piece.as_ptr() as usize - text.as_ptr() as usize;
            parts.push(
                piece
                    .parse::<u32>()
                    .map_err(|_| syntax(offset, "expected a nonnegative integer part"))?,
            );
        }
    }
    Partition::new(&parts, n).map_err(|e| match e {
        SymfunError::TooManyParts { parts, n } => ParseError::TooManyParts {
            parts: parts.iter().filter(|&&p| p > 0).count(),
            n,
        },
        _ => ParseError::NonPartition(body.to_string()),
    })
}

/// Canonical text form: terms in descending graded-lex order, explicit `*`
/// and `^`.
pub fn format_poly(p: &MultiPoly) -> String {
    p.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: u32) -> MultiPoly {
        MultiPoly::z(i)
    }

    #[test]
    fn schur_atom_matches_explicit_product() {
        let e = parse_class_expr("s[2,1]", 2).unwrap();
        assert_eq!(e, ClassExpr::Schur(vec![2, 1]));
        let a = elaborate_poly(&e, 2).unwrap();
        let b = elaborate_poly(&parse_class_expr("z1*z2*(z1+z2)", 2).unwrap(), 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, &(&z(1) * &z(2)) * &(&z(1) + &z(2)));
    }

    #[test]
    fn basis_atoms() {
        assert_eq!(*parse_class("e2", 2).unwrap().poly(), &z(1) * &z(2));
        let sq = (&z(1) + &z(2)).pow(2);
        assert_eq!(*parse_class("p2 + 2*e2", 2).unwrap().poly(), sq);
        assert_eq!(*parse_class("h2 - e1^2 + e2", 2).unwrap().poly(), MultiPoly::zero());
    }

    #[test]
    fn rejections() {
        assert_eq!(
            parse_class_expr("s[1,2]", 2),
            Err(ParseError::NonPartition("1,2".into()))
        );
        assert_eq!(parse_class("z1", 2).unwrap_err(), ParseError::NotSymmetric(2));
        assert!(matches!(
            parse_class_expr("z3", 2),
            Err(ParseError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            parse_class_expr("z0", 2),
            Err(ParseError::IndexOutOfRange { .. })
        ));
        assert_eq!(
            parse_class("s[1,1,1]", 2).unwrap_err(),
            ParseError::TooManyParts { parts: 3, n: 2 }
        );
        assert!(matches!(parse_class("t1", 2), Err(ParseError::ForeignVariable { .. })));
    }

    #[test]
    fn syntax_error_positions() {
        let pos = |s: &str| match parse_class_expr(s, 3) {
            Err(ParseError::Syntax { pos, .. }) => pos,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(pos("z1 +"), 4);
        assert_eq!(pos("z1 ** z2"), 4);
        assert_eq!(pos("(z1"), 3);
        assert_eq!(pos("z1 $ z2"), 3);
        assert_eq!(pos("z1^-1"), 3);
        assert_eq!(pos("x1"), 0);
        assert_eq!(pos("z1 z2"), 3);
        assert_eq!(pos("1/0"), 2);
        assert_eq!(pos("s[]"), 2);
        assert_eq!(pos("zz"), 1);
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let p = elaborate_poly(&parse_class_expr("-z1^2", 1).unwrap(), 1).unwrap();
        assert_eq!(p, -z(1).pow(2));
        let q = elaborate_poly(&parse_class_expr("--3/6", 1).unwrap(), 1).unwrap();
        assert_eq!(q, MultiPoly::constant(Rat::new(1, 2)));
    }

    #[test]
    fn formatting() {
        let two_t1t2 = (&MultiPoly::t(1) * &MultiPoly::t(2)).scale(&Rat::from(2));
        assert_eq!(format_poly(&two_t1t2), "2*t1*t2");
        assert_eq!(format_poly(&MultiPoly::zero()), "0");
        assert_eq!(format_poly(&(&MultiPoly::t(2) - &MultiPoly::t(1))), "t2 - t1");
    }

    #[test]
    fn formatted_output_parses_back() {
        let p = &(&MultiPoly::t(1).pow(3) - &MultiPoly::t(2).scale(&Rat::new(-5, 3))) + &MultiPoly::int(-7);
        let back = elaborate_poly(&parse_class_expr(&format_poly(&p), 2).unwrap(), 2).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn partitions() {
        assert_eq!(parse_partition("2,1", 3).unwrap().parts(), &[2, 1, 0]);
        assert_eq!(parse_partition("(2, 1)", 2).unwrap().parts(), &[2, 1]);
        assert_eq!(parse_partition("[]", 2).unwrap().parts(), &[0, 0]);
        assert!(matches!(parse_partition("1,2", 2), Err(ParseError::NonPartition(_))));
        assert!(matches!(
            parse_partition("1,x", 2),
            Err(ParseError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_partition("1,1,1", 2),
            Err(ParseError::TooManyParts { .. })
        ));
    }
}
