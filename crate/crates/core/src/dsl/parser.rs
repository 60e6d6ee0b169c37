use thiserror::Error;

use crate::expr::{AlgebraExpr, Atom};
use crate::nccw::{NccwComplex, NccwStage};
use crate::spaces::SpaceExpr;

/// Nested constructors beyond this depth are rejected instead of recursing further.
pub const MAX_NESTING: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at column {} (expected {})", .offset + 1, .expected.join(" | "))]
pub struct ParseError {
    /// Byte offset into the source, `0..=len`.
    pub offset: usize,
    pub expected: Vec<String>,
    pub message: String,
}

impl ParseError {
    /// 1-based column of [`ParseError::offset`].
    pub fn column(&self) -> usize {
        self.offset + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(u32),
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Star,
    Oplus,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Nat(n) => format!("number {n}"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Star => "`*`".into(),
            Tok::Oplus => "`(+)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    peeked: Option<(usize, Tok, usize)>,
    depth: usize,
}

const ALGEBRA_START: &[&str] = &[
    "C",
    "F(",
    "M(",
    "Cx(",
    "pullback(",
    "ext(",
    "limit(",
    "nccw(",
    "AF",
    "rot",
    "cuntz(",
    "Oinf",
    "kirchberg_ibn",
    "pis_corner",
    "zstable(",
    "rr0(",
    "(",
];

const SPACE_START: &[&str] = &[
    "pt", "S(", "T(", "D(", "I(", "prod(", "wedge(", "susp(", "cw(",
];

fn expected(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            pos: 0,
            peeked: None,
            depth: 0,
        }
    }

    fn skip_ws(&self, mut at: usize) -> usize {
        let bytes = self.src.as_bytes();
        while at < bytes.len() && bytes[at].is_ascii_whitespace() {
            at += 1;
        }
        at
    }

    /// Lex one token starting at `self.pos`: `(start, token, end)`.
    fn lex(&self) -> Result<(usize, Tok, usize), ParseError> {
        let bytes = self.src.as_bytes();
        let start = self.skip_ws(self.pos);
        let Some(&c) = bytes.get(start) else {
            return Ok((start, Tok::Eof, start));
        };
        let single = |t: Tok| Ok((start, t, start + 1));
        match c {
            b'(' => {
                let plus = self.skip_ws(start + 1);
                if bytes.get(plus) == Some(&b'+') {
                    let close = self.skip_ws(plus + 1);
                    if bytes.get(close) == Some(&b')') {
                        return Ok((start, Tok::Oplus, close + 1));
                    }
                    return Err(ParseError {
                        offset: close,
                        expected: expected(&[")"]),
                        message: "unterminated `(+)`".into(),
                    });
                }
                single(Tok::LParen)
            }
            b')' => single(Tok::RParen),
            b',' => single(Tok::Comma),
            b';' => single(Tok::Semi),
            b':' => single(Tok::Colon),
            b'*' => single(Tok::Star),
            b'0'..=b'9' => {
                let mut end = start;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                let n = self.src[start..end]
                    .parse::<u32>()
                    .map_err(|_| ParseError {
                        offset: start,
                        expected: expected(&["number below 2^32"]),
                        message: "number too large".into(),
                    })?;
                Ok((start, Tok::Nat(n), end))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = start;
                while end < bytes.len()
                    && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
                {
                    end += 1;
                }
                Ok((start, Tok::Ident(self.src[start..end].to_string()), end))
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap_or('?');
                Err(ParseError {
                    offset: start,
                    expected: vec![],
                    message: format!("unexpected character {ch:?}"),
                })
            }
        }
    }

    fn peek(&mut self) -> Result<(usize, Tok), ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex()?);
        }
        let (start, tok, _) = self.peeked.clone().expect("just filled");
        Ok((start, tok))
    }

    fn bump(&mut self) -> Result<(usize, Tok), ParseError> {
        self.peek()?;
        let (start, tok, end) = self.peeked.take().expect("peeked");
        self.pos = end;
        Ok((start, tok))
    }

    fn fail<T>(&mut self, what: Vec<String>) -> Result<T, ParseError> {
        let (offset, tok) = self.peek()?;
        let message = match tok {
            Tok::Eof => "unexpected end of input".to_string(),
            other => format!("unexpected {}", other.describe()),
        };
        Err(ParseError {
            offset,
            expected: what,
            message,
        })
    }

    fn expect(&mut self, want: Tok, label: &str) -> Result<(), ParseError> {
        if self.peek()?.1 == want {
            self.bump()?;
            Ok(())
        } else {
            self.fail(expected(&[label]))
        }
    }

    fn nat(&mut self, min: u32, what: &str) -> Result<u32, ParseError> {
        match self.peek()? {
            (at, Tok::Nat(n)) => {
                if n < min {
                    return Err(ParseError {
                        offset: at,
                        expected: expected(&[what]),
                        message: format!("{n} is below the minimum {min}"),
                    });
                }
                self.bump()?;
                Ok(n)
            }
            _ => self.fail(expected(&[what])),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            let (offset, _) = self.peek()?;
            return Err(ParseError {
                offset,
                expected: vec![],
                message: format!("nesting deeper than {MAX_NESTING}"),
            });
        }
        Ok(())
    }

    fn algebra(&mut self) -> Result<AlgebraExpr, ParseError> {
        self.enter()?;
        let mut acc = self.primary()?;
        while self.peek()?.1 == Tok::Oplus {
            self.bump()?;
            let rhs = self.primary()?;
            acc = AlgebraExpr::direct_sum(acc, rhs);
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn blocks(&mut self) -> Result<Vec<u32>, ParseError> {
        let mut out = vec![self.nat(1, "block size >= 1")?];
        while self.peek()?.1 == Tok::Comma {
            self.bump()?;
            out.push(self.nat(1, "block size >= 1")?);
        }
        self.expect(Tok::RParen, ")")?;
        Ok(out)
    }

    fn keyword_blocks(&mut self) -> Result<Vec<u32>, ParseError> {
        match self.peek()? {
            (_, Tok::Ident(name)) if name == "F" => {
                self.bump()?;
                self.expect(Tok::LParen, "(")?;
                self.blocks()
            }
            _ => self.fail(expected(&["F("])),
        }
    }

    fn nccw(&mut self) -> Result<NccwComplex, ParseError> {
        let base = self.keyword_blocks()?;
        let mut stages = Vec::new();
        while self.peek()?.1 == Tok::Semi {
            self.bump()?;
            let dim = self.nat(1, "stage dimension >= 1")?;
            self.expect(Tok::Colon, ":")?;
            let blocks = self.keyword_blocks()?;
            stages.push(NccwStage { dim, blocks });
        }
        self.expect(Tok::RParen, ")")?;
        Ok(NccwComplex { base, stages })
    }

    fn call_algebra(&mut self) -> Result<AlgebraExpr, ParseError> {
        self.expect(Tok::LParen, "(")?;
        let a = self.algebra()?;
        self.expect(Tok::RParen, ")")?;
        Ok(a)
    }

    fn primary(&mut self) -> Result<AlgebraExpr, ParseError> {
        self.enter()?;
        let (_, tok) = self.peek()?;
        let name = match tok {
            Tok::LParen => {
                self.bump()?;
                let inner = self.algebra()?;
                self.expect(Tok::RParen, ")")?;
                self.depth -= 1;
                return Ok(inner);
            }
            Tok::Ident(name) => name,
            _ => return self.fail(expected(ALGEBRA_START)),
        };
        let takes_args = !matches!(
            name.as_str(),
            "C" | "AF" | "rot" | "Oinf" | "kirchberg_ibn" | "pis_corner"
        );
        if !ALGEBRA_START
            .iter()
            .any(|k| k.trim_end_matches('(') == name)
        {
            return self.fail(expected(ALGEBRA_START));
        }
        self.bump()?;
        if takes_args && name != "zstable" && name != "rr0" {
            self.expect(Tok::LParen, "(")?;
        }
        let out = match name.as_str() {
            "C" => AlgebraExpr::Scalars,
            "AF" => AlgebraExpr::Atom(Atom::SimpleInfDimAf),
            "rot" => AlgebraExpr::Atom(Atom::IrrationalRotation),
            "Oinf" => AlgebraExpr::Atom(Atom::CuntzInfinity),
            "kirchberg_ibn" => AlgebraExpr::Atom(Atom::KirchbergIbn),
            "pis_corner" => AlgebraExpr::Atom(Atom::PurelyInfiniteSimpleCorner),
            "F" => AlgebraExpr::FiniteDim(self.blocks()?),
            "M" => {
                let n = self.nat(1, "matrix size >= 1")?;
                self.expect(Tok::Comma, ",")?;
                let a = self.algebra()?;
                self.expect(Tok::RParen, ")")?;
                AlgebraExpr::matrix(n, a)
            }
            "Cx" => {
                let x = self.space()?;
                self.expect(Tok::RParen, ")")?;
                let a = if self.peek()?.1 == Tok::Star {
                    self.bump()?;
                    self.primary()?
                } else {
                    AlgebraExpr::Scalars
                };
                AlgebraExpr::tensor(x, a)
            }
            "pullback" => {
                let b = self.algebra()?;
                self.expect(Tok::Comma, ",")?;
                let c = self.algebra()?;
                self.expect(Tok::Semi, ";")?;
                let d = self.algebra()?;
                self.expect(Tok::RParen, ")")?;
                AlgebraExpr::pullback(b, c, d)
            }
            "ext" => {
                let j = self.algebra()?;
                self.expect(Tok::Comma, ",")?;
                let b = self.algebra()?;
                self.expect(Tok::RParen, ")")?;
                AlgebraExpr::extension(j, b)
            }
            "limit" => {
                let mut parts = vec![self.algebra()?];
                while self.peek()?.1 == Tok::Comma {
                    self.bump()?;
                    parts.push(self.algebra()?);
                }
                self.expect(Tok::RParen, ")")?;
                AlgebraExpr::Limit(parts)
            }
            "nccw" => AlgebraExpr::Nccw(self.nccw()?),
            "cuntz" => {
                let n = self.nat(2, "cuntz index >= 2")?;
                self.expect(Tok::RParen, ")")?;
                AlgebraExpr::Atom(Atom::Cuntz(n))
            }
            "zstable" => AlgebraExpr::Atom(Atom::JiangSuStable(Box::new(self.call_algebra()?))),
            "rr0" => AlgebraExpr::Atom(Atom::RealRankZero(Box::new(self.call_algebra()?))),
            _ => unreachable!("checked against ALGEBRA_START"),
        };
        self.depth -= 1;
        Ok(out)
    }

    fn space(&mut self) -> Result<SpaceExpr, ParseError> {
        self.enter()?;
        let name = match self.peek()? {
            (_, Tok::Ident(name))
                if SPACE_START.iter().any(|k| k.trim_end_matches('(') == name) =>
            {
                name
            }
            _ => return self.fail(expected(SPACE_START)),
        };
        self.bump()?;
        if name == "pt" {
            self.depth -= 1;
            return Ok(SpaceExpr::Pt);
        }
        self.expect(Tok::LParen, "(")?;
        let out = match name.as_str() {
            "S" => SpaceExpr::Sphere(self.nat(0, "dimension")?),
            "T" => SpaceExpr::Torus(self.nat(1, "dimension >= 1")?),
            "D" => SpaceExpr::Disk(self.nat(1, "dimension >= 1")?),
            "I" => SpaceExpr::Cube(self.nat(1, "dimension >= 1")?),
            "cw" => SpaceExpr::CwSkeleton(self.nat(0, "dimension")?),
            "susp" => SpaceExpr::susp(self.space()?),
            "prod" | "wedge" => {
                let a = self.space()?;
                self.expect(Tok::Comma, ",")?;
                let b = self.space()?;
                if name == "prod" {
                    SpaceExpr::prod(a, b)
                } else {
                    SpaceExpr::wedge(a, b)
                }
            }
            _ => unreachable!("checked against SPACE_START"),
        };
        self.expect(Tok::RParen, ")")?;
        self.depth -= 1;
        Ok(out)
    }
}

/// Parse an algebra expression.
pub fn parse(src: &str) -> Result<AlgebraExpr, ParseError> {
    let mut p = Parser::new(src);
    let e = p.algebra()?;
    match p.peek()? {
        (_, Tok::Eof) => Ok(e),
        _ => p.fail(expected(&["(+)", "end of input"])),
    }
}

/// Parse a space expression on its own.
pub fn parse_space(src: &str) -> Result<SpaceExpr, ParseError> {
    let mut p = Parser::new(src);
    let x = p.space()?;
    match p.peek()? {
        (_, Tok::Eof) => Ok(x),
        _ => p.fail(expected(&["end of input"])),
    }
}
