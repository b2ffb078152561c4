//! Tokenizer and Pratt parser.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{BinOp, Expr, Func};

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    /// Unexpected token; `expected` lists what would have been accepted.
    Syntax {
        expected: Vec<&'static str>,
        found: String,
    },
    UnknownIdentifier(String),
    NonAscii,
    BadNumber(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: ", self.offset)?;
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => {
                if expected.as_slice() == EXPR_START {
                    write!(f, "expected expression, found {found}")
                } else {
                    write!(f, "expected one of {}, found {found}", expected.join(", "))
                }
            }
            ParseErrorKind::UnknownIdentifier(name) => write!(f, "unknown identifier `{name}`"),
            ParseErrorKind::NonAscii => f.write_str("non-ASCII input"),
            ParseErrorKind::BadNumber(text) => write!(f, "malformed number `{text}`"),
        }
    }
}

impl core::error::Error for ParseError {}

const EXPR_START: &[&str] = &["number", "`x`", "function call", "`(`", "`-`"];
const AFTER_OPERAND: &[&str] = &["operator", "end of input"];

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok<'a> {
    Num(f64),
    Ident(&'a str),
    Op(BinOp),
    LParen,
    RParen,
    Comma,
    Eof,
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => alloc::format!("number {v}"),
            Tok::Ident(name) => alloc::format!("`{name}`"),
            Tok::Op(op) => alloc::format!("`{}`", op.symbol()),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next_token(&mut self) -> Result<(usize, Tok<'a>), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(start) else {
            return Ok((start, Tok::Eof));
        };
        let single = |tok| (start, tok);
        let tok = match c {
            b'+' => single(Tok::Op(BinOp::Add)),
            b'-' => single(Tok::Op(BinOp::Sub)),
            b'*' => single(Tok::Op(BinOp::Mul)),
            b'/' => single(Tok::Op(BinOp::Div)),
            b'^' => single(Tok::Op(BinOp::Pow)),
            b'(' => single(Tok::LParen),
            b')' => single(Tok::RParen),
            b',' => single(Tok::Comma),
            b'0'..=b'9' | b'.' => return self.number(),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = start;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                    end += 1;
                }
                self.pos = end;
                return Ok((start, Tok::Ident(&self.src[start..end])));
            }
            c if !c.is_ascii() => return Err(ParseError { offset: start, kind: ParseErrorKind::NonAscii }),
            _ => {
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::Syntax {
                        expected: EXPR_START.to_vec(),
                        found: alloc::format!("`{}`", c as char),
                    },
                })
            }
        };
        self.pos += 1;
        Ok(tok)
    }

    fn number(&mut self) -> Result<(usize, Tok<'a>), ParseError> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let mut end = start;
        let digits = |mut i: usize| {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            i
        };
        end = digits(end);
        if end < bytes.len() && bytes[end] == b'.' {
            end = digits(end + 1);
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut exp = end + 1;
            if exp < bytes.len() && (bytes[exp] == b'+' || bytes[exp] == b'-') {
                exp += 1;
            }
            let after = digits(exp);
            if after > exp {
                end = after;
            }
        }
        self.pos = end;
        let text = &self.src[start..end];
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok((start, Tok::Num(v))),
            _ => Err(ParseError { offset: start, kind: ParseErrorKind::BadNumber(text.to_string()) }),
        }
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: (usize, Tok<'a>),
}

const UNARY_BP: u8 = 5;

fn binding_power(op: BinOp) -> (u8, u8) {
    match op {
        BinOp::Add | BinOp::Sub => (1, 2),
        BinOp::Mul | BinOp::Div => (3, 4),
        // Right-associative.
        BinOp::Pow => (8, 7),
    }
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<(usize, Tok<'a>), ParseError> {
        let next = self.lexer.next_token()?;
        Ok(core::mem::replace(&mut self.peeked, next))
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset: self.peeked.0,
            kind: ParseErrorKind::Syntax { expected: expected.to_vec(), found: self.peeked.1.describe() },
        }
    }

    fn expect(&mut self, tok: Tok<'static>, name: &'static str) -> Result<(), ParseError> {
        if self.peeked.1 == tok {
            self.advance()?;
            Ok(())
        } else {
            Err(self.unexpected(&[name]))
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.prefix()?;
        while let Tok::Op(op) = self.peeked.1 {
            let (lbp, rbp) = binding_power(op);
            if lbp < min_bp {
                break;
            }
            self.advance()?;
            let rhs = self.expr(rbp)?;
            lhs = Expr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expr, ParseError> {
        let (offset, tok) = self.peeked;
        match tok {
            Tok::Num(v) => {
                self.advance()?;
                Ok(Expr::Lit(v))
            }
            Tok::Op(BinOp::Sub) => {
                self.advance()?;
                Ok(Expr::negate(self.expr(UNARY_BP)?))
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.expr(0)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident("x") => {
                self.advance()?;
                Ok(Expr::Var)
            }
            Tok::Ident(name) => {
                let func = Func::from_name(name);
                if func.is_none() && name != "pow" {
                    return Err(ParseError { offset, kind: ParseErrorKind::UnknownIdentifier(name.to_string()) });
                }
                self.advance()?;
                self.expect(Tok::LParen, "`(`")?;
                let first = self.expr(0)?;
                let node = match func {
                    Some(f) => Expr::call(f, first),
                    None => {
                        self.expect(Tok::Comma, "`,`")?;
                        let second = self.expr(0)?;
                        Expr::bin(BinOp::Pow, first, second)
                    }
                };
                self.expect(Tok::RParen, "`)`")?;
                Ok(node)
            }
            _ => Err(self.unexpected(EXPR_START)),
        }
    }
}

/// Parses an ASCII expression in the variable `x`.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    if let Some(pos) = text.bytes().position(|b| !b.is_ascii()) {
        return Err(ParseError { offset: pos, kind: ParseErrorKind::NonAscii });
    }
    let mut lexer = Lexer { src: text, pos: 0 };
    let first = lexer.next_token()?;
    let mut parser = Parser { lexer, peeked: first };
    let e = parser.expr(0)?;
    if parser.peeked.1 != Tok::Eof {
        return Err(parser.unexpected(AFTER_OPERAND));
    }
    Ok(e)
}
