//! Text grammar for formulas.
//!
//! ```text
//! formula := implies
//! implies := or ( "->" implies )?
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := "~" unary
//!          | "K" name unary
//!          | "Kv" name ( name | "(" name ( "," name )* ")" )
//!          | "[" "!" formula "]" unary
//!          | name "=" value
//!          | "(" formula ")"
//! name    := word | "quoted"
//! value   := integer | word | "quoted"
//! ```
//!
//! `K` and `Kv` are only keywords when not followed by `=`, so they remain
//! usable as attribute names.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::formula::Formula;
use crate::kripke::{KripkeModel, ModelError, Value};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("syntax error at {0}")]
    Syntax(#[from] ParseError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Quoted(String),
    Int(i64),
    Tilde,
    Amp,
    Bar,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Bang,
    Eq,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        use alloc::format;
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Quoted(s) => format!("\"{s}\""),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn error(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut pos = Pos { line: 1, column: 1 };
    let advance = |c: char, pos: &mut Pos| {
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let start = pos;
        if c.is_whitespace() {
            chars.next();
            advance(c, &mut pos);
            continue;
        }
        let single = match c {
            '~' => Some(Tok::Tilde),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '!' => Some(Tok::Bang),
            '=' => Some(Tok::Eq),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            advance(c, &mut pos);
            out.push((tok, start));
            continue;
        }
        if c == '"' {
            chars.next();
            advance(c, &mut pos);
            let mut s = String::new();
            loop {
                match chars.next() {
                    None => return Err(error(start, "unterminated string")),
                    Some('"') => {
                        advance('"', &mut pos);
                        break;
                    }
                    Some('\\') => {
                        advance('\\', &mut pos);
                        match chars.next() {
                            Some(e @ ('"' | '\\')) => {
                                advance(e, &mut pos);
                                s.push(e);
                            }
                            _ => return Err(error(pos, "invalid escape in string")),
                        }
                    }
                    Some(ch) => {
                        advance(ch, &mut pos);
                        s.push(ch);
                    }
                }
            }
            out.push((Tok::Quoted(s), start));
            continue;
        }
        if c == '-' || c.is_ascii_digit() {
            chars.next();
            advance(c, &mut pos);
            if c == '-' && chars.peek() == Some(&'>') {
                chars.next();
                advance('>', &mut pos);
                out.push((Tok::Arrow, start));
                continue;
            }
            let mut digits = String::from(c);
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                digits.push(d);
                chars.next();
                advance(d, &mut pos);
            }
            if digits == "-" {
                return Err(error(start, "expected `->` or a number after `-`"));
            }
            let v = digits
                .parse::<i64>()
                .map_err(|_| error(start, "integer out of range"))?;
            out.push((Tok::Int(v), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut w = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                w.push(d);
                chars.next();
                advance(d, &mut pos);
            }
            out.push((Tok::Word(w), start));
            continue;
        }
        return Err(error(start, alloc::format!("unexpected character `{c}`")));
    }
    out.push((Tok::End, pos));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        error(
            self.pos(),
            alloc::format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Word(_) | Tok::Quoted(_) => match self.bump() {
                Tok::Word(w) | Tok::Quoted(w) => Ok(w),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected(what)),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let keyword = match (self.peek(), self.peek2()) {
            (Tok::Word(w), next) if *next != Tok::Eq && (w == "K" || w == "Kv") => Some(w == "Kv"),
            _ => None,
        };
        if let Some(value_form) = keyword {
            self.bump();
            let agent = self.name("an agent name")?;
            if !value_form {
                let inner = self.unary()?;
                return Ok(Formula::Knows {
                    agent,
                    formula: Box::new(inner),
                });
            }
            let attributes = if *self.peek() == Tok::LParen {
                let open = self.pos();
                self.bump();
                let mut attrs = alloc::vec![self.name("an attribute name")?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    attrs.push(self.name("an attribute name")?);
                }
                if *self.peek() == Tok::End {
                    return Err(error(open, "unclosed `(`"));
                }
                self.expect(Tok::RParen)?;
                attrs
            } else {
                alloc::vec![self.name("an attribute name")?]
            };
            return Ok(Formula::KnowsValue { agent, attributes });
        }
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LBracket => {
                self.bump();
                self.expect(Tok::Bang)?;
                let announcement = self.implies()?;
                self.expect(Tok::RBracket)?;
                let then = self.unary()?;
                Ok(Formula::announce(announcement, then))
            }
            Tok::LParen => {
                let open = self.pos();
                self.bump();
                if *self.peek() == Tok::End {
                    return Err(error(open, "unclosed `(`"));
                }
                let inner = self.implies().map_err(|e| {
                    if *self.peek() == Tok::End {
                        error(open, "unclosed `(`")
                    } else {
                        e
                    }
                })?;
                if *self.peek() == Tok::End {
                    return Err(error(open, "unclosed `(`"));
                }
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Word(_) | Tok::Quoted(_) => {
                let attribute = self.name("an attribute name")?;
                self.expect(Tok::Eq)?;
                let value = match self.bump() {
                    Tok::Int(v) => Value::Int(v),
                    Tok::Word(w) | Tok::Quoted(w) => Value::Str(w),
                    _ => {
                        self.at -= 1;
                        return Err(self.unexpected("a value"));
                    }
                };
                Ok(Formula::Atom { attribute, value })
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parses a formula without checking names against a model.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
    };
    let f = p.implies()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

/// Parses a formula and checks its agents and attributes against `model`.
pub fn parse_formula_for(src: &str, model: &KripkeModel) -> Result<Formula, FormulaError> {
    let f = parse_formula(src)?;
    f.validate(model)?;
    Ok(f)
}
