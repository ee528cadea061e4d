//! Shared tokenizer for the element, polynomial and map grammars.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Unsigned integer literal, kept as digits so callers choose the width.
    Num(String),
    /// Identifier: a variable name such as `t`, `a`, `X1`, `Y`.
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

pub struct Lexer {
    toks: Vec<Tok>,
    pos: usize,
}

impl Lexer {
    pub fn new(text: &str) -> Result<Lexer> {
        let mut toks = Vec::new();
        let bytes: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            match c {
                ' ' | '\t' | '\n' | '\r' => i += 1,
                '+' => {
                    toks.push(Tok::Plus);
                    i += 1;
                }
                '-' => {
                    toks.push(Tok::Minus);
                    i += 1;
                }
                '*' => {
                    toks.push(Tok::Star);
                    i += 1;
                }
                '^' => {
                    toks.push(Tok::Caret);
                    i += 1;
                }
                '/' => {
                    toks.push(Tok::Slash);
                    i += 1;
                }
                '(' => {
                    toks.push(Tok::LParen);
                    i += 1;
                }
                ')' => {
                    toks.push(Tok::RParen);
                    i += 1;
                }
                '[' => {
                    toks.push(Tok::LBracket);
                    i += 1;
                }
                ']' => {
                    toks.push(Tok::RBracket);
                    i += 1;
                }
                '0'..='9' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    toks.push(Tok::Num(bytes[start..i].iter().collect()));
                }
                'a'..='z' | 'A'..='Z' => {
                    let start = i;
                    i += 1;
                    // a variable name is one letter plus an optional index
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    toks.push(Tok::Ident(bytes[start..i].iter().collect()));
                }
                other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
            }
        }
        Ok(Lexer { toks, pos: 0 })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {t:?}, found {:?}", self.peek())))
        }
    }

    pub fn expect_num(&mut self) -> Result<String> {
        match self.next() {
            Some(Tok::Num(s)) => Ok(s),
            other => Err(Error::Parse(format!("expected a number, found {other:?}"))),
        }
    }

    pub fn expect_usize(&mut self) -> Result<usize> {
        let s = self.expect_num()?;
        s.parse::<usize>()
            .map_err(|_| Error::Parse(format!("integer {s} out of range")))
    }

    pub fn expect_u64(&mut self) -> Result<u64> {
        let s = self.expect_num()?;
        s.parse::<u64>()
            .map_err(|_| Error::Parse(format!("integer {s} out of range")))
    }

    pub fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }

    pub fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(Error::Parse(format!("trailing input at {:?}", self.peek())))
        }
    }
}
