//! Parser for the ASCII surface syntax.
//!
//! Grammar:
//! ```text
//! term    := lam | app
//! lam     := '\' IDENT '.' term
//! app     := item+ lam?            (left-associative juxtaposition)
//! item    := atom ('[' IDENT '<-' term ']')*
//! atom    := IDENT | '(' term ')'
//! IDENT   := [a-zA-Z][a-zA-Z0-9_']*
//! ```
//! Explicit substitution binds tighter than application, application
//! tighter than lambda. A lambda in argument position needs parentheses
//! unless it is the last argument.

use std::fmt;

use thiserror::Error;

use super::term::Term;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at {line}:{col}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Arrow,
    Ident(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Lambda => write!(f, "'\\'"),
            Tok::Dot => write!(f, "'.'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::LBracket => write!(f, "'['"),
            Tok::RBracket => write!(f, "']'"),
            Tok::Arrow => write!(f, "'<-'"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while let Some(c) = self.src[self.pos..].chars().next() {
            let (line, col) = (self.line, self.col);
            match c {
                c if c.is_whitespace() => self.bump(c),
                '\\' => {
                    self.bump(c);
                    out.push((Tok::Lambda, line, col));
                }
                '.' => {
                    self.bump(c);
                    out.push((Tok::Dot, line, col));
                }
                '(' => {
                    self.bump(c);
                    out.push((Tok::LParen, line, col));
                }
                ')' => {
                    self.bump(c);
                    out.push((Tok::RParen, line, col));
                }
                '[' => {
                    self.bump(c);
                    out.push((Tok::LBracket, line, col));
                }
                ']' => {
                    self.bump(c);
                    out.push((Tok::RBracket, line, col));
                }
                '<' => {
                    self.bump(c);
                    match self.src[self.pos..].chars().next() {
                        Some('-') => {
                            self.bump('-');
                            out.push((Tok::Arrow, line, col));
                        }
                        other => {
                            return Err(ParseError {
                                line,
                                col,
                                expected: vec!["'<-'".into()],
                                found: other.map_or("end of input".into(), |c| format!("'<{c}'")),
                            })
                        }
                    }
                }
                c if c.is_ascii_alphabetic() => {
                    let start = self.pos;
                    while let Some(c) = self.src[self.pos..].chars().next() {
                        if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                            self.bump(c);
                        } else {
                            break;
                        }
                    }
                    out.push((Tok::Ident(self.src[start..self.pos].to_string()), line, col));
                }
                other => {
                    return Err(ParseError {
                        line,
                        col,
                        expected: vec!["a term".into()],
                        found: format!("'{other}'"),
                    })
                }
            }
        }
        out.push((Tok::Eof, self.line, self.col));
        Ok(out)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    idx: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.idx]
    }

    fn advance(&mut self) -> Spanned {
        let t = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn err(&self, expected: &[&str]) -> ParseError {
        let (tok, line, col) = self.peek();
        ParseError {
            line: *line,
            col: *col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.to_string(),
        }
    }

    fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            (Tok::Ident(_), _, _) => {
                let (Tok::Ident(s), _, _) = self.advance() else {
                    unreachable!()
                };
                Ok(s)
            }
            _ => Err(self.err(&["an identifier"])),
        }
    }

    fn expect(&mut self, tok: Tok, show: &str) -> Result<(), ParseError> {
        if self.peek().0 == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.err(&[show]))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.peek().0 == Tok::Lambda {
            return self.lam();
        }
        self.app()
    }

    fn lam(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::Lambda, "'\\'")?;
        let binder = self.expect_ident()?;
        self.expect(Tok::Dot, "'.'")?;
        let body = self.term()?;
        Ok(Term::abs(binder, body))
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.item()?;
        loop {
            match self.peek().0 {
                Tok::Ident(_) | Tok::LParen => {
                    let arg = self.item()?;
                    acc = Term::app(acc, arg);
                }
                Tok::Lambda => {
                    // trailing lambda as final argument
                    let arg = self.lam()?;
                    return Ok(Term::app(acc, arg));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn item(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.atom()?;
        while self.peek().0 == Tok::LBracket {
            self.advance();
            let binder = self.expect_ident()?;
            self.expect(Tok::Arrow, "'<-'")?;
            let content = self.term()?;
            self.expect(Tok::RBracket, "']'")?;
            acc = Term::es(acc, binder, content);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().0 {
            Tok::Ident(_) => {
                let name = self.expect_ident()?;
                Ok(Term::var(name))
            }
            Tok::LParen => {
                self.advance();
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => Err(self.err(&["an identifier", "'('", "'\\'"])),
        }
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let toks = Lexer::new(src).tokens()?;
    let mut p = Parser { toks, idx: 0 };
    let t = p.term()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(t)
}
