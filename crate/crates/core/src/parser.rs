//! Recursive-descent parser for `.score` program text.
//!
//! ```text
//! program := seq
//! seq     := atom (";" atom)*
//! atom    := "SKIP" | "INC" ident | "DEC" ident | "PUSH" ident | "POP" ident
//!          | "FOR" ident "{" seq "}" | "(" seq ")"
//! ```
//!
//! `#` starts a comment running to the end of the line.

use std::fmt;

use crate::lexer::{tokenize, Keyword, Spanned, Tok};
use crate::syntax::{Identifier, Term};

/// First failure while reading program or state text. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(
        line: usize,
        column: usize,
        message: impl Into<String>,
        expected: Vec<String>,
    ) -> Self {
        ParseError { line, column, message: message.into(), expected }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    pub(crate) fn new(toks: Vec<Spanned>) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub(crate) fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    pub(crate) fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn error(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError::new(
            t.line,
            t.column,
            format!("unexpected {}", t.tok.describe()),
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub(crate) fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(&[what]))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<Identifier, ParseError> {
        match &self.peek().tok {
            Tok::Ident(name) => {
                // the lexer only yields well-formed, non-keyword names
                let id = Identifier::new(name).expect("lexer produced a valid identifier");
                self.bump();
                Ok(id)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }
}

/// Parses a complete program.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    let mut cur = Cursor::new(tokenize(src, false)?);
    let term = seq(&mut cur)?;
    if cur.peek().tok != Tok::Eof {
        return Err(cur.error(&["`;`", "end of input"]));
    }
    Ok(term)
}

fn seq(cur: &mut Cursor) -> Result<Term, ParseError> {
    let mut atoms = vec![atom(cur)?];
    while cur.eat(&Tok::Semi) {
        atoms.push(atom(cur)?);
    }
    Ok(Term::seq_all(atoms))
}

const ATOM_START: [&str; 7] = ["`SKIP`", "`INC`", "`DEC`", "`PUSH`", "`POP`", "`FOR`", "`(`"];

fn atom(cur: &mut Cursor) -> Result<Term, ParseError> {
    let kw = match &cur.peek().tok {
        Tok::Keyword(k) => *k,
        Tok::LParen => {
            cur.bump();
            let inner = seq(cur)?;
            cur.expect(Tok::RParen, "`)`")?;
            return Ok(inner);
        }
        _ => return Err(cur.error(&ATOM_START)),
    };
    cur.bump();
    Ok(match kw {
        Keyword::Skip => Term::Skip,
        Keyword::Inc => Term::Inc(cur.ident()?),
        Keyword::Dec => Term::Dec(cur.ident()?),
        Keyword::Push => Term::Push(cur.ident()?),
        Keyword::Pop => Term::Pop(cur.ident()?),
        Keyword::For => {
            let leader = cur.ident()?;
            cur.expect(Tok::LBrace, "`{`")?;
            let body = seq(cur)?;
            cur.expect(Tok::RBrace, "`}`")?;
            Term::for_loop(leader, body)
        }
    })
}
