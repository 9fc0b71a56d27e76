//! Tokenizer shared by the program parser and the state-file parser.

use num_bigint::BigInt;

use crate::parser::ParseError;
use crate::syntax::{is_ident_continue, is_ident_start};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Keyword {
    Skip,
    Inc,
    Dec,
    Push,
    Pop,
    For,
}

impl Keyword {
    fn from_word(word: &str) -> Option<Keyword> {
        Some(match word {
            "SKIP" => Keyword::Skip,
            "INC" => Keyword::Inc,
            "DEC" => Keyword::Dec,
            "PUSH" => Keyword::Push,
            "POP" => Keyword::Pop,
            "FOR" => Keyword::For,
            _ => return None,
        })
    }

    pub(crate) fn as_str(self) -> &'static str {
        match self {
            Keyword::Skip => "SKIP",
            Keyword::Inc => "INC",
            Keyword::Dec => "DEC",
            Keyword::Push => "PUSH",
            Keyword::Pop => "POP",
            Keyword::For => "FOR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Keyword(Keyword),
    Ident(String),
    Int(BigInt),
    Semi,
    Comma,
    Equals,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Newline,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Keyword(k) => format!("keyword `{}`", k.as_str()),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Equals => "`=`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Tokenizes `src`. `Newline` tokens are only produced when `newlines` is set.
/// The stream always ends in `Eof`.
pub(crate) fn tokenize(src: &str, newlines: bool) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, column);
        let mut push = |tok| out.push(Spanned { tok, line: tline, column: tcol });
        match c {
            '\n' => {
                chars.next();
                if newlines {
                    push(Tok::Newline);
                }
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
                continue;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    column += 1;
                }
                continue;
            }
            _ => {}
        }

        let single = match c {
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Equals),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            column += 1;
            push(tok);
            continue;
        }

        if is_ident_start(c) {
            let mut word = String::new();
            while let Some(&c) = chars.peek().filter(|c| is_ident_continue(**c)) {
                word.push(c);
                chars.next();
                column += 1;
            }
            match Keyword::from_word(&word) {
                Some(k) => push(Tok::Keyword(k)),
                None => push(Tok::Ident(word)),
            }
            continue;
        }

        if c == '-' || c.is_ascii_digit() {
            let mut text = String::new();
            if c == '-' {
                text.push(c);
                chars.next();
                column += 1;
            }
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                text.push(d);
                chars.next();
                column += 1;
            }
            if text == "-" {
                return Err(ParseError::new(
                    tline,
                    tcol,
                    "`-` must be followed by digits",
                    vec!["integer".into()],
                ));
            }
            if let Some(&d) = chars.peek().filter(|d| is_ident_start(**d)) {
                return Err(ParseError::new(
                    line,
                    column,
                    format!("unexpected character `{d}` after integer"),
                    vec![],
                ));
            }
            // only ASCII digits with an optional sign reach this point
            let n: BigInt = text.parse().expect("decimal literal");
            push(Tok::Int(n));
            continue;
        }

        return Err(ParseError::new(
            line,
            column,
            format!("unexpected character `{c}`"),
            vec![],
        ));
    }

    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}
