//! Surface syntax for formulas:
//!
//! ```text
//! formula   := {free_decl} {quant ident "[" int "]"} ":" "p"
//! free_decl := "free" ident "[" int "]"
//! quant     := "forall" | "exists"
//! ```
//!
//! Whitespace is free-form and `#` starts a comment that runs to the end of
//! the line. A formula with no quantifier simply looks up the predicate.

use crate::error::{Error, Result};
use crate::formula::{Formula, Quantifier, Variable};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Open,
    Close,
    Colon,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

const KEYWORDS: [&str; 4] = ["free", "forall", "exists", "p"];

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let ch = chars.next().unwrap();
            if ch == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        let tok = match ch {
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '[' | ']' | ':' => {
                bump(&mut chars);
                match ch {
                    '[' => Tok::Open,
                    ']' => Tok::Close,
                    _ => Tok::Colon,
                }
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    s.push(d);
                    bump(&mut chars);
                }
                Tok::Int(s)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                    s.push(d);
                    bump(&mut chars);
                }
                Tok::Ident(s)
            }
            other => {
                return Err(Error::Parse {
                    line: l,
                    column: c,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push(Token {
            tok,
            line: l,
            column: c,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(t: &Token, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let t = self.next();
        if t.tok != want {
            return Self::error(&t, format!("expected {what}, found {}", describe(&t.tok)));
        }
        Ok(())
    }

    fn variable(&mut self) -> Result<Variable> {
        let t = self.next();
        let name = match t.tok {
            Tok::Ident(ref s) if !KEYWORDS.contains(&s.as_str()) => s.clone(),
            ref other => return Self::error(&t, format!("expected a variable name, found {}", describe(other))),
        };
        self.expect(Tok::Open, "`[`")?;
        let t = self.next();
        let width = match t.tok {
            Tok::Int(ref s) => s
                .parse::<usize>()
                .or_else(|_| Self::error(&t, format!("width {s} is too large")))?,
            ref other => return Self::error(&t, format!("expected a width, found {}", describe(other))),
        };
        self.expect(Tok::Close, "`]`")?;
        Ok(Variable::new(name, width))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(s) => format!("`{s}`"),
        Tok::Open => "`[`".into(),
        Tok::Close => "`]`".into(),
        Tok::Colon => "`:`".into(),
        Tok::Eof => "end of input".into(),
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let keyword = |p: &Parser| match &p.peek().tok {
        Tok::Ident(s) => Some(s.clone()),
        _ => None,
    };
    let mut free = Vec::new();
    while keyword(&p).as_deref() == Some("free") {
        p.next();
        free.push(p.variable()?);
    }
    let mut prefix = Vec::new();
    loop {
        let q = match keyword(&p).as_deref() {
            Some("forall") => Quantifier::Forall,
            Some("exists") => Quantifier::Exists,
            Some("free") => return Parser::error(p.peek(), "free declarations must precede the quantifiers"),
            _ => break,
        };
        p.next();
        prefix.push((q, p.variable()?));
    }
    p.expect(Tok::Colon, "a quantifier or `:`")?;
    p.expect(Tok::Ident("p".into()), "`p`")?;
    p.expect(Tok::Eof, "end of input")?;
    Formula::new(free, prefix)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_prefix() {
        let f = parse_formula("forall x1[1] exists x2[1] : p").unwrap();
        assert_eq!(f.k(), 2);
        assert_eq!(f.bound_width(), 2);
        assert_eq!(f.prefix()[0], (Quantifier::Forall, Variable::new("x1", 1)));
        assert_eq!(f.prefix()[1], (Quantifier::Exists, Variable::new("x2", 1)));
    }

    #[test]
    fn parses_free_and_comments() {
        let f = parse_formula("# header\nfree z[2]\n  exists x[3] # trailing\n: p\n").unwrap();
        assert_eq!(f.free(), &[Variable::new("z", 2)]);
        assert_eq!(f.k(), 1);
        assert_eq!(f.bound_width(), 3);
    }

    #[test]
    fn reports_position_of_errors() {
        match parse_formula("exists exists : p") {
            Err(Error::Parse { line: 1, column: 8, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_formula("exists x[1]\n  : q") {
            Err(Error::Parse { line: 2, column: 5, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn semantic_errors() {
        assert!(matches!(
            parse_formula("exists x[1] forall x[2] : p"),
            Err(Error::DuplicateVariable(_))
        ));
        assert!(matches!(parse_formula("exists x[0] : p"), Err(Error::ZeroWidth(_))));
    }

    #[test]
    fn bare_lookup() {
        let f = parse_formula("free z[1] : p").unwrap();
        assert_eq!(f.k(), 0);
    }
}
