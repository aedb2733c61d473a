//! Recursive-descent parser for the specification language.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Construct, Mode, Restriction, SpecError, SpecExpr, Specification, DEFAULT_MARKER};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(usize),
    LParen,
    RParen,
    Comma,
    Semi,
    Newline,
    Eq,
    Le,
    Ge,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> SpecError {
    SpecError::Syntax { line, column, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<Token>, SpecError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut push = |tok| out.push(Token { tok, line: l, column: col });
        match c {
            '\n' => {
                chars.next();
                push(Tok::Newline);
                line += 1;
                column = 1;
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
                continue;
            }
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            ',' => push(Tok::Comma),
            ';' => push(Tok::Semi),
            '=' => push(Tok::Eq),
            '≤' => push(Tok::Le),
            '≥' => push(Tok::Ge),
            '<' | '>' => {
                chars.next();
                column += 1;
                if chars.peek() != Some(&'=') {
                    return Err(syntax(l, col, format!("expected `{c}=`")));
                }
                push(if c == '<' { Tok::Le } else { Tok::Ge });
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    s.push(d);
                    chars.next();
                    column += 1;
                }
                let n = s.parse().map_err(|_| syntax(l, col, "integer too large"))?;
                out.push(Token { tok: Tok::Int(n), line: l, column: col });
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                    s.push(d);
                    chars.next();
                    column += 1;
                }
                out.push(Token { tok: Tok::Ident(s), line: l, column: col });
                continue;
            }
            other => return Err(syntax(l, col, format!("unexpected character `{other}`"))),
        }
        chars.next();
        column += 1;
    }
    out.push(Token { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn skip_inner_newlines(&mut self) {
        if self.depth > 0 {
            while self.toks[self.pos].tok == Tok::Newline {
                self.pos += 1;
            }
        }
    }

    fn peek(&mut self) -> &Token {
        self.skip_inner_newlines();
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        self.skip_inner_newlines();
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn err_here(&mut self, message: impl Into<String>) -> SpecError {
        let t = self.peek().clone();
        syntax(t.line, t.column, message)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), SpecError> {
        if self.peek().tok == want {
            self.next();
            Ok(())
        } else {
            let found = describe(&self.peek().tok);
            Err(self.err_here(format!("expected {what}, found {found}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, SpecError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            other => Err(self.err_here(format!("expected {what}, found {}", describe(&other)))),
        }
    }

    fn open(&mut self) -> Result<(), SpecError> {
        self.expect(Tok::LParen, "`(`")?;
        self.depth += 1;
        Ok(())
    }

    fn close(&mut self) -> Result<(), SpecError> {
        self.expect(Tok::RParen, "`)`")?;
        self.depth -= 1;
        Ok(())
    }

    fn expr(&mut self) -> Result<SpecExpr, SpecError> {
        let start = self.peek().clone();
        let word = self.ident("an expression")?;
        let construct = match word.as_str() {
            "Epsilon" => return Ok(SpecExpr::Epsilon),
            "Atom" => return Ok(SpecExpr::Atom),
            "Marker" => {
                if self.peek().tok == Tok::LParen {
                    self.open()?;
                    let name = self.ident("a marker name")?;
                    self.close()?;
                    return Ok(SpecExpr::Marker { name });
                }
                return Ok(SpecExpr::marker(DEFAULT_MARKER));
            }
            "Union" | "Prod" => {
                self.open()?;
                let mut args = alloc::vec![self.expr()?];
                while self.peek().tok == Tok::Comma {
                    self.next();
                    args.push(self.expr()?);
                }
                self.close()?;
                if args.len() < 2 {
                    return Err(SpecError::Arity { construct: word, min: 2, got: args.len() });
                }
                return Ok(if start_is(&start, "Union") { SpecExpr::Union { args } } else { SpecExpr::Prod { args } });
            }
            "Subst" => {
                self.open()?;
                let outer = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let inner = self.expr()?;
                self.close()?;
                return Ok(SpecExpr::subst(outer, inner));
            }
            "Seq" => Construct::Seq,
            "Set" => Construct::Set,
            "MultiSet" => Construct::MultiSet,
            "PowerSet" => Construct::PowerSet,
            "Cycle" => Construct::Cycle,
            "card" | "labeled" | "unlabeled" => {
                return Err(syntax(start.line, start.column, format!("unexpected keyword `{word}`")))
            }
            _ => return Ok(SpecExpr::ClassRef { name: word }),
        };
        self.open()?;
        let arg = self.expr()?;
        let mut restriction = Restriction::None;
        if self.peek().tok == Tok::Comma {
            self.next();
            restriction = self.restriction()?;
        }
        if self.peek().tok == Tok::Comma {
            return Err(SpecError::Arity { construct: word, min: 1, got: 2 });
        }
        self.close()?;
        Ok(SpecExpr::construct(construct, arg, restriction))
    }

    fn restriction(&mut self) -> Result<Restriction, SpecError> {
        let kw = self.ident("`card`")?;
        if kw != "card" {
            return Err(self.err_here(format!("expected `card`, found `{kw}`")));
        }
        let op = self.next();
        let k = match self.next().tok {
            Tok::Int(k) => k,
            other => return Err(self.err_here(format!("expected an integer, found {}", describe(&other)))),
        };
        Ok(match op.tok {
            Tok::Eq => Restriction::Eq(k),
            Tok::Le => Restriction::Le(k),
            Tok::Ge => Restriction::Ge(k),
            other => {
                return Err(syntax(
                    op.line,
                    op.column,
                    format!("expected `=`, `<=` or `>=`, found {}", describe(&other)),
                ))
            }
        })
    }
}

fn start_is(t: &Token, word: &str) -> bool {
    matches!(&t.tok, Tok::Ident(s) if s == word)
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(k) => k.to_string(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Semi => "`;`".into(),
        Tok::Newline => "end of line".into(),
        Tok::Eq => "`=`".into(),
        Tok::Le => "`<=`".into(),
        Tok::Ge => "`>=`".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parse specification source text.
///
/// Statements are separated by `,`, `;` or newlines; `#` starts a comment.
/// An optional `labeled` or `unlabeled` statement sets the mode
/// (unlabeled by default).
pub fn parse_spec(text: &str) -> Result<Specification, SpecError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, depth: 0 };
    let mut mode = None;
    let mut equations = Vec::new();
    loop {
        while matches!(p.peek().tok, Tok::Comma | Tok::Semi | Tok::Newline) {
            p.next();
        }
        if p.peek().tok == Tok::End {
            break;
        }
        let head = p.peek().clone();
        let name = p.ident("a class name or mode")?;
        if p.peek().tok != Tok::Eq && (name == "labeled" || name == "unlabeled") {
            if mode.is_some() {
                return Err(syntax(head.line, head.column, "mode declared twice"));
            }
            mode = Some(if name == "labeled" { Mode::Labeled } else { Mode::Unlabeled });
        } else {
            p.expect(Tok::Eq, "`=`")?;
            let rhs = p.expr()?;
            equations.push((name, rhs));
        }
        match p.peek().tok {
            Tok::Comma | Tok::Semi | Tok::Newline | Tok::End => {}
            ref other => {
                let found = describe(other);
                return Err(p.err_here(format!("expected end of statement, found {found}")));
            }
        }
    }
    Specification::new(mode.unwrap_or_default(), equations)
}
