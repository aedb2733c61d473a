//! Text syntax for species:
//!
//! ```text
//! program := stmt { (";" | newline) stmt }
//! stmt    := name "=" expr | expr
//! expr    := term { "+" term }
//! term    := factor { "*" factor }
//! factor  := "(" expr ")" | name [ "(" args ")" ]
//! ```
//!
//! `Sum`, `Prod`, `Compose`, `Restrict(F, min[, max])`, `Weight(F, k)` and
//! `Char(n)` are built in; any other species applied to an argument is
//! composed with it, so `L(T)` is `Compose(L, T)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{SizeSet, SpeciesEnv, SpeciesError, SpeciesExpr};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Int(usize),
    LParen,
    RParen,
    Comma,
    Plus,
    Star,
    Eq,
    Sep,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
}

fn lex(text: &str) -> Result<Lexer, SpeciesError> {
    let mut toks = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line_no = li + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Name(chars[start..i].iter().collect()), line_no, col));
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s.parse().map_err(|_| SpeciesError::Syntax {
                    line: line_no,
                    column: col,
                    message: "integer too large".into(),
                })?;
                toks.push((Tok::Int(v), line_no, col));
                continue;
            }
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '+' => Tok::Plus,
                '*' => Tok::Star,
                '=' => Tok::Eq,
                ';' => Tok::Sep,
                _ => {
                    return Err(SpeciesError::Syntax {
                        line: line_no,
                        column: col,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            };
            toks.push((t, line_no, col));
            i += 1;
        }
        toks.push((Tok::Sep, line_no, chars.len() + 1));
    }
    toks.push((Tok::End, text.lines().count().max(1), 1));
    Ok(Lexer { toks })
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        let mut p = self.pos;
        // separators inside parentheses are line breaks and carry no meaning
        while self.depth > 0 && self.toks[p].0 == Tok::Sep {
            p += 1;
        }
        &self.toks[p].0
    }

    fn next(&mut self) -> Tok {
        while self.depth > 0 && self.toks[self.pos].0 == Tok::Sep {
            self.pos += 1;
        }
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: String) -> SpeciesError {
        let (_, line, column) = self.toks[self.pos.min(self.toks.len() - 1)];
        SpeciesError::Syntax { line, column, message }
    }

    fn expect(&mut self, t: Tok) -> Result<(), SpeciesError> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            Err(self.err(format!("expected {t:?}, found {:?}", self.peek())))
        }
    }

    fn int(&mut self) -> Result<usize, SpeciesError> {
        match self.next() {
            Tok::Int(v) => Ok(v),
            t => Err(self.err(format!("expected an integer, found {t:?}"))),
        }
    }

    fn expr(&mut self) -> Result<SpeciesExpr, SpeciesError> {
        let mut e = self.term()?;
        while *self.peek() == Tok::Plus {
            self.next();
            e = SpeciesExpr::sum(e, self.term()?);
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<SpeciesExpr, SpeciesError> {
        let mut e = self.factor()?;
        while *self.peek() == Tok::Star {
            self.next();
            e = SpeciesExpr::product(e, self.factor()?);
        }
        Ok(e)
    }

    fn args(&mut self) -> Result<Vec<SpeciesExpr>, SpeciesError> {
        let mut out = alloc::vec![self.expr()?];
        while *self.peek() == Tok::Comma {
            self.next();
            out.push(self.expr()?);
        }
        Ok(out)
    }

    fn fold(args: Vec<SpeciesExpr>, f: fn(SpeciesExpr, SpeciesExpr) -> SpeciesExpr) -> SpeciesExpr {
        let mut it = args.into_iter();
        let first = it.next().unwrap();
        it.fold(first, f)
    }

    fn factor(&mut self) -> Result<SpeciesExpr, SpeciesError> {
        match self.next() {
            Tok::LParen => {
                self.depth += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                self.depth -= 1;
                Ok(e)
            }
            Tok::Name(name) => {
                let call = *self.peek() == Tok::LParen;
                if call {
                    self.next();
                    self.depth += 1;
                }
                let e = match (name.as_str(), call) {
                    ("Char", true) => SpeciesExpr::Characteristic(self.int()?),
                    ("Restrict", true) => {
                        let a = self.expr()?;
                        self.expect(Tok::Comma)?;
                        let min = self.int()?;
                        let max = if *self.peek() == Tok::Comma {
                            self.next();
                            Some(self.int()?)
                        } else {
                            None
                        };
                        SpeciesExpr::restrict(a, SizeSet { min, max })
                    }
                    ("Weight", true) => {
                        let a = self.expr()?;
                        self.expect(Tok::Comma)?;
                        let k = self.int()?;
                        SpeciesExpr::weighted(a, u32::try_from(k).map_err(|_| self.err("weight too large".into()))?)
                    }
                    ("Sum", true) => Self::fold(self.args()?, SpeciesExpr::sum),
                    ("Prod", true) => Self::fold(self.args()?, SpeciesExpr::product),
                    ("Compose", true) => {
                        let args = self.args()?;
                        if args.len() != 2 {
                            return Err(self.err("Compose takes two arguments".into()));
                        }
                        let mut it = args.into_iter();
                        SpeciesExpr::compose(it.next().unwrap(), it.next().unwrap())
                    }
                    (n, call) => {
                        let base = species_name(n);
                        if call {
                            let arg = self.expr()?;
                            SpeciesExpr::compose(base, arg)
                        } else {
                            base
                        }
                    }
                };
                if call {
                    self.expect(Tok::RParen)?;
                    self.depth -= 1;
                }
                Ok(e)
            }
            t => Err(self.err(format!("expected a species, found {t:?}"))),
        }
    }
}

fn species_name(n: &str) -> SpeciesExpr {
    match n {
        "EmptySet" | "E0" | "One" => SpeciesExpr::EmptySet,
        "Singleton" | "X" => SpeciesExpr::Singleton,
        "Set" | "E" => SpeciesExpr::Set,
        "LinearOrder" | "L" => SpeciesExpr::LinearOrder,
        "Cycle" | "C" => SpeciesExpr::Cycle,
        "Permutation" | "S" => SpeciesExpr::Permutation,
        "SetPartition" | "Par" => SpeciesExpr::SetPartition,
        other => SpeciesExpr::Implicit(other.into()),
    }
}

/// Parse definitions and a target. The target is the last bare
/// expression, or else the first defined name.
pub fn parse_species(text: &str) -> Result<(SpeciesEnv, SpeciesExpr), SpeciesError> {
    let mut p = Parser { toks: lex(text)?.toks, pos: 0, depth: 0 };
    let mut env = SpeciesEnv::new();
    let mut defs: Vec<(String, SpeciesExpr)> = Vec::new();
    let mut target = None;
    loop {
        while *p.peek() == Tok::Sep {
            p.next();
        }
        if *p.peek() == Tok::End {
            break;
        }
        let is_def = matches!(p.peek(), Tok::Name(_)) && p.toks.get(p.pos + 1).is_some_and(|t| t.0 == Tok::Eq);
        if is_def {
            let Tok::Name(name) = p.next() else { unreachable!() };
            if matches!(species_name(&name), SpeciesExpr::Implicit(_))
                && !["Char", "Sum", "Prod", "Compose", "Restrict", "Weight"].contains(&name.as_str())
            {
                p.next();
                let body = p.expr()?;
                defs.push((name, body));
            } else {
                return Err(p.err(format!("`{name}` is a built-in species")));
            }
        } else {
            target = Some(p.expr()?);
        }
        match p.peek() {
            Tok::Sep | Tok::End => {}
            t => return Err(p.err(format!("unexpected {t:?}"))),
        }
    }
    let target = match (target, defs.first()) {
        (Some(t), _) => t,
        (None, Some((name, _))) => SpeciesExpr::Implicit(name.clone()),
        (None, None) => return Err(SpeciesError::Syntax { line: 1, column: 1, message: "empty input".into() }),
    };
    // bind all names first so mutual recursion is accepted, then check
    for (name, body) in defs {
        if env.defs.contains_key(&name) {
            return Err(SpeciesError::Duplicate(name));
        }
        env.defs.insert(name, body);
    }
    env.check()?;
    env.check_free(&target)?;
    Ok((env, target))
}
