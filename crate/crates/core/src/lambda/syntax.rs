use std::collections::BTreeSet;
use std::fmt;

use crate::mll::ParseError;

/// Simple types over the single base type `o`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    Base,
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn arrow(dom: SimpleType, cod: SimpleType) -> Self {
        SimpleType::Arrow(Box::new(dom), Box::new(cod))
    }

    /// Church booleans, `o -> o -> o`.
    pub fn boolean() -> Self {
        SimpleType::arrow(SimpleType::Base, SimpleType::arrow(SimpleType::Base, SimpleType::Base))
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Base => write!(f, "o"),
            SimpleType::Arrow(a, b) => match **a {
                SimpleType::Base => write!(f, "o -> {b}"),
                _ => write!(f, "({a}) -> {b}"),
            },
        }
    }
}

/// A simply-typed λ-term with Church-style binders.
///
/// Equality is α-equivalence.
#[derive(Debug, Clone, Eq)]
pub enum LambdaTerm {
    Var(String),
    Abs(String, SimpleType, Box<LambdaTerm>),
    App(Box<LambdaTerm>, Box<LambdaTerm>),
}

impl LambdaTerm {
    pub fn var(x: impl Into<String>) -> Self {
        LambdaTerm::Var(x.into())
    }

    pub fn abs(x: impl Into<String>, ty: SimpleType, body: LambdaTerm) -> Self {
        LambdaTerm::Abs(x.into(), ty, Box::new(body))
    }

    pub fn app(f: LambdaTerm, a: LambdaTerm) -> Self {
        LambdaTerm::App(Box::new(f), Box::new(a))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            LambdaTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            LambdaTerm::Abs(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            LambdaTerm::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            LambdaTerm::Var(_) => 1,
            LambdaTerm::Abs(_, _, b) => 1 + b.size(),
            LambdaTerm::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    fn alpha_eq(&self, other: &LambdaTerm, env: &mut Vec<(String, String)>) -> bool {
        match (self, other) {
            (LambdaTerm::Var(x), LambdaTerm::Var(y)) => {
                let lx = env.iter().rposition(|(a, _)| a == x);
                let ly = env.iter().rposition(|(_, b)| b == y);
                match (lx, ly) {
                    (None, None) => x == y,
                    (Some(i), Some(j)) => i == j,
                    _ => false,
                }
            }
            (LambdaTerm::Abs(x, s, b), LambdaTerm::Abs(y, t, c)) => {
                if s != t {
                    return false;
                }
                env.push((x.clone(), y.clone()));
                let r = b.alpha_eq(c, env);
                env.pop();
                r
            }
            (LambdaTerm::App(f, a), LambdaTerm::App(g, b)) => f.alpha_eq(g, env) && a.alpha_eq(b, env),
            _ => false,
        }
    }
}

impl PartialEq for LambdaTerm {
    fn eq(&self, other: &Self) -> bool {
        self.alpha_eq(other, &mut Vec::new())
    }
}

impl fmt::Display for LambdaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaTerm::Var(x) => write!(f, "{x}"),
            LambdaTerm::Abs(x, t, b) => write!(f, "\\{x}:{t}. {b}"),
            LambdaTerm::App(g, a) => {
                match **g {
                    LambdaTerm::Abs(..) => write!(f, "({g})")?,
                    _ => write!(f, "{g}")?,
                }
                match **a {
                    LambdaTerm::Var(_) => write!(f, " {a}"),
                    _ => write!(f, " ({a})"),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lambda,
    Ident(String),
    Colon,
    Dot,
    Arrow,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '\\' | 'λ' => Tok::Lambda,
            ':' => Tok::Colon,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 2;
                out.push((Tok::Arrow, col));
                continue;
            }
            '→' => Tok::Arrow,
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
                continue;
            }
            other => {
                return Err(ParseError { line: 1, column: col, message: format!("unexpected character `{other}`") })
            }
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, end: text.chars().count() + 1 })
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let column = self.toks.get(self.pos).map_or(self.end, |t| t.1);
        ParseError { line: 1, column, message: message.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn ty(&mut self) -> Result<SimpleType, ParseError> {
        let dom = match self.peek() {
            Some(Tok::Ident(x)) if x == "o" => {
                self.pos += 1;
                SimpleType::Base
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                t
            }
            _ => return Err(self.err("expected a type")),
        };
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            return Ok(SimpleType::arrow(dom, self.ty()?));
        }
        Ok(dom)
    }

    fn term(&mut self) -> Result<LambdaTerm, ParseError> {
        let mut head = self.atom()?;
        while matches!(self.peek(), Some(Tok::Ident(_) | Tok::LParen | Tok::Lambda)) {
            let arg = self.atom()?;
            head = LambdaTerm::app(head, arg);
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<LambdaTerm, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(x)) => {
                self.pos += 1;
                Ok(LambdaTerm::Var(x))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Lambda) => {
                self.pos += 1;
                let Some(Tok::Ident(x)) = self.peek().cloned() else {
                    return Err(self.err("expected a binder name"));
                };
                self.pos += 1;
                self.expect(Tok::Colon, "`:` and a binder type")?;
                let ty = self.ty()?;
                self.expect(Tok::Dot, "`.`")?;
                let body = self.term()?;
                Ok(LambdaTerm::Abs(x, ty, Box::new(body)))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

/// Parses `\x:T. M`, application by juxtaposition, and parentheses.
pub fn parse_term(text: &str) -> Result<LambdaTerm, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input after term"));
    }
    Ok(t)
}

/// Parses `o` and right-associative `T -> T`.
pub fn parse_type(text: &str) -> Result<SimpleType, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.ty()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input after type"));
    }
    Ok(t)
}
