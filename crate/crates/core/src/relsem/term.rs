use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::mll::{is_ident_char, Formula, ParseError};

/// A point of a web, possibly containing atomic variables.
///
/// Atoms and variables live in separate namespaces: variables print as
/// `?name`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelTerm {
    Atom(Arc<str>),
    Unit,
    Pair(Arc<RelTerm>, Arc<RelTerm>),
    Var(Arc<str>),
}

impl RelTerm {
    pub fn atom(name: impl Into<String>) -> Self {
        RelTerm::Atom(name.into().into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        RelTerm::Var(name.into().into())
    }

    pub fn pair(fst: RelTerm, snd: RelTerm) -> Self {
        RelTerm::Pair(Arc::new(fst), Arc::new(snd))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            RelTerm::Atom(_) | RelTerm::Unit => true,
            RelTerm::Var(_) => false,
            RelTerm::Pair(a, b) => a.is_ground() && b.is_ground(),
        }
    }

    pub fn occurs(&self, var: &str) -> bool {
        match self {
            RelTerm::Var(v) => &**v == var,
            RelTerm::Pair(a, b) => a.occurs(var) || b.occurs(var),
            _ => false,
        }
    }

    pub fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            RelTerm::Atom(a) => {
                out.insert(a.to_string());
            }
            RelTerm::Pair(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            _ => {}
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            RelTerm::Var(v) => out.push(v.to_string()),
            RelTerm::Pair(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            _ => {}
        }
    }

    /// Renames every atom through `f`.
    pub fn map_atoms(&self, f: &impl Fn(&str) -> String) -> RelTerm {
        match self {
            RelTerm::Atom(a) => RelTerm::atom(f(a)),
            RelTerm::Pair(a, b) => RelTerm::pair(a.map_atoms(f), b.map_atoms(f)),
            other => other.clone(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            RelTerm::Pair(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }
}

impl fmt::Display for RelTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelTerm::Atom(a) => write!(f, "{a}"),
            RelTerm::Unit => write!(f, "()"),
            RelTerm::Pair(a, b) => write!(f, "({a},{b})"),
            RelTerm::Var(v) => write!(f, "?{v}"),
        }
    }
}

/// Membership in the web `|a|`; with `allow_vars` unset this is the
/// variable-free web.
pub fn web_member(t: &RelTerm, a: &Formula, allow_vars: bool) -> bool {
    match (t, a) {
        (RelTerm::Var(_), _) => allow_vars,
        (RelTerm::Atom(_), Formula::Var(_) | Formula::Dual(_)) => true,
        (RelTerm::Unit, Formula::One | Formula::Bot) => true,
        (RelTerm::Pair(x, y), Formula::Tensor(l, r) | Formula::Par(l, r)) => {
            web_member(x, l, allow_vars) && web_member(y, r, allow_vars)
        }
        _ => false,
    }
}

struct PointParser<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl PointParser<'_> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: 1, column: self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn name(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && is_ident_char(self.chars[self.pos]) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an identifier"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn term(&mut self) -> Result<RelTerm, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(RelTerm::Unit);
                }
                let first = self.term()?;
                match self.peek() {
                    Some(',') => {
                        self.pos += 1;
                        let second = self.term()?;
                        self.expect(')')?;
                        Ok(RelTerm::pair(first, second))
                    }
                    // redundant grouping parentheses
                    Some(')') => {
                        self.pos += 1;
                        Ok(first)
                    }
                    _ => Err(self.err("expected `,` or `)`")),
                }
            }
            Some('?') => {
                self.pos += 1;
                Ok(RelTerm::Var(self.name()?.into()))
            }
            Some(c) if is_ident_char(c) => Ok(RelTerm::Atom(self.name()?.into())),
            Some(c) => Err(self.err(format!("unexpected character `{c}`"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses one point: `t ::= ident | "()" | "(" t "," t ")" | "?" ident`.
/// Redundant parentheses around a point are accepted.
pub fn parse_term(text: &str) -> Result<RelTerm, ParseError> {
    let mut p = PointParser { chars: text.chars().collect(), pos: 0, _src: text };
    let t = p.term()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input after point"));
    }
    Ok(t)
}

/// Parses a comma-separated list of points, one per conclusion.
pub fn parse_point(text: &str) -> Result<Vec<RelTerm>, ParseError> {
    let mut p = PointParser { chars: text.chars().collect(), pos: 0, _src: text };
    let mut out = Vec::new();
    if p.peek().is_none() {
        return Ok(out);
    }
    loop {
        out.push(p.term()?);
        match p.peek() {
            None => return Ok(out),
            Some(',') => p.pos += 1,
            Some(_) => return Err(p.err("expected `,` between conclusion points")),
        }
    }
}

pub fn format_point(x: &[RelTerm]) -> String {
    x.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}
