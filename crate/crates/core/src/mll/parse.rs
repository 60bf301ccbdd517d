//! Concrete syntax for formulas and the line-based `.mllps` format.
//!
//! ```text
//! port <id> : <formula>
//! cell <id> : ax(<p>, <q>)
//! cell <id> : cut(<p>, <q>)
//! cell <id> : tensor(<p1>, <p2> ; <q>)
//! cell <id> : par(<p1>, <p2> ; <q>)
//! cell <id> : one(<p>)
//! cell <id> : bot(<p>)
//! conclusions: <p1>, <p2>, ...
//! ```
//!
//! Formulas: `F ::= ident | ident "^" | "1" | "bot" | F "*" F | F "|" F | "(" F ")"`,
//! both connectives right-associative, `*` binding tighter.

use std::fmt;

use super::formula::Formula;
use super::structure::{BuildError, CellKind, PortId, ProofStructure, StructureBuilder};

/// A syntax error, with 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("syntax error at {0}")]
    Syntax(#[from] ParseError),
    #[error("line {line}: {source}")]
    Build { line: usize, source: BuildError },
    #[error(transparent)]
    Invalid(BuildError),
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Hat,
    Star,
    Bar,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Hat => write!(f, "`^`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Bar => write!(f, "`|`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
        }
    }
}

struct FormulaParser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    line: usize,
}

impl FormulaParser {
    fn new(text: &str, line: usize, col0: usize) -> Result<Self, ParseError> {
        let mut toks = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = col0 + i;
            let tok = match c {
                c if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                '^' => Tok::Hat,
                '*' => Tok::Star,
                '|' => Tok::Bar,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                c if is_ident_char(c) => {
                    let start = i;
                    while i < chars.len() && is_ident_char(chars[i]) {
                        i += 1;
                    }
                    toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
                    continue;
                }
                other => {
                    return Err(ParseError {
                        line,
                        column: col,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            };
            toks.push((tok, col));
            i += 1;
        }
        Ok(FormulaParser { toks, pos: 0, end_col: col0 + chars.len(), line })
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let column = self.toks.get(self.pos).map_or(self.end_col, |t| t.1);
        ParseError { line: self.line, column, message: message.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn par(&mut self) -> Result<Formula, ParseError> {
        let left = self.tensor()?;
        if self.peek() == Some(&Tok::Bar) {
            self.pos += 1;
            let right = self.par()?;
            return Ok(Formula::par(left, right));
        }
        Ok(left)
    }

    fn tensor(&mut self) -> Result<Formula, ParseError> {
        let left = self.atom()?;
        if self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let right = self.tensor()?;
            return Ok(Formula::tensor(left, right));
        }
        Ok(left)
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.err("unexpected end of formula"));
        };
        match tok {
            Tok::LParen => {
                self.pos += 1;
                let f = self.par()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                if self.peek() == Some(&Tok::Hat) {
                    return Err(self.err("negation is only allowed on propositional variables"));
                }
                Ok(f)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                let unit = match name.as_str() {
                    "1" => Some(Formula::One),
                    "bot" => Some(Formula::Bot),
                    _ => None,
                };
                if let Some(u) = unit {
                    if self.peek() == Some(&Tok::Hat) {
                        return Err(self.err("negation is only allowed on propositional variables"));
                    }
                    return Ok(u);
                }
                if !name.starts_with(|c: char| c.is_alphabetic() || c == '_') {
                    self.pos -= 1;
                    return Err(self.err(format!("invalid propositional variable `{name}`")));
                }
                if self.peek() == Some(&Tok::Hat) {
                    self.pos += 1;
                    if self.peek() == Some(&Tok::Hat) {
                        return Err(self.err("double negation is not allowed, write the variable itself"));
                    }
                    return Ok(Formula::Dual(name));
                }
                Ok(Formula::Var(name))
            }
            other => Err(self.err(format!("unexpected {other}"))),
        }
    }

    fn finish(&mut self) -> Result<Formula, ParseError> {
        let f = self.par()?;
        if let Some(t) = self.peek() {
            return Err(self.err(format!("unexpected {t} after formula")));
        }
        Ok(f)
    }
}

/// Parses a single formula.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    FormulaParser::new(text, 1, 1)?.finish()
}

fn parse_formula_at(text: &str, line: usize, col: usize) -> Result<Formula, ParseError> {
    FormulaParser::new(text, line, col)?.finish()
}

fn column_of(line: &str, sub: &str) -> usize {
    // `sub` is always a subslice of `line`
    let offset = sub.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

fn ident<'a>(raw: &'a str, text: &'a str, lineno: usize) -> Result<&'a str, ParseError> {
    let s = text.trim();
    if s.is_empty() || !s.chars().all(is_ident_char) {
        return Err(ParseError {
            line: lineno,
            column: column_of(raw, text),
            message: format!("invalid identifier `{s}`"),
        });
    }
    Ok(s)
}

/// Parses and validates a `.mllps` document.
pub fn parse_proof_structure(text: &str) -> Result<ProofStructure, StructureError> {
    let mut b = StructureBuilder::new();
    let mut conclusions: Option<(usize, Vec<(String, usize)>)> = None;
    let mut pending_cells = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let syntax = |col: usize, message: String| ParseError { line: lineno, column: col, message };

        if let Some(rest) = trimmed.strip_prefix("conclusions") {
            let rest = rest.trim_start();
            let Some(list) = rest.strip_prefix(':') else {
                return Err(syntax(column_of(raw, rest), "expected `:`".into()).into());
            };
            if conclusions.is_some() {
                return Err(syntax(1, "conclusions declared twice".into()).into());
            }
            let mut names = Vec::new();
            if !list.trim().is_empty() {
                for item in list.split(',') {
                    names.push((ident(raw, item, lineno)?.to_string(), column_of(raw, item)));
                }
            }
            conclusions = Some((lineno, names));
            continue;
        }

        let (keyword, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r),
            None => (trimmed, ""),
        };
        let Some((name, body)) = rest.split_once(':') else {
            return Err(syntax(column_of(raw, rest), "expected `<id> : ...`".into()).into());
        };
        let name = ident(raw, name, lineno)?;
        match keyword {
            "port" => {
                let f = parse_formula_at(body, lineno, column_of(raw, body))?;
                b.port(name, f).map_err(|source| StructureError::Build { line: lineno, source })?;
            }
            "cell" => {
                let body_t = body.trim();
                let open = body_t.find('(').ok_or_else(|| syntax(column_of(raw, body), "expected `(`".into()))?;
                let kind_s = body_t[..open].trim();
                let kind = CellKind::from_keyword(kind_s).ok_or_else(|| {
                    syntax(column_of(raw, body_t), format!("unknown cell kind `{kind_s}`"))
                })?;
                let args = &body_t[open + 1..];
                let Some(args) = args.strip_suffix(')') else {
                    return Err(syntax(column_of(raw, body_t) + body_t.chars().count(), "expected `)`".into()).into());
                };
                let (before, after) = match args.split_once(';') {
                    Some((x, y)) => (x, Some(y)),
                    None => (args, None),
                };
                let mut first = Vec::new();
                if !before.trim().is_empty() {
                    for a in before.split(',') {
                        first.push(ident(raw, a, lineno)?.to_string());
                    }
                }
                let second = match after {
                    Some(a) => vec![ident(raw, a, lineno)?.to_string()],
                    None => Vec::new(),
                };
                let ok = match kind {
                    CellKind::Ax | CellKind::Cut => first.len() == 2 && after.is_none(),
                    CellKind::Tensor | CellKind::Par => first.len() == 2 && second.len() == 1,
                    CellKind::One | CellKind::Bot => first.len() == 1 && after.is_none(),
                };
                if !ok {
                    let expected = match kind {
                        CellKind::Ax | CellKind::Cut => "(p, q)",
                        CellKind::Tensor | CellKind::Par => "(p1, p2 ; q)",
                        CellKind::One | CellKind::Bot => "(p)",
                    };
                    return Err(syntax(
                        column_of(raw, body_t),
                        format!("{} expects arguments {expected}", kind.keyword()),
                    )
                    .into());
                }
                pending_cells.push((lineno, name.to_string(), kind, first, second));
            }
            other => {
                return Err(syntax(column_of(raw, trimmed), format!("unknown declaration `{other}`")).into())
            }
        }
    }

    // Cells may mention ports declared further down.
    for (lineno, name, kind, first, second) in pending_cells {
        let look = |n: &str| b.port_id(n).map_err(|source| StructureError::Build { line: lineno, source });
        let first: Vec<PortId> = first.iter().map(|n| look(n)).collect::<Result<_, _>>()?;
        let second: Vec<PortId> = second.iter().map(|n| look(n)).collect::<Result<_, _>>()?;
        let (principal, auxiliary) = match kind {
            CellKind::Ax | CellKind::One | CellKind::Bot => (first, Vec::new()),
            CellKind::Cut => (Vec::new(), first),
            CellKind::Tensor | CellKind::Par => (second, first),
        };
        b.cell(name, kind, &principal, &auxiliary)
            .map_err(|source| StructureError::Build { line: lineno, source })?;
    }

    let Some((cline, names)) = conclusions else {
        return Err(ParseError {
            line: text.lines().count().max(1),
            column: 1,
            message: "missing `conclusions:` declaration".into(),
        }
        .into());
    };
    let order = names
        .iter()
        .map(|(n, _)| b.port_id(n).map_err(|source| StructureError::Build { line: cline, source }))
        .collect::<Result<Vec<_>, _>>()?;
    b.conclusions(&order);
    b.build().map_err(StructureError::Invalid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_examples() {
        assert_eq!(
            parse_formula("X * Y").unwrap(),
            Formula::tensor(Formula::var("X"), Formula::var("Y"))
        );
        assert_eq!(parse_formula("1").unwrap(), Formula::One);
        assert_eq!(parse_formula("bot").unwrap(), Formula::Bot);
        assert_eq!(
            parse_formula("X^ | Y^").unwrap(),
            Formula::par(Formula::dual_var("X"), Formula::dual_var("Y"))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("A * B | C").unwrap();
        assert_eq!(
            f,
            Formula::par(
                Formula::tensor(Formula::var("A"), Formula::var("B")),
                Formula::var("C")
            )
        );
        let g = parse_formula("A * B * C").unwrap();
        assert_eq!(
            g,
            Formula::tensor(Formula::var("A"), Formula::tensor(Formula::var("B"), Formula::var("C")))
        );
        assert_eq!(parse_formula("(A)").unwrap(), Formula::var("A"));
    }

    #[test]
    fn formula_errors() {
        let e = parse_formula("X^^").unwrap_err();
        assert_eq!(e.column, 3);
        assert!(parse_formula("(X * Y)^").is_err());
        assert!(parse_formula("X *").is_err());
        assert!(parse_formula("X Y").is_err());
        assert!(parse_formula("1^").is_err());
        assert!(parse_formula("").is_err());
        let e = parse_formula("X & Y").unwrap_err();
        assert_eq!(e.column, 3);
    }

    #[test]
    fn doubly_auxiliary_port_is_rejected() {
        let text = "\
port p : X
port q : X^
port r : X
port s : X^
port t : X * X
port u : X * X
cell a : ax(p, q)
cell b : ax(r, s)
cell t1 : tensor(p, r ; t)
cell t2 : tensor(p, r ; u)
conclusions: q, s, t, u
";
        let err = parse_proof_structure(text).unwrap_err();
        let StructureError::Invalid(BuildError::Invalid(v)) = err else { panic!("{err:?}") };
        assert!(v.iter().any(|v| matches!(v, super::super::Violation::MultiplyAuxiliary { .. })));
    }

    #[test]
    fn structure_syntax_errors() {
        let e = parse_proof_structure("port p : X\ncell a : ax(p)\nconclusions: p").unwrap_err();
        assert!(matches!(e, StructureError::Syntax(ParseError { line: 2, .. })));
        let e = parse_proof_structure("port p : X\nport q : X^\ncell a : ax(p, q)\n").unwrap_err();
        assert!(matches!(e, StructureError::Syntax(_)));
        let e = parse_proof_structure("port p : X\ncell a : ax(p, zz)\nconclusions: p").unwrap_err();
        assert!(matches!(e, StructureError::Build { line: 2, .. }));
        let e = parse_proof_structure("wire p : X\nconclusions:").unwrap_err();
        assert!(matches!(e, StructureError::Syntax(ParseError { line: 1, .. })));
    }

    #[test]
    fn conclusions_must_match_computed_set() {
        let text = "port p : X\nport q : X^\ncell a : ax(p, q)\nconclusions: p\n";
        let e = parse_proof_structure(text).unwrap_err();
        assert!(e.to_string().contains("missing from the conclusion list"));
    }
}
