use std::fmt;

use crate::mll::ParseError;

use super::syntax::SimpleType;

/// A point of the relational interpretation of a simple type: an atom at
/// the base type, `X -> a` (a finite multiset and a point) at arrow types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RPoint {
    Atom(String),
    Arrow(Multiset, Box<RPoint>),
}

/// A finite multiset, stored sorted so that equality ignores order and
/// respects multiplicity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset(Vec<RPoint>);

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, RPoint> {
        self.0.iter()
    }

    pub fn insert(&mut self, p: RPoint) {
        let i = self.0.partition_point(|q| q <= &p);
        self.0.insert(i, p);
    }

    /// Removes one occurrence; `false` if absent.
    pub fn remove_one(&mut self, p: &RPoint) -> bool {
        match self.0.binary_search(p) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn count(&self, p: &RPoint) -> usize {
        self.0.iter().filter(|q| *q == p).count()
    }

    /// Distinct elements with their multiplicities.
    pub fn distinct(&self) -> Vec<(&RPoint, usize)> {
        let mut out: Vec<(&RPoint, usize)> = Vec::new();
        for p in &self.0 {
            match out.last_mut() {
                Some((q, n)) if *q == p => *n += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Multiset union (sum of multiplicities).
    pub fn sum(&self, other: &Multiset) -> Multiset {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        v.sort();
        Multiset(v)
    }

    /// `self - other`, or `None` unless `other` is included in `self`.
    pub fn difference(&self, other: &Multiset) -> Option<Multiset> {
        let mut out = self.clone();
        for p in &other.0 {
            if !out.remove_one(p) {
                return None;
            }
        }
        Some(out)
    }
}

impl FromIterator<RPoint> for Multiset {
    fn from_iter<I: IntoIterator<Item = RPoint>>(iter: I) -> Self {
        let mut v: Vec<RPoint> = iter.into_iter().collect();
        v.sort();
        Multiset(v)
    }
}

impl RPoint {
    pub fn atom(name: impl Into<String>) -> Self {
        RPoint::Atom(name.into())
    }

    pub fn arrow(args: impl IntoIterator<Item = RPoint>, result: RPoint) -> Self {
        RPoint::Arrow(args.into_iter().collect(), Box::new(result))
    }

    /// True iff the point lives in the interpretation of `ty`.
    pub fn refines(&self, ty: &SimpleType) -> bool {
        match (self, ty) {
            (RPoint::Atom(_), SimpleType::Base) => true,
            (RPoint::Arrow(xs, r), SimpleType::Arrow(dom, cod)) => {
                xs.iter().all(|x| x.refines(dom)) && r.refines(cod)
            }
            _ => false,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            RPoint::Atom(_) => 1,
            RPoint::Arrow(xs, r) => 1 + xs.iter().map(RPoint::size).sum::<usize>() + r.size(),
        }
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RPoint::Atom(a) => write!(f, "{a}"),
            RPoint::Arrow(xs, r) => write!(f, "{xs} -> {r}"),
        }
    }
}

struct PointParser {
    chars: Vec<char>,
    pos: usize,
}

impl PointParser {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: 1, column: self.pos + 1, message: message.into() }
    }

    fn peek(&mut self) -> Option<char> {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
        self.chars.get(self.pos).copied()
    }

    fn point(&mut self) -> Result<RPoint, ParseError> {
        match self.peek() {
            Some('*') => {
                self.pos += 1;
                Ok(RPoint::atom("*"))
            }
            Some('(') => {
                self.pos += 1;
                let p = self.point()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some('[') => {
                self.pos += 1;
                let mut xs = Vec::new();
                if self.peek() == Some(']') {
                    self.pos += 1;
                } else {
                    loop {
                        xs.push(self.point()?);
                        match self.peek() {
                            Some(',') => self.pos += 1,
                            Some(']') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.err("expected `,` or `]`")),
                        }
                    }
                }
                if self.peek() == Some('-') && self.chars.get(self.pos + 1) == Some(&'>') {
                    self.pos += 2;
                } else if self.peek() == Some('→') {
                    self.pos += 1;
                } else {
                    return Err(self.err("expected `->` after a multiset"));
                }
                let r = self.point()?;
                Ok(RPoint::arrow(xs, r))
            }
            Some(c) if c.is_alphanumeric() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                Ok(RPoint::Atom(self.chars[start..self.pos].iter().collect()))
            }
            Some(c) => Err(self.err(format!("unexpected character `{c}`"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses `* | ident | [p1, ..., pn] -> p`.
pub fn parse_rpoint(text: &str) -> Result<RPoint, ParseError> {
    let mut p = PointParser { chars: text.chars().collect(), pos: 0 };
    let r = p.point()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input after point"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_equality() {
        let a = RPoint::atom("a");
        let b = RPoint::atom("b");
        let x: Multiset = [a.clone(), b.clone(), a.clone()].into_iter().collect();
        let y: Multiset = [b.clone(), a.clone(), a.clone()].into_iter().collect();
        assert_eq!(x, y);
        let z: Multiset = [a.clone(), b.clone()].into_iter().collect();
        assert_ne!(x, z);
        assert_eq!(x.count(&a), 2);
        assert_eq!(x.difference(&z).unwrap(), [a.clone()].into_iter().collect());
        assert_eq!(z.difference(&x), None);
        assert_eq!(z.sum(&[a.clone()].into_iter().collect()), x);
        assert_eq!(x.distinct(), vec![(&a, 2), (&b, 1)]);
    }

    #[test]
    fn parse_and_refine() {
        let p = parse_rpoint("[*] -> [] -> *").unwrap();
        assert_eq!(p, RPoint::arrow([RPoint::atom("*")], RPoint::arrow([], RPoint::atom("*"))));
        assert_eq!(p.to_string(), "[*] -> [] -> *");
        assert!(p.refines(&SimpleType::boolean()));
        assert!(!p.refines(&SimpleType::Base));
        let q = parse_rpoint("[[a] -> b, a] -> b").unwrap();
        assert_eq!(parse_rpoint(&q.to_string()).unwrap(), q);
        assert!(parse_rpoint("[*]").is_err());
        assert!(parse_rpoint("[*, ] -> *").is_err());
    }
}
