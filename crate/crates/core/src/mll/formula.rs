use std::fmt;

/// A formula of multiplicative linear logic.
///
/// Negation is only stored on propositional variables; the dual of a
/// compound formula is computed with [`Formula::dual`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Dual(String),
    One,
    Bot,
    Tensor(Box<Formula>, Box<Formula>),
    Par(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    pub fn dual_var(name: impl Into<String>) -> Self {
        Formula::Dual(name.into())
    }

    pub fn tensor(left: Formula, right: Formula) -> Self {
        Formula::Tensor(Box::new(left), Box::new(right))
    }

    pub fn par(left: Formula, right: Formula) -> Self {
        Formula::Par(Box::new(left), Box::new(right))
    }

    /// Linear negation, pushed to the atoms by De Morgan.
    pub fn dual(&self) -> Formula {
        match self {
            Formula::Var(x) => Formula::Dual(x.clone()),
            Formula::Dual(x) => Formula::Var(x.clone()),
            Formula::One => Formula::Bot,
            Formula::Bot => Formula::One,
            Formula::Tensor(a, b) => Formula::par(a.dual(), b.dual()),
            Formula::Par(a, b) => Formula::tensor(a.dual(), b.dual()),
        }
    }

    /// True for `X` and `X^`.
    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Var(_) | Formula::Dual(_))
    }

    /// Number of literal leaves (units are not counted).
    pub fn literal_count(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Dual(_) => 1,
            Formula::One | Formula::Bot => 0,
            Formula::Tensor(a, b) | Formula::Par(a, b) => a.literal_count() + b.literal_count(),
        }
    }

    /// Number of nodes in the formula tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Dual(_) | Formula::One | Formula::Bot => 1,
            Formula::Tensor(a, b) | Formula::Par(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Tensor(a, b) | Formula::Par(a, b) => 1 + a.depth().max(b.depth()),
            _ => 0,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(x) => write!(f, "{x}"),
            Formula::Dual(x) => write!(f, "{x}^"),
            Formula::One => write!(f, "1"),
            Formula::Bot => write!(f, "bot"),
            // `*` binds tighter than `|`, both associate to the right.
            Formula::Tensor(a, b) => {
                if matches!(**a, Formula::Tensor(..) | Formula::Par(..)) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                if matches!(**b, Formula::Par(..)) {
                    write!(f, " * ({b})")
                } else {
                    write!(f, " * {b}")
                }
            }
            Formula::Par(a, b) => {
                if matches!(**a, Formula::Par(..)) {
                    write!(f, "({a}) | {b}")
                } else {
                    write!(f, "{a} | {b}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn de_morgan() {
        assert_eq!(Formula::One.dual(), Formula::Bot);
        let t = Formula::tensor(Formula::var("X"), Formula::var("Y"));
        assert_eq!(
            t.dual(),
            Formula::par(Formula::dual_var("X"), Formula::dual_var("Y"))
        );
        let p = Formula::par(Formula::var("X"), Formula::Bot);
        assert_eq!(p.dual().dual(), p);
    }

    #[test]
    fn display_minimal_parens() {
        let a = Formula::var("A");
        let b = Formula::var("B");
        let t = Formula::tensor(a.clone(), b.clone());
        assert_eq!(t.to_string(), "A * B");
        assert_eq!(Formula::par(t.clone(), t.dual()).to_string(), "A * B | A^ | B^");
        assert_eq!(Formula::tensor(t.clone(), b.clone()).to_string(), "(A * B) * B");
        assert_eq!(
            Formula::tensor(a.clone(), Formula::par(a, b)).to_string(),
            "A * (A | B)"
        );
    }
}
