use std::fmt;

use crate::relsem::{RelTerm, Substitution};

/// Coefficient of a term in a [`Series`]: an upward (`Pos`) or downward
/// (`Neg`) token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// Finite formal sum of terms with coefficients in {-1, +1}; absent terms
/// have coefficient 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Series {
    // sorted by term; series hold a handful of terms
    terms: Vec<(RelTerm, Sign)>,
}

impl Series {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(t: RelTerm, s: Sign) -> Self {
        Series { terms: vec![(t, s)] }
    }

    pub fn pos(t: RelTerm) -> Self {
        Series::single(t, Sign::Pos)
    }

    pub fn neg(t: RelTerm) -> Self {
        Series::single(t, Sign::Neg)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, t: &RelTerm) -> i8 {
        match self.find(t) {
            Ok(i) if self.terms[i].1 == Sign::Pos => 1,
            Ok(_) => -1,
            Err(_) => 0,
        }
    }

    fn find(&self, t: &RelTerm) -> Result<usize, usize> {
        self.terms.binary_search_by(|(u, _)| u.cmp(t))
    }

    /// Terms in increasing order with their signs.
    pub fn iter(&self) -> impl Iterator<Item = (&RelTerm, &Sign)> {
        self.terms.iter().map(|(t, s)| (t, s))
    }

    pub fn with_sign(&self, s: Sign) -> impl Iterator<Item = &RelTerm> {
        self.terms.iter().filter(move |(_, x)| *x == s).map(|(t, _)| t)
    }

    /// Adds one signed term in place; `false` (and no change) if the
    /// coefficient would leave {-1, 0, +1}.
    pub fn add_term(&mut self, t: RelTerm, s: Sign) -> bool {
        match self.find(&t) {
            Err(i) => {
                self.terms.insert(i, (t, s));
                true
            }
            Ok(i) => {
                if self.terms[i].1 == s {
                    return false;
                }
                self.terms.remove(i);
                true
            }
        }
    }

    /// Partial sum: `None` when some coefficient would overflow.
    pub fn checked_add(&self, other: &Series) -> Option<Series> {
        let mut out = self.clone();
        for (t, s) in &other.terms {
            let s = *s;
            if !out.add_term(t.clone(), s) {
                return None;
            }
        }
        Some(out)
    }

    pub fn negate(&self) -> Series {
        Series { terms: self.terms.iter().map(|(t, s)| (t.clone(), s.flip())).collect() }
    }

    /// A positive term and a distinct negative term, if both exist.
    pub fn opposite_pair(&self) -> Option<(&RelTerm, &RelTerm)> {
        let p = self.with_sign(Sign::Pos).next()?;
        let n = self.with_sign(Sign::Neg).next()?;
        Some((p, n))
    }

    /// Rewrites every term through `s`, re-summing coefficients; `None` if
    /// two equally signed terms collapse.
    pub fn substitute(&self, s: &Substitution) -> Option<Series> {
        let mut out = Series::zero();
        for (t, sign) in &self.terms {
            let sign = *sign;
            if !out.add_term(s.apply(t), sign) {
                return None;
            }
        }
        Some(out)
    }
}

/// Pointwise partial sum of two series.
pub fn series_add(s: &Series, t: &Series) -> Option<Series> {
    s.checked_add(t)
}

impl FromIterator<(RelTerm, Sign)> for Series {
    /// Panics on overflowing coefficients; meant for literals in tests and
    /// examples.
    fn from_iter<I: IntoIterator<Item = (RelTerm, Sign)>>(iter: I) -> Self {
        let mut out = Series::zero();
        for (t, s) in iter {
            assert!(out.add_term(t, s), "series coefficient out of range");
        }
        out
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, s)) in self.terms.iter().enumerate() {
            match (i, s) {
                (0, Sign::Pos) => write!(f, "{t}")?,
                (0, Sign::Neg) => write!(f, "-{t}")?,
                (_, Sign::Pos) => write!(f, " + {t}")?,
                (_, Sign::Neg) => write!(f, " - {t}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> RelTerm {
        RelTerm::atom("a")
    }

    fn b() -> RelTerm {
        RelTerm::atom("b")
    }

    #[test]
    fn partial_sum() {
        assert_eq!(series_add(&Series::pos(a()), &Series::neg(a())), Some(Series::zero()));
        assert_eq!(series_add(&Series::pos(a()), &Series::pos(a())), None);
        let s = series_add(&Series::pos(a()), &Series::neg(b())).unwrap();
        assert_eq!(s.coefficient(&a()), 1);
        assert_eq!(s.coefficient(&b()), -1);
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_string(), "a - b");
    }

    #[test]
    fn substitution_merges_terms() {
        let s: Series = [(RelTerm::var("x"), Sign::Pos), (a(), Sign::Neg)].into_iter().collect();
        let sub = crate::relsem::mgu(&RelTerm::var("x"), &a()).unwrap();
        assert!(s.substitute(&sub).unwrap().is_zero());
        let t: Series = [(RelTerm::var("x"), Sign::Pos), (a(), Sign::Pos)].into_iter().collect();
        assert_eq!(t.substitute(&sub), None);
    }

    #[test]
    fn opposite_pair() {
        let s: Series = [(a(), Sign::Neg), (b(), Sign::Pos)].into_iter().collect();
        assert_eq!(s.opposite_pair(), Some((&b(), &a())));
        assert_eq!(Series::pos(a()).opposite_pair(), None);
    }
}
