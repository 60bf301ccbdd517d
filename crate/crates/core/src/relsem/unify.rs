use std::fmt;

use super::term::RelTerm;

/// An idempotent substitution from variable names to terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    // sorted by variable; substitutions are small, so a vector beats a map
    map: Vec<(String, RelTerm)>,
}

/// Sorts bindings by variable, a later binding of a variable replacing an
/// earlier one.
fn sorted(bindings: impl IntoIterator<Item = (String, RelTerm)>) -> Vec<(String, RelTerm)> {
    let mut v: Vec<(String, RelTerm)> = bindings.into_iter().collect();
    v.reverse();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v.dedup_by(|later, earlier| later.0 == earlier.0);
    v
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn get(&self, var: &str) -> Option<&RelTerm> {
        self.map
            .binary_search_by(|(v, _)| v.as_str().cmp(var))
            .ok()
            .map(|i| &self.map[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &RelTerm)> {
        self.map.iter().map(|(v, t)| (v, t))
    }

    pub fn domain(&self) -> impl Iterator<Item = &String> {
        self.map.iter().map(|(v, _)| v)
    }

    /// Builds a substitution from bindings. Returns `None` if the result would
    /// not be idempotent (a bound variable occurs in some image).
    pub fn from_bindings(bindings: impl IntoIterator<Item = (String, RelTerm)>) -> Option<Self> {
        let map = sorted(bindings);
        for (_, t) in &map {
            if map.iter().any(|(v, _)| t.occurs(v)) {
                return None;
            }
        }
        Some(Substitution { map })
    }

    /// Trusted variant of [`Substitution::from_bindings`] for callers that
    /// produce fully resolved images.
    pub(crate) fn from_idempotent(bindings: impl IntoIterator<Item = (String, RelTerm)>) -> Self {
        let s = Substitution { map: sorted(bindings) };
        debug_assert!(Substitution::from_bindings(s.map.clone()).is_some());
        s
    }

    pub fn apply(&self, t: &RelTerm) -> RelTerm {
        if self.map.is_empty() {
            return t.clone();
        }
        match t {
            RelTerm::Var(v) => self.get(v).cloned().unwrap_or_else(|| t.clone()),
            RelTerm::Pair(a, b) => RelTerm::pair(self.apply(a), self.apply(b)),
            _ => t.clone(),
        }
    }

    /// Adds `var ↦ t`, rewriting existing images so the result stays
    /// idempotent. `t` must already be normalised by `self` and must not
    /// mention `var`.
    fn bind(&mut self, var: String, t: RelTerm) {
        let single = Substitution { map: vec![(var.clone(), t.clone())] };
        for (_, image) in self.map.iter_mut() {
            if image.occurs(&var) {
                *image = single.apply(image);
            }
        }
        match self.map.binary_search_by(|(v, _)| v.cmp(&var)) {
            Ok(i) => self.map[i].1 = t,
            Err(i) => self.map.insert(i, (var, t)),
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "?{v}={t}")?;
        }
        write!(f, "}}")
    }
}

/// Apply the substitution to a term.
pub fn apply_subst(s: &Substitution, t: &RelTerm) -> RelTerm {
    s.apply(t)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnifyError {
    #[error("clash between {0} and {1}")]
    Clash(RelTerm, RelTerm),
    #[error("occurs check: ?{0} occurs in {1}")]
    Occurs(String, RelTerm),
}

/// Most general unifier of two terms, with occurs check.
pub fn mgu(t1: &RelTerm, t2: &RelTerm) -> Result<Substitution, UnifyError> {
    let mut s = Substitution::new();
    let mut stack = vec![(t1.clone(), t2.clone())];
    while let Some((a, b)) = stack.pop() {
        let a = s.apply(&a);
        let b = s.apply(&b);
        if a == b {
            continue;
        }
        match (a, b) {
            (RelTerm::Var(v), t) | (t, RelTerm::Var(v)) => {
                if t.occurs(&v) {
                    return Err(UnifyError::Occurs(v.to_string(), t));
                }
                s.bind(v.to_string(), t);
            }
            (RelTerm::Pair(a1, a2), RelTerm::Pair(b1, b2)) => {
                stack.push(((*a2).clone(), (*b2).clone()));
                stack.push(((*a1).clone(), (*b1).clone()));
            }
            (a, b) => return Err(UnifyError::Clash(a, b)),
        }
    }
    Ok(s)
}
