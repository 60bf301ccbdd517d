use super::term::RelTerm;

pub const DEFAULT_FRESH_PREFIX: &str = "?_g";

/// Counter-based supply of fresh variables, `?_g0`, `?_g1`, ...
///
/// One supply belongs to one run; names are only fresh relative to the
/// terms produced by that run and the (ground) inputs.
#[derive(Debug, Clone)]
pub struct FreshNames {
    prefix: String,
    next: usize,
}

impl FreshNames {
    /// A leading `?` in `prefix` is the variable sigil and is dropped.
    pub fn new(prefix: &str) -> Self {
        let prefix = prefix.strip_prefix('?').unwrap_or(prefix).to_string();
        FreshNames { prefix, next: 0 }
    }

    pub fn next_name(&mut self) -> String {
        let n = format!("{}{}", self.prefix, self.next);
        self.next += 1;
        n
    }

    pub fn next_var(&mut self) -> RelTerm {
        RelTerm::var(self.next_name())
    }

    pub fn issued(&self) -> usize {
        self.next
    }

    /// The issue number of `name` if this supply produced it.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        let digits = name.strip_prefix(self.prefix.as_str())?;
        if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
            return None;
        }
        let i: usize = digits.parse().ok()?;
        (i < self.next).then_some(i)
    }
}

impl Default for FreshNames {
    fn default() -> Self {
        FreshNames::new(DEFAULT_FRESH_PREFIX)
    }
}
