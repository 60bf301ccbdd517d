//! Membership in the relational interpretation of simply-typed λ-terms,
//! read as type inference in System R (non-idempotent intersection types).
//!
//! Contexts are split, never shared: the variable rule requires the
//! selected multiset to be exactly `[α]` and all others empty, and an
//! application sums the contexts used by the function and by each copy of
//! the argument.

use std::collections::HashMap;
use std::rc::Rc;

use super::point::{Multiset, RPoint};
use super::reduce::{is_normal, normalize, typecheck, TypeError};
use super::syntax::{LambdaTerm, SimpleType};

/// A typing context refined by multisets: `(name, type, multiset)`.
pub type RContext = Vec<(String, SimpleType, Multiset)>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SysRError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("term is not β-normal")]
    NotNormal,
    #[error("point {point} does not refine type {ty}")]
    PointRefinement { point: RPoint, ty: SimpleType },
    #[error("context multiset {multiset} for `{name}` does not refine {ty}")]
    ContextRefinement { name: String, multiset: Multiset, ty: SimpleType },
}

/// A System R derivation of `context ⊢ m : point`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub context: Vec<Multiset>,
    pub point: RPoint,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// `λy.M` at `Y -> α`, from `M` at `α` with `Y` appended to the context.
    Abs { body: Rc<Derivation> },
    /// `y N1 … Nk` at `α`: the head uses one copy of `head_point` from the
    /// context of `var`; `args` holds one derivation per element of each
    /// argument multiset, tagged with the argument index.
    Head { var: usize, head_point: RPoint, args: Vec<(usize, Rc<Derivation>)> },
}

impl Derivation {
    /// Checks that every context is exactly consumed: at a head node the
    /// context equals the head's `[γ]` plus the sum of the argument
    /// contexts; at an abstraction the body's context extends this one by
    /// the argument multiset.
    pub fn accounting_holds(&self) -> bool {
        match &self.rule {
            Rule::Abs { body } => {
                let RPoint::Arrow(ys, _) = &self.point else { return false };
                let mut expected = self.context.clone();
                expected.push(ys.clone());
                body.context == expected && body.accounting_holds()
            }
            Rule::Head { var, head_point, args } => {
                let mut total: Vec<Multiset> = vec![Multiset::new(); self.context.len()];
                if *var >= total.len() {
                    return false;
                }
                total[*var].insert(head_point.clone());
                for (_, d) in args {
                    if d.context.len() != total.len() || !d.accounting_holds() {
                        return false;
                    }
                    for (t, m) in total.iter_mut().zip(&d.context) {
                        *t = t.sum(m);
                    }
                }
                total == self.context
            }
        }
    }

    /// Total number of context elements, i.e. of variable uses.
    pub fn context_size(&self) -> usize {
        self.context.iter().map(Multiset::len).sum()
    }

    /// Number of head-rule nodes, i.e. of variable occurrences used.
    pub fn head_nodes(&self) -> usize {
        match &self.rule {
            Rule::Abs { body } => body.head_nodes(),
            Rule::Head { args, .. } => 1 + args.iter().map(|(_, d)| d.head_nodes()).sum::<usize>(),
        }
    }
}

fn check_preconditions(ctx: &RContext, m: &LambdaTerm, ty: &SimpleType, alpha: &RPoint) -> Result<(), SysRError> {
    if !is_normal(m) {
        return Err(SysRError::NotNormal);
    }
    let simple: Vec<(String, SimpleType)> = ctx.iter().map(|(n, t, _)| (n.clone(), t.clone())).collect();
    let found = typecheck(&simple, m)?;
    if found != *ty {
        return Err(TypeError::Mismatch { expected: ty.clone(), found }.into());
    }
    for (name, t, xs) in ctx {
        if !xs.iter().all(|x| x.refines(t)) {
            return Err(SysRError::ContextRefinement {
                name: name.clone(),
                multiset: xs.clone(),
                ty: t.clone(),
            });
        }
    }
    if !alpha.refines(ty) {
        return Err(SysRError::PointRefinement { point: alpha.clone(), ty: ty.clone() });
    }
    Ok(())
}

/// Searches a derivation of `ctx ⊢ m : alpha` for a β-normal `m` of type `ty`.
pub fn derive_point(
    ctx: &RContext,
    m: &LambdaTerm,
    ty: &SimpleType,
    alpha: &RPoint,
) -> Result<Option<Rc<Derivation>>, SysRError> {
    check_preconditions(ctx, m, ty, alpha)?;
    let mut env: Vec<(String, SimpleType)> = ctx.iter().map(|(n, t, _)| (n.clone(), t.clone())).collect();
    let multisets: Vec<Multiset> = ctx.iter().map(|(_, _, x)| x.clone()).collect();
    let mut solver = Solver { memo: HashMap::new() };
    let d = solver.solve(&mut env, &multisets, m, alpha);
    debug_assert!(d.as_ref().map_or(true, |d| alpha.refines(ty) && d.accounting_holds()));
    Ok(d)
}

/// `(X1, …, Xn, alpha)` belongs to the interpretation of `ctx ⊢ m : ty`.
pub fn check_point(ctx: &RContext, m: &LambdaTerm, ty: &SimpleType, alpha: &RPoint) -> Result<bool, SysRError> {
    Ok(derive_point(ctx, m, ty, alpha)?.is_some())
}

/// `alpha` belongs to the interpretation of the closed term `m : ty`;
/// `m` is normalised first.
pub fn check_judgment(m: &LambdaTerm, ty: &SimpleType, alpha: &RPoint) -> Result<bool, SysRError> {
    let found = typecheck(&[], m)?;
    if found != *ty {
        return Err(TypeError::Mismatch { expected: ty.clone(), found }.into());
    }
    check_point(&Vec::new(), &normalize(m), ty, alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolValue {
    IsTrue,
    IsFalse,
}

/// The point `[*] -> [] -> *`, which separates the two booleans.
pub fn true_point() -> RPoint {
    RPoint::arrow([RPoint::atom("*")], RPoint::arrow([], RPoint::atom("*")))
}

/// Evaluates a closed term of type `o -> o -> o` semantically.
pub fn boolean_eval(m: &LambdaTerm) -> Result<BoolValue, SysRError> {
    Ok(if check_judgment(m, &SimpleType::boolean(), &true_point())? {
        BoolValue::IsTrue
    } else {
        BoolValue::IsFalse
    })
}

type MemoKey = (usize, RPoint, Vec<Multiset>);

struct Solver {
    memo: HashMap<MemoKey, Option<Rc<Derivation>>>,
}

struct Task<'t> {
    arg: usize,
    term: &'t LambdaTerm,
    point: RPoint,
    // context indices that may be non-empty for this task
    free: Vec<usize>,
}

impl Solver {
    fn solve(
        &mut self,
        env: &mut Vec<(String, SimpleType)>,
        ctx: &[Multiset],
        m: &LambdaTerm,
        alpha: &RPoint,
    ) -> Option<Rc<Derivation>> {
        // A node's scope is fixed by its position in the term, so its address
        // identifies (term, scope).
        let key = (m as *const LambdaTerm as usize, alpha.clone(), ctx.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let out = self.solve_uncached(env, ctx, m, alpha);
        self.memo.insert(key, out.clone());
        out
    }

    fn solve_uncached(
        &mut self,
        env: &mut Vec<(String, SimpleType)>,
        ctx: &[Multiset],
        m: &LambdaTerm,
        alpha: &RPoint,
    ) -> Option<Rc<Derivation>> {
        if let LambdaTerm::Abs(y, ty, body) = m {
            let RPoint::Arrow(ys, beta) = alpha else { return None };
            env.push((y.clone(), ty.clone()));
            let mut inner = ctx.to_vec();
            inner.push(ys.clone());
            let d = self.solve(env, &inner, body, beta);
            env.pop();
            return d.map(|body| {
                Rc::new(Derivation { context: ctx.to_vec(), point: alpha.clone(), rule: Rule::Abs { body } })
            });
        }

        let mut args = Vec::new();
        let mut head = m;
        while let LambdaTerm::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        let LambdaTerm::Var(y) = head else { return None };
        let var = env.iter().rposition(|(n, _)| n == y)?;

        let candidates: Vec<RPoint> = ctx[var].distinct().into_iter().map(|(p, _)| p.clone()).collect();
        for gamma in candidates {
            let mut rest = ctx.to_vec();
            rest[var].remove_one(&gamma);

            // γ = Y1 -> … -> Yk -> α
            let mut tasks = Vec::new();
            let mut cur = &gamma;
            let mut shape_ok = true;
            for (i, n) in args.iter().enumerate() {
                let RPoint::Arrow(ys, next) = cur else {
                    shape_ok = false;
                    break;
                };
                let fv = n.free_vars();
                let free: Vec<usize> = (0..env.len())
                    .filter(|&j| fv.contains(&env[j].0) && env.iter().rposition(|(n, _)| *n == env[j].0) == Some(j))
                    .collect();
                for beta in ys.iter() {
                    tasks.push(Task { arg: i, term: n, point: beta.clone(), free: free.clone() });
                }
                cur = next;
            }
            if !shape_ok || cur != alpha {
                continue;
            }
            let mut found = Vec::new();
            if self.distribute(env, &tasks, 0, rest, &mut found) {
                let args = found.into_iter().collect();
                return Some(Rc::new(Derivation {
                    context: ctx.to_vec(),
                    point: alpha.clone(),
                    rule: Rule::Head { var, head_point: gamma, args },
                }));
            }
        }
        None
    }

    /// Splits `rest` among `tasks[idx..]`, each task being one element check
    /// of an argument.
    fn distribute(
        &mut self,
        env: &mut Vec<(String, SimpleType)>,
        tasks: &[Task<'_>],
        idx: usize,
        rest: Vec<Multiset>,
        found: &mut Vec<(usize, Rc<Derivation>)>,
    ) -> bool {
        // every remaining resource must be usable by some remaining task
        for (j, xs) in rest.iter().enumerate() {
            if !xs.is_empty() && !tasks[idx..].iter().any(|t| t.free.contains(&j)) {
                return false;
            }
        }
        if idx == tasks.len() {
            return true;
        }
        let task = &tasks[idx];
        if idx + 1 == tasks.len() {
            return match self.solve(env, &rest, task.term, &task.point) {
                Some(d) => {
                    found.push((task.arg, d));
                    true
                }
                None => false,
            };
        }
        for part in sub_multisets(&rest, &task.free) {
            let Some(d) = self.solve(env, &part, task.term, &task.point) else { continue };
            let remaining: Vec<Multiset> = rest
                .iter()
                .zip(&part)
                .map(|(r, p)| r.difference(p).expect("part is a sub-multiset"))
                .collect();
            found.push((task.arg, d));
            if self.distribute(env, tasks, idx + 1, remaining, found) {
                return true;
            }
            found.pop();
        }
        false
    }
}

/// All tuples of sub-multisets of `ctx`, non-empty only at `free` indices.
fn sub_multisets(ctx: &[Multiset], free: &[usize]) -> Vec<Vec<Multiset>> {
    let mut out = vec![vec![Multiset::new(); ctx.len()]];
    for &j in free {
        for (p, count) in ctx[j].distinct() {
            let mut next = Vec::with_capacity(out.len() * (count + 1));
            for base in &out {
                for k in 0..=count {
                    let mut v = base.clone();
                    for _ in 0..k {
                        v[j].insert(p.clone());
                    }
                    next.push(v);
                }
            }
            out = next;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::{parse_rpoint, parse_term, parse_type};

    fn t(s: &str) -> LambdaTerm {
        parse_term(s).unwrap()
    }

    fn p(s: &str) -> RPoint {
        parse_rpoint(s).unwrap()
    }

    const TRUE: &str = "\\x:o.\\y:o.x";
    const FALSE: &str = "\\x:o.\\y:o.y";

    #[test]
    fn boolean_points() {
        let b = SimpleType::boolean();
        assert!(check_point(&Vec::new(), &t(TRUE), &b, &p("[*] -> [] -> *")).unwrap());
        assert!(!check_point(&Vec::new(), &t(FALSE), &b, &p("[*] -> [] -> *")).unwrap());
        assert!(check_point(&Vec::new(), &t(FALSE), &b, &p("[] -> [*] -> *")).unwrap());
        assert!(!check_point(&Vec::new(), &t(TRUE), &b, &p("[] -> [*] -> *")).unwrap());
        // the head uses exactly one copy
        assert!(!check_point(&Vec::new(), &t(TRUE), &b, &p("[*, *] -> [] -> *")).unwrap());
        // non-idempotent: the unused argument must be empty
        assert!(!check_point(&Vec::new(), &t(TRUE), &b, &p("[*] -> [*] -> *")).unwrap());
        let id = parse_type("o -> o").unwrap();
        assert!(check_point(&Vec::new(), &t("\\x:o.x"), &id, &p("[*] -> *")).unwrap());
        assert!(!check_point(&Vec::new(), &t("\\x:o.x"), &id, &p("[a] -> b")).unwrap());
    }

    #[test]
    fn context_is_summed_over_argument_copies() {
        // f : o -> o, x : o ⊢ f (f x)
        let o_o = parse_type("o -> o").unwrap();
        let m = t("f (f x)");
        let ctx = |fs: &[&str], xs: &[&str]| -> RContext {
            vec![
                ("f".into(), o_o.clone(), fs.iter().map(|s| p(s)).collect()),
                ("x".into(), SimpleType::Base, xs.iter().map(|s| p(s)).collect()),
            ]
        };
        let c = p("c");
        assert!(check_point(&ctx(&["[b] -> c", "[a] -> b"], &["a"]), &m, &SimpleType::Base, &c).unwrap());
        // one copy of f is not enough for two uses
        assert!(!check_point(&ctx(&["[a] -> a"], &["a"]), &m, &SimpleType::Base, &p("a")).unwrap());
        assert!(check_point(&ctx(&["[a] -> a", "[a] -> a"], &["a"]), &m, &SimpleType::Base, &p("a")).unwrap());
        // x cannot be used twice
        assert!(!check_point(&ctx(&["[b] -> c", "[a] -> b"], &["a", "a"]), &m, &SimpleType::Base, &c).unwrap());

        // g : o -> o -> o ⊢ g x x needs two copies of x's point
        let g = parse_type("o -> o -> o").unwrap();
        let ctx2: RContext = vec![
            ("g".into(), g, [p("[a] -> [a] -> b")].into_iter().collect()),
            ("x".into(), SimpleType::Base, [p("a"), p("a")].into_iter().collect()),
        ];
        let d = derive_point(&ctx2, &t("g x x"), &SimpleType::Base, &p("b")).unwrap().unwrap();
        assert!(d.accounting_holds());
        assert_eq!(d.head_nodes(), 3);
        assert_eq!(d.context_size(), 3);
    }

    #[test]
    fn arguments_with_multiset_points() {
        // ⊢ λf:o->o. λx:o. f x at [[a] -> b] -> [a] -> b
        let ty = parse_type("(o -> o) -> o -> o").unwrap();
        let m = t("\\f:o -> o. \\x:o. f x");
        assert!(check_point(&Vec::new(), &m, &ty, &p("[[a] -> b] -> [a] -> b")).unwrap());
        assert!(!check_point(&Vec::new(), &m, &ty, &p("[[a] -> b] -> [b] -> b")).unwrap());
        // f applied to an argument used zero times
        assert!(check_point(&Vec::new(), &m, &ty, &p("[[] -> b] -> [] -> b")).unwrap());
    }

    #[test]
    fn judgments_normalise_first() {
        let b = SimpleType::boolean();
        let m = t("(\\z:o -> o -> o. z) (\\x:o.\\y:o.x)");
        assert!(check_judgment(&m, &b, &true_point()).unwrap());
        assert!(check_judgment(&t(FALSE), &b, &p("[] -> [*] -> *")).unwrap());
        assert!(!check_judgment(&t(TRUE), &b, &p("[] -> [*] -> *")).unwrap());
        assert_eq!(boolean_eval(&t(TRUE)).unwrap(), BoolValue::IsTrue);
        assert_eq!(boolean_eval(&t(FALSE)).unwrap(), BoolValue::IsFalse);
        assert_eq!(
            boolean_eval(&t("(\\z:o -> o -> o. z) (\\x:o.\\y:o.y)")).unwrap(),
            BoolValue::IsFalse
        );
    }

    #[test]
    fn preconditions() {
        let b = SimpleType::boolean();
        assert_eq!(
            check_point(&Vec::new(), &t("(\\z:o -> o -> o. z) (\\x:o.\\y:o.x)"), &b, &true_point()),
            Err(SysRError::NotNormal)
        );
        assert!(matches!(
            check_point(&Vec::new(), &t(TRUE), &b, &p("*")),
            Err(SysRError::PointRefinement { .. })
        ));
        assert!(matches!(boolean_eval(&t("\\x:o. x")), Err(SysRError::Type(_))));
        let ctx: RContext = vec![("x".into(), SimpleType::Base, [p("[] -> a")].into_iter().collect())];
        assert!(matches!(
            check_point(&ctx, &t("x"), &SimpleType::Base, &p("a")),
            Err(SysRError::ContextRefinement { .. })
        ));
    }

    #[test]
    fn shadowed_variables() {
        // λx:o. λx:o. x is `false`
        let m = t("\\x:o. \\x:o. x");
        assert_eq!(boolean_eval(&m).unwrap(), BoolValue::IsFalse);
        assert!(check_judgment(&m, &SimpleType::boolean(), &p("[] -> [*] -> *")).unwrap());
    }
}
