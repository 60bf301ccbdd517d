use std::collections::BTreeSet;

use super::syntax::{LambdaTerm, SimpleType};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("`{fun}` has type {ty}, which is not a function type")]
    NotAFunction { fun: String, ty: SimpleType },
    #[error("argument `{arg}` has type {found}, expected {expected}")]
    ArgumentMismatch { arg: String, expected: SimpleType, found: SimpleType },
    #[error("term has type {found}, expected {expected}")]
    Mismatch { expected: SimpleType, found: SimpleType },
}

/// The simple type of `m` under `ctx` (later entries shadow earlier ones).
pub fn typecheck(ctx: &[(String, SimpleType)], m: &LambdaTerm) -> Result<SimpleType, TypeError> {
    let mut env = ctx.to_vec();
    infer(&mut env, m)
}

fn infer(env: &mut Vec<(String, SimpleType)>, m: &LambdaTerm) -> Result<SimpleType, TypeError> {
    match m {
        LambdaTerm::Var(x) => env
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, t)| t.clone())
            .ok_or_else(|| TypeError::Unbound(x.clone())),
        LambdaTerm::Abs(x, t, b) => {
            env.push((x.clone(), t.clone()));
            let body = infer(env, b);
            env.pop();
            Ok(SimpleType::arrow(t.clone(), body?))
        }
        LambdaTerm::App(f, a) => {
            let tf = infer(env, f)?;
            let ta = infer(env, a)?;
            match tf {
                SimpleType::Arrow(dom, cod) if *dom == ta => Ok(*cod),
                SimpleType::Arrow(dom, _) => Err(TypeError::ArgumentMismatch {
                    arg: a.to_string(),
                    expected: *dom,
                    found: ta,
                }),
                SimpleType::Base => Err(TypeError::NotAFunction { fun: f.to_string(), ty: tf }),
            }
        }
    }
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    (0..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply of names")
}

/// Capture-avoiding substitution `m[x := n]`.
pub fn substitute(m: &LambdaTerm, x: &str, n: &LambdaTerm) -> LambdaTerm {
    let fv_n = n.free_vars();
    subst(m, x, n, &fv_n)
}

fn subst(m: &LambdaTerm, x: &str, n: &LambdaTerm, fv_n: &BTreeSet<String>) -> LambdaTerm {
    match m {
        LambdaTerm::Var(y) if y == x => n.clone(),
        LambdaTerm::Var(_) => m.clone(),
        LambdaTerm::App(f, a) => LambdaTerm::app(subst(f, x, n, fv_n), subst(a, x, n, fv_n)),
        LambdaTerm::Abs(y, _, _) if y == x => m.clone(),
        LambdaTerm::Abs(y, t, b) => {
            if fv_n.contains(y) && b.free_vars().contains(x) {
                let mut avoid = fv_n.clone();
                avoid.extend(b.free_vars());
                avoid.insert(x.to_string());
                let z = fresh_name(y, &avoid);
                let renamed = substitute(b, y, &LambdaTerm::Var(z.clone()));
                LambdaTerm::abs(z, t.clone(), subst(&renamed, x, n, fv_n))
            } else {
                LambdaTerm::abs(y.clone(), t.clone(), subst(b, x, n, fv_n))
            }
        }
    }
}

/// β-normal form. Terminates on simply typable terms.
pub fn normalize(m: &LambdaTerm) -> LambdaTerm {
    match m {
        LambdaTerm::Var(_) => m.clone(),
        LambdaTerm::Abs(x, t, b) => LambdaTerm::abs(x.clone(), t.clone(), normalize(b)),
        LambdaTerm::App(f, a) => match normalize(f) {
            LambdaTerm::Abs(x, _, b) => normalize(&substitute(&b, &x, a)),
            g => LambdaTerm::app(g, normalize(a)),
        },
    }
}

pub fn is_normal(m: &LambdaTerm) -> bool {
    match m {
        LambdaTerm::Var(_) => true,
        LambdaTerm::Abs(_, _, b) => is_normal(b),
        LambdaTerm::App(f, a) => !matches!(**f, LambdaTerm::Abs(..)) && is_normal(f) && is_normal(a),
    }
}

/// One leftmost-outermost β-step, if any redex exists.
pub fn beta_step(m: &LambdaTerm) -> Option<LambdaTerm> {
    match m {
        LambdaTerm::Var(_) => None,
        LambdaTerm::Abs(x, t, b) => beta_step(b).map(|b| LambdaTerm::abs(x.clone(), t.clone(), b)),
        LambdaTerm::App(f, a) => {
            if let LambdaTerm::Abs(x, _, b) = &**f {
                return Some(substitute(b, x, a));
            }
            if let Some(g) = beta_step(f) {
                return Some(LambdaTerm::app(g, (**a).clone()));
            }
            beta_step(a).map(|b| LambdaTerm::app((**f).clone(), b))
        }
    }
}
