#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relcheck::lambda::{LambdaTerm, Multiset, RContext, RPoint, SimpleType};
use relcheck::mll::{CellKind, Formula, PortId, ProofStructure, StructureBuilder};
use relcheck::relsem::RelTerm;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data(name: &str) -> String {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn literal(rng: &mut impl Rng) -> Formula {
    let name = ["X", "Y"][rng.gen_range(0..2)];
    if rng.gen_bool(0.5) {
        Formula::var(name)
    } else {
        Formula::dual_var(name)
    }
}

fn small_formula(rng: &mut impl Rng) -> Formula {
    match rng.gen_range(0..10) {
        0 => Formula::tensor(literal(rng), literal(rng)),
        1 => Formula::par(literal(rng), literal(rng)),
        2 => Formula::One,
        _ => literal(rng),
    }
}

/// A random well-formed proof-structure with at most `max_cells` cells.
///
/// Cells are added bottom-up over a pool of open ports (principal but not
/// yet auxiliary): axioms and units open ports, tensor/par merge two, cuts
/// close two dual ones. The remaining open ports are the conclusions. With
/// small probability an isolated axiom-cut loop is added.
pub fn random_structure(rng: &mut impl Rng, max_cells: usize) -> ProofStructure {
    let mut b = StructureBuilder::new();
    let mut open: Vec<(PortId, Formula)> = Vec::new();
    let mut cells = 0;
    let mut fresh_port = 0;
    let mut new_port = |b: &mut StructureBuilder, f: Formula| {
        fresh_port += 1;
        b.port(format!("p{}", fresh_port - 1), f).unwrap()
    };

    if max_cells >= 2 && rng.gen_bool(0.1) {
        let f = small_formula(rng);
        let p = new_port(&mut b, f.clone());
        let q = new_port(&mut b, f.dual());
        b.cell(format!("c{cells}"), CellKind::Ax, &[p, q], &[]).unwrap();
        b.cell(format!("c{}", cells + 1), CellKind::Cut, &[], &[p, q]).unwrap();
        cells += 2;
    }

    let target = rng.gen_range(1..=max_cells.max(1));
    while cells < target {
        let name = format!("c{cells}");
        let roll = rng.gen_range(0..100);
        let dual_pair = find_dual_pair(&open, rng);
        if open.len() < 2 || roll < 30 {
            if roll < 4 {
                let (kind, f) = if rng.gen_bool(0.5) { (CellKind::One, Formula::One) } else { (CellKind::Bot, Formula::Bot) };
                let p = new_port(&mut b, f.clone());
                b.cell(name, kind, &[p], &[]).unwrap();
                open.push((p, f));
            } else {
                let f = small_formula(rng);
                let p = new_port(&mut b, f.clone());
                let q = new_port(&mut b, f.dual());
                b.cell(name, CellKind::Ax, &[p, q], &[]).unwrap();
                open.push((p, f.clone()));
                open.push((q, f.dual()));
            }
        } else if roll < 45 && dual_pair.is_some() {
            let (i, j) = dual_pair.unwrap();
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            let (q, _) = open.remove(hi);
            let (p, _) = open.remove(lo);
            b.cell(name, CellKind::Cut, &[], &[p, q]).unwrap();
        } else {
            open.shuffle(rng);
            let (l, fl) = open.pop().unwrap();
            let (r, fr) = open.pop().unwrap();
            let (kind, f) = if rng.gen_bool(0.5) {
                (CellKind::Tensor, Formula::tensor(fl, fr))
            } else {
                (CellKind::Par, Formula::par(fl, fr))
            };
            let p = new_port(&mut b, f.clone());
            b.cell(name, kind, &[p], &[l, r]).unwrap();
            open.push((p, f));
        }
        cells += 1;
    }
    b.build().expect("generator produces valid structures")
}

fn find_dual_pair(open: &[(PortId, Formula)], rng: &mut impl Rng) -> Option<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..open.len() {
        for j in i + 1..open.len() {
            if open[i].1.dual() == open[j].1 {
                pairs.push((i, j));
            }
        }
    }
    pairs.choose(rng).copied()
}

/// Every ground point of the web of `f` over `atoms`.
pub fn web_points(f: &Formula, atoms: &[&str]) -> Vec<RelTerm> {
    match f {
        Formula::One | Formula::Bot => vec![RelTerm::Unit],
        Formula::Tensor(a, b) | Formula::Par(a, b) => {
            let right = web_points(b, atoms);
            web_points(a, atoms)
                .into_iter()
                .flat_map(|l| right.iter().map(move |r| RelTerm::pair(l.clone(), r.clone())))
                .collect()
        }
        _ => atoms.iter().map(|a| RelTerm::atom(*a)).collect(),
    }
}

/// Every conclusion point of `ps` over `atoms`.
pub fn all_points(ps: &ProofStructure, atoms: &[&str]) -> Vec<Vec<RelTerm>> {
    let mut out = vec![Vec::new()];
    for &c in ps.conclusions() {
        let choices = web_points(ps.formula(c), atoms);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |t| {
                    let mut v = prefix.clone();
                    v.push(t.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// `n` axioms `A_i(p_i : X_i, q_i : X_i^)` whose `p_i` feed a balanced tensor
/// tree, cut against a balanced par tree over `n` axioms
/// `B_i(r_i : X_i^, s_i : X_i)`. Conclusions are the `q_i` and `s_i`.
pub fn chain(n: usize) -> ProofStructure {
    let mut b = StructureBuilder::new();
    let mut leaves_p = Vec::with_capacity(n);
    let mut leaves_r = Vec::with_capacity(n);
    let mut concl = Vec::with_capacity(2 * n);
    for i in 0..n {
        let x = Formula::var(format!("X{i}"));
        let p = b.port(format!("p{i}"), x.clone()).unwrap();
        let q = b.port(format!("q{i}"), x.dual()).unwrap();
        b.cell(format!("A{i}"), CellKind::Ax, &[p, q], &[]).unwrap();
        let r = b.port(format!("r{i}"), x.dual()).unwrap();
        let s = b.port(format!("s{i}"), x.clone()).unwrap();
        b.cell(format!("B{i}"), CellKind::Ax, &[r, s], &[]).unwrap();
        leaves_p.push((p, x.clone()));
        leaves_r.push((r, x.dual()));
        concl.push(q);
        concl.push(s);
    }
    let mut counter = 0;
    let t = tree(&mut b, &leaves_p, CellKind::Tensor, &mut counter);
    let u = tree(&mut b, &leaves_r, CellKind::Par, &mut counter);
    b.cell("cut", CellKind::Cut, &[], &[t, u]).unwrap();
    b.conclusions(&concl);
    b.build().unwrap()
}

fn tree(b: &mut StructureBuilder, leaves: &[(PortId, Formula)], kind: CellKind, counter: &mut usize) -> PortId {
    fn go(
        b: &mut StructureBuilder,
        leaves: &[(PortId, Formula)],
        kind: CellKind,
        counter: &mut usize,
    ) -> (PortId, Formula) {
        if leaves.len() == 1 {
            return leaves[0].clone();
        }
        let mid = leaves.len() / 2;
        let (l, fl) = go(b, &leaves[..mid], kind, counter);
        let (r, fr) = go(b, &leaves[mid..], kind, counter);
        let f = if kind == CellKind::Tensor { Formula::tensor(fl, fr) } else { Formula::par(fl, fr) };
        *counter += 1;
        let p = b.port(format!("n{counter}"), f.clone()).unwrap();
        b.cell(format!("k{counter}"), kind, &[p], &[l, r]).unwrap();
        (p, f)
    }
    go(b, leaves, kind, counter).0
}

/// The point of [`chain`] giving every conclusion the atom `a`.
pub fn chain_point(n: usize) -> Vec<RelTerm> {
    vec![RelTerm::atom("a"); 2 * n]
}

/// Renames atoms of a point injectively.
pub fn rename_point(x: &[RelTerm]) -> Vec<RelTerm> {
    x.iter().map(|t| t.map_atoms(&|a| format!("{a}_r"))).collect()
}

// ---- simply-typed λ-terms with points of their interpretation ----

pub fn random_type(rng: &mut impl Rng, depth: usize) -> SimpleType {
    if depth == 0 || rng.gen_bool(0.4) {
        SimpleType::Base
    } else {
        SimpleType::arrow(random_type(rng, depth - 1), random_type(rng, depth - 1))
    }
}

fn spine(ty: &SimpleType) -> Vec<SimpleType> {
    let mut args = Vec::new();
    let mut t = ty;
    while let SimpleType::Arrow(a, b) = t {
        args.push((**a).clone());
        t = b;
    }
    args
}

/// A random β-normal term of type `ty` over `env`. `env` must contain a
/// variable of base type so that generation can always stop.
pub fn random_normal_term(rng: &mut impl Rng, env: &mut Vec<(String, SimpleType)>, ty: &SimpleType, depth: usize) -> LambdaTerm {
    if let SimpleType::Arrow(a, b) = ty {
        let x = format!("x{}", env.len());
        env.push((x.clone(), (**a).clone()));
        let body = random_normal_term(rng, env, b, depth);
        env.pop();
        return LambdaTerm::abs(x, (**a).clone(), body);
    }
    let candidates: Vec<usize> = if depth == 0 {
        (0..env.len()).filter(|&i| env[i].1 == SimpleType::Base).collect()
    } else {
        (0..env.len()).collect()
    };
    let (name, hty) = env[*candidates.choose(rng).unwrap()].clone();
    let mut m = LambdaTerm::var(name);
    for a in spine(&hty) {
        let arg = random_normal_term(rng, env, &a, depth.saturating_sub(1));
        m = LambdaTerm::app(m, arg);
    }
    m
}

/// A random point of the interpretation of a β-normal `m`, built by
/// choosing how many copies of each argument are used; the multisets
/// consumed from each variable in `env` are accumulated into `uses`.
pub fn random_point(rng: &mut impl Rng, m: &LambdaTerm, env: &mut Vec<String>, uses: &mut Vec<Multiset>, budget: &mut usize) -> RPoint {
    if let LambdaTerm::Abs(x, _, body) = m {
        env.push(x.clone());
        uses.push(Multiset::new());
        let r = random_point(rng, body, env, uses, budget);
        env.pop();
        let ys = uses.pop().unwrap();
        return RPoint::Arrow(ys, Box::new(r));
    }
    let mut args = Vec::new();
    let mut h = m;
    while let LambdaTerm::App(f, a) = h {
        args.push(&**a);
        h = f;
    }
    args.reverse();
    let LambdaTerm::Var(y) = h else { panic!("term is not β-normal") };
    let idx = env.iter().rposition(|v| v == y).expect("bound variable");
    let mut head_args = Vec::new();
    for a in args {
        let copies = if *budget == 0 { 0 } else { rng.gen_range(0..=2usize).min(*budget) };
        *budget -= copies;
        let xs: Multiset = (0..copies).map(|_| random_point(rng, a, env, uses, budget)).collect();
        head_args.push(xs);
    }
    let result = RPoint::atom(["*", "a"][rng.gen_range(0..2)]);
    let head = head_args.into_iter().rev().fold(result.clone(), |acc, xs| RPoint::Arrow(xs, Box::new(acc)));
    uses[idx].insert(head);
    result
}

/// The open context every generated λ-term lives in.
pub fn base_env() -> Vec<(String, SimpleType)> {
    use SimpleType::Base;
    vec![
        ("c".into(), Base),
        ("f".into(), SimpleType::arrow(Base, SimpleType::arrow(Base, Base))),
        ("g".into(), SimpleType::arrow(SimpleType::arrow(Base, Base), Base)),
    ]
}

/// A random `(context, term, type, point)` with the point in the
/// interpretation by construction.
pub fn random_membership(rng: &mut impl Rng) -> (RContext, LambdaTerm, SimpleType, RPoint) {
    let env = base_env();
    let ty = random_type(rng, 2);
    let mut e = env.clone();
    let m = random_normal_term(rng, &mut e, &ty, 3);
    let mut names: Vec<String> = env.iter().map(|(n, _)| n.clone()).collect();
    let mut uses = vec![Multiset::new(); env.len()];
    let mut budget = 12;
    let alpha = random_point(rng, &m, &mut names, &mut uses, &mut budget);
    let ctx = env.into_iter().zip(uses).map(|((n, t), u)| (n, t, u)).collect();
    (ctx, m, ty, alpha)
}
