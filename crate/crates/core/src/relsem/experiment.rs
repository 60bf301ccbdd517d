use std::collections::BTreeSet;

use crate::mll::{CellKind, Formula, PortId, ProofStructure};

use super::term::{web_member, RelTerm};

/// A labelling of every port of a structure by a ground point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Experiment {
    values: Vec<RelTerm>,
}

impl Experiment {
    /// `values[i]` labels port `i`.
    pub fn new(values: Vec<RelTerm>) -> Self {
        Experiment { values }
    }

    pub fn get(&self, p: PortId) -> &RelTerm {
        &self.values[p.0]
    }

    pub fn values(&self) -> &[RelTerm] {
        &self.values
    }
}

/// True iff `e` is an experiment of `ps`: every value is a ground point of
/// its port's web and the local conditions of each cell hold.
pub fn verify_experiment(ps: &ProofStructure, e: &Experiment) -> bool {
    if e.values.len() != ps.ports().len() {
        return false;
    }
    let web_ok = ps
        .port_ids()
        .all(|p| web_member(e.get(p), ps.formula(p), false));
    if !web_ok {
        return false;
    }
    ps.cells().iter().all(|c| match c.kind {
        CellKind::Ax => e.get(c.principal[0]) == e.get(c.principal[1]),
        CellKind::Cut => e.get(c.auxiliary[0]) == e.get(c.auxiliary[1]),
        CellKind::One | CellKind::Bot => *e.get(c.principal[0]) == RelTerm::Unit,
        CellKind::Tensor | CellKind::Par => {
            *e.get(c.principal[0])
                == RelTerm::pair(e.get(c.auxiliary[0]).clone(), e.get(c.auxiliary[1]).clone())
        }
    })
}

/// The conclusion values of `e`, in conclusion order.
pub fn result(ps: &ProofStructure, e: &Experiment) -> Vec<RelTerm> {
    ps.conclusions().iter().map(|&p| e.get(p).clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PointError {
    #[error("point has {found} components but the structure has {expected} conclusions")]
    Arity { expected: usize, found: usize },
    #[error("component {index} ({term}) is not ground")]
    NotGround { index: usize, term: RelTerm },
    #[error("component {index} ({term}) is not a point of {formula}")]
    NotInWeb { index: usize, term: RelTerm, formula: Formula },
}

/// Checks that `x` is a ground point of the conclusions of `ps`.
pub fn check_point_shape(ps: &ProofStructure, x: &[RelTerm]) -> Result<(), PointError> {
    let concl = ps.conclusions();
    if concl.len() != x.len() {
        return Err(PointError::Arity { expected: concl.len(), found: x.len() });
    }
    for (index, (t, &p)) in x.iter().zip(concl).enumerate() {
        if !t.is_ground() {
            return Err(PointError::NotGround { index, term: t.clone() });
        }
        if !web_member(t, ps.formula(p), false) {
            return Err(PointError::NotInWeb {
                index,
                term: t.clone(),
                formula: ps.formula(p).clone(),
            });
        }
    }
    Ok(())
}

/// Membership of `x` in the interpretation of `ps` by exhaustive search over
/// experiments.
pub fn oracle_check(ps: &ProofStructure, x: &[RelTerm]) -> Result<bool, PointError> {
    Ok(oracle_witness(ps, x)?.is_some())
}

/// Like [`oracle_check`], returning a witnessing experiment.
///
/// An experiment is fixed by the point chosen at each axiom, hence by one
/// atom per literal leaf of each axiom formula. Atoms are drawn from those
/// of `x` plus one fresh atom per leaf; fresh atoms are interchangeable, so
/// only assignments using them in first-use order are enumerated.
pub fn oracle_witness(ps: &ProofStructure, x: &[RelTerm]) -> Result<Option<Experiment>, PointError> {
    check_point_shape(ps, x)?;

    let mut known = BTreeSet::new();
    for t in x {
        t.collect_atoms(&mut known);
    }
    let known: Vec<String> = known.into_iter().collect();

    let axioms: Vec<_> = ps.cells().iter().filter(|c| c.kind == CellKind::Ax).collect();
    let leaves: usize = axioms.iter().map(|c| ps.formula(c.principal[0]).literal_count()).sum();
    let fresh: Vec<String> = (0..leaves).map(|i| fresh_atom(i, &known)).collect();

    let mut offsets = vec![usize::MAX; ps.ports().len()];
    let mut start = 0;
    for c in &axioms {
        offsets[c.principal[0].0] = start;
        offsets[c.principal[1].0] = start;
        start += ps.formula(c.principal[0]).literal_count();
    }
    let mut ready = vec![None; ps.ports().len()];
    for p in ps.port_ids() {
        ready_at(ps, p, &offsets, &mut ready);
    }

    // Each cut and conclusion constraint is checked as soon as the leaves
    // its ports depend on are chosen.
    let mut constraints: Vec<Vec<Constraint>> = vec![Vec::new(); leaves + 1];
    for c in ps.cells().iter().filter(|c| c.kind == CellKind::Cut) {
        let (p, q) = (c.auxiliary[0], c.auxiliary[1]);
        let at = ready[p.0].unwrap().max(ready[q.0].unwrap());
        constraints[at].push(Constraint::Cut(p, q));
    }
    for (i, &p) in ps.conclusions().iter().enumerate() {
        constraints[ready[p.0].unwrap()].push(Constraint::Conclusion(p, i));
    }

    let mut search = Search {
        ps,
        x,
        axioms: &axioms,
        known: &known,
        fresh: &fresh,
        offsets: &offsets,
        constraints: &constraints,
        choice: vec![0usize; leaves],
    };
    Ok(search.go(0, 0))
}

fn fresh_atom(i: usize, taken: &[String]) -> String {
    let mut name = format!("h{i}");
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// Number of leading leaves that determine the value of `p`.
fn ready_at(ps: &ProofStructure, p: PortId, offsets: &[usize], memo: &mut Vec<Option<usize>>) -> usize {
    if let Some(r) = memo[p.0] {
        return r;
    }
    let c = ps.cell(ps.principal_cell(p));
    let r = match c.kind {
        CellKind::Ax => offsets[p.0] + ps.formula(p).literal_count(),
        CellKind::One | CellKind::Bot => 0,
        CellKind::Tensor | CellKind::Par => {
            ready_at(ps, c.auxiliary[0], offsets, memo).max(ready_at(ps, c.auxiliary[1], offsets, memo))
        }
        CellKind::Cut => unreachable!("cuts have no principal port"),
    };
    memo[p.0] = Some(r);
    r
}

#[derive(Debug, Clone, Copy)]
enum Constraint {
    Cut(PortId, PortId),
    Conclusion(PortId, usize),
}

struct Search<'a> {
    ps: &'a ProofStructure,
    x: &'a [RelTerm],
    axioms: &'a [&'a crate::mll::Cell],
    known: &'a [String],
    fresh: &'a [String],
    offsets: &'a [usize],
    constraints: &'a [Vec<Constraint>],
    choice: Vec<usize>,
}

impl Search<'_> {
    fn go(&mut self, leaf: usize, fresh_used: usize) -> Option<Experiment> {
        let violated = self.constraints[leaf].iter().any(|c| match *c {
            Constraint::Cut(p, q) => self.value(p) != self.value(q),
            Constraint::Conclusion(p, i) => self.value(p) != self.x[i],
        });
        if violated {
            return None;
        }
        if leaf == self.choice.len() {
            return self.evaluate();
        }
        // known atoms, then already-used fresh atoms, then one new fresh atom
        let options = self.known.len() + (fresh_used + 1).min(self.fresh.len());
        for opt in 0..options {
            self.choice[leaf] = opt;
            let used = if opt >= self.known.len() + fresh_used { fresh_used + 1 } else { fresh_used };
            if let Some(e) = self.go(leaf + 1, used) {
                return Some(e);
            }
        }
        None
    }

    /// Value of `p` under the current (possibly partial) choice; only
    /// called once the leaves it depends on are chosen.
    fn value(&self, p: PortId) -> RelTerm {
        let c = self.ps.cell(self.ps.principal_cell(p));
        match c.kind {
            CellKind::Ax => self.build_point(self.ps.formula(p), &mut self.offsets[p.0].clone()),
            CellKind::One | CellKind::Bot => RelTerm::Unit,
            CellKind::Tensor | CellKind::Par => {
                RelTerm::pair(self.value(c.auxiliary[0]), self.value(c.auxiliary[1]))
            }
            CellKind::Cut => unreachable!("cuts have no principal port"),
        }
    }

    fn atom(&self, opt: usize) -> RelTerm {
        if opt < self.known.len() {
            RelTerm::atom(self.known[opt].as_str())
        } else {
            RelTerm::atom(self.fresh[opt - self.known.len()].as_str())
        }
    }

    fn build_point(&self, f: &Formula, next: &mut usize) -> RelTerm {
        match f {
            Formula::Var(_) | Formula::Dual(_) => {
                let t = self.atom(self.choice[*next]);
                *next += 1;
                t
            }
            Formula::One | Formula::Bot => RelTerm::Unit,
            Formula::Tensor(a, b) | Formula::Par(a, b) => {
                let l = self.build_point(a, next);
                let r = self.build_point(b, next);
                RelTerm::pair(l, r)
            }
        }
    }

    // The full check is repeated on the complete assignment, so pruning can
    // only cut the search short, never accept on its own.
    fn evaluate(&self) -> Option<Experiment> {
        let ps = self.ps;
        let mut values: Vec<Option<RelTerm>> = vec![None; ps.ports().len()];
        let mut next = 0;
        for c in self.axioms {
            let t = self.build_point(ps.formula(c.principal[0]), &mut next);
            values[c.principal[1].0] = Some(t.clone());
            values[c.principal[0].0] = Some(t);
        }
        let values: Vec<RelTerm> = ps.port_ids().map(|p| port_value(ps, p, &mut values)).collect();
        let e = Experiment::new(values);
        (verify_experiment(ps, &e) && result(ps, &e) == self.x).then_some(e)
    }
}

// Values flow down from the axioms: every non-axiom port is the principal
// port of a unit, tensor or par cell, whose formula is strictly larger than
// its auxiliaries', so the recursion terminates.
fn port_value(ps: &ProofStructure, p: PortId, memo: &mut Vec<Option<RelTerm>>) -> RelTerm {
    if let Some(t) = &memo[p.0] {
        return t.clone();
    }
    let c = ps.cell(ps.principal_cell(p));
    let t = match c.kind {
        CellKind::One | CellKind::Bot => RelTerm::Unit,
        CellKind::Tensor | CellKind::Par => {
            let l = port_value(ps, c.auxiliary[0], memo);
            let r = port_value(ps, c.auxiliary[1], memo);
            RelTerm::pair(l, r)
        }
        CellKind::Ax | CellKind::Cut => unreachable!("axiom ports are seeded, cuts have no principal port"),
    };
    memo[p.0] = Some(t.clone());
    t
}
