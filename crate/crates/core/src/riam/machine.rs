use std::cell::RefCell;
use std::collections::BTreeSet;
use std::sync::Arc;
use std::fmt;

use crate::mll::{CellId, CellKind, PortId, ProofStructure};
use crate::relsem::{FreshNames, PointError, RelTerm, Substitution, UnifyError};

use super::config::{initial_config, Configuration, Displacement};
use super::series::Sign;

/// A letter of an execution: a cell (displacement) or an environment
/// (unification) together with the port where it was triggered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Disp { cell: CellId, witness: RelTerm },
    Unif { port: PortId, subst: Substitution },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    /// Unification of two opposite tokens failed.
    Clash { port: PortId, left: RelTerm, right: RelTerm },
    Occurs { port: PortId, var: String, term: RelTerm },
    /// A nonzero configuration where no transition applies.
    Stuck { port: PortId },
    /// Two equal tokens with the same direction met on a port.
    Overflow { port: PortId },
    BoundExceeded { limit: usize },
}

impl RejectReason {
    pub fn display<'a>(&'a self, ps: &'a ProofStructure) -> impl fmt::Display + 'a {
        ReasonDisplay { reason: self, ps }
    }
}

struct ReasonDisplay<'a> {
    reason: &'a RejectReason,
    ps: &'a ProofStructure,
}

impl fmt::Display for ReasonDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |p: &PortId| &self.ps.port(*p).name;
        match self.reason {
            RejectReason::Clash { port, left, right } => {
                write!(f, "clash {left} vs {right} at {}", name(port))
            }
            RejectReason::Occurs { port, var, term } => {
                write!(f, "occurs ?{var} in {term} at {}", name(port))
            }
            RejectReason::Stuck { port } => write!(f, "stuck at {}", name(port)),
            RejectReason::Overflow { port } => write!(f, "overflow at {}", name(port)),
            RejectReason::BoundExceeded { limit } => {
                write!(f, "bound exceeded ({limit} displacements)")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Accepted,
    Rejected { config: Configuration, reason: RejectReason },
}

/// A finished normal run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub outcome: Outcome,
    pub trace: Vec<TraceEvent>,
}

impl Run {
    pub fn accepted(&self) -> bool {
        self.outcome == Outcome::Accepted
    }

    pub fn displacements(&self) -> usize {
        self.trace.iter().filter(|e| matches!(e, TraceEvent::Disp { .. })).count()
    }

    /// The line-oriented trace: `DISP <cell> witness=<term>`,
    /// `UNIF <port> {<var>=<term>, ...}`, then `ACCEPT` or `REJECT <reason>`.
    pub fn render(&self, ps: &ProofStructure) -> String {
        let mut out = String::new();
        for e in &self.trace {
            match e {
                TraceEvent::Disp { cell, witness } => {
                    out.push_str(&format!("DISP {} witness={witness}\n", ps.cell(*cell).name))
                }
                TraceEvent::Unif { port, subst } => {
                    out.push_str(&format!("UNIF {} {subst}\n", ps.port(*port).name))
                }
            }
        }
        match &self.outcome {
            Outcome::Accepted => out.push_str("ACCEPT\n"),
            Outcome::Rejected { reason, .. } => {
                out.push_str(&format!("REJECT {}\n", reason.display(ps)))
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Displacement cap; defaults to twice the number of cells.
    pub max_displacements: Option<usize>,
    pub fresh_prefix: String,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_displacements: None,
            fresh_prefix: crate::relsem::DEFAULT_FRESH_PREFIX.to_string(),
        }
    }
}

/// Runs the deterministic normal scheduler on `x`.
///
/// The nonzero port with the smallest index drives the next cell: an upward
/// token drives the cell above it, a downward token the cell below it. After
/// each displacement, opposite tokens meeting on the fired cell's ports are
/// unified (principal ports first), the unifier being applied to the whole
/// configuration. The run accepts when the configuration reaches zero.
pub fn normal_run(ps: &ProofStructure, x: &[RelTerm]) -> Result<Run, PointError> {
    normal_run_with(ps, x, &RunOptions::default())
}

pub fn normal_run_with(ps: &ProofStructure, x: &[RelTerm], opts: &RunOptions) -> Result<Run, PointError> {
    let start = initial_config(ps, x)?;
    let limit = opts.max_displacements.unwrap_or(2 * ps.cells().len());
    let mut m = Machine::new(ps, start, FreshNames::new(&opts.fresh_prefix));
    let outcome = match m.run(limit) {
        Ok(()) => Outcome::Accepted,
        Err(reason) => Outcome::Rejected { config: m.configuration(), reason },
    };
    Ok(Run { outcome, trace: m.trace })
}

/// Decides whether `x` belongs to the interpretation of `ps`.
pub fn check(ps: &ProofStructure, x: &[RelTerm]) -> Result<bool, PointError> {
    Ok(normal_run(ps, x)?.accepted())
}

/// Variable bindings accumulated during a run, kept triangular: images may
/// mention variables bound later. Tokens are stored unresolved and chased
/// through the bindings when inspected, so a unifier costs its own size
/// instead of a rewrite of every port that mentions its variables.
/// Resolutions of variables whose value became ground are cached and
/// shared, so resolving an image costs only its unresolved part.
///
/// The store owns the run's fresh-name supply: every variable of a run is
/// issued by it, so bindings are stored densely by issue number.
struct Bindings {
    fresh: FreshNames,
    slots: Vec<Option<RelTerm>>,
    ground: RefCell<Vec<Option<Arc<RelTerm>>>>,
}

impl Bindings {
    fn new(fresh: FreshNames) -> Self {
        Bindings { fresh, slots: Vec::new(), ground: RefCell::new(Vec::new()) }
    }

    fn get(&self, v: &str) -> Option<&RelTerm> {
        let i = self.fresh.index_of(v)?;
        self.slots.get(i)?.as_ref()
    }

    fn is_bound(&self, v: &str) -> bool {
        self.get(v).is_some()
    }

    fn bind(&mut self, v: &str, t: RelTerm) {
        let i = self.fresh.index_of(v).expect("run variables come from its fresh supply");
        if self.slots.len() <= i {
            self.slots.resize(self.fresh.issued(), None);
        }
        self.slots[i] = Some(t);
    }

    fn unbind(&mut self, v: &str) {
        if let Some(i) = self.fresh.index_of(v) {
            self.slots[i] = None;
        }
    }

    fn deref<'t>(&'t self, mut t: &'t RelTerm) -> &'t RelTerm {
        while let RelTerm::Var(v) = t {
            match self.get(v) {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    fn resolve(&self, t: &RelTerm) -> RelTerm {
        match t {
            RelTerm::Var(v) if self.is_bound(v) => (*self.resolve_var(v).0).clone(),
            RelTerm::Pair(a, b) => {
                RelTerm::Pair(self.resolve_shared(a).0, self.resolve_shared(b).0)
            }
            t => t.clone(),
        }
    }

    /// The resolution of `t` and whether it is ground; unchanged subterms
    /// are shared with `t`.
    fn resolve_shared(&self, t: &Arc<RelTerm>) -> (Arc<RelTerm>, bool) {
        match &**t {
            RelTerm::Var(v) if self.is_bound(v) => self.resolve_var(v),
            RelTerm::Var(_) => (t.clone(), false),
            RelTerm::Pair(a, b) => {
                let (ra, ga) = self.resolve_shared(a);
                let (rb, gb) = self.resolve_shared(b);
                let same = Arc::ptr_eq(&ra, a) && Arc::ptr_eq(&rb, b);
                (if same { t.clone() } else { Arc::new(RelTerm::Pair(ra, rb)) }, ga && gb)
            }
            _ => (t.clone(), true),
        }
    }

    // `v` must be bound
    fn resolve_var(&self, v: &str) -> (Arc<RelTerm>, bool) {
        let i = self.fresh.index_of(v).expect("bound variables are indexed");
        if let Some(Some(hit)) = self.ground.borrow().get(i) {
            return (hit.clone(), true);
        }
        let image = Arc::new(self.slots[i].clone().expect("variable is bound"));
        let (r, ground) = self.resolve_shared(&image);
        if ground {
            let mut cache = self.ground.borrow_mut();
            if cache.len() <= i {
                cache.resize(self.fresh.issued(), None);
            }
            cache[i] = Some(r.clone());
        }
        (r, ground)
    }

    /// Equality up to the bindings.
    fn equal(&self, a: &RelTerm, b: &RelTerm) -> bool {
        self.equal_shared(&Arc::new(a.clone()), &Arc::new(b.clone()))
    }

    fn equal_shared(&self, a: &Arc<RelTerm>, b: &Arc<RelTerm>) -> bool {
        if Arc::ptr_eq(a, b) {
            return true;
        }
        let a = self.step(a);
        let b = self.step(b);
        if Arc::ptr_eq(&a, &b) {
            return true;
        }
        match (&*a, &*b) {
            (RelTerm::Pair(a1, a2), RelTerm::Pair(b1, b2)) => {
                self.equal_shared(a1, b1) && self.equal_shared(a2, b2)
            }
            (a, b) => a == b,
        }
    }

    /// Replaces a bound variable by its value: the cached resolution when
    /// ground, else its image.
    fn step(&self, t: &Arc<RelTerm>) -> Arc<RelTerm> {
        match &**t {
            RelTerm::Var(v) if self.is_bound(v) => self.resolve_var(v).0,
            _ => t.clone(),
        }
    }

    fn occurs(&self, var: &str, t: &RelTerm) -> bool {
        match t {
            RelTerm::Var(v) if &**v == var => true,
            RelTerm::Var(v) if self.is_bound(v) => {
                // a ground value contains no variable; otherwise the
                // resolution has no bound variable left
                let (r, ground) = self.resolve_var(v);
                !ground && r.occurs(var)
            }
            RelTerm::Pair(a, b) => self.occurs(var, a) || self.occurs(var, b),
            _ => false,
        }
    }

    /// Robinson unification under the current bindings, extending them.
    /// Binds exactly the variables [`mgu`](crate::relsem::mgu) would bind on
    /// the resolved terms, and returns that unifier. On failure the bindings
    /// are left as they were.
    fn unify(&mut self, t1: &RelTerm, t2: &RelTerm) -> Result<Substitution, UnifyError> {
        let mut bound = Vec::new();
        let out = self.unify_into(t1, t2, &mut bound);
        if out.is_err() {
            for v in &bound {
                self.unbind(v);
            }
            // cached resolutions may depend on the rolled-back bindings
            self.ground.borrow_mut().clear();
        }
        out
    }

    fn unify_into(&mut self, t1: &RelTerm, t2: &RelTerm, bound: &mut Vec<String>) -> Result<Substitution, UnifyError> {
        let mut stack = vec![(t1.clone(), t2.clone())];
        while let Some((a, b)) = stack.pop() {
            let a = self.deref(&a).clone();
            let b = self.deref(&b).clone();
            match (a, b) {
                (RelTerm::Var(v), RelTerm::Var(w)) if v == w => {}
                (RelTerm::Var(v), t) | (t, RelTerm::Var(v)) => {
                    if self.occurs(&v, &t) {
                        return Err(UnifyError::Occurs(v.to_string(), self.resolve(&t)));
                    }
                    self.bind(&v, t);
                    bound.push(v.to_string());
                }
                (RelTerm::Pair(a1, a2), RelTerm::Pair(b1, b2)) => {
                    if !Arc::ptr_eq(&a2, &b2) {
                        stack.push(((*a2).clone(), (*b2).clone()));
                    }
                    if !Arc::ptr_eq(&a1, &b1) {
                        stack.push(((*a1).clone(), (*b1).clone()));
                    }
                }
                (a, b) if a == b => {}
                (a, b) => return Err(UnifyError::Clash(self.resolve(&a), self.resolve(&b))),
            }
        }
        let images = bound.iter().map(|v| (v.clone(), (*self.resolve_var(v).0).clone()));
        Ok(Substitution::from_idempotent(images))
    }
}

struct Machine<'a> {
    ps: &'a ProofStructure,
    // unresolved tokens; a port holds at most one token of each sign
    ports: Vec<Vec<(RelTerm, Sign)>>,
    pending: BTreeSet<usize>,
    fired: Vec<bool>,
    bindings: Bindings,
    trace: Vec<TraceEvent>,
    displacements: usize,
}

impl<'a> Machine<'a> {
    fn new(ps: &'a ProofStructure, start: Configuration, fresh: FreshNames) -> Self {
        let mut m = Machine {
            ps,
            ports: vec![Vec::new(); ps.ports().len()],
            pending: BTreeSet::new(),
            fired: vec![false; ps.cells().len()],
            bindings: Bindings::new(fresh),
            trace: Vec::new(),
            displacements: 0,
        };
        for p in ps.port_ids() {
            m.ports[p.0] = start.get(p).iter().map(|(t, s)| (t.clone(), *s)).collect();
            if !m.ports[p.0].is_empty() {
                m.pending.insert(p.0);
            }
        }
        m
    }

    fn configuration(&self) -> Configuration {
        let mut c = Configuration::zero(self.ports.len());
        for (i, tokens) in self.ports.iter().enumerate() {
            let s = tokens.iter().map(|(t, s)| (self.bindings.resolve(t), *s)).collect();
            c.set(PortId(i), s);
        }
        c
    }

    /// Adds a token, cancelling it against an equal opposite one.
    fn add(&mut self, p: PortId, t: RelTerm, sign: Sign) -> Result<(), RejectReason> {
        let tokens = &mut self.ports[p.0];
        if let Some(i) = tokens.iter().position(|(u, _)| self.bindings.equal(u, &t)) {
            if tokens[i].1 == sign {
                return Err(RejectReason::Overflow { port: p });
            }
            tokens.swap_remove(i);
        } else {
            tokens.push((t, sign));
        }
        if tokens.is_empty() {
            self.pending.remove(&p.0);
        } else {
            self.pending.insert(p.0);
        }
        Ok(())
    }

    /// Drops an opposite pair that became equal under the bindings, as
    /// applying the unifier eagerly would have.
    fn cancel_equal_pair(&mut self, p: usize) -> bool {
        let tokens = &self.ports[p];
        if tokens.len() == 2 && tokens[0].1 != tokens[1].1 && self.bindings.equal(&tokens[0].0, &tokens[1].0) {
            self.ports[p].clear();
            self.pending.remove(&p);
            return true;
        }
        false
    }

    fn run(&mut self, limit: usize) -> Result<(), RejectReason> {
        while let Some(&p) = self.pending.first() {
            if self.cancel_equal_pair(p) {
                continue;
            }
            let port = PortId(p);
            let [(token, sign)] = self.ports[p].as_slice() else {
                return Err(RejectReason::Stuck { port });
            };
            let cell = match sign {
                Sign::Pos => Some(self.ps.principal_cell(port)),
                Sign::Neg => self.ps.auxiliary_cell(port),
            };
            let Some(cell) = cell.filter(|c| !self.fired[c.0]) else {
                return Err(RejectReason::Stuck { port });
            };
            if self.displacements >= limit {
                return Err(RejectReason::BoundExceeded { limit });
            }
            let witness = match self.ps.cell(cell).kind {
                CellKind::Ax | CellKind::Cut => self.bindings.resolve(token),
                CellKind::One | CellKind::Bot => RelTerm::Unit,
                CellKind::Tensor | CellKind::Par => {
                    RelTerm::pair(self.bindings.fresh.next_var(), self.bindings.fresh.next_var())
                }
            };
            let d = Displacement::new(self.ps, cell, witness).expect("witness shape matches cell kind");
            for (q, s) in &d.per_port {
                for (t, sign) in s.iter() {
                    self.add(*q, t.clone(), *sign)?;
                }
            }
            self.fired[cell.0] = true;
            self.displacements += 1;
            self.trace.push(TraceEvent::Disp { cell, witness: d.witness });
            self.resolve(cell)?;
        }
        Ok(())
    }

    // Only the fired cell's ports can hold a fresh opposite pair: every port
    // receives at most one token from each side.
    fn resolve(&mut self, cell: CellId) -> Result<(), RejectReason> {
        let c = self.ps.cell(cell);
        for p in c.principal.iter().chain(&c.auxiliary).copied() {
            if self.cancel_equal_pair(p.0) {
                continue;
            }
            let tokens = &self.ports[p.0];
            let (Some(pos), Some(neg)) = (
                tokens.iter().find(|(_, s)| *s == Sign::Pos),
                tokens.iter().find(|(_, s)| *s == Sign::Neg),
            ) else {
                continue;
            };
            let (pos, neg) = (pos.0.clone(), neg.0.clone());
            let s = match self.bindings.unify(&pos, &neg) {
                Ok(s) => s,
                Err(UnifyError::Clash(left, right)) => {
                    return Err(RejectReason::Clash { port: p, left, right })
                }
                Err(UnifyError::Occurs(var, term)) => {
                    return Err(RejectReason::Occurs { port: p, var, term })
                }
            };
            self.ports[p.0].clear();
            self.pending.remove(&p.0);
            self.trace.push(TraceEvent::Unif { port: p, subst: s });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error(transparent)]
    Point(#[from] PointError),
    #[error("event {0}: witness does not fit the cell")]
    BadWitness(usize),
    #[error("event {0}: displacement is not defined on this configuration")]
    Undefined(usize),
}

/// Replays a trace from the initial configuration by plain transition
/// application, without any scheduling.
pub fn replay(ps: &ProofStructure, x: &[RelTerm], trace: &[TraceEvent]) -> Result<Configuration, ReplayError> {
    let mut c = initial_config(ps, x)?;
    for (i, e) in trace.iter().enumerate() {
        c = match e {
            TraceEvent::Disp { cell, witness } => {
                let d = Displacement::new(ps, *cell, witness.clone()).ok_or(ReplayError::BadWitness(i))?;
                super::config::step_displacement(&c, &d).ok_or(ReplayError::Undefined(i))?
            }
            TraceEvent::Unif { subst, .. } => c.substitute(subst).ok_or(ReplayError::Undefined(i))?,
        };
    }
    Ok(c)
}
