use std::collections::HashMap;
use std::fmt;

use super::formula::Formula;

/// Index of a port inside its [`ProofStructure`], in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PortId(pub usize);

/// Index of a cell inside its [`ProofStructure`], in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    Ax,
    Cut,
    Tensor,
    Par,
    One,
    Bot,
}

impl CellKind {
    /// `(principal, auxiliary)` arity.
    pub fn arity(self) -> (usize, usize) {
        match self {
            CellKind::Ax => (2, 0),
            CellKind::Cut => (0, 2),
            CellKind::Tensor | CellKind::Par => (1, 2),
            CellKind::One | CellKind::Bot => (1, 0),
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            CellKind::Ax => "ax",
            CellKind::Cut => "cut",
            CellKind::Tensor => "tensor",
            CellKind::Par => "par",
            CellKind::One => "one",
            CellKind::Bot => "bot",
        }
    }

    pub fn from_keyword(s: &str) -> Option<CellKind> {
        Some(match s {
            "ax" => CellKind::Ax,
            "cut" => CellKind::Cut,
            "tensor" => CellKind::Tensor,
            "par" => CellKind::Par,
            "one" => CellKind::One,
            "bot" => CellKind::Bot,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub name: String,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub name: String,
    pub kind: CellKind,
    pub principal: Vec<PortId>,
    pub auxiliary: Vec<PortId>,
}

impl Cell {
    pub fn ports(&self) -> impl Iterator<Item = PortId> + '_ {
        self.principal.iter().chain(self.auxiliary.iter()).copied()
    }
}

/// A broken structural invariant, reported by [`ProofStructure::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Arity { cell: String, expected: (usize, usize), found: (usize, usize) },
    NotPrincipal { port: String },
    MultiplyPrincipal { port: String, cells: Vec<String> },
    MultiplyAuxiliary { port: String, cells: Vec<String> },
    AxiomTypeMismatch { cell: String, left: Formula, right: Formula },
    CutTypeMismatch { cell: String, left: Formula, right: Formula },
    PrincipalTypeMismatch { cell: String, expected: Formula, found: Formula },
    DuplicateConclusion { port: String },
    ConclusionIsAuxiliary { port: String },
    MissingConclusion { port: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Arity { cell, expected, found } => write!(
                f,
                "cell {cell}: wrong arity, expected {}+{} ports, found {}+{}",
                expected.0, expected.1, found.0, found.1
            ),
            Violation::NotPrincipal { port } => {
                write!(f, "port {port}: not the principal port of any cell")
            }
            Violation::MultiplyPrincipal { port, cells } => {
                write!(f, "port {port}: principal port of several cells ({})", cells.join(", "))
            }
            Violation::MultiplyAuxiliary { port, cells } => {
                write!(f, "port {port}: auxiliary port of several cells ({})", cells.join(", "))
            }
            Violation::AxiomTypeMismatch { cell, left, right } => write!(
                f,
                "cell {cell}: axiom type mismatch, {right} is not the dual of {left}"
            ),
            Violation::CutTypeMismatch { cell, left, right } => write!(
                f,
                "cell {cell}: cut type mismatch, {right} is not the dual of {left}"
            ),
            Violation::PrincipalTypeMismatch { cell, expected, found } => write!(
                f,
                "cell {cell}: principal type mismatch, expected {expected}, found {found}"
            ),
            Violation::DuplicateConclusion { port } => {
                write!(f, "port {port}: listed twice among the conclusions")
            }
            Violation::ConclusionIsAuxiliary { port } => {
                write!(f, "port {port}: declared conclusion but auxiliary of a cell")
            }
            Violation::MissingConclusion { port } => {
                write!(f, "port {port}: is a conclusion but missing from the conclusion list")
            }
        }
    }
}

/// An MLL proof-structure: typed ports, cells, and ordered conclusions.
///
/// Values of this type always satisfy the structural invariants; use
/// [`StructureBuilder`] or [`super::parse_proof_structure`] to build one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStructure {
    ports: Vec<Port>,
    cells: Vec<Cell>,
    conclusions: Vec<PortId>,
    principal_of: Vec<CellId>,
    auxiliary_of: Vec<Option<CellId>>,
}

impl ProofStructure {
    pub fn ports(&self) -> &[Port] {
        &self.ports
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn conclusions(&self) -> &[PortId] {
        &self.conclusions
    }

    pub fn port(&self, id: PortId) -> &Port {
        &self.ports[id.0]
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id.0]
    }

    pub fn formula(&self, id: PortId) -> &Formula {
        &self.ports[id.0].formula
    }

    pub fn port_ids(&self) -> impl Iterator<Item = PortId> {
        (0..self.ports.len()).map(PortId)
    }

    pub fn cell_ids(&self) -> impl Iterator<Item = CellId> {
        (0..self.cells.len()).map(CellId)
    }

    pub fn port_by_name(&self, name: &str) -> Option<PortId> {
        self.ports.iter().position(|p| p.name == name).map(PortId)
    }

    pub fn cell_by_name(&self, name: &str) -> Option<CellId> {
        self.cells.iter().position(|c| c.name == name).map(CellId)
    }

    /// The unique cell having `port` among its principal ports.
    pub fn principal_cell(&self, port: PortId) -> CellId {
        self.principal_of[port.0]
    }

    /// The cell having `port` as an auxiliary port, if any.
    pub fn auxiliary_cell(&self, port: PortId) -> Option<CellId> {
        self.auxiliary_of[port.0]
    }

    /// Number of ports + cells + formula nodes over all ports.
    pub fn size(&self) -> usize {
        self.ports.len()
            + self.cells.len()
            + self.ports.iter().map(|p| p.formula.size()).sum::<usize>()
    }

    /// Re-checks every invariant. Always empty for values built through the
    /// public constructors; exposed for diagnostics.
    pub fn validate(&self) -> Vec<Violation> {
        check_invariants(&self.ports, &self.cells, &self.conclusions)
    }

    fn from_checked(ports: Vec<Port>, cells: Vec<Cell>, conclusions: Vec<PortId>) -> Self {
        let mut principal_of = vec![CellId(usize::MAX); ports.len()];
        let mut auxiliary_of = vec![None; ports.len()];
        for (i, c) in cells.iter().enumerate() {
            for p in &c.principal {
                principal_of[p.0] = CellId(i);
            }
            for p in &c.auxiliary {
                auxiliary_of[p.0] = Some(CellId(i));
            }
        }
        ProofStructure { ports, cells, conclusions, principal_of, auxiliary_of }
    }
}

/// Checks a candidate structure. Port ids in `cells` and `conclusions` must
/// be in range.
pub fn check_invariants(ports: &[Port], cells: &[Cell], conclusions: &[PortId]) -> Vec<Violation> {
    let mut out = Vec::new();
    let pname = |p: PortId| ports[p.0].name.clone();
    let mut principal_cells: Vec<Vec<String>> = vec![Vec::new(); ports.len()];
    let mut auxiliary_cells: Vec<Vec<String>> = vec![Vec::new(); ports.len()];

    for c in cells {
        let found = (c.principal.len(), c.auxiliary.len());
        let expected = c.kind.arity();
        if found != expected {
            out.push(Violation::Arity { cell: c.name.clone(), expected, found });
            continue;
        }
        for p in &c.principal {
            principal_cells[p.0].push(c.name.clone());
        }
        for p in &c.auxiliary {
            auxiliary_cells[p.0].push(c.name.clone());
        }
        let tp = |p: PortId| &ports[p.0].formula;
        match c.kind {
            CellKind::Ax => {
                let (l, r) = (tp(c.principal[0]), tp(c.principal[1]));
                if *r != l.dual() {
                    out.push(Violation::AxiomTypeMismatch {
                        cell: c.name.clone(),
                        left: l.clone(),
                        right: r.clone(),
                    });
                }
            }
            CellKind::Cut => {
                let (l, r) = (tp(c.auxiliary[0]), tp(c.auxiliary[1]));
                if *r != l.dual() {
                    out.push(Violation::CutTypeMismatch {
                        cell: c.name.clone(),
                        left: l.clone(),
                        right: r.clone(),
                    });
                }
            }
            CellKind::Tensor | CellKind::Par | CellKind::One | CellKind::Bot => {
                let expected = match c.kind {
                    CellKind::Tensor => {
                        Formula::tensor(tp(c.auxiliary[0]).clone(), tp(c.auxiliary[1]).clone())
                    }
                    CellKind::Par => {
                        Formula::par(tp(c.auxiliary[0]).clone(), tp(c.auxiliary[1]).clone())
                    }
                    CellKind::One => Formula::One,
                    _ => Formula::Bot,
                };
                let found = tp(c.principal[0]);
                if *found != expected {
                    out.push(Violation::PrincipalTypeMismatch {
                        cell: c.name.clone(),
                        expected,
                        found: found.clone(),
                    });
                }
            }
        }
    }

    for (i, cs) in principal_cells.iter().enumerate() {
        match cs.len() {
            0 => out.push(Violation::NotPrincipal { port: pname(PortId(i)) }),
            1 => {}
            _ => out.push(Violation::MultiplyPrincipal { port: pname(PortId(i)), cells: cs.clone() }),
        }
    }
    for (i, cs) in auxiliary_cells.iter().enumerate() {
        if cs.len() > 1 {
            out.push(Violation::MultiplyAuxiliary { port: pname(PortId(i)), cells: cs.clone() });
        }
    }

    let mut declared = vec![false; ports.len()];
    for &p in conclusions {
        if declared[p.0] {
            out.push(Violation::DuplicateConclusion { port: pname(p) });
        }
        declared[p.0] = true;
        if !auxiliary_cells[p.0].is_empty() {
            out.push(Violation::ConclusionIsAuxiliary { port: pname(p) });
        }
    }
    for i in 0..ports.len() {
        if auxiliary_cells[i].is_empty() && !declared[i] {
            out.push(Violation::MissingConclusion { port: pname(PortId(i)) });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("duplicate port name `{0}`")]
    DuplicatePort(String),
    #[error("duplicate cell name `{0}`")]
    DuplicateCell(String),
    #[error("unknown port `{0}`")]
    UnknownPort(String),
    #[error("invalid proof-structure: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Incremental construction of a [`ProofStructure`] by name.
#[derive(Debug, Default, Clone)]
pub struct StructureBuilder {
    ports: Vec<Port>,
    cells: Vec<Cell>,
    port_index: HashMap<String, PortId>,
    cell_names: HashMap<String, CellId>,
    conclusions: Option<Vec<PortId>>,
}

impl StructureBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn port(&mut self, name: impl Into<String>, formula: Formula) -> Result<PortId, BuildError> {
        let name = name.into();
        if self.port_index.contains_key(&name) {
            return Err(BuildError::DuplicatePort(name));
        }
        let id = PortId(self.ports.len());
        self.port_index.insert(name.clone(), id);
        self.ports.push(Port { name, formula });
        Ok(id)
    }

    pub fn port_id(&self, name: &str) -> Result<PortId, BuildError> {
        self.port_index
            .get(name)
            .copied()
            .ok_or_else(|| BuildError::UnknownPort(name.to_string()))
    }

    pub fn cell(
        &mut self,
        name: impl Into<String>,
        kind: CellKind,
        principal: &[PortId],
        auxiliary: &[PortId],
    ) -> Result<CellId, BuildError> {
        let name = name.into();
        if self.cell_names.contains_key(&name) {
            return Err(BuildError::DuplicateCell(name));
        }
        for p in principal.iter().chain(auxiliary) {
            if p.0 >= self.ports.len() {
                return Err(BuildError::UnknownPort(format!("#{}", p.0)));
            }
        }
        let id = CellId(self.cells.len());
        self.cell_names.insert(name.clone(), id);
        self.cells.push(Cell {
            name,
            kind,
            principal: principal.to_vec(),
            auxiliary: auxiliary.to_vec(),
        });
        Ok(id)
    }

    /// Fixes the conclusion order. When never called, the conclusions are
    /// the non-auxiliary ports in declaration order.
    pub fn conclusions(&mut self, order: &[PortId]) -> &mut Self {
        self.conclusions = Some(order.to_vec());
        self
    }

    pub fn build(self) -> Result<ProofStructure, BuildError> {
        let conclusions = match self.conclusions {
            Some(c) => c,
            None => {
                let mut aux = vec![false; self.ports.len()];
                for c in &self.cells {
                    for p in &c.auxiliary {
                        aux[p.0] = true;
                    }
                }
                (0..self.ports.len()).filter(|&i| !aux[i]).map(PortId).collect()
            }
        };
        let violations = check_invariants(&self.ports, &self.cells, &conclusions);
        if !violations.is_empty() {
            return Err(BuildError::Invalid(violations));
        }
        Ok(ProofStructure::from_checked(self.ports, self.cells, conclusions))
    }
}

impl fmt::Display for ProofStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.ports {
            writeln!(f, "port {} : {}", p.name, p.formula)?;
        }
        for c in &self.cells {
            let n = |p: &PortId| self.ports[p.0].name.as_str();
            let args = match c.kind {
                CellKind::Ax => format!("{}, {}", n(&c.principal[0]), n(&c.principal[1])),
                CellKind::Cut => format!("{}, {}", n(&c.auxiliary[0]), n(&c.auxiliary[1])),
                CellKind::Tensor | CellKind::Par => format!(
                    "{}, {} ; {}",
                    n(&c.auxiliary[0]),
                    n(&c.auxiliary[1]),
                    n(&c.principal[0])
                ),
                CellKind::One | CellKind::Bot => n(&c.principal[0]).to_string(),
            };
            writeln!(f, "cell {} : {}({})", c.name, c.kind.keyword(), args)?;
        }
        let concl: Vec<&str> = self.conclusions.iter().map(|p| self.ports[p.0].name.as_str()).collect();
        writeln!(f, "conclusions: {}", concl.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Formula {
        Formula::var("X")
    }

    #[test]
    fn single_axiom() {
        let mut b = StructureBuilder::new();
        let p = b.port("p", x()).unwrap();
        let q = b.port("q", x().dual()).unwrap();
        b.cell("a", CellKind::Ax, &[p, q], &[]).unwrap();
        let ps = b.build().unwrap();
        assert_eq!(ps.conclusions(), &[p, q]);
        assert_eq!(ps.principal_cell(q), CellId(0));
        assert_eq!(ps.auxiliary_cell(q), None);
        assert!(ps.validate().is_empty());
    }

    #[test]
    fn axiom_type_mismatch() {
        let mut b = StructureBuilder::new();
        let p = b.port("p", x()).unwrap();
        let q = b.port("q", x()).unwrap();
        b.cell("a", CellKind::Ax, &[p, q], &[]).unwrap();
        let err = b.build().unwrap_err();
        assert!(matches!(err, BuildError::Invalid(ref v) if matches!(v[0], Violation::AxiomTypeMismatch { .. })));
    }

    #[test]
    fn tensor_principal_mismatch() {
        let mut b = StructureBuilder::new();
        let p1 = b.port("p1", x()).unwrap();
        let p2 = b.port("p2", Formula::var("Y")).unwrap();
        let q1 = b.port("q1", x().dual()).unwrap();
        let q2 = b.port("q2", Formula::dual_var("Y")).unwrap();
        let t = b.port("t", Formula::par(x(), Formula::var("Y"))).unwrap();
        b.cell("a1", CellKind::Ax, &[p1, q1], &[]).unwrap();
        b.cell("a2", CellKind::Ax, &[p2, q2], &[]).unwrap();
        b.cell("t", CellKind::Tensor, &[t], &[p1, p2]).unwrap();
        let Err(BuildError::Invalid(v)) = b.build() else { panic!() };
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().contains("principal type mismatch"));
    }

    #[test]
    fn arity_and_orphan_ports() {
        let mut b = StructureBuilder::new();
        let p = b.port("p", Formula::One).unwrap();
        let q = b.port("q", Formula::One).unwrap();
        b.cell("u", CellKind::One, &[p, q], &[]).unwrap();
        let Err(BuildError::Invalid(v)) = b.build() else { panic!() };
        assert!(v.iter().any(|v| matches!(v, Violation::Arity { .. })));
        assert!(v.iter().any(|v| matches!(v, Violation::NotPrincipal { .. })));
    }
}
