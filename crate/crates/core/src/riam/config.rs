use std::fmt;

use crate::mll::{CellId, CellKind, PortId, ProofStructure};
use crate::relsem::{
    check_point_shape, mgu, FreshNames, PointError, RelTerm, Substitution, UnifyError,
};

use super::series::{Series, Sign};

/// One series per port of the structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    ports: Vec<Series>,
}

impl Configuration {
    pub fn zero(ports: usize) -> Self {
        Configuration { ports: vec![Series::zero(); ports] }
    }

    pub fn get(&self, p: PortId) -> &Series {
        &self.ports[p.0]
    }

    pub fn set(&mut self, p: PortId, s: Series) {
        self.ports[p.0] = s;
    }

    pub fn is_zero(&self) -> bool {
        self.ports.iter().all(Series::is_zero)
    }

    pub fn nonzero_ports(&self) -> impl Iterator<Item = PortId> + '_ {
        self.ports.iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(i, _)| PortId(i))
    }

    /// Applies `s` to every term of every port.
    pub fn substitute(&self, s: &Substitution) -> Option<Configuration> {
        let ports = self.ports.iter().map(|x| x.substitute(s)).collect::<Option<Vec<_>>>()?;
        Some(Configuration { ports })
    }

    /// Renders the nonzero ports with their names, e.g. `{1: a, 3: (a,b)}`.
    pub fn display<'a>(&'a self, ps: &'a ProofStructure) -> impl fmt::Display + 'a {
        ConfigDisplay { config: self, ps }
    }
}

struct ConfigDisplay<'a> {
    config: &'a Configuration,
    ps: &'a ProofStructure,
}

impl fmt::Display for ConfigDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.config.nonzero_ports().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", self.ps.port(p).name, self.config.get(p))?;
        }
        write!(f, "}}")
    }
}

/// Conclusions carry `+x_i`, every other port is zero.
pub fn initial_config(ps: &ProofStructure, x: &[RelTerm]) -> Result<Configuration, PointError> {
    check_point_shape(ps, x)?;
    let mut c = Configuration::zero(ps.ports().len());
    for (t, &p) in x.iter().zip(ps.conclusions()) {
        c.set(p, Series::pos(t.clone()));
    }
    Ok(c)
}

/// An instance of the displacement relation for one cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Displacement {
    pub cell: CellId,
    pub per_port: Vec<(PortId, Series)>,
    /// The point moved through the cell: the token for axioms and cuts, the
    /// pair of fresh variables for tensors and pars, `()` for units.
    pub witness: RelTerm,
}

impl Displacement {
    /// The displacement of `cell` carrying `witness`.
    ///
    /// * ax ⟨p,q⟩: `p ↦ -a, q ↦ -a`
    /// * cut ⟨p,q⟩: `p ↦ +a, q ↦ +a`
    /// * one/bot p: `p ↦ -()`
    /// * tensor/par ⟨p1,p2⟩ q with witness `(u,v)`: `p1 ↦ +u, p2 ↦ +v, q ↦ -(u,v)`
    ///
    /// Returns `None` if the witness has the wrong shape for a tensor/par.
    pub fn new(ps: &ProofStructure, cell: CellId, witness: RelTerm) -> Option<Displacement> {
        let c = ps.cell(cell);
        let per_port = match c.kind {
            CellKind::Ax => vec![
                (c.principal[0], Series::neg(witness.clone())),
                (c.principal[1], Series::neg(witness.clone())),
            ],
            CellKind::Cut => vec![
                (c.auxiliary[0], Series::pos(witness.clone())),
                (c.auxiliary[1], Series::pos(witness.clone())),
            ],
            CellKind::One | CellKind::Bot => {
                if witness != RelTerm::Unit {
                    return None;
                }
                vec![(c.principal[0], Series::neg(RelTerm::Unit))]
            }
            CellKind::Tensor | CellKind::Par => {
                let RelTerm::Pair(u, v) = &witness else { return None };
                vec![
                    (c.auxiliary[0], Series::pos((**u).clone())),
                    (c.auxiliary[1], Series::pos((**v).clone())),
                    (c.principal[0], Series::neg(witness.clone())),
                ]
            }
        };
        Some(Displacement { cell, per_port, witness })
    }
}

/// Token-driven instances of the displacement relation for `cell` in `x`.
///
/// Axioms are driven by an upward token on either port and cuts by a
/// downward token on either port, the witness being that token. Tensors and
/// pars are driven by an upward token on the principal port or a downward
/// token on an auxiliary port, and always use two fresh variables. Units are
/// driven by an upward token on their port.
pub fn delta_instances(
    ps: &ProofStructure,
    cell: CellId,
    x: &Configuration,
    fresh: &mut FreshNames,
) -> Vec<Displacement> {
    let c = ps.cell(cell);
    let tokens = |ports: &[PortId], sign: Sign| -> Vec<RelTerm> {
        let mut out: Vec<RelTerm> = Vec::new();
        for &p in ports {
            for t in x.get(p).with_sign(sign) {
                if !out.contains(t) {
                    out.push(t.clone());
                }
            }
        }
        out
    };
    match c.kind {
        CellKind::Ax => tokens(&c.principal, Sign::Pos)
            .into_iter()
            .filter_map(|t| Displacement::new(ps, cell, t))
            .collect(),
        CellKind::Cut => tokens(&c.auxiliary, Sign::Neg)
            .into_iter()
            .filter_map(|t| Displacement::new(ps, cell, t))
            .collect(),
        CellKind::One | CellKind::Bot => {
            if tokens(&c.principal, Sign::Pos).is_empty() {
                Vec::new()
            } else {
                Displacement::new(ps, cell, RelTerm::Unit).into_iter().collect()
            }
        }
        CellKind::Tensor | CellKind::Par => {
            let driven = !tokens(&c.principal, Sign::Pos).is_empty()
                || !tokens(&c.auxiliary, Sign::Neg).is_empty();
            if !driven {
                return Vec::new();
            }
            let w = RelTerm::pair(fresh.next_var(), fresh.next_var());
            Displacement::new(ps, cell, w).into_iter().collect()
        }
    }
}

/// `x' = x + d`; `None` when some port's sum is undefined.
pub fn step_displacement(x: &Configuration, d: &Displacement) -> Option<Configuration> {
    let mut out = x.clone();
    for (p, s) in &d.per_port {
        let sum = out.get(*p).checked_add(s)?;
        out.set(*p, sum);
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnificationError {
    #[error("no opposite-sign pair at port #{}", .0 .0)]
    NoPair(PortId),
    #[error("cannot unify {left} with {right}: {cause}")]
    Failed { port: PortId, left: RelTerm, right: RelTerm, cause: UnifyError },
    #[error("substitution makes two equal tokens collide")]
    Overflow { port: PortId },
}

/// Unifies the first positive term at `p` with the first negative one and
/// applies the unifier to the whole configuration.
pub fn step_unification(
    x: &Configuration,
    p: PortId,
) -> Result<(Configuration, Substitution), UnificationError> {
    let (a1, a2) = x.get(p).opposite_pair().ok_or(UnificationError::NoPair(p))?;
    let s = mgu(a1, a2).map_err(|cause| UnificationError::Failed {
        port: p,
        left: a1.clone(),
        right: a2.clone(),
        cause,
    })?;
    let next = x.substitute(&s).ok_or(UnificationError::Overflow { port: p })?;
    Ok((next, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mll::parse_proof_structure;
    use crate::relsem::{parse_point, parse_term};

    const NUMBERED: &str = "\
port 1 : A^
port 2 : A
port 3 : A * B
port 4 : B
port 5 : B^
cell ax12 : ax(1, 2)
cell ax45 : ax(4, 5)
cell t : tensor(2, 4 ; 3)
conclusions: 1, 3, 5
";

    fn t(s: &str) -> RelTerm {
        parse_term(s).unwrap()
    }

    fn port(ps: &ProofStructure, n: &str) -> PortId {
        ps.port_by_name(n).unwrap()
    }

    #[test]
    fn numbered_structure_walkthrough() {
        let ps = parse_proof_structure(NUMBERED).unwrap();
        let x0 = initial_config(&ps, &parse_point("a, (a,b), b").unwrap()).unwrap();
        assert_eq!(x0.display(&ps).to_string(), "{1: a, 3: (a,b), 5: b}");

        let mut fresh = FreshNames::default();
        let ax12 = ps.cell_by_name("ax12").unwrap();
        let ds = delta_instances(&ps, ax12, &x0, &mut fresh);
        assert_eq!(ds.len(), 1);
        assert_eq!(
            ds[0].per_port,
            vec![(port(&ps, "1"), Series::neg(t("a"))), (port(&ps, "2"), Series::neg(t("a")))]
        );
        let x1 = step_displacement(&x0, &ds[0]).unwrap();
        assert_eq!(x1.display(&ps).to_string(), "{2: -a, 3: (a,b), 5: b}");

        let tens = ps.cell_by_name("t").unwrap();
        let ds = delta_instances(&ps, tens, &x1, &mut fresh);
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].witness, t("(?_g0,?_g1)"));
        let x2 = step_displacement(&x1, &ds[0]).unwrap();
        assert_eq!(
            x2.display(&ps).to_string(),
            "{2: -a + ?_g0, 3: (a,b) - (?_g0,?_g1), 4: ?_g1, 5: b}"
        );

        let (x3, s) = step_unification(&x2, port(&ps, "3")).unwrap();
        assert_eq!(s.to_string(), "{?_g0=a, ?_g1=b}");
        assert_eq!(x3.display(&ps).to_string(), "{4: b, 5: b}");

        let ax45 = ps.cell_by_name("ax45").unwrap();
        let ds = delta_instances(&ps, ax45, &x3, &mut fresh);
        assert_eq!(ds.len(), 1);
        let x4 = step_displacement(&x3, &ds[0]).unwrap();
        assert!(x4.is_zero());
    }

    #[test]
    fn undriven_cells_have_no_instances() {
        let ps = parse_proof_structure(NUMBERED).unwrap();
        let x = Configuration::zero(5);
        let mut fresh = FreshNames::default();
        for c in ps.cell_ids() {
            assert!(delta_instances(&ps, c, &x, &mut fresh).is_empty());
        }
        assert_eq!(fresh.issued(), 0);
    }

    #[test]
    fn double_token_cannot_fire() {
        let ps = parse_proof_structure(NUMBERED).unwrap();
        let mut x = Configuration::zero(5);
        x.set(port(&ps, "2"), Series::neg(t("a")));
        x.set(port(&ps, "1"), Series::pos(t("a")));
        let d = Displacement::new(&ps, ps.cell_by_name("ax12").unwrap(), t("a")).unwrap();
        // port 2 already holds -a
        assert_eq!(step_displacement(&x, &d), None);
    }

    #[test]
    fn unification_outcomes() {
        let ps = parse_proof_structure(NUMBERED).unwrap();
        let p = port(&ps, "1");
        let mut x = Configuration::zero(5);
        x.set(p, [(t("b"), Sign::Pos), (t("c"), Sign::Neg)].into_iter().collect());
        assert!(matches!(step_unification(&x, p), Err(UnificationError::Failed { .. })));

        x.set(p, [(t("?v"), Sign::Pos), (t("a"), Sign::Neg)].into_iter().collect());
        let (y, s) = step_unification(&x, p).unwrap();
        assert_eq!(s.to_string(), "{?v=a}");
        assert!(y.is_zero());

        x.set(p, Series::pos(t("a")));
        assert_eq!(step_unification(&x, p), Err(UnificationError::NoPair(p)));
    }

    #[test]
    fn initial_config_rejects_variables() {
        let ps = parse_proof_structure(NUMBERED).unwrap();
        assert!(matches!(
            initial_config(&ps, &parse_point("?v, (a,b), b").unwrap()),
            Err(PointError::NotGround { .. })
        ));
    }
}
