//! Subsystem stabilizer codes: validation, parameters and gauge fixing.
//!
//! A code on `n` qubits is given by `s` stabilizer generators, `r` gauge pairs
//! `(g^x_j, g^z_j)` and `k` logical pairs `(X̄_j, Z̄_j)`. Together with the
//! implicit destabilizers they form a symplectic frame, so `s + r + k = n`
//! once the frame is complete. The gauge group is generated by the stabilizer,
//! the gauge pairs and the phases.

use std::fmt;

use thiserror::Error;

use crate::gf2::BinMatrix;
use crate::pauli::PauliOp;
use crate::tableau::{self, Slot, SymplecticFrame};

/// Two operators meant to act as `X` and `Z` of one virtual qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliPair {
    pub x: PauliOp,
    pub z: PauliOp,
}

impl PauliPair {
    pub fn new(x: PauliOp, z: PauliOp) -> PauliPair {
        PauliPair { x, z }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsystemCode {
    pub n: usize,
    pub stabilizer: Vec<PauliOp>,
    pub gauge: Vec<PauliPair>,
    pub logical: Vec<PauliPair>,
}

/// Which list a generator lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Stabilizer,
    GaugeX,
    GaugeZ,
    LogicalX,
    LogicalZ,
}

impl Role {
    pub fn section(self) -> &'static str {
        match self {
            Role::Stabilizer => "stabilizer",
            Role::GaugeX => "gauge_x",
            Role::GaugeZ => "gauge_z",
            Role::LogicalX => "logical_x",
            Role::LogicalZ => "logical_z",
        }
    }
}

/// A generator reference: role plus 0-based index within that role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenRef {
    pub role: Role,
    pub index: usize,
}

impl fmt::Display for GenRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.role.section(), self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("{at} does not act on {n} qubits")]
    WrongQubitCount { at: GenRef, n: usize },
    #[error("s + r + k = {s} + {r} + {k} exceeds n = {n}")]
    TooManyGenerators { s: usize, r: usize, k: usize, n: usize },
    #[error("stabilizer generators {0} and {1} anticommute")]
    StabilizersAnticommute(usize, usize),
    #[error("stabilizer generators {0:?} are linearly dependent")]
    StabilizersDependent(Vec<usize>),
    #[error("stabilizer contains -1 (generators {0:?})")]
    ContainsMinusOne(Vec<usize>),
    #[error("{at} anticommutes with stabilizer generator {stabilizer}")]
    OutsideNormalizer { at: GenRef, stabilizer: usize },
    #[error("{a} and {b} violate the pairing pattern")]
    PairPattern { a: GenRef, b: GenRef },
    #[error("generators are not linearly independent")]
    Dependent,
    #[error("requested {requested} extra gauge qubits but only {available} virtual qubits are free")]
    ExtraGaugeTooLarge { requested: usize, available: usize },
}

impl Violation {
    /// Generators implicated in the violation.
    pub fn generators(&self) -> Vec<GenRef> {
        let stab = |index| GenRef { role: Role::Stabilizer, index };
        match self {
            Violation::WrongQubitCount { at, .. } => vec![*at],
            Violation::StabilizersAnticommute(a, b) => vec![stab(*a), stab(*b)],
            Violation::StabilizersDependent(ix) | Violation::ContainsMinusOne(ix) => {
                ix.iter().map(|&i| stab(i)).collect()
            }
            Violation::OutsideNormalizer { at, stabilizer } => vec![*at, stab(*stabilizer)],
            Violation::PairPattern { a, b } => vec![*a, *b],
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub frame: Option<SymplecticFrame>,
    /// The code with every free virtual qubit assigned to a gauge or logical slot.
    pub completed: Option<SubsystemCode>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("invalid code: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("unknown catalog code {0:?}")]
    UnknownCatalog(String),
    #[error("catalog code {name} failed its load-time check: {reason}")]
    CatalogSelfCheck { name: String, reason: String },
}

/// `[[n, k, r, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub d: Option<u32>,
    /// Whether `n ≥ 2(d − 1) + k`; recorded once `d` is known.
    pub singleton: Option<bool>,
}

impl CodeParams {
    pub fn with_distance(self, d: u32) -> CodeParams {
        CodeParams { d: Some(d), singleton: Some(singleton_check(self.n, self.k, d)), ..self }
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            Some(d) => write!(f, "[[{},{},{},{}]]", self.n, self.k, self.r, d),
            None => write!(f, "[[{},{},{}]]", self.n, self.k, self.r),
        }
    }
}

/// Quantum Singleton bound `n ≥ 2(d − 1) + k`.
pub fn singleton_check(n: usize, k: usize, d: u32) -> bool {
    let d = d.max(1) as usize;
    n >= 2 * (d - 1) + k
}

impl SubsystemCode {
    pub fn new(
        n: usize,
        stabilizer: Vec<PauliOp>,
        gauge: Vec<PauliPair>,
        logical: Vec<PauliPair>,
    ) -> SubsystemCode {
        SubsystemCode { n, stabilizer, gauge, logical }
    }

    pub fn from_stabilizers(n: usize, stabilizer: Vec<PauliOp>) -> SubsystemCode {
        SubsystemCode::new(n, stabilizer, Vec::new(), Vec::new())
    }

    pub fn s(&self) -> usize {
        self.stabilizer.len()
    }

    pub fn r(&self) -> usize {
        self.gauge.len()
    }

    pub fn k(&self) -> usize {
        self.logical.len()
    }

    pub fn is_complete(&self) -> bool {
        self.s() + self.r() + self.k() == self.n
    }

    /// Stabilizer generators followed by every gauge operator (x then z per pair).
    pub fn gauge_generators(&self) -> Vec<PauliOp> {
        let mut out = self.stabilizer.clone();
        for p in &self.gauge {
            out.push(p.x);
            out.push(p.z);
        }
        out
    }

    pub fn logical_generators(&self) -> Vec<PauliOp> {
        self.logical.iter().flat_map(|p| [p.x, p.z]).collect()
    }

    fn generator_refs(&self) -> Vec<(GenRef, PauliOp)> {
        let mut out = Vec::new();
        let push = |out: &mut Vec<_>, role, index, op| out.push((GenRef { role, index }, op));
        for (i, &s) in self.stabilizer.iter().enumerate() {
            push(&mut out, Role::Stabilizer, i, s);
        }
        for (i, p) in self.gauge.iter().enumerate() {
            push(&mut out, Role::GaugeX, i, p.x);
            push(&mut out, Role::GaugeZ, i, p.z);
        }
        for (i, p) in self.logical.iter().enumerate() {
            push(&mut out, Role::LogicalX, i, p.x);
            push(&mut out, Role::LogicalZ, i, p.z);
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with_gauge(0)
    }

    /// Checks every structural invariant; when they all hold, completes the
    /// frame and assigns the first `extra_gauge` free virtual qubits to the
    /// gauge sector and the rest to the logical sector.
    pub fn validate_with_gauge(&self, extra_gauge: usize) -> ValidationReport {
        let n = self.n;
        let mut violations = Vec::new();
        let refs = self.generator_refs();
        for (at, op) in &refs {
            if op.num_qubits() != n {
                violations.push(Violation::WrongQubitCount { at: *at, n });
            }
        }
        if !violations.is_empty() {
            return ValidationReport { violations, frame: None, completed: None };
        }
        let (s, r, k) = (self.s(), self.r(), self.k());
        if s + r + k > n {
            violations.push(Violation::TooManyGenerators { s, r, k, n });
        }

        let stab = &self.stabilizer;
        let mut abelian = true;
        for a in 0..s {
            for b in a + 1..s {
                if !stab[a].commutes(&stab[b]) {
                    abelian = false;
                    violations.push(Violation::StabilizersAnticommute(a, b));
                }
            }
        }
        let mut basis = crate::gf2::ReducedBasis::new(2 * n);
        for (i, g) in stab.iter().enumerate() {
            if let Err(rel) = basis.insert_or_relation(g.symplectic()) {
                let ix: Vec<usize> = (0..=i).filter(|&j| rel >> j & 1 == 1).collect();
                violations.push(Violation::StabilizersDependent(ix));
            }
        }
        if abelian {
            if let Some(ix) = tableau::minus_one_witness(n, stab) {
                violations.push(Violation::ContainsMinusOne(ix));
            }
        }

        let others: Vec<(GenRef, PauliOp)> =
            refs.iter().filter(|(g, _)| g.role != Role::Stabilizer).copied().collect();
        for (at, op) in &others {
            for (j, g) in stab.iter().enumerate() {
                if !op.commutes(g) {
                    violations.push(Violation::OutsideNormalizer { at: *at, stabilizer: j });
                }
            }
        }
        for (i, (a, pa)) in others.iter().enumerate() {
            for (b, pb) in &others[i + 1..] {
                let partners = a.index == b.index
                    && matches!(
                        (a.role, b.role),
                        (Role::GaugeX, Role::GaugeZ) | (Role::LogicalX, Role::LogicalZ)
                    );
                if pa.commutes(pb) == partners {
                    violations.push(Violation::PairPattern { a: *a, b: *b });
                }
            }
        }
        let all: Vec<PauliOp> = refs.iter().map(|(_, p)| *p).collect();
        if violations.is_empty() && BinMatrix::from_paulis(n, &all).rank() != all.len() {
            violations.push(Violation::Dependent);
        }
        let free = n.saturating_sub(s + r + k);
        if extra_gauge > free {
            violations.push(Violation::ExtraGaugeTooLarge { requested: extra_gauge, available: free });
        }
        if !violations.is_empty() {
            return ValidationReport { violations, frame: None, completed: None };
        }

        let mut partial: Vec<(Slot, PauliOp)> = Vec::with_capacity(all.len());
        for (i, &g) in stab.iter().enumerate() {
            partial.push((Slot::Z(i), g));
        }
        for (j, p) in self.gauge.iter().chain(&self.logical).enumerate() {
            partial.push((Slot::X(s + j), p.x));
            partial.push((Slot::Z(s + j), p.z));
        }
        let frame = match tableau::symplectic_complete(n, &partial) {
            Ok(f) => f,
            Err(_) => {
                return ValidationReport {
                    violations: vec![Violation::Dependent],
                    frame: None,
                    completed: None,
                }
            }
        };
        let mut completed = self.clone();
        for slot in s + r + k..n {
            let pair = PauliPair::new(frame.x_prime[slot], frame.z_prime[slot]);
            if slot - (s + r + k) < extra_gauge {
                completed.gauge.push(pair);
            } else {
                completed.logical.push(pair);
            }
        }
        ValidationReport { violations, frame: Some(frame), completed: Some(completed) }
    }

    /// The completed code, or every violation found.
    pub fn validated(&self) -> Result<SubsystemCode, CodeError> {
        self.validated_with_gauge(0)
    }

    pub fn validated_with_gauge(&self, extra_gauge: usize) -> Result<SubsystemCode, CodeError> {
        let report = self.validate_with_gauge(extra_gauge);
        match report.completed {
            Some(c) if report.violations.is_empty() => Ok(c),
            _ => Err(CodeError::Invalid(report.violations)),
        }
    }

    pub fn parameters(&self) -> Result<CodeParams, CodeError> {
        let c = self.validated()?;
        Ok(CodeParams { n: c.n, k: c.k(), r: c.r(), d: None, singleton: None })
    }

    /// Promotes every gauge-Z operator to a stabilizer generator.
    pub fn gauge_fix(&self) -> Result<SubsystemCode, CodeError> {
        let c = self.validated()?;
        let mut stabilizer = c.stabilizer.clone();
        stabilizer.extend(c.gauge.iter().map(|p| p.z));
        let fixed = SubsystemCode::new(c.n, stabilizer, Vec::new(), c.logical.clone());
        fixed.validated()
    }

    /// Whether `a` and `b` differ by a gauge-group element (phases ignored).
    pub fn equivalent_logicals(&self, a: &PauliOp, b: &PauliOp) -> bool {
        tableau::in_group_mod_phase(&self.gauge_generators(), &a.multiply(b))
    }

    /// Rank of the gauge operators once the stabilizer row space is quotiented out.
    pub fn gauge_rank_mod_stabilizer(&self) -> usize {
        let s = BinMatrix::from_paulis(self.n, &self.stabilizer).rank();
        BinMatrix::from_paulis(self.n, &self.gauge_generators()).rank() - s
    }

    pub fn stabilizer_matrix(&self) -> BinMatrix {
        BinMatrix::from_paulis(self.n, &self.stabilizer)
    }

    pub fn same_stabilizer_group(&self, other: &SubsystemCode) -> bool {
        self.stabilizer_matrix().same_rowspace(&other.stabilizer_matrix())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn p(s: &str) -> PauliOp {
        s.parse().unwrap()
    }

    #[test]
    fn catalog_codes_validate() {
        let shor = catalog::shor9();
        let r = shor.validate();
        assert!(r.is_valid(), "{:?}", r.violations);
        assert_eq!((shor.s(), shor.r(), shor.k()), (8, 0, 1));
        let bacon = catalog::bacon_shor9();
        assert!(bacon.validate().is_valid());
        assert_eq!((bacon.s(), bacon.r(), bacon.k()), (4, 4, 1));
    }

    #[test]
    fn negated_generator_keeps_stabilizer_valid() {
        let mut c = catalog::shor9();
        c.stabilizer[0] = c.stabilizer[0].with_phase(2);
        assert!(c.validate().is_valid());
    }

    #[test]
    fn minus_one_is_rejected() {
        let mut c = catalog::shor9();
        c.stabilizer[0] = c.stabilizer[0].times_i(1);
        let r = c.validate();
        assert!(r.violations.contains(&Violation::ContainsMinusOne(vec![0])));

        let mut c = catalog::shor9();
        c.logical.clear();
        let extra = c.stabilizer[2].multiply(&c.stabilizer[3]).with_phase(2);
        c.stabilizer.push(extra);
        let r = c.validate();
        assert!(r.violations.contains(&Violation::ContainsMinusOne(vec![2, 3, 8])));
        assert!(r.violations.contains(&Violation::StabilizersDependent(vec![2, 3, 8])));
    }

    #[test]
    fn structural_violations_are_reported() {
        let mut c = catalog::bacon_shor9();
        c.gauge[0].x = p("IIXIIIIII");
        let r = c.validate();
        assert!(!r.is_valid());
        assert!(r.violations.iter().any(|v| matches!(
            v,
            Violation::OutsideNormalizer { at: GenRef { role: Role::GaugeX, index: 0 }, stabilizer: 3 }
        )));

        let mut c = catalog::shor9();
        c.stabilizer[2] = p("IXIIIIIII");
        let r = c.validate();
        assert!(r.violations.contains(&Violation::StabilizersAnticommute(2, 3)));

        let mut c = catalog::bacon_shor9();
        c.gauge.swap(0, 1);
        c.gauge[0].z = catalog::bacon_shor9().gauge[0].z;
        let r = c.validate();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::PairPattern { .. })));
    }

    #[test]
    fn parameters_examples() {
        let pr = catalog::shor9().parameters().unwrap();
        assert_eq!((pr.n, pr.k, pr.r, pr.d), (9, 1, 0, None));
        let pr = catalog::bacon_shor9().parameters().unwrap();
        assert_eq!((pr.n, pr.k, pr.r), (9, 1, 4));
        let bare = SubsystemCode::from_stabilizers(1, Vec::new());
        let pr = bare.parameters().unwrap();
        assert_eq!((pr.n, pr.k, pr.r), (1, 1, 0));
    }

    #[test]
    fn completion_with_extra_gauge() {
        let c = SubsystemCode::from_stabilizers(3, vec![p("ZZI"), p("IZZ")]);
        let done = c.validated_with_gauge(1).unwrap();
        assert_eq!((done.s(), done.r(), done.k()), (2, 1, 0));
        assert!(done.validate().is_valid());
        assert!(matches!(
            c.validate_with_gauge(2).violations[..],
            [Violation::ExtraGaugeTooLarge { requested: 2, available: 1 }]
        ));
    }

    #[test]
    fn stabilizer_only_code_gets_logicals() {
        let mut c = catalog::shor9();
        c.logical.clear();
        let done = c.validated().unwrap();
        assert_eq!(done.k(), 1);
        assert!(done.validate().is_valid());
        let l = done.logical[0];
        assert!(!l.x.commutes(&l.z));
        let zbar = p("ZZZZZZZZZ");
        assert!(!crate::tableau::in_group_mod_phase(&done.stabilizer, &zbar));
        let mut span = done.stabilizer.clone();
        span.extend([l.x, l.z]);
        assert!(crate::tableau::in_group_mod_phase(&span, &zbar));
    }

    #[test]
    fn gauge_fix_examples() {
        let fixed = catalog::bacon_shor9().gauge_fix().unwrap();
        assert_eq!((fixed.s(), fixed.r(), fixed.k()), (8, 0, 1));
        assert!(fixed.same_stabilizer_group(&catalog::shor9()));
        let s7 = p("IIIIIIZZI");
        assert!(crate::tableau::in_group_mod_phase(&fixed.stabilizer, &s7));
        let shor = catalog::shor9();
        assert_eq!(shor.gauge_fix().unwrap(), shor);
        let five = catalog::five_qubit();
        assert_eq!(five.gauge_fix().unwrap(), five);
    }

    #[test]
    fn singleton_examples() {
        assert!(singleton_check(9, 1, 3));
        assert!(singleton_check(5, 1, 3));
        assert_eq!(5, 2 * (3 - 1) + 1);
        assert!(!singleton_check(4, 1, 3));
    }

    #[test]
    fn bacon_gauge_generates_four_qubit_pauli_group() {
        assert_eq!(catalog::bacon_shor9().gauge_rank_mod_stabilizer(), 8);
        assert_eq!(catalog::shor9().gauge_rank_mod_stabilizer(), 0);
    }

    #[test]
    fn alternative_logical_x() {
        let c = catalog::bacon_shor9();
        let alt = c.stabilizer[0].multiply(&c.gauge[0].x).multiply(&c.logical[0].x);
        assert_eq!(alt, p("+IIXIIIXXI"));
        assert_eq!(alt.phase(), 0);
        assert!(c.equivalent_logicals(&alt, &c.logical[0].x));
        assert!(!c.equivalent_logicals(&alt, &c.logical[0].z));
    }

    #[test]
    fn centralizer_contains_gauge_and_logicals() {
        for c in [catalog::shor9(), catalog::bacon_shor9(), catalog::five_qubit(), catalog::steane7()] {
            let cent = crate::tableau::centralizer_basis(c.n, &c.stabilizer);
            assert_eq!(cent.len(), 2 * c.n - c.s());
            for g in c.gauge_generators().iter().chain(&c.logical_generators()) {
                assert!(crate::tableau::in_group_mod_phase(&cent, g));
            }
        }
    }
}
