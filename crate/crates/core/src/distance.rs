//! Operator classification, code distance and correctability of error sets.
//!
//! Every Pauli falls in exactly one of three classes relative to a code:
//! outside the normalizer `N(S)`, inside the gauge group `G`, or a nontrivial
//! logical operator in `N(S) − G`. The distance is the least weight of the
//! last class.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::code::{CodeError, SubsystemCode};
use crate::gf2::ReducedBasis;
use crate::pauli::{symplectic_product, symplectic_weight, PauliOp};
use crate::tableau;

/// Default cap on enumerated group elements.
pub const DEFAULT_BUDGET: u64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistanceError {
    #[error("distance is undefined for a code without logical qubits")]
    NoLogicalQubits,
    #[error("enumeration needs 2^{log2_size} elements, over the budget of {budget}")]
    BudgetExceeded { log2_size: u32, budget: u64 },
    #[error(transparent)]
    Invalid(#[from] CodeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistanceMethod {
    /// Walk the whole centralizer of the stabilizer.
    Exhaustive,
    /// Walk each nontrivial logical class times the gauge group.
    Coset,
}

impl std::str::FromStr for DistanceMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(DistanceMethod::Exhaustive),
            "coset" => Ok(DistanceMethod::Coset),
            other => Err(format!("unknown distance method {other:?}")),
        }
    }
}

/// Logical class modulo the gauge group: bit `j` of `x` (resp. `z`) is the
/// coefficient on `X̄_j` (resp. `Z̄_j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogicalLabel {
    pub k: usize,
    pub x: u64,
    pub z: u64,
}

impl LogicalLabel {
    pub fn is_trivial(&self) -> bool {
        self.x == 0 && self.z == 0
    }
}

impl fmt::Display for LogicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.k {
            let c = match (self.x >> j & 1, self.z >> j & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorClass {
    OutsideN,
    Gauge,
    Logical(LogicalLabel),
}

/// Precomputed data for repeated classification against one code.
#[derive(Debug, Clone)]
pub struct Classifier {
    n: usize,
    s: usize,
    r: usize,
    k: usize,
    stabilizer: Vec<u128>,
    basis: ReducedBasis,
}

impl Classifier {
    /// `code` must be valid; an incomplete frame is completed first.
    pub fn new(code: &SubsystemCode) -> Result<Classifier, CodeError> {
        let code = if code.is_complete() { code.clone() } else { code.validated()? };
        let n = code.n;
        let stabilizer: Vec<u128> = code.stabilizer.iter().map(|p| p.symplectic()).collect();
        // Rows: S_1..S_s, (gx, gz) per gauge pair, (X̄, Z̄) per logical pair.
        let mut rows = stabilizer.clone();
        for p in code.gauge.iter().chain(&code.logical) {
            rows.push(p.x.symplectic());
            rows.push(p.z.symplectic());
        }
        Ok(Classifier {
            n,
            s: code.s(),
            r: code.r(),
            k: code.k(),
            stabilizer,
            basis: ReducedBasis::from_rows(2 * n, &rows),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_stabilizers(&self) -> usize {
        self.s
    }

    pub fn num_logical(&self) -> usize {
        self.k
    }

    /// Bit `j` is set when the vector anticommutes with stabilizer generator `j`.
    #[inline]
    pub fn syndrome_bits(&self, v: u128) -> u64 {
        let mut bits = 0u64;
        for (j, &g) in self.stabilizer.iter().enumerate() {
            bits |= (symplectic_product(self.n, v, g) as u64) << j;
        }
        bits
    }

    #[inline]
    pub fn classify_vector(&self, v: u128) -> OperatorClass {
        if self.syndrome_bits(v) != 0 {
            return OperatorClass::OutsideN;
        }
        let combo = self
            .basis
            .express(v)
            .expect("a complete frame spans every vector in the normalizer");
        let offset = self.s + 2 * self.r;
        let (mut x, mut z) = (0u64, 0u64);
        for j in 0..self.k {
            x |= ((combo >> (offset + 2 * j) & 1) as u64) << j;
            z |= ((combo >> (offset + 2 * j + 1) & 1) as u64) << j;
        }
        let label = LogicalLabel { k: self.k, x, z };
        if label.is_trivial() {
            OperatorClass::Gauge
        } else {
            OperatorClass::Logical(label)
        }
    }

    pub fn classify(&self, p: &PauliOp) -> OperatorClass {
        assert_eq!(p.num_qubits(), self.n, "classify: qubit count mismatch");
        self.classify_vector(p.symplectic())
    }
}

/// Classifies `p` as outside the normalizer, gauge, or logical.
pub fn classify(code: &SubsystemCode, p: &PauliOp) -> Result<OperatorClass, CodeError> {
    Ok(Classifier::new(code)?.classify(p))
}

fn check_budget(log2_size: u32, budget: u64) -> Result<(), DistanceError> {
    let size = 1u128.checked_shl(log2_size).unwrap_or(u128::MAX);
    if size > budget as u128 {
        return Err(DistanceError::BudgetExceeded { log2_size, budget });
    }
    Ok(())
}

/// Minimum weight over `start + span(basis)` restricted to elements accepted
/// by `keep`, visiting elements in Gray-code order. Stops early at weight 1.
fn gray_walk_min(
    n: usize,
    basis: &[u128],
    start: u128,
    keep: impl Fn(u128) -> bool,
) -> Option<u32> {
    let mut best: Option<u32> = None;
    let mut cur = start;
    let total: u64 = 1u64 << basis.len();
    for i in 0..total {
        if i > 0 {
            cur ^= basis[i.trailing_zeros() as usize];
        }
        if cur == 0 || !keep(cur) {
            continue;
        }
        let w = symplectic_weight(n, cur);
        if best.is_none_or(|b| w < b) {
            best = Some(w);
            if w <= 1 {
                break;
            }
        }
    }
    best
}

/// Minimum weight of a nontrivial logical operator.
pub fn distance(
    code: &SubsystemCode,
    method: DistanceMethod,
    budget: u64,
) -> Result<u32, DistanceError> {
    let code = if code.is_complete() { code.clone() } else { code.validated()? };
    if code.k() == 0 {
        return Err(DistanceError::NoLogicalQubits);
    }
    let n = code.n;
    let logical: Vec<u128> = code.logical_generators().iter().map(|p| p.symplectic()).collect();
    let d = match method {
        DistanceMethod::Exhaustive => {
            let stab: Vec<u128> = code.stabilizer.iter().map(|p| p.symplectic()).collect();
            let basis = tableau::centralizer_vectors(n, &stab);
            check_budget(basis.len() as u32, budget)?;
            // Inside N(S), gauge elements are exactly those commuting with every logical.
            gray_walk_min(n, &basis, 0, |v| {
                logical.iter().any(|&l| symplectic_product(n, v, l) == 1)
            })
        }
        DistanceMethod::Coset => {
            let gauge: Vec<u128> =
                code.gauge_generators().iter().map(|p| p.symplectic()).collect();
            let k = code.k();
            let classes = (1u64 << (2 * k)) - 1;
            let log2 = gauge.len() as u32 + 2 * k as u32;
            check_budget(log2, budget)?;
            (1..=classes)
                .into_par_iter()
                .filter_map(|label| {
                    let rep = logical
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| label >> i & 1 == 1)
                        .fold(0u128, |acc, (_, &l)| acc ^ l);
                    gray_walk_min(n, &gauge, rep, |_| true)
                })
                .min()
        }
    };
    Ok(d.expect("a code with k ≥ 1 has nontrivial logical operators"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Correctability {
    Correctable,
    /// Indices into the error list whose product is a nontrivial logical.
    Witness { a: usize, b: usize, class: LogicalLabel },
}

/// Checks every unordered pair (including `a = b`) for a product in `N(S) − G`.
pub fn is_correctable_set(
    code: &SubsystemCode,
    errors: &[PauliOp],
) -> Result<Correctability, CodeError> {
    let cls = Classifier::new(code)?;
    let vecs: Vec<u128> = errors.iter().map(|e| e.symplectic()).collect();
    for a in 0..vecs.len() {
        for b in a..vecs.len() {
            if let OperatorClass::Logical(class) = cls.classify_vector(vecs[a] ^ vecs[b]) {
                return Ok(Correctability::Witness { a, b, class });
            }
        }
    }
    Ok(Correctability::Correctable)
}

/// Number of unordered pairs whose product is a nontrivial logical.
pub fn count_uncorrectable_pairs(code: &SubsystemCode, errors: &[PauliOp]) -> Result<u64, CodeError> {
    let cls = Classifier::new(code)?;
    let vecs: Vec<u128> = errors.iter().map(|e| e.symplectic()).collect();
    let count = (0..vecs.len())
        .into_par_iter()
        .map(|a| {
            vecs[a..]
                .iter()
                .filter(|&&b| matches!(cls.classify_vector(vecs[a] ^ b), OperatorClass::Logical(_)))
                .count() as u64
        })
        .sum();
    Ok(count)
}
