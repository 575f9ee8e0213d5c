//! Syndrome extraction and lookup-table recovery modulo the gauge group.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::code::{CodeError, SubsystemCode};
use crate::distance::{Classifier, LogicalLabel, OperatorClass};
use crate::pauli::{paulis_up_to_weight, symplectic_product, PauliOp};

/// Tables over at most this many stabilizer generators use a dense array.
const DENSE_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecoderError {
    #[error("error acts on {found} qubits, code has {expected}")]
    QubitMismatch { expected: usize, found: usize },
    #[error("table weight {t} exceeds the number of qubits {n}")]
    WeightTooLarge { t: usize, n: usize },
    #[error("decoding table was built for a different code")]
    TableMismatch,
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Measurement outcomes of the stabilizer generators; bit `j` set means
/// generator `j` reported −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome {
    pub bits: u64,
    pub len: usize,
}

impl Syndrome {
    pub fn is_trivial(&self) -> bool {
        self.bits == 0
    }

    /// Outcome of generator `j` as ±1.
    pub fn outcome(&self, j: usize) -> i8 {
        if self.bits >> j & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn outcomes(&self) -> Vec<i8> {
        (0..self.len).map(|j| self.outcome(j)).collect()
    }
}

/// Bits in generator order, `0` for +1 and `1` for −1.
impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len {
            f.write_str(if self.bits >> j & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

fn stabilizer_vectors(code: &SubsystemCode) -> Vec<u128> {
    code.stabilizer.iter().map(|g| g.symplectic()).collect()
}

fn syndrome_of(n: usize, stab: &[u128], e: &PauliOp) -> Syndrome {
    let v = e.symplectic();
    let bits = stab
        .iter()
        .enumerate()
        .fold(0u64, |acc, (j, &g)| acc | (symplectic_product(n, v, g) as u64) << j);
    Syndrome { bits, len: stab.len() }
}

pub fn syndrome(code: &SubsystemCode, e: &PauliOp) -> Result<Syndrome, DecoderError> {
    if e.num_qubits() != code.n {
        return Err(DecoderError::QubitMismatch { expected: code.n, found: e.num_qubits() });
    }
    Ok(syndrome_of(code.n, &stabilizer_vectors(code), e))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Storage {
    Dense(Vec<Option<PauliOp>>),
    Sparse(HashMap<u64, PauliOp>),
}

/// Map from syndromes to minimum-weight representatives of weight ≤ `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodingTable {
    n: usize,
    t: usize,
    stabilizer: Vec<u128>,
    storage: Storage,
    len: usize,
}

impl DecodingTable {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn lookup(&self, s: &Syndrome) -> Option<&PauliOp> {
        match &self.storage {
            Storage::Dense(v) => v.get(s.bits as usize).and_then(|e| e.as_ref()),
            Storage::Sparse(m) => m.get(&s.bits),
        }
    }

    fn insert_if_absent(&mut self, key: u64, e: PauliOp) {
        let inserted = match &mut self.storage {
            Storage::Dense(v) => {
                let slot = &mut v[key as usize];
                slot.is_none() && slot.replace(e).is_none()
            }
            Storage::Sparse(m) => match m.entry(key) {
                std::collections::hash_map::Entry::Occupied(_) => false,
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(e);
                    true
                }
            },
        };
        self.len += inserted as usize;
    }

    /// Entries sorted by syndrome string.
    pub fn entries(&self) -> Vec<(Syndrome, PauliOp)> {
        let len = self.stabilizer.len();
        let mut out: Vec<(Syndrome, PauliOp)> = match &self.storage {
            Storage::Dense(v) => v
                .iter()
                .enumerate()
                .filter_map(|(k, e)| e.map(|e| (Syndrome { bits: k as u64, len }, e)))
                .collect(),
            Storage::Sparse(m) => {
                m.iter().map(|(&k, &e)| (Syndrome { bits: k, len }, e)).collect()
            }
        };
        out.sort_by_cached_key(|(s, _)| s.to_string());
        out
    }

    /// One `<syndrome bits> <pauli string>` line per entry.
    pub fn dump(&self) -> String {
        self.entries().iter().map(|(s, e)| format!("{s} {e}\n")).collect()
    }

    fn matches(&self, code: &SubsystemCode) -> bool {
        self.n == code.n && self.stabilizer == stabilizer_vectors(code)
    }
}

/// Enumerates errors by weight `0..=t` in (qubit, X<Y<Z) order and keeps the
/// first error seen for every syndrome.
pub fn build_table(code: &SubsystemCode, t: usize) -> Result<DecodingTable, DecoderError> {
    if t > code.n {
        return Err(DecoderError::WeightTooLarge { t, n: code.n });
    }
    let stabilizer = stabilizer_vectors(code);
    let s = stabilizer.len();
    let storage = if s <= DENSE_LIMIT {
        Storage::Dense(vec![None; 1 << s])
    } else {
        Storage::Sparse(HashMap::new())
    };
    let mut table = DecodingTable { n: code.n, t, stabilizer, storage, len: 0 };
    let identity = PauliOp::identity(code.n);
    table.insert_if_absent(0, identity);
    for e in paulis_up_to_weight(code.n, t) {
        let key = syndrome_of(code.n, &table.stabilizer, &e).bits;
        table.insert_if_absent(key, e);
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Recovery left a gauge operator.
    GaugeSuccess { residual: PauliOp },
    /// Recovery left a nontrivial logical operator.
    LogicalFailure { class: LogicalLabel, residual: PauliOp },
    /// The syndrome is not in the table.
    Unrecoverable,
}

/// A table bound to a classifier for repeated decoding.
#[derive(Debug, Clone)]
pub struct Decoder {
    classifier: Classifier,
    table: DecodingTable,
}

impl Decoder {
    pub fn new(code: &SubsystemCode, table: DecodingTable) -> Result<Decoder, DecoderError> {
        if !table.matches(code) {
            return Err(DecoderError::TableMismatch);
        }
        Ok(Decoder { classifier: Classifier::new(code)?, table })
    }

    pub fn table(&self) -> &DecodingTable {
        &self.table
    }

    pub fn classifier(&self) -> &Classifier {
        &self.classifier
    }

    pub fn syndrome(&self, e: &PauliOp) -> Syndrome {
        Syndrome { bits: self.classifier.syndrome_bits(e.symplectic()), len: self.table.stabilizer.len() }
    }

    pub fn decode(&self, e: &PauliOp) -> Result<Outcome, DecoderError> {
        if e.num_qubits() != self.table.n {
            return Err(DecoderError::QubitMismatch { expected: self.table.n, found: e.num_qubits() });
        }
        let Some(rep) = self.table.lookup(&self.syndrome(e)) else {
            return Ok(Outcome::Unrecoverable);
        };
        let residual = rep.multiply(e);
        Ok(match self.classifier.classify(&residual) {
            OperatorClass::Gauge => Outcome::GaugeSuccess { residual },
            OperatorClass::Logical(class) => Outcome::LogicalFailure { class, residual },
            OperatorClass::OutsideN => {
                unreachable!("equal syndromes put the residual in the normalizer")
            }
        })
    }
}

pub fn recover_and_classify(
    code: &SubsystemCode,
    table: &DecodingTable,
    e: &PauliOp,
) -> Result<Outcome, DecoderError> {
    Decoder::new(code, table.clone())?.decode(e)
}
