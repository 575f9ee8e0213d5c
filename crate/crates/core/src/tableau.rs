//! Symplectic frames, centralizers and group membership.
//!
//! A frame is a choice of `2n` operators `x'_j, z'_j` obeying the single-qubit
//! Pauli commutation relations. Stabilizer generators occupy `z'` slots; the
//! remaining slots are completed by symplectic Gram-Schmidt.

use thiserror::Error;

use crate::gf2::{self, BinMatrix, ReducedBasis};
use crate::pauli::{symplectic_product, PauliOp};

/// Position of an operator inside a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    X(usize),
    Z(usize),
}

impl Slot {
    pub fn index(self) -> usize {
        match self {
            Slot::X(i) | Slot::Z(i) => i,
        }
    }

    fn partner(self) -> Slot {
        match self {
            Slot::X(i) => Slot::Z(i),
            Slot::Z(i) => Slot::X(i),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("operator in slot {0:?} acts on the wrong number of qubits")]
    QubitMismatch(Slot),
    #[error("slot {0:?} is out of range")]
    SlotOutOfRange(Slot),
    #[error("slot {0:?} supplied twice")]
    DuplicateSlot(Slot),
    #[error("supplied operators are linearly dependent")]
    Dependent,
    #[error("slots {0:?} and {1:?} violate the frame commutation pattern")]
    Pattern(Slot, Slot),
    #[error("vectors do not span a non-degenerate symplectic space")]
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticFrame {
    pub n: usize,
    pub x_prime: Vec<PauliOp>,
    pub z_prime: Vec<PauliOp>,
}

impl SymplecticFrame {
    pub fn get(&self, slot: Slot) -> &PauliOp {
        match slot {
            Slot::X(i) => &self.x_prime[i],
            Slot::Z(i) => &self.z_prime[i],
        }
    }

    /// First violated commutation relation, if any.
    pub fn pattern_violation(&self) -> Option<(Slot, Slot)> {
        let slots: Vec<Slot> =
            (0..self.n).flat_map(|i| [Slot::X(i), Slot::Z(i)]).collect();
        for (a_idx, &a) in slots.iter().enumerate() {
            for &b in &slots[a_idx + 1..] {
                let anti = !self.get(a).commutes(self.get(b));
                if anti != (a.partner() == b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn rank(&self) -> usize {
        let ops: Vec<PauliOp> = self.x_prime.iter().chain(&self.z_prime).copied().collect();
        BinMatrix::from_paulis(self.n, &ops).rank()
    }

    pub fn is_valid(&self) -> bool {
        self.pattern_violation().is_none() && self.rank() == 2 * self.n
    }
}

/// Swaps the x and z halves so that `dot(twist(a), b)` is the symplectic product.
#[inline]
pub fn twist(n: usize, v: u128) -> u128 {
    let m = gf2::col_mask(n);
    ((v & m) << n) | (v >> n)
}

/// Basis of everything commuting with `gens`, modulo phase.
///
/// The result has `2n − rank(gens)` elements, all with phase exponent 0.
pub fn centralizer_basis(n: usize, gens: &[PauliOp]) -> Vec<PauliOp> {
    centralizer_vectors(n, &gens.iter().map(|g| g.symplectic()).collect::<Vec<_>>())
        .into_iter()
        .map(|v| PauliOp::from_symplectic_raw(n, v))
        .collect()
}

/// Kernel of the symplectic-product map on packed vectors.
pub fn centralizer_vectors(n: usize, gens: &[u128]) -> Vec<u128> {
    let twisted: Vec<u128> = gens.iter().map(|&g| twist(n, g)).collect();
    BinMatrix::new(2 * n, twisted).null_space()
}

pub fn in_group_mod_phase(gens: &[PauliOp], p: &PauliOp) -> bool {
    let n = p.num_qubits();
    BinMatrix::from_paulis(n, gens).contains(p.symplectic())
}

/// Phase `δ` with `p = i^δ · (product of generators)`, if `p` is in the group
/// modulo phase. The product is taken in generator order.
pub fn in_group_exact(gens: &[PauliOp], p: &PauliOp) -> Option<u8> {
    let n = p.num_qubits();
    let coeffs = BinMatrix::from_paulis(n, gens).solve_membership(p.symplectic()).ok()??;
    let prod = ordered_product(n, gens, coeffs.iter().copied());
    Some(p.phase().wrapping_sub(prod.phase()) & 3)
}

/// Product of the selected generators, left to right.
pub fn ordered_product(
    n: usize,
    gens: &[PauliOp],
    select: impl IntoIterator<Item = bool>,
) -> PauliOp {
    gens.iter()
        .zip(select)
        .filter(|(_, s)| *s)
        .fold(PauliOp::identity(n), |acc, (g, _)| acc.multiply(g))
}

/// Generator indices whose product is a non-trivial scalar (so `−1` is in the
/// group they generate). Assumes the generators commute pairwise.
pub fn minus_one_witness(n: usize, gens: &[PauliOp]) -> Option<Vec<usize>> {
    for (i, g) in gens.iter().enumerate() {
        if !g.multiply(g).is_identity() {
            return Some(vec![i]);
        }
    }
    let mut basis = ReducedBasis::new(2 * n);
    for (i, g) in gens.iter().enumerate().take(128) {
        if let Err(relation) = basis.insert_or_relation(g.symplectic()) {
            let prod = ordered_product(n, gens, (0..=i).map(|j| relation >> j & 1 == 1));
            if !prod.is_identity() {
                return Some((0..=i).filter(|&j| relation >> j & 1 == 1).collect());
            }
        }
    }
    None
}

/// Lexicographically smallest element of `a + span(span)`, comparing vectors
/// as integers.
pub fn lex_min(a: u128, span: &[u128]) -> u128 {
    let basis = high_pivot_basis(span);
    basis.iter().fold(a, |acc, &(p, b)| if acc >> p & 1 == 1 { acc ^ b } else { acc })
}

/// Smallest nonzero element of `span(span)`, if any.
pub fn lex_min_nonzero(span: &[u128]) -> Option<u128> {
    high_pivot_basis(span).last().map(|&(_, b)| b)
}

/// Fully reduced basis keyed by highest set bit, sorted by decreasing pivot.
fn high_pivot_basis(span: &[u128]) -> Vec<(u32, u128)> {
    let mut basis: Vec<(u32, u128)> = Vec::new();
    for &v in span {
        let mut r = v;
        for &(p, b) in &basis {
            if r >> p & 1 == 1 {
                r ^= b;
            }
        }
        if r == 0 {
            continue;
        }
        let p = 127 - r.leading_zeros();
        for e in basis.iter_mut() {
            if e.1 >> p & 1 == 1 {
                e.1 ^= r;
            }
        }
        basis.push((p, r));
        basis.sort_unstable_by_key(|b| std::cmp::Reverse(b.0));
    }
    basis
}

/// Smallest `v` with `⟨v, u⟩ = target` for every `(u, target)`.
pub fn partner_solution(n: usize, constraints: &[(u128, bool)]) -> Option<u128> {
    let twisted: Vec<(u128, bool)> = constraints.iter().map(|&(u, t)| (twist(n, u), t)).collect();
    let sol = gf2::solve_affine(2 * n, &twisted)?;
    Some(lex_min(sol.particular, &sol.homogeneous))
}

/// Extends operators placed in given slots to a full frame.
///
/// Missing partners are chosen first, in slot-index order, as the smallest
/// vector with the required commutation pattern; fully empty slots are then
/// filled from the symplectic complement of everything placed so far.
/// Completed operators are Hermitian.
pub fn symplectic_complete(
    n: usize,
    partial: &[(Slot, PauliOp)],
) -> Result<SymplecticFrame, FrameError> {
    let mut x_slots: Vec<Option<u128>> = vec![None; n];
    let mut z_slots: Vec<Option<u128>> = vec![None; n];
    let mut given: Vec<(Slot, PauliOp)> = Vec::with_capacity(partial.len());
    for &(slot, op) in partial {
        if slot.index() >= n {
            return Err(FrameError::SlotOutOfRange(slot));
        }
        if op.num_qubits() != n {
            return Err(FrameError::QubitMismatch(slot));
        }
        let cell = match slot {
            Slot::X(i) => &mut x_slots[i],
            Slot::Z(i) => &mut z_slots[i],
        };
        if cell.is_some() {
            return Err(FrameError::DuplicateSlot(slot));
        }
        *cell = Some(op.symplectic());
        given.push((slot, op));
    }
    for (i, &(a, pa)) in given.iter().enumerate() {
        for &(b, pb) in &given[i + 1..] {
            if !pa.commutes(&pb) != (a.partner() == b) {
                return Err(FrameError::Pattern(a, b));
            }
        }
    }
    if BinMatrix::from_paulis(n, &given.iter().map(|g| g.1).collect::<Vec<_>>()).rank()
        != given.len()
    {
        return Err(FrameError::Dependent);
    }

    let placed = |xs: &[Option<u128>], zs: &[Option<u128>]| -> Vec<(Slot, u128)> {
        (0..n)
            .flat_map(|i| [(Slot::X(i), xs[i]), (Slot::Z(i), zs[i])])
            .filter_map(|(s, v)| v.map(|v| (s, v)))
            .collect()
    };

    // Partners for half-filled slots.
    for i in 0..n {
        let missing = match (x_slots[i], z_slots[i]) {
            (Some(_), None) => Slot::Z(i),
            (None, Some(_)) => Slot::X(i),
            _ => continue,
        };
        let constraints: Vec<(u128, bool)> = placed(&x_slots, &z_slots)
            .into_iter()
            .map(|(s, v)| (v, s == missing.partner()))
            .collect();
        let v = partner_solution(n, &constraints).ok_or(FrameError::Dependent)?;
        match missing {
            Slot::X(i) => x_slots[i] = Some(v),
            Slot::Z(i) => z_slots[i] = Some(v),
        }
    }

    // Empty slots from the symplectic complement.
    for i in 0..n {
        if x_slots[i].is_some() {
            continue;
        }
        let current: Vec<u128> = placed(&x_slots, &z_slots).into_iter().map(|(_, v)| v).collect();
        let complement = centralizer_vectors(n, &current);
        let x = lex_min_nonzero(&complement).ok_or(FrameError::Degenerate)?;
        let mut constraints: Vec<(u128, bool)> = current.iter().map(|&v| (v, false)).collect();
        constraints.push((x, true));
        let z = partner_solution(n, &constraints).ok_or(FrameError::Degenerate)?;
        z_slots[i] = Some(z);
        x_slots[i] = Some(x);
    }

    // Supplied operators keep their phases; completions are Hermitian.
    let build = |slots: &[Option<u128>], ctor: fn(usize) -> Slot| -> Vec<PauliOp> {
        slots
            .iter()
            .enumerate()
            .map(|(i, v)| {
                given
                    .iter()
                    .find(|(s, _)| *s == ctor(i))
                    .map(|(_, op)| *op)
                    .unwrap_or_else(|| PauliOp::from_symplectic(n, v.expect("slot filled")))
            })
            .collect()
    };
    let frame = SymplecticFrame { n, x_prime: build(&x_slots, Slot::X), z_prime: build(&z_slots, Slot::Z) };
    debug_assert!(frame.is_valid());
    Ok(frame)
}

/// Splits vectors spanning a non-degenerate space into hyperbolic pairs
/// `(x, z)` with `⟨x, z⟩ = 1` and all cross products zero. Vectors in the
/// span's radical make the call fail.
pub fn hyperbolic_pairs(n: usize, vectors: &[u128]) -> Result<Vec<(u128, u128)>, FrameError> {
    let mut pool: Vec<u128> = vectors.iter().copied().filter(|&v| v != 0).collect();
    let mut pairs = Vec::new();
    while let Some(z) = pool.first().copied() {
        let pos = pool[1..]
            .iter()
            .position(|&v| symplectic_product(n, z, v) == 1)
            .ok_or(FrameError::Degenerate)?
            + 1;
        let x = pool[pos];
        pool.remove(pos);
        pool.remove(0);
        for v in pool.iter_mut() {
            let with_x = symplectic_product(n, *v, x);
            let with_z = symplectic_product(n, *v, z);
            if with_x == 1 {
                *v ^= z;
            }
            if with_z == 1 {
                *v ^= x;
            }
        }
        pool.retain(|&v| v != 0);
        pairs.push((x, z));
    }
    Ok(pairs)
}
