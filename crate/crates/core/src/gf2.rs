//! Dense GF(2) matrices whose rows are packed into `u128` words.
//!
//! Column `c` of a row is bit `c` of its word. Rows produced from Pauli
//! operators are `(x|z)` symplectic vectors, so the column count is `2n`.
//! Pivots are lowest set bits: the reduced form has strictly increasing pivot
//! columns and every pivot column is zero outside its own row.

use thiserror::Error;

use crate::pauli::PauliOp;

/// Widest supported row.
pub const MAX_COLS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("vector has bits outside the {ncols} matrix columns")]
    LengthMismatch { ncols: usize },
    #[error("{0} columns exceeds the supported maximum of {MAX_COLS}")]
    TooWide(usize),
}

#[inline]
pub fn col_mask(ncols: usize) -> u128 {
    if ncols >= 128 {
        u128::MAX
    } else {
        (1u128 << ncols) - 1
    }
}

/// Parity of the ordinary dot product.
#[inline]
pub fn dot(a: u128, b: u128) -> u32 {
    (a & b).count_ones() & 1
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    ncols: usize,
    rows: Vec<u128>,
}

/// Reduced row-echelon form together with its rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub reduced: BinMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl BinMatrix {
    pub fn new(ncols: usize, rows: Vec<u128>) -> BinMatrix {
        assert!(ncols <= MAX_COLS, "{ncols} columns exceeds {MAX_COLS}");
        let m = col_mask(ncols);
        BinMatrix { ncols, rows: rows.into_iter().map(|r| r & m).collect() }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> BinMatrix {
        BinMatrix::new(ncols, vec![0; nrows])
    }

    /// Symplectic rows `(x|z)` of the given operators; phases are dropped.
    pub fn from_paulis(n: usize, ops: &[PauliOp]) -> BinMatrix {
        BinMatrix::new(2 * n, ops.iter().map(|p| p.symplectic()).collect())
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> u128 {
        self.rows[i]
    }

    pub fn push(&mut self, row: u128) {
        self.rows.push(row & col_mask(self.ncols));
    }

    pub fn rref(&self) -> Rref {
        let basis = ReducedBasis::from_rows(self.ncols, &self.rows);
        let mut pairs: Vec<(usize, u128)> =
            basis.rows.iter().map(|r| (r.pivot, r.vector)).collect();
        pairs.sort_unstable_by_key(|&(p, _)| p);
        let pivots: Vec<usize> = pairs.iter().map(|&(p, _)| p).collect();
        let rows = pairs.into_iter().map(|(_, v)| v).collect();
        let rank = pivots.len();
        Rref { reduced: BinMatrix { ncols: self.ncols, rows }, rank, pivots }
    }

    pub fn rank(&self) -> usize {
        ReducedBasis::from_rows(self.ncols, &self.rows).rank()
    }

    /// Coefficients `c` with `Σ c_i · row_i = v`, or `None` when `v` is outside the row space.
    pub fn solve_membership(&self, v: u128) -> Result<Option<Vec<bool>>, Gf2Error> {
        if v & !col_mask(self.ncols) != 0 {
            return Err(Gf2Error::LengthMismatch { ncols: self.ncols });
        }
        // Coefficient tracking needs at most MAX_COLS independent rows.
        let mut independent = Vec::new();
        let mut probe = ReducedBasis::new(self.ncols);
        for (i, &r) in self.rows.iter().enumerate() {
            if probe.insert(r) {
                independent.push(i);
            }
        }
        let sub: Vec<u128> = independent.iter().map(|&i| self.rows[i]).collect();
        let tracked = ReducedBasis::from_rows(self.ncols, &sub);
        Ok(tracked.express(v).map(|combo| {
            let mut coeffs = vec![false; self.rows.len()];
            for (j, &orig) in independent.iter().enumerate() {
                if combo >> j & 1 == 1 {
                    coeffs[orig] = true;
                }
            }
            coeffs
        }))
    }

    pub fn contains(&self, v: u128) -> bool {
        ReducedBasis::from_rows(self.ncols, &self.rows).contains(v)
    }

    /// Basis of `{v : row · v = 0 for every row}`, one vector per free column.
    pub fn null_space(&self) -> Vec<u128> {
        let rref = self.rref();
        let pivot_set: u128 = rref.pivots.iter().fold(0, |acc, &p| acc | 1u128 << p);
        let mut out = Vec::with_capacity(self.ncols - rref.rank);
        for f in (0..self.ncols).filter(|&c| pivot_set >> c & 1 == 0) {
            let mut v = 1u128 << f;
            for (row, &p) in rref.reduced.rows.iter().zip(&rref.pivots) {
                if row >> f & 1 == 1 {
                    v |= 1u128 << p;
                }
            }
            out.push(v);
        }
        out
    }

    pub fn same_rowspace(&self, other: &BinMatrix) -> bool {
        self.ncols == other.ncols && self.rref().reduced == other.rref().reduced
    }
}

#[derive(Debug, Clone, Copy)]
struct BasisRow {
    vector: u128,
    pivot: usize,
    combo: u128,
}

/// Incrementally maintained fully reduced basis.
///
/// Each stored row remembers which inserted rows it is a sum of, so membership
/// queries can return coefficients in O(rank) word operations. Coefficient
/// tracking covers the first 128 inserted rows.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    ncols: usize,
    rows: Vec<BasisRow>,
    inserted: usize,
}

impl ReducedBasis {
    pub fn new(ncols: usize) -> ReducedBasis {
        assert!(ncols <= MAX_COLS, "{ncols} columns exceeds {MAX_COLS}");
        ReducedBasis { ncols, rows: Vec::new(), inserted: 0 }
    }

    pub fn from_rows(ncols: usize, rows: &[u128]) -> ReducedBasis {
        let mut b = ReducedBasis::new(ncols);
        for &r in rows {
            b.insert(r);
        }
        b
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    fn reduce_with_combo(&self, mut v: u128) -> (u128, u128) {
        let mut combo = 0u128;
        for r in &self.rows {
            if v >> r.pivot & 1 == 1 {
                v ^= r.vector;
                combo ^= r.combo;
            }
        }
        (v, combo)
    }

    /// Remainder of `v` after eliminating every pivot column.
    #[inline]
    pub fn reduce(&self, mut v: u128) -> u128 {
        for r in &self.rows {
            if v >> r.pivot & 1 == 1 {
                v ^= r.vector;
            }
        }
        v
    }

    /// Adds a row; returns false when it was already in the span.
    pub fn insert(&mut self, v: u128) -> bool {
        self.insert_or_relation(v).is_ok()
    }

    /// Adds a row. When it is already in the span, returns the linear relation
    /// among inserted rows (including this one) that sums to zero.
    pub fn insert_or_relation(&mut self, v: u128) -> Result<(), u128> {
        let idx = self.inserted;
        self.inserted += 1;
        let tag = if idx < 128 { 1u128 << idx } else { 0 };
        let (rem, combo) = self.reduce_with_combo(v & col_mask(self.ncols));
        if rem == 0 {
            return Err(combo ^ tag);
        }
        let pivot = rem.trailing_zeros() as usize;
        let new = BasisRow { vector: rem, pivot, combo: combo ^ tag };
        for r in &mut self.rows {
            if r.vector >> pivot & 1 == 1 {
                r.vector ^= new.vector;
                r.combo ^= new.combo;
            }
        }
        self.rows.push(new);
        Ok(())
    }

    pub fn contains(&self, v: u128) -> bool {
        self.reduce(v) == 0
    }

    /// Bitmask of inserted-row indices summing to `v`, if `v` is in the span.
    pub fn express(&self, v: u128) -> Option<u128> {
        let (rem, combo) = self.reduce_with_combo(v);
        (rem == 0).then_some(combo)
    }

    pub fn pivot_mask(&self) -> u128 {
        self.rows.iter().fold(0, |acc, r| acc | 1u128 << r.pivot)
    }

    /// Basis vectors sorted by pivot (the canonical reduced form).
    pub fn sorted_rows(&self) -> Vec<u128> {
        let mut rows: Vec<(usize, u128)> = self.rows.iter().map(|r| (r.pivot, r.vector)).collect();
        rows.sort_unstable_by_key(|&(p, _)| p);
        rows.into_iter().map(|(_, v)| v).collect()
    }
}

/// Solutions of the affine system `dot(a_i, v) = b_i` on `ncols`-bit vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolutions {
    pub particular: u128,
    pub homogeneous: Vec<u128>,
}

/// Solves `dot(a_i, v) = b_i` for all `i`; `None` when inconsistent.
pub fn solve_affine(ncols: usize, constraints: &[(u128, bool)]) -> Option<AffineSolutions> {
    // Augment each constraint row with its right-hand side in column `ncols`.
    assert!(ncols < MAX_COLS, "augmented system needs a spare column");
    let aug: Vec<u128> =
        constraints.iter().map(|&(a, b)| (a & col_mask(ncols)) | (b as u128) << ncols).collect();
    let rref = BinMatrix::new(ncols + 1, aug).rref();
    if rref.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut particular = 0u128;
    for (row, &p) in rref.reduced.rows().iter().zip(&rref.pivots) {
        if row >> ncols & 1 == 1 {
            particular |= 1u128 << p;
        }
    }
    let homogeneous = BinMatrix::new(ncols, rref.reduced.rows().to_vec()).null_space();
    Some(AffineSolutions { particular, homogeneous })
}
