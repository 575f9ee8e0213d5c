//! Phased Pauli operators in binary-symplectic form.
//!
//! A [`PauliOp`] on `n` qubits stands for `i^phase · ∏_j X_j^{x_j} Z_j^{z_j}`,
//! with the X factor written to the left of the Z factor on every qubit.
//! Under this convention `Y = i·X·Z`, so a `Y` on qubit `j` sets both bits
//! and contributes `+1` to the phase exponent.
//!
//! The X and Z halves are packed into one machine word each, which caps the
//! qubit count at [`MAX_QUBITS`]. The symplectic vector of an operator is the
//! `2n`-bit concatenation `(x|z)` with `x_j` at bit `j` and `z_j` at bit `n + j`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest supported qubit count. Symplectic vectors plus one augmented
/// column must fit in a `u128`.
pub const MAX_QUBITS: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("empty Pauli string")]
    Empty,
    #[error("invalid character {found:?} at position {position}")]
    InvalidChar { position: usize, found: char },
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },
    #[error("{0} qubits exceeds the supported maximum of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    /// The three non-identity letters in the canonical X < Y < Z order.
    pub const NONTRIVIAL: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliOp {
    n: usize,
    phase: u8,
    x: u64,
    z: u64,
}

#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliOp {
    pub fn identity(n: usize) -> PauliOp {
        assert!(n <= MAX_QUBITS, "{n} qubits exceeds {MAX_QUBITS}");
        PauliOp { n, phase: 0, x: 0, z: 0 }
    }

    /// Builds an operator from raw parts. Bits above `n` are masked off.
    pub fn from_parts(n: usize, phase: u8, x: u64, z: u64) -> PauliOp {
        assert!(n <= MAX_QUBITS, "{n} qubits exceeds {MAX_QUBITS}");
        let m = low_mask(n);
        PauliOp { n, phase: phase & 3, x: x & m, z: z & m }
    }

    /// Hermitian operator with the given bit pattern: every `x_j = z_j = 1`
    /// position reads as a `Y`, so the phase is the number of such positions.
    pub fn hermitian(n: usize, x: u64, z: u64) -> PauliOp {
        let m = low_mask(n);
        let phase = ((x & z & m).count_ones() & 3) as u8;
        PauliOp::from_parts(n, phase, x, z)
    }

    /// Decodes a `(x|z)` symplectic vector into a Hermitian operator.
    pub fn from_symplectic(n: usize, v: u128) -> PauliOp {
        let m = low_mask(n) as u128;
        PauliOp::hermitian(n, (v & m) as u64, ((v >> n) & m) as u64)
    }

    /// Same as [`from_symplectic`](Self::from_symplectic) but with phase exponent 0.
    pub fn from_symplectic_raw(n: usize, v: u128) -> PauliOp {
        let m = low_mask(n) as u128;
        PauliOp::from_parts(n, 0, (v & m) as u64, ((v >> n) & m) as u64)
    }

    /// A single non-identity letter on qubit `q` (0-based), Hermitian.
    pub fn single(n: usize, q: usize, letter: Letter) -> PauliOp {
        assert!(q < n, "qubit {q} out of range for {n} qubits");
        let (x, z) = letter.bits();
        PauliOp::hermitian(n, (x as u64) << q, (z as u64) << q)
    }

    /// Tensor product of `letter` on every listed (0-based) qubit.
    pub fn on_qubits(n: usize, qubits: &[usize], letter: Letter) -> PauliOp {
        let mut mask = 0u64;
        for &q in qubits {
            assert!(q < n, "qubit {q} out of range for {n} qubits");
            mask |= 1 << q;
        }
        let (x, z) = letter.bits();
        PauliOp::hermitian(n, if x { mask } else { 0 }, if z { mask } else { 0 })
    }

    pub fn from_letters(letters: &[Letter]) -> PauliOp {
        let n = letters.len();
        let (mut x, mut z) = (0u64, 0u64);
        for (j, l) in letters.iter().enumerate() {
            let (bx, bz) = l.bits();
            x |= (bx as u64) << j;
            z |= (bz as u64) << j;
        }
        PauliOp::hermitian(n, x, z)
    }

    /// Parses an IXYZ string with an optional `+`, `-`, `+i` or `-i` prefix.
    pub fn parse(s: &str) -> Result<PauliOp, PauliError> {
        let (sign, offset) = if let Some(rest) = s.strip_prefix("+i") {
            (1u8, s.len() - rest.len())
        } else if let Some(rest) = s.strip_prefix("-i") {
            (3, s.len() - rest.len())
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, s.len() - rest.len())
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, s.len() - rest.len())
        } else {
            (0, 0)
        };
        let body = &s[offset..];
        if body.is_empty() {
            return Err(PauliError::Empty);
        }
        let mut letters = Vec::with_capacity(body.len());
        for (i, c) in body.chars().enumerate() {
            let l = match c {
                'I' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                other => {
                    return Err(PauliError::InvalidChar { position: offset + i, found: other })
                }
            };
            letters.push(l);
        }
        if letters.len() > MAX_QUBITS {
            return Err(PauliError::TooManyQubits(letters.len()));
        }
        let base = PauliOp::from_letters(&letters);
        Ok(base.with_phase(base.phase + sign))
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    pub fn with_phase(self, phase: u8) -> PauliOp {
        PauliOp { phase: phase & 3, ..self }
    }

    /// Multiplies by the scalar `i^k`.
    pub fn times_i(self, k: u8) -> PauliOp {
        self.with_phase(self.phase.wrapping_add(k))
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    /// `(x|z)` as a `2n`-bit vector.
    #[inline]
    pub fn symplectic(&self) -> u128 {
        self.x as u128 | (self.z as u128) << self.n
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0 && self.phase == 0
    }

    /// True when `x = z = 0`, whatever the phase.
    pub fn is_scalar(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Phase exponent relative to the Hermitian representative with the same bits.
    pub fn sign_exponent(&self) -> u8 {
        let ny = (self.x & self.z).count_ones() as u8;
        self.phase.wrapping_sub(ny) & 3
    }

    pub fn is_hermitian(&self) -> bool {
        self.sign_exponent() & 1 == 0
    }

    #[inline]
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Group product `self · other`.
    pub fn try_multiply(&self, other: &PauliOp) -> Result<PauliOp, PauliError> {
        if self.n != other.n {
            return Err(PauliError::QubitMismatch { left: self.n, right: other.n });
        }
        Ok(self.mul_unchecked(other))
    }

    /// Group product; panics on mismatched qubit counts.
    pub fn multiply(&self, other: &PauliOp) -> PauliOp {
        self.try_multiply(other).expect("multiply: qubit count mismatch")
    }

    #[inline]
    fn mul_unchecked(&self, other: &PauliOp) -> PauliOp {
        // Moving other's X factors left past self's Z factors costs a -1 each.
        let swaps = (self.z & other.x).count_ones() as u8;
        PauliOp {
            n: self.n,
            phase: (self.phase + other.phase + 2 * (swaps & 1)) & 3,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        }
    }

    pub fn inverse(&self) -> PauliOp {
        self.multiply(self).multiply(self)
    }

    /// Hermitian conjugate. Equals the inverse for every Pauli operator.
    pub fn adjoint(&self) -> PauliOp {
        self.inverse()
    }

    pub fn try_commutes(&self, other: &PauliOp) -> Result<bool, PauliError> {
        if self.n != other.n {
            return Err(PauliError::QubitMismatch { left: self.n, right: other.n });
        }
        Ok(symplectic_product_parts(self.x, self.z, other.x, other.z) == 0)
    }

    pub fn commutes(&self, other: &PauliOp) -> bool {
        self.try_commutes(other).expect("commutes: qubit count mismatch")
    }
}

#[inline]
fn symplectic_product_parts(ax: u64, az: u64, bx: u64, bz: u64) -> u32 {
    ((ax & bz) ^ (az & bx)).count_ones() & 1
}

/// Symplectic form on packed `(x|z)` vectors of `n` qubits.
#[inline]
pub fn symplectic_product(n: usize, a: u128, b: u128) -> u32 {
    let m = if n >= 64 { u64::MAX as u128 } else { (1u128 << n) - 1 };
    let swapped = ((b & m) << n) | (b >> n);
    (a & swapped).count_ones() & 1
}

/// Weight of a packed `(x|z)` vector.
#[inline]
pub fn symplectic_weight(n: usize, v: u128) -> u32 {
    let m = if n >= 64 { u64::MAX as u128 } else { (1u128 << n) - 1 };
    ((v & m) | (v >> n)).count_ones()
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.sign_exponent() {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp({self}, phase_exp={})", self.phase)
    }
}

impl FromStr for PauliOp {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PauliOp::parse(s)
    }
}

/// All Paulis of weight `1..=max_weight` on `n` qubits (Hermitian, +1 sign),
/// ordered by weight and then lexicographically on `(qubit, letter)` pairs with
/// `X < Y < Z`.
pub fn paulis_up_to_weight(n: usize, max_weight: usize) -> Vec<PauliOp> {
    let mut out = Vec::new();
    let mut support = Vec::new();
    let mut letters = Vec::new();
    for w in 1..=max_weight.min(n) {
        enumerate_weight(n, w, 0, &mut support, &mut letters, &mut out);
    }
    out
}

fn enumerate_weight(
    n: usize,
    remaining: usize,
    start: usize,
    support: &mut Vec<usize>,
    letters: &mut Vec<Letter>,
    out: &mut Vec<PauliOp>,
) {
    if remaining == 0 {
        let (mut x, mut z) = (0u64, 0u64);
        for (&q, &l) in support.iter().zip(letters.iter()) {
            let (bx, bz) = l.bits();
            x |= (bx as u64) << q;
            z |= (bz as u64) << q;
        }
        out.push(PauliOp::hermitian(n, x, z));
        return;
    }
    for q in start..=n - remaining {
        for l in Letter::NONTRIVIAL {
            support.push(q);
            letters.push(l);
            enumerate_weight(n, remaining - 1, q + 1, support, letters, out);
            support.pop();
            letters.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliOp {
        s.parse().unwrap()
    }

    #[test]
    fn parse_table_row() {
        let s1 = p("XXXXXXIII");
        assert_eq!(s1.x_bits(), 0b000111111);
        assert_eq!(s1.z_bits(), 0);
        assert_eq!(s1.phase(), 0);
        assert_eq!(s1.num_qubits(), 9);
    }

    #[test]
    fn parse_identity_and_y() {
        let id = p("IIIIIIIII");
        assert!(id.is_identity());
        let y = p("Y");
        assert_eq!((y.x_bits(), y.z_bits(), y.phase()), (1, 1, 1));
    }

    #[test]
    fn parse_signs() {
        assert_eq!(p("-X").phase(), 2);
        assert_eq!(p("+iZ").phase(), 1);
        assert_eq!(p("-iZ").phase(), 3);
        assert_eq!(p("-iY").phase(), 0);
        assert_eq!(p("+X"), p("X"));
    }

    #[test]
    fn parse_errors_report_position() {
        assert_eq!(PauliOp::parse(""), Err(PauliError::Empty));
        assert_eq!(PauliOp::parse("-"), Err(PauliError::Empty));
        assert_eq!(
            PauliOp::parse("XXXXXXIIW"),
            Err(PauliError::InvalidChar { position: 8, found: 'W' })
        );
        assert_eq!(PauliOp::parse("-XQ"), Err(PauliError::InvalidChar { position: 2, found: 'Q' }));
    }

    #[test]
    fn display_round_trip() {
        for s in ["XYZI", "-XYZI", "+iXYZI", "-iXYZI", "YYY", "-iY"] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn multiply_single_qubit() {
        let x = p("X");
        let z = p("Z");
        let xx = x.multiply(&x);
        assert!(xx.is_identity());
        let xz = x.multiply(&z);
        assert_eq!((xz.phase(), xz.x_bits(), xz.z_bits()), (0, 1, 1));
        assert_eq!(xz, p("-iY"));
        let zx = z.multiply(&x);
        assert_eq!((zx.phase(), zx.x_bits(), zx.z_bits()), (2, 1, 1));
        assert_eq!(zx, p("+iY"));
    }

    #[test]
    fn multiply_mismatch_is_error() {
        assert_eq!(
            p("XX").try_multiply(&p("X")),
            Err(PauliError::QubitMismatch { left: 2, right: 1 })
        );
        assert!(p("XX").try_commutes(&p("XXX")).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes(&p("Z")));
        assert!(p("XXXXXXIII").commutes(&p("ZZIIIIIII")));
        assert!(!p("XIIIIIIII").commutes(&p("ZZIIIIIII")));
    }

    #[test]
    fn weight_examples() {
        assert_eq!(p("IIIIIIIII").weight(), 0);
        assert_eq!(p("XXXXXXIII").weight(), 6);
        assert_eq!(p("-iIIYIIIIII").weight(), 1);
    }

    #[test]
    fn low_weight_enumeration_order_and_count() {
        let w1 = paulis_up_to_weight(9, 1);
        assert_eq!(w1.len(), 27);
        assert_eq!(w1[0].to_string(), "XIIIIIIII");
        assert_eq!(w1[1].to_string(), "YIIIIIIII");
        assert_eq!(w1[3].to_string(), "IXIIIIIII");
        let w2 = paulis_up_to_weight(9, 2);
        assert_eq!(w2.len(), 27 + 36 * 9);
        assert_eq!(w2[27].to_string(), "XXIIIIIII");
        assert_eq!(w2[28].to_string(), "XYIIIIIII");
        assert!(w2.windows(2).all(|w| w[0].weight() <= w[1].weight()));
    }

    #[test]
    fn symplectic_helpers_agree_with_ops() {
        let a = p("XYZIY");
        let b = p("ZZXYI");
        assert_eq!(symplectic_product(5, a.symplectic(), b.symplectic()) == 0, a.commutes(&b));
        assert_eq!(symplectic_weight(5, a.symplectic()), a.weight());
        assert_eq!(PauliOp::from_symplectic(5, a.symplectic()), a);
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOp> {
        (0u8..4, any::<u64>(), any::<u64>()).prop_map(move |(ph, x, z)| PauliOp::from_parts(n, ph, x, z))
    }

    fn arb_triple() -> impl Strategy<Value = (PauliOp, PauliOp, PauliOp)> {
        (1usize..=12).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n), arb_pauli(n)))
    }

    proptest! {
        #[test]
        fn multiply_is_associative_with_identity((a, b, c) in arb_triple()) {
            let n = a.num_qubits();
            prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
            let id = PauliOp::identity(n);
            prop_assert_eq!(a.multiply(&id), a);
            prop_assert_eq!(id.multiply(&a), a);
        }

        #[test]
        fn commutes_iff_products_equal((a, b, _c) in arb_triple()) {
            prop_assert_eq!(a.commutes(&b), a.multiply(&b) == b.multiply(&a));
        }

        #[test]
        fn weight_is_subadditive((a, b, _c) in arb_triple()) {
            prop_assert!(a.multiply(&b).weight() <= a.weight() + b.weight());
        }

        #[test]
        fn inverse_cancels((a, _b, _c) in arb_triple()) {
            let prod = a.multiply(&a.inverse());
            prop_assert!(prod.is_identity());
            prop_assert!(a.multiply(&a).is_scalar());
        }

        #[test]
        fn string_round_trip((a, _b, _c) in arb_triple()) {
            prop_assert_eq!(PauliOp::parse(&a.to_string()).unwrap(), a);
        }
    }
}
