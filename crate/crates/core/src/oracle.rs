//! Dense-matrix ground truth for small codes.
//!
//! Operators act on `C^(2^n)` with qubit 0 as the leftmost Kronecker factor.
//! Pauli matrices are applied as signed permutations; the code projector is
//! built from the stabilizer generators and an orthonormal basis `V` of its
//! range is used to evaluate norms of products of the form `P·A·P`.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::code::SubsystemCode;
use crate::pauli::PauliOp;

pub const MAX_ORACLE_QUBITS: usize = 10;

/// Bound on operator-norm residuals.
pub const TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n} qubits is beyond the dense oracle limit of {MAX_ORACLE_QUBITS}")]
    TooManyQubits { n: usize },
    #[error("operator acts on {found} qubits, code has {expected}")]
    QubitMismatch { expected: usize, found: usize },
}

fn check_size(n: usize) -> Result<(), OracleError> {
    if n > MAX_ORACLE_QUBITS {
        return Err(OracleError::TooManyQubits { n });
    }
    Ok(())
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

fn i_pow(e: u8) -> Complex64 {
    match e % 4 {
        0 => ONE,
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(dim: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> DenseMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        DenseMatrix { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut m = DenseMatrix::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m.data[(i * other.rows + k) * c + j * other.cols + l] = a * other.get(k, l);
                    }
                }
            }
        }
        m
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matmul: shape mismatch");
        let mut m = DenseMatrix::zeros(self.rows, other.cols);
        let oc = other.cols;
        m.data.par_chunks_mut(oc.max(1)).enumerate().for_each(|(i, out)| {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * oc..(k + 1) * oc];
                for (o, &b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        });
        m
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        m
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &DenseMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        DenseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: Complex64) -> DenseMatrix {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * s).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_unitary(&self) -> bool {
        self.rows == self.cols
            && self.adjoint().matmul(self).sub(&DenseMatrix::identity(self.rows)).norm() < TOLERANCE
    }

    /// Column `c` as a vector.
    fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
}

fn single_qubit(letter: char) -> DenseMatrix {
    let i = Complex64::new(0.0, 1.0);
    let rows = match letter {
        'I' => [[ONE, ZERO], [ZERO, ONE]],
        'X' => [[ZERO, ONE], [ONE, ZERO]],
        'Y' => [[ZERO, -i], [i, ZERO]],
        _ => [[ONE, ZERO], [ZERO, -ONE]],
    };
    DenseMatrix::from_rows(&rows.map(|r| r.to_vec()))
}

/// Kronecker product of the single-qubit factors times the scalar `i^e`.
pub fn dense(p: &PauliOp) -> Result<DenseMatrix, OracleError> {
    check_size(p.num_qubits())?;
    let mut m = DenseMatrix::identity(1);
    for q in 0..p.num_qubits() {
        m = m.kron(&single_qubit(p.letter(q).as_char()));
    }
    // Letters carry i^{popcount(x&z)} through Y; the rest is the sign.
    Ok(m.scale(i_pow(p.sign_exponent())))
}

/// Index bitmask of a qubit bitmask under the Kronecker ordering.
fn index_mask(n: usize, qubits: u64) -> usize {
    (0..n).filter(|q| qubits >> q & 1 == 1).fold(0, |acc, q| acc | 1 << (n - 1 - q))
}

/// `p` as a signed permutation: column `b` has its single entry in row
/// `b ^ flip` with value `i^phase · (−1)^{|b & sign|}`.
#[derive(Debug, Clone, Copy)]
struct Monomial {
    flip: usize,
    sign: usize,
    scalar: Complex64,
}

impl Monomial {
    fn new(p: &PauliOp) -> Monomial {
        let n = p.num_qubits();
        Monomial {
            flip: index_mask(n, p.x_bits()),
            sign: index_mask(n, p.z_bits()),
            scalar: i_pow(p.phase()),
        }
    }

    /// `p · M` for a matrix with `2^n` rows.
    fn apply(&self, m: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(m.rows, m.cols);
        for b in 0..m.rows {
            let mut s = self.scalar;
            if (b & self.sign).count_ones() & 1 == 1 {
                s = -s;
            }
            let dst = (b ^ self.flip) * m.cols;
            for c in 0..m.cols {
                out.data[dst + c] = s * m.data[b * m.cols + c];
            }
        }
        out
    }
}

/// The code projector `P = ∏ (I + S_j)/2` and an orthonormal basis of its range.
#[derive(Debug, Clone)]
pub struct CodeProjector {
    n: usize,
    p: DenseMatrix,
    basis: DenseMatrix,
}

pub fn code_projector(code: &SubsystemCode) -> Result<CodeProjector, OracleError> {
    check_size(code.n)?;
    let dim = 1usize << code.n;
    let mut p = DenseMatrix::identity(dim);
    for g in &code.stabilizer {
        if g.num_qubits() != code.n {
            return Err(OracleError::QubitMismatch { expected: code.n, found: g.num_qubits() });
        }
        p = p.add(&Monomial::new(g).apply(&p)).scale(Complex64::new(0.5, 0.0));
    }
    let rank = p.trace().re.round() as usize;
    // Gram-Schmidt over the columns of P.
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(rank);
    for c in 0..dim {
        if cols.len() == rank {
            break;
        }
        let mut v = p.column(c);
        for u in &cols {
            let overlap: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= overlap * ui;
            }
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.iter().map(|a| a / norm).collect());
        }
    }
    let mut basis = DenseMatrix::zeros(dim, cols.len());
    for (c, col) in cols.iter().enumerate() {
        for (r, &a) in col.iter().enumerate() {
            basis.data[r * cols.len() + c] = a;
        }
    }
    Ok(CodeProjector { n: code.n, p, basis })
}

impl CodeProjector {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.p
    }

    /// Dimension of the code space.
    pub fn rank(&self) -> usize {
        self.basis.cols
    }

    fn check(&self, a: &PauliOp) -> Result<(), OracleError> {
        if a.num_qubits() != self.n {
            return Err(OracleError::QubitMismatch { expected: self.n, found: a.num_qubits() });
        }
        Ok(())
    }

    /// `V† A V`, the restriction of `P A P` to the code space.
    pub fn compress(&self, a: &PauliOp) -> Result<DenseMatrix, OracleError> {
        self.check(a)?;
        Ok(self.basis.adjoint().matmul(&Monomial::new(a).apply(&self.basis)))
    }

    /// `‖P A P‖`.
    pub fn sandwich_norm(&self, a: &PauliOp) -> Result<f64, OracleError> {
        Ok(self.compress(a)?.norm())
    }

    /// `‖[P A P, B P]‖`, evaluated as `‖V A_c B_c − B V A_c‖` where
    /// `X_c = V† X V`.
    pub fn commutator_residual(&self, a: &PauliOp, b: &PauliOp) -> Result<f64, OracleError> {
        let ac = self.compress(a)?;
        let bv = Monomial::new(b).apply(&self.basis);
        let bc = self.basis.adjoint().matmul(&bv);
        let left = self.basis.matmul(&ac.matmul(&bc));
        let right = bv.matmul(&ac);
        Ok(left.sub(&right).norm())
    }

    /// Identities every projector must satisfy: `P² = P`, `P† = P`,
    /// `tr P = 2^(n−s)` and `S_j P = P`. Returns the largest residual.
    pub fn self_check(&self, code: &SubsystemCode) -> f64 {
        let p = &self.p;
        let mut worst = p.matmul(p).sub(p).norm();
        worst = worst.max(p.adjoint().sub(p).norm());
        let expected = (1u64 << (code.n - code.s())) as f64;
        worst = worst.max((p.trace() - Complex64::new(expected, 0.0)).norm());
        for g in &code.stabilizer {
            worst = worst.max(Monomial::new(g).apply(p).sub(p).norm());
        }
        worst
    }
}

/// Residual check results; `failures` lists what exceeded the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    pub checks: usize,
    pub max_residual: f64,
    pub failures: Vec<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Gauge operators act only on the gauge subsystem and logical operators
/// only on the logical one, each commuting with the other on the code space;
/// each logical pair anticommutes there.
pub fn verify_subsystem_structure(code: &SubsystemCode) -> Result<StructureReport, OracleError> {
    let proj = code_projector(code)?;
    let mut report = StructureReport { checks: 0, max_residual: 0.0, failures: Vec::new() };
    let mut record = |label: String, residual: f64, ok: bool| {
        report.checks += 1;
        report.max_residual = report.max_residual.max(residual);
        if !ok {
            report.failures.push(format!("{label}: residual {residual:.3e}"));
        }
    };
    let gauge: Vec<(String, PauliOp)> = code
        .gauge
        .iter()
        .enumerate()
        .flat_map(|(i, p)| [(format!("gauge_x[{i}]"), p.x), (format!("gauge_z[{i}]"), p.z)])
        .collect();
    let logical: Vec<(String, PauliOp)> = code
        .logical
        .iter()
        .enumerate()
        .flat_map(|(i, p)| [(format!("logical_x[{i}]"), p.x), (format!("logical_z[{i}]"), p.z)])
        .collect();
    for (gl, g) in &gauge {
        for (ll, l) in &logical {
            let r = proj.commutator_residual(g, l)?;
            record(format!("[P {gl} P, {ll} P]"), r, r < TOLERANCE);
            let r = proj.commutator_residual(l, g)?;
            record(format!("[P {ll} P, {gl} P]"), r, r < TOLERANCE);
        }
    }
    for (j, pair) in code.logical.iter().enumerate() {
        let xz = proj.compress(&pair.x.multiply(&pair.z))?;
        let zx = proj.compress(&pair.z.multiply(&pair.x))?;
        let r = xz.add(&zx).norm();
        let nonzero = xz.norm() > TOLERANCE;
        record(format!("logical pair {j} anticommutes on the code space"), r, r < TOLERANCE && nonzero);
    }
    Ok(report)
}

/// First failing pair, if any, of `P E_a† E_b P` lying in the commutant of
/// the logical operators.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectabilityReport {
    pub pairs: usize,
    pub max_residual: f64,
    pub failure: Option<(usize, usize)>,
}

impl CorrectabilityReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn verify_correctability(
    code: &SubsystemCode,
    errors: &[PauliOp],
) -> Result<CorrectabilityReport, OracleError> {
    let proj = code_projector(code)?;
    let logical = code.logical_generators();
    // Logical operators normalize the stabilizer, so L·V = V·L_c; once that
    // holds numerically the commutator can be taken on the code space.
    let lc: Vec<Option<DenseMatrix>> = logical
        .iter()
        .map(|l| {
            let lv = Monomial::new(l).apply(&proj.basis);
            let c = proj.basis.adjoint().matmul(&lv);
            (lv.sub(&proj.basis.matmul(&c)).norm() < TOLERANCE).then_some(c)
        })
        .collect();
    let mut report = CorrectabilityReport { pairs: 0, max_residual: 0.0, failure: None };
    for a in 0..errors.len() {
        for b in a..errors.len() {
            proj.check(&errors[a])?;
            let e = errors[a].adjoint().multiply(&errors[b]);
            let ec = proj.compress(&e)?;
            let mut worst: f64 = 0.0;
            for (l, c) in logical.iter().zip(&lc) {
                let r = match c {
                    Some(c) => ec.matmul(c).sub(&c.matmul(&ec)).norm(),
                    None => proj.commutator_residual(&e, l)?,
                };
                worst = worst.max(r);
            }
            report.pairs += 1;
            report.max_residual = report.max_residual.max(worst);
            if worst >= TOLERANCE && report.failure.is_none() {
                report.failure = Some((a, b));
            }
        }
    }
    Ok(report)
}

/// How `P p P` sits relative to the logical algebra on the code space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenseVerdict {
    /// `P p P = 0`.
    Vanishes,
    /// Nonzero and commuting with every `L P`.
    Commutant,
    /// Fails to commute with some `L P`.
    NonCommuting,
}

pub fn dense_verdict(
    proj: &CodeProjector,
    code: &SubsystemCode,
    p: &PauliOp,
) -> Result<DenseVerdict, OracleError> {
    if proj.sandwich_norm(p)? < TOLERANCE {
        return Ok(DenseVerdict::Vanishes);
    }
    for l in code.logical_generators() {
        if proj.commutator_residual(p, &l)? >= TOLERANCE {
            return Ok(DenseVerdict::NonCommuting);
        }
    }
    Ok(DenseVerdict::Commutant)
}
