//! Exhaustive searches over stabilizer subgroups and subsystem structures.
//!
//! `find_gauge_symmetries` looks for subgroups `S' ⊂ S` of an existing
//! stabilizer code that can be demoted to a gauge group without losing
//! distance. `sweep_nonexistence` enumerates every `[[n,k,r]]` subsystem
//! structure and reports those reaching a target distance.
//!
//! Once `S'` is fixed the gauge group of a restructured code is forced: it is
//! everything commuting with `S'` and with the original logical operators.
//! Candidates therefore differ only in `S'`, and a restructured code has
//! distance at least `d` iff no Pauli of weight below `d` commutes with `S'`
//! while anticommuting with a logical operator. With `σ(p)` the syndrome of
//! `p` against the original generators and `A` the annihilator of `S'` in
//! coefficient space, that is a lookup of `span(A)` in a small set.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::code::{singleton_check, CodeError, PauliPair, SubsystemCode};
use crate::distance::{self, DistanceMethod};
use crate::gf2::{BinMatrix, ReducedBasis};
use crate::pauli::{paulis_up_to_weight, symplectic_product, PauliOp};
use crate::tableau::{self, centralizer_vectors, hyperbolic_pairs};

/// Codes kept in a sweep report; the count covers all of them.
pub const MAX_KEPT: usize = 64;

/// A status record is logged every this many isotropic subspaces.
const PROGRESS_EVERY: u64 = 1 << 17;

/// Largest `n` for which permutation pruning is offered.
const MAX_PRUNING_QUBITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("input already has {r} gauge qubits")]
    HasGauge { r: usize },
    #[error("code has no logical qubits")]
    NoLogicalQubits,
    #[error("search inconclusive: level r = {r} needs {needed} more candidates after {examined}, budget {budget}")]
    BudgetExhausted { r: usize, examined: u64, needed: u128, budget: u64 },
    #[error("infeasible sweep: {0}")]
    Infeasible(String),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Number of `k`-dimensional subspaces of `GF(2)^n`.
pub fn gaussian_binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}

/// `|GL_s(GF(2))|`.
fn general_linear_order(s: usize) -> u128 {
    (0..s).map(|i| (1u128 << s) - (1u128 << i)).product()
}

/// Number of `s`-dimensional isotropic subspaces of the `2n`-dimensional
/// symplectic space: ordered isotropic bases divided by `|GL_s|`.
pub fn isotropic_subspace_count(n: usize, s: usize) -> u128 {
    if s > n {
        return 0;
    }
    let ordered: u128 = (0..s).map(|i| (1u128 << (2 * n - i)) - (1u128 << i)).product();
    ordered / general_linear_order(s)
}

/// `|Sp(2m, 2)|`.
fn symplectic_group_order(m: usize) -> u128 {
    (1..=m).fold(1u128 << (m * m), |acc, i| acc * ((1u128 << (2 * i)) - 1))
}

/// Number of non-degenerate `2r`-dimensional subspaces of a `2m`-dimensional
/// symplectic space, `|Sp(2m)| / (|Sp(2r)| · |Sp(2m − 2r)|)`.
pub fn sector_count(m: usize, r: usize) -> u128 {
    if r > m {
        return 0;
    }
    symplectic_group_order(m) / (symplectic_group_order(r) * symplectic_group_order(m - r))
}

/// Ascending `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Reduced echelon pattern: row `i` has its lowest set bit at `pivots[i]`,
/// zeros at every other pivot, and free entries above its pivot.
#[derive(Debug, Clone)]
struct EchelonShape {
    pivots: Vec<usize>,
    free: Vec<Vec<usize>>,
}

impl EchelonShape {
    fn new(ncols: usize, pivots: Vec<usize>) -> EchelonShape {
        let free = pivots
            .iter()
            .map(|&p| (p + 1..ncols).filter(|c| !pivots.contains(c)).collect())
            .collect();
        EchelonShape { pivots, free }
    }

    fn free_bits(&self) -> usize {
        self.free.iter().map(|f| f.len()).sum()
    }

    fn row(&self, i: usize, assignment: u64) -> u128 {
        self.free[i]
            .iter()
            .enumerate()
            .fold(1u128 << self.pivots[i], |acc, (b, &c)| acc | ((assignment >> b & 1) as u128) << c)
    }

    /// Rows for a joint assignment, row 0 taking the lowest bits.
    fn rows(&self, mut assignment: u64) -> Vec<u128> {
        let mut out = Vec::with_capacity(self.pivots.len());
        for i in 0..self.pivots.len() {
            out.push(self.row(i, assignment));
            assignment >>= self.free[i].len();
        }
        out
    }
}

fn shapes(ncols: usize, dim: usize) -> Vec<EchelonShape> {
    combinations(ncols, dim).into_iter().map(|p| EchelonShape::new(ncols, p)).collect()
}

/// Whether `span(rows)` meets `bad` anywhere except at zero.
fn span_hits(rows: &[u128], bad: &HashSet<u64>) -> bool {
    let mut cur = 0u128;
    for i in 1u64..1 << rows.len() {
        cur ^= rows[i.trailing_zeros() as usize];
        if bad.contains(&(cur as u64)) {
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeSymmetryResult {
    pub r_found: usize,
    pub restructured: Option<SubsystemCode>,
    /// Distance of the restructured code.
    pub distance: Option<u32>,
    /// Stabilizer subgroups examined across all levels.
    pub candidates: u64,
    /// Candidates at level `r_found` passing the distance filter.
    pub survivors: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u64,
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: distance::DEFAULT_BUDGET, workers: 0 }
    }
}

/// Demotes everything outside `span(S')` to gauge. `sprime` holds
/// coefficient vectors over the stabilizer generators of `code`, which must
/// be a valid code without gauge qubits. Gauge-Z operators are original
/// generators; gauge-X partners are the smallest solutions of their
/// commutation constraints.
pub fn restructure(code: &SubsystemCode, sprime: &[u128]) -> Result<SubsystemCode, CodeError> {
    let code = code.validated()?;
    let n = code.n;
    let s = code.s();
    let coeffs = |a: u128| (0..s).map(move |j| a >> j & 1 == 1);
    let stabilizer: Vec<PauliOp> =
        sprime.iter().map(|&a| tableau::ordered_product(n, &code.stabilizer, coeffs(a))).collect();
    let mut span = ReducedBasis::from_rows(s, sprime);
    let gz: Vec<PauliOp> =
        (0..s).filter(|&j| span.insert(1u128 << j)).map(|j| code.stabilizer[j]).collect();
    let fixed: Vec<u128> = stabilizer
        .iter()
        .chain(code.logical_generators().iter())
        .map(|p| p.symplectic())
        .collect();
    let mut gx: Vec<u128> = Vec::with_capacity(gz.len());
    for j in 0..gz.len() {
        let mut constraints: Vec<(u128, bool)> = fixed.iter().map(|&v| (v, false)).collect();
        constraints.extend(gz.iter().enumerate().map(|(i, g)| (g.symplectic(), i == j)));
        constraints.extend(gx.iter().map(|&v| (v, false)));
        match tableau::partner_solution(n, &constraints) {
            Some(v) => gx.push(v),
            None => return Err(CodeError::Invalid(Vec::new())),
        }
    }
    let gauge =
        gz.iter().zip(&gx).map(|(z, &x)| PauliPair::new(PauliOp::from_symplectic(n, x), *z)).collect();
    SubsystemCode::new(n, stabilizer, gauge, code.logical.clone()).validated()
}

/// Largest `r` such that some corank-`r` subgroup of the stabilizer leaves a
/// code of distance at least `d_min`, searching `r` downwards.
pub fn find_gauge_symmetries(
    code: &SubsystemCode,
    d_min: u32,
    opts: &SearchOptions,
) -> Result<GaugeSymmetryResult, SearchError> {
    let start = Instant::now();
    if code.r() > 0 {
        return Err(SearchError::HasGauge { r: code.r() });
    }
    let code = code.validated()?;
    if code.k() == 0 {
        return Err(SearchError::NoLogicalQubits);
    }
    let (n, s) = (code.n, code.s());
    let stab: Vec<u128> = code.stabilizer.iter().map(|g| g.symplectic()).collect();
    let logical: Vec<u128> = code.logical_generators().iter().map(|l| l.symplectic()).collect();
    let bad: HashSet<u64> = paulis_up_to_weight(n, d_min.saturating_sub(1) as usize)
        .iter()
        .map(|p| p.symplectic())
        .filter(|&v| logical.iter().any(|&l| symplectic_product(n, v, l) == 1))
        .map(|v| {
            stab.iter()
                .enumerate()
                .fold(0u64, |acc, (j, &g)| acc | (symplectic_product(n, v, g) as u64) << j)
        })
        .collect();
    let mut result = GaugeSymmetryResult {
        r_found: 0,
        restructured: None,
        distance: None,
        candidates: 0,
        survivors: 0,
        elapsed: Duration::ZERO,
    };
    if bad.contains(&0) {
        // A low-weight logical already commutes with all of S.
        log::info!("input distance is below {d_min}; no subgroup can help");
        result.elapsed = start.elapsed();
        return Ok(result);
    }
    for r in (1..=s).rev() {
        let level = shapes(s, r);
        let size: u128 = level.iter().map(|sh| 1u128 << sh.free_bits()).sum();
        if result.candidates as u128 + size > opts.budget as u128 {
            return Err(SearchError::BudgetExhausted {
                r,
                examined: result.candidates,
                needed: size,
                budget: opts.budget,
            });
        }
        let survivors: Vec<Vec<u64>> = crate::parallel::install(opts.workers, || {
            level
                .par_iter()
                .map(|sh| {
                    (0..1u64 << sh.free_bits())
                        .filter(|&a| !span_hits(&sh.rows(a), &bad))
                        .collect::<Vec<u64>>()
                })
                .collect()
        })
        .map_err(SearchError::Pool)?;
        result.candidates += size as u64;
        let count: u64 = survivors.iter().map(|v| v.len() as u64).sum();
        log::info!("r = {r}: {size} candidates, {count} pass the distance filter");
        for (sh, list) in level.iter().zip(&survivors) {
            for &a in list {
                let sprime = BinMatrix::new(s, sh.rows(a)).null_space();
                let Ok(candidate) = restructure(&code, &sprime) else { continue };
                let d = distance::distance(&candidate, DistanceMethod::Coset, distance::DEFAULT_BUDGET)
                    .map_err(|e| SearchError::Infeasible(e.to_string()))?;
                if d >= d_min {
                    result.r_found = r;
                    result.restructured = Some(candidate);
                    result.distance = Some(d);
                    result.survivors = count;
                    result.elapsed = start.elapsed();
                    return Ok(result);
                }
            }
        }
    }
    result.elapsed = start.elapsed();
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepSpec {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub d_min: u32,
    pub budget: u64,
    pub symmetry_pruning: bool,
}

impl SweepSpec {
    pub fn new(n: usize, k: usize, r: usize, d_min: u32) -> SweepSpec {
        SweepSpec { n, k, r, d_min, budget: distance::DEFAULT_BUDGET, symmetry_pruning: false }
    }

    pub fn s(&self) -> usize {
        self.n - self.r - self.k
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub spec: SweepSpec,
    pub exhausted: bool,
    /// Ruled out by the Singleton bound without enumeration.
    pub short_circuit: bool,
    pub isotropic_subspaces: u64,
    pub sectors_per_subspace: u64,
    /// Subspaces skipped as non-canonical under qubit permutations.
    pub pruned: u64,
    pub candidates: u64,
    pub found_count: u64,
    /// The first `MAX_KEPT` codes found, in enumeration order.
    pub found: Vec<SubsystemCode>,
    pub elapsed: Duration,
}

/// One gauge sector in coordinates of the quotient `N(S)/S`, where bit `i`
/// and bit `m + i` form the `i`-th hyperbolic pair.
#[derive(Debug, Clone)]
struct Sector {
    perp: Vec<u128>,
    gauge_pairs: Vec<(u128, u128)>,
    logical_pairs: Vec<(u128, u128)>,
}

/// Every non-degenerate `2r`-dimensional subspace of the `2m`-dimensional
/// symplectic space.
fn sectors(m: usize, r: usize) -> Vec<Sector> {
    let mut out = Vec::new();
    for sh in shapes(2 * m, 2 * r) {
        for a in 0..1u64 << sh.free_bits() {
            let w = sh.rows(a);
            let Ok(gauge_pairs) = hyperbolic_pairs(m, &w) else { continue };
            let perp = centralizer_vectors(m, &w);
            let logical_pairs = hyperbolic_pairs(m, &perp).expect("complement of a non-degenerate subspace");
            out.push(Sector { perp, gauge_pairs, logical_pairs });
        }
    }
    out
}

fn lift(coords: u128, basis: &[u128]) -> u128 {
    basis.iter().enumerate().filter(|(i, _)| coords >> i & 1 == 1).fold(0, |acc, (_, &b)| acc ^ b)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let q = rest.remove(i);
            cur.push(q);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, q);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

fn permute(n: usize, v: u128, perm: &[usize]) -> u128 {
    let mut out = 0u128;
    for (q, &to) in perm.iter().enumerate() {
        out |= (v >> q & 1) << to;
        out |= (v >> (n + q) & 1) << (n + to);
    }
    out
}

struct SweepContext {
    spec: SweepSpec,
    low: Vec<u128>,
    sectors: Vec<Sector>,
    perms: Vec<Vec<usize>>,
    progress: AtomicU64,
    start: Instant,
}

#[derive(Debug, Default)]
struct UnitResult {
    subspaces: u64,
    pruned: u64,
    candidates: u64,
    found_count: u64,
    found: Vec<SubsystemCode>,
}

impl SweepContext {
    fn is_canonical(&self, rows: &[u128]) -> bool {
        let n = self.spec.n;
        self.perms.iter().all(|perm| {
            let image: Vec<u128> = rows.iter().map(|&v| permute(n, v, perm)).collect();
            ReducedBasis::from_rows(2 * n, &image).sorted_rows().as_slice() >= rows
        })
    }

    fn leaf(&self, rows: &[u128], out: &mut UnitResult) {
        let n = self.spec.n;
        out.subspaces += 1;
        let seen = self.progress.fetch_add(1, Ordering::Relaxed) + 1;
        if seen.is_multiple_of(PROGRESS_EVERY) {
            log::info!("sweep: {seen} subspaces, {:.1?} elapsed", self.start.elapsed());
        }
        if self.spec.symmetry_pruning && !self.is_canonical(rows) {
            out.pruned += 1;
            return;
        }
        out.candidates += self.sectors.len() as u64;
        let low: Vec<u128> = self
            .low
            .iter()
            .copied()
            .filter(|&p| rows.iter().all(|&g| symplectic_product(n, p, g) == 0))
            .collect();
        let cent = centralizer_vectors(n, rows);
        let mut span = ReducedBasis::from_rows(2 * n, rows);
        let complement: Vec<u128> = cent.into_iter().filter(|&v| span.insert(v)).collect();
        let pairs = hyperbolic_pairs(n, &complement).expect("N(S)/S is non-degenerate");
        let basis: Vec<u128> = pairs.iter().map(|p| p.0).chain(pairs.iter().map(|p| p.1)).collect();
        for sector in &self.sectors {
            let logical: Vec<u128> = sector.perp.iter().map(|&c| lift(c, &basis)).collect();
            let blocked = low
                .iter()
                .any(|&p| logical.iter().any(|&l| symplectic_product(n, p, l) == 1));
            if blocked {
                continue;
            }
            let op = |c: u128| PauliOp::from_symplectic(n, lift(c, &basis));
            let code = SubsystemCode::new(
                n,
                rows.iter().map(|&v| PauliOp::from_symplectic(n, v)).collect(),
                sector.gauge_pairs.iter().map(|&(x, z)| PauliPair::new(op(x), op(z))).collect(),
                sector.logical_pairs.iter().map(|&(x, z)| PauliPair::new(op(x), op(z))).collect(),
            );
            let code = code.validated().expect("sweep candidates are valid by construction");
            let d = distance::distance(&code, DistanceMethod::Coset, distance::DEFAULT_BUDGET)
                .expect("k ≥ 1 and n ≤ 12 keep distance within budget");
            if d >= self.spec.d_min {
                out.found_count += 1;
                if out.found.len() < MAX_KEPT {
                    out.found.push(code);
                }
            }
        }
    }

    /// Depth-first over rows of `shape`, keeping partial bases isotropic.
    fn dfs(&self, shape: &EchelonShape, rows: &mut Vec<u128>, out: &mut UnitResult) {
        let i = rows.len();
        if i == shape.pivots.len() {
            self.leaf(rows, out);
            return;
        }
        let n = self.spec.n;
        for a in 0..1u64 << shape.free[i].len() {
            let v = shape.row(i, a);
            if rows.iter().all(|&u| symplectic_product(n, u, v) == 0) {
                rows.push(v);
                self.dfs(shape, rows, out);
                rows.pop();
            }
        }
    }
}

/// Enumerates every `[[n, k, r]]` subsystem structure (stabilizer subspace
/// and gauge sector) and reports those with distance at least `d_min`.
pub fn sweep_nonexistence(spec: &SweepSpec, workers: usize) -> Result<SweepReport, SearchError> {
    let start = Instant::now();
    let SweepSpec { n, k, r, d_min, .. } = *spec;
    if 2 * n > 24 {
        return Err(SearchError::Infeasible(format!("2n = {} exceeds 24", 2 * n)));
    }
    if k == 0 {
        return Err(SearchError::NoLogicalQubits);
    }
    if r + k >= n {
        return Err(SearchError::Infeasible("need at least one stabilizer generator".into()));
    }
    if spec.symmetry_pruning && n > MAX_PRUNING_QUBITS {
        return Err(SearchError::Infeasible(format!(
            "permutation pruning is limited to n ≤ {MAX_PRUNING_QUBITS}"
        )));
    }
    let s = spec.s();
    let m = r + k;
    let iso = isotropic_subspace_count(n, s);
    let per = sector_count(m, r);
    let mut report = SweepReport {
        spec: *spec,
        exhausted: true,
        short_circuit: false,
        isotropic_subspaces: 0,
        sectors_per_subspace: per as u64,
        pruned: 0,
        candidates: 0,
        found_count: 0,
        found: Vec::new(),
        elapsed: Duration::ZERO,
    };
    if !singleton_check(n, k, d_min) {
        report.short_circuit = true;
        report.elapsed = start.elapsed();
        return Ok(report);
    }
    if iso * per > spec.budget as u128 {
        log::warn!("sweep needs {} candidates, budget {}", iso * per, spec.budget);
        report.exhausted = false;
        report.elapsed = start.elapsed();
        return Ok(report);
    }
    let sectors = sectors(m, r);
    debug_assert_eq!(sectors.len() as u128, per);
    let ctx = SweepContext {
        spec: *spec,
        low: paulis_up_to_weight(n, d_min.saturating_sub(1) as usize)
            .iter()
            .map(|p| p.symplectic())
            .collect(),
        sectors,
        perms: if spec.symmetry_pruning { permutations(n) } else { Vec::new() },
        progress: AtomicU64::new(0),
        start,
    };
    // Work units: an echelon shape plus the value of its first row.
    let shapes = shapes(2 * n, s);
    let units: Vec<(usize, u64)> = shapes
        .iter()
        .enumerate()
        .flat_map(|(i, sh)| (0..1u64 << sh.free[0].len()).map(move |a| (i, a)))
        .collect();
    let parts: Vec<UnitResult> = crate::parallel::install(workers, || {
        units
            .par_iter()
            .map(|&(i, a)| {
                let mut out = UnitResult::default();
                let mut rows = vec![shapes[i].row(0, a)];
                ctx.dfs(&shapes[i], &mut rows, &mut out);
                out
            })
            .collect()
    })
    .map_err(SearchError::Pool)?;
    for part in parts {
        report.isotropic_subspaces += part.subspaces;
        report.pruned += part.pruned;
        report.candidates += part.candidates;
        report.found_count += part.found_count;
        let room = MAX_KEPT - report.found.len();
        report.found.extend(part.found.into_iter().take(room));
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::distance::{Classifier, OperatorClass};

    fn opts() -> SearchOptions {
        SearchOptions { budget: distance::DEFAULT_BUDGET, workers: 1 }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(gaussian_binomial(8, 4), 200_787);
        assert_eq!(gaussian_binomial(4, 2), 35);
        assert_eq!(isotropic_subspace_count(5, 3), 782_595);
        assert_eq!(isotropic_subspace_count(1, 1), 3);
        assert_eq!(sector_count(2, 1), 20);
        assert_eq!(sector_count(1, 1), 1);
        assert_eq!(sector_count(3, 0), 1);
    }

    #[test]
    fn echelon_shapes_enumerate_each_subspace_once() {
        let mut seen = HashSet::new();
        for sh in shapes(5, 2) {
            for a in 0..1u64 << sh.free_bits() {
                let rows = sh.rows(a);
                assert_eq!(ReducedBasis::from_rows(5, &rows).sorted_rows(), rows);
                assert!(seen.insert(rows));
            }
        }
        assert_eq!(seen.len() as u128, gaussian_binomial(5, 2));
    }

    #[test]
    fn sector_enumeration_matches_formula() {
        for (m, r) in [(1, 0), (1, 1), (2, 1), (3, 1), (3, 2)] {
            assert_eq!(sectors(m, r).len() as u128, sector_count(m, r), "m={m} r={r}");
        }
    }

    /// Brute force: distinct groups `S + span(a, b)` with `⟨a, b⟩ = 1` inside
    /// the centralizer of a fixed isotropic subspace.
    #[test]
    fn sectors_of_one_subspace_by_brute_force() {
        let n = 5;
        let stab: Vec<u128> = ["ZZIII", "IZZII", "IIIXX"]
            .iter()
            .map(|s| s.parse::<PauliOp>().unwrap().symplectic())
            .collect();
        let cent = centralizer_vectors(n, &stab);
        let elements: Vec<u128> = (0..1u64 << cent.len()).map(|i| lift(i as u128, &cent)).collect();
        let mut groups = HashSet::new();
        for &a in &elements {
            for &b in &elements {
                if symplectic_product(n, a, b) == 1 {
                    let mut rows = stab.clone();
                    rows.extend([a, b]);
                    groups.insert(ReducedBasis::from_rows(2 * n, &rows).sorted_rows());
                }
            }
        }
        assert_eq!(groups.len() as u128, sector_count(2, 1));
    }

    #[test]
    fn shor_has_four_gauge_qubits() {
        let shor = catalog::shor9();
        let res = find_gauge_symmetries(&shor, 3, &opts()).unwrap();
        assert_eq!(res.r_found, 4);
        let code = res.restructured.unwrap();
        assert!(code.validate().is_valid());
        let p = code.parameters().unwrap();
        assert_eq!((p.n, p.k, p.r), (9, 1, 4));
        assert!(res.distance.unwrap() >= 3);
        // Stabilizer is a subgroup of the original one.
        let original = shor.stabilizer_matrix();
        for g in &code.stabilizer {
            assert!(original.contains(g.symplectic()));
        }
        // Original logical operators keep their classes.
        let cls = Classifier::new(&code).unwrap();
        let orig = Classifier::new(&shor).unwrap();
        for l in shor.logical_generators() {
            assert_eq!(cls.classify(&l), orig.classify(&l));
            assert!(matches!(cls.classify(&l), OperatorClass::Logical(_)));
        }
        assert_eq!(res.candidates as u128, (4..=8).map(|r| gaussian_binomial(8, r)).sum::<u128>());
    }

    #[test]
    fn table_two_subgroup_is_accepted() {
        let shor = catalog::shor9();
        // S1, S2, S3·S5·S7, S4·S6·S8.
        let sprime = [0b1, 0b10, 0b1010100, 0b10101000];
        let code = restructure(&shor, &sprime).unwrap();
        assert!(code.same_stabilizer_group(&catalog::bacon_shor9()));
        assert_eq!(code.r(), 4);
        assert_eq!(distance::distance(&code, DistanceMethod::Coset, distance::DEFAULT_BUDGET).unwrap(), 3);
        for pair in &code.gauge {
            assert!(shor.stabilizer.contains(&pair.z));
        }
    }

    #[test]
    fn perfect_and_steane_codes_have_no_gauge_symmetry() {
        for c in [catalog::five_qubit(), catalog::steane7()] {
            let res = find_gauge_symmetries(&c, 3, &opts()).unwrap();
            assert_eq!(res.r_found, 0);
            assert!(res.restructured.is_none());
            let s = c.s();
            assert_eq!(res.candidates as u128, (1..=s).map(|r| gaussian_binomial(s, r)).sum::<u128>());
        }
    }

    #[test]
    fn find_gauge_rejects_subsystem_input_and_small_budget() {
        assert_eq!(
            find_gauge_symmetries(&catalog::bacon_shor9(), 3, &opts()),
            Err(SearchError::HasGauge { r: 4 })
        );
        let tight = SearchOptions { budget: 300, workers: 1 };
        assert!(matches!(
            find_gauge_symmetries(&catalog::shor9(), 3, &tight),
            Err(SearchError::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn lower_distance_target_allows_more_gauge() {
        let res = find_gauge_symmetries(&catalog::shor9(), 2, &opts()).unwrap();
        assert!(res.r_found >= 4);
        assert!(res.distance.unwrap() >= 2);
    }

    #[test]
    fn singleton_violations_short_circuit() {
        let rep = sweep_nonexistence(&SweepSpec::new(3, 1, 0, 3), 1).unwrap();
        assert!(rep.short_circuit && rep.exhausted);
        assert_eq!((rep.candidates, rep.found_count), (0, 0));
    }

    #[test]
    fn sweep_argument_checks() {
        assert!(matches!(sweep_nonexistence(&SweepSpec::new(13, 1, 0, 3), 1), Err(SearchError::Infeasible(_))));
        assert!(matches!(sweep_nonexistence(&SweepSpec::new(4, 1, 3, 1), 1), Err(SearchError::Infeasible(_))));
        assert_eq!(sweep_nonexistence(&SweepSpec::new(4, 0, 1, 1), 1), Err(SearchError::NoLogicalQubits));
        let mut tight = SweepSpec::new(4, 1, 1, 2);
        tight.budget = 1000;
        let rep = sweep_nonexistence(&tight, 1).unwrap();
        assert!(!rep.exhausted);
    }

    #[test]
    fn small_sweep_counts_and_codes() {
        let rep = sweep_nonexistence(&SweepSpec::new(4, 1, 1, 2), 1).unwrap();
        assert!(rep.exhausted);
        assert_eq!(rep.isotropic_subspaces as u128, isotropic_subspace_count(4, 2));
        assert_eq!(rep.sectors_per_subspace, 20);
        assert_eq!(rep.candidates, rep.isotropic_subspaces * 20);
        assert!(rep.found_count > 0);
        for c in &rep.found {
            let p = c.parameters().unwrap();
            assert_eq!((p.n, p.k, p.r), (4, 1, 1));
            assert!(distance::distance(c, DistanceMethod::Exhaustive, distance::DEFAULT_BUDGET).unwrap() >= 2);
        }
    }

    #[test]
    fn pruning_keeps_verdicts() {
        for (n, k, r, d) in [(4, 1, 1, 2), (4, 1, 0, 2), (4, 1, 1, 3), (3, 1, 0, 1)] {
            let plain = sweep_nonexistence(&SweepSpec::new(n, k, r, d), 1).unwrap();
            let mut spec = SweepSpec::new(n, k, r, d);
            spec.symmetry_pruning = true;
            let pruned = sweep_nonexistence(&spec, 1).unwrap();
            assert_eq!(plain.found_count > 0, pruned.found_count > 0, "{n} {k} {r} {d}");
            assert!(pruned.candidates <= plain.candidates);
        }
    }

    #[test]
    fn worker_count_does_not_change_sweep() {
        let a = sweep_nonexistence(&SweepSpec::new(4, 1, 1, 2), 1).unwrap();
        let b = sweep_nonexistence(&SweepSpec::new(4, 1, 1, 2), 3).unwrap();
        assert_eq!((a.found_count, a.candidates, &a.found), (b.found_count, b.candidates, &b.found));
    }
}
