//! Depolarizing-noise sampling and logical error rate estimation.
//!
//! Every shot draws from its own ChaCha stream keyed by `(seed, shot)`, so a
//! run gives the same counts whatever the number of workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::decoder::{Decoder, DecoderError, DecodingTable, Outcome};
use crate::code::SubsystemCode;
use crate::pauli::PauliOp;

/// Shots per work unit; fixed so that reductions happen in the same order.
const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("depolarizing probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Decoder(#[from] DecoderError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    p: f64,
}

impl NoiseModel {
    pub fn new(p: f64) -> Result<NoiseModel, SimError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(SimError::BadProbability(p));
        }
        Ok(NoiseModel { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// One uniform draw per qubit: below `p/3` gives X, below `2p/3` Y, below `p` Z.
pub fn sample_error<R: Rng + ?Sized>(model: NoiseModel, n: usize, rng: &mut R) -> PauliOp {
    let third = model.p / 3.0;
    let (mut x, mut z) = (0u64, 0u64);
    for q in 0..n {
        let u: f64 = rng.random();
        if u < model.p {
            let (bx, bz) = if u < third {
                (1, 0)
            } else if u < 2.0 * third {
                (1, 1)
            } else {
                (0, 1)
            };
            x |= bx << q;
            z |= bz << q;
        }
    }
    PauliOp::hermitian(n, x, z)
}

/// The random stream for one shot.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub seed: u64,
    pub p: f64,
    pub shots: u64,
    pub gauge_success: u64,
    /// Failures indexed by logical class `x | z << k`; entry 0 is unused.
    pub logical_failure: Vec<u64>,
    pub unrecoverable: u64,
    /// Failures (logical or unrecoverable) split by sampled error weight.
    pub failures_by_weight: Vec<u64>,
}

impl SimReport {
    fn empty(k: usize, n: usize, seed: u64, p: f64) -> SimReport {
        SimReport {
            seed,
            p,
            shots: 0,
            gauge_success: 0,
            logical_failure: vec![0; 1 << (2 * k)],
            unrecoverable: 0,
            failures_by_weight: vec![0; n + 1],
        }
    }

    fn absorb(&mut self, other: &SimReport) {
        self.shots += other.shots;
        self.gauge_success += other.gauge_success;
        self.unrecoverable += other.unrecoverable;
        for (a, b) in self.logical_failure.iter_mut().zip(&other.logical_failure) {
            *a += b;
        }
        for (a, b) in self.failures_by_weight.iter_mut().zip(&other.failures_by_weight) {
            *a += b;
        }
    }

    pub fn logical_failures(&self) -> u64 {
        self.logical_failure.iter().sum()
    }

    pub fn failures(&self) -> u64 {
        self.logical_failures() + self.unrecoverable
    }

    pub fn failure_rate(&self) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.failures() as f64 / self.shots as f64
        }
    }
}

fn run_range(dec: &Decoder, model: NoiseModel, seed: u64, shots: std::ops::Range<u64>) -> SimReport {
    let n = dec.table().num_qubits();
    let k = dec.classifier().num_logical();
    let mut rep = SimReport::empty(k, n, seed, model.p);
    for shot in shots {
        let e = sample_error(model, n, &mut shot_rng(seed, shot));
        rep.shots += 1;
        let failed = match dec.decode(&e).expect("sampled error has the code's size") {
            Outcome::GaugeSuccess { .. } => {
                rep.gauge_success += 1;
                false
            }
            Outcome::LogicalFailure { class, .. } => {
                rep.logical_failure[(class.x | class.z << k) as usize] += 1;
                true
            }
            Outcome::Unrecoverable => {
                rep.unrecoverable += 1;
                true
            }
        };
        if failed {
            rep.failures_by_weight[e.weight() as usize] += 1;
        }
    }
    rep
}

/// Samples, decodes and classifies `shots` errors on `workers` threads.
pub fn run(
    code: &SubsystemCode,
    table: &DecodingTable,
    model: NoiseModel,
    shots: u64,
    seed: u64,
    workers: usize,
) -> Result<SimReport, SimError> {
    let dec = Decoder::new(code, table.clone())?;
    let chunks: Vec<std::ops::Range<u64>> = (0..shots.div_ceil(CHUNK))
        .map(|c| c * CHUNK..((c + 1) * CHUNK).min(shots))
        .collect();
    let parts: Vec<SimReport> = crate::parallel::install(workers, || {
        chunks.into_par_iter().map(|r| run_range(&dec, model, seed, r)).collect()
    })
    .map_err(SimError::Pool)?;
    let mut total = SimReport::empty(code.k(), code.n, seed, model.p);
    for part in &parts {
        total.absorb(part);
    }
    Ok(total)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::decoder::build_table;
    use crate::pauli::paulis_up_to_weight;

    #[test]
    fn probability_range() {
        assert!(NoiseModel::new(-0.1).is_err());
        assert!(NoiseModel::new(1.5).is_err());
        assert!(NoiseModel::new(f64::NAN).is_err());
        assert!(NoiseModel::new(1.0).is_ok());
    }

    #[test]
    fn extreme_probabilities() {
        let zero = NoiseModel::new(0.0).unwrap();
        let one = NoiseModel::new(1.0).unwrap();
        for shot in 0..1000 {
            assert!(sample_error(zero, 9, &mut shot_rng(3, shot)).is_identity());
            assert_eq!(sample_error(one, 1, &mut shot_rng(3, shot)).weight(), 1);
        }
    }

    #[test]
    fn mean_weight_within_binomial_band() {
        let model = NoiseModel::new(0.5).unwrap();
        let draws = 100_000u64;
        let total: u64 = (0..draws)
            .map(|i| sample_error(model, 9, &mut shot_rng(11, i)).weight() as u64)
            .sum();
        let mean = total as f64 / draws as f64;
        let sigma = (9.0 * 0.25 / draws as f64).sqrt();
        assert!((mean - 4.5).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn letters_are_equally_likely() {
        let model = NoiseModel::new(0.9).unwrap();
        let mut counts = [0u64; 3];
        for i in 0..30_000u64 {
            let e = sample_error(model, 1, &mut shot_rng(5, i));
            match (e.x_bits(), e.z_bits()) {
                (1, 0) => counts[0] += 1,
                (1, 1) => counts[1] += 1,
                (0, 1) => counts[2] += 1,
                _ => {}
            }
        }
        // Each letter has probability 0.3; binomial sigma ≈ 79.
        for c in counts {
            assert!((c as f64 - 9000.0).abs() < 400.0, "{counts:?}");
        }
    }

    #[test]
    fn zero_shots() {
        let c = catalog::shor9();
        let t = build_table(&c, 1).unwrap();
        let rep = run(&c, &t, NoiseModel::new(0.1).unwrap(), 0, 1, 1).unwrap();
        assert_eq!(rep.shots, 0);
        assert_eq!(rep.failures(), 0);
        assert_eq!(rep.failure_rate(), 0.0);
    }

    #[test]
    fn counts_sum_to_shots_and_low_weight_never_fails() {
        for c in [catalog::shor9(), catalog::bacon_shor9()] {
            let t = build_table(&c, 1).unwrap();
            let rep = run(&c, &t, NoiseModel::new(0.05).unwrap(), 50_000, 9, 1).unwrap();
            assert_eq!(rep.gauge_success + rep.failures(), rep.shots);
            assert_eq!(rep.failures_by_weight[0] + rep.failures_by_weight[1], 0);
            assert!(rep.failures() > 0);
        }
    }

    #[test]
    fn forced_single_qubit_injections_succeed() {
        for c in [catalog::shor9(), catalog::bacon_shor9()] {
            let dec = Decoder::new(&c, build_table(&c, 1).unwrap()).unwrap();
            for e in paulis_up_to_weight(9, 1) {
                assert!(matches!(dec.decode(&e).unwrap(), Outcome::GaugeSuccess { .. }));
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_report() {
        let c = catalog::bacon_shor9();
        let t = build_table(&c, 1).unwrap();
        let m = NoiseModel::new(0.03).unwrap();
        let one = run(&c, &t, m, 40_000, 77, 1).unwrap();
        let four = run(&c, &t, m, 40_000, 77, 4).unwrap();
        assert_eq!(one, four);
        assert_ne!(one, run(&c, &t, m, 40_000, 78, 1).unwrap());
    }

    #[test]
    fn failure_rate_grows_with_p() {
        let c = catalog::shor9();
        let t = build_table(&c, 1).unwrap();
        let shots = 100_000;
        let rates: Vec<(f64, f64)> = [0.001, 0.01, 0.05]
            .iter()
            .map(|&p| {
                let r = run(&c, &t, NoiseModel::new(p).unwrap(), shots, 21, 1).unwrap();
                let q = r.failure_rate();
                (q, (q * (1.0 - q) / shots as f64).sqrt())
            })
            .collect();
        for w in rates.windows(2) {
            assert!(w[1].0 + 3.0 * w[1].1 > w[0].0 - 3.0 * w[0].1);
            assert!(w[1].0 > w[0].0);
        }
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [0.005, 0.01, 0.02].iter().map(|&p| (p, 7.0 * p * p)).collect();
        assert!((loglog_slope(&pts) - 2.0).abs() < 1e-12);
    }
}
