//! Independent ground truth: the law of total probability summed directly,
//! and a seeded simulation of the two-dice experiment.
//!
//! Simulation uses ChaCha8 with one stream per fixed-size chunk of trials:
//! chunk `c` draws from `ChaCha8Rng::seed_from_u64(seed)` with
//! `set_stream(c)`. Reports therefore depend only on `(n, p, trials, seed)`,
//! never on how chunks are spread over worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::digit_core::{pth_digit, Position};
use crate::error::{Error, Result};
use crate::exact_law::{ModelParams, ProbabilityValue, Provenance};
use crate::sum::CompensatedSum;

/// Default cap on `n` for [`prob_oracle`].
pub const DEFAULT_ORACLE_CAP: u64 = 1_000_000;

/// Trials per independent random stream.
pub const CHUNK_TRIALS: u64 = 1 << 16;

/// `(1/N) Σ_{m} c_d(m) / (m + 1 - 10^(p-1))`, with the count `c_d(m)` kept by
/// testing each `m` in turn. O(n).
pub fn prob_oracle_with_cap(params: &ModelParams, cap: u64) -> Result<ProbabilityValue> {
    if params.n() > cap {
        return Err(Error::CapExceeded {
            what: "brute-force oracle",
            n: params.n(),
            cap,
            hint: "",
        });
    }
    let floor = params.p().floor();
    let mut count = 0u64;
    let mut acc = CompensatedSum::new();
    for m in floor..=params.n() {
        if pth_digit(m, params.p()) == Some(params.d()) {
            count += 1;
        }
        acc.add(count as f64 / (m + 1 - floor) as f64);
    }
    Ok(ProbabilityValue::from_sum(
        &acc,
        params.faces(),
        Provenance::Oracle,
    ))
}

pub fn prob_oracle(params: &ModelParams) -> Result<ProbabilityValue> {
    prob_oracle_with_cap(params, DEFAULT_ORACLE_CAP)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationConfig {
    n: u64,
    p: Position,
    trials: u64,
    seed: u64,
}

impl SimulationConfig {
    pub fn new(n: u64, p: Position, trials: u64, seed: u64) -> Result<Self> {
        if n < p.floor() {
            return Err(Error::BoundTooSmall { n, min: p.floor() });
        }
        if trials == 0 {
            return Err(Error::NoTrials);
        }
        Ok(Self { n, p, trials, seed })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> Position {
        self.p
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn chunks(&self) -> u64 {
        self.trials.div_ceil(CHUNK_TRIALS)
    }

    fn chunk_len(&self, chunk: u64) -> u64 {
        (self.trials - chunk * CHUNK_TRIALS).min(CHUNK_TRIALS)
    }

    fn chunk_rng(&self, chunk: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(chunk);
        rng
    }
}

/// One round of the experiment: the first die's face `i`, then the second
/// die's face in `[10^(p-1), i + 10^(p-1) - 1]`.
pub fn roll_pair<R: Rng + ?Sized>(rng: &mut R, n: u64, p: Position) -> (u64, u64) {
    let floor = p.floor();
    let first = rng.random_range(1..=n + 1 - floor);
    let second = rng.random_range(floor..=first + floor - 1);
    (first, second)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub trials: u64,
    pub counts: [u64; 10],
    pub frequencies: [f64; 10],
    pub std_errors: [f64; 10],
}

impl SimulationReport {
    fn from_counts(counts: [u64; 10], trials: u64) -> Self {
        let t = trials as f64;
        let frequencies = counts.map(|c| c as f64 / t);
        let std_errors = frequencies.map(|f| (f * (1.0 - f) / t).sqrt());
        SimulationReport {
            trials,
            counts,
            frequencies,
            std_errors,
        }
    }

    /// `(freq - expected) / sqrt(expected (1 - expected) / trials)` per digit.
    /// Digits with a degenerate expectation get 0 when they match and an
    /// infinite score otherwise.
    pub fn z_scores(&self, expected: &[f64; 10]) -> [f64; 10] {
        let t = self.trials as f64;
        let mut z = [0.0; 10];
        for d in 0..10 {
            let sd = (expected[d] * (1.0 - expected[d]) / t).sqrt();
            let diff = self.frequencies[d] - expected[d];
            z[d] = if sd > 0.0 {
                diff / sd
            } else if diff == 0.0 {
                0.0
            } else {
                diff.signum() * f64::INFINITY
            };
        }
        z
    }
}

fn tally_chunk(config: &SimulationConfig, chunk: u64) -> [u64; 10] {
    let mut rng = config.chunk_rng(chunk);
    let mut counts = [0u64; 10];
    for _ in 0..config.chunk_len(chunk) {
        let (_, value) = roll_pair(&mut rng, config.n, config.p);
        let digit = pth_digit(value, config.p).expect("second die shows p-digit integers");
        counts[digit.index()] += 1;
    }
    counts
}

/// Runs the experiment `trials` times on the current rayon pool.
pub fn simulate(config: &SimulationConfig) -> SimulationReport {
    let counts = (0..config.chunks())
        .into_par_iter()
        .map(|c| tally_chunk(config, c))
        .reduce(|| [0u64; 10], merge_counts);
    SimulationReport::from_counts(counts, config.trials)
}

/// [`simulate`] on a dedicated pool of `workers` threads.
pub fn simulate_with_workers(
    config: &SimulationConfig,
    workers: usize,
) -> Result<SimulationReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Io(format!("thread pool: {e}")))?;
    Ok(pool.install(|| simulate(config)))
}

fn merge_counts(mut a: [u64; 10], b: [u64; 10]) -> [u64; 10] {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// The second-die values themselves, in trial order, from the same streams
/// [`simulate`] uses.
pub fn sample_values(config: &SimulationConfig) -> Vec<u64> {
    let chunks: Vec<Vec<u64>> = (0..config.chunks())
        .into_par_iter()
        .map(|c| {
            let mut rng = config.chunk_rng(c);
            (0..config.chunk_len(c))
                .map(|_| roll_pair(&mut rng, config.n, config.p).1)
                .collect()
        })
        .collect();
    chunks.concat()
}
