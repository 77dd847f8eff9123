//! Exact probability that the p-th digit of the second draw equals `d`.
//!
//! Three routes produce `P(d, n, p)`:
//!
//! * [`prob_exact`] evaluates the closed-form double sum over complete
//!   decades plus the tail correction [`r_term`] for the top decade;
//! * [`prob_via_recursion`] reuses cached per-decade totals and only sums
//!   the tail;
//! * [`prob_scan`] sweeps `n` upward and maintains all ten probabilities
//!   incrementally, which is the only sensible route to a full series.
//!
//! Every sum is accumulated with [`CompensatedSum`].

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::digit_core::{count_pth_digit_upto, digits_nonzero, pow10, Digit, Position};
use crate::error::{Error, Result};
use crate::sum::{CompensatedSum, UNIT_ROUNDOFF};

/// Default work cap for [`prob_exact`].
pub const DEFAULT_DIRECT_CAP: u64 = 10_000_000;

/// Largest `n` accepted by [`prob_exact_rational`].
pub const RATIONAL_CAP: u64 = 10_000;

/// One probability query `(n, p, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelParams {
    n: u64,
    p: Position,
    d: Digit,
}

impl ModelParams {
    pub fn new(n: u64, p: Position, d: Digit) -> Result<Self> {
        let min = p.floor();
        if n < min {
            return Err(Error::BoundTooSmall { n, min });
        }
        Ok(Self { n, p, d })
    }

    /// Validates raw integers.
    pub fn from_raw(n: u64, p: u32, d: u32) -> Result<Self> {
        Self::new(n, Position::new(p)?, Digit::new(d)?)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> Position {
        self.p
    }

    pub fn d(&self) -> Digit {
        self.d
    }

    /// Size of the first die, `n + 1 - 10^(p-1)`.
    pub fn faces(&self) -> u64 {
        self.n + 1 - self.p.floor()
    }
}

/// `k` and `l` of the closed form.
///
/// `k` is the largest `i >= 0` with `10^(i+p) <= n`, or -1 when `n` has
/// exactly `p` digits. `l` is the last leading-(p-1)-digit prefix whose run of
/// digit `d` in the top decade has started by `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailIndices {
    pub k: i32,
    pub l: u64,
}

pub fn tail_indices(params: &ModelParams) -> TailIndices {
    let p = params.p.get();
    let n = i128::from(params.n);
    let k = digits_nonzero(params.n) as i32 - p as i32 - 1;
    let block = i128::from(pow10((k + 1) as u32));
    let start = (i128::from(pow10(p - 1)) + i128::from(params.d.get())) * block;
    let l = (n - start).div_euclid(10 * block) + i128::from(pow10(p - 2));
    TailIndices { k, l: l as u64 }
}

/// How a [`ProbabilityValue`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    ClosedForm,
    Recursion,
    Scan,
    Oracle,
    MonteCarlo,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed_form",
            Provenance::Recursion => "recursion",
            Provenance::Scan => "scan",
            Provenance::Oracle => "oracle",
            Provenance::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityValue {
    pub value: f64,
    pub provenance: Provenance,
    pub abs_error_bound: f64,
}

impl ProbabilityValue {
    /// Wraps `sum / faces` with the propagated rounding bound.
    pub(crate) fn from_sum(sum: &CompensatedSum, faces: u64, provenance: Provenance) -> Self {
        let value = (sum.value() / faces as f64).clamp(0.0, 1.0);
        let bound = sum.error_bound() / faces as f64 + UNIT_ROUNDOFF * value;
        ProbabilityValue {
            value,
            provenance,
            abs_error_bound: bound.max(UNIT_ROUNDOFF * UNIT_ROUNDOFF),
        }
    }
}

/// Index arithmetic of the closed form, all in `i128`.
struct Frame {
    n: i128,
    d: i128,
    /// `10^(p-1)`
    floor: i128,
    /// `10^(p-2)`
    lowest_prefix: i128,
}

impl Frame {
    fn new(params: &ModelParams) -> Self {
        let p = params.p.get();
        Frame {
            n: i128::from(params.n),
            d: i128::from(params.d.get()),
            floor: i128::from(pow10(p - 1)),
            lowest_prefix: i128::from(pow10(p - 2)),
        }
    }

    /// Adds `Σ_{b=lo}^{hi} (b - (9j+d)·block - 10^(p-2) + 1) / (b + 1 - 10^(p-1))`.
    /// These are the integers whose p-th digit is `d`: the running count
    /// grows by one per step.
    fn add_run(&self, acc: &mut CompensatedSum, j: i128, block: i128, lo: i128, hi: i128) {
        let offset = (9 * j + self.d) * block + self.lowest_prefix - 1;
        for b in lo..=hi {
            acc.add((b - offset) as f64 / (b + 1 - self.floor) as f64);
        }
    }

    /// Adds `Σ_{a=lo}^{hi} ((j+1)·block - 10^(p-2)) / (a + 1 - 10^(p-1))`,
    /// the stretch between two runs where the count is frozen.
    fn add_gap(&self, acc: &mut CompensatedSum, j: i128, block: i128, lo: i128, hi: i128) {
        let count = ((j + 1) * block - self.lowest_prefix) as f64;
        for a in lo..=hi {
            acc.add(count / (a + 1 - self.floor) as f64);
        }
    }
}

/// Per-decade partial sums of the closed form for integers with `p + i`
/// digits: `in_digit` over the runs where the p-th digit is `d`, `after_digit`
/// over the stretches in between.
#[derive(Debug, Clone, Copy, Default)]
pub struct DecadeBlock {
    pub in_digit: CompensatedSum,
    pub after_digit: CompensatedSum,
}

impl DecadeBlock {
    pub fn total(&self) -> CompensatedSum {
        let mut t = self.in_digit;
        t.merge(&self.after_digit);
        t
    }
}

/// Evaluates the decade with `p + i` digits, `i >= 0`.
pub fn decade_block(p: Position, d: Digit, i: u32) -> DecadeBlock {
    let params = ModelParams { n: p.floor(), p, d };
    let f = Frame::new(&params);
    let pw = p.get();
    let block = i128::from(pow10(i));
    let first = i128::from(pow10(pw + i - 1));
    let last = i128::from(pow10(pw + i)) - 1;
    let top = i128::from(pow10(pw - 1)) - 1;
    let mut out = DecadeBlock::default();
    for j in f.lowest_prefix..=top {
        let lo = (10 * j + f.d) * block;
        f.add_run(
            &mut out.in_digit,
            j,
            block,
            lo,
            (10 * j + f.d + 1) * block - 1,
        );
    }
    for j in (f.lowest_prefix - 1)..=top {
        let lo = first.max((10 * j + f.d + 1) * block);
        let hi = last.min((10 * (j + 1) + f.d) * block - 1);
        f.add_gap(&mut out.after_digit, j, block, lo, hi);
    }
    out
}

fn r_term_sum(params: &ModelParams, idx: &TailIndices) -> CompensatedSum {
    let f = Frame::new(params);
    let pw = params.p.get();
    let block = i128::from(pow10((idx.k + 1) as u32));
    let decade_start = i128::from(pow10((pw as i32 + idx.k) as u32));
    let l = i128::from(idx.l);
    let mut acc = CompensatedSum::new();

    let n_digit_is_d = params.n / pow10((idx.k + 1) as u32) % 10 == u64::from(params.d.get());
    if n_digit_is_d {
        for j in f.lowest_prefix..=l {
            let lo = (10 * j + f.d) * block;
            let hi = f.n.min((10 * j + f.d + 1) * block - 1);
            f.add_run(&mut acc, j, block, lo, hi);
        }
        for j in (f.lowest_prefix - 1)..l {
            let lo = decade_start.max((10 * j + f.d + 1) * block);
            let hi = (10 * (j + 1) + f.d) * block - 1;
            f.add_gap(&mut acc, j, block, lo, hi);
        }
    } else {
        for j in f.lowest_prefix..=l {
            let lo = (10 * j + f.d) * block;
            f.add_run(&mut acc, j, block, lo, (10 * j + f.d + 1) * block - 1);
        }
        for j in (f.lowest_prefix - 1)..=l {
            let lo = decade_start.max((10 * j + f.d + 1) * block);
            let hi = f.n.min((10 * (j + 1) + f.d) * block - 1);
            f.add_gap(&mut acc, j, block, lo, hi);
        }
    }
    acc
}

/// Tail correction over `[10^(p+k), n]`, the incomplete top decade.
///
/// The branch is chosen by whether the p-th digit of `n` equals `d`.
pub fn r_term(params: &ModelParams, idx: &TailIndices) -> f64 {
    r_term_sum(params, idx).value()
}

/// Closed-form evaluation. Work is linear in `n`; rejects `n > cap`.
pub fn prob_exact_with_cap(params: &ModelParams, cap: u64) -> Result<ProbabilityValue> {
    if params.n > cap {
        return Err(Error::CapExceeded {
            what: "closed-form evaluation",
            n: params.n,
            cap,
            hint: "; use the incremental scan for large n",
        });
    }
    let idx = tail_indices(params);
    let mut acc = CompensatedSum::new();
    for i in 0..=idx.k {
        acc.merge(&decade_block(params.p, params.d, i as u32).total());
    }
    acc.merge(&r_term_sum(params, &idx));
    Ok(ProbabilityValue::from_sum(
        &acc,
        params.faces(),
        Provenance::ClosedForm,
    ))
}

/// [`prob_exact_with_cap`] with [`DEFAULT_DIRECT_CAP`].
pub fn prob_exact(params: &ModelParams) -> Result<ProbabilityValue> {
    prob_exact_with_cap(params, DEFAULT_DIRECT_CAP)
}

/// Cumulative decade totals per `(p, d)`.
///
/// Entry `i` of the vector holds the sum over every integer with at most
/// `p + i` digits, i.e. `P(d, 10^(p+i) - 1, p) · (10^(p+i) - 10^(p-1))`.
#[derive(Debug, Default)]
pub struct PrefixCache {
    totals: RwLock<HashMap<(Position, Digit), Vec<CompensatedSum>>>,
}

impl PrefixCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sum over all integers in `[10^(p-1), 10^(p+k) - 1]`; empty for `k = -1`.
    pub fn prefix_sum(&self, p: Position, d: Digit, k: i32) -> CompensatedSum {
        if k < 0 {
            return CompensatedSum::new();
        }
        let want = k as usize;
        if let Some(v) = self.totals.read().unwrap().get(&(p, d)) {
            if let Some(s) = v.get(want) {
                return *s;
            }
        }
        let mut guard = self.totals.write().unwrap();
        let v = guard.entry((p, d)).or_default();
        while v.len() <= want {
            let mut next = v.last().copied().unwrap_or_default();
            next.merge(&decade_block(p, d, v.len() as u32).total());
            v.push(next);
        }
        v[want]
    }

    /// `P(d, 10^(p+k) - 1, p)` for `k >= 0`.
    pub fn prefix_probability(&self, p: Position, d: Digit, k: u32) -> ProbabilityValue {
        let sum = self.prefix_sum(p, d, k as i32);
        let faces = pow10(p.get() + k) - p.floor();
        ProbabilityValue::from_sum(&sum, faces, Provenance::Recursion)
    }
}

fn global_cache() -> &'static PrefixCache {
    static CACHE: OnceLock<PrefixCache> = OnceLock::new();
    CACHE.get_or_init(PrefixCache::new)
}

/// `P(d, n, p)` from the cached probability at `10^(p+k) - 1` plus the tail.
pub fn prob_via_recursion_in(cache: &PrefixCache, params: &ModelParams) -> ProbabilityValue {
    let idx = tail_indices(params);
    let mut acc = cache.prefix_sum(params.p, params.d, idx.k);
    acc.merge(&r_term_sum(params, &idx));
    ProbabilityValue::from_sum(&acc, params.faces(), Provenance::Recursion)
}

/// [`prob_via_recursion_in`] against a process-wide cache.
pub fn prob_via_recursion(params: &ModelParams) -> ProbabilityValue {
    prob_via_recursion_in(global_cache(), params)
}

/// Exact rational value, for anchoring floating-point tolerances.
pub fn prob_exact_rational(params: &ModelParams) -> Result<BigRational> {
    if params.n > RATIONAL_CAP {
        return Err(Error::CapExceeded {
            what: "exact rational evaluation",
            n: params.n,
            cap: RATIONAL_CAP,
            hint: "",
        });
    }
    let floor = params.p.floor();
    let mut total = BigRational::zero();
    for m in floor..=params.n {
        let count = count_pth_digit_upto(m, params.p, params.d)?.total();
        if count > 0 {
            total += BigRational::new(BigInt::from(count), BigInt::from(m + 1 - floor));
        }
    }
    Ok(total / BigInt::from(params.faces()))
}

/// All ten probabilities at one `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPoint {
    pub n: u64,
    pub probs: [f64; 10],
}

/// Which `n` a scan emits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decimation {
    /// Every `n`.
    All,
    /// Every `stride`-th `n` counted from the start, plus the last one.
    Stride(u64),
    /// Every `n` below `dense_below`, then `per_decade` log-spaced samples per
    /// decade. Points `10^m - 1` are always kept.
    Log { dense_below: u64, per_decade: u32 },
}

impl Default for Decimation {
    fn default() -> Self {
        Decimation::Log {
            dense_below: 10_000,
            per_decade: 900,
        }
    }
}

/// Incremental sweep over `n = 10^(p-1) ..= n_max`.
///
/// Keeps, per digit, the running count `c_d(n)` and the running sum
/// `S_d(n) = Σ_m c_d(m) / (m + 1 - 10^(p-1))`, so each step costs O(1) and
/// `P(d, n, p) = S_d(n) / (n + 1 - 10^(p-1))`.
#[derive(Debug, Clone)]
pub struct Scan {
    p: Position,
    next_n: u64,
    n_max: u64,
    counts: [u64; 10],
    sums: [CompensatedSum; 10],
    decimation: Decimation,
    // log decimation state
    log_step: u64,
    next_log_target: f64,
}

impl Scan {
    pub fn new(n_max: u64, p: Position, decimation: Decimation) -> Result<Self> {
        let floor = p.floor();
        if n_max < floor {
            return Err(Error::BoundTooSmall {
                n: n_max,
                min: floor,
            });
        }
        if let Decimation::Stride(0) = decimation {
            return Err(Error::Usage("stride must be positive".into()));
        }
        if let Decimation::Log { per_decade: 0, .. } = decimation {
            return Err(Error::Usage("per_decade must be positive".into()));
        }
        Ok(Scan {
            p,
            next_n: floor,
            n_max,
            counts: [0; 10],
            sums: [CompensatedSum::new(); 10],
            decimation,
            log_step: 0,
            next_log_target: 0.0,
        })
    }

    fn step(&mut self) -> u64 {
        let n = self.next_n;
        self.next_n += 1;
        let faces = (n + 1 - self.p.floor()) as f64;
        if let Some(digit) = crate::digit_core::pth_digit(n, self.p) {
            self.counts[digit.index()] += 1;
        }
        for (sum, &count) in self.sums.iter_mut().zip(&self.counts) {
            if count > 0 {
                sum.add(count as f64 / faces);
            }
        }
        n
    }

    fn point(&self, n: u64) -> SeriesPoint {
        let faces = (n + 1 - self.p.floor()) as f64;
        let mut probs = [0.0; 10];
        for (prob, sum) in probs.iter_mut().zip(&self.sums) {
            *prob = sum.value() / faces;
        }
        SeriesPoint { n, probs }
    }

    fn selected(&mut self, n: u64) -> bool {
        if n == self.n_max {
            return true;
        }
        match self.decimation {
            Decimation::All => true,
            Decimation::Stride(s) => (n - self.p.floor()).is_multiple_of(s),
            Decimation::Log {
                dense_below,
                per_decade,
            } => {
                if n < dense_below || (n + 1).is_multiple_of(10) && is_power_of_ten(n + 1) {
                    return true;
                }
                let mut hit = false;
                while n as f64 >= self.next_log_target {
                    hit = true;
                    self.log_step += 1;
                    self.next_log_target = 10f64.powf(self.log_step as f64 / f64::from(per_decade));
                }
                hit
            }
        }
    }

    pub fn p(&self) -> Position {
        self.p
    }

    /// Running counts `c_d(n)` after the last emitted step.
    pub fn counts(&self) -> &[u64; 10] {
        &self.counts
    }
}

fn is_power_of_ten(x: u64) -> bool {
    x >= 1 && pow10(digits_nonzero(x) - 1) == x
}

impl Iterator for Scan {
    type Item = SeriesPoint;

    fn next(&mut self) -> Option<SeriesPoint> {
        while self.next_n <= self.n_max {
            let n = self.step();
            if self.selected(n) {
                return Some(self.point(n));
            }
        }
        None
    }
}

/// Streams [`SeriesPoint`]s for `n` in `[10^(p-1), n_max]`.
pub fn prob_scan(n_max: u64, p: Position, decimation: Decimation) -> Result<Scan> {
    Scan::new(n_max, p, decimation)
}

/// The full distribution `(P(d, n, p))_d` at a single `n`, in one O(n) pass.
pub fn distribution_at(n: u64, p: Position) -> Result<[f64; 10]> {
    let mut scan = Scan::new(n, p, Decimation::Stride(u64::MAX))?;
    let mut last = None;
    for point in &mut scan {
        last = Some(point);
    }
    Ok(last.expect("scan always emits n_max").probs)
}
