//! Limits of `P(d, n, p)` along the subsequences `n = 10^m - 1` and
//! `n = (10i + d + 1)·10^(m-p+1) - 1`, the central values, and the
//! generalized Benford (Hill) probabilities they are compared with.
//!
//! The limit constants use natural logarithms; Hill's law uses base 10.

use crate::digit_core::{pow10, Digit, Position};
use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Largest position the limit tables are computed for.
pub const MAX_ASYMPTOTIC_POSITION: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Global,
    /// Sums truncated at window index `i`.
    Windowed(u64),
}

/// The four logarithmic sums feeding the limit formulas.
///
/// With `r_j = ln((10j + d + 1) / (10j + d))` and
/// `s_j = ln((10(j + 1) + d) / (10j + d + 1))`:
/// `k = Σ r_j`, `l = Σ j·r_j`, `m = Σ s_j`, `n = Σ j·s_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSumConstants {
    pub k_sum: f64,
    pub l_sum: f64,
    pub m_sum: f64,
    pub n_sum: f64,
    pub scope: Scope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Alpha,
    AlphaWindowed,
    Central,
    Hill,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitValue {
    pub value: f64,
    pub kind: LimitKind,
}

fn check_position(p: Position) -> Result<()> {
    if p.get() > MAX_ASYMPTOTIC_POSITION {
        return Err(Error::PositionTooLarge {
            got: p.get(),
            max: MAX_ASYMPTOTIC_POSITION,
        });
    }
    Ok(())
}

/// Valid window indices `[10^(p-2), 10^(p-1) - 1]`.
pub fn window_range(p: Position) -> std::ops::RangeInclusive<u64> {
    pow10(p.get() - 2)..=pow10(p.get() - 1) - 1
}

fn check_window(p: Position, i: u64) -> Result<()> {
    let range = window_range(p);
    if !range.contains(&i) {
        return Err(Error::WindowOutOfRange {
            i,
            lo: *range.start(),
            hi: *range.end(),
        });
    }
    Ok(())
}

#[inline]
fn ln_in_run(j: u64, d: u64) -> f64 {
    (1.0 / (10 * j + d) as f64).ln_1p()
}

#[inline]
fn ln_between_runs(j: u64, d: u64) -> f64 {
    (9.0 / (10 * j + d + 1) as f64).ln_1p()
}

/// Running sums over `j`, shared by the single-window and all-window paths.
#[derive(Default)]
struct Accumulator {
    k: CompensatedSum,
    l: CompensatedSum,
    m: CompensatedSum,
    n: CompensatedSum,
}

impl Accumulator {
    fn push_run(&mut self, j: u64, d: u64) {
        let r = ln_in_run(j, d);
        self.k.add(r);
        self.l.add(j as f64 * r);
    }

    fn push_gap(&mut self, j: u64, d: u64) {
        let s = ln_between_runs(j, d);
        self.m.add(s);
        self.n.add(j as f64 * s);
    }

    fn constants(&self, scope: Scope) -> LogSumConstants {
        LogSumConstants {
            k_sum: self.k.value(),
            l_sum: self.l.value(),
            m_sum: self.m.value(),
            n_sum: self.n.value(),
            scope,
        }
    }
}

/// Global sums (`window = None`) run `j` over `[10^(p-2), 10^(p-1) - 1]` for
/// `k, l` and stop one short for `m, n`; windowed sums stop at `i` and `i - 1`.
pub fn logsum_constants(d: Digit, p: Position, window: Option<u64>) -> Result<LogSumConstants> {
    check_position(p)?;
    let lo = pow10(p.get() - 2);
    let (hi, scope) = match window {
        Some(i) => {
            check_window(p, i)?;
            (i, Scope::Windowed(i))
        }
        None => (pow10(p.get() - 1) - 1, Scope::Global),
    };
    let d = u64::from(d.get());
    let mut acc = Accumulator::default();
    for j in lo..=hi {
        acc.push_run(j, d);
        if j < hi {
            acc.push_gap(j, d);
        }
    }
    Ok(acc.constants(scope))
}

fn alpha_from(d: u64, p: u32, c: &LogSumConstants) -> f64 {
    let floor = pow10(p - 1) as f64;
    let top = pow10(p) as f64;
    let d_f = d as f64;
    0.1 + (c.n_sum + c.m_sum - 9.0 * c.l_sum - d_f * c.k_sum) / (9.0 * floor)
        + ((floor + d_f) / floor).ln() / 90.0
        + (top / (top - 10.0 + d_f + 1.0)).ln() / 9.0
}

fn alpha_sub_from(d: u64, p: u32, i: u64, alpha: f64, w: &LogSumConstants) -> f64 {
    let floor = pow10(p - 1) as f64;
    let lowest = pow10(p - 2) as f64;
    let d_f = d as f64;
    let numerator = alpha * floor + i as f64 + 1.0 - lowest - w.k_sum * d_f - 9.0 * w.l_sum
        + w.m_sum
        + w.n_sum
        + lowest * ((floor + d_f) / floor).ln();
    numerator / (10 * i + d + 1) as f64
}

/// Limit of `P(d, 10^m - 1, p)` as `m → ∞`.
pub fn alpha(d: Digit, p: Position) -> Result<LimitValue> {
    let c = logsum_constants(d, p, None)?;
    Ok(LimitValue {
        value: alpha_from(u64::from(d.get()), p.get(), &c),
        kind: LimitKind::Alpha,
    })
}

/// Limit of `P(d, (10i + d + 1)·10^(m-p+1) - 1, p)` as `m → ∞`.
pub fn alpha_sub(d: Digit, p: Position, i: u64) -> Result<LimitValue> {
    check_position(p)?;
    check_window(p, i)?;
    let a = alpha(d, p)?.value;
    let w = logsum_constants(d, p, Some(i))?;
    Ok(LimitValue {
        value: alpha_sub_from(u64::from(d.get()), p.get(), i, a, &w),
        kind: LimitKind::AlphaWindowed,
    })
}

/// Every windowed limit for `(d, p)`, in window order, in one pass.
pub fn alpha_sub_all(d: Digit, p: Position) -> Result<Vec<(u64, f64)>> {
    let a = alpha(d, p)?.value;
    let dd = u64::from(d.get());
    let mut acc = Accumulator::default();
    let mut out = Vec::new();
    for i in window_range(p) {
        if i > *window_range(p).start() {
            acc.push_gap(i - 1, dd);
        }
        acc.push_run(i, dd);
        let w = acc.constants(Scope::Windowed(i));
        out.push((i, alpha_sub_from(dd, p.get(), i, a, &w)));
    }
    Ok(out)
}

/// Mean of the windowed limits over all `9·10^(p-2)` windows.
pub fn central_value(d: Digit, p: Position) -> Result<LimitValue> {
    let all = alpha_sub_all(d, p)?;
    let sum: CompensatedSum = all.iter().map(|&(_, v)| v).collect();
    Ok(LimitValue {
        value: sum.value() / all.len() as f64,
        kind: LimitKind::Central,
    })
}

/// Hill's probability `Σ_j log10(1 + 1/(10j + d))`, `j` over `[10^(p-2), 10^(p-1) - 1]`.
pub fn hill_prob(d: Digit, p: Position) -> Result<LimitValue> {
    check_position(p)?;
    let dd = u64::from(d.get());
    let sum: CompensatedSum = window_range(p)
        .map(|j| ln_in_run(j, dd) * std::f64::consts::LOG10_E)
        .collect();
    Ok(LimitValue {
        value: sum.value(),
        kind: LimitKind::Hill,
    })
}
