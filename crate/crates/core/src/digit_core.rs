//! Positional digit extraction and O(1) counting of integers whose p-th
//! significant digit equals a given value.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported digit position. Keeps `10^(p + k)` inside `u64` for
/// every `n` representable as `u64`.
pub const MAX_POSITION: u32 = 18;

/// Default cap for the enumeration oracle.
pub const DEFAULT_COUNT_ORACLE_CAP: u64 = 10_000_000;

const POW10: [u64; 20] = {
    let mut table = [1u64; 20];
    let mut i = 1;
    while i < 20 {
        table[i] = table[i - 1] * 10;
        i += 1;
    }
    table
};

/// `10^e` for `e <= 19`.
#[inline]
pub fn pow10(e: u32) -> u64 {
    POW10[e as usize]
}

/// A decimal digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digit(u8);

impl Digit {
    pub fn new(value: u32) -> Result<Self> {
        if value <= 9 {
            Ok(Digit(value as u8))
        } else {
            Err(Error::InvalidDigit(value))
        }
    }

    #[inline]
    pub const fn get(self) -> u8 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = Digit> {
        (0..10u8).map(Digit)
    }
}

impl fmt::Display for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A significant-digit position, counted from the left, at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(u32);

impl Position {
    pub fn new(value: u32) -> Result<Self> {
        if (2..=MAX_POSITION).contains(&value) {
            Ok(Position(value))
        } else {
            Err(Error::InvalidPosition {
                got: value,
                max: MAX_POSITION,
            })
        }
    }

    #[inline]
    pub const fn get(self) -> u32 {
        self.0
    }

    /// The smallest integer with `p` digits, `10^(p-1)`.
    #[inline]
    pub fn floor(self) -> u64 {
        pow10(self.0 - 1)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Number of decimal digits of `x`, by comparison against the power table.
pub fn num_digits(x: u64) -> Result<u32> {
    if x == 0 {
        return Err(Error::Zero);
    }
    Ok(digits_nonzero(x))
}

#[inline]
pub(crate) fn digits_nonzero(x: u64) -> u32 {
    let mut count = 1;
    while (count as usize) < POW10.len() && POW10[count as usize] <= x {
        count += 1;
    }
    count
}

/// The p-th significant digit of `x`, or `None` when `x` has fewer than `p`
/// digits (or is zero).
#[inline]
pub fn pth_digit(x: u64, p: Position) -> Option<Digit> {
    if x == 0 {
        return None;
    }
    let dg = digits_nonzero(x);
    if dg < p.0 {
        return None;
    }
    Some(Digit(((x / pow10(dg - p.0)) % 10) as u8))
}

/// Decomposition of `|{ j in [10^(p-1), m] : pth_digit(j) = d }|`.
///
/// `k_q` is the largest `k >= -1` with `10^(p+k) <= m`; the blocks have
/// length `10^(k_q + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountBreakdown {
    /// Count over `[10^(p-1), 10^(p+k_q) - 1]`, i.e. `10^(p-2) (10^(k_q+1) - 1)`.
    pub complete_prefix_count: u64,
    /// Complete runs of `10^(k_q+1)` integers at or above `10^(p+k_q)`.
    pub tail_full_blocks: u64,
    /// Integers in the run that contains `m`, when `m`'s p-th digit is `d`.
    pub tail_partial: u64,
    pub k_q: i32,
}

impl CountBreakdown {
    pub fn block_len(&self) -> u64 {
        pow10((self.k_q + 1) as u32)
    }

    pub fn total(&self) -> u64 {
        self.complete_prefix_count + self.tail_full_blocks * self.block_len() + self.tail_partial
    }
}

/// Counts integers in `[10^(p-1), m]` whose p-th digit is `d`, in O(1).
pub fn count_pth_digit_upto(m: u64, p: Position, d: Digit) -> Result<CountBreakdown> {
    let floor = p.floor();
    if m < floor {
        return Err(Error::BoundTooSmall { n: m, min: floor });
    }
    let dg = digits_nonzero(m);
    let k_q = dg as i32 - p.0 as i32 - 1;
    let block = pow10((k_q + 1) as u32);
    let lowest_prefix = pow10(p.0 - 2);
    // leading p-1 digits of m, then its p-th digit
    let prefix = m / (block * 10);
    let digit = (m / block) % 10;
    let below = u64::from(digit > u64::from(d.0));
    let partial = if digit == u64::from(d.0) {
        m % block + 1
    } else {
        0
    };
    Ok(CountBreakdown {
        complete_prefix_count: lowest_prefix * (block - 1),
        tail_full_blocks: prefix - lowest_prefix + below,
        tail_partial: partial,
        k_q,
    })
}

/// Linear-scan reference for [`count_pth_digit_upto`].
pub fn count_pth_digit_upto_oracle(m: u64, p: Position, d: Digit, cap: u64) -> Result<u64> {
    let floor = p.floor();
    if m < floor {
        return Err(Error::BoundTooSmall { n: m, min: floor });
    }
    if m > cap {
        return Err(Error::CapExceeded {
            what: "digit-count oracle",
            n: m,
            cap,
            hint: "",
        });
    }
    Ok((floor..=m).filter(|&j| pth_digit(j, p) == Some(d)).count() as u64)
}
