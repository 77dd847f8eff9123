//! Compensated (Neumaier) summation with a running a-priori error bound.

use std::ops::AddAssign;

/// Unit roundoff for `f64`.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Kahan-Babuska-Neumaier accumulator.
///
/// Besides the compensated sum it tracks the number of terms and the sum of
/// their magnitudes, which is what the classical bound
/// `|s - ŝ| <= 2u|s| + O(N u^2) Σ|x_i|` needs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
    abs_sum: f64,
    terms: u64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        Self {
            sum: 0.0,
            compensation: 0.0,
            abs_sum: 0.0,
            terms: 0,
        }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
        self.terms += 1;
    }

    /// Merges another accumulator into this one.
    pub fn merge(&mut self, other: &CompensatedSum) {
        let terms = self.terms + other.terms;
        let abs_sum = self.abs_sum + other.abs_sum;
        self.add(other.sum);
        self.add(other.compensation);
        self.terms = terms;
        self.abs_sum = abs_sum;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    /// Bound on the absolute error of [`value`](Self::value), assuming each
    /// term was itself produced by one correctly rounded operation.
    pub fn error_bound(&self) -> f64 {
        let n = self.terms as f64;
        let u = UNIT_ROUNDOFF;
        // one rounding per term, plus the compensated accumulation itself
        u * self.abs_sum + 2.0 * u * self.value().abs() + 2.0 * n * u * u * self.abs_sum
    }
}

impl AddAssign<f64> for CompensatedSum {
    #[inline]
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
