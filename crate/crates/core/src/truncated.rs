//! Finite-precision results of infinite products and series.

use serde::{Deserialize, Serialize};

/// Rounding slack charged per accumulated factor (relative).
pub const ROUNDING_PER_FACTOR: f64 = 1e-12;

/// A real number known up to a relative truncation error: the true value lies
/// in `[value·(1 − tail_bound), value·(1 + tail_bound)]`. An exact zero has
/// `exact_zero = true` and `tail_bound = 0`. A `tail_bound` of infinity means
/// nothing is claimed (it serializes as `null`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedValue {
    pub value: f64,
    pub tail_bound: f64,
    /// Largest prime-ideal norm (or series index) actually included.
    pub norm_cutoff: u64,
    pub exact_zero: bool,
}

impl TruncatedValue {
    pub fn new(value: f64, tail_bound: f64, norm_cutoff: u64) -> Self {
        TruncatedValue { value, tail_bound, norm_cutoff, exact_zero: false }
    }

    pub fn zero(norm_cutoff: u64) -> Self {
        TruncatedValue { value: 0.0, tail_bound: 0.0, norm_cutoff, exact_zero: true }
    }

    /// Absolute half-width of the enclosing interval.
    pub fn abs_error(&self) -> f64 {
        if self.exact_zero {
            0.0
        } else {
            self.value.abs() * self.tail_bound
        }
    }

    pub fn lower(&self) -> f64 {
        self.value - self.abs_error()
    }

    pub fn upper(&self) -> f64 {
        self.value + self.abs_error()
    }

    /// Does `x` lie within the enclosure widened by `slack`?
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        (x - self.value).abs() <= self.abs_error() + slack
    }

    /// `1 / self`, with the relative bound `t / (1 − t)`.
    pub fn recip(&self) -> Self {
        let t = if self.tail_bound < 1.0 { self.tail_bound / (1.0 - self.tail_bound) } else { f64::INFINITY };
        TruncatedValue { value: 1.0 / self.value, tail_bound: t, norm_cutoff: self.norm_cutoff, exact_zero: false }
    }

    /// Product of two enclosures; relative errors compose as `(1+s)(1+t) − 1`.
    pub fn mul(&self, other: &Self) -> Self {
        if self.exact_zero || other.exact_zero {
            return Self::zero(self.norm_cutoff.min(other.norm_cutoff));
        }
        let t = (1.0 + self.tail_bound) * (1.0 + other.tail_bound) - 1.0;
        TruncatedValue {
            value: self.value * other.value,
            tail_bound: t,
            norm_cutoff: self.norm_cutoff.min(other.norm_cutoff),
            exact_zero: false,
        }
    }

    /// Multiplies by an exactly known constant.
    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zero(self.norm_cutoff);
        }
        TruncatedValue { value: self.value * c, ..*self }
    }

    /// 12 significant digits with the bound, or `0 (exact)`.
    pub fn display(&self) -> String {
        if self.exact_zero {
            "0 (exact)".to_string()
        } else if self.tail_bound.is_finite() {
            format!("{} ± {:.3e} (rel)", fmt_sig(self.value, 12), self.tail_bound)
        } else {
            format!("{} (unbounded tail)", fmt_sig(self.value, 12))
        }
    }
}

/// `x` rounded to `n` significant digits, without exponent for moderate sizes.
pub fn fmt_sig(x: f64, n: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&mag) {
        return format!("{:.*e}", n - 1, x);
    }
    let decimals = (n as i32 - 1 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Compensated {
    sum: f64,
    c: f64,
    terms: u64,
}

impl Compensated {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
        self.terms += 1;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }
}

impl Extend<f64> for Compensated {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// `Σ_{n > t} n^{-s} ≤ t^{1−s}/(s − 1)`, the integral comparison used for
/// every Euler tail. Multiply by `d` for prime ideals: an integer is the
/// norm of at most `d` prime ideals.
pub fn power_tail(t: u64, s: u32) -> f64 {
    if s < 2 {
        return f64::INFINITY;
    }
    (t.max(1) as f64).powf(1.0 - s as f64) / (s as f64 - 1.0)
}
