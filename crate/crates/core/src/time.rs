//! Superdense simulation time.
//!
//! A [`HyTime`] is a pair of a real part and an integer count of
//! infinitesimals. Ordering is lexicographic, so `(r, k) < (r, k + 1)` and
//! `(r, k) < (r + d, 0)` for every `d > 0`. The distinguished value
//! [`HyTime::INFINITY`] is greater than every finite point and marks passive
//! processes.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Sub};

/// A point in superdense time: `real + eps * ε`, or `+∞`.
#[derive(Clone, Copy)]
pub struct HyTime {
    real: f64,
    eps: i64,
}

impl HyTime {
    /// `(0, 0)`.
    pub const ZERO: HyTime = HyTime { real: 0.0, eps: 0 };
    /// One infinitesimal, `(0, 1)`.
    pub const EPSILON: HyTime = HyTime { real: 0.0, eps: 1 };
    /// `+∞`. Its eps order is always zero.
    pub const INFINITY: HyTime = HyTime {
        real: f64::INFINITY,
        eps: 0,
    };

    /// Builds a finite time point.
    ///
    /// Panics if `real` is NaN or infinite; use [`HyTime::INFINITY`] for `+∞`.
    pub fn new(real: f64, eps: i64) -> Self {
        Self::try_new(real, eps).expect("HyTime real part must be finite")
    }

    /// Builds a finite time point, or `None` when `real` is not finite.
    pub fn try_new(real: f64, eps: i64) -> Option<Self> {
        if real.is_finite() {
            // fold -0.0 into 0.0 so equality and ordering agree
            Some(HyTime {
                real: real + 0.0,
                eps,
            })
        } else {
            None
        }
    }

    /// `(real, 0)`, with `f64::INFINITY` mapped to `+∞`.
    ///
    /// Panics on NaN or negative infinity.
    pub fn from_real(real: f64) -> Self {
        if real == f64::INFINITY {
            Self::INFINITY
        } else {
            Self::new(real, 0)
        }
    }

    pub fn real(&self) -> f64 {
        self.real
    }

    /// Infinitesimal order; zero for `+∞`.
    pub fn eps(&self) -> i64 {
        self.eps
    }

    pub fn is_infinite(&self) -> bool {
        self.real == f64::INFINITY
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    /// `self + ε`. Absorbing on `+∞`.
    pub fn succ(self) -> Self {
        if self.is_infinite() {
            self
        } else {
            HyTime {
                real: self.real,
                eps: self.eps + 1,
            }
        }
    }
}

impl PartialEq for HyTime {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HyTime {}

impl Ord for HyTime {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => self
                .real
                .total_cmp(&other.real)
                .then(self.eps.cmp(&other.eps)),
        }
    }
}

impl PartialOrd for HyTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for HyTime {
    type Output = HyTime;

    /// Componentwise sum; `+∞` absorbs.
    fn add(self, rhs: HyTime) -> HyTime {
        if self.is_infinite() || rhs.is_infinite() {
            return HyTime::INFINITY;
        }
        let real = self.real + rhs.real;
        if real.is_finite() {
            HyTime {
                real: real + 0.0,
                eps: self.eps + rhs.eps,
            }
        } else {
            HyTime::INFINITY
        }
    }
}

impl Sub for HyTime {
    type Output = HyTime;

    /// Componentwise difference of two finite points (elapsed time).
    ///
    /// Panics if either side is `+∞`.
    fn sub(self, rhs: HyTime) -> HyTime {
        assert!(
            self.is_finite() && rhs.is_finite(),
            "elapsed time between infinite instants"
        );
        HyTime {
            real: self.real - rhs.real + 0.0,
            eps: self.eps - rhs.eps,
        }
    }
}

impl Default for HyTime {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Debug for HyTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HyTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("+inf")
        } else {
            write!(f, "({:?}, {})", self.real, self.eps)
        }
    }
}
