//! Closed real intervals with machine-number endpoints and outward-rounded
//! arithmetic: every operation returns an interval that provably contains
//! the exact real result.

use crate::error::{Error, Result};
use crate::round;

/// A closed interval `[lo, hi]` with finite `f64` endpoints, `lo <= hi`.
///
/// Non-finite endpoints are rejected at construction; any overflow inside an
/// operation therefore surfaces as an error instead of propagating infinity
/// through a verification.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl std::fmt::Debug for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Interval> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFinite { lo, hi });
        }
        if lo > hi {
            return Err(Error::InvertedBounds { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Result<Interval> {
        Interval::new(x, x)
    }

    /// Trusted constructor for compile-time constants. The invariants must
    /// hold by inspection at the call site.
    pub(crate) const fn raw(lo: f64, hi: f64) -> Interval {
        Interval { lo, hi }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn add(&self, rhs: &Interval) -> Result<Interval> {
        Interval::new(
            round::add_down(self.lo, rhs.lo),
            round::add_up(self.hi, rhs.hi),
        )
    }

    pub fn sub(&self, rhs: &Interval) -> Result<Interval> {
        Interval::new(
            round::sub_down(self.lo, rhs.hi),
            round::sub_up(self.hi, rhs.lo),
        )
    }

    pub fn mul(&self, rhs: &Interval) -> Result<Interval> {
        let (a, b) = (self.lo, self.hi);
        let (c, d) = (rhs.lo, rhs.hi);
        let lo = round::mul_down(a, c)
            .min(round::mul_down(a, d))
            .min(round::mul_down(b, c))
            .min(round::mul_down(b, d));
        let hi = round::mul_up(a, c)
            .max(round::mul_up(a, d))
            .max(round::mul_up(b, c))
            .max(round::mul_up(b, d));
        Interval::new(lo, hi)
    }

    /// Requires `0 ∉ rhs`; an interval denominator containing zero aborts the
    /// enclosing Krawczyk evaluation.
    pub fn div(&self, rhs: &Interval) -> Result<Interval> {
        if rhs.contains(0.0) {
            return Err(Error::DivisionByZeroInterval);
        }
        let (a, b) = (self.lo, self.hi);
        let (c, d) = (rhs.lo, rhs.hi);
        let lo = round::div_down(a, c)
            .min(round::div_down(a, d))
            .min(round::div_down(b, c))
            .min(round::div_down(b, d));
        let hi = round::div_up(a, c)
            .max(round::div_up(a, d))
            .max(round::div_up(b, c))
            .max(round::div_up(b, d));
        Interval::new(lo, hi)
    }

    /// Exact negation.
    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    /// `[x^e : x ∈ self]` with even powers tightened through the absolute
    /// value, so e.g. `[-2, 1]^2 = [0, 4]`.
    pub fn powi(&self, e: u32) -> Result<Interval> {
        if e == 0 {
            return Ok(Interval::ONE);
        }
        if e == 1 {
            return Ok(*self);
        }
        if e % 2 == 1 {
            // odd powers are monotone over the whole line
            Interval::new(pow_scalar_down(self.lo, e), pow_scalar_up(self.hi, e))
        } else {
            let (alo, ahi) = if self.contains(0.0) {
                (0.0, self.lo.abs().max(self.hi.abs()))
            } else {
                (
                    self.lo.abs().min(self.hi.abs()),
                    self.lo.abs().max(self.hi.abs()),
                )
            };
            Interval::new(pow_nonneg(alo, e, false), pow_nonneg(ahi, e, true))
        }
    }

    /// A machine number inside `[lo, hi]` approximating the midpoint.
    /// Computed as `lo + (hi - lo)/2` to avoid overflow; clamped so
    /// containment holds unconditionally.
    pub fn mid(&self) -> f64 {
        let m = self.lo + (self.hi - self.lo) / 2.0;
        m.clamp(self.lo, self.hi)
    }

    /// Upper bound on the true radius `(hi - lo)/2`.
    pub fn rad(&self) -> f64 {
        let d = round::sub_up(self.hi, self.lo);
        let r = d / 2.0;
        if r + r < d {
            r.next_up()
        } else {
            r
        }
    }

    /// Upper bound on the width `hi - lo`.
    pub fn width(&self) -> f64 {
        round::sub_up(self.hi, self.lo)
    }

    /// `max(|x| : x ∈ self)`, exact.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn encloses(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Strict containment in the interior of `outer`:
    /// `outer.lo < self.lo` and `self.hi < outer.hi`.
    pub fn subset_of_interior(&self, outer: &Interval) -> bool {
        outer.lo < self.lo && self.hi < outer.hi
    }
}

fn pow_nonneg(x: f64, e: u32, up: bool) -> f64 {
    debug_assert!(x >= 0.0);
    let mut acc = x;
    for _ in 1..e {
        acc = if up {
            round::mul_up(acc, x)
        } else {
            round::mul_down(acc, x)
        };
    }
    acc
}

fn pow_scalar_down(x: f64, e: u32) -> f64 {
    if x >= 0.0 {
        pow_nonneg(x, e, false)
    } else {
        -pow_nonneg(-x, e, true)
    }
}

fn pow_scalar_up(x: f64, e: u32) -> f64 {
    if x >= 0.0 {
        pow_nonneg(x, e, true)
    } else {
        -pow_nonneg(-x, e, false)
    }
}
