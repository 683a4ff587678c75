//! Verified enclosures of arctan and the two-argument angle function.
//!
//! `atan2_point` follows the five-branch reduction over the quadrant
//! diagonals, so the arctangent is only ever evaluated on ratios in
//! `[-1, 1]`; a further shift identity brings the series argument inside
//! `[-(√2-1), √2-1]`, where a 19-term Maclaurin polynomial plus an explicit
//! remainder interval encloses arctan to full precision.
//!
//! `atan2_interval` is the nine-case box extension. Its single non-literal
//! case is a box touching the negative real axis, where the returned
//! interval represents angles unwrapped by +2π (so it may exceed π);
//! consumers that compare angle sums must treat targets modulo 2π, which the
//! argument-condition check does.

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Hard-coded one-ulp brackets of π/2, π and 2π. For each constant the
/// nearest double lies below the true value, so `[nearest, next_up]` is a
/// valid enclosure; tests verify this against 50-digit literals.
#[derive(Clone, Copy, Debug)]
pub struct PiEnclosure {
    pub half_pi: Interval,
    pub pi: Interval,
    pub two_pi: Interval,
}

pub const HALF_PI: Interval = Interval::raw(
    std::f64::consts::FRAC_PI_2,
    f64::from_bits(0x3FF921FB54442D19),
);
pub const PI: Interval =
    Interval::raw(std::f64::consts::PI, f64::from_bits(0x400921FB54442D19));
pub const TWO_PI: Interval =
    Interval::raw(std::f64::consts::TAU, f64::from_bits(0x401921FB54442D19));
const QUARTER_PI: Interval = Interval::raw(
    std::f64::consts::FRAC_PI_4,
    f64::from_bits(0x3FE921FB54442D19),
);

pub const PI_ENCLOSURE: PiEnclosure = PiEnclosure {
    half_pi: HALF_PI,
    pi: PI,
    two_pi: TWO_PI,
};

/// f64 nearest to √2 − 1; the argument-reduction boundary.
const SQRT2_M1: f64 = 0.414_213_562_373_095_1;

/// Highest kept series exponent is 37; the alternating remainder is bounded
/// by the exponent-39 term, which satisfies |x^39/39| ≤ 2^-53 on the reduced
/// range (asserted in the test suite).
const LAST_TERM_EXP: u32 = 37;
const REMAINDER_EXP: u32 = 39;

/// Maclaurin enclosure of arctan over `t`, valid for `|t| ≤ 0.419` (a hair
/// beyond the reduction boundary, so that one-ulp-fat straddles are fine).
fn atan_series(t: Interval) -> Result<Interval> {
    debug_assert!(t.mag() < 0.419, "series argument out of range: {t:?}");
    let u = t.powi(2)?;
    // Horner over P(u) = 1 - u/3 + u^2/5 - ... from the highest term down.
    let mut acc = coeff(LAST_TERM_EXP)?;
    let mut k = LAST_TERM_EXP - 2;
    loop {
        acc = acc.mul(&u)?.add(&coeff(k)?)?;
        if k == 1 {
            break;
        }
        k -= 2;
    }
    let poly = t.mul(&acc)?;
    let m = Interval::point(t.mag())?
        .powi(REMAINDER_EXP)?
        .div(&Interval::point(REMAINDER_EXP as f64)?)?;
    let remainder = Interval::new(-m.hi(), m.hi())?;
    poly.add(&remainder)
}

/// `(-1)^k / e` for series exponent `e = 2k + 1`.
fn coeff(e: u32) -> Result<Interval> {
    let c = Interval::ONE.div(&Interval::point(e as f64)?)?;
    Ok(if (e / 2) % 2 == 1 { c.neg() } else { c })
}

/// Arctan enclosure for a thin interval inside `(0, 1]`, dispatching between
/// the plain series and the π/4-shift identity
/// `arctan x = π/4 + arctan((x-1)/(x+1))`.
fn atan_unit(t: Interval) -> Result<Interval> {
    debug_assert!(t.lo() > 0.0 && t.hi() <= 1.0);
    if t.hi() <= SQRT2_M1 {
        atan_series(t)
    } else {
        let shifted = t.sub(&Interval::ONE)?.div(&t.add(&Interval::ONE)?)?;
        QUARTER_PI.add(&atan_series(shifted)?)
    }
}

/// Enclosure of `arctan(x)` for a single finite machine number.
pub fn atan_point(x: f64) -> Result<Interval> {
    if !x.is_finite() {
        return Err(Error::NonFinite { lo: x, hi: x });
    }
    if x == 0.0 {
        return Ok(Interval::ZERO);
    }
    if x < 0.0 {
        return Ok(atan_point(-x)?.neg());
    }
    if x <= SQRT2_M1 {
        atan_series(Interval::point(x)?)
    } else if x <= 1.0 {
        atan_unit(Interval::point(x)?)
    } else {
        // arctan x = π/2 - arctan(1/x)
        let inv = Interval::ONE.div(&Interval::point(x)?)?;
        HALF_PI.sub(&atan_unit(inv)?)
    }
}

/// Enclosure of `{arctan(x) : x ∈ X}`, using monotonicity.
pub fn atan_interval(x: &Interval) -> Result<Interval> {
    Interval::new(atan_point(x.lo())?.lo(), atan_point(x.hi())?.hi())
}

/// Directed-rounded ratio `[fldown(n/d), flup(n/d)]`.
fn ratio(n: f64, d: f64) -> Result<Interval> {
    Interval::point(n)?.div(&Interval::point(d)?)
}

/// Enclosure of `atan2(y, x)` with range `(-π, π]`, via the five-branch
/// quadrant reduction. The only error is the undefined origin.
pub fn atan2_point(y: f64, x: f64) -> Result<Interval> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::NonFinite { lo: y, hi: x });
    }
    if x == 0.0 && y == 0.0 {
        return Err(Error::OriginArg);
    }
    if y <= x && y > -x {
        atan_interval(&ratio(y, x)?)
    } else if y > x && y > -x {
        HALF_PI.sub(&atan_interval(&ratio(x, y)?)?)
    } else if y > x && y <= -x && y >= 0.0 {
        PI.add(&atan_interval(&ratio(y, x)?)?)
    } else if y > x && y <= -x {
        PI.neg().add(&atan_interval(&ratio(y, x)?)?)
    } else {
        HALF_PI.neg().sub(&atan_interval(&ratio(x, y)?)?)
    }
}

/// Box extension of `atan2`, nine cases on the sign configuration of the
/// input intervals.
///
/// In eight cases the result encloses `{atan2(y, x)}` literally. In the
/// ninth — `0 ∈ Iy`, `Ix` strictly negative — the box crosses the branch
/// cut, and the result is the single interval
/// `[atan2(ȳ, x̄), 2π + atan2(y̲, x̄)]`, which encloses every angle after
/// adding 2π to the negative ones. A box containing the origin yields the
/// full `[-π, π]` enclosure.
pub fn atan2_interval(iy: &Interval, ix: &Interval) -> Result<Interval> {
    let x_pos = ix.lo() > 0.0;
    let x_neg = ix.hi() < 0.0;
    let y_pos = iy.lo() > 0.0;
    let y_neg = iy.hi() < 0.0;

    let r = match ((x_pos, x_neg), (y_pos, y_neg)) {
        ((false, false), (false, false)) => Interval::new(-PI.hi(), PI.hi())?,
        ((false, false), (true, _)) => Interval::new(
            atan2_point(iy.lo(), ix.hi())?.lo(),
            atan2_point(iy.lo(), ix.lo())?.hi(),
        )?,
        ((false, false), (_, true)) => Interval::new(
            atan2_point(iy.hi(), ix.lo())?.lo(),
            atan2_point(iy.hi(), ix.hi())?.hi(),
        )?,
        ((true, _), (false, false)) => Interval::new(
            atan2_point(iy.lo(), ix.lo())?.lo(),
            atan2_point(iy.hi(), ix.lo())?.hi(),
        )?,
        ((_, true), (false, false)) => {
            // branch-cut wrap: negative angles reported +2π
            let lo = atan2_point(iy.hi(), ix.hi())?;
            let hi = TWO_PI.add(&atan2_point(iy.lo(), ix.hi())?)?;
            Interval::new(lo.lo(), hi.hi())?
        }
        ((true, _), (true, _)) => Interval::new(
            atan2_point(iy.lo(), ix.hi())?.lo(),
            atan2_point(iy.hi(), ix.lo())?.hi(),
        )?,
        ((true, _), (_, true)) => Interval::new(
            atan2_point(iy.lo(), ix.lo())?.lo(),
            atan2_point(iy.hi(), ix.hi())?.hi(),
        )?,
        ((_, true), (true, _)) => Interval::new(
            atan2_point(iy.hi(), ix.hi())?.lo(),
            atan2_point(iy.lo(), ix.lo())?.hi(),
        )?,
        ((_, true), (_, true)) => Interval::new(
            atan2_point(iy.hi(), ix.lo())?.lo(),
            atan2_point(iy.lo(), ix.hi())?.hi(),
        )?,
    };
    Ok(r)
}
