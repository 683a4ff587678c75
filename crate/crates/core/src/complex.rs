//! Complex numbers as pairs of AD objects, with rectangular-form arithmetic
//! and the index maps between real and complex variable layouts.
//!
//! The variable pairing is `z_j = x_{2j} + i·x_{2j+1}` in 0-based indexing.

use crate::autodiff::AdTuple;
use crate::error::{Error, Result};
use crate::interval::Interval;

/// A complex interval with derivatives: real and imaginary parts are
/// [`AdTuple`]s of the same ambient dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexAd {
    re: AdTuple,
    im: AdTuple,
}

impl ComplexAd {
    pub fn new(re: AdTuple, im: AdTuple) -> Result<ComplexAd> {
        if re.dim() != im.dim() {
            return Err(Error::DimensionMismatch {
                left: re.dim(),
                right: im.dim(),
            });
        }
        Ok(ComplexAd { re, im })
    }

    /// The constant `1 + 0i`.
    pub fn one(dim: usize) -> ComplexAd {
        ComplexAd {
            re: AdTuple::constant(Interval::ONE, dim),
            im: AdTuple::constant(Interval::ZERO, dim),
        }
    }

    pub fn re(&self) -> &AdTuple {
        &self.re
    }

    pub fn im(&self) -> &AdTuple {
        &self.im
    }

    pub fn dim(&self) -> usize {
        self.re.dim()
    }

    pub fn add(&self, w: &ComplexAd) -> Result<ComplexAd> {
        Ok(ComplexAd {
            re: self.re.add(&w.re)?,
            im: self.im.add(&w.im)?,
        })
    }

    pub fn sub(&self, w: &ComplexAd) -> Result<ComplexAd> {
        Ok(ComplexAd {
            re: self.re.sub(&w.re)?,
            im: self.im.sub(&w.im)?,
        })
    }

    /// `(re·re' − im·im', re·im' + im·re')`.
    pub fn mul(&self, w: &ComplexAd) -> Result<ComplexAd> {
        Ok(ComplexAd {
            re: self.re.mul(&w.re)?.sub(&self.im.mul(&w.im)?)?,
            im: self.re.mul(&w.im)?.add(&self.im.mul(&w.re)?)?,
        })
    }

    /// Rectangular division with denominator `re'^2 + im'^2`; fails when the
    /// denominator enclosure contains zero.
    pub fn div(&self, w: &ComplexAd) -> Result<ComplexAd> {
        let den = w.re.mul(&w.re)?.add(&w.im.mul(&w.im)?)?;
        if den.value().contains(0.0) {
            return Err(Error::DivisionByZeroInterval);
        }
        Ok(ComplexAd {
            re: self.re.mul(&w.re)?.add(&self.im.mul(&w.im)?)?.div(&den)?,
            im: self.im.mul(&w.re)?.sub(&self.re.mul(&w.im)?)?.div(&den)?,
        })
    }

    /// Exact negation.
    pub fn neg(&self) -> ComplexAd {
        ComplexAd {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    /// Squaring: `(re^2 - im^2, 2·re·im)` through the dedicated AD square
    /// rule, tighter than `self.mul(self)`.
    pub fn sq(&self) -> Result<ComplexAd> {
        let two = AdTuple::constant(Interval::raw(2.0, 2.0), self.dim());
        Ok(ComplexAd {
            re: self.re.sq()?.sub(&self.im.sq()?)?,
            im: two.mul(&self.re.mul(&self.im)?)?,
        })
    }

    /// `self^e` by binary exponentiation; `e = 0` gives `1 + 0i`. Squaring
    /// keeps the enclosure tight for the large exponents a Dehn filling
    /// produces.
    pub fn powu(&self, e: u32) -> Result<ComplexAd> {
        if e == 0 {
            return Ok(ComplexAd::one(self.dim()));
        }
        let mut base = self.clone();
        let mut e = e;
        let mut acc: Option<ComplexAd> = None;
        loop {
            if e % 2 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.sq()?;
        }
        Ok(acc.expect("e > 0"))
    }
}

/// Pairs consecutive real-layout tuples `(x_0, x_1), (x_2, x_3), ...` into
/// complex objects. Fails on odd-length input.
pub fn id_r_to_c(x: Vec<AdTuple>) -> Result<Vec<ComplexAd>> {
    if !x.len().is_multiple_of(2) {
        return Err(Error::Validation(format!(
            "real layout must have even length, got {}",
            x.len()
        )));
    }
    let mut out = Vec::with_capacity(x.len() / 2);
    let mut it = x.into_iter();
    while let (Some(re), Some(im)) = (it.next(), it.next()) {
        out.push(ComplexAd::new(re, im)?);
    }
    Ok(out)
}

/// Interleaves complex objects back into the real layout `(re, im, re, im, ...)`.
pub fn id_c_to_r(z: Vec<ComplexAd>) -> Vec<AdTuple> {
    let mut out = Vec::with_capacity(z.len() * 2);
    for w in z {
        out.push(w.re);
        out.push(w.im);
    }
    out
}
