//! Bottom-up forward-mode automatic differentiation over intervals.
//!
//! An [`AdTuple`] carries an enclosure of a value together with enclosures of
//! all `m` partial derivatives with respect to the ambient variables. Running
//! an algorithm on seeded tuples therefore produces, in one pass, interval
//! extensions of both the function and its Jacobian.

use crate::error::{Error, Result};
use crate::interval::Interval;

/// `(d0, d1, ..., dm)`: `d0` encloses the value, `d1..=dm` enclose the
/// partial derivatives. The ambient dimension `m` is fixed per evaluation;
/// every binary operation validates that both operands agree on it.
#[derive(Clone, Debug, PartialEq)]
pub struct AdTuple {
    d: Vec<Interval>,
}

impl AdTuple {
    /// Constant: value enclosure with all derivative slots `[0, 0]`.
    pub fn constant(value: Interval, dim: usize) -> AdTuple {
        let mut d = vec![Interval::ZERO; dim + 1];
        d[0] = value;
        AdTuple { d }
    }

    /// Seed for the `index`-th variable (0-based): derivative slot `index`
    /// is `[1, 1]`, all others `[0, 0]`.
    pub fn variable(index: usize, value: Interval, dim: usize) -> AdTuple {
        assert!(index < dim, "variable index {index} out of range {dim}");
        let mut d = vec![Interval::ZERO; dim + 1];
        d[0] = value;
        d[index + 1] = Interval::ONE;
        AdTuple { d }
    }

    pub fn dim(&self) -> usize {
        self.d.len() - 1
    }

    pub fn value(&self) -> Interval {
        self.d[0]
    }

    /// Enclosure of the partial derivative with respect to variable `i`
    /// (0-based).
    pub fn partial(&self, i: usize) -> Interval {
        self.d[i + 1]
    }

    fn check_dim(&self, rhs: &AdTuple) -> Result<()> {
        if self.d.len() != rhs.d.len() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rhs.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &AdTuple) -> Result<AdTuple> {
        self.check_dim(rhs)?;
        let d = self
            .d
            .iter()
            .zip(&rhs.d)
            .map(|(p, q)| p.add(q))
            .collect::<Result<_>>()?;
        Ok(AdTuple { d })
    }

    pub fn sub(&self, rhs: &AdTuple) -> Result<AdTuple> {
        self.check_dim(rhs)?;
        let d = self
            .d
            .iter()
            .zip(&rhs.d)
            .map(|(p, q)| p.sub(q))
            .collect::<Result<_>>()?;
        Ok(AdTuple { d })
    }

    /// Product rule: `r0 = p0 q0`, `ri = q0 pi + p0 qi`.
    pub fn mul(&self, rhs: &AdTuple) -> Result<AdTuple> {
        self.check_dim(rhs)?;
        let p0 = self.d[0];
        let q0 = rhs.d[0];
        let mut d = Vec::with_capacity(self.d.len());
        d.push(p0.mul(&q0)?);
        for i in 1..self.d.len() {
            d.push(q0.mul(&self.d[i])?.add(&p0.mul(&rhs.d[i])?)?);
        }
        Ok(AdTuple { d })
    }

    /// Quotient rule: `r0 = p0 / q0`, `ri = pi / q0 - (p0 / q0^2) qi`.
    /// Fails when `0 ∈ q0`.
    pub fn div(&self, rhs: &AdTuple) -> Result<AdTuple> {
        self.check_dim(rhs)?;
        let p0 = self.d[0];
        let q0 = rhs.d[0];
        let mut d = Vec::with_capacity(self.d.len());
        d.push(p0.div(&q0)?);
        let p0_over_q0sq = p0.div(&q0.mul(&q0)?)?;
        for i in 1..self.d.len() {
            d.push(self.d[i].div(&q0)?.sub(&p0_over_q0sq.mul(&rhs.d[i])?)?);
        }
        Ok(AdTuple { d })
    }

    /// Exact negation of value and all derivatives.
    pub fn neg(&self) -> AdTuple {
        AdTuple {
            d: self.d.iter().map(Interval::neg).collect(),
        }
    }

    /// Squaring as the unary rule `r0 = p0^2`, `ri = 2 p0 pi`. Equivalent to
    /// `self.mul(self)` but one rounding tighter per slot, which matters in
    /// the long power chains of the gluing residuals.
    pub fn sq(&self) -> Result<AdTuple> {
        let p0 = self.d[0];
        let two = Interval::raw(2.0, 2.0);
        let mut d = Vec::with_capacity(self.d.len());
        d.push(p0.powi(2)?);
        for i in 1..self.d.len() {
            d.push(two.mul(&p0.mul(&self.d[i])?)?);
        }
        Ok(AdTuple { d })
    }

    /// Chain rule for a unary operation: `r0 = u(p0)`, `ri = u'(p0) pi`.
    /// `u` and `du` must be interval extensions of the operation and its
    /// derivative.
    pub fn unary<U, D>(&self, u: U, du: D) -> Result<AdTuple>
    where
        U: Fn(&Interval) -> Result<Interval>,
        D: Fn(&Interval) -> Result<Interval>,
    {
        let p0 = self.d[0];
        let slope = du(&p0)?;
        let mut d = Vec::with_capacity(self.d.len());
        d.push(u(&p0)?);
        for i in 1..self.d.len() {
            d.push(slope.mul(&self.d[i])?);
        }
        Ok(AdTuple { d })
    }
}
