//! The reduced polynomial system `g(z) = 0` for a row selection, with a
//! plain floating-point evaluation path and a rigorous interval-AD path.
//!
//! Each selected row is rewritten with split exponents
//! `alpha = alpha⁺ - alpha⁻`, `beta = beta⁺ - beta⁻`, giving
//!
//!   g_k(z) = Π z_j^{α⁺}(1-z_j)^{β⁺}  -  γ_k · Π z_j^{α⁻}(1-z_j)^{β⁻},
//!
//! so that evaluation needs only addition, subtraction, multiplication and
//! nonnegative integer powers — no division anywhere in the Krawczyk path.

use crate::arg::{atan2_interval, PI, TWO_PI};
use crate::autodiff::AdTuple;
use crate::complex::{id_r_to_c, ComplexAd};
use crate::error::{Error, Result};
use crate::gluing::GluingSystem;
use crate::interval::Interval;
use crate::linalg::{approx_inverse, inf_norm_point, IntervalMatrix, IntervalVector};
use num_complex::Complex64;

/// Approximate tetrahedron shapes. Shapes equal to 0 or 1 are degenerate and
/// rejected.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeVector(Vec<Complex64>);

impl ShapeVector {
    pub fn new(z: Vec<Complex64>) -> Result<ShapeVector> {
        for w in &z {
            if !w.re.is_finite() || !w.im.is_finite() {
                return Err(Error::NonFinite { lo: w.re, hi: w.im });
            }
            if *w == Complex64::new(0.0, 0.0) || *w == Complex64::new(1.0, 0.0) {
                return Err(Error::DegenerateShape);
            }
        }
        Ok(ShapeVector(z))
    }

    pub fn shapes(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Flatten to the real layout `(re_0, im_0, re_1, im_1, ...)`.
    pub fn to_real(&self) -> Vec<f64> {
        self.0.iter().flat_map(|z| [z.re, z.im]).collect()
    }

    pub fn from_real(x: &[f64]) -> Result<ShapeVector> {
        if !x.len().is_multiple_of(2) {
            return Err(Error::Validation("real layout must have even length".into()));
        }
        ShapeVector::new(x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
    }
}

#[derive(Clone, Debug)]
struct RowTerms {
    alpha_pos: Vec<u32>,
    alpha_neg: Vec<u32>,
    beta_pos: Vec<u32>,
    beta_neg: Vec<u32>,
    gamma: i64,
}

/// An evaluatable reduced system of `n` polynomial equations in `n` complex
/// (`2n` real) unknowns. Immutable after assembly.
#[derive(Clone, Debug)]
pub struct ResidualSystem {
    n: usize,
    rows: Vec<RowTerms>,
}

/// Interval evaluation with derivatives over a box: `values` encloses
/// `f(x)` for all `x` in the box, `jacobian` encloses every `f'(x)`.
#[derive(Clone, Debug)]
pub struct AdEvaluation {
    pub values: IntervalVector,
    pub jacobian: IntervalMatrix,
}

/// A square system with rigorous value and Jacobian enclosures, the input
/// the Krawczyk test operates on.
pub trait EnclosureSystem {
    /// Real dimension of the system.
    fn dim(&self) -> usize;

    /// Enclose `f` and `f'` over the box.
    fn enclose(&self, boxes: &[Interval]) -> Result<AdEvaluation>;

    /// Enclose at a point via the degenerate box `[c, c]`.
    fn enclose_at_point(&self, c: &[f64]) -> Result<AdEvaluation> {
        let boxes: Vec<Interval> = c
            .iter()
            .map(|&x| Interval::point(x))
            .collect::<Result<_>>()?;
        self.enclose(&boxes)
    }
}

impl EnclosureSystem for ResidualSystem {
    fn dim(&self) -> usize {
        2 * self.n
    }

    fn enclose(&self, boxes: &[Interval]) -> Result<AdEvaluation> {
        self.eval_interval_ad(boxes)
    }
}

/// Outcome of a Newton refinement run.
#[derive(Clone, Debug)]
pub struct NewtonResult {
    pub shapes: ShapeVector,
    /// `‖f‖_∞` at the returned point (plain floating evaluation).
    pub residual_inf: f64,
    /// `‖R f‖_∞` of the last correction step.
    pub step_inf: f64,
}

impl ResidualSystem {
    /// Build the system from `selection` (row indices into `sys.rows`);
    /// the selection must contain exactly `n` rows.
    pub fn assemble(sys: &GluingSystem, selection: &[usize]) -> Result<ResidualSystem> {
        if selection.len() != sys.n {
            return Err(Error::DimensionMismatch {
                left: selection.len(),
                right: sys.n,
            });
        }
        let mut rows = Vec::with_capacity(selection.len());
        for &idx in selection {
            let row = sys
                .rows
                .get(idx)
                .ok_or_else(|| Error::Validation(format!("row index {idx} out of range")))?;
            rows.push(RowTerms {
                alpha_pos: row.alpha.iter().map(|&v| v.max(0) as u32).collect(),
                alpha_neg: row.alpha.iter().map(|&v| (-v).max(0) as u32).collect(),
                beta_pos: row.beta.iter().map(|&v| v.max(0) as u32).collect(),
                beta_neg: row.beta.iter().map(|&v| (-v).max(0) as u32).collect(),
                gamma: row.gamma,
            });
        }
        Ok(ResidualSystem { n: sys.n, rows })
    }

    /// Number of complex unknowns.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Real dimension `2n`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Plain floating-point evaluation of `g`.
    pub fn eval_point(&self, z: &[Complex64]) -> Vec<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        let omz: Vec<Complex64> = z.iter().map(|w| one - w).collect();
        self.rows
            .iter()
            .map(|row| {
                let mut plus = one;
                let mut minus = one;
                for j in 0..self.n {
                    plus *= cpow(z[j], row.alpha_pos[j]) * cpow(omz[j], row.beta_pos[j]);
                    minus *= cpow(z[j], row.alpha_neg[j]) * cpow(omz[j], row.beta_neg[j]);
                }
                if row.gamma < 0 {
                    minus = -minus;
                }
                plus - minus
            })
            .collect()
    }

    /// Plain floating evaluation in the real layout.
    pub fn eval_point_real(&self, x: &[f64]) -> Result<Vec<f64>> {
        let z: Vec<Complex64> = x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: z.len(),
                right: self.n,
            });
        }
        Ok(self
            .eval_point(&z)
            .iter()
            .flat_map(|g| [g.re, g.im])
            .collect())
    }

    fn eval_rows_ad(&self, z: &[ComplexAd]) -> Result<Vec<ComplexAd>> {
        let dim = z[0].dim();
        let one = ComplexAd::one(dim);
        let omz: Vec<ComplexAd> = z
            .iter()
            .map(|w| one.sub(w))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut plus = one.clone();
            let mut minus = one.clone();
            for j in 0..self.n {
                if row.alpha_pos[j] > 0 {
                    plus = plus.mul(&z[j].powu(row.alpha_pos[j])?)?;
                }
                if row.beta_pos[j] > 0 {
                    plus = plus.mul(&omz[j].powu(row.beta_pos[j])?)?;
                }
                if row.alpha_neg[j] > 0 {
                    minus = minus.mul(&z[j].powu(row.alpha_neg[j])?)?;
                }
                if row.beta_neg[j] > 0 {
                    minus = minus.mul(&omz[j].powu(row.beta_neg[j])?)?;
                }
            }
            if row.gamma < 0 {
                minus = minus.neg();
            }
            out.push(plus.sub(&minus)?);
        }
        Ok(out)
    }

    /// Rigorous evaluation over a real-layout box: values and Jacobian
    /// enclosures in one interval-AD pass.
    pub fn eval_interval_ad(&self, boxes: &[Interval]) -> Result<AdEvaluation> {
        let dim = self.dim();
        if boxes.len() != dim {
            return Err(Error::DimensionMismatch {
                left: boxes.len(),
                right: dim,
            });
        }
        let vars: Vec<AdTuple> = boxes
            .iter()
            .enumerate()
            .map(|(i, x)| AdTuple::variable(i, *x, dim))
            .collect();
        let z = id_r_to_c(vars)?;
        let rows = self.eval_rows_ad(&z)?;

        let mut values = Vec::with_capacity(dim);
        let mut jac = Vec::with_capacity(dim * dim);
        for row in &rows {
            for part in [row.re(), row.im()] {
                values.push(part.value());
                for i in 0..dim {
                    jac.push(part.partial(i));
                }
            }
        }
        Ok(AdEvaluation {
            values: IntervalVector(values),
            jacobian: IntervalMatrix::new(dim, dim, jac)?,
        })
    }

    /// Rigorous evaluation at a point: the degenerate box `[c, c]`.
    pub fn eval_interval_at_point(&self, c: &[f64]) -> Result<AdEvaluation> {
        let boxes: Vec<Interval> = c
            .iter()
            .map(|&x| Interval::point(x))
            .collect::<Result<_>>()?;
        self.eval_interval_ad(&boxes)
    }

    /// Simplified-Newton refinement `x ← x - R f(x)` with `R` the
    /// approximate inverse of the Jacobian midpoint at `x`, run for `iters`
    /// iterations. Fails on a singular Jacobian or when `‖f‖_∞` grows three
    /// iterations in a row.
    pub fn newton_refine(&self, z0: &ShapeVector, iters: usize) -> Result<NewtonResult> {
        if z0.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: z0.len(),
                right: self.n,
            });
        }
        let mut x = z0.to_real();
        let mut prev_norm = f64::INFINITY;
        let mut growth_streak = 0usize;
        let mut step_inf = 0.0f64;
        for _ in 0..iters {
            let f = self.eval_point_real(&x)?;
            let norm = inf_norm_point(&f);
            if norm > prev_norm {
                growth_streak += 1;
                if growth_streak >= 3 {
                    return Err(Error::NewtonDiverged);
                }
            } else {
                growth_streak = 0;
            }
            prev_norm = norm;

            let jac = self.eval_interval_at_point(&x)?.jacobian.mid();
            let r = match approx_inverse(&jac) {
                Ok(r) => r,
                Err(Error::SingularApprox { .. }) => return Err(Error::NewtonSingular),
                Err(e) => return Err(e),
            };
            let delta = r.mat_vec(&f);
            step_inf = inf_norm_point(&delta);
            for (xi, di) in x.iter_mut().zip(&delta) {
                *xi -= di;
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::NewtonDiverged);
            }
        }
        let residual_inf = inf_norm_point(&self.eval_point_real(&x)?);
        Ok(NewtonResult {
            shapes: ShapeVector::from_real(&x)?,
            residual_inf,
            step_inf,
        })
    }
}

fn cpow(z: Complex64, e: u32) -> Complex64 {
    // binary exponentiation, mirroring the interval path
    if e == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut base = z;
    let mut e = e;
    let mut acc: Option<Complex64> = None;
    loop {
        if e % 2 == 1 {
            acc = Some(match acc {
                None => base,
                Some(a) => a * base,
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base *= base;
    }
    acc.expect("e > 0")
}

/// A certified complex box: enclosures of the real and imaginary parts of
/// one tetrahedron shape.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexBox {
    pub re: Interval,
    pub im: Interval,
}

/// Pair a real-layout interval vector into complex boxes.
pub fn pair_boxes(v: &IntervalVector) -> Result<Vec<ComplexBox>> {
    if !v.len().is_multiple_of(2) {
        return Err(Error::Validation("real layout must have even length".into()));
    }
    Ok((0..v.len() / 2)
        .map(|j| ComplexBox {
            re: v[2 * j],
            im: v[2 * j + 1],
        })
        .collect())
}

/// All tetrahedra positively oriented: every imaginary part strictly
/// positive, endpoint included.
pub fn check_orientation(boxes: &[ComplexBox]) -> bool {
    boxes.iter().all(|b| b.im.lo() > 0.0)
}

/// The argument condition for every selected non-edge row.
///
/// For row `m`, computes
/// `A_m = Σ_j alpha_j·Atan2(Im Z_j, Re Z_j) + beta_j·Atan2(Im(1-Z_j), Re(1-Z_j))`
/// in interval arithmetic and requires that the target `(ε - Σc)·π` lies in
/// `A_m` and that no other 2π-translate of the target does. Edge rows are
/// exempt from the condition and skipped.
pub fn check_argument(
    sys: &GluingSystem,
    selection: &[usize],
    boxes: &[ComplexBox],
) -> Result<bool> {
    for &idx in selection {
        let row = &sys.rows[idx];
        if row.is_edge() {
            continue;
        }
        let mut sum = Interval::ZERO;
        for (j, b) in boxes.iter().enumerate() {
            if row.alpha[j] != 0 {
                let angle = atan2_interval(&b.im, &b.re)?;
                let coeff = Interval::point(row.alpha[j] as f64)?;
                sum = sum.add(&coeff.mul(&angle)?)?;
            }
            if row.beta[j] != 0 {
                let re1 = Interval::ONE.sub(&b.re)?;
                let im1 = b.im.neg();
                let angle = atan2_interval(&im1, &re1)?;
                let coeff = Interval::point(row.beta[j] as f64)?;
                sum = sum.add(&coeff.mul(&angle)?)?;
            }
        }
        let target = PI.mul(&Interval::point(row.arg_target_pi_multiple() as f64)?)?;
        // target inside the sum
        if !(sum.lo() <= target.lo() && target.hi() <= sum.hi()) {
            return Ok(false);
        }
        // and no neighbouring 2π-translate can fit
        let below = target.sub(&TWO_PI)?;
        let above = target.add(&TWO_PI)?;
        if !(sum.lo() > below.hi() && sum.hi() < above.lo()) {
            return Ok(false);
        }
    }
    Ok(true)
}
