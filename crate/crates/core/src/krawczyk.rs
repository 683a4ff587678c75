//! Candidate-box construction and the Krawczyk existence/uniqueness test.
//!
//! Given an approximate root `c` of the reduced system `f`, the test builds
//! the box `X_i = [c_i - r, c_i + r]` with `r = 2‖R F(c)‖_∞`, evaluates the
//! Krawczyk image
//!
//!   K_F(X) = c - R F(c) + (I - R F'(X)) (X - c)
//!
//! entirely in interval arithmetic, and reports success iff `K_F(X)` lies
//! strictly inside the interior of `X`. Success proves that a root exists,
//! is unique in `X`, and that `R` and every matrix in `F'(X)` are
//! nonsingular. `F(c)` is evaluated on the degenerate box `[c, c]`, so the
//! "point" residual is itself an enclosure and the whole chain stays
//! rigorous.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::{
    approx_inverse, point_mat_interval_mat, point_mat_interval_vec, IntervalMatrix,
    IntervalVector, PointMatrix,
};
use crate::residual::EnclosureSystem;
use crate::round;

/// Outcome of one Krawczyk run. When `passed`, `kx` is strictly interior to
/// `x` componentwise and the certified root lies in `kx`.
#[derive(Clone, Debug)]
pub struct KrawczykReport {
    pub passed: bool,
    /// Candidate box, dimension 2n.
    pub x: IntervalVector,
    /// Krawczyk image of the candidate box.
    pub kx: IntervalVector,
    /// The approximate inverse used for the test.
    pub r_matrix: PointMatrix,
    /// Box center.
    pub center: Vec<f64>,
    /// `‖R F(c)‖_∞` (interval magnitude norm); the candidate radius is twice
    /// this.
    pub residual_norm: f64,
    /// Jacobian enclosure over the candidate box.
    pub f_prime: IntervalMatrix,
    /// Human-readable reason when `passed` is false.
    pub failure: Option<String>,
}

/// `X_i = [c_i - r, c_i + r]` with `r = 2‖R f_at_c‖_∞` rounded upward.
///
/// `f_at_c` is the enclosure of `f(c)` from evaluating on the degenerate box
/// `[c, c]`; its directed-rounding width is what makes the radius an honest
/// measure of the residual. A zero radius (exact floating-point root) is
/// inflated to 16 ulps of the largest `|c_i|` so the strict interior test
/// stays meaningful.
pub fn candidate_box(
    c: &[f64],
    r_mat: &PointMatrix,
    f_at_c: &IntervalVector,
) -> Result<IntervalVector> {
    let scaled = point_mat_interval_vec(r_mat, f_at_c)?;
    let norm = interval_mag_norm(&scaled);
    let mut r = round::mul_up(2.0, norm);
    if r == 0.0 {
        let cmax = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let ulp = cmax.next_up() - cmax;
        r = (16.0 * ulp).max(f64::MIN_POSITIVE);
    }
    if !r.is_finite() {
        return Err(Error::NonFinite { lo: r, hi: r });
    }
    let mut out = Vec::with_capacity(c.len());
    for &ci in c {
        out.push(Interval::new(
            round::sub_down(ci, r),
            round::add_up(ci, r),
        )?);
    }
    Ok(IntervalVector(out))
}

/// `max_i mag(v_i)`.
pub fn interval_mag_norm(v: &IntervalVector) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.mag()))
}

/// The extended Krawczyk mapping `K_F(X) = c - R F(c) + (I - R F'(X))(X - c)`
/// evaluated in machine interval arithmetic.
pub fn krawczyk_map(
    x: &IntervalVector,
    c: &[f64],
    r_mat: &PointMatrix,
    sys: &impl EnclosureSystem,
) -> Result<IntervalVector> {
    let dim = sys.dim();
    if x.len() != dim || c.len() != dim {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: dim,
        });
    }
    let f_c = sys.enclose_at_point(c)?.values;
    let rf_c = point_mat_interval_vec(r_mat, &f_c)?;

    let f_prime = sys.enclose(&x.0)?.jacobian;
    let rfp = point_mat_interval_mat(r_mat, &f_prime)?;
    let mut contraction = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let delta = if i == j { Interval::ONE } else { Interval::ZERO };
            contraction.push(delta.sub(&rfp.get(i, j))?);
        }
    }
    let contraction = IntervalMatrix::new(dim, dim, contraction)?;

    let mut x_minus_c = Vec::with_capacity(dim);
    for i in 0..dim {
        x_minus_c.push(x[i].sub(&Interval::point(c[i])?)?);
    }
    let spread = crate::linalg::interval_mat_vec(&contraction, &IntervalVector(x_minus_c))?;

    let mut out = Vec::with_capacity(dim);
    for i in 0..dim {
        out.push(Interval::point(c[i])?.sub(&rf_c[i])?.add(&spread[i])?);
    }
    Ok(IntervalVector(out))
}

/// Full Krawczyk test at the point `c`: build `R` from the Jacobian midpoint
/// at `c`, form the candidate box, map it, and check strict interior
/// containment. Never panics on mathematical failure; every failure mode
/// produces `passed = false` with a diagnostic.
pub fn krawczyk_test(sys: &impl EnclosureSystem, c: &[f64]) -> Result<KrawczykReport> {
    let dim = sys.dim();
    if c.len() != dim {
        return Err(Error::DimensionMismatch {
            left: c.len(),
            right: dim,
        });
    }
    let empty_report = |r_mat: PointMatrix, reason: String| KrawczykReport {
        passed: false,
        x: IntervalVector(vec![Interval::ZERO; dim]),
        kx: IntervalVector(vec![Interval::ZERO; dim]),
        r_matrix: r_mat,
        center: c.to_vec(),
        residual_norm: f64::NAN,
        f_prime: IntervalMatrix::new(dim, dim, vec![Interval::ZERO; dim * dim]).unwrap(),
        failure: Some(reason),
    };

    let at_c = sys.enclose_at_point(c)?;
    let r_mat = match approx_inverse(&at_c.jacobian.mid()) {
        Ok(r) => r,
        Err(e @ Error::SingularApprox { .. }) => {
            return Ok(empty_report(
                PointMatrix::identity(dim),
                format!("no candidate R: {e}"),
            ))
        }
        Err(e) => return Err(e),
    };

    let run = (|| -> Result<(IntervalVector, IntervalVector, f64)> {
        let x = candidate_box(c, &r_mat, &at_c.values)?;
        let kx = krawczyk_map(&x, c, &r_mat, sys)?;
        let norm = interval_mag_norm(&point_mat_interval_vec(&r_mat, &at_c.values)?);
        Ok((x, kx, norm))
    })();

    match run {
        Ok((x, kx, residual_norm)) => {
            let passed = (0..dim).all(|i| kx[i].subset_of_interior(&x[i]));
            let f_prime = sys.enclose(&x.0)?.jacobian;
            Ok(KrawczykReport {
                passed,
                failure: if passed {
                    None
                } else {
                    Some("K_F(X) is not strictly interior to X".into())
                },
                x,
                kx,
                r_matrix: r_mat,
                center: c.to_vec(),
                residual_norm,
                f_prime,
            })
        }
        // interval blowups mean "not verified", never a panic or false claim
        Err(
            e @ (Error::DivisionByZeroInterval
            | Error::NonFinite { .. }
            | Error::InvertedBounds { .. }),
        ) => Ok(empty_report(r_mat, format!("interval evaluation failed: {e}"))),
        Err(e) => Err(e),
    }
}
