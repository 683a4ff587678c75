//! The end-to-end verification pipeline: parse → row selection → Newton
//! refinement → Krawczyk test → orientation check → argument check, short
//! circuiting to a failed certificate at the first unsatisfied stage.

use crate::certificate::{Certificate, Checks, ComplexBoxSer, KrawczykData};
use crate::error::{Error, Result};
use crate::gluing::GluingSystem;
use crate::krawczyk::krawczyk_test;
use crate::linalg::select_rows;
use crate::residual::{
    check_argument, check_orientation, pair_boxes, NewtonResult, ResidualSystem, ShapeVector,
};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::time::Instant;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Imaginary part of the regular ideal shape, the default Newton seed when
/// the input carries no approximate solution.
const DEFAULT_SEED_IM: f64 = 0.866_025_403_784_438_6;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Plain Newton refinement iterations before the Krawczyk test.
    pub newton_iters: usize,
    /// Rank-selection threshold for the smallest singular value.
    pub rank_delta: f64,
    /// Embed the full Krawczyk data in the certificate.
    pub print_data: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            newton_iters: 5,
            rank_delta: 1e-8,
            print_data: false,
        }
    }
}

struct StageClock {
    timings: BTreeMap<String, f64>,
    started: Instant,
}

impl StageClock {
    fn new() -> StageClock {
        StageClock {
            timings: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        let ms = now.duration_since(self.started).as_secs_f64() * 1e3;
        self.timings.insert(stage.to_string(), ms);
        self.started = now;
    }
}

/// Verify a gluing file. Input problems (unreadable syntax, invariant
/// violations) surface as `Err`; every mathematical failure produces an
/// `Ok` certificate with `verified = false` and the failing stage recorded.
pub fn verify_bytes(input_name: &str, bytes: &[u8], opts: &VerifyOptions) -> Result<Certificate> {
    let mut clock = StageClock::new();

    let sys = GluingSystem::parse(bytes)?;
    clock.lap("parse");

    let failed =
        |clock: StageClock, stage: &str, checks: Checks, selection: Vec<usize>| Certificate {
            input_name: input_name.to_string(),
            verified: false,
            shapes: Vec::new(),
            checks,
            selection,
            timings_ms: clock.timings,
            tool_version: TOOL_VERSION.to_string(),
            endpoint_rounding: Certificate::endpoint_rounding_note(),
            failed_stage: Some(stage.to_string()),
            krawczyk_data: None,
        };

    // row selection
    let lambda = sys.lambda_matrix();
    let selection = match select_rows(
        &lambda,
        &sys.mandatory_rows(),
        &sys.edge_row_indices(),
        sys.n,
        opts.rank_delta,
    ) {
        Ok(s) => s,
        Err(Error::RankSelectionFailed { .. }) => {
            clock.lap("selection");
            return Ok(failed(clock, "selection", Checks::default(), Vec::new()));
        }
        Err(e) => return Err(e),
    };
    let residual = ResidualSystem::assemble(&sys, &selection)?;
    clock.lap("selection");

    // seed and refine
    let refined: NewtonResult = match seed_shapes(&sys, &residual)
        .and_then(|seed| residual.newton_refine(&seed, opts.newton_iters))
    {
        Ok(r) => r,
        Err(
            Error::NewtonSingular
            | Error::NewtonDiverged
            | Error::DegenerateShape
            | Error::NonFinite { .. },
        ) => {
            clock.lap("newton");
            return Ok(failed(clock, "newton", Checks::default(), selection));
        }
        Err(e) => return Err(e),
    };
    clock.lap("newton");

    // Krawczyk test
    let report = krawczyk_test(&residual, &refined.shapes.to_real())?;
    let mut checks = Checks {
        krawczyk: report.passed,
        orientation: false,
        argument: false,
    };
    clock.lap("krawczyk");
    if !report.passed {
        return Ok(failed(clock, "krawczyk", checks, selection));
    }

    // the certified enclosure is the Krawczyk image, the tighter of the two
    let boxes = pair_boxes(&report.kx)?;

    checks.orientation = check_orientation(&boxes);
    clock.lap("orientation");
    if !checks.orientation {
        return Ok(failed(clock, "orientation", checks, selection));
    }

    checks.argument = check_argument(&sys, &selection, &boxes)?;
    clock.lap("argument");
    if !checks.argument {
        return Ok(failed(clock, "argument", checks, selection));
    }

    debug_assert!(checks.all_pass());
    Ok(Certificate {
        input_name: input_name.to_string(),
        verified: true,
        shapes: boxes.iter().map(ComplexBoxSer::from_box).collect(),
        checks,
        selection,
        timings_ms: clock.timings,
        tool_version: TOOL_VERSION.to_string(),
        endpoint_rounding: Certificate::endpoint_rounding_note(),
        failed_stage: None,
        krawczyk_data: opts.print_data.then(|| {
            KrawczykData::new(
                &report.center,
                &report.r_matrix,
                &report.x,
                &report.kx,
                &report.f_prime,
            )
        }),
    })
}

/// Initial shapes: the input's approximate solution when present, otherwise
/// the regular ideal shape for every tetrahedron followed by a damped Newton
/// search (step halving on residual growth, up to 50 iterations).
fn seed_shapes(sys: &GluingSystem, residual: &ResidualSystem) -> Result<ShapeVector> {
    if let Some(sol) = &sys.approx_solution {
        return ShapeVector::new(sol.iter().map(|&(re, im)| Complex64::new(re, im)).collect());
    }
    let seed = ShapeVector::new(vec![Complex64::new(0.5, DEFAULT_SEED_IM); sys.n])?;
    damped_newton(residual, seed, 50, 10)
}

fn damped_newton(
    residual: &ResidualSystem,
    seed: ShapeVector,
    max_iters: usize,
    max_halvings: usize,
) -> Result<ShapeVector> {
    use crate::linalg::{approx_inverse, inf_norm_point};

    let mut x = seed.to_real();
    let mut fx = residual.eval_point_real(&x)?;
    let mut norm = inf_norm_point(&fx);
    for _ in 0..max_iters {
        if norm < 1e-13 {
            break;
        }
        let jac = residual.eval_interval_at_point(&x)?.jacobian.mid();
        let r = approx_inverse(&jac).map_err(|_| Error::NewtonSingular)?;
        let delta = r.mat_vec(&fx);

        let mut t = 1.0f64;
        let mut accepted = false;
        for _ in 0..=max_halvings {
            let trial: Vec<f64> = x
                .iter()
                .zip(&delta)
                .map(|(xi, di)| xi - t * di)
                .collect();
            if trial.iter().all(|v| v.is_finite()) {
                if let Ok(ft) = residual.eval_point_real(&trial) {
                    let tn = inf_norm_point(&ft);
                    if tn < norm {
                        x = trial;
                        fx = ft;
                        norm = tn;
                        accepted = true;
                        break;
                    }
                }
            }
            t /= 2.0;
        }
        if !accepted {
            break; // stalled at the roundoff floor
        }
    }
    ShapeVector::from_real(&x)
}
