//! The serialized verification certificate: an independently recheckable
//! record of one run.
//!
//! Interval endpoints are serialized as 17-significant-digit decimal
//! strings, which round-trip `f64` exactly. Each certificate carries the
//! re-parsing rule explicitly: lower endpoints must be re-rounded toward
//! -∞ and upper endpoints toward +∞, so an independent reader that cannot
//! parse exactly still obtains a valid enclosure.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::{IntervalMatrix, IntervalVector, PointMatrix};
use crate::residual::ComplexBox;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const LO_ROUNDS: &str = "down";
pub const HI_ROUNDS: &str = "up";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct IntervalSer {
    pub lo: String,
    pub hi: String,
}

impl IntervalSer {
    pub fn from_interval(x: &Interval) -> IntervalSer {
        IntervalSer {
            lo: format_endpoint(x.lo()),
            hi: format_endpoint(x.hi()),
        }
    }

    /// Re-parse with the directed re-rounding rule: if the decimal does not
    /// reproduce a double exactly, the lower endpoint is nudged down and the
    /// upper endpoint up, preserving enclosure.
    pub fn to_interval(&self) -> Result<Interval> {
        Interval::new(
            parse_endpoint(&self.lo, Direction::Down)?,
            parse_endpoint(&self.hi, Direction::Up)?,
        )
    }
}

pub(crate) fn format_endpoint(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) enum Direction {
    Down,
    Up,
}

pub(crate) fn parse_endpoint(s: &str, dir: Direction) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad endpoint {s:?}: {e}")))?;
    if !v.is_finite() {
        return Err(Error::NonFinite { lo: v, hi: v });
    }
    // 17 significant digits round-trip exactly; anything else gets the
    // directed nudge.
    if format_endpoint(v) == s.trim() {
        Ok(v)
    } else {
        Ok(match dir {
            Direction::Down => v.next_down(),
            Direction::Up => v.next_up(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComplexBoxSer {
    pub re: IntervalSer,
    pub im: IntervalSer,
}

impl ComplexBoxSer {
    pub fn from_box(b: &ComplexBox) -> ComplexBoxSer {
        ComplexBoxSer {
            re: IntervalSer::from_interval(&b.re),
            im: IntervalSer::from_interval(&b.im),
        }
    }

    pub fn to_box(&self) -> Result<ComplexBox> {
        Ok(ComplexBox {
            re: self.re.to_interval()?,
            im: self.im.to_interval()?,
        })
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct Checks {
    pub krawczyk: bool,
    pub orientation: bool,
    pub argument: bool,
}

impl Checks {
    pub fn all_pass(&self) -> bool {
        self.krawczyk && self.orientation && self.argument
    }
}

/// Internal Krawczyk data, emitted under `--print-data` so the contraction
/// can be rechecked by an independent implementation.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct KrawczykData {
    pub center: Vec<String>,
    pub r_matrix: Vec<Vec<String>>,
    pub x: Vec<IntervalSer>,
    pub kx: Vec<IntervalSer>,
    pub f_prime: Vec<Vec<IntervalSer>>,
}

impl KrawczykData {
    pub fn new(
        center: &[f64],
        r_matrix: &PointMatrix,
        x: &IntervalVector,
        kx: &IntervalVector,
        f_prime: &IntervalMatrix,
    ) -> KrawczykData {
        KrawczykData {
            center: center.iter().map(|&v| format_endpoint(v)).collect(),
            r_matrix: (0..r_matrix.rows())
                .map(|i| {
                    (0..r_matrix.cols())
                        .map(|j| format_endpoint(r_matrix.get(i, j)))
                        .collect()
                })
                .collect(),
            x: x.iter().map(IntervalSer::from_interval).collect(),
            kx: kx.iter().map(IntervalSer::from_interval).collect(),
            f_prime: (0..f_prime.rows())
                .map(|i| {
                    (0..f_prime.cols())
                        .map(|j| IntervalSer::from_interval(&f_prime.get(i, j)))
                        .collect()
                })
                .collect(),
        }
    }
}

/// Verification outcome of one input.
///
/// Invariants: `verified` iff all three checks pass iff `shapes` is
/// nonempty.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub input_name: String,
    pub verified: bool,
    pub shapes: Vec<ComplexBoxSer>,
    pub checks: Checks,
    pub selection: Vec<usize>,
    pub timings_ms: BTreeMap<String, f64>,
    pub tool_version: String,
    /// Rule for re-parsing endpoint decimals: `lo` rounds down, `hi` up.
    pub endpoint_rounding: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_stage: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub krawczyk_data: Option<KrawczykData>,
}

impl Certificate {
    pub fn endpoint_rounding_note() -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("lo".into(), LO_ROUNDS.into());
        m.insert("hi".into(), HI_ROUNDS.into());
        m
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}
