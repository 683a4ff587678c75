//! Gluing-equation data: file parsing, invariant validation, filled-cusp
//! combination, and the derived exponent/sign/argument-target tables.
//!
//! The input file is JSON with the raw per-row coefficient triples `(a, b, c)`
//! exported from a triangulation tool. One equation row per edge, and a
//! meridian/longitude pair per cusp; Dehn fillings are given as coprime
//! `(p, q)` per filled cusp. This module combines each filled cusp's pair
//! into the single row `p·meridian + q·longitude` and derives, for every
//! working row `m`:
//!
//!   alpha_j = a_j - c_j,   beta_j = -b_j + c_j,   gamma = (-1)^(Σ c_j),
//!
//! plus the argument target `(ε - Σ c_j)·π` with `ε = 2` for edge and
//! filled-cusp rows and `ε = 0` for unfilled-cusp rows.

use crate::error::{Error, Result};
use crate::linalg::PointMatrix;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    Edge,
    Meridian,
    Longitude,
}

/// A raw equation row as stored in the gluing file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquationRow {
    pub kind: RowKind,
    #[serde(default)]
    pub cusp: Option<usize>,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub c: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspFilling {
    pub cusp: usize,
    pub p: i64,
    pub q: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GluingFile {
    name: String,
    n: usize,
    k: usize,
    h: usize,
    rows: Vec<EquationRow>,
    #[serde(default)]
    fillings: Vec<CuspFilling>,
    #[serde(default)]
    approx_solution: Option<Vec<[f64; 2]>>,
}

/// Classification of a working (post-combination) row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowClass {
    Edge,
    UnfilledMeridian { cusp: usize },
    UnfilledLongitude { cusp: usize },
    Filled { cusp: usize },
}

/// One row of the combined system with its derived quantities.
#[derive(Clone, Debug)]
pub struct CombinedRow {
    pub class: RowClass,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub c: Vec<i64>,
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    /// `(-1)^(Σ c_j)`, always ±1.
    pub gamma: i64,
    pub sum_c: i64,
    /// 2 for edge and filled rows, 0 for unfilled-cusp rows.
    pub eps_coeff: i64,
}

impl CombinedRow {
    fn from_raw(class: RowClass, a: Vec<i64>, b: Vec<i64>, c: Vec<i64>) -> CombinedRow {
        let alpha = a.iter().zip(&c).map(|(x, y)| x - y).collect();
        let beta = b.iter().zip(&c).map(|(x, y)| -x + y).collect();
        let sum_c: i64 = c.iter().sum();
        let gamma = if sum_c.rem_euclid(2) == 0 { 1 } else { -1 };
        let eps_coeff = match class {
            RowClass::Edge | RowClass::Filled { .. } => 2,
            _ => 0,
        };
        CombinedRow {
            class,
            a,
            b,
            c,
            alpha,
            beta,
            gamma,
            sum_c,
            eps_coeff,
        }
    }

    /// The argument target as an integer multiple of π: `ε - Σ c_j`.
    pub fn arg_target_pi_multiple(&self) -> i64 {
        self.eps_coeff - self.sum_c
    }

    pub fn is_edge(&self) -> bool {
        matches!(self.class, RowClass::Edge)
    }
}

/// A validated gluing system with the combined row table.
#[derive(Clone, Debug)]
pub struct GluingSystem {
    pub name: String,
    /// Tetrahedron count.
    pub n: usize,
    /// Unfilled cusp count.
    pub k: usize,
    /// Filled cusp count.
    pub h: usize,
    /// Working rows in canonical order: `n` edge rows, then
    /// meridian/longitude per unfilled cusp (ascending), then one combined
    /// row per filled cusp (ascending).
    pub rows: Vec<CombinedRow>,
    pub fillings: Vec<CuspFilling>,
    pub approx_solution: Option<Vec<(f64, f64)>>,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl GluingSystem {
    pub fn parse(bytes: &[u8]) -> Result<GluingSystem> {
        let file: GluingFile =
            serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(file)
    }

    fn from_file(file: GluingFile) -> Result<GluingSystem> {
        let GluingFile {
            name,
            n,
            k,
            h,
            rows,
            fillings,
            approx_solution,
        } = file;

        if n == 0 {
            return Err(Error::Validation("tetrahedron count must be positive".into()));
        }
        let cusps = k + h;
        if rows.len() != n + 2 * cusps {
            return Err(Error::Validation(format!(
                "expected {} rows ({} edges + 2x{} cusps), got {}",
                n + 2 * cusps,
                n,
                cusps,
                rows.len()
            )));
        }

        for (i, row) in rows.iter().enumerate() {
            if row.a.len() != n || row.b.len() != n || row.c.len() != n {
                return Err(Error::Validation(format!(
                    "row {i}: coefficient lists must have length {n}"
                )));
            }
            match row.kind {
                RowKind::Edge => {
                    if row.cusp.is_some() {
                        return Err(Error::Validation(format!(
                            "row {i}: edge rows carry no cusp index"
                        )));
                    }
                    for v in row.a.iter().chain(&row.b).chain(&row.c) {
                        if !(0..=2).contains(v) {
                            return Err(Error::Validation(format!(
                                "row {i}: edge coefficient {v} outside {{0, 1, 2}}"
                            )));
                        }
                    }
                }
                RowKind::Meridian | RowKind::Longitude => {
                    let cusp = row.cusp.ok_or_else(|| {
                        Error::Validation(format!("row {i}: cusp rows need a cusp index"))
                    })?;
                    if cusp >= cusps {
                        return Err(Error::Validation(format!(
                            "row {i}: cusp index {cusp} out of range {cusps}"
                        )));
                    }
                    for v in row.a.iter().chain(&row.b).chain(&row.c) {
                        if v.abs() > 4 {
                            return Err(Error::Validation(format!(
                                "row {i}: cusp coefficient {v} exceeds |4|"
                            )));
                        }
                    }
                }
            }
        }

        let edge_rows: Vec<&EquationRow> =
            rows.iter().filter(|r| r.kind == RowKind::Edge).collect();
        if edge_rows.len() != n {
            return Err(Error::Validation(format!(
                "expected {} edge rows, found {}",
                n,
                edge_rows.len()
            )));
        }
        // each tetrahedron's edges are distributed with total multiplicity 2
        // per parameter kind
        for j in 0..n {
            let sums = [
                ("a", edge_rows.iter().map(|r| r.a[j]).sum::<i64>()),
                ("b", edge_rows.iter().map(|r| r.b[j]).sum::<i64>()),
                ("c", edge_rows.iter().map(|r| r.c[j]).sum::<i64>()),
            ];
            for (label, s) in sums {
                if s != 2 {
                    return Err(Error::Validation(format!(
                        "edge {label}-coefficients of tetrahedron {j} sum to {s}, expected 2"
                    )));
                }
            }
        }

        let mut meridians: Vec<Option<&EquationRow>> = vec![None; cusps];
        let mut longitudes: Vec<Option<&EquationRow>> = vec![None; cusps];
        for (i, row) in rows.iter().enumerate() {
            let slot = match row.kind {
                RowKind::Meridian => &mut meridians,
                RowKind::Longitude => &mut longitudes,
                RowKind::Edge => continue,
            };
            let cusp = row.cusp.unwrap();
            if slot[cusp].replace(row).is_some() {
                return Err(Error::Validation(format!(
                    "row {i}: duplicate {:?} row for cusp {cusp}",
                    row.kind
                )));
            }
        }
        for cusp in 0..cusps {
            if meridians[cusp].is_none() || longitudes[cusp].is_none() {
                return Err(Error::Validation(format!(
                    "cusp {cusp} is missing a meridian or longitude row"
                )));
            }
        }

        if fillings.len() != h {
            return Err(Error::Validation(format!(
                "h = {} but {} fillings given",
                h,
                fillings.len()
            )));
        }
        let mut filled = vec![false; cusps];
        for f in &fillings {
            if f.cusp >= cusps {
                return Err(Error::Validation(format!(
                    "filling references cusp {} out of range {cusps}",
                    f.cusp
                )));
            }
            if filled[f.cusp] {
                return Err(Error::Validation(format!("cusp {} filled twice", f.cusp)));
            }
            filled[f.cusp] = true;
            if (f.p, f.q) == (0, 0) {
                return Err(Error::Validation("filling slope (0, 0) is not a curve".into()));
            }
            if gcd(f.p, f.q) != 1 {
                return Err(Error::Validation(format!(
                    "filling slope ({}, {}) is not coprime",
                    f.p, f.q
                )));
            }
        }

        if let Some(sol) = &approx_solution {
            if sol.len() != n {
                return Err(Error::Validation(format!(
                    "approx_solution has {} entries, expected {}",
                    sol.len(),
                    n
                )));
            }
            for z in sol {
                if !z[0].is_finite() || !z[1].is_finite() {
                    return Err(Error::Validation("non-finite approx_solution entry".into()));
                }
            }
        }

        // canonical working order: edges, unfilled cusp pairs, filled rows
        let mut combined = Vec::with_capacity(n + 2 * k + h);
        for row in rows.iter().filter(|r| r.kind == RowKind::Edge) {
            combined.push(CombinedRow::from_raw(
                RowClass::Edge,
                row.a.clone(),
                row.b.clone(),
                row.c.clone(),
            ));
        }
        for cusp in 0..cusps {
            if filled[cusp] {
                continue;
            }
            let m = meridians[cusp].unwrap();
            let l = longitudes[cusp].unwrap();
            combined.push(CombinedRow::from_raw(
                RowClass::UnfilledMeridian { cusp },
                m.a.clone(),
                m.b.clone(),
                m.c.clone(),
            ));
            combined.push(CombinedRow::from_raw(
                RowClass::UnfilledLongitude { cusp },
                l.a.clone(),
                l.b.clone(),
                l.c.clone(),
            ));
        }
        let mut sorted_fillings = fillings.clone();
        sorted_fillings.sort_by_key(|f| f.cusp);
        for f in &sorted_fillings {
            let m = meridians[f.cusp].unwrap();
            let l = longitudes[f.cusp].unwrap();
            let comb = |mv: &[i64], lv: &[i64]| -> Vec<i64> {
                mv.iter().zip(lv).map(|(x, y)| f.p * x + f.q * y).collect()
            };
            combined.push(CombinedRow::from_raw(
                RowClass::Filled { cusp: f.cusp },
                comb(&m.a, &l.a),
                comb(&m.b, &l.b),
                comb(&m.c, &l.c),
            ));
        }

        Ok(GluingSystem {
            name,
            n,
            k,
            h,
            rows: combined,
            fillings: sorted_fillings,
            approx_solution: approx_solution.map(|v| v.iter().map(|z| (z[0], z[1])).collect()),
        })
    }

    /// The `(n + 2k + h) × 2n` coefficient matrix with row `m` equal to
    /// `(alpha_1..alpha_n, beta_1..beta_n)`.
    pub fn lambda_matrix(&self) -> PointMatrix {
        let mut data = Vec::with_capacity(self.rows.len() * 2 * self.n);
        for row in &self.rows {
            data.extend(row.alpha.iter().map(|&v| v as f64));
            data.extend(row.beta.iter().map(|&v| v as f64));
        }
        PointMatrix::new(self.rows.len(), 2 * self.n, data)
            .expect("combined rows have uniform width")
    }

    /// Indices of the rows that must be in every selection: all filled-cusp
    /// rows plus the meridian row of each unfilled cusp.
    pub fn mandatory_rows(&self) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                matches!(
                    r.class,
                    RowClass::Filled { .. } | RowClass::UnfilledMeridian { .. }
                )
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Indices of the edge rows, the candidate pool for completing the
    /// selection to full rank.
    pub fn edge_row_indices(&self) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_edge())
            .map(|(i, _)| i)
            .collect()
    }
}
