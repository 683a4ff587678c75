//! Interval vectors and matrices, floating-point approximate inversion, and
//! the greedy full-rank row selection used to reduce the gluing system.
//!
//! Nothing here is rigorous on its own: the approximate inverse and the
//! singular-value scoring are plain floating point. Rigor is supplied
//! downstream by the Krawczyk test, which certifies the selected system
//! regardless of how these heuristics behaved.

use crate::error::{Error, Result};
use crate::interval::Interval;

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalVector(pub Vec<Interval>);

impl IntervalVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.0.iter()
    }
}

impl std::ops::Index<usize> for IntervalVector {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Interval>) -> Result<IntervalMatrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                left: data.len(),
                right: rows * cols,
            });
        }
        Ok(IntervalMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Interval {
        self.data[r * self.cols + c]
    }

    /// Entrywise midpoints.
    pub fn mid(&self) -> PointMatrix {
        PointMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mid()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl PointMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<PointMatrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                left: data.len(),
                right: rows * cols,
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { lo: 0.0, hi: 0.0 });
        }
        Ok(PointMatrix { rows, cols, data })
    }

    pub fn identity(n: usize) -> PointMatrix {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        PointMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    /// Plain floating-point matrix-vector product.
    pub fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Rows `idx` of `self` stacked into a new matrix.
    pub fn select_rows(&self, idx: &[usize]) -> PointMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        PointMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }
}

/// Pivot magnitudes below this make the LU factorization meaningless even as
/// a heuristic.
const PIVOT_FLOOR: f64 = 1e-300;

/// Plain floating-point approximate inverse via LU with partial pivoting.
/// No rigor is required here: when the Krawczyk test later succeeds, it
/// proves a posteriori that this matrix was nonsingular.
pub fn approx_inverse(a: &PointMatrix) -> Result<PointMatrix> {
    if a.rows != a.cols {
        return Err(Error::DimensionMismatch {
            left: a.rows,
            right: a.cols,
        });
    }
    let n = a.rows;
    let mut lu = a.data.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let mut pivot_row = k;
        let mut pivot_val = lu[k * n + k].abs();
        for r in (k + 1)..n {
            let v = lu[r * n + k].abs();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = r;
            }
        }
        if pivot_val <= PIVOT_FLOOR {
            return Err(Error::SingularApprox { pivot: pivot_val });
        }
        if pivot_row != k {
            for c in 0..n {
                lu.swap(k * n + c, pivot_row * n + c);
            }
            perm.swap(k, pivot_row);
        }
        for r in (k + 1)..n {
            let m = lu[r * n + k] / lu[k * n + k];
            lu[r * n + k] = m;
            for c in (k + 1)..n {
                lu[r * n + c] -= m * lu[k * n + c];
            }
        }
    }

    // solve for each unit vector
    let mut inv = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    for e in 0..n {
        for i in 0..n {
            col[i] = if perm[i] == e { 1.0 } else { 0.0 };
        }
        for i in 0..n {
            for j in 0..i {
                col[i] -= lu[i * n + j] * col[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                col[i] -= lu[i * n + j] * col[j];
            }
            col[i] /= lu[i * n + i];
        }
        for i in 0..n {
            inv[i * n + e] = col[i];
        }
    }
    PointMatrix::new(n, n, inv)
}

/// Rigorous interval matrix-vector product.
pub fn interval_mat_vec(a: &IntervalMatrix, v: &IntervalVector) -> Result<IntervalVector> {
    if a.cols != v.len() {
        return Err(Error::DimensionMismatch {
            left: a.cols,
            right: v.len(),
        });
    }
    let mut out = Vec::with_capacity(a.rows);
    for i in 0..a.rows {
        let mut acc = Interval::ZERO;
        for j in 0..a.cols {
            acc = acc.add(&a.get(i, j).mul(&v[j])?)?;
        }
        out.push(acc);
    }
    Ok(IntervalVector(out))
}

/// Rigorous product of a point matrix with an interval vector.
pub fn point_mat_interval_vec(a: &PointMatrix, v: &IntervalVector) -> Result<IntervalVector> {
    if a.cols != v.len() {
        return Err(Error::DimensionMismatch {
            left: a.cols,
            right: v.len(),
        });
    }
    let mut out = Vec::with_capacity(a.rows);
    for i in 0..a.rows {
        let mut acc = Interval::ZERO;
        for j in 0..a.cols {
            acc = acc.add(&Interval::point(a.get(i, j))?.mul(&v[j])?)?;
        }
        out.push(acc);
    }
    Ok(IntervalVector(out))
}

/// Rigorous product of a point matrix with an interval matrix.
pub fn point_mat_interval_mat(a: &PointMatrix, b: &IntervalMatrix) -> Result<IntervalMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            left: a.cols,
            right: b.rows,
        });
    }
    let mut data = Vec::with_capacity(a.rows * b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = Interval::ZERO;
            for k in 0..a.cols {
                acc = acc.add(&Interval::point(a.get(i, k))?.mul(&b.get(k, j))?)?;
            }
            data.push(acc);
        }
    }
    IntervalMatrix::new(a.rows, b.cols, data)
}

/// `max_i |x_i|`. Exact, since absolute value and max do not round.
pub fn inf_norm_point(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Smallest singular value of `a`, estimated by one-sided Jacobi iteration
/// on the transposed column set. Plain floating point, heuristic only.
pub fn smallest_singular_value(a: &PointMatrix) -> f64 {
    let r = a.rows;
    let c = a.cols;
    if r == 0 {
        return f64::INFINITY;
    }
    // columns of b = rows of a, as vectors of length c
    let mut b: Vec<Vec<f64>> = (0..r)
        .map(|i| (0..c).map(|j| a.get(i, j)).collect())
        .collect();

    let tol = 1e-14;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..r {
            for q in (p + 1)..r {
                let app: f64 = b[p].iter().map(|x| x * x).sum();
                let aqq: f64 = b[q].iter().map(|x| x * x).sum();
                let apq: f64 = b[p].iter().zip(&b[q]).map(|(x, y)| x * y).sum();
                if apq.abs() <= tol * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let theta = 0.5 * (2.0 * apq).atan2(app - aqq);
                let (s, co) = theta.sin_cos();
                let (bp, bq) = {
                    let (lo, hi) = b.split_at_mut(q);
                    (&mut lo[p], &mut hi[0])
                };
                for (xp, xq) in bp.iter_mut().zip(bq.iter_mut()) {
                    let (op, oq) = (*xp, *xq);
                    *xp = co * op + s * oq;
                    *xq = -s * op + co * oq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    b.iter()
        .map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(f64::INFINITY, f64::min)
}

/// Greedy full-rank row selection.
///
/// Starts from the `mandatory` rows, then repeatedly adds the candidate row
/// that maximizes the smallest singular value of the growing submatrix
/// (lowest original index wins ties) until `target_rank` rows are selected.
/// Fails if the mandatory block itself scores at or below `delta`, or no
/// candidate can keep the score above `delta`.
pub fn select_rows(
    lambda: &PointMatrix,
    mandatory: &[usize],
    candidates: &[usize],
    target_rank: usize,
    delta: f64,
) -> Result<Vec<usize>> {
    let mut selected: Vec<usize> = mandatory.to_vec();
    if selected.len() > target_rank {
        return Err(Error::RankSelectionFailed { delta });
    }
    if !selected.is_empty() {
        let score = smallest_singular_value(&lambda.select_rows(&selected));
        if score <= delta {
            return Err(Error::RankSelectionFailed { delta });
        }
    }
    let mut pool: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|i| !selected.contains(i))
        .collect();
    pool.sort_unstable();

    while selected.len() < target_rank {
        let mut best: Option<(usize, f64)> = None;
        for &cand in &pool {
            let mut trial = selected.clone();
            trial.push(cand);
            let score = smallest_singular_value(&lambda.select_rows(&trial));
            let better = match best {
                None => score > delta,
                Some((_, s)) => score > s,
            };
            if better {
                best = Some((cand, score));
            }
        }
        match best {
            Some((row, _)) => {
                selected.push(row);
                pool.retain(|&i| i != row);
            }
            None => return Err(Error::RankSelectionFailed { delta }),
        }
    }
    selected.sort_unstable();
    Ok(selected)
}
