//! Small dense systems: Gaussian elimination with partial pivoting.

use crate::error::{Error, Result};

/// Relative pivot tolerance used for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// Result of a pivoted solve.
#[derive(Debug, Clone, PartialEq)]
pub struct Solved {
    pub x: Vec<f64>,
    pub rank: usize,
}

/// Number of pivots above `rel_tol * max |a_ij|` after partial-pivot
/// elimination of the rectangular matrix `a`.
pub fn rank_estimate(a: &[Vec<f64>], rel_tol: f64) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut w: Vec<Vec<f64>> = a.to_vec();
    let scale = max_abs(a);
    if scale == 0.0 {
        return 0;
    }
    let tol = rel_tol * scale;
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let (p, v) = (rank..rows)
            .map(|r| (r, w[r][c].abs()))
            .fold((rank, -1.0), |acc, t| if t.1 > acc.1 { t } else { acc });
        if v <= tol {
            continue;
        }
        w.swap(rank, p);
        for r in rank + 1..rows {
            let f = w[r][c] / w[rank][c];
            for k in c..cols {
                w[r][k] -= f * w[rank][k];
            }
        }
        rank += 1;
    }
    rank
}

pub fn max_abs(a: &[Vec<f64>]) -> f64 {
    a.iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Solves the square system `a x = b`. Fails with `RankDeficient` when a
/// pivot falls below `rel_tol * max |a_ij|`.
pub fn solve(a: &[Vec<f64>], b: &[f64], rel_tol: f64) -> Result<Solved> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    if let Some(bad) = a.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    if n == 0 {
        return Ok(Solved {
            x: vec![],
            rank: 0,
        });
    }
    let scale = max_abs(a);
    let tol = rel_tol * scale;
    let mut w: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();
    let mut rank = 0;
    for c in 0..n {
        let (p, v) = (c..n)
            .map(|r| (r, w[r][c].abs()))
            .fold((c, -1.0), |acc, t| if t.1 > acc.1 { t } else { acc });
        if !(v > tol) {
            continue;
        }
        rank += 1;
        w.swap(c, p);
        rhs.swap(c, p);
        for r in c + 1..n {
            let f = w[r][c] / w[c][c];
            if f == 0.0 {
                continue;
            }
            for k in c..n {
                w[r][k] -= f * w[c][k];
            }
            rhs[r] -= f * rhs[c];
        }
    }
    if rank < n {
        return Err(Error::RankDeficient { nullity: n - rank });
    }
    let mut x = vec![0.0; n];
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|k| w[c][k] * x[k]).sum();
        x[c] = (rhs[c] - s) / w[c][c];
    }
    Ok(Solved { x, rank })
}

/// `max_i |(a x - b)_i|`.
pub fn residual(a: &[Vec<f64>], x: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(r, bi)| (r.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() - bi).abs())
        .fold(0.0, f64::max)
}
