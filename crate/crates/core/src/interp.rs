//! Band-wise interpolation systems for the coefficients `rho` and the search
//! over index sets.
//!
//! On band `n`, `(E_n, E_{n-1})`, the operator must make `G` vanish (and be
//! stationary) at the chain points of both endpoint thresholds. With
//! `|sigma| = 2n` and `rho_kappa = 1` this gives a square system of size
//! `2n - 1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cheb::RootOpts;
use crate::error::{Error, Result};
use crate::gfun::{big_g, big_g_prime, g2, g2_prime, validate_sigma, ConjugateOperator};
use crate::linalg;
use crate::scan::{check_band, PositivityReport, ScanConfig, Witness};
use crate::solver::{j2_upper_end, solve_j2, ThresholdSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowKind {
    /// `G(X_q) = 0`.
    Value,
    /// `G'(X_q) = 0`.
    Derivative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// `E_n`.
    Left,
    /// `E_{n-1}`.
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub kind: RowKind,
    pub side: Side,
    pub q: usize,
    pub energy: f64,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolationSystem {
    pub kappa: u32,
    pub n: usize,
    pub sigma: Vec<u32>,
    pub rows: Vec<Constraint>,
    /// Columns are `sigma[1..]`; the `rho_kappa = 1` column is in `rhs`.
    pub matrix: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub rank_estimate: usize,
}

/// `(kind, side, q)` of every row for band `n`.
pub fn row_layout(n: usize) -> Vec<(RowKind, Side, usize)> {
    use RowKind::*;
    use Side::*;
    let mut rows = Vec::with_capacity(2 * n);
    let push = |rows: &mut Vec<_>, kind, side, range: std::ops::RangeInclusive<usize>| {
        for q in range {
            rows.push((kind, side, q));
        }
    };
    if n % 2 == 1 {
        let h = (n - 1) / 2;
        push(&mut rows, Value, Left, 0..=h);
        push(&mut rows, Derivative, Left, 1..=h);
        if n >= 3 {
            push(&mut rows, Value, Right, 0..=(n - 3) / 2);
        }
        push(&mut rows, Derivative, Right, 1..=h);
    } else {
        let h = n / 2;
        push(&mut rows, Value, Left, 0..=h - 1);
        push(&mut rows, Derivative, Left, 1..=h);
        push(&mut rows, Value, Right, 0..=h - 1);
        push(&mut rows, Derivative, Right, 1..=h - 1);
    }
    rows
}

/// Endpoint thresholds `(E_n, E_{n-1})` of band `n`; `E_0 = cos(pi/kappa)`.
pub fn band_endpoints(kappa: u32, n: usize, opts: RootOpts) -> Result<(ThresholdSolution, ThresholdSolution)> {
    if n == 0 {
        return Err(Error::InvalidInput("band index must be >= 1".into()));
    }
    let left = solve_j2(kappa, n, opts)?;
    let right = if n == 1 {
        j2_upper_end(kappa)
    } else {
        solve_j2(kappa, n - 1, opts)?
    };
    Ok((left, right))
}

pub fn build_system(
    kappa: u32,
    n: usize,
    left: &ThresholdSolution,
    right: &ThresholdSolution,
    sigma: &[u32],
) -> Result<InterpolationSystem> {
    validate_sigma(sigma)?;
    if sigma.len() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            got: sigma.len(),
        });
    }
    if left.n != n || right.n + 1 != n || left.kappa != kappa || right.kappa != kappa {
        return Err(Error::InvalidInput(format!(
            "endpoints must be thresholds {n} and {} for kappa = {kappa}",
            n - 1
        )));
    }
    let mut rows = Vec::new();
    let mut matrix = Vec::new();
    let mut rhs = Vec::new();
    for (kind, side, q) in row_layout(n) {
        let sol = match side {
            Side::Left => left,
            Side::Right => right,
        };
        let (e, x) = (sol.energy, sol.coords[q]);
        let eval = |j: u32| match kind {
            RowKind::Value => g2(e, j, kappa, x),
            RowKind::Derivative => g2_prime(e, j, kappa, x),
        };
        let row: Result<Vec<f64>> = sigma[1..].iter().map(|&j| eval(j)).collect();
        matrix.push(row?);
        rhs.push(-eval(sigma[0])?);
        rows.push(Constraint {
            kind,
            side,
            q,
            energy: e,
            x,
        });
    }
    let rank_estimate = linalg::rank_estimate(&matrix, linalg::RANK_TOL);
    Ok(InterpolationSystem {
        kappa,
        n,
        sigma: sigma.to_vec(),
        rows,
        matrix,
        rhs,
        rank_estimate,
    })
}

impl InterpolationSystem {
    /// `max_i |(M rho' - rhs)_i|` for the operator's trailing coefficients.
    pub fn residual(&self, op: &ConjugateOperator) -> f64 {
        linalg::residual(&self.matrix, &op.rho[1..], &self.rhs)
    }

    pub fn scale(&self) -> f64 {
        linalg::max_abs(&self.matrix).max(self.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs())))
    }
}

/// Pivoted solve with `rho_kappa = 1`.
pub fn solve_rho(system: &InterpolationSystem) -> Result<ConjugateOperator> {
    let size = 2 * system.n - 1;
    if system.rank_estimate < size {
        return Err(Error::RankDeficient {
            nullity: size - system.rank_estimate,
        });
    }
    let solved = linalg::solve(&system.matrix, &system.rhs, linalg::RANK_TOL)?;
    let mut rho = vec![1.0];
    rho.extend(solved.x);
    let op = ConjugateOperator::new(system.kappa, system.sigma.clone(), rho)?;
    let res = system.residual(&op);
    if !(res <= 1e-9 * system.scale().max(1.0)) {
        return Err(Error::NoConvergence {
            what: format!("interpolation solve (residual {res:e})"),
            iterations: 1,
        });
    }
    Ok(op)
}

/// Largest `|G|` and `|G'|` over the constraint points, each row evaluated
/// with the operator directly rather than through the matrix.
pub fn constraint_defects(op: &ConjugateOperator, system: &InterpolationSystem) -> Result<(f64, f64)> {
    let (mut dv, mut dd) = (0.0f64, 0.0f64);
    for r in &system.rows {
        match r.kind {
            RowKind::Value => dv = dv.max(big_g(op, r.energy, r.x)?.abs()),
            RowKind::Derivative => dd = dd.max(big_g_prime(op, r.energy, r.x)?.abs()),
        }
    }
    Ok((dv, dd))
}

/// Solved operator for band `n` and the system behind it.
pub fn interpolate_band(
    kappa: u32,
    n: usize,
    sigma: &[u32],
    opts: RootOpts,
) -> Result<(ConjugateOperator, InterpolationSystem)> {
    let (left, right) = band_endpoints(kappa, n, opts)?;
    let system = build_system(kappa, n, &left, &right, sigma)?;
    let op = solve_rho(&system)?;
    Ok((op, system))
}

/// Index sets of the reference coefficient tables (kappa 4 and 6,
/// bands 1 to 5).
pub fn reference_sigma(kappa: u32, n: usize) -> Option<Vec<u32>> {
    if kappa != 4 && kappa != 6 {
        return None;
    }
    match n {
        1 => Some(vec![1, 2]),
        2 => Some(vec![1, 2, 3, 7]),
        3 => Some((1..=6).collect()),
        4 => Some((1..=7).chain([if kappa == 4 { 16 } else { 15 }]).collect()),
        5 => Some((1..=10).collect()),
        _ => None,
    }
}

/// Outcome of screening one index set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Accepted {
        operator: ConjugateOperator,
        report: PositivityReport,
    },
    Rejected {
        reason: String,
        /// Point with `G < -tol_sign`, when the scan found one.
        witness: Option<Witness>,
        operator: Option<ConjugateOperator>,
    },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub sigma: Vec<u32>,
    pub verdict: Verdict,
}

/// Solves band `n` with `sigma` and scans the band interior in dimension 2.
pub fn evaluate_sigma(kappa: u32, n: usize, sigma: &[u32], scan: &ScanConfig, opts: RootOpts) -> Result<Candidate> {
    let (left, right) = band_endpoints(kappa, n, opts)?;
    evaluate_with_endpoints(&left, &right, sigma, scan)
}

fn evaluate_with_endpoints(
    left: &ThresholdSolution,
    right: &ThresholdSolution,
    sigma: &[u32],
    scan: &ScanConfig,
) -> Result<Candidate> {
    let (kappa, n) = (left.kappa, left.n);
    let system = build_system(kappa, n, left, right, sigma)?;
    let verdict = match solve_rho(&system) {
        Err(e) => Verdict::Rejected {
            reason: e.to_string(),
            witness: None,
            operator: None,
        },
        Ok(op) => {
            let report = check_band(&op, 2, left.energy, right.energy, scan)?;
            if report.covers_window() {
                Verdict::Accepted {
                    operator: op,
                    report,
                }
            } else {
                let reason = match &report.witness {
                    Some(w) => format!("G = {:e} at E = {}, x = {:?}", w.value, w.energy, w.point),
                    None => "G not strictly positive beyond tol_sign".into(),
                };
                Verdict::Rejected {
                    reason,
                    witness: report.witness.clone(),
                    operator: Some(op),
                }
            }
        }
    };
    Ok(Candidate {
        sigma: sigma.to_vec(),
        verdict,
    })
}

/// Pool sorted by (largest multiplier, sum of multipliers); stable.
pub fn order_pool(pool: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut p = pool.to_vec();
    p.sort_by_key(|s| (s.iter().max().copied().unwrap_or(0), s.iter().sum::<u32>()));
    p
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaSearch {
    pub sigma: Vec<u32>,
    pub operator: ConjugateOperator,
    pub report: PositivityReport,
    /// Candidates screened before the accepted one, in pool order.
    pub rejected: Vec<Candidate>,
}

/// First index set, in pool order, whose operator is strictly positive on
/// band `n`. Candidates are screened in parallel batches; the answer does
/// not depend on completion order.
pub fn search_sigma(kappa: u32, n: usize, pool: &[Vec<u32>], scan: &ScanConfig, opts: RootOpts) -> Result<SigmaSearch> {
    if pool.is_empty() {
        return Err(Error::InvalidInput("empty sigma pool".into()));
    }
    for s in pool {
        validate_sigma(s)?;
        if s.len() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                got: s.len(),
            });
        }
    }
    let (left, right) = band_endpoints(kappa, n, opts)?;
    let ordered = order_pool(pool);
    let batch = rayon::current_num_threads().max(1);
    let mut rejected = Vec::new();
    for chunk in ordered.chunks(batch) {
        let results: Result<Vec<Candidate>> = chunk
            .par_iter()
            .map(|s| evaluate_with_endpoints(&left, &right, s, scan))
            .collect();
        for c in results? {
            match c.verdict {
                Verdict::Accepted { operator, report } => {
                    return Ok(SigmaSearch {
                        sigma: c.sigma,
                        operator,
                        report,
                        rejected,
                    })
                }
                Verdict::Rejected { .. } => rejected.push(c),
            }
        }
    }
    Err(Error::NoValidSigma(
        rejected
            .into_iter()
            .map(|c| {
                let reason = match c.verdict {
                    Verdict::Rejected { reason, .. } => reason,
                    Verdict::Accepted { .. } => unreachable!(),
                };
                (c.sigma, reason)
            })
            .collect(),
    ))
}
