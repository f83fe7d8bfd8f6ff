//! Single-equation form of the J2 sequence for kappa = 4, 6 and the
//! log-log convergence fit.

use serde::{Deserialize, Serialize};

use super::{bisect_sign, BRACKET_SHRINK};
use crate::cheb::cos_level;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    /// `E_{2n} = f_E^{(n)}(cos(pi / kappa))`.
    Even,
    /// `E_{2n-1} = f_E^{(n)}(sqrt(E))`.
    Odd,
}

/// Level inversion composed with the mirror, closed form for kappa 4 and 6.
fn f_step(kappa: u32, e: f64, x: f64) -> Option<f64> {
    let z = e / x;
    if !(z.abs() <= 1.0) {
        return None;
    }
    let s = (1.0 - z * z).sqrt();
    match kappa {
        4 => Some(s),
        6 => Some(0.5 * (z + 3f64.sqrt() * s)),
        _ => None,
    }
}

/// Index of the returned term in the J2 sequence.
pub fn cf_index(n: usize, parity: Parity) -> usize {
    match parity {
        Parity::Even => 2 * n,
        Parity::Odd => 2 * n - 1,
    }
}

/// Solves the fixed-point equation for `E_{2n}` or `E_{2n-1}` by bisection.
pub fn continued_fraction_solve(kappa: u32, n: usize, parity: Parity) -> Result<f64> {
    if kappa != 4 && kappa != 6 {
        return Err(Error::InvalidInput(format!(
            "continued fraction form exists for kappa 4 and 6, got {kappa}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    let c = cos_level(kappa, 1);
    let defect = |e: f64| -> f64 {
        let mut x = match parity {
            Parity::Even => c,
            Parity::Odd => e.sqrt(),
        };
        for _ in 0..n {
            match f_step(kappa, e, x) {
                Some(v) => x = v,
                // the orbit leaves the surface: E is above the root
                None => return f64::NEG_INFINITY,
            }
        }
        x - e
    };
    let (lo, hi) = (c * c, c);
    let w = hi - lo;
    bisect_sign(defect, lo + BRACKET_SHRINK * w, hi - BRACKET_SHRINK * w, 400)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub kappa: u32,
    /// `(ln n, ln(E_{2n} - cos^2(pi/kappa)))`.
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
}

/// Least-squares line through the points for `n = 10, 20, .., n_max`.
pub fn convergence_study(kappa: u32, n_max: usize) -> Result<ConvergenceStudy> {
    if n_max < 10 {
        return Err(Error::InvalidInput("N must be >= 10".into()));
    }
    let c2 = cos_level(kappa, 1).powi(2);
    let mut points = Vec::new();
    for n in (10..=n_max).step_by(10) {
        let e = continued_fraction_solve(kappa, n, Parity::Even)?;
        let gap = e - c2;
        if !(gap > 0.0) {
            return Err(Error::NoConvergence {
                what: format!("E_{} not above its limit", 2 * n),
                iterations: 0,
            });
        }
        points.push(((n as f64).ln(), gap.ln()));
    }
    let (slope, intercept) = least_squares(&points);
    Ok(ConvergenceStudy {
        kappa,
        points,
        slope,
        intercept,
    })
}

pub fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// One row of a sequence export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceRow {
    pub n: usize,
    pub energy: f64,
    pub gap_to_limit: f64,
}

/// `(n, E_n, |E_n - limit|)` rows.
pub fn sequence_rows(energies: &[(usize, f64)], limit: f64) -> Vec<SequenceRow> {
    energies
        .iter()
        .map(|&(n, e)| SequenceRow {
            n,
            energy: e,
            gap_to_limit: (e - limit).abs(),
        })
        .collect()
}
