//! Weights `omega_q` of the linear relation
//! `g(X_m) = sum_q omega_q g(X_q)`, valid for every frequency `j kappa`.

use super::{relation_index, Family, ThresholdSolution};
use crate::cheb::cheb_u;
use crate::error::{Error, Result};
use crate::gfun::{g2, g3, m};
use crate::linalg;

/// Smallest admissible `|m(X) U_{kappa-1}(X)|` in a denominator.
pub const DEGENERATE_FACTOR: f64 = 1e-12;

fn mu(kappa: u32, x: f64) -> f64 {
    m(x) * cheb_u(kappa - 1, x)
}

/// Product formulas for the weights of a cosine-terminated chain.
pub fn omega_closed_form(sol: &ThresholdSolution) -> Result<Vec<f64>> {
    if let Family::Alignment(_) = sol.family {
        return Err(Error::InvalidInput(
            "closed-form product weights need a cosine terminal".into(),
        ));
    }
    let (k, n, x) = (sol.kappa, sol.n, &sol.coords);
    if n == 0 {
        return Ok(vec![]);
    }
    let odd = n % 2 == 1;
    // left block q..=h, right block starts at r0
    let h = if odd { (n - 1) / 2 } else { n / 2 - 1 };
    let r0 = if odd { (n + 1) / 2 } else { n / 2 + 1 };
    let factor = if odd { 2.0 } else { 1.0 };
    for (i, &xi) in x.iter().enumerate().take(h + 1) {
        let v = mu(k, xi);
        if v.abs() < DEGENERATE_FACTOR {
            return Err(Error::DegenerateFactor { index: i, value: v });
        }
    }
    let mut out = Vec::with_capacity(h + 1);
    for q in 0..=h {
        let mut ratio = 1.0;
        for p in q..=h {
            ratio *= x[p] / mu(k, x[p]);
        }
        for p in r0..=n - q {
            ratio *= mu(k, x[p]) / x[p];
        }
        let sign = if (h - q) % 2 == 0 { 1.0 } else { -1.0 };
        out.push(factor * sign * ratio);
    }
    Ok(out)
}

/// Value of `g_{j kappa}` at coordinate `i` in the solution's dimension.
fn g_at(sol: &ThresholdSolution, j: u32, i: usize) -> Result<f64> {
    match sol.lifted.len() {
        0 => g2(sol.energy, j, sol.kappa, sol.coords[i]),
        1 => g3(sol.energy, j, sol.kappa, sol.coords[i], sol.lifted[0]),
        d => Err(Error::InvalidInput(format!(
            "g is implemented for dimensions 2 and 3, not {}",
            d + 2
        ))),
    }
}

/// Solves `M omega = g(X_m)` with `M[r][c] = g_{j_r kappa}(X_c)`.
pub fn omega_matrix_oracle(sol: &ThresholdSolution, j_indices: &[u32]) -> Result<Vec<f64>> {
    let mm = relation_index(sol.n);
    if j_indices.len() != mm {
        return Err(Error::DimensionMismatch {
            expected: mm,
            got: j_indices.len(),
        });
    }
    let mut a = Vec::with_capacity(mm);
    let mut b = Vec::with_capacity(mm);
    for &j in j_indices {
        if j == 0 {
            return Err(Error::InvalidInput("j indices must be positive".into()));
        }
        let row: Result<Vec<f64>> = (0..mm).map(|c| g_at(sol, j, c)).collect();
        a.push(row?);
        b.push(g_at(sol, j, mm)?);
    }
    match linalg::solve(&a, &b, linalg::RANK_TOL) {
        Ok(s) => Ok(s.x),
        Err(Error::RankDeficient { .. }) => Err(Error::SingularSystem),
        Err(e) => Err(e),
    }
}

/// Same as [`omega_matrix_oracle`]; kept for call sites that want the
/// dimension spelled out. Fails if `dim` disagrees with the solution.
pub fn omega_matrix_oracle_dim(
    sol: &ThresholdSolution,
    j_indices: &[u32],
    dim: usize,
) -> Result<Vec<f64>> {
    if dim != sol.dimension() {
        return Err(Error::DimensionMismatch {
            expected: sol.dimension(),
            got: dim,
        });
    }
    omega_matrix_oracle(sol, j_indices)
}

/// `|g_{j kappa}(X_m) - sum_q omega_q g_{j kappa}(X_q)|`.
pub fn linear_relation_defect(sol: &ThresholdSolution, j: u32) -> Result<f64> {
    let mm = relation_index(sol.n);
    let lhs = g_at(sol, j, mm)?;
    let mut rhs = 0.0;
    for (q, w) in sol.omegas.iter().enumerate() {
        rhs += w * g_at(sol, j, q)?;
    }
    Ok((lhs - rhs).abs())
}

/// Printed weights under the alignment terminal `T(X_{n+1}) = T(X_p)`.
pub fn omega_alignment(sol: &ThresholdSolution, p: usize) -> Result<Vec<f64>> {
    let (k, n) = (sol.kappa, sol.n);
    let x = &sol.coords;
    let pp = |a: usize| mu(k, x[a]) / x[a];
    let w = match (n, p) {
        (1, 0) => vec![2.0 * pp(1) / (pp(0) + pp(2))],
        (3, 1) => {
            let d = pp(0) * pp(1) - pp(3) * pp(4);
            vec![-2.0 * pp(2) * pp(3) / d, 2.0 * pp(0) * pp(2) / d]
        }
        (3, 0) => {
            let d = pp(0) * pp(1) + pp(1) * pp(4);
            vec![
                -2.0 * pp(2) * pp(3) / d,
                2.0 * (pp(0) * pp(2) + pp(2) * pp(4)) / d,
            ]
        }
        (2, 0) => vec![pp(2) / (pp(0) + pp(3))],
        (4, 0) => {
            let d = pp(0) * pp(1) + pp(1) * pp(5);
            vec![-pp(3) * pp(4) / d, (pp(0) * pp(3) + pp(3) * pp(5)) / d]
        }
        (4, 1) => {
            let d = pp(0) * pp(1) - pp(4) * pp(5);
            vec![-pp(3) * pp(4) / d, pp(0) * pp(3) / d]
        }
        _ => return Err(Error::UnsupportedPair { n, p }),
    };
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateFactor {
            index: 0,
            value: 0.0,
        });
    }
    Ok(w)
}
