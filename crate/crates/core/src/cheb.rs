//! Chebyshev polynomials of the first and second kind.
//!
//! Everything is evaluated with the three-term recurrence. The monotone
//! pieces of `T_kappa` between consecutive extrema are called wells; well `j`
//! is the interval `(cos(j pi / kappa), cos((j - 1) pi / kappa))`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Distance from +-1 below which `cheb_u_prime` uses the limit value.
pub const U_PRIME_LIMIT_BAND: f64 = 1e-8;

/// Stopping rule for bisection on a monotone branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootOpts {
    /// Accepted defect on T-values.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RootOpts {
    fn default() -> Self {
        RootOpts { tol: 1e-13, max_iter: 200 }
    }
}

/// `T_n(x)`.
pub fn cheb_t(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut a, mut b) = (1.0, x);
    for _ in 1..n {
        let c = 2.0 * x * b - a;
        a = b;
        b = c;
    }
    b
}

/// `U_n(x)`. Exact limit values `(n + 1)(+-1)^n` at the endpoints.
pub fn cheb_u(n: u32, x: f64) -> f64 {
    if x == 1.0 {
        return (n + 1) as f64;
    }
    if x == -1.0 {
        let v = (n + 1) as f64;
        return if n % 2 == 0 { v } else { -v };
    }
    if n == 0 {
        return 1.0;
    }
    let (mut a, mut b) = (1.0, 2.0 * x);
    for _ in 1..n {
        let c = 2.0 * x * b - a;
        a = b;
        b = c;
    }
    b
}

/// Fills `out[k] = U_k(x)` for `k < out.len()`.
pub fn cheb_u_table(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = 2.0 * x;
    }
    for k in 2..out.len() {
        out[k] = 2.0 * x * out[k - 1] - out[k - 2];
    }
}

/// Fills `out[k] = T_k(x)` for `k < out.len()`.
pub fn cheb_t_table(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = x;
    }
    for k in 2..out.len() {
        out[k] = 2.0 * x * out[k - 1] - out[k - 2];
    }
}

/// `T_kappa'(x) = kappa U_{kappa-1}(x)`.
pub fn cheb_t_prime(kappa: u32, x: f64) -> f64 {
    if kappa == 0 {
        return 0.0;
    }
    kappa as f64 * cheb_u(kappa - 1, x)
}

/// Derivative of `U_{kappa-1}` at `x`.
pub fn cheb_u_prime(kappa: u32, x: f64) -> f64 {
    if kappa <= 1 {
        return 0.0;
    }
    let k = kappa as f64;
    // U_{k-1}'(1) = (k-1) k (k+1) / 3, and U_{k-1}' has parity of k
    let at_one = (k - 1.0) * k * (k + 1.0) / 3.0;
    if (x - 1.0).abs() < U_PRIME_LIMIT_BAND {
        return at_one;
    }
    if (x + 1.0).abs() < U_PRIME_LIMIT_BAND {
        return if kappa % 2 == 0 { at_one } else { -at_one };
    }
    (k * cheb_t(kappa, x) - x * cheb_u(kappa - 1, x)) / (x * x - 1.0)
}

/// `[f, g](x, y) = f(x) g(y) - f(y) g(x)`.
pub fn bracket(fx: f64, fy: f64, gx: f64, gy: f64) -> f64 {
    fx * gy - fy * gx
}

/// `cos(j pi / kappa)`, with exact zero at `j = kappa / 2`.
pub fn cos_level(kappa: u32, j: i64) -> f64 {
    let k = kappa as i64;
    if k > 0 && (2 * j).rem_euclid(2 * k) == k {
        return 0.0;
    }
    (j as f64 * PI / kappa as f64).cos()
}

/// A monotone piece of `T_kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Well {
    pub kappa: u32,
    pub j: u32,
}

impl Well {
    pub fn new(kappa: u32, j: u32) -> Result<Self> {
        if kappa < 2 || kappa % 2 != 0 {
            return Err(Error::InvalidKappa(kappa));
        }
        if j < 1 || j > kappa {
            return Err(Error::InvalidInput(format!(
                "well index {j} outside 1..={kappa}"
            )));
        }
        Ok(Well { kappa, j })
    }

    /// `(cos(j pi / kappa), cos((j - 1) pi / kappa))`.
    pub fn endpoints(&self) -> (f64, f64) {
        (
            cos_level(self.kappa, self.j as i64),
            cos_level(self.kappa, self.j as i64 - 1),
        )
    }

    /// `T_kappa` increases on the well iff `j` is odd.
    pub fn increasing(&self) -> bool {
        self.j % 2 == 1
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        let (a, b) = self.endpoints();
        x >= a - slack && x <= b + slack
    }

    /// The well containing `x`, for `x` in `[-1, 1]`.
    pub fn containing(kappa: u32, x: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("{x} outside [-1, 1]")));
        }
        let theta = x.acos() * kappa as f64 / PI;
        let j = (theta.floor() as u32 + 1).clamp(1, kappa);
        Well::new(kappa, j)
    }
}

/// The point of `well` where `T_kappa` equals `y`, by bisection.
pub fn inv_t_on_well(well: Well, y: f64, opts: RootOpts) -> Result<f64> {
    if !(y >= -1.0 - opts.tol && y <= 1.0 + opts.tol) {
        return Err(Error::BranchRange {
            kappa: well.kappa,
            j: well.j,
            y,
        });
    }
    let (mut a, mut b) = well.endpoints();
    let sign = if well.increasing() { 1.0 } else { -1.0 };
    let f = |x: f64| sign * (cheb_t(well.kappa, x) - y);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa >= 0.0 {
        return Ok(a);
    }
    if fb <= 0.0 {
        return Ok(b);
    }
    for _ in 0..opts.max_iter {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm < 0.0 {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    let x = if -fa <= fb { a } else { b };
    if (cheb_t(well.kappa, x) - y).abs() > opts.tol.max(1e-15) * 1e3 {
        return Err(Error::NoConvergence {
            what: "inverse T on well".into(),
            iterations: opts.max_iter,
        });
    }
    Ok(x)
}
