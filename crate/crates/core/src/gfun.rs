//! The commutator polynomials `g_{j kappa}^E` in dimensions 2 and 3 and
//! their linear combination `G = sum rho_q g_{j_q kappa}`.

use serde::{Deserialize, Serialize};

use crate::cheb::{cheb_t, cheb_u, RootOpts};
use crate::error::{Error, Result};

/// Slack allowed on `|E/x| <= 1` and `|x| <= 1` for round-off in computed
/// coordinates.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// Model-wide parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub kappa: u32,
    pub dimension: u32,
    pub tol_root: f64,
    pub max_iter: usize,
    pub tol_sign: f64,
    pub n_e: usize,
    pub n_x: usize,
    pub n_y: usize,
}

impl ModelConfig {
    pub fn new(kappa: u32, dimension: u32) -> Result<Self> {
        let cfg = ModelConfig {
            kappa,
            dimension,
            tol_root: 1e-13,
            max_iter: 200,
            tol_sign: 1e-9,
            n_e: 2001,
            n_x: 4001,
            n_y: 801,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_kappa(self.kappa)?;
        if self.dimension != 2 && self.dimension != 3 {
            return Err(Error::InvalidInput(format!(
                "dimension must be 2 or 3, got {}",
                self.dimension
            )));
        }
        if !(self.tol_root > 0.0 && self.tol_sign > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        if self.n_e < 2 || self.n_x < 2 || self.n_y < 2 {
            return Err(Error::InvalidInput("grids need at least 2 points".into()));
        }
        Ok(())
    }

    pub fn root_opts(&self) -> RootOpts {
        RootOpts {
            tol: self.tol_root,
            max_iter: self.max_iter,
        }
    }
}

pub fn check_kappa(kappa: u32) -> Result<()> {
    if kappa < 2 || kappa % 2 != 0 {
        Err(Error::InvalidKappa(kappa))
    } else {
        Ok(())
    }
}

/// `A = sum_q rho_q A_{j_q kappa}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugateOperator {
    pub kappa: u32,
    pub sigma: Vec<u32>,
    pub rho: Vec<f64>,
}

impl ConjugateOperator {
    pub fn new(kappa: u32, sigma: Vec<u32>, rho: Vec<f64>) -> Result<Self> {
        let op = ConjugateOperator { kappa, sigma, rho };
        op.validate()?;
        Ok(op)
    }

    /// `sigma = {1}`, `rho = {1}`.
    pub fn trivial(kappa: u32) -> Result<Self> {
        Self::new(kappa, vec![1], vec![1.0])
    }

    pub fn validate(&self) -> Result<()> {
        check_kappa(self.kappa)?;
        validate_sigma(&self.sigma)?;
        if self.rho.len() != self.sigma.len() {
            return Err(Error::DimensionMismatch {
                expected: self.sigma.len(),
                got: self.rho.len(),
            });
        }
        if self.rho[0] != 1.0 {
            return Err(Error::InvalidInput("rho[0] must be 1".into()));
        }
        Ok(())
    }

    /// Same operator with every coefficient multiplied by `lambda`. The
    /// result no longer has `rho[0] = 1`.
    pub fn scaled(&self, lambda: f64) -> Self {
        ConjugateOperator {
            kappa: self.kappa,
            sigma: self.sigma.clone(),
            rho: self.rho.iter().map(|r| r * lambda).collect(),
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.sigma.iter().max().copied().unwrap_or(0) * self.kappa
    }

    /// `h(x) = m(x) sum_q rho_q U_{j_q kappa - 1}(x)`.
    pub fn h(&self, x: f64) -> f64 {
        let (s, _) = self.u_t_sums(x, false);
        m(x) * s
    }

    /// `h(x)` and `h'(x) = -sum_q rho_q (x U_{N-1}(x) + N T_N(x))`.
    pub fn h_and_prime(&self, x: f64) -> (f64, f64) {
        let (s, st) = self.u_t_sums(x, true);
        (m(x) * s, -(x * s + st))
    }

    // sum rho U_{N-1}(x) and sum rho N T_N(x), N = j kappa, in one pass
    fn u_t_sums(&self, x: f64, want_t: bool) -> (f64, f64) {
        let mut su = 0.0;
        let mut st = 0.0;
        let (mut u_prev, mut u) = (0.0, 1.0); // U_{-1}, U_0
        let mut k = 0u32; // u holds U_k
        for (&j, &r) in self.sigma.iter().zip(&self.rho) {
            let target = j * self.kappa - 1;
            while k < target {
                let next = 2.0 * x * u - u_prev;
                u_prev = u;
                u = next;
                k += 1;
            }
            su += r * u;
            if want_t {
                // T_N = U_N - x U_{N-1} = x U_{N-1} - U_{N-2}
                let t = x * u - u_prev;
                st += r * (j * self.kappa) as f64 * t;
            }
        }
        (su, st)
    }
}

pub fn validate_sigma(sigma: &[u32]) -> Result<()> {
    if sigma.is_empty() {
        return Err(Error::InvalidInput("sigma must be non-empty".into()));
    }
    if sigma[0] != 1 {
        return Err(Error::InvalidInput("sigma must start with 1".into()));
    }
    if sigma.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "sigma must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// `m(x) = 1 - x^2`.
pub fn m(x: f64) -> f64 {
    1.0 - x * x
}

fn check_2d(e: f64, x: f64) -> Result<f64> {
    if x == 0.0 || !x.is_finite() || !e.is_finite() {
        return Err(Error::Domain(format!("x = {x}, E = {e}")));
    }
    let z = e / x;
    if z.abs() > 1.0 + DOMAIN_SLACK || x.abs() > 1.0 + DOMAIN_SLACK {
        return Err(Error::Domain(format!("|E/x| = {} with x = {x}", z.abs())));
    }
    Ok(z)
}

fn check_3d(e: f64, x: f64, y: f64) -> Result<f64> {
    if x == 0.0 || y == 0.0 || !x.is_finite() || !y.is_finite() {
        return Err(Error::Domain(format!("x = {x}, y = {y}")));
    }
    let z = e / (x * y);
    let lim = 1.0 + DOMAIN_SLACK;
    if x.abs() > lim || y.abs() > lim || z.abs() > lim {
        return Err(Error::Domain(format!(
            "point ({x}, {y}) outside the surface domain for E = {e}"
        )));
    }
    Ok(z)
}

/// `g_{j kappa}^E(x)` in dimension 2.
pub fn g2(e: f64, j: u32, kappa: u32, x: f64) -> Result<f64> {
    let z = check_2d(e, x)?;
    let n = j * kappa;
    Ok(z * m(x) * cheb_u(n - 1, x) + x * m(z) * cheb_u(n - 1, z))
}

/// `d/dx g_{j kappa}^E(x)` in dimension 2.
pub fn g2_prime(e: f64, j: u32, kappa: u32, x: f64) -> Result<f64> {
    let z = check_2d(e, x)?;
    let n = j * kappa;
    let nf = n as f64;
    Ok(-(z / x) * cheb_u(n - 1, x) - nf * z * cheb_t(n, x)
        + cheb_u(n - 1, z)
        + nf * z * cheb_t(n, z))
}

/// `g_{j kappa}^E(x, y)` in dimension 3.
pub fn g3(e: f64, j: u32, kappa: u32, x: f64, y: f64) -> Result<f64> {
    let z = check_3d(e, x, y)?;
    let n = j * kappa;
    Ok((e / x) * m(x) * cheb_u(n - 1, x)
        + (e / y) * m(y) * cheb_u(n - 1, y)
        + x * y * m(z) * cheb_u(n - 1, z))
}

/// `G^E(x)` in dimension 2.
pub fn big_g(op: &ConjugateOperator, e: f64, x: f64) -> Result<f64> {
    let z = check_2d(e, x)?;
    Ok(z * op.h(x) + x * op.h(z))
}

/// `G^E(x, y)` in dimension 3.
pub fn big_g3(op: &ConjugateOperator, e: f64, x: f64, y: f64) -> Result<f64> {
    let z = check_3d(e, x, y)?;
    Ok((e / x) * op.h(x) + (e / y) * op.h(y) + x * y * op.h(z))
}

/// `d/dx G^E(x)` in dimension 2.
pub fn big_g_prime(op: &ConjugateOperator, e: f64, x: f64) -> Result<f64> {
    let z = check_2d(e, x)?;
    let (hx, dhx) = op.h_and_prime(x);
    let (hz, dhz) = op.h_and_prime(z);
    Ok(-(z / x) * hx + z * dhx + hz - z * dhz)
}
