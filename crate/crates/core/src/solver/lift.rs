//! Elementary thresholds and lifting to one more dimension.

use super::ThresholdSolution;
use crate::cheb::cos_level;
use crate::error::{Error, Result};
use crate::gfun::check_kappa;

/// Sorted, deduplicated products `cos(j_1 pi/kappa) .. cos(j_d pi/kappa)`,
/// `0 <= j_q <= kappa`.
pub fn theta0_set(kappa: u32, d: u32) -> Result<Vec<f64>> {
    check_kappa(kappa)?;
    if d != 2 && d != 3 {
        return Err(Error::InvalidInput(format!("d must be 2 or 3, got {d}")));
    }
    let cosines: Vec<f64> = (0..=kappa as i64).map(|j| cos_level(kappa, j)).collect();
    let mut prods = cosines.clone();
    for _ in 1..d {
        let mut next = Vec::with_capacity(prods.len() * cosines.len());
        for p in &prods {
            for c in &cosines {
                next.push(p * c);
            }
        }
        prods = next;
    }
    prods.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<f64> = Vec::new();
    for v in prods {
        match out.last() {
            Some(&last) if (v - last).abs() <= 1e-12 => {}
            _ => out.push(if v == 0.0 { 0.0 } else { v }),
        }
    }
    Ok(out)
}

/// Threshold in dimension `d + 1` obtained by appending the constant
/// coordinate `cos(j pi / kappa)`; the energy scales by the same factor and
/// the weights are unchanged.
pub fn lift_threshold(sol: &ThresholdSolution, j: u32) -> Result<ThresholdSolution> {
    if j > sol.kappa {
        return Err(Error::InvalidInput(format!("j = {j} exceeds kappa")));
    }
    let c = cos_level(sol.kappa, j as i64);
    if c == 0.0 {
        return Err(Error::ZeroFactor { j });
    }
    let mut out = sol.clone();
    out.energy *= c;
    out.lifted.push(c);
    Ok(out)
}
