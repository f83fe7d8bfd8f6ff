//! Grid scans of `G^E` over the constant-energy surface and extraction of
//! the energy bands on which it keeps a strict sign.
//!
//! `G` is even in every coordinate and `G^{-E} = -G^E`, so scans default to
//! the positive quadrant and positive energies.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfun::{ConjugateOperator, ModelConfig};

/// Zoom steps of the local refinement; each step shrinks the bracket by 4.
const ZOOM_STEPS: usize = 26;
/// Grid local extrema refined per scan.
const REFINE_CANDIDATES: usize = 3;
/// Energies sampled around the weakest point of a band during verification.
const VERIFY_ENERGIES: usize = 7;
/// Grid multiplier used when verifying a band.
const VERIFY_FACTOR: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignMode {
    /// `G > 0` is required.
    Positive,
    /// `G > 0` or `G < 0` on the whole surface; the operator may be negated.
    EitherSign,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub n_e: usize,
    pub n_x: usize,
    pub n_y: usize,
    pub tol_sign: f64,
    /// Width at which band endpoint bisection stops.
    pub endpoint_tol: f64,
    /// Scan every sign quadrant instead of the positive one.
    pub full_domain: bool,
    pub sign_mode: SignMode,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            n_e: 2001,
            n_x: 4001,
            n_y: 801,
            tol_sign: 1e-9,
            endpoint_tol: 1e-4,
            full_domain: false,
            sign_mode: SignMode::Positive,
        }
    }
}

impl ScanConfig {
    pub fn from_model(cfg: &ModelConfig) -> Self {
        ScanConfig {
            n_e: cfg.n_e,
            n_x: cfg.n_x,
            n_y: cfg.n_y,
            tol_sign: cfg.tol_sign,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_e < 1 || self.n_x < 3 || self.n_y < 3 {
            return Err(Error::InvalidInput(
                "grids need n_e >= 1, n_x >= 3, n_y >= 3".into(),
            ));
        }
        if !(self.tol_sign > 0.0) || !(self.endpoint_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Extreme value of `G` and the point where it is attained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub value: f64,
    pub point: Vec<f64>,
}

/// Minimum and maximum of `G` over the surface at one energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySample {
    pub energy: f64,
    pub min: Extremum,
    pub max: Extremum,
}

impl EnergySample {
    /// `1` if `G > tol` everywhere, `-1` if `G < -tol` everywhere (only in
    /// `EitherSign` mode), `0` otherwise.
    pub fn sign_class(&self, tol: f64, mode: SignMode) -> i8 {
        if self.min.value > tol {
            1
        } else if mode == SignMode::EitherSign && self.max.value < -tol {
            -1
        } else {
            0
        }
    }

    /// Distance of `G` from changing sign, signed so that positive means
    /// definite under `mode`.
    pub fn margin(&self, mode: SignMode) -> f64 {
        match mode {
            SignMode::Positive => self.min.value,
            SignMode::EitherSign => self.min.value.max(-self.max.value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub left: f64,
    pub right: f64,
    /// `1` for `G > 0`, `-1` for `G < 0`.
    pub sign: i8,
    /// The weakest grid energy survived a finer re-scan.
    pub verified: bool,
    /// Smallest margin over the band's grid energies.
    pub min_interior_g: f64,
}

/// A point where `G < -tol_sign`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub energy: f64,
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub operator: ConjugateOperator,
    pub dimension: u32,
    pub sign_mode: SignMode,
    pub energy_grid: Vec<f64>,
    pub min_g: Vec<f64>,
    pub max_g: Vec<f64>,
    pub argmin: Vec<Vec<f64>>,
    pub bands: Vec<Band>,
    /// `(n_E, n_x)` or `(n_E, n_x, n_y)`.
    pub grid_resolution: Vec<usize>,
    /// Most negative grid value found, when one is below `-tol_sign`.
    pub witness: Option<Witness>,
}

impl PositivityReport {
    /// True when one verified band covers every grid energy.
    pub fn covers_window(&self) -> bool {
        self.bands.len() == 1 && self.bands[0].verified && {
            let b = &self.bands[0];
            let first = self.energy_grid.first().copied().unwrap_or(f64::NAN);
            let last = self.energy_grid.last().copied().unwrap_or(f64::NAN);
            b.left <= first && b.right >= last
        }
    }
}

fn check_energy(e: f64) -> Result<()> {
    if !(e.abs() < 1.0) || e == 0.0 {
        return Err(Error::InvalidInput(format!(
            "scan energy must satisfy 0 < |E| < 1, got {e}"
        )));
    }
    Ok(())
}

fn check_dimension(d: u32) -> Result<()> {
    if d != 2 && d != 3 {
        return Err(Error::InvalidInput(format!("d must be 2 or 3, got {d}")));
    }
    Ok(())
}

#[inline]
fn g2_at(op: &ConjugateOperator, e: f64, x: f64) -> f64 {
    let z = e / x;
    z * op.h(x) + x * op.h(z)
}

#[inline]
fn g3_at(op: &ConjugateOperator, e: f64, x: f64, y: f64, hy: f64) -> f64 {
    let z = e / (x * y);
    (e / x) * op.h(x) + (e / y) * hy + x * y * op.h(z)
}

fn linspace(a: f64, b: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        b
    } else {
        a + (b - a) * (i as f64) / ((n - 1) as f64)
    }
}

/// Minimizes `sign * f` on `[a, b]` by repeated 8-interval subdivision,
/// staying inside `[lo, hi]`.
fn zoom_1d<F: Fn(f64) -> f64>(f: &F, sign: f64, mut a: f64, mut b: f64, lo: f64, hi: f64) -> (f64, f64) {
    let mut best = (f64::INFINITY, a);
    for _ in 0..ZOOM_STEPS {
        let h = (b - a) / 8.0;
        for k in 0..=8 {
            let x = if k == 8 { b } else { a + h * k as f64 };
            let v = sign * f(x);
            if v < best.0 {
                best = (v, x);
            }
        }
        a = (best.1 - h).max(lo);
        b = (best.1 + h).min(hi);
        if b - a <= 4.0 * f64::EPSILON * best.1.abs().max(1e-300) {
            break;
        }
    }
    (sign * best.0, best.1)
}

/// Indices of the lowest grid local minima of `sign * v`.
fn local_extrema(v: &[f64], sign: f64, k: usize) -> Vec<usize> {
    let n = v.len();
    let mut idx: Vec<usize> = (0..n)
        .filter(|&i| {
            let c = sign * v[i];
            (i == 0 || c <= sign * v[i - 1]) && (i + 1 == n || c <= sign * v[i + 1])
        })
        .collect();
    idx.sort_by(|&i, &j| (sign * v[i]).total_cmp(&(sign * v[j])).then(i.cmp(&j)));
    idx.truncate(k);
    idx
}

/// Grid extrema of `f` on `[lo, hi]` refined around the best local ones.
fn extrema_1d<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, n: usize) -> ((f64, f64), (f64, f64)) {
    let xs: Vec<f64> = (0..n).map(|i| linspace(lo, hi, n, i)).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut out = [(f64::INFINITY, lo), (f64::INFINITY, lo)];
    for (slot, sign) in [(0usize, 1.0), (1usize, -1.0)] {
        for i in local_extrema(&vs, sign, REFINE_CANDIDATES) {
            let a = xs[i.saturating_sub(1)];
            let b = xs[(i + 1).min(n - 1)];
            let (v, x) = zoom_1d(f, sign, a, b, lo, hi);
            let (v, x) = if sign * vs[i] < sign * v { (vs[i], xs[i]) } else { (v, x) };
            if sign * v < out[slot].0 {
                out[slot] = (sign * v, x);
            }
        }
    }
    ((out[0].0, out[0].1), (-out[1].0, out[1].1))
}

/// Minimum and maximum of `x -> G^E(x)` over `[|E|, 1]`, and over
/// `[-1, -|E|]` as well when `full_domain` is set.
pub fn extrema_2d(op: &ConjugateOperator, e: f64, n_x: usize, full_domain: bool) -> Result<(Extremum, Extremum)> {
    check_energy(e)?;
    let a = e.abs();
    let signs: &[f64] = if full_domain { &[1.0, -1.0] } else { &[1.0] };
    let mut lo = Extremum { value: f64::INFINITY, point: vec![] };
    let mut hi = Extremum { value: f64::NEG_INFINITY, point: vec![] };
    for &s in signs {
        let f = |t: f64| g2_at(op, e, s * t);
        let ((vmin, xmin), (vmax, xmax)) = extrema_1d(&f, a, 1.0, n_x.max(3));
        if vmin < lo.value {
            lo = Extremum { value: vmin, point: vec![s * xmin] };
        }
        if vmax > hi.value {
            hi = Extremum { value: vmax, point: vec![s * xmax] };
        }
    }
    Ok((lo, hi))
}

/// Minimum of `G^E` over `x in [|E|, 1]` and its location.
pub fn min_g_2d(op: &ConjugateOperator, e: f64, n_x: usize) -> Result<(f64, f64)> {
    let (lo, _) = extrema_2d(op, e, n_x, false)?;
    Ok((lo.value, lo.point[0]))
}

struct RowStat {
    y: f64,
    sx: f64,
    min: (f64, usize),
    max: (f64, usize),
}

// x = sx * (xl + t (1 - xl)) with xl = |E / y|
#[inline]
fn x_of(e: f64, y: f64, sx: f64, t: f64) -> f64 {
    let xl = (e / y).abs();
    sx * (xl + t * (1.0 - xl))
}

/// Minimizes `sign * G` around `(y, t)` by repeated 8x8 subdivision.
#[allow(clippy::too_many_arguments)]
fn zoom_2d(
    op: &ConjugateOperator,
    e: f64,
    sign: f64,
    sx: f64,
    sy: f64,
    (mut y0, mut y1): (f64, f64),
    (mut t0, mut t1): (f64, f64),
) -> (f64, f64, f64) {
    let a = e.abs();
    let mut best = (f64::INFINITY, y0, x_of(e, y0, sx, t0));
    let mut best_yt = (y0, t0);
    for _ in 0..ZOOM_STEPS {
        let hy = (y1 - y0) / 8.0;
        let ht = (t1 - t0) / 8.0;
        for ky in 0..=8 {
            let ya = if ky == 8 { y1 } else { y0 + hy * ky as f64 };
            let y = sy * ya;
            let h_y = op.h(y);
            for kt in 0..=8 {
                let t = if kt == 8 { t1 } else { t0 + ht * kt as f64 };
                let x = x_of(e, y, sx, t);
                let v = sign * g3_at(op, e, x, y, h_y);
                if v < best.0 {
                    best = (v, y, x);
                    best_yt = (ya, t);
                }
            }
        }
        y0 = (best_yt.0 - hy).max(a);
        y1 = (best_yt.0 + hy).min(1.0);
        t0 = (best_yt.1 - ht).max(0.0);
        t1 = (best_yt.1 + ht).min(1.0);
        if y1 - y0 <= 4.0 * f64::EPSILON && t1 - t0 <= 4.0 * f64::EPSILON {
            break;
        }
    }
    (sign * best.0, best.2, best.1)
}

/// Minimum and maximum of `G^E(x, y)` over `y in [|E|, 1]`,
/// `x in [|E/y|, 1]`, and over all sign quadrants when `full_domain` is set.
pub fn extrema_3d(
    op: &ConjugateOperator,
    e: f64,
    n_x: usize,
    n_y: usize,
    full_domain: bool,
) -> Result<(Extremum, Extremum)> {
    check_energy(e)?;
    let a = e.abs();
    let (n_x, n_y) = (n_x.max(3), n_y.max(3));
    let quadrants: Vec<(f64, f64)> = if full_domain {
        vec![(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)]
    } else {
        vec![(1.0, 1.0)]
    };
    let mut lo = Extremum { value: f64::INFINITY, point: vec![] };
    let mut hi = Extremum { value: f64::NEG_INFINITY, point: vec![] };
    for (sx, sy) in quadrants {
        let rows: Vec<RowStat> = (0..n_y)
            .into_par_iter()
            .map(|k| {
                let y = sy * linspace(a, 1.0, n_y, k);
                let hy = op.h(y);
                let mut min = (f64::INFINITY, 0);
                let mut max = (f64::NEG_INFINITY, 0);
                for i in 0..n_x {
                    let t = linspace(0.0, 1.0, n_x, i);
                    let v = g3_at(op, e, x_of(e, y, sx, t), y, hy);
                    if v < min.0 {
                        min = (v, i);
                    }
                    if v > max.0 {
                        max = (v, i);
                    }
                }
                RowStat { y, sx, min, max }
            })
            .collect();
        for sign in [1.0, -1.0] {
            let row_vals: Vec<f64> = rows
                .iter()
                .map(|r| if sign > 0.0 { r.min.0 } else { r.max.0 })
                .collect();
            for k in local_extrema(&row_vals, sign, REFINE_CANDIDATES) {
                let r = &rows[k];
                let i = if sign > 0.0 { r.min.1 } else { r.max.1 };
                let yb = (
                    linspace(a, 1.0, n_y, k.saturating_sub(1)),
                    linspace(a, 1.0, n_y, (k + 1).min(n_y - 1)),
                );
                let tb = (
                    linspace(0.0, 1.0, n_x, i.saturating_sub(1)),
                    linspace(0.0, 1.0, n_x, (i + 1).min(n_x - 1)),
                );
                let (mut v, mut x, mut y) = zoom_2d(op, e, sign, r.sx, sy, yb, tb);
                if sign * row_vals[k] < sign * v {
                    v = row_vals[k];
                    y = r.y;
                    x = x_of(e, r.y, r.sx, linspace(0.0, 1.0, n_x, i));
                }
                if sign > 0.0 && v < lo.value {
                    lo = Extremum { value: v, point: vec![x, y] };
                }
                if sign < 0.0 && v > hi.value {
                    hi = Extremum { value: v, point: vec![x, y] };
                }
            }
        }
    }
    Ok((lo, hi))
}

/// Minimum of `G^E(x, y)` over the positive quadrant and its location.
pub fn min_g_3d(op: &ConjugateOperator, e: f64, n_x: usize, n_y: usize) -> Result<(f64, (f64, f64))> {
    let (lo, _) = extrema_3d(op, e, n_x, n_y, false)?;
    Ok((lo.value, (lo.point[0], lo.point[1])))
}

/// Extrema of `G^E` in dimension `d` with the grids of `cfg`.
pub fn sample_energy(op: &ConjugateOperator, d: u32, e: f64, cfg: &ScanConfig) -> Result<EnergySample> {
    check_dimension(d)?;
    let (min, max) = if d == 2 {
        extrema_2d(op, e, cfg.n_x, cfg.full_domain)?
    } else {
        extrema_3d(op, e, cfg.n_x, cfg.n_y, cfg.full_domain)?
    };
    Ok(EnergySample { energy: e, min, max })
}

fn sample_all(op: &ConjugateOperator, d: u32, energies: &[f64], cfg: &ScanConfig) -> Result<Vec<EnergySample>> {
    energies
        .par_iter()
        .map(|&e| sample_energy(op, d, e, cfg))
        .collect()
}

/// Bisects between an energy of class `outside` and one of class `inside`.
fn bisect_edge(
    op: &ConjugateOperator,
    d: u32,
    cfg: &ScanConfig,
    mut out_e: f64,
    mut in_e: f64,
    inside: i8,
) -> Result<f64> {
    while (in_e - out_e).abs() > cfg.endpoint_tol {
        let mid = 0.5 * (in_e + out_e);
        let s = sample_energy(op, d, mid, cfg)?;
        if s.sign_class(cfg.tol_sign, cfg.sign_mode) == inside {
            in_e = mid;
        } else {
            out_e = mid;
        }
    }
    Ok(0.5 * (in_e + out_e))
}

/// Re-scans the neighbourhood of the band's weakest grid energy with finer
/// energy and `x` grids.
fn verify_run(
    op: &ConjugateOperator,
    d: u32,
    cfg: &ScanConfig,
    samples: &[EnergySample],
    (i0, i1): (usize, usize),
    sign: i8,
) -> Result<bool> {
    let k = (i0..=i1)
        .min_by(|&p, &q| {
            samples[p]
                .margin(cfg.sign_mode)
                .total_cmp(&samples[q].margin(cfg.sign_mode))
        })
        .unwrap_or(i0);
    let lo = samples[k.max(i0 + 1) - 1].energy;
    let hi = samples[(k + 1).min(i1)].energy;
    let fine = ScanConfig {
        n_x: (cfg.n_x - 1) * VERIFY_FACTOR + 1,
        ..cfg.clone()
    };
    let energies: Vec<f64> = (0..VERIFY_ENERGIES)
        .map(|i| linspace(lo, hi, VERIFY_ENERGIES, i))
        .collect();
    let fine_samples = sample_all(op, d, &energies, &fine)?;
    Ok(fine_samples
        .iter()
        .all(|s| s.sign_class(cfg.tol_sign, cfg.sign_mode) == sign))
}

fn assemble(
    op: &ConjugateOperator,
    d: u32,
    window: (f64, f64),
    cfg: &ScanConfig,
    samples: Vec<EnergySample>,
    refine_edges: bool,
) -> Result<PositivityReport> {
    let n = samples.len();
    let classes: Vec<i8> = samples
        .iter()
        .map(|s| s.sign_class(cfg.tol_sign, cfg.sign_mode))
        .collect();
    let mut bands = Vec::new();
    let mut i = 0;
    while i < n {
        let c = classes[i];
        if c == 0 {
            i += 1;
            continue;
        }
        let i0 = i;
        while i + 1 < n && classes[i + 1] == c {
            i += 1;
        }
        let i1 = i;
        let left = if i0 == 0 {
            window.0
        } else if refine_edges {
            bisect_edge(op, d, cfg, samples[i0 - 1].energy, samples[i0].energy, c)?
        } else {
            samples[i0].energy
        };
        let right = if i1 + 1 == n {
            window.1
        } else if refine_edges {
            bisect_edge(op, d, cfg, samples[i1 + 1].energy, samples[i1].energy, c)?
        } else {
            samples[i1].energy
        };
        let min_interior_g = samples[i0..=i1]
            .iter()
            .map(|s| s.margin(cfg.sign_mode))
            .fold(f64::INFINITY, f64::min);
        let verified = verify_run(op, d, cfg, &samples, (i0, i1), c)?;
        bands.push(Band {
            left,
            right,
            sign: c,
            verified,
            min_interior_g,
        });
        i += 1;
    }
    let witness = samples
        .iter()
        .filter(|s| s.min.value < -cfg.tol_sign)
        .min_by(|a, b| a.min.value.total_cmp(&b.min.value))
        .map(|s| Witness {
            energy: s.energy,
            point: s.min.point.clone(),
            value: s.min.value,
        });
    let mut grid_resolution = vec![n, cfg.n_x];
    if d == 3 {
        grid_resolution.push(cfg.n_y);
    }
    Ok(PositivityReport {
        operator: op.clone(),
        dimension: d,
        sign_mode: cfg.sign_mode,
        energy_grid: samples.iter().map(|s| s.energy).collect(),
        min_g: samples.iter().map(|s| s.min.value).collect(),
        max_g: samples.iter().map(|s| s.max.value).collect(),
        argmin: samples.iter().map(|s| s.min.point.clone()).collect(),
        bands,
        grid_resolution,
        witness,
    })
}

/// Midpoint grid of `n` energies strictly inside `(a, b)`.
pub fn energy_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * (i as f64 + 0.5) / n as f64)
        .collect()
}

/// Maximal runs of grid energies in `window` on which `G` keeps a strict
/// sign, with interior endpoints refined by bisection.
pub fn find_bands(op: &ConjugateOperator, d: u32, window: (f64, f64), cfg: &ScanConfig) -> Result<PositivityReport> {
    check_dimension(d)?;
    cfg.validate()?;
    let (a, b) = window;
    if !(0.0 <= a && a < b && b <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "energy window ({a}, {b}) must lie in [0, 1]"
        )));
    }
    let energies = energy_grid(a, b, cfg.n_e);
    let samples = sample_all(op, d, &energies, cfg)?;
    assemble(op, d, window, cfg, samples, true)
}

/// Scans the open interval `(lo, hi)` between two known thresholds. The
/// band is accepted when [`PositivityReport::covers_window`] holds.
pub fn check_band(op: &ConjugateOperator, d: u32, lo: f64, hi: f64, cfg: &ScanConfig) -> Result<PositivityReport> {
    check_dimension(d)?;
    cfg.validate()?;
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!("empty band ({lo}, {hi})")));
    }
    let energies = energy_grid(lo, hi, cfg.n_e);
    let samples = sample_all(op, d, &energies, cfg)?;
    assemble(op, d, (lo, hi), cfg, samples, false)
}

/// One row of a profile export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub energy: f64,
    pub x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    pub g: f64,
}

/// `G^E` sampled on the scan grid: `x` over `[|E|, 1]` in dimension 2
/// (both signs when `full_domain`), `(x, y)` rows in dimension 3.
pub fn profile(
    op: &ConjugateOperator,
    d: u32,
    e: f64,
    n_x: usize,
    n_y: usize,
    full_domain: bool,
) -> Result<Vec<ProfileRow>> {
    check_dimension(d)?;
    check_energy(e)?;
    let a = e.abs();
    let mut rows = Vec::new();
    if d == 2 {
        if full_domain {
            for i in (0..n_x).rev() {
                let x = -linspace(a, 1.0, n_x, i);
                rows.push(ProfileRow { energy: e, x, y: None, g: g2_at(op, e, x) });
            }
        }
        for i in 0..n_x {
            let x = linspace(a, 1.0, n_x, i);
            rows.push(ProfileRow { energy: e, x, y: None, g: g2_at(op, e, x) });
        }
    } else {
        for k in 0..n_y {
            let y = linspace(a, 1.0, n_y, k);
            let hy = op.h(y);
            for i in 0..n_x {
                let x = x_of(e, y, 1.0, linspace(0.0, 1.0, n_x, i));
                rows.push(ProfileRow { energy: e, x, y: Some(y), g: g3_at(op, e, x, y, hy) });
            }
        }
    }
    Ok(rows)
}

/// Writes [`profile`] as CSV with header `E,x,G` or `E,x,y,G`.
pub fn emit_profile<W: Write>(
    op: &ConjugateOperator,
    d: u32,
    e: f64,
    n_x: usize,
    n_y: usize,
    full_domain: bool,
    sink: W,
) -> Result<()> {
    let rows = profile(op, d, e, n_x, n_y, full_domain)?;
    let mut w = csv::Writer::from_writer(sink);
    let io = |e: csv::Error| Error::Io(e.to_string());
    if d == 2 {
        w.write_record(["E", "x", "G"]).map_err(io)?;
    } else {
        w.write_record(["E", "x", "y", "G"]).map_err(io)?;
    }
    for r in rows {
        let mut rec = vec![r.energy.to_string(), r.x.to_string()];
        if let Some(y) = r.y {
            rec.push(y.to_string());
        }
        rec.push(r.g.to_string());
        w.write_record(&rec).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
