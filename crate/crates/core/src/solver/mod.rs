//! Threshold energies from the ping-pong construction.
//!
//! A chain `X_0 .. X_{n+1}` is built from its middle outwards by alternating
//! two moves: equal-level inversion of `T_kappa` onto a chosen well, and the
//! multiplicative symmetry `X -> E / X`. The energy is then calibrated by
//! bisection so that the last coordinate meets a terminal condition.

mod lift;
mod omega;
mod schedules;
mod sequence;

pub use lift::{lift_threshold, theta0_set};
pub use omega::{
    linear_relation_defect, omega_alignment, omega_closed_form, omega_matrix_oracle,
    omega_matrix_oracle_dim,
};
pub use schedules::{alignment_schedules, AlignmentRecord};
pub use sequence::{
    cf_index, continued_fraction_solve, convergence_study, sequence_rows, ConvergenceStudy, Parity,
    SequenceRow,
};

use serde::{Deserialize, Serialize};

use crate::cheb::{cheb_t, cheb_t_prime, cos_level, inv_t_on_well, RootOpts, Well};
use crate::error::{Error, Result};
use crate::gfun::check_kappa;

/// Relative shrink of a family's open energy interval before bisection.
pub const BRACKET_SHRINK: f64 = 1e-9;
/// Slack when checking chain ordering.
pub const ORDER_SLACK: f64 = 1e-12;
/// Largest terminal defect accepted as a genuine root rather than a jump.
pub const ROOT_DEFECT_MAX: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    J2Decreasing,
    FIncreasing,
    WellDecreasing(u32),
    WellIncreasing(u32),
    Alignment(usize),
    /// A documented schedule with a cosine terminal outside the families above.
    Scheduled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Assumption {
    AO1,
    AO2,
    AO3 { i1: Vec<usize>, i2: Vec<usize> },
    AE1,
    AE2,
    AE3 { i1: Vec<usize>, i2: Vec<usize> },
    AlignmentSigns,
    Unknown,
}

/// Whether the weights certify a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    /// All weights strictly negative.
    Certified,
    /// Some weight is nonnegative; the linear relation still holds.
    NotCertifiedThreshold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSolution {
    pub kappa: u32,
    pub n: usize,
    pub family: Family,
    pub energy: f64,
    pub coords: Vec<f64>,
    pub omegas: Vec<f64>,
    pub residual: f64,
    pub assumption: Assumption,
    pub status: Status,
    /// Constant coordinates appended by dimension lifting.
    #[serde(default)]
    pub lifted: Vec<f64>,
}

impl ThresholdSolution {
    pub fn dimension(&self) -> usize {
        2 + self.lifted.len()
    }

    /// Index of the coordinate expressed through the others, `X_m`.
    pub fn relation_index(&self) -> usize {
        relation_index(self.n)
    }

    /// Energy of the two-dimensional chain before lifting.
    pub fn base_energy(&self) -> f64 {
        self.energy / self.lifted.iter().product::<f64>()
    }
}

/// `(n + 1) / 2` for odd `n`, `n / 2` for even `n`.
pub fn relation_index(n: usize) -> usize {
    if n % 2 == 1 {
        (n + 1) / 2
    } else {
        n / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Start {
    /// `X_{(n+1)/2} = sqrt(E)`, odd `n`.
    SqrtE,
    /// `X_{n/2} = cos(j pi / kappa)`, even `n`.
    LevelCosine(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Terminal {
    /// `X_{n+1} = cos(j pi / kappa)`.
    LevelCosine(u32),
    /// `T(X_{n+1}) = T(X_p)`.
    AlignTo(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PingPongSchedule {
    pub start: Start,
    pub terminal: Terminal,
    /// Well used by each level inversion, producing `X_{m-1}, .., X_0`.
    pub branch_wells: Vec<u32>,
    /// Well every mirrored coordinate must stay in; leaving it is an
    /// overshoot whose side fixes the sign of the terminal defect.
    #[serde(default)]
    pub center_well: Option<u32>,
}

impl PingPongSchedule {
    pub fn validate(&self, kappa: u32, n: usize) -> Result<()> {
        check_kappa(kappa)?;
        if n == 0 {
            return Err(Error::InvalidInput("n must be >= 1".into()));
        }
        match (self.start, n % 2) {
            (Start::SqrtE, 1) | (Start::LevelCosine(_), 0) => {}
            _ => {
                return Err(Error::InvalidInput(format!(
                    "start {:?} does not match the parity of n = {n}",
                    self.start
                )))
            }
        }
        let steps = relation_index(n);
        if self.branch_wells.len() != steps {
            return Err(Error::DimensionMismatch {
                expected: steps,
                got: self.branch_wells.len(),
            });
        }
        for &j in &self.branch_wells {
            Well::new(kappa, j)?;
        }
        if let Some(j) = self.center_well {
            Well::new(kappa, j)?;
        }
        if let Start::LevelCosine(j) = self.start {
            if cos_level(kappa, j as i64) == 0.0 || j > kappa {
                return Err(Error::InvalidInput(format!("invalid start level {j}")));
            }
        }
        match self.terminal {
            Terminal::LevelCosine(j) if j > kappa || cos_level(kappa, j as i64) == 0.0 => {
                Err(Error::InvalidInput(format!("invalid terminal level {j}")))
            }
            Terminal::AlignTo(p) if p >= steps => Err(Error::InvalidInput(format!(
                "alignment index p = {p} must be below {steps}"
            ))),
            _ => Ok(()),
        }
    }

    /// Canonical schedule of the decreasing sequence in well `j`.
    pub fn decreasing(n: usize, j: u32) -> Self {
        PingPongSchedule {
            start: if n % 2 == 1 {
                Start::SqrtE
            } else {
                Start::LevelCosine(j)
            },
            terminal: Terminal::LevelCosine(j - 1),
            branch_wells: vec![j + 1; relation_index(n)],
            center_well: Some(j),
        }
    }

    /// Canonical schedule of the increasing sequence below well `j`.
    pub fn increasing(n: usize, j: u32) -> Self {
        PingPongSchedule {
            start: if n % 2 == 1 {
                Start::SqrtE
            } else {
                Start::LevelCosine(j)
            },
            terminal: Terminal::LevelCosine(j + 1),
            branch_wells: vec![j; relation_index(n)],
            center_well: Some(j + 1),
        }
    }
}

enum Built {
    Chain(Vec<f64>),
    /// A mirrored coordinate left the center well at the given step.
    Overshoot { step: usize, value: f64, above: bool },
    Invalid { step: usize, reason: String },
}

fn build(kappa: u32, n: usize, s: &PingPongSchedule, e: f64, opts: RootOpts) -> Built {
    let mut x = vec![f64::NAN; n + 2];
    let m = relation_index(n);
    let mut hi = match s.start {
        Start::SqrtE => {
            if e <= 0.0 {
                return Built::Invalid {
                    step: 0,
                    reason: "sqrt start needs E > 0".into(),
                };
            }
            x[m] = e.sqrt();
            m
        }
        Start::LevelCosine(j) => {
            x[m] = cos_level(kappa, j as i64);
            x[m + 1] = e / x[m];
            m + 1
        }
    };
    let guard = s.center_well.map(|j| Well { kappa, j }.endpoints());
    let check = |v: f64, step: usize| -> Option<Built> {
        if let Some((a, b)) = guard {
            if v > b + ORDER_SLACK || v < a - ORDER_SLACK {
                return Some(Built::Overshoot {
                    step,
                    value: v,
                    above: v > b,
                });
            }
        }
        if !(v.abs() <= 1.0 + ORDER_SLACK) || v.abs() < e.abs() * (1.0 - ORDER_SLACK) {
            return Some(Built::Invalid {
                step,
                reason: format!("coordinate {v} outside [|E|, 1]"),
            });
        }
        None
    };
    if let Some(b) = check(x[hi], 0) {
        return b;
    }
    for (k, &wj) in s.branch_wells.iter().enumerate() {
        let lo = m - 1 - k;
        let y = cheb_t(kappa, x[hi]);
        match inv_t_on_well(Well { kappa, j: wj }, y, opts) {
            Ok(v) => x[lo] = v,
            Err(err) => {
                return Built::Invalid {
                    step: k + 1,
                    reason: err.to_string(),
                }
            }
        }
        if x[lo] == 0.0 {
            // the mirror image E / X_lo is at infinity
            return Built::Overshoot {
                step: k + 1,
                value: f64::INFINITY,
                above: e > 0.0,
            };
        }
        hi += 1;
        x[hi] = e / x[lo];
        // the terminal coordinate may sit on a well edge; only earlier
        // mirrored points are held to the center well
        if hi < n + 1 {
            if let Some(b) = check(x[hi], k + 1) {
                return b;
            }
        } else if !(x[hi].abs() <= 1.0 + ORDER_SLACK) {
            return Built::Overshoot {
                step: k + 1,
                value: x[hi],
                above: x[hi] > 0.0,
            };
        }
    }
    Built::Chain(x)
}

/// Builds `X_0 .. X_{n+1}` for energy `e` following `schedule`.
pub fn construct_chain(
    kappa: u32,
    n: usize,
    schedule: &PingPongSchedule,
    e: f64,
    opts: RootOpts,
) -> Result<Vec<f64>> {
    schedule.validate(kappa, n)?;
    match build(kappa, n, schedule, e, opts) {
        Built::Chain(x) => Ok(x),
        Built::Overshoot { step, value, .. } => Err(Error::ConstructionFailure {
            step,
            reason: format!("coordinate {value} left its well"),
        }),
        Built::Invalid { step, reason } => Err(Error::ConstructionFailure { step, reason }),
    }
}

/// Signed terminal defect; overshoots map to +-inf, other failures to NaN.
fn terminal_defect(kappa: u32, n: usize, s: &PingPongSchedule, e: f64, opts: RootOpts) -> f64 {
    match build(kappa, n, s, e, opts) {
        Built::Chain(x) => match s.terminal {
            Terminal::LevelCosine(j) => x[n + 1] - cos_level(kappa, j as i64),
            Terminal::AlignTo(p) => cheb_t(kappa, x[n + 1]) - cheb_t(kappa, x[p]),
        },
        Built::Overshoot { above, .. } => {
            if above {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        }
        Built::Invalid { .. } => f64::NAN,
    }
}

/// Bisection for a sign change of `f` on `[lo, hi]`. Returns the bracket end
/// with the smaller finite defect.
pub fn bisect_sign<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, max_iter: usize) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::ScheduleInfeasible(format!(
            "no sign change on [{lo}, {hi}] (defects {fa}, {fb})"
        )));
    }
    let mut fb = fb;
    for _ in 0..max_iter {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm.is_nan() {
            return Err(Error::ScheduleInfeasible(format!(
                "construction fails inside the bracket at E = {mid}"
            )));
        }
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    let pick = match (fa.is_finite(), fb.is_finite()) {
        (true, true) => {
            if fa.abs() <= fb.abs() {
                a
            } else {
                b
            }
        }
        (true, false) => a,
        (false, true) => b,
        _ => {
            return Err(Error::NoConvergence {
                what: "energy bisection".into(),
                iterations: max_iter,
            })
        }
    };
    Ok(pick)
}

/// All sign changes of `f` on a uniform sample of `[lo, hi]` that refine to
/// genuine roots (defect below `ROOT_DEFECT_MAX`).
pub fn scan_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let pts: Vec<f64> = (0..samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
        .collect();
    let vals: Vec<f64> = pts.iter().map(|&e| f(e)).collect();
    for i in 0..samples - 1 {
        let (u, v) = (vals[i], vals[i + 1]);
        if u.is_finite() && v.is_finite() && u.signum() != v.signum() {
            if let Ok(r) = bisect_sign(&f, pts[i], pts[i + 1], 200) {
                if f(r).abs() <= ROOT_DEFECT_MAX {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// Calibrates `E` in `bracket` so that the schedule's terminal condition
/// holds, then evaluates the weights and tags the solution.
pub fn solve_schedule(
    kappa: u32,
    n: usize,
    schedule: &PingPongSchedule,
    bracket: (f64, f64),
    family: Family,
    opts: RootOpts,
) -> Result<ThresholdSolution> {
    schedule.validate(kappa, n)?;
    let (lo, hi) = bracket;
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!("empty bracket ({lo}, {hi})")));
    }
    let f = |e: f64| terminal_defect(kappa, n, schedule, e, opts);
    let e = bisect_sign(f, lo, hi, opts.max_iter)?;
    let coords = construct_chain(kappa, n, schedule, e, opts)?;
    let residual = f(e).abs();
    if !(residual <= ROOT_DEFECT_MAX) {
        return Err(Error::ScheduleInfeasible(format!(
            "terminal defect {residual:e} at E = {e}: sign change is a jump"
        )));
    }
    let mut sol = ThresholdSolution {
        kappa,
        n,
        family,
        energy: e,
        coords,
        omegas: vec![],
        residual,
        assumption: Assumption::Unknown,
        status: Status::NotCertifiedThreshold,
        lifted: vec![],
    };
    sol.omegas = match family {
        Family::Alignment(p) => match omega_alignment(&sol, p) {
            Ok(w) => w,
            Err(Error::UnsupportedPair { .. }) => {
                let js: Vec<u32> = (1..=relation_index(n) as u32).collect();
                omega_matrix_oracle(&sol, &js)?
            }
            Err(err) => return Err(err),
        },
        _ => omega_closed_form(&sol)?,
    };
    sol.assumption = match family {
        Family::Alignment(_) => Assumption::AlignmentSigns,
        _ => classify_assumption(kappa, n, &sol.coords),
    };
    sol.status = if sol.omegas.iter().all(|w| *w < 0.0) {
        Status::Certified
    } else {
        Status::NotCertifiedThreshold
    };
    Ok(sol)
}

/// AO/AE tag from the signs of `X_q X_{n-q}` and `T'(X_q) T'(X_{n-q})`.
pub fn classify_assumption(kappa: u32, n: usize, x: &[f64]) -> Assumption {
    let qmax = relation_index(n); // exclusive
    let (mut i1, mut i2) = (vec![], vec![]);
    for q in 0..qmax {
        let s1 = x[q] * x[n - q];
        let s2 = cheb_t_prime(kappa, x[q]) * cheb_t_prime(kappa, x[n - q]);
        if s1 > 0.0 && s2 < 0.0 {
            i1.push(q);
        } else if s1 < 0.0 && s2 > 0.0 {
            i2.push(q);
        } else {
            return Assumption::Unknown;
        }
    }
    let odd = n % 2 == 1;
    match (i1.is_empty(), i2.is_empty(), odd) {
        (false, true, true) => Assumption::AO1,
        (true, false, true) => Assumption::AO2,
        (_, _, true) => Assumption::AO3 { i1, i2 },
        (false, true, false) => Assumption::AE1,
        (true, false, false) => Assumption::AE2,
        (_, _, false) => Assumption::AE3 { i1, i2 },
    }
}

fn family_bracket(lo: f64, hi: f64) -> (f64, f64) {
    let w = hi - lo;
    (lo + BRACKET_SHRINK * w, hi - BRACKET_SHRINK * w)
}

/// `E_n` of the decreasing sequence in `J_2 = (cos^2(pi/kappa), cos(pi/kappa))`.
pub fn solve_j2(kappa: u32, n: usize, opts: RootOpts) -> Result<ThresholdSolution> {
    check_kappa(kappa)?;
    if kappa < 4 {
        return Err(Error::InvalidInput("J2 sequence needs kappa >= 4".into()));
    }
    let mut sol = solve_well(kappa, 1, n, Direction::Decreasing, opts)?;
    sol.family = Family::J2Decreasing;
    Ok(sol)
}

/// `F_n` of the increasing sequence below `cos(2 pi / kappa)`.
pub fn solve_f(kappa: u32, n: usize, opts: RootOpts) -> Result<ThresholdSolution> {
    check_kappa(kappa)?;
    if kappa < 6 {
        return Err(Error::InvalidInput("F sequence needs kappa >= 6".into()));
    }
    let mut sol = solve_well(kappa, 1, n, Direction::Increasing, opts)?;
    sol.family = Family::FIncreasing;
    Ok(sol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Decreasing,
    Increasing,
}

/// Energy interval hosting the sequence of well `j`.
pub fn well_interval(kappa: u32, j: u32, dir: Direction) -> (f64, f64) {
    let c = |i: i64| cos_level(kappa, i);
    let j = j as i64;
    match dir {
        Direction::Decreasing => (c(j) * c(j), c(j - 1) * c(j)),
        Direction::Increasing => (c(j) * c(j + 1), c(j - 1) * c(j + 1)),
    }
}

/// Decreasing (`E_n`) or increasing (`F_n`) sequence attached to well `j`.
pub fn solve_well(
    kappa: u32,
    j: u32,
    n: usize,
    dir: Direction,
    opts: RootOpts,
) -> Result<ThresholdSolution> {
    check_kappa(kappa)?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    let max_j = match dir {
        Direction::Decreasing => (kappa / 2).saturating_sub(1),
        Direction::Increasing => (kappa / 2).saturating_sub(2),
    };
    if j < 1 || j > max_j {
        return Err(Error::InvalidInput(format!(
            "well index j = {j} out of range 1..={max_j} for kappa = {kappa}"
        )));
    }
    let (schedule, family) = match dir {
        Direction::Decreasing => (PingPongSchedule::decreasing(n, j), Family::WellDecreasing(j)),
        Direction::Increasing => (PingPongSchedule::increasing(n, j), Family::WellIncreasing(j)),
    };
    let (lo, hi) = well_interval(kappa, j, dir);
    solve_schedule(kappa, n, &schedule, family_bracket(lo, hi), family, opts)
}

/// Alignment solution from a schedule with an `AlignTo(p)` terminal.
pub fn solve_alignment(
    kappa: u32,
    n: usize,
    schedule: &PingPongSchedule,
    bracket: (f64, f64),
    opts: RootOpts,
) -> Result<ThresholdSolution> {
    let p = match schedule.terminal {
        Terminal::AlignTo(p) => p,
        Terminal::LevelCosine(_) => {
            return Err(Error::InvalidInput(
                "alignment needs an AlignTo terminal".into(),
            ))
        }
    };
    solve_schedule(kappa, n, schedule, bracket, Family::Alignment(p), opts)
}

/// The right end `E_0 = cos(pi / kappa)` of the first band, with the trivial
/// chain `(cos(pi/kappa), 1)`.
pub fn j2_upper_end(kappa: u32) -> ThresholdSolution {
    let c = cos_level(kappa, 1);
    ThresholdSolution {
        kappa,
        n: 0,
        family: Family::J2Decreasing,
        energy: c,
        coords: vec![c, 1.0],
        omegas: vec![],
        residual: 0.0,
        assumption: Assumption::Unknown,
        status: Status::NotCertifiedThreshold,
        lifted: vec![],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_at_exact_e1() {
        let o = RootOpts::default();
        let e1 = (5f64.sqrt() - 1.0) / 2.0;
        let s = PingPongSchedule::decreasing(1, 1);
        let x = construct_chain(4, 1, &s, e1, o).unwrap();
        assert!((x[0] - e1).abs() < 1e-12);
        assert!((x[1] - 0.7861).abs() < 1e-4);
        assert!((x[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chain_at_exact_e2() {
        let o = RootOpts::default();
        let e2 = 1.0 / 3f64.sqrt();
        let s = PingPongSchedule::decreasing(2, 1);
        let x = construct_chain(4, 2, &s, e2, o).unwrap();
        let want = [0.57735, std::f64::consts::FRAC_1_SQRT_2, 0.81650, 1.0];
        for (a, b) in x.iter().zip(want) {
            assert!((a - b).abs() < 1e-5, "{x:?}");
        }
    }

    #[test]
    fn non_threshold_energy_fails_or_misses() {
        let o = RootOpts::default();
        let s = PingPongSchedule::decreasing(1, 1);
        match construct_chain(4, 1, &s, 0.70, o) {
            Err(Error::ConstructionFailure { .. }) => {}
            Ok(x) => assert!((x[2] - 1.0).abs() > 1e-3),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn schedule_validation() {
        let mut s = PingPongSchedule::decreasing(3, 1);
        assert!(s.validate(4, 3).is_ok());
        assert!(s.validate(4, 4).is_err());
        s.branch_wells.pop();
        assert!(s.validate(4, 3).is_err());
        let a = PingPongSchedule {
            start: Start::SqrtE,
            terminal: Terminal::AlignTo(2),
            branch_wells: vec![1, 2],
            center_well: None,
        };
        assert!(a.validate(6, 3).is_err());
    }

    #[test]
    fn j2_examples() {
        let o = RootOpts::default();
        let e1 = solve_j2(4, 1, o).unwrap();
        assert!((e1.energy - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
        let e4 = solve_j2(4, 4, o).unwrap();
        assert!((e4.energy - (1.0 - 0.5f64.sqrt()).sqrt()).abs() < 1e-12);
        let e3 = solve_j2(6, 3, o).unwrap();
        assert!((e3.energy - 0.78481).abs() < 5e-6);
        assert!(solve_j2(3, 1, o).is_err());
    }

    #[test]
    fn f_examples() {
        let o = RootOpts::default();
        for (n, v) in [(1, 0.48487), (2, 0.49802), (3, 0.49990)] {
            let s = solve_f(6, n, o).unwrap();
            assert!((s.energy - v).abs() < 5e-6, "{n} {}", s.energy);
        }
        assert!(solve_f(4, 1, o).is_err());
    }

    #[test]
    fn well_examples() {
        let o = RootOpts::default();
        let a = solve_well(8, 3, 1, Direction::Decreasing, o).unwrap();
        assert!((a.energy - 0.21289).abs() < 5e-6);
        let b = solve_well(8, 2, 4, Direction::Decreasing, o).unwrap();
        assert!((b.energy - 0.53432).abs() < 5e-6);
        for (k, n) in [(4, 1), (6, 2)] {
            let w = solve_well(k, 1, n, Direction::Decreasing, o).unwrap();
            let j = solve_j2(k, n, o).unwrap();
            assert!((w.energy - j.energy).abs() < 1e-11);
        }
    }

    #[test]
    fn assumption_tags() {
        let o = RootOpts::default();
        for n in 1..=6 {
            let s = solve_j2(4, n, o).unwrap();
            let want = if n % 2 == 1 { Assumption::AO1 } else { Assumption::AE1 };
            assert_eq!(s.assumption, want);
            assert_eq!(s.status, Status::Certified);
        }
    }
}
