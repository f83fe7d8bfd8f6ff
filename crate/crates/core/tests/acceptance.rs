//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any failure.
#![allow(clippy::approx_constant)]

use std::time::Instant;

use mvthresh::cheb::*;
use mvthresh::gfun::*;
use mvthresh::interp::*;
use mvthresh::scan::*;
use mvthresh::solver::*;
use mvthresh::Result;
use proptest::test_runner::{Config, TestRunner};

type Check = Result<(bool, String)>;

fn opts() -> RootOpts {
    RootOpts::default()
}

fn within(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn kappa4_closed_forms() -> [f64; 8] {
    let th = (3.0 * 3f64.sqrt()).atan() / 3.0;
    [
        (5f64.sqrt() - 1.0) / 2.0,
        1.0 / 3f64.sqrt(),
        2.0 / 3.0 - 7f64.sqrt() / 3.0 * th.cos() + (7.0f64 / 3.0).sqrt() * th.sin(),
        (1.0 - 0.5f64.sqrt()).sqrt(),
        2.0 * (2.0 * std::f64::consts::PI / 9.0).cos() - 1.0,
        ((5.0 - 5f64.sqrt()) / 10.0).sqrt(),
        0.52111,
        (2.0 - 3f64.sqrt()).sqrt(),
    ]
}

fn c1_kappa4() -> Check {
    let t = Instant::now();
    let want = kappa4_closed_forms();
    let mut worst: f64 = 0.0;
    for (i, w) in want.iter().enumerate() {
        let e = solve_j2(4, i + 1, opts())?.energy;
        // E_7 has no closed form; it is only listed to five decimals
        let tol = if i == 6 { 5e-6 } else { 1e-10 };
        if !within(e, *w, tol) {
            return Ok((false, format!("E_{} = {e}, want {w}", i + 1)));
        }
        if i != 6 {
            worst = worst.max((e - w).abs());
        }
    }
    let dt = t.elapsed().as_secs_f64();
    Ok((dt < 1.0, format!("max err {worst:.1e}, {dt:.3} s")))
}

fn c2_kappa6() -> Check {
    let e_want = [0.82011, 0.79770, 0.78481, 0.77662, 0.77106, 0.76710];
    let f_want = [0.48487, 0.49802, 0.49990];
    let mut worst: f64 = 0.0;
    for (i, w) in e_want.iter().enumerate() {
        worst = worst.max((solve_j2(6, i + 1, opts())?.energy - w).abs());
    }
    for (i, w) in f_want.iter().enumerate() {
        worst = worst.max((solve_f(6, i + 1, opts())?.energy - w).abs());
    }
    Ok((worst <= 5e-5, format!("max err {worst:.1e}")))
}

fn c3_wells() -> Check {
    let j3 = [0.21289, 0.18861, 0.17584, 0.16820, 0.16325, 0.15983];
    let j2 = [0.59091, 0.56152, 0.54485, 0.53432, 0.52720, 0.52212];
    let mut worst: f64 = 0.0;
    for (j, want) in [(3u32, j3), (2, j2)] {
        for (i, w) in want.iter().enumerate() {
            let e = solve_well(8, j, i + 1, Direction::Decreasing, opts())?.energy;
            worst = worst.max((e - w).abs());
        }
    }
    Ok((worst <= 5e-5, format!("max err {worst:.1e} over 12 energies")))
}

fn c4_continued_fraction() -> Check {
    let mut worst: f64 = 0.0;
    for kappa in [4u32, 6] {
        for n in 1..=8 {
            let e = solve_j2(kappa, n, opts())?.energy;
            let (parity, m) = if n % 2 == 0 { (Parity::Even, n / 2) } else { (Parity::Odd, (n + 1) / 2) };
            debug_assert_eq!(cf_index(m, parity), n);
            let cf = continued_fraction_solve(kappa, m, parity)?;
            worst = worst.max((e - cf).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max diff {worst:.1e}")))
}

fn c5_omega() -> Check {
    let mut sols = Vec::new();
    for kappa in [4u32, 6] {
        for n in 1..=6 {
            sols.push(solve_j2(kappa, n, opts())?);
        }
    }
    for n in 1..=3 {
        sols.push(solve_f(6, n, opts())?);
    }
    let (mut rel, mut indep): (f64, f64) = (0.0, 0.0);
    let mut compared = 0;
    for s in &sols {
        if !s.omegas.iter().all(|&w| w < 0.0) || s.assumption == Assumption::Unknown {
            return Ok((false, format!("{:?} n={}: omega {:?}", s.family, s.n, s.omegas)));
        }
        let m = s.relation_index() as u32;
        let a = omega_matrix_oracle(s, &(1..=m).collect::<Vec<_>>())?;
        let b = omega_matrix_oracle(s, &(0..m).map(|i| 3 + 2 * i).collect::<Vec<_>>())?;
        for (p, q) in a.iter().zip(&b) {
            indep = indep.max((p - q).abs() / p.abs().max(1.0));
        }
        if s.n <= 4 {
            let cf = omega_closed_form(s)?;
            for (p, q) in cf.iter().zip(&a) {
                rel = rel.max((p - q).abs() / q.abs().max(1e-300));
            }
            compared += 1;
        }
    }
    Ok((
        rel <= 1e-8 && indep <= 1e-7,
        format!("{compared} closed forms, rel err {rel:.1e}; j-set spread {indep:.1e}; all omega < 0"),
    ))
}

fn c6_alignment() -> Check {
    let records = alignment_schedules()?;
    let cases = [(1usize, 0usize), (2, 0), (3, 0), (3, 1), (4, 0), (4, 1)];
    let mut rel: f64 = 0.0;
    let mut covered = Vec::new();
    let mut n5p2 = None;
    for r in &records {
        let s = solve_alignment(r.kappa, r.n, &r.schedule(), r.bracket, opts())?;
        let m = s.relation_index() as u32;
        let oracle = omega_matrix_oracle(&s, &(1..=m).collect::<Vec<_>>())?;
        if cases.contains(&(r.n, r.p)) {
            let cf = omega_alignment(&s, r.p)?;
            for (p, q) in cf.iter().zip(&oracle) {
                rel = rel.max((p - q).abs() / q.abs());
            }
            if !covered.contains(&(r.n, r.p)) {
                covered.push((r.n, r.p));
            }
        }
        if (r.n, r.p) == (5, 2) {
            n5p2 = Some(oracle);
        }
    }
    let Some(mut w) = n5p2 else {
        return Ok((false, "no n=5, p=2 record".into()));
    };
    // the printed triple lists the weights from the far end of the chain,
    // truncated to two decimals
    w.reverse();
    let want = [-0.31, -1.02, -1.71];
    let ok2 = w.iter().zip(&want).all(|(a, b)| within(*a, *b, 0.01));
    Ok((
        rel <= 1e-8 && ok2 && covered.len() == cases.len(),
        format!("{} (n, p) cases, rel err {rel:.1e}; n=5 p=2 oracle {w:.3?}", covered.len()),
    ))
}

fn table_sigma(kappa: u32, n: usize) -> Vec<u32> {
    reference_sigma(kappa, n).unwrap()
}

fn table_rho(kappa: u32, n: usize) -> Vec<f64> {
    match (kappa, n) {
        (4, 1) => vec![1.0, 0.56271],
        (4, 2) => vec![1.0, 0.79123, 0.19359, 0.02771],
        (4, 3) => vec![1.0, 1.328058, 0.98129, 0.45526, 0.12626, 0.01635],
        (4, 4) => vec![1.0, 1.44284, 1.23820, 0.72957, 0.29600, 0.07629, 0.00959, -0.0000079],
        (4, 5) => vec![
            1.0, 1.55110, 1.51418, 1.09196, 0.60426, 0.25666, 0.08171, 0.01849, 0.00266, 0.00018,
        ],
        (6, 1) => vec![1.0, 0.57405],
        (6, 2) => vec![1.0, 0.87489, 0.26445, 0.01568],
        (6, 3) => vec![1.0, 1.34434, 1.01470, 0.48606, 0.14113, 0.01952],
        (6, 4) => vec![1.0, 1.43702, 1.22364, 0.71194, 0.28365, 0.07146, 0.00878, 4.05e-6],
        _ => vec![
            1.0, 1.56415, 1.54850, 1.139066, 0.64678, 0.28365, 0.09384, 0.02222, 0.00337, 0.00024,
        ],
    }
}

fn c7_tables() -> Check {
    let mut worst: f64 = 0.0;
    for kappa in [4u32, 6] {
        for n in 1..=5 {
            let (op, _) = interpolate_band(kappa, n, &table_sigma(kappa, n), opts())?;
            for (a, b) in op.rho.iter().zip(table_rho(kappa, n)) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    let (op, _) = interpolate_band(4, 1, &[1, 2], opts())?;
    let exact = (17.0 + 8.0 * 5f64.sqrt()) / 62.0;
    let e8 = (op.rho[1] - exact).abs();
    Ok((
        worst <= 1e-4 && e8 <= 1e-12,
        format!("max coefficient err {worst:.1e}; rho_8 err {e8:.1e}"),
    ))
}

fn c8_bands() -> Check {
    let samples = [
        (4u32, [0.66, 0.59, 0.565, 0.548, 0.537]),
        (6, [0.84, 0.809, 0.791, 0.780, 0.774]),
    ];
    let mut min_interior = f64::INFINITY;
    let (mut end_lo, mut end_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (kappa, es) in samples {
        for (i, &e) in es.iter().enumerate() {
            let n = i + 1;
            let (op, _) = interpolate_band(kappa, n, &table_sigma(kappa, n), opts())?;
            let (l, r) = band_endpoints(kappa, n, opts())?;
            if !(l.energy < e && e < r.energy) {
                return Ok((false, format!("kappa={kappa}: {e} outside band {n}")));
            }
            let (m, _) = min_g_2d(&op, e, 4001)?;
            min_interior = min_interior.min(m);
            for edge in [l.energy, r.energy] {
                let (m, _) = min_g_2d(&op, edge, 4001)?;
                end_lo = end_lo.min(m);
                end_hi = end_hi.max(m);
            }
        }
    }
    Ok((
        min_interior > 0.0 && end_lo >= -1e-8 && end_hi <= 1e-6,
        format!("min interior G {min_interior:.2e}; endpoint min G in [{end_lo:.1e}, {end_hi:.1e}]"),
    ))
}

fn c9_sigma_selection() -> Check {
    let scan = ScanConfig {
        n_e: 201,
        n_x: 2001,
        ..ScanConfig::default()
    };
    let mut acc = Vec::new();
    let mut rej = Vec::new();
    for l in 4..=9u32 {
        let c = evaluate_sigma(4, 2, &[1, 2, 3, l], &scan, opts())?;
        match c.verdict {
            Verdict::Accepted { .. } => acc.push(l),
            Verdict::Rejected { witness: Some(w), .. } if w.value < -scan.tol_sign => rej.push(l),
            Verdict::Rejected { .. } => return Ok((false, format!("l={l} rejected without witness"))),
        }
    }
    Ok((
        acc == [7, 8, 9] && rej == [4, 5, 6],
        format!("accepted {acc:?}, rejected with witness {rej:?}"),
    ))
}

fn c10_prior_bands() -> Check {
    let rows: [(u32, u32, &[(f64, f64)]); 7] = [
        (2, 2, &[(0.0, 1.0)]),
        (4, 2, &[(0.0, 0.5), (0.7071, 1.0)]),
        (6, 2, &[(0.0, 0.25), (0.5064, 0.75), (0.8660, 1.0)]),
        (8, 2, &[(0.0, 0.1464), (0.3826, 0.5), (0.7121, 0.8535), (0.9238, 1.0)]),
        (4, 3, &[(0.0, 0.3535), (0.7071, 1.0)]),
        (6, 3, &[(0.0, 0.125), (0.5148, 0.6495), (0.8660, 1.0)]),
        (8, 3, &[(0.0, 0.0560), (0.7187, 0.7885), (0.9238, 1.0)]),
    ];
    let mut worst: f64 = 0.0;
    for (kappa, d, want) in rows {
        let cfg = ScanConfig {
            sign_mode: SignMode::EitherSign,
            ..if d == 2 {
                ScanConfig::default()
            } else {
                ScanConfig {
                    n_e: 400,
                    n_x: 401,
                    n_y: 201,
                    ..ScanConfig::default()
                }
            }
        };
        let rep = find_bands(&ConjugateOperator::trivial(kappa)?, d, (0.0, 1.0), &cfg)?;
        if rep.bands.len() != want.len() {
            return Ok((false, format!("kappa={kappa} d={d}: {} bands", rep.bands.len())));
        }
        for (b, w) in rep.bands.iter().zip(want) {
            worst = worst.max((b.left - w.0).abs()).max((b.right - w.1).abs());
        }
    }
    Ok((worst <= 1e-3, format!("7 rows, max endpoint err {worst:.1e}")))
}

fn c11_convergence() -> Check {
    let t = Instant::now();
    let a = convergence_study(4, 100)?;
    let b = convergence_study(6, 100)?;
    let dt = t.elapsed().as_secs_f64();
    Ok((
        within(a.slope, -1.872, 0.02) && within(b.slope, -1.853, 0.02) && dt < 30.0,
        format!("slopes {:.4} and {:.4}, {dt:.2} s", a.slope, b.slope),
    ))
}

fn run_prop<S, F>(name: &str, strategy: S, f: F) -> std::result::Result<(), String>
where
    S: proptest::strategy::Strategy,
    F: Fn(S::Value) -> std::result::Result<(), proptest::test_runner::TestCaseError>,
{
    let mut runner = TestRunner::new(Config {
        cases: 300,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, f).map_err(|e| format!("{name}: {e}"))
}

macro_rules! ensure {
    ($c:expr) => {
        if !$c {
            return Err(proptest::test_runner::TestCaseError::fail(stringify!($c)));
        }
    };
}

fn c12_properties() -> Check {
    let kappas = (1u32..=6).prop_map(|h| 2 * h);
    use proptest::prelude::*;
    let surface = (0.05f64..0.95, 0.0f64..1.0).prop_map(|(e, s)| (e, e + s * (1.0 - e)));
    let checks: Vec<std::result::Result<(), String>> = vec![
        run_prop("pell", (1u32..60, -1.0f64..1.0), |(n, x)| {
            let (t, u) = (cheb_t(n, x), cheb_u(n - 1, x));
            ensure!((t * t - (x * x - 1.0) * u * u - 1.0).abs() < 1e-9 * (1.0 + u * u));
            Ok(())
        }),
        run_prop("T4/T6", (-1.0f64..1.0, -1.0f64..1.0), |(x, y)| {
            let d4 = cheb_t(4, x) - cheb_t(4, y) - 8.0 * (x - y) * (x + y) * (x * x + y * y - 1.0);
            let d6 = cheb_t(6, x)
                - cheb_t(6, y)
                - 2.0 * (x - y) * (x + y) * (4.0 * x * x - 4.0 * x * y + 4.0 * y * y - 3.0)
                    * (4.0 * x * x + 4.0 * x * y + 4.0 * y * y - 3.0);
            ensure!(d4.abs() < 1e-13 && d6.abs() < 1e-12);
            Ok(())
        }),
        run_prop(
            "equal levels",
            (kappas.clone(), -0.999f64..0.999, 1u32..12, 1u32..6, 1u32..6),
            |(k, x, jw, a, b)| {
                let w = Well::new(k, 1 + (jw - 1) % k).unwrap();
                let y = inv_t_on_well(w, cheb_t(k, x), opts()).unwrap();
                ensure!((cheb_t(a * k, x) - cheb_t(a * k, y)).abs() < 1e-9 * (a * k) as f64);
                let (p, q) = (a * k - 1, b * k - 1);
                let br = bracket(cheb_u(p, x), cheb_u(p, y), cheb_u(q, x), cheb_u(q, y));
                ensure!(br.abs() < 1e-8 * ((p + 1) * (q + 1)) as f64);
                Ok(())
            },
        ),
        run_prop("g symmetries", (surface.clone(), kappas.clone(), 1u32..5), |((e, x), k, j)| {
            let a = g2(e, j, k, x).unwrap();
            ensure!((a - g2(e, j, k, e / x).unwrap()).abs() < 1e-10 * (1.0 + a.abs()));
            ensure!((a - g2(e, j, k, -x).unwrap()).abs() < 1e-10 * (1.0 + a.abs()));
            let y = e / x;
            let (da, db) = (x * g2_prime(e, j, k, x).unwrap(), y * g2_prime(e, j, k, y).unwrap());
            ensure!((da + db).abs() < 1e-9 * (1.0 + da.abs()));
            Ok(())
        }),
        run_prop("finite differences", (surface, kappas, 1u32..5), |((e, x), k, j)| {
            let x = x.clamp(e + 0.01 * (1.0 - e), 1.0 - 0.01 * (1.0 - e));
            let h = 1e-6 * (1.0 - e);
            let fd = (g2(e, j, k, x + h).unwrap() - g2(e, j, k, x - h).unwrap()) / (2.0 * h);
            let d = g2_prime(e, j, k, x).unwrap();
            ensure!((fd - d).abs() < 1e-5 * ((j * k) as f64).powi(2) * (1.0 + d.abs()));
            Ok(())
        }),
        run_prop("croissdiff", ((2u32..=6).prop_map(|h| 2 * h), 0.001f64..0.999), |(k, s)| {
            let (c1, c2) = (cos_level(k, 1), cos_level(k, 2));
            let b = c1 + s * (1.0 - c1);
            let a = inv_t_on_well(Well::new(k, 2).unwrap(), cheb_t(k, b), opts()).unwrap();
            if c2 < a && a < c1 {
                ensure!(c1 - a > b - c1);
            }
            Ok(())
        }),
    ];
    if let Some(Err(e)) = checks.into_iter().find(|c| c.is_err()) {
        return Ok((false, e));
    }
    let mut worst: f64 = 0.0;
    for kappa in [4u32, 6, 8] {
        let e: Vec<f64> = (1..=12)
            .map(|n| solve_j2(kappa, n, opts()).map(|s| s.energy))
            .collect::<Result<_>>()?;
        let c = cos_level(kappa, 1);
        if !e.windows(2).all(|w| w[1] < w[0]) || !e.iter().all(|&v| c * c < v && v < c) {
            return Ok((false, format!("kappa={kappa}: sequence not interlaced")));
        }
        for n in 1..=8 {
            let s = solve_j2(kappa, n, opts())?;
            for j in 1..=6 {
                worst = worst.max(linear_relation_defect(&s, j)?);
            }
        }
    }
    Ok((
        worst <= 1e-8,
        format!("6 randomized identity suites x 300 cases; interlacing; relation defect {worst:.1e}"),
    ))
}

fn c13_three_dim() -> Check {
    let (op, _) = interpolate_band(4, 2, &[1, 2, 3, 7], opts())?;
    let (e2, e1) = (solve_j2(4, 2, opts())?.energy, solve_j2(4, 1, opts())?.energy);
    let (m2, _) = min_g_3d(&op, e2, 2001, 801)?;
    let (m1, _) = min_g_3d(&op, e1, 2001, 801)?;
    let (mid, _) = min_g_3d(&op, 0.59, 2001, 801)?;
    let mut worst: f64 = 0.0;
    for kappa in [4u32, 6] {
        for n in 1..=4 {
            let s = solve_j2(kappa, n, opts())?;
            for jl in 0..kappa / 2 {
                let l = lift_threshold(&s, jl)?;
                for j in 1..=4 {
                    worst = worst.max(linear_relation_defect(&l, j)?);
                }
            }
        }
    }
    Ok((
        m2 >= -1e-8 && m1 >= -1e-8 && mid > 0.0 && worst <= 1e-8,
        format!("min G3 {m2:.1e} at E_2, {m1:.1e} at E_1, {mid:.3e} at 0.59; lifted defect {worst:.1e}"),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 13] = [
        ("kappa=4 closed-form thresholds", c1_kappa4),
        ("kappa=6 J2 and F sequences", c2_kappa6),
        ("kappa=8 generalized wells", c3_wells),
        ("continued fraction vs chain solver", c4_continued_fraction),
        ("omega closed form, oracle, sign", c5_omega),
        ("alignment omega", c6_alignment),
        ("interpolation tables", c7_tables),
        ("band certification", c8_bands),
        ("sigma selection pattern", c9_sigma_selection),
        ("trivial-operator band tables", c10_prior_bands),
        ("convergence slopes", c11_convergence),
        ("property suites", c12_properties),
        ("three-dimensional evidence", c13_three_dim),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {detail} [{:.2} s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            t.elapsed().as_secs_f64()
        );
    }
    println!("{} of 13 criteria passed", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
