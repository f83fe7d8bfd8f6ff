mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use config::{RunConfig, CONFIG_ENV};
use mvthresh::gfun::{check_kappa, ConjugateOperator};
use mvthresh::interp::{
    band_endpoints, constraint_defects, interpolate_band, reference_sigma, search_sigma, solve_rho,
    build_system, Verdict,
};
use mvthresh::scan::{check_band, emit_profile, energy_grid, find_bands, sample_energy, SignMode};
use mvthresh::solver::{
    alignment_schedules, convergence_study, solve_alignment, solve_f, solve_j2, solve_well, Direction,
};
use mvthresh::{Error, Result};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_NEGATIVE: u8 = 4;

#[derive(Parser)]
#[command(name = "mvthresh", version, about = "Thresholds and positivity bands of the Molchanov-Vainberg Laplacian")]
struct Cli {
    /// Flat `key = value` file overriding built-in defaults.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Worker threads for scans and index-set searches.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Output file; stdout when absent.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(flatten)]
    grid: GridFlags,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct GridFlags {
    #[arg(long, global = true)]
    tol_root: Option<f64>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    #[arg(long, global = true)]
    tol_sign: Option<f64>,
    #[arg(long, global = true)]
    n_e: Option<usize>,
    #[arg(long, global = true)]
    n_x: Option<usize>,
    #[arg(long, global = true)]
    n_y: Option<usize>,
    #[arg(long, global = true)]
    endpoint_tol: Option<f64>,
    /// Scan every sign quadrant of the surface.
    #[arg(long, global = true)]
    full_domain: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    J2,
    F,
    Well,
    Alignment,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Decreasing,
    Increasing,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Positive,
    Either,
}

#[derive(Args)]
struct OperatorArgs {
    #[arg(long)]
    kappa: u32,
    /// Use `rho = (1)`, `sigma = (1)`.
    #[arg(long, conflicts_with_all = ["band", "rho"])]
    trivial: bool,
    /// Interpolate the operator of this band.
    #[arg(long)]
    band: Option<usize>,
    /// Multipliers of kappa, comma separated.
    #[arg(long, value_delimiter = ',')]
    sigma: Option<Vec<u32>>,
    /// Explicit coefficients matching `--sigma`.
    #[arg(long, value_delimiter = ',', requires = "sigma", allow_hyphen_values = true)]
    rho: Option<Vec<f64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Threshold energies of one family, one JSON record per n.
    Thresholds {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        kappa: u32,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// Well index for `--family well`.
        #[arg(long, default_value_t = 2)]
        well: u32,
        #[arg(long, value_enum, default_value = "decreasing")]
        direction: DirectionArg,
    },
    /// Solve the interpolation system of one band.
    Interpolate {
        #[arg(long)]
        kappa: u32,
        #[arg(long)]
        band: usize,
        #[arg(long, value_delimiter = ',', conflicts_with = "search")]
        sigma: Option<Vec<u32>>,
        /// Candidate index set, comma separated; repeat for a pool.
        #[arg(long)]
        search: Vec<String>,
        /// Also certify positivity on the band interior.
        #[arg(long)]
        check: bool,
    },
    /// Extrema of G on the surface, one CSV row per energy.
    Scan {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, default_value_t = 2)]
        dim: u32,
        /// Energies to sample; repeat or comma separate.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        energy: Vec<f64>,
        /// Energy window sampled on an `n_e` midpoint grid.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], conflicts_with = "energy")]
        window: Option<Vec<f64>>,
        /// Exit with status 4 unless G is strictly positive at every energy.
        #[arg(long)]
        require_positive: bool,
    },
    /// Bands of strict sign, one JSON record per band.
    Bands {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, default_value_t = 2)]
        dim: u32,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        window: Option<Vec<f64>>,
        /// Defaults to `either` for the trivial operator, `positive` otherwise.
        #[arg(long, value_enum)]
        sign: Option<SignArg>,
    },
    /// G along the surface at one energy, as CSV.
    Profile {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, default_value_t = 2)]
        dim: u32,
        #[arg(long, allow_hyphen_values = true)]
        energy: f64,
    },
    /// Log-log fit of the even J2 terms against their limit.
    Converge {
        #[arg(long)]
        kappa: u32,
        #[arg(long = "N", default_value_t = 100)]
        n: usize,
    },
}

enum Outcome {
    Ok,
    Numerical,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Numerical) => ExitCode::from(EXIT_NUMERICAL),
        Ok(Outcome::Negative) => ExitCode::from(EXIT_NEGATIVE),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoValidSigma(_) => EXIT_NEGATIVE,
        Error::Io(_) => 1,
        e if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    let g = &cli.grid;
    macro_rules! flag {
        ($($f:ident),*) => {$(
            if let Some(v) = g.$f {
                cfg.$f = v;
            }
        )*};
    }
    flag!(tol_root, max_iter, tol_sign, n_e, n_x, n_y, endpoint_tol);
    cfg.full_domain |= g.full_domain;
    cfg.validate()?;
    Ok(cfg)
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn json_line(w: &mut dyn Write, v: &impl serde::Serialize) -> Result<()> {
    let s = serde_json::to_string(v).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w, "{s}")?;
    Ok(())
}

fn check_dim(d: u32) -> Result<()> {
    if d == 2 || d == 3 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("--dim must be 2 or 3, got {d}")))
    }
}

fn parse_sigma(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad index set {s:?}")))
        })
        .collect()
}

fn band_sigma(kappa: u32, n: usize, sigma: Option<Vec<u32>>) -> Result<Vec<u32>> {
    sigma.or_else(|| reference_sigma(kappa, n)).ok_or_else(|| {
        Error::InvalidInput(format!("no reference index set for kappa {kappa}, band {n}; pass --sigma"))
    })
}

fn operator(a: &OperatorArgs, cfg: &RunConfig) -> Result<ConjugateOperator> {
    check_kappa(a.kappa)?;
    if a.trivial {
        return ConjugateOperator::trivial(a.kappa);
    }
    if let Some(n) = a.band {
        let sigma = band_sigma(a.kappa, n, a.sigma.clone())?;
        return Ok(interpolate_band(a.kappa, n, &sigma, cfg.root_opts())?.0);
    }
    match (&a.sigma, &a.rho) {
        (Some(s), Some(r)) => ConjugateOperator::new(a.kappa, s.clone(), r.clone()),
        _ => Err(Error::InvalidInput(
            "give --trivial, --band, or --sigma with --rho".into(),
        )),
    }
}

fn window(w: &Option<Vec<f64>>, default: (f64, f64)) -> (f64, f64) {
    w.as_ref().map(|v| (v[0], v[1])).unwrap_or(default)
}

fn run(cli: Cli) -> Result<Outcome> {
    let cfg = resolve(&cli)?;
    if cli.jobs == 0 {
        return Err(Error::InvalidInput("--jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build_global()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let opts = cfg.root_opts();
    let mut w = sink(&cli.out)?;
    let outcome = match &cli.cmd {
        Command::Thresholds {
            family,
            kappa,
            n_max,
            well,
            direction,
        } => {
            check_kappa(*kappa)?;
            let mut failed = false;
            let mut emit = |w: &mut dyn Write, n: usize, r: Result<_>| -> Result<()> {
                match r {
                    Ok(s) => json_line(w, &s),
                    Err(e) => {
                        failed = true;
                        json_line(w, &json!({ "kappa": kappa, "n": n, "error": e.to_string() }))
                    }
                }
            };
            if let FamilyArg::Alignment = family {
                for r in alignment_schedules()?.iter().filter(|r| r.kappa == *kappa && r.n <= *n_max) {
                    let s = solve_alignment(r.kappa, r.n, &r.schedule(), r.bracket, opts);
                    emit(&mut *w, r.n, s)?;
                }
            } else {
                for n in 1..=*n_max {
                    let s = match family {
                        FamilyArg::J2 => solve_j2(*kappa, n, opts),
                        FamilyArg::F => solve_f(*kappa, n, opts),
                        _ => {
                            let dir = match direction {
                                DirectionArg::Decreasing => Direction::Decreasing,
                                DirectionArg::Increasing => Direction::Increasing,
                            };
                            solve_well(*kappa, *well, n, dir, opts)
                        }
                    };
                    emit(&mut *w, n, s)?;
                }
            }
            if failed {
                Outcome::Numerical
            } else {
                Outcome::Ok
            }
        }
        Command::Interpolate {
            kappa,
            band,
            sigma,
            search,
            check,
        } => {
            check_kappa(*kappa)?;
            let scan = cfg.scan(SignMode::Positive);
            if !search.is_empty() {
                let pool: Vec<Vec<u32>> = search.iter().map(|s| parse_sigma(s)).collect::<Result<_>>()?;
                let found = search_sigma(*kappa, *band, &pool, &scan, opts)?;
                let rejected: Vec<_> = found
                    .rejected
                    .iter()
                    .map(|c| match &c.verdict {
                        Verdict::Rejected { reason, witness, .. } => {
                            json!({ "sigma": c.sigma, "reason": reason, "witness": witness })
                        }
                        Verdict::Accepted { .. } => json!({ "sigma": c.sigma }),
                    })
                    .collect();
                json_line(
                    &mut *w,
                    &json!({
                        "kappa": kappa,
                        "n": band,
                        "sigma": found.sigma,
                        "rho": found.operator.rho,
                        "certified": true,
                        "min_interior_g": found.report.bands[0].min_interior_g,
                        "rejected": rejected,
                    }),
                )?;
                Outcome::Ok
            } else {
                let sigma = band_sigma(*kappa, *band, sigma.clone())?;
                let (left, right) = band_endpoints(*kappa, *band, opts)?;
                let sys = build_system(*kappa, *band, &left, &right, &sigma)?;
                let op = solve_rho(&sys)?;
                let (dv, dd) = constraint_defects(&op, &sys)?;
                let mut rec = json!({
                    "kappa": kappa,
                    "n": band,
                    "band": [left.energy, right.energy],
                    "sigma": op.sigma,
                    "rho": op.rho,
                    "rank": sys.rank_estimate,
                    "residual": sys.residual(&op),
                    "max_value_defect": dv,
                    "max_derivative_defect": dd,
                });
                let mut outcome = Outcome::Ok;
                if *check {
                    let rep = check_band(&op, 2, left.energy, right.energy, &scan)?;
                    let ok = rep.covers_window();
                    rec["certified"] = json!(ok);
                    rec["witness"] = json!(rep.witness);
                    if !ok {
                        outcome = Outcome::Negative;
                    }
                }
                json_line(&mut *w, &rec)?;
                outcome
            }
        }
        Command::Scan {
            op,
            dim,
            energy,
            window: win,
            require_positive,
        } => {
            check_dim(*dim)?;
            let g = operator(op, &cfg)?;
            let scan = cfg.scan(SignMode::Positive);
            let energies = match win {
                Some(v) => energy_grid(v[0], v[1], cfg.n_e),
                None if energy.is_empty() => {
                    return Err(Error::InvalidInput("give --energy or --window".into()))
                }
                None => energy.clone(),
            };
            let mut csvw = csv::Writer::from_writer(&mut *w);
            let io = |e: csv::Error| Error::Io(e.to_string());
            let mut head = vec!["E", "min_G", "argmin_x"];
            if *dim == 3 {
                head.push("argmin_y");
            }
            head.push("max_G");
            csvw.write_record(&head).map_err(io)?;
            let mut positive = true;
            for e in energies {
                let s = sample_energy(&g, *dim, e, &scan)?;
                positive &= s.min.value > scan.tol_sign;
                let mut rec = vec![e.to_string(), s.min.value.to_string()];
                rec.extend(s.min.point.iter().map(|v| v.to_string()));
                rec.push(s.max.value.to_string());
                csvw.write_record(&rec).map_err(io)?;
            }
            csvw.flush()?;
            drop(csvw);
            if *require_positive && !positive {
                Outcome::Negative
            } else {
                Outcome::Ok
            }
        }
        Command::Bands {
            op,
            dim,
            window: win,
            sign,
        } => {
            check_dim(*dim)?;
            let g = operator(op, &cfg)?;
            let mode = match sign {
                Some(SignArg::Positive) => SignMode::Positive,
                Some(SignArg::Either) => SignMode::EitherSign,
                None if op.trivial => SignMode::EitherSign,
                None => SignMode::Positive,
            };
            let rep = find_bands(&g, *dim, window(win, (0.0, 1.0)), &cfg.scan(mode))?;
            for b in &rep.bands {
                json_line(&mut *w, b)?;
            }
            Outcome::Ok
        }
        Command::Profile { op, dim, energy } => {
            check_dim(*dim)?;
            let g = operator(op, &cfg)?;
            emit_profile(&g, *dim, *energy, cfg.n_x, cfg.n_y, cfg.full_domain, &mut *w)?;
            Outcome::Ok
        }
        Command::Converge { kappa, n } => {
            check_kappa(*kappa)?;
            json_line(&mut *w, &convergence_study(*kappa, *n)?)?;
            Outcome::Ok
        }
    };
    w.flush()?;
    Ok(outcome)
}
