//! Command-line front end: surface analysis, fiber root numbers, sweeps,
//! censuses, trace tables, family construction, and the quartic map.
//!
//! Usage errors and malformed inputs exit with code 2. Undetermined data
//! never aborts a sweep: it lands in the report tallies and the exit
//! code stays 0.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use rootnum::arith::FactorBudget;
use rootnum::averaging::{
    self, autocorr_rational, autocov_progression, av_progression, av_rational,
    AverageReport, LatticeCoset, MultFn, Sector, SweepDomain,
};
use rootnum::builder;
use rootnum::descent::{CurvePoint, QuarticMap};
use rootnum::fiber::{FiberEvaluator, OracleTable};
use rootnum::modform;
use rootnum::poly::{parse_bipoly, parse_hompoly, parse_intpoly, parse_ratfunc};
use rootnum::sieve::{self, CensusMode};
use rootnum::surface::EllipticSurface;
use serde::Serialize;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Parser, Debug, Serialize)]
#[command(name = "rootnum", version, about = "Reduction data, root numbers and sign averages of elliptic-curve families over Q(t)")]
struct Cli {
    /// Worker threads for sweeps (requires the parallel feature).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Read the job from a JSON file mirroring the flags:
    /// {"command": "...", "flag": value, ...}.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug, Serialize, Clone)]
enum Command {
    /// Analyze a surface: places, classes, M, B, B'.
    AnalyzeSurface(SurfaceArgs),
    /// Local data and global root number of one fiber.
    FiberW {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        x: i64,
        #[arg(long)]
        y: i64,
        #[arg(long)]
        oracle: Option<PathBuf>,
    },
    /// Average the fiber root number over a domain.
    Average {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: Format,
    },
    /// Autocovariance of the fiber root number at a lag.
    Autocov {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        domain: DomainArgs,
        /// Integer lag (progression domain).
        #[arg(long)]
        k: Option<i64>,
        /// Rational lag p/q (rational domain).
        #[arg(long)]
        t0: Option<String>,
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: Format,
    },
    /// Average lambda (or mu) of a polynomial's values.
    SweepLambda {
        /// Polynomial in x (univariate) or x, y / a, b (bivariate).
        #[arg(long)]
        poly: String,
        /// Use the Moebius function instead of Liouville lambda.
        #[arg(long)]
        mu: bool,
        #[command(flatten)]
        domain: DomainArgs,
        /// Sweep a, b >= 1 with P(a, b) <= this bound instead of a box.
        #[arg(long)]
        value_bound: Option<i128>,
        /// Drop the gcd(x, y) = 1 restriction on the box domain.
        #[arg(long)]
        all_pairs: bool,
        #[arg(long, default_value = "json")]
        format: Format,
    },
    /// Square-free census of polynomial values, with delta counters.
    SieveCensus {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        n: u64,
        /// Count over coprime pairs of the box instead of 1..N.
        #[arg(long)]
        bivariate: bool,
        /// Truncation bound of the density product.
        #[arg(long)]
        trunc: Option<u64>,
        /// Also count the large-prime-square exceptional set.
        #[arg(long)]
        delta: bool,
        #[arg(long, default_value = "json")]
        format: Format,
    },
    /// Fricke trace and newform sign sum per level.
    NewformTrace {
        #[arg(long)]
        level: u64,
        /// Inclusive end of a level range.
        #[arg(long)]
        level_end: Option<u64>,
        #[arg(long, default_value_t = 2)]
        weight: u64,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Construct a family from (j, d) or from a target M polynomial.
    BuildFamily {
        #[arg(long)]
        j: Option<String>,
        #[arg(long)]
        d: Option<String>,
        /// Squarefree homogeneous target for the multiplicative places.
        #[arg(long)]
        target_m: Option<String>,
    },
    /// Map a point of d y^2 = f(x) to the Jacobian Weierstrass model.
    QuarticMap {
        /// Degree-4 polynomial in t.
        #[arg(long)]
        quartic: String,
        #[arg(long)]
        d: i64,
        /// Base point: d s^2 = f(r).
        #[arg(long)]
        r: String,
        #[arg(long)]
        s: String,
        /// Optional second point to push through the map.
        #[arg(long)]
        map_x: Option<String>,
        #[arg(long)]
        map_y: Option<String>,
    },
}

#[derive(Args, Debug, Serialize, Clone)]
struct SurfaceArgs {
    /// c4 as a rational function of t.
    #[arg(long)]
    c4: Option<String>,
    /// c6 as a rational function of t.
    #[arg(long)]
    c6: Option<String>,
    /// JSON file with {"c4": "...", "c6": "..."} instead of flags.
    #[arg(long)]
    surface: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize, Clone)]
struct DomainArgs {
    /// Box half-width (rational domain) or range end (progression).
    #[arg(long, default_value_t = 100)]
    n: u64,
    /// Integer progression `a,m`: average over n = a mod m instead of
    /// rational points.
    #[arg(long)]
    progression: Option<String>,
    /// Sector: `full`, a quadrant (`++`, `+-`, `-+`, `--`), or
    /// `x0,y0:x1,y1`.
    #[arg(long)]
    sector: Option<String>,
    /// Shorthand for --sector with a quadrant spec.
    #[arg(long)]
    quadrant: Option<String>,
    /// Lattice coset `a,b;c,d` with optional `+ox,oy`.
    #[arg(long)]
    lattice: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Everything echoed into reports for reproducibility.
#[derive(Serialize)]
struct Envelope<T: Serialize> {
    version: &'static str,
    config: serde_json::Value,
    report: T,
}

fn main() {
    let argv = expand_config(std::env::args().collect::<Vec<_>>());
    let argv = match argv {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    };
    let cli = Cli::parse_from(&argv);
    let code = match run(cli, &argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

/// Replaces `--config file` invocations by the argv the file encodes.
fn expand_config(argv: Vec<String>) -> Result<Vec<String>> {
    let pos = match argv.iter().position(|a| a == "--config") {
        None => return Ok(argv),
        Some(p) => p,
    };
    let path = argv
        .get(pos + 1)
        .ok_or_else(|| anyhow!("--config needs a file"))?;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let v: serde_json::Value = serde_json::from_str(&text).context("parsing config JSON")?;
    let obj = v.as_object().ok_or_else(|| anyhow!("config must be a JSON object"))?;
    let command = obj
        .get("command")
        .and_then(|c| c.as_str())
        .ok_or_else(|| anyhow!("config needs a \"command\" string"))?;
    let mut out = vec![argv[0].clone(), command.to_string()];
    let mut keys: Vec<&String> = obj.keys().filter(|k| *k != "command").collect();
    keys.sort();
    for k in keys {
        let val = &obj[k];
        match val {
            serde_json::Value::Bool(true) => out.push(format!("--{k}")),
            serde_json::Value::Bool(false) | serde_json::Value::Null => {}
            serde_json::Value::String(s) => {
                out.push(format!("--{k}"));
                out.push(s.clone());
            }
            other => {
                out.push(format!("--{k}"));
                out.push(other.to_string());
            }
        }
    }
    // keep any extra command-line flags that follow the config pair
    for (i, a) in argv.iter().enumerate() {
        if i == 0 || i == pos || i == pos + 1 {
            continue;
        }
        out.push(a.clone());
    }
    Ok(out)
}

fn run(cli: Cli, argv: &[String]) -> Result<()> {
    let config_echo = serde_json::Value::Array(
        argv.iter()
            .skip(1)
            .map(|a| serde_json::Value::String(a.clone()))
            .collect(),
    );
    let command = cli.command.clone().ok_or_else(|| anyhow!("a subcommand is required"))?;
    let jobs = cli.jobs;
    let out = cli.out.clone();
    let body = with_pool(jobs, move || dispatch(command))?;
    let text = match body {
        Output::Json(v) => {
            let env = Envelope {
                version: rootnum::VERSION,
                config: config_echo,
                report: v,
            };
            serde_json::to_string_pretty(&env).expect("serializable") + "\n"
        }
        Output::Csv(rows) => {
            let header = format!(
                "# rootnum {} config={}\n",
                rootnum::VERSION,
                serde_json::to_string(&config_echo).expect("serializable")
            );
            header + &rows.join("\n") + "\n"
        }
    };
    match out {
        Some(path) => std::fs::write(&path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

enum Output {
    Json(serde_json::Value),
    Csv(Vec<String>),
}

#[cfg(feature = "parallel")]
fn with_pool<T>(jobs: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T>
where
    T: Send,
{
    match jobs {
        None => f(),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .context("building thread pool")?
            .install(f),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_pool<T>(jobs: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T>
where
    T: Send,
{
    if jobs.is_some() {
        eprintln!("note: built without the parallel feature; --jobs ignored");
    }
    f()
}

fn dispatch(cmd: Command) -> Result<Output> {
    let budget = FactorBudget::default();
    match cmd {
        Command::AnalyzeSurface(s) => {
            let surface = load_surface(&s)?;
            let an = surface.analyze().map_err(|e| anyhow!("{e}"))?;
            Ok(Output::Json(serde_json::to_value(an.report())?))
        }
        Command::FiberW {
            surface,
            x,
            y,
            oracle,
        } => {
            let surface = load_surface(&surface)?;
            let an = surface.analyze().map_err(|e| anyhow!("{e}"))?;
            let ev = FiberEvaluator::new(&an).map_err(|e| anyhow!("{e}"))?;
            let table = load_oracle(oracle.as_deref())?;
            let outcome = ev.eval(x, y, table.as_ref(), &budget);
            let value = match outcome {
                rootnum::fiber::FiberOutcome::Singular => {
                    serde_json::json!({"x": x, "y": y, "singular": true, "w_convention": 1})
                }
                rootnum::fiber::FiberOutcome::FactorizationIncomplete => {
                    serde_json::json!({"x": x, "y": y, "factorization_incomplete": true})
                }
                rootnum::fiber::FiberOutcome::Report(r) => serde_json::to_value(r)?,
            };
            Ok(Output::Json(value))
        }
        Command::Average {
            surface,
            domain,
            oracle,
            format,
        } => {
            let surface = load_surface(&surface)?;
            let an = surface.analyze().map_err(|e| anyhow!("{e}"))?;
            let ev = FiberEvaluator::new(&an).map_err(|e| anyhow!("{e}"))?;
            let table = load_oracle(oracle.as_deref())?;
            let report = match domain.progression_pair()? {
                Some((a, m)) => av_progression(
                    |n| averaging::w_sample(&ev, table.as_ref(), &budget, 1, n),
                    a,
                    m,
                    domain.n,
                ),
                None => {
                    let (sector, lattice) = domain.rational_domain()?;
                    av_rational(
                        |x, y| averaging::w_sample(&ev, table.as_ref(), &budget, x, y),
                        &sector,
                        &lattice,
                        domain.n,
                    )
                }
            };
            emit_average(report, "W", format)
        }
        Command::Autocov {
            surface,
            domain,
            k,
            t0,
            oracle,
            format,
        } => {
            let surface = load_surface(&surface)?;
            let an = surface.analyze().map_err(|e| anyhow!("{e}"))?;
            let ev = FiberEvaluator::new(&an).map_err(|e| anyhow!("{e}"))?;
            let table = load_oracle(oracle.as_deref())?;
            let report = match domain.progression_pair()? {
                Some((a, m)) => {
                    let k = k.ok_or_else(|| anyhow!("--k is required with --progression"))?;
                    autocov_progression(
                        |n| averaging::w_sample(&ev, table.as_ref(), &budget, 1, n),
                        a,
                        m,
                        k,
                        domain.n,
                    )
                }
                None => {
                    let t0s = t0.ok_or_else(|| anyhow!("--t0 is required on the rational domain"))?;
                    let t0 = parse_rational(&t0s)?;
                    let (sector, lattice) = domain.rational_domain()?;
                    autocorr_rational(
                        |x, y| averaging::w_sample(&ev, table.as_ref(), &budget, x, y),
                        &sector,
                        &lattice,
                        &t0,
                        domain.n,
                    )
                }
            };
            emit_average(report, "W-autocov", format)
        }
        Command::SweepLambda {
            poly,
            mu,
            domain,
            value_bound,
            all_pairs,
            format,
        } => {
            let p = parse_bipoly(&poly).map_err(|e| anyhow!("--poly: {e}"))?;
            if p.is_constant_times_square() {
                bail!("--poly must not be a constant times a square");
            }
            let mode = if mu { MultFn::Moebius } else { MultFn::Liouville };
            let sweep_domain = if let Some(bound) = value_bound {
                SweepDomain::ValueBound { bound }
            } else if let Some((a, m)) = domain.progression_pair()? {
                SweepDomain::Progression { a, m, n: domain.n }
            } else {
                let (sector, lattice) = domain.rational_domain()?;
                SweepDomain::Box {
                    n: domain.n,
                    coprime: !all_pairs,
                    sector,
                    lattice,
                }
            };
            let report = averaging::sweep_lambda_poly(&p, &sweep_domain, mode, &budget);
            emit_average(report, if mu { "mu" } else { "lambda" }, format)
        }
        Command::SieveCensus {
            poly,
            n,
            bivariate,
            trunc,
            delta,
            format,
        } => {
            let p = parse_bipoly(&poly).map_err(|e| anyhow!("--poly: {e}"))?;
            let mode = if bivariate {
                CensusMode::BivariateCoprime
            } else {
                CensusMode::Univariate
            };
            let trunc = trunc.unwrap_or(if bivariate { 100 } else { 1000 });
            let report = sieve::census(&p, n, mode, trunc, &budget);
            let delta_counts = if delta {
                Some(sieve::delta_exceptional(&p, n, mode, true, &budget))
            } else {
                None
            };
            match format {
                Format::Json => {
                    let mut v = serde_json::to_value(&report)?;
                    if let Some((d, bad)) = delta_counts {
                        v["delta"] = serde_json::json!(d);
                        v["delta_factorization_incomplete"] = serde_json::json!(bad);
                    }
                    Ok(Output::Json(v))
                }
                Format::Csv => {
                    let mut rows = vec![format!(
                        "{},delta,delta_factorization_incomplete",
                        rootnum::sieve::CensusReport::csv_header()
                    )];
                    let (d, bad) = delta_counts.unwrap_or((0, 0));
                    rows.push(format!("{},{},{}", report.csv_row(), d, bad));
                    Ok(Output::Csv(rows))
                }
            }
        }
        Command::NewformTrace {
            level,
            level_end,
            weight,
            format,
        } => {
            let end = level_end.unwrap_or(level);
            if end < level {
                bail!("--level-end must be at least --level");
            }
            let reports: Vec<_> = (level..=end).map(|n| modform::trace_report(n, weight)).collect();
            match format {
                Format::Json => Ok(Output::Json(serde_json::to_value(&reports)?)),
                Format::Csv => {
                    let mut rows = vec![modform::TraceReport::csv_header().to_string()];
                    rows.extend(reports.iter().map(|r| r.csv_row()));
                    Ok(Output::Csv(rows))
                }
            }
        }
        Command::BuildFamily { j, d, target_m } => {
            let recipe = match (j, d, target_m) {
                (Some(j), Some(d), None) => {
                    let j = parse_ratfunc(&j).map_err(|e| anyhow!("--j: {e}"))?;
                    let d = parse_ratfunc(&d).map_err(|e| anyhow!("--d: {e}"))?;
                    builder::recipe_from_j_d(&j, &d).map_err(|e| anyhow!("{e}"))?
                }
                (None, None, Some(t)) => {
                    let p = parse_hompoly(&t).map_err(|e| anyhow!("--target-m: {e}"))?;
                    builder::target_m(&p).map_err(|e| anyhow!("{e}"))?
                }
                _ => bail!("give either --j and --d, or --target-m"),
            };
            let report = builder::recipe_report(&recipe).map_err(|e| anyhow!("{e}"))?;
            Ok(Output::Json(serde_json::to_value(report)?))
        }
        Command::QuarticMap {
            quartic,
            d,
            r,
            s,
            map_x,
            map_y,
        } => {
            let f = parse_intpoly(&quartic).map_err(|e| anyhow!("--quartic: {e}"))?;
            let d = BigInt::from(d);
            let r = parse_rational(&r)?;
            let s = parse_rational(&s)?;
            let map = QuarticMap::new(&f, &d, &r, &s).map_err(|e| anyhow!("{e}"))?;
            let mut v = serde_json::json!({
                "curve": {
                    "d": map.target.d.to_string(),
                    "a2": map.target.a2.to_string(),
                    "a4": map.target.a4.to_string(),
                    "a6": map.target.a6.to_string(),
                },
            });
            if let (Some(xs), Some(ys)) = (map_x, map_y) {
                let x = parse_rational(&xs)?;
                let y = parse_rational(&ys)?;
                let img = map.map_point(&x, &y);
                let on_curve = map.target.contains(&img);
                v["image"] = match img {
                    CurvePoint::Infinity => serde_json::json!({"infinity": true}),
                    CurvePoint::Affine(ix, iy) => serde_json::json!({
                        "x": ix.to_string(),
                        "y": iy.to_string(),
                        "on_curve": on_curve,
                    }),
                };
            }
            Ok(Output::Json(v))
        }
    }
}

fn emit_average(report: AverageReport, label: &str, format: Format) -> Result<Output> {
    match format {
        Format::Json => Ok(Output::Json(serde_json::to_value(&report)?)),
        Format::Csv => Ok(Output::Csv(vec![
            AverageReport::csv_header().to_string(),
            report.csv_row(label),
        ])),
    }
}

impl DomainArgs {
    fn progression_pair(&self) -> Result<Option<(i64, u64)>> {
        match &self.progression {
            None => Ok(None),
            Some(s) => {
                let (a, m) = s
                    .split_once(',')
                    .ok_or_else(|| anyhow!("--progression wants 'a,m'"))?;
                let a: i64 = a.trim().parse().context("progression offset")?;
                let m: u64 = m.trim().parse().context("progression modulus")?;
                if m == 0 {
                    bail!("progression modulus must be positive");
                }
                Ok(Some((a, m)))
            }
        }
    }

    fn rational_domain(&self) -> Result<(Sector, LatticeCoset)> {
        let sector = match (&self.sector, &self.quadrant) {
            (Some(_), Some(_)) => bail!("give --sector or --quadrant, not both"),
            (Some(s), None) => Sector::parse(s).map_err(|e| anyhow!("--sector: {e}"))?,
            (None, Some(q)) => Sector::quadrant(q).map_err(|e| anyhow!("--quadrant: {e}"))?,
            (None, None) => Sector::Full,
        };
        let lattice = match &self.lattice {
            Some(l) => LatticeCoset::parse(l).map_err(|e| anyhow!("--lattice: {e}"))?,
            None => LatticeCoset::full(),
        };
        Ok((sector, lattice))
    }
}

fn load_surface(args: &SurfaceArgs) -> Result<EllipticSurface> {
    let (c4s, c6s) = match (&args.c4, &args.c6, &args.surface) {
        (Some(c4), Some(c6), None) => (c4.clone(), c6.clone()),
        (None, None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let v: serde_json::Value = serde_json::from_str(&text).context("surface JSON")?;
            let get = |k: &str| -> Result<String> {
                v.get(k)
                    .and_then(|x| x.as_str())
                    .map(str::to_string)
                    .ok_or_else(|| anyhow!("surface JSON needs string field '{k}'"))
            };
            (get("c4")?, get("c6")?)
        }
        _ => bail!("give --c4 and --c6, or --surface file"),
    };
    let c4 = parse_ratfunc(&c4s).map_err(|e| anyhow!("--c4: {e}"))?;
    let c6 = parse_ratfunc(&c6s).map_err(|e| anyhow!("--c6: {e}"))?;
    EllipticSurface::new(c4, c6).map_err(|e| anyhow!("{e}"))
}

fn load_oracle(path: Option<&std::path::Path>) -> Result<Option<OracleTable>> {
    match path {
        None => Ok(None),
        Some(p) => Ok(Some(OracleTable::load(p).map_err(|e| anyhow!("{e}"))?)),
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| anyhow!("bad rational '{s}': {e}"))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| anyhow!("bad rational '{s}': {e}"))?;
        if d == BigInt::from(0) {
            bail!("bad rational '{s}': zero denominator");
        }
        Ok(BigRational::new(n, d))
    } else {
        let n = BigInt::from_str(s).map_err(|e| anyhow!("bad rational '{s}': {e}"))?;
        Ok(BigRational::from(n))
    }
}

