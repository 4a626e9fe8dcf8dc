mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kcycle::arith;
use kcycle::asymptotics::{estimate_ratio, AsymptoticConfig};
use kcycle::characters::{char_general, char_mn, char_ratio_kcycle, dimension, CharacterTable, GeneralBudget};
use kcycle::mixing::{
    coset_sign, cutoff_scan, exact_distribution, exact_tv, moments_fixed_points, tv_lower_bound, tv_upper_bound_exact,
    tv_upper_bound_regimes, tv_upper_bound_squared, write_cutoff_csv, CosetUniform, DEFAULT_BOUND_MODE_CAP,
};
use kcycle::partitions::{partition_list, CycleType, Partition};
use kcycle::verify::{run_suite, SuiteReport, SUITES};
use kcycle::walk::{empirical_tv, empirical_tv_to_coset, run_walk, WalkConfig, WORKERS_ENV};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};

use output::{csv_string, emit, json_f64, json_rational, json_string, sig6, text_rational, text_table, Format};

const TABLE_CAP: usize = kcycle::characters::DEFAULT_TABLE_CAP;
/// Largest `n` for which `asym --all` sweeps every partition.
const ASYM_ALL_CAP: usize = 40;

#[derive(Parser, Debug)]
#[command(name = "kcycle", version, about = "Character ratios and mixing of the random k-cycle walk on S_n")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel sweeps and simulation.
    #[arg(long, env = WORKERS_ENV, global = true)]
    workers: Option<usize>,
    /// Lift the default size caps on exact tables, general characters and sweeps.
    #[arg(long, global = true)]
    unsafe_caps: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact character ratio at a k-cycle.
    CharRatio {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::Residue)]
        method: Method,
    },
    /// Full character table as CSV.
    CharTable {
        #[arg(long)]
        n: usize,
    },
    /// Asymptotic estimates of character ratios with their regimes.
    Asym {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        lambda: Option<Partition>,
        /// Every partition of n.
        #[arg(long)]
        all: bool,
        /// TOML file overriding the estimate constants.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Total-variation distance to the coset uniform after t steps.
    Tv {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// TOML file overriding the estimate constants (bound mode).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Exact distance and both bounds for t = 0..=t-max.
    Cutoff {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t_max: usize,
    },
    /// Chebyshev lower bound from the fixed-point statistic.
    LowerBound {
        #[arg(long)]
        n: usize,
        /// Number of non-fixed points of the generator.
        #[arg(long)]
        k: usize,
        /// Number of two-cycles of the generator.
        #[arg(long, default_value_t = 0)]
        j: usize,
        #[arg(long)]
        t: usize,
    },
    /// Monte Carlo simulation of the walk.
    Simulate {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// TOML file with n, k, t, samples and optional seed and workers; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run a named invariant suite, or `all`.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n_max: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Residue,
    Mn,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Bound,
}

/// Failure classes, mapped onto exit codes.
enum Failure {
    /// Bad flags or parameters: exit 2.
    Usage(String),
    /// Runtime failure such as an unwritable output: exit 1.
    Runtime(String),
}

impl From<kcycle::Error> for Failure {
    fn from(e: kcycle::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<(String, bool), Failure>;

struct Caps {
    table: usize,
    general: GeneralBudget,
    asym_all: usize,
    bound_mode: usize,
}

impl Caps {
    fn new(unsafe_caps: bool) -> Self {
        if unsafe_caps {
            Caps { table: usize::MAX, general: GeneralBudget(u128::MAX), asym_all: usize::MAX, bound_mode: usize::MAX }
        } else {
            Caps {
                table: TABLE_CAP,
                general: GeneralBudget::default(),
                asym_all: ASYM_ALL_CAP,
                bound_mode: DEFAULT_BOUND_MODE_CAP,
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.common.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    match run(&cli) {
        Ok((body, ok)) => {
            if let Err(e) = emit(cli.common.out.as_deref(), &body) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let caps = Caps::new(cli.common.unsafe_caps);
    let fmt = cli.common.format;
    match &cli.command {
        Command::CharRatio { n, lambda, k, method } => char_ratio(fmt, &caps, *n, lambda, *k, *method),
        Command::CharTable { n } => char_table(fmt, &caps, *n),
        Command::Asym { n, k, lambda, all, config } => {
            let cfg = load_asym_config(config.as_deref())?;
            asym(fmt, &caps, &cfg, *n, *k, lambda.as_ref(), *all)
        }
        Command::Tv { n, k, t, mode, config } => {
            let cfg = load_asym_config(config.as_deref())?;
            tv(fmt, &caps, &cfg, *n, *k, *t, *mode)
        }
        Command::Cutoff { n, k, t_max } => cutoff(fmt, &caps, *n, *k, *t_max),
        Command::LowerBound { n, k, j, t } => lower_bound(fmt, *n, *k, *j, *t),
        Command::Simulate { n, k, t, samples, seed, config } => {
            let mut cfg = load_walk_config(config.as_deref(), *n, *k, *t, *samples)?;
            if let Some(s) = seed {
                cfg.seed = *s;
            }
            if let Some(w) = cli.common.workers {
                cfg.workers = w;
            }
            simulate(fmt, &caps, &cfg)
        }
        Command::Verify { suite, n_max } => verify(fmt, suite, *n_max),
    }
}

fn check_lambda(n: usize, lambda: &Partition) -> Result<(), Failure> {
    if lambda.n() != n {
        return Err(Failure::Usage(format!("--lambda {lambda} is a partition of {}, not of --n {n}", lambda.n())));
    }
    Ok(())
}

fn check_k(n: usize, k: usize) -> Result<(), Failure> {
    if k < 2 || k > n {
        return Err(Failure::Usage(format!("--k must satisfy 2 <= k <= n, got k = {k}, n = {n}")));
    }
    Ok(())
}

fn table(caps: &Caps, n: usize) -> Result<CharacterTable, Failure> {
    Ok(CharacterTable::with_cap(n, caps.table)?)
}

fn read_toml<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::Usage(format!("invalid config {}: {e}", path.display())))
}

fn load_asym_config(path: Option<&Path>) -> Result<AsymptoticConfig, Failure> {
    let cfg = match path {
        Some(p) => read_toml(p)?,
        None => AsymptoticConfig::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Walk parameters from an optional file, with flags taking precedence.
fn load_walk_config(
    path: Option<&Path>,
    n: Option<usize>,
    k: Option<usize>,
    t: Option<usize>,
    samples: Option<u64>,
) -> Result<WalkConfig, Failure> {
    #[derive(Deserialize, Default)]
    #[serde(deny_unknown_fields)]
    struct Partial {
        n: Option<usize>,
        k: Option<usize>,
        t: Option<usize>,
        samples: Option<u64>,
        seed: Option<u64>,
        workers: Option<usize>,
    }
    let file: Partial = match path {
        Some(p) => read_toml(p)?,
        None => Partial::default(),
    };
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| Failure::Usage(format!("simulate needs --{name}")));
    let cfg = WalkConfig {
        n: need(n.or(file.n), "n")?,
        k: need(k.or(file.k), "k")?,
        t: need(t.or(file.t), "t")?,
        samples: samples.or(file.samples).ok_or_else(|| Failure::Usage("simulate needs --samples".into()))?,
        seed: file.seed.unwrap_or(0),
        workers: file.workers.unwrap_or_else(kcycle::walk::default_workers),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn char_ratio(fmt: Format, caps: &Caps, n: usize, lambda: &Partition, k: usize, method: Method) -> Outcome {
    check_lambda(n, lambda)?;
    check_k(n, k)?;
    let ratio = match method {
        Method::Residue => char_ratio_kcycle(lambda, k)?.into_inner(),
        Method::Mn | Method::General => {
            let rho = CycleType::k_cycle(n, k)?;
            let chi = match method {
                Method::Mn => char_mn(lambda, &rho)?,
                _ => char_general(lambda, &rho, caps.general)?,
            };
            BigRational::new(chi, BigInt::from(dimension(lambda)))
        }
    };
    let body = match fmt {
        Format::Text => format!("{ratio}\n"),
        Format::Csv => csv_string(
            &["n", "lambda", "k", "method", "ratio", "ratio_f64"],
            &[vec![
                n.to_string(),
                lambda.to_string(),
                k.to_string(),
                method_name(method).into(),
                ratio.to_string(),
                sig6(arith::to_f64(&ratio)),
            ]],
        )?,
        Format::Json => json_string(&json!({
            "n": n,
            "lambda": lambda.to_string(),
            "k": k,
            "method": method_name(method),
            "ratio": json_rational(&ratio),
        })),
    };
    Ok((body, true))
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Residue => "residue",
        Method::Mn => "mn",
        Method::General => "general",
    }
}

fn char_table(fmt: Format, caps: &Caps, n: usize) -> Outcome {
    let t = table(caps, n)?;
    let body = match fmt {
        Format::Text | Format::Csv => t.to_csv_string()?,
        Format::Json => json_string(&t.to_json()),
    };
    Ok((body, true))
}

fn asym(
    fmt: Format,
    caps: &Caps,
    cfg: &AsymptoticConfig,
    n: usize,
    k: usize,
    lambda: Option<&Partition>,
    all: bool,
) -> Outcome {
    check_k(n, k)?;
    let lambdas = match lambda {
        Some(l) => {
            check_lambda(n, l)?;
            vec![l.clone()]
        }
        None if all => {
            if n > caps.asym_all {
                return Err(Failure::Usage(format!(
                    "--all sweeps p(n) partitions; n = {n} exceeds the cap of {} (see --unsafe-caps)",
                    caps.asym_all
                )));
            }
            partition_list(n)?
        }
        None => return Err(Failure::Usage("asym needs --lambda or --all".into())),
    };

    struct Row {
        lambda: Partition,
        frobenius: String,
        regime: String,
        log_main: f64,
        sign: i8,
        log_err: f64,
        exact: BigRational,
    }
    let mut rows = Vec::with_capacity(lambdas.len());
    for l in lambdas {
        let est = estimate_ratio(&l, k, cfg)?;
        let exact = char_ratio_kcycle(&l, k)?.into_inner();
        rows.push(Row {
            frobenius: l.to_frobenius().to_string(),
            regime: est.regime.to_string(),
            log_main: est.log_main_term,
            sign: est.sign,
            log_err: est.log_error_bound,
            exact,
            lambda: l,
        });
    }

    let header = ["lambda", "frobenius", "regime", "sign", "log_main_term", "log_error_bound", "exact_log_ratio"];
    let cells = |r: &Row| {
        vec![
            r.lambda.to_string(),
            r.frobenius.clone(),
            r.regime.clone(),
            r.sign.to_string(),
            sig6(r.log_main),
            sig6(r.log_err),
            sig6(arith::ln_abs(&r.exact)),
        ]
    };
    let body = match fmt {
        Format::Text => text_table(&header, &rows.iter().map(cells).collect::<Vec<_>>()),
        Format::Csv => csv_string(&header, &rows.iter().map(cells).collect::<Vec<_>>())?,
        Format::Json => json_string(&json!({
            "n": n,
            "k": k,
            "rows": rows.iter().map(|r| json!({
                "lambda": r.lambda.to_string(),
                "frobenius": r.frobenius,
                "regime": r.regime,
                "sign": r.sign,
                "log_main_term": json_f64(r.log_main),
                "log_error_bound": json_f64(r.log_err),
                "exact_ratio": json_rational(&r.exact),
                "exact_log_ratio": json_f64(arith::ln_abs(&r.exact)),
            })).collect::<Vec<Value>>(),
        })),
    };
    Ok((body, true))
}

fn tv(fmt: Format, caps: &Caps, cfg: &AsymptoticConfig, n: usize, k: usize, t: usize, mode: Mode) -> Outcome {
    check_k(n, k)?;
    let class = CycleType::k_cycle(n, k)?;
    // the exact distance needs the full table; bound mode runs past it and omits the distance
    let exact_table = match mode {
        Mode::Exact => Some(table(caps, n)?),
        Mode::Bound => (n <= caps.table).then(|| table(caps, n)).transpose()?,
    };
    let (upper, upper_sq) = match mode {
        Mode::Exact => {
            let tab = exact_table.as_ref().expect("exact mode builds the table");
            (tv_upper_bound_exact(tab, &class, t)?, Some(tv_upper_bound_squared(tab, &class, t)?))
        }
        Mode::Bound => (tv_upper_bound_regimes(n, k, t, cfg, caps.bound_mode)?, None),
    };
    let exact = exact_table.as_ref().map(|tab| exact_tv(tab, &class, t)).transpose()?;
    let sign = coset_sign(&class, t);

    let body = match fmt {
        Format::Text => {
            let mut s = format!("upper {}\n", sig6(upper));
            if let Some(e) = &exact {
                s.push_str(&format!("exact {}\n", text_rational(e)));
            }
            s.push_str(&format!("coset_sign {sign}\n"));
            s
        }
        Format::Csv => csv_string(
            &["n", "k", "t", "mode", "tv_upper", "tv_exact", "tv_exact_f64", "coset_sign"],
            &[vec![
                n.to_string(),
                k.to_string(),
                t.to_string(),
                mode_name(mode).into(),
                sig6(upper),
                exact.as_ref().map(|e| e.to_string()).unwrap_or_default(),
                exact.as_ref().map(|e| sig6(arith::to_f64(e))).unwrap_or_default(),
                sign.to_string(),
            ]],
        )?,
        Format::Json => json_string(&json!({
            "n": n,
            "k": k,
            "t": t,
            "mode": mode_name(mode),
            "upper": json_f64(upper),
            "upper_squared": upper_sq.as_ref().map(json_rational),
            "exact": exact.as_ref().map(json_rational),
            "coset_sign": sign,
        })),
    };
    Ok((body, true))
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Exact => "exact",
        Mode::Bound => "bound",
    }
}

fn cutoff(fmt: Format, caps: &Caps, n: usize, k: usize, t_max: usize) -> Outcome {
    check_k(n, k)?;
    let tab = table(caps, n)?;
    let class = CycleType::k_cycle(n, k)?;
    let rows = cutoff_scan(&tab, &class, 0..=t_max)?;
    let body = match fmt {
        Format::Text | Format::Csv => {
            let mut buf = Vec::new();
            write_cutoff_csv(&rows, &mut buf)?;
            String::from_utf8(buf).expect("csv output is utf-8")
        }
        Format::Json => json_string(&json!({
            "n": n,
            "k": k,
            "rows": rows.iter().map(|r| json!({
                "t": r.t,
                "tv_exact": json_rational(&r.tv_exact),
                "tv_upper": json_f64(r.tv_upper),
                "tv_lower": json_f64(r.tv_lower),
                "coset_sign": r.coset_sign,
            })).collect::<Vec<Value>>(),
        })),
    };
    Ok((body, true))
}

fn lower_bound(fmt: Format, n: usize, k: usize, j: usize, t: usize) -> Outcome {
    let m = moments_fixed_points(n, k, j, t)?;
    let lower = tv_lower_bound(n, k, j, t)?;
    let body = match fmt {
        Format::Text => format!(
            "lower {}\nmean {}\nsecond_moment {}\nvariance {}\n",
            sig6(lower),
            text_rational(&m.mean),
            text_rational(&m.second_moment),
            text_rational(&m.variance)
        ),
        Format::Csv => csv_string(
            &["n", "k", "j", "t", "tv_lower", "mean", "second_moment", "variance"],
            &[vec![
                n.to_string(),
                k.to_string(),
                j.to_string(),
                t.to_string(),
                sig6(lower),
                m.mean.to_string(),
                m.second_moment.to_string(),
                m.variance.to_string(),
            ]],
        )?,
        Format::Json => json_string(&json!({
            "n": n,
            "k": k,
            "j": j,
            "t": t,
            "lower": json_f64(lower),
            "mean": json_rational(&m.mean),
            "second_moment": json_rational(&m.second_moment),
            "variance": json_rational(&m.variance),
        })),
    };
    Ok((body, true))
}

fn simulate(fmt: Format, caps: &Caps, cfg: &WalkConfig) -> Outcome {
    let hist = run_walk(cfg)?;
    let u = CosetUniform::at_step(&cfg.generator(), cfg.t);
    let tv_uniform = empirical_tv_to_coset(&hist, &u)?;
    let tv_exact = if cfg.n <= caps.table {
        let tab = table(caps, cfg.n)?;
        let dist = exact_distribution(&tab, &cfg.generator(), cfg.t)?;
        Some(empirical_tv(&hist, &dist)?)
    } else {
        None
    };
    if hist.parity_violations() > 0 {
        return Err(Failure::Runtime(format!("{} samples left their coset", hist.parity_violations())));
    }

    let body = match fmt {
        Format::Text | Format::Csv => {
            let mut buf = Vec::new();
            hist.write_csv(&mut buf)?;
            let mut s = String::from_utf8(buf).expect("csv output is utf-8");
            if fmt == Format::Text {
                s.push_str(&format!("tv_to_coset_uniform {}\n", sig6(tv_uniform)));
                if let Some(e) = tv_exact {
                    s.push_str(&format!("tv_to_exact_law {}\n", sig6(e)));
                }
            } else {
                eprintln!("tv_to_coset_uniform {}", sig6(tv_uniform));
                if let Some(e) = tv_exact {
                    eprintln!("tv_to_exact_law {}", sig6(e));
                }
            }
            s
        }
        Format::Json => json_string(&json!({
            "config": {
                "n": cfg.n,
                "k": cfg.k,
                "t": cfg.t,
                "samples": cfg.samples,
                "seed": cfg.seed,
                "workers": cfg.workers,
            },
            "histogram": hist.to_json(),
            "tv_to_coset_uniform": json_f64(tv_uniform),
            "tv_to_exact_law": tv_exact.map(json_f64),
        })),
    };
    Ok((body, true))
}

fn verify(fmt: Format, suite: &str, n_max: Option<usize>) -> Outcome {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(Failure::Usage(format!("unknown suite {suite:?}; known: all, {}", SUITES.join(", "))));
    };
    let reports: Vec<SuiteReport> = names.iter().map(|s| run_suite(s, n_max)).collect::<Result<_, _>>()?;
    let ok = reports.iter().all(SuiteReport::ok);

    let body = match fmt {
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let status = if r.ok() { "PASS" } else { "FAIL" };
                s.push_str(&format!("{status} {}: {} passed, {} failed\n", r.suite, r.passed, r.failed));
                for f in &r.failures {
                    s.push_str(&format!("  {f}\n"));
                }
            }
            s
        }
        Format::Csv => csv_string(
            &["suite", "passed", "failed"],
            &reports
                .iter()
                .map(|r| vec![r.suite.clone(), r.passed.to_string(), r.failed.to_string()])
                .collect::<Vec<_>>(),
        )?,
        Format::Json => json_string(&json!({ "ok": ok, "suites": reports })),
    };
    Ok((body, ok))
}
