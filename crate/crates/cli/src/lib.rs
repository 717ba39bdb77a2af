//! The `loopeq` command line: parses configs, dispatches to the solver, the
//! map enumerator, the spherical-integral tables and the Monte Carlo checks,
//! and prints JSON.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use loopeq_core::cumulants::{cumulants_from_moments, cumulants_via_moebius};
use loopeq_core::hciz::{hciz_series, named_map};
use loopeq_core::json::{series_to_json, weight_to_json};
use loopeq_core::maps::to_json_lines;
use loopeq_core::verify::{run_suite, SUITES};
use loopeq_core::weight::format_rational;
use loopeq_core::{
    enumerate_maps, moments_free, Execution, Monomial, MultiIndex, Potential, RootPolicy, SeriesTable, TauConfig,
    TauState,
};
use loopeq_mc::estimate::empirical_moment;
use loopeq_mc::gibbs::{gibbs_moment, orthogonal_universality, GibbsOptions, NumericPotential, Universality};
use loopeq_mc::predict::{free_limit, solver_prediction};
use loopeq_mc::MatrixEnsembleConfig;

#[derive(Parser, Debug)]
#[command(name = "loopeq", version, about = "Large-N loop equations for unitary matrix integrals")]
pub struct Cli {
    /// Worker threads for internal parallelism; results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficients mu^k(P) for |k| <= K.
    Expand(ExpandArgs),
    /// Free-energy coefficients f_k for 1 <= |k| <= K.
    FreeEnergy(SolverArgs),
    /// The spherical-integral expansion F_1..F_K.
    Hciz(HcizArgs),
    /// Free cumulant of a deterministic word, by both routes.
    Cumulant(TauWordArgs),
    /// Free-product moment of a deterministic word.
    FreeMoment(TauWordArgs),
    /// Map records whose weights add up to mu^k(P).
    Maps(MapsArgs),
    /// Monte Carlo estimate of (1/N) Tr P.
    Mc(McArgs),
    /// Exact verification sweeps over the built-in corpus.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct SolverArgs {
    /// Potential JSON; omitted means V = 0.
    #[arg(long)]
    pub potential: Option<PathBuf>,
    /// Trace JSON; omitted means formal tau.
    #[arg(long)]
    pub tau: Option<PathBuf>,
    #[arg(long, short = 'K')]
    pub order: usize,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub word: String,
}

#[derive(Args, Debug)]
pub struct HcizArgs {
    #[arg(long, short = 'K')]
    pub order: usize,
    /// Set tau(A) = tau(B) = 0 (the default).
    #[arg(long, conflicts_with = "uncentered")]
    pub centered: bool,
    /// Keep tau(A) and tau(B) as generators.
    #[arg(long)]
    pub uncentered: bool,
    /// Evaluate the series under this trace JSON.
    #[arg(long)]
    pub moments: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TauWordArgs {
    #[arg(long)]
    pub tau: PathBuf,
    #[arg(long)]
    pub word: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Policy {
    LastU,
    FirstU,
}

#[derive(Args, Debug)]
pub struct MapsArgs {
    #[arg(long)]
    pub potential: PathBuf,
    #[arg(long)]
    pub tau: Option<PathBuf>,
    /// Multi-index, comma separated, one entry per label.
    #[arg(long)]
    pub k: String,
    #[arg(long)]
    pub word: String,
    #[arg(long, value_enum, default_value = "last-u")]
    pub policy: Policy,
}

#[derive(Args, Debug)]
pub struct McArgs {
    /// Ensemble JSON.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub word: String,
    /// Overrides the seed in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Compare with the solver; defaults to the Haar limit at V = 0.
    #[arg(long)]
    pub compare_solver: bool,
    #[arg(long, short = 'K', default_value_t = 4)]
    pub order: usize,
    /// Potential for a Gibbs (Metropolis) estimate instead of Haar sampling.
    #[arg(long, requires = "t")]
    pub potential: Option<PathBuf>,
    /// Parameter values, one per label, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub t: Option<Vec<f64>>,
    /// Run the unitary-with-V against orthogonal-with-V/2 comparison.
    #[arg(long, requires = "potential")]
    pub universality: bool,
    /// c in the additive c/N finite-size allowance.
    #[arg(long, default_value_t = 5.0)]
    pub allowance: f64,
    /// Metropolis options as JSON; missing fields take their defaults.
    #[arg(long)]
    pub gibbs: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// One of the suite names, or `all`.
    #[arg(long)]
    pub suite: String,
    #[arg(long, short = 'K', default_value_t = 4)]
    pub order: usize,
}

/// A failure with its exit code: 2 for bad input, 1 for failed checks.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn config(message: impl std::fmt::Display) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }
}

impl From<loopeq_core::Error> for Failure {
    fn from(e: loopeq_core::Error) -> Self {
        Failure::config(e)
    }
}

impl From<loopeq_mc::McError> for Failure {
    fn from(e: loopeq_mc::McError) -> Self {
        match e {
            loopeq_mc::McError::AcceptanceRateOutOfRange { .. } => Failure {
                code: 1,
                message: e.to_string(),
            },
            other => Failure::config(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Output of one command: the JSON text and whether its checks passed.
pub struct Report {
    pub text: String,
    pub passed: bool,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
}

fn parse_word(s: &str) -> CliResult<Monomial> {
    Ok(s.parse::<Monomial>()?)
}

fn load_potential(path: Option<&Path>) -> CliResult<Potential> {
    match path {
        None => Ok(Potential::zero()),
        Some(p) => Ok(Potential::from_json(&read(p)?)?),
    }
}

fn load_tau(path: Option<&Path>) -> CliResult<TauState> {
    match path {
        None => Ok(TauState::formal()),
        Some(p) => {
            let cfg = TauConfig::from_json(&read(p)?)?;
            if let Ok(table) = cfg.table() {
                if table.exceeds_unit_bound() {
                    eprintln!("warning: some moments exceed one in absolute value");
                }
            }
            Ok(cfg.build()?)
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn ok(v: Value) -> CliResult<Report> {
    Ok(Report {
        text: pretty(&v),
        passed: true,
    })
}

fn expand(args: &ExpandArgs, exec: Execution) -> CliResult<Report> {
    let v = load_potential(args.solver.potential.as_deref())?;
    let tau = load_tau(args.solver.tau.as_deref())?;
    let word = parse_word(&args.word)?;
    let table = SeriesTable::new(v.clone(), tau);
    let series = table.series(&word, args.solver.order, exec)?;
    ok(json!({
        "word": word.to_string(),
        "labels": v.labels(),
        "coefficients": series_to_json(&series),
    }))
}

fn free_energy(args: &SolverArgs, exec: Execution) -> CliResult<Report> {
    if args.order == 0 {
        return Err(Failure::config("--order must be at least 1"));
    }
    let v = load_potential(args.potential.as_deref())?;
    let tau = load_tau(args.tau.as_deref())?;
    let f = SeriesTable::new(v.clone(), tau).free_energy(args.order, exec)?;
    ok(json!({ "labels": v.labels(), "coefficients": series_to_json(&f) }))
}

fn hciz(args: &HcizArgs, exec: Execution) -> CliResult<Report> {
    if let Some(path) = &args.moments {
        let tau = load_tau(Some(path))?;
        if tau.is_formal() {
            return Err(Failure::config("--moments needs a numeric trace"));
        }
        let formal = hciz_series(args.order, false)?;
        let values = formal.evaluate(&tau)?;
        let orders: BTreeMap<String, String> = values
            .iter()
            .enumerate()
            .map(|(i, c)| (format!("{}", i + 1), format_rational(c)))
            .collect();
        return ok(json!({ "centered": false, "values": orders }));
    }
    let centered = !args.uncentered;
    let series = loopeq_core::hciz::hciz_series_with(
        args.order,
        if centered {
            TauState::formal_centered(&[1, 2])
        } else {
            TauState::formal()
        },
        exec,
    )?;
    let orders: Vec<Value> = (1..=series.max_order())
        .map(|n| {
            let terms: serde_json::Map<String, Value> = named_map(&series, n)
                .into_iter()
                .map(|(m, c)| (m, Value::String(format_rational(&c))))
                .collect();
            json!({ "n": n, "terms": terms })
        })
        .collect();
    ok(json!({ "centered": centered, "orders": orders }))
}

fn cumulant(args: &TauWordArgs) -> CliResult<Report> {
    let tau = load_tau(Some(&args.tau))?;
    let word = parse_word(&args.word)?;
    let recursion = cumulants_from_moments(&tau, &word)?;
    let moebius = cumulants_via_moebius(&tau, &word)?;
    let agree = recursion == moebius;
    Ok(Report {
        text: pretty(&json!({
            "word": word.to_string(),
            "recursion": weight_to_json(&recursion),
            "moebius": weight_to_json(&moebius),
            "agree": agree,
        })),
        passed: agree,
    })
}

fn free_moment(args: &TauWordArgs) -> CliResult<Report> {
    let tau = load_tau(Some(&args.tau))?;
    let table = tau
        .table()
        .ok_or_else(|| Failure::config("free-moment needs numeric marginals"))?;
    let word = parse_word(&args.word)?;
    let value = moments_free(table, &word)?;
    ok(json!({ "word": word.to_string(), "value": format_rational(&value) }))
}

fn maps(args: &MapsArgs) -> CliResult<Report> {
    let v = load_potential(Some(&args.potential))?;
    let tau = load_tau(args.tau.as_deref())?;
    let k: MultiIndex = args.k.parse()?;
    let word = parse_word(&args.word)?;
    let policy = match args.policy {
        Policy::LastU => RootPolicy::LastU,
        Policy::FirstU => RootPolicy::FirstU,
    };
    let records = enumerate_maps(&v, &tau, &k, &word, policy)?;
    Ok(Report {
        text: to_json_lines(&records),
        passed: true,
    })
}

fn finite(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn mc(args: &McArgs, exec: Execution) -> CliResult<Report> {
    let mut cfg = MatrixEnsembleConfig::from_json(&read(&args.config)?)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let word = parse_word(&args.word)?;
    let allowance = args.allowance / cfg.n as f64;
    let opts: GibbsOptions = match &args.gibbs {
        None => GibbsOptions::default(),
        Some(p) => {
            let mut base = serde_json::to_value(GibbsOptions::default()).expect("serializes");
            let patch: Value = serde_json::from_str(&read(p)?).map_err(|e| Failure::config(format!("gibbs options: {e}")))?;
            let (Value::Object(b), Value::Object(p)) = (&mut base, patch) else {
                return Err(Failure::config("gibbs options must be a JSON object"));
            };
            for (key, val) in p {
                if !b.contains_key(&key) {
                    return Err(Failure::config(format!("unknown gibbs option `{key}`")));
                }
                b.insert(key, val);
            }
            serde_json::from_value(base).map_err(|e| Failure::config(format!("gibbs options: {e}")))?
        }
    };

    let Some(path) = &args.potential else {
        let e = empirical_moment(&cfg, &word, exec)?;
        let mut out = json!({
            "value": finite(e.value),
            "std_error": finite(e.std_error),
            "samples": e.samples_used,
        });
        let mut passed = true;
        if args.compare_solver {
            let prediction = free_limit(&cfg, &word)?;
            passed = e.agrees_with(prediction, 3.0, allowance);
            out["prediction"] = finite(prediction);
            out["allowance"] = finite(allowance);
            out["verdict"] = json!(if passed { "agree" } else { "disagree" });
        }
        return Ok(Report {
            text: pretty(&out),
            passed,
        });
    };
    let v = load_potential(Some(path))?;
    let t = args.t.clone().unwrap_or_default();
    if args.universality {
        let setup = Universality {
            potential: &v,
            t: &t,
            word: &word,
            order: args.order,
            allowance_constant: args.allowance,
        };
        let r = orthogonal_universality(&cfg, &setup, &opts, exec)?;
        let passed = r.all_agree();
        let mut out = serde_json::to_value(&r).expect("serializes");
        out["verdict"] = json!(if passed { "agree" } else { "disagree" });
        return Ok(Report {
            text: pretty(&out),
            passed,
        });
    }
    let bound = NumericPotential::bind(&v, &t)?;
    let g = gibbs_moment(&cfg, &bound, &word, &opts, exec)?;
    let mut out = json!({
        "value": finite(g.estimate.value),
        "std_error": finite(g.estimate.std_error),
        "samples": g.estimate.samples_used,
        "acceptance": finite(g.acceptance),
    });
    let mut passed = true;
    if args.compare_solver {
        let prediction = solver_prediction(&cfg, &v, &t, &word, args.order)?;
        passed = g.estimate.agrees_with(prediction, 3.0, allowance);
        out["prediction"] = finite(prediction);
        out["allowance"] = finite(allowance);
        out["verdict"] = json!(if passed { "agree" } else { "disagree" });
    }
    Ok(Report {
        text: pretty(&out),
        passed,
    })
}

fn verify(args: &VerifyArgs, exec: Execution) -> CliResult<Report> {
    let names: Vec<&str> = if args.suite == "all" {
        SUITES.to_vec()
    } else {
        vec![args.suite.as_str()]
    };
    let mut reports = Vec::new();
    for name in names {
        reports.push(run_suite(name, args.order, exec)?);
    }
    let passed = reports.iter().all(|r| r.passed());
    let body: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "suite": r.suite,
                "cases": r.cases,
                "passed": r.passed(),
                "failures": r.failures,
            })
        })
        .collect();
    Ok(Report {
        text: pretty(&json!({ "order": args.order, "passed": passed, "suites": body })),
        passed,
    })
}

/// Runs one parsed invocation.
pub fn execute(cli: &Cli) -> CliResult<Report> {
    if cli.workers == Some(0) {
        return Err(Failure::config("--workers must be positive"));
    }
    let exec = Execution::from_workers(cli.workers);
    match &cli.command {
        Command::Expand(a) => expand(a, exec),
        Command::FreeEnergy(a) => free_energy(a, exec),
        Command::Hciz(a) => hciz(a, exec),
        Command::Cumulant(a) => cumulant(a),
        Command::FreeMoment(a) => free_moment(a),
        Command::Maps(a) => maps(a),
        Command::Mc(a) => mc(a, exec),
        Command::Verify(a) => verify(a, exec),
    }
}

/// Parses `argv`, runs it and writes the report. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &report.text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", report.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            if report.passed {
                0
            } else {
                eprintln!("check failed");
                1
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
