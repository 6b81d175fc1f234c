//! `polyspec` command-line front end.
//!
//! Exit codes: 0 success, 1 bound violated with hypotheses met, 2 usage or
//! parse error, 3 singular leading coefficient, 4 size mismatch,
//! 5 hypothesis failure under `--strict`, 6 numerical failure.

mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use polyspec::bounds::{gamma_bounds_check, pokrzywa_gamma, BoundId, BoundReport};
use polyspec::campaign::{evaluate, run_campaign, CampaignConfig, CampaignReport, Instance, OutputFormat, SIDECAR_THRESHOLD};
use polyspec::genlab::{generate, Family, GenSpec, Generated};
use polyspec::linalg::{eigenvalues, PNorm};
use polyspec::matching::{frobenius_matching_distance, optimal_matching_distance, MatchingResult};
use polyspec::matpoly::{polynomial_spectrum, tuple_matrix_p_norm, Spectrum};
use serde::Serialize;

use io::{Operand, VectorPair};

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<polyspec::Error> for Failure {
    fn from(e: polyspec::Error) -> Self {
        use polyspec::Error as E;
        let code = match &e {
            E::SingularLeadingCoefficient => 3,
            E::SizeMismatch(..) => 4,
            E::HypothesisViolation(_) => 5,
            E::ConvergenceFailure(_) | E::SingularMatrix { .. } => 6,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

type CliResult = Result<u8, Failure>;

#[derive(Parser, Debug)]
#[command(name = "polyspec", version, about = "Spectra of matrix polynomials and spectral variation checks")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for generators and campaigns.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for campaigns.
    #[arg(long, global = true, env = "POLYSPEC_THREADS")]
    threads: Option<usize>,
    /// Treat unmet hypotheses as errors (exit 5).
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues of a matrix polynomial (or a matrix).
    Eig { input: PathBuf },
    /// Matching distance between the spectra of two inputs.
    Dist {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Bottleneck)]
        method: Method,
    },
    /// Evaluate one bound on given inputs.
    Check(CheckArgs),
    /// Run a randomized campaign from a JSON config.
    Campaign {
        config: PathBuf,
        /// Overrides `output_path` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Overrides `trials` from the config.
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Table of Pokrzywa's constant against its logarithmic upper bound.
    Gamma {
        #[arg(long)]
        max_k: usize,
    },
    /// Generate a random instance file.
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Bottleneck,
    Frobenius,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct CheckArgs {
    bound: String,
    /// Input files in the order the bound expects.
    inputs: Vec<PathBuf>,
    /// A serialized instance, as stored in campaign violation records.
    #[arg(long, conflicts_with = "inputs")]
    instance: Option<PathBuf>,
    #[arg(long, default_value = "2")]
    p: String,
    /// `N` for bounded-coefficients; defaults to the larger tuple norm.
    #[arg(long)]
    coefficient_bound: Option<f64>,
    /// Order for gamma-bounds.
    #[arg(long)]
    k: Option<usize>,
    /// Upper end of the Wielandt interval.
    #[arg(long)]
    a: Option<f64>,
    /// Lower end of the Wielandt interval.
    #[arg(long)]
    b: Option<f64>,
    /// Evaluation point `re,im` for wielandt-poly.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    radius_fraction: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn fmt_complex(z: Complex64) -> String {
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im.is_sign_negative() {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

fn pairs(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn spectrum_of(op: &Operand) -> Result<Spectrum, Failure> {
    Ok(match op {
        Operand::Polynomial(p) => polynomial_spectrum(p)?,
        Operand::Matrix(a) => Spectrum::new(eigenvalues(a)?.eigenvalues),
    })
}

fn cmd_eig(cli: &Cli, input: &Path) -> CliResult {
    let op = io::read_operand(input)?;
    let values = spectrum_of(&op)?.sorted_for_display();
    if cli.json {
        #[derive(Serialize)]
        struct Out {
            eigenvalues: Vec<[f64; 2]>,
        }
        println!("{}", io::to_json(&Out { eigenvalues: pairs(&values) }));
    } else {
        let text: Vec<String> = values.iter().map(|&z| fmt_complex(z)).collect();
        println!("{}", text.join(", "));
    }
    Ok(0)
}

fn cmd_dist(cli: &Cli, a: &Path, b: &Path, method: Method) -> CliResult {
    let sa = spectrum_of(&io::read_operand(a)?)?;
    let sb = spectrum_of(&io::read_operand(b)?)?;
    let result: MatchingResult = match method {
        Method::Bottleneck => optimal_matching_distance(&sa, &sb)?,
        Method::Frobenius => frobenius_matching_distance(&sa, &sb)?,
    };
    if cli.json {
        println!("{}", io::to_json(&result));
    } else {
        println!("distance: {}", result.distance);
        println!("permutation: {:?}", result.permutation);
    }
    Ok(0)
}

fn parse_lambda(s: &str) -> Result<Complex64, Failure> {
    let bad = || Failure::usage(format!("--lambda expects re,im; got {s:?}"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?))
}

fn need<T: Copy>(v: Option<T>, flag: &str, bound: BoundId) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::usage(format!("{bound} needs --{flag}")))
}

fn instance_from_inputs(bound: BoundId, args: &CheckArgs, pn: PNorm) -> Result<Instance, Failure> {
    use BoundId as B;
    let arity = match bound {
        B::GammaBounds => 0,
        B::NonmonicBall => 3,
        _ => 2,
    };
    if args.inputs.len() != arity {
        return Err(Failure::usage(format!(
            "{bound} takes {arity} input files, got {}",
            args.inputs.len()
        )));
    }
    let f = &args.inputs;
    Ok(match bound {
        B::HoffmanWielandt | B::NormalVsArbitrary | B::Kahan | B::Elsner | B::DetPerturbation => {
            Instance::MatrixPair { a: io::read_matrix(&f[0])?, b: io::read_matrix(&f[1])? }
        }
        B::PolyHoffmanWielandt | B::PolyUniversalConstant | B::Unitary2mn | B::PolyKahan => {
            Instance::PolynomialPair { p: io::read_polynomial(&f[0])?, q: io::read_polynomial(&f[1])? }
        }
        B::BoundedCoefficients => {
            let (p, q) = (io::read_polynomial(&f[0])?, io::read_polynomial(&f[1])?);
            let bound = match args.coefficient_bound {
                Some(n) => n,
                None => tuple_matrix_p_norm(p.lower_coeffs(), pn)?.max(tuple_matrix_p_norm(q.lower_coeffs(), pn)?),
            };
            Instance::BoundedPair { p, q, bound }
        }
        B::NonmonicBall => Instance::NonmonicTriple {
            p: io::read_polynomial(&f[0])?,
            q: io::read_polynomial(&f[1])?,
            center: io::read_polynomial(&f[2])?,
        },
        B::GammaBounds => Instance::Order { k: need(args.k, "k", bound)? },
        B::WielandtScalar => {
            let v: VectorPair = io::read_json(&f[1])?;
            Instance::WielandtScalar {
                matrix: io::read_matrix(&f[0])?,
                a: need(args.a, "a", bound)?,
                b: need(args.b, "b", bound)?,
                x: v.x,
                y: v.y,
            }
        }
        B::WielandtPoly => {
            let v: VectorPair = io::read_json(&f[1])?;
            let lambda = parse_lambda(args.lambda.as_deref().ok_or_else(|| Failure::usage("wielandt-poly needs --lambda"))?)?;
            Instance::WielandtPolynomial {
                p: io::read_polynomial(&f[0])?,
                a: need(args.a, "a", bound)?,
                b: need(args.b, "b", bound)?,
                x: v.x,
                y: v.y,
                lambda,
            }
        }
    })
}

fn print_report(cli: &Cli, r: &BoundReport) {
    if cli.json {
        println!("{}", io::to_json(r));
        return;
    }
    println!("bound: {}", r.bound_id);
    println!("lhs: {}", r.lhs);
    println!("rhs: {}", r.rhs);
    println!("holds: {}", r.holds);
    match r.slack_ratio {
        Some(s) => println!("slack_ratio: {s}"),
        None => println!("slack_ratio: -"),
    }
    println!("hypotheses_met: {}", r.hypotheses_met);
    for h in &r.failed_hypotheses {
        println!("  failed: {h}");
    }
    for (k, v) in &r.constants {
        println!("  {k} = {v}");
    }
    for s in &r.sub_checks {
        let tag = if s.binding { "" } else { " (informational)" };
        println!("  sub-check {}: {} <= {} : {}{tag}", s.name, s.lhs, s.rhs, s.holds);
    }
}

fn cmd_check(cli: &Cli, args: &CheckArgs) -> CliResult {
    let bound: BoundId = args.bound.parse()?;
    let pn: PNorm = args.p.parse()?;
    let instance = match &args.instance {
        Some(path) => io::read_json(path)?,
        None => instance_from_inputs(bound, args, pn)?,
    };
    let report = evaluate(bound, &instance, pn)?;
    print_report(cli, &report);
    if cli.strict && !report.hypotheses_met {
        eprintln!("hypotheses not met: {}", report.failed_hypotheses.join("; "));
        return Ok(5);
    }
    Ok(if report.is_violation() { 1 } else { 0 })
}

fn cmd_campaign(cli: &Cli, config: &Path, output: Option<&Path>, format: Option<Format>, trials: Option<u64>) -> CliResult {
    let mut cfg: CampaignConfig = io::read_json(config)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(t) = trials {
        cfg.trials = t;
    }
    if cli.strict {
        cfg.strict_hypotheses = true;
    }
    if let Some(f) = format {
        cfg.format = match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        };
    }
    if let Some(o) = output {
        cfg.output_path = Some(o.display().to_string());
    }
    let report = run_campaign(&cfg)?;
    let summary = &report.summary;
    let code = if summary.violations > 0 {
        1
    } else if cfg.strict_hypotheses && summary.hypotheses_unmet > 0 {
        5
    } else {
        0
    };
    if cli.json {
        println!("{}", io::to_json(summary));
    } else {
        print_summary(&report);
    }
    if let Some(path) = cfg.output_path.as_deref().map(Path::new) {
        match cfg.format {
            OutputFormat::Json => {
                if let Some(side) = io::write_campaign_json(path, report, SIDECAR_THRESHOLD)? {
                    eprintln!("per-trial records written to {}", side.display());
                }
            }
            OutputFormat::Csv => io::write_campaign_csv(path, &report)?,
        }
    }
    Ok(code)
}

fn print_summary(report: &CampaignReport) {
    let s = &report.summary;
    let opt = |x: Option<f64>| x.map_or("-".to_string(), |v| v.to_string());
    println!("bound: {}", report.config.bound_id);
    println!("trials: {}", s.trials);
    println!("violations: {}", s.violations);
    println!("errors: {}", s.errors);
    println!("hypotheses_unmet: {}", s.hypotheses_unmet);
    println!("max_slack_ratio: {}", opt(s.max_slack_ratio));
    println!("mean_slack_ratio: {}", opt(s.mean_slack_ratio));
    if let (Some(i), Some(seed)) = (s.argmax_trial_index, s.argmax_trial_seed) {
        println!("argmax trial: {i} (seed {seed})");
    }
    if let Some(c) = s.max_empirical_constant {
        println!("max_empirical_constant: {c}");
    }
    for (name, n) in &s.sub_check_failures {
        println!("sub-check failures: {name}: {n}");
    }
    for rec in report.violations().take(5) {
        println!("violation: trial {} seed {}", rec.trial_index, rec.seed);
    }
    println!("wall_time_secs: {:.3}", report.wall_time_secs);
}

fn cmd_gamma(cli: &Cli, max_k: usize) -> CliResult {
    if max_k == 0 {
        return Err(Failure::usage("--max-k must be at least 1"));
    }
    #[derive(Serialize)]
    struct Row {
        k: usize,
        gamma: f64,
        upper: f64,
        margin: f64,
    }
    let rows: Vec<Row> = (1..=max_k)
        .map(|k| {
            let r = gamma_bounds_check(k);
            Row { k, gamma: pokrzywa_gamma(k) + 0.0, upper: r.rhs, margin: r.rhs - r.lhs }
        })
        .collect();
    if cli.json {
        println!("{}", io::to_json(&rows));
    } else {
        println!("k\tgamma\tlog2(k)+0.038\tmargin");
        for r in &rows {
            println!("{}\t{}\t{}\t{}", r.k, r.gamma, r.upper, r.margin);
        }
    }
    Ok(if rows.iter().all(|r| r.margin >= 0.0) { 0 } else { 1 })
}

fn fresh_seed() -> u64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    let t = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0);
    polyspec::genlab::splitmix64(t as u64 ^ std::process::id() as u64)
}

fn family_from(args: &GenArgs) -> Result<Family, Failure> {
    let mut value = serde_json::json!({ "family": args.family });
    if let Some(a) = args.a {
        value["a"] = a.into();
    }
    if let Some(b) = args.b {
        value["b"] = b.into();
    }
    if let Some(r) = args.radius_fraction {
        value["radius_fraction"] = r.into();
    }
    serde_json::from_value(value).map_err(|e| Failure::usage(format!("bad family {:?}: {e}", args.family)))
}

fn cmd_gen(cli: &Cli, args: &GenArgs) -> CliResult {
    let seed = cli.seed.unwrap_or_else(fresh_seed);
    let spec = GenSpec { family: family_from(args)?, n: args.n, m: args.m, seed, scale: args.scale };
    let text = match generate(&spec)? {
        Generated::Matrix(m) => io::to_json(&m),
        Generated::Polynomial(p) => io::to_json(&p),
        Generated::VectorPair { x, y } => io::to_json(&VectorPair { x, y }),
    };
    match &args.out {
        Some(path) => {
            io::write_text(path, &text)?;
            if cli.json {
                println!("{}", serde_json::json!({ "seed": seed, "path": path.display().to_string() }));
            } else {
                println!("seed: {seed}");
            }
        }
        None => {
            eprintln!("seed: {seed}");
            println!("{text}");
        }
    }
    Ok(0)
}

fn configure_threads(threads: Option<usize>) -> Result<(), Failure> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(Failure::usage("--threads must be at least 1"));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(format!("cannot start thread pool: {e}")))?;
    Ok(())
}

fn run(cli: &Cli) -> CliResult {
    configure_threads(cli.threads)?;
    match &cli.command {
        Command::Eig { input } => cmd_eig(cli, input),
        Command::Dist { a, b, method } => cmd_dist(cli, a, b, *method),
        Command::Check(args) => cmd_check(cli, args),
        Command::Campaign { config, output, format, trials } => {
            cmd_campaign(cli, config, output.as_deref(), *format, *trials)
        }
        Command::Gamma { max_k } => cmd_gamma(cli, *max_k),
        Command::Gen(args) => cmd_gen(cli, args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
