//! Command-line interface: coefficient sampling, root solving, replicated
//! statistics suites, and limit-law evaluation.
//!
//! Exit codes: 0 success, 1 usage or domain error, 2 partial convergence,
//! 3 I/O failure.

use clap::{Args, Parser, Subcommand};
use lcpoly::experiment::{self, aggregate_table, ExperimentConfig, ExperimentError, Suite};
use lcpoly::rootsolver::{
    find_roots, LogCoeffPoly, PrecisionPolicy, SolveError, SolverConfig, DEFAULT_TARGET_RESIDUAL,
};
use lcpoly::sampler::{decimal17, make_coeffs, sample_convex, Model, SampleDocument};
use lcpoly::theory;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_PARTIAL: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "lcpoly",
    version,
    about = "Random log-concave polynomials: sampling, root solving, and limit-law experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw coefficient samples and write them as JSON documents.
    Sample(SampleArgs),
    /// Solve a sampled polynomial for all complex roots, writing CSV.
    Roots(RootsArgs),
    /// Run a replicated statistics suite and persist an experiment record.
    Experiment(ExperimentArgs),
    /// Evaluate the closed-form limit laws.
    Theory(TheoryArgs),
}

#[derive(Args)]
struct SampleArgs {
    /// Coefficient model: uniform | beta | alpha.
    #[arg(long)]
    model: String,
    /// Polynomial degree (at least 1).
    #[arg(long)]
    n: usize,
    /// Exponent scale for the alpha model; ignored otherwise.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Master seed; draw k uses stream k.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of draws; above 1 the draw index is inserted before the
    /// file extension.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Output path for the JSON document(s).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RootsArgs {
    /// Input sample document (JSON).
    #[arg(long = "in")]
    input: PathBuf,
    /// Working precision: auto | BITS.
    #[arg(long, default_value = "auto")]
    precision: String,
    /// Relative backward-error bound every root must meet.
    #[arg(long = "target-residual", default_value_t = DEFAULT_TARGET_RESIDUAL)]
    target_residual: f64,
    /// Output path for the root CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// radial | angular | potential | hughes | origin | realroots | all.
    #[arg(long)]
    suite: String,
    /// Coefficient model: uniform | beta | alpha.
    #[arg(long)]
    model: String,
    /// Comma-separated degrees, e.g. 400,800.
    #[arg(long)]
    n: String,
    #[arg(long, default_value_t = 20)]
    replicates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exponent scale for the alpha model; ignored otherwise.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Working precision: auto | BITS.
    #[arg(long, default_value = "auto")]
    precision: String,
    #[arg(long = "target-residual", default_value_t = DEFAULT_TARGET_RESIDUAL)]
    target_residual: f64,
    /// Angles per radius for the log-potential profile.
    #[arg(long, default_value_t = experiment::DEFAULT_ANGLES_PER_RADIUS)]
    angles: usize,
    /// Output directory; defaults to a run-named directory under
    /// LCPOLY_OUT_DIR (or ./lcpoly_out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit per-degree SVG scatter figures.
    #[arg(long)]
    svg: bool,
    /// Worker threads; defaults to LCPOLY_THREADS, then to all cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct TheoryArgs {
    #[command(subcommand)]
    command: TheoryCommand,
}

#[derive(Subcommand)]
enum TheoryCommand {
    /// Print the value of a limit-law function with 17 significant digits.
    Eval(EvalArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// psi | G | mu-cdf | mu-density | log-radial-cdf | psi-n.
    #[arg(long = "fn")]
    function: String,
    /// Function arguments; psi-n takes three (n, peak index, offset).
    #[arg(long = "at", num_args = 1.., allow_negative_numbers = true, required = true)]
    at: Vec<String>,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Sample(args) => cmd_sample(args),
        Command::Roots(args) => cmd_roots(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Theory(args) => cmd_theory(args),
    }
}

fn parse_model(s: &str) -> Result<Model, Failure> {
    Model::parse(s).ok_or_else(|| {
        fail(
            EXIT_USAGE,
            format!("unknown model '{s}' (expected uniform | beta | alpha)"),
        )
    })
}

fn parse_precision(s: &str) -> Result<PrecisionPolicy, Failure> {
    if s == "auto" {
        return Ok(PrecisionPolicy::Auto);
    }
    s.parse::<u32>().map(PrecisionPolicy::Fixed).map_err(|_| {
        fail(
            EXIT_USAGE,
            format!("precision must be 'auto' or a bit count, got '{s}'"),
        )
    })
}

fn check_target_residual(r: f64) -> Result<(), Failure> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(fail(
            EXIT_USAGE,
            format!("target residual must lie in (0, 1), got {r}"),
        ))
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes)
        .map_err(|e| fail(EXIT_IO, format!("cannot write {}: {e}", path.display())))
}

fn numbered_path(base: &Path, k: usize, count: usize) -> PathBuf {
    if count == 1 {
        return base.to_path_buf();
    }
    match base.extension() {
        Some(ext) => base.with_extension(format!("{k}.{}", ext.to_string_lossy())),
        None => base.with_extension(k.to_string()),
    }
}

fn cmd_sample(args: SampleArgs) -> Result<u8, Failure> {
    let model = parse_model(&args.model)?;
    if args.n < 1 {
        return Err(fail(EXIT_USAGE, "degree must be at least 1"));
    }
    if args.count < 1 {
        return Err(fail(EXIT_USAGE, "count must be at least 1"));
    }
    if model == Model::AlphaScaled && !(args.alpha > 0.0 && args.alpha.is_finite()) {
        return Err(fail(
            EXIT_USAGE,
            format!("alpha must be positive and finite, got {}", args.alpha),
        ));
    }
    for k in 0..args.count {
        let stream = k as u64;
        let mut rng = experiment::seeded_rng(args.seed, stream);
        let sample = sample_convex(args.n, &mut rng);
        let coeffs = make_coeffs(&sample, model, args.alpha);
        let doc = SampleDocument::new(&sample, &coeffs, args.seed, stream);
        let mut json = serde_json::to_string_pretty(&doc).expect("documents serialize");
        json.push('\n');
        write_file(&numbered_path(&args.out, k, args.count), json.as_bytes())?;
    }
    Ok(EXIT_OK)
}

fn cmd_roots(args: RootsArgs) -> Result<u8, Failure> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| fail(EXIT_IO, format!("cannot read {}: {e}", args.input.display())))?;
    let doc: SampleDocument = serde_json::from_str(&text).map_err(|e| {
        fail(
            EXIT_USAGE,
            format!("{} is not a sample document: {e}", args.input.display()),
        )
    })?;
    let log_coeffs = doc.log_coeffs_f64().map_err(|e| {
        fail(
            EXIT_USAGE,
            format!("bad log_coeffs in {}: {e}", args.input.display()),
        )
    })?;
    let poly = LogCoeffPoly::new(log_coeffs).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    check_target_residual(args.target_residual)?;
    let config = SolverConfig {
        target_residual: args.target_residual,
        precision_policy: parse_precision(&args.precision)?,
        ..SolverConfig::default()
    };
    let (rs, code) = match find_roots(&poly, &config) {
        Ok(rs) => (rs, EXIT_OK),
        Err(SolveError::PrecisionCapReached { cap_bits, partial }) => {
            eprintln!(
                "warning: partial result, not converged at the {cap_bits}-bit precision cap"
            );
            (*partial, EXIT_PARTIAL)
        }
        Err(e) => return Err(fail(EXIT_USAGE, e.to_string())),
    };
    let mut buf = Vec::new();
    rs.write_csv(&mut buf).expect("in-memory write");
    write_file(&args.out, &buf)?;
    Ok(code)
}

fn env_usize(name: &str) -> Result<Option<usize>, Failure> {
    match std::env::var(name) {
        Ok(v) => v
            .parse::<usize>()
            .map(Some)
            .map_err(|_| fail(EXIT_USAGE, format!("{name} must be an integer, got '{v}'"))),
        Err(_) => Ok(None),
    }
}

fn parse_n_list(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|part| {
            part.trim().parse::<usize>().map_err(|_| {
                fail(
                    EXIT_USAGE,
                    format!("degrees must be a comma-separated integer list, got '{part}'"),
                )
            })
        })
        .collect()
}

fn resolve_out_dir(flag: Option<PathBuf>, suite: Suite, model: Model, seed: u64) -> PathBuf {
    if let Some(p) = flag {
        return p;
    }
    let base = std::env::var_os("LCPOLY_OUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("lcpoly_out"));
    base.join(format!("{}_{}_seed{}", suite.name(), model.name(), seed))
}

fn cmd_experiment(args: ExperimentArgs) -> Result<u8, Failure> {
    let suite = Suite::parse(&args.suite).ok_or_else(|| {
        fail(
            EXIT_USAGE,
            format!(
                "unknown suite '{}' (expected radial | angular | potential | hughes | origin \
                 | realroots | all)",
                args.suite
            ),
        )
    })?;
    let model = parse_model(&args.model)?;
    check_target_residual(args.target_residual)?;
    let out_dir = resolve_out_dir(args.out, suite, model, args.seed);
    let mut config = ExperimentConfig::new(suite, model, parse_n_list(&args.n)?, args.replicates, args.seed);
    config.alpha = args.alpha;
    config.precision_policy = parse_precision(&args.precision)?;
    config.target_residual = args.target_residual;
    config.angles_per_radius = args.angles;
    config.out_dir = Some(out_dir.clone());
    config.emit_svg = args.svg;
    config.threads = match args.threads {
        Some(t) => t,
        None => env_usize("LCPOLY_THREADS")?.unwrap_or(0),
    };
    let record = experiment::run_experiment(&config).map_err(|e| match e {
        ExperimentError::Io { .. } | ExperimentError::Serialize(_) => fail(EXIT_IO, e.to_string()),
        other => fail(EXIT_USAGE, other.to_string()),
    })?;
    print!("{}", aggregate_table(&record));
    println!("record: {}", out_dir.join("record.json").display());
    let failed = record.failed_fraction();
    if failed > 0.0 {
        eprintln!(
            "warning: {:.1}% of replicates did not converge (flagged in the record)",
            failed * 100.0
        );
        if failed > 0.2 {
            return Ok(EXIT_PARTIAL);
        }
    }
    Ok(EXIT_OK)
}

fn cmd_theory(args: TheoryArgs) -> Result<u8, Failure> {
    let TheoryCommand::Eval(eval) = args.command;
    let values =
        evaluate_theory(&eval.function, &eval.at).map_err(|m| fail(EXIT_USAGE, m))?;
    for v in values {
        println!("{}", decimal17(v));
    }
    Ok(EXIT_OK)
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse().map_err(|_| format!("not a number: '{s}'"))
}

fn parse_integer<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("{what} must be an integer, got '{s}'"))
}

fn evaluate_theory(function: &str, at: &[String]) -> Result<Vec<f64>, String> {
    let need = |k: usize| -> Result<(), String> {
        if at.len() == k {
            Ok(())
        } else {
            Err(format!(
                "'{function}' takes {k} argument(s), got {}",
                at.len()
            ))
        }
    };
    match function {
        "psi" => {
            need(1)?;
            let t = parse_f64(&at[0])?;
            theory::psi(t).map(|v| vec![v]).map_err(|e| e.to_string())
        }
        "G" => {
            need(1)?;
            let r = parse_f64(&at[0])?;
            if !(r > 0.0 && r.is_finite()) {
                return Err(format!("'G' needs a positive radius, got {r}"));
            }
            Ok(vec![theory::big_g_radial(r)])
        }
        "mu-cdf" => {
            need(1)?;
            theory::mu_radial_cdf(parse_f64(&at[0])?)
                .map(|v| vec![v])
                .map_err(|e| e.to_string())
        }
        "mu-density" => {
            need(1)?;
            theory::mu_density_radial(parse_f64(&at[0])?)
                .map(|v| vec![v])
                .map_err(|e| e.to_string())
        }
        "log-radial-cdf" => {
            need(1)?;
            let x = parse_f64(&at[0])?;
            if x.is_nan() {
                return Err("'log-radial-cdf' needs a real argument, got NaN".to_string());
            }
            Ok(vec![theory::log_radial_cdf(x)])
        }
        "psi-n" => {
            need(3)?;
            let n: usize = parse_integer(&at[0], "n")?;
            let r_peak: usize = parse_integer(&at[1], "the peak index")?;
            let k: i64 = parse_integer(&at[2], "the offset")?;
            theory::psi_n_profile(n, r_peak, k)
                .map(|v| vec![v])
                .map_err(|e| e.to_string())
        }
        other => Err(format!(
            "unknown function '{other}' (expected psi | G | mu-cdf | mu-density | \
             log-radial-cdf | psi-n)"
        )),
    }
}
