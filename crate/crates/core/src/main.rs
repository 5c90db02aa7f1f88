//! Command-line front end: design -> enumerate -> select -> pattern emission
//! as reproducible pipelines. Every command writes a `.manifest.json` next to
//! each output file recording the resolved invocation; `replay` re-runs a
//! manifest and reproduces the data files byte for byte.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use beamspace::io::{self, RunManifest};
use beamspace::tolerances;
use beamspace::{
    autocorrelation, beampattern, convex_mother, enumerate_family, power_profile, same_beampattern,
    select_subset, spheroidal_mother, EnumerateOptions, Error, UniformityMetric,
};

#[derive(Parser)]
#[command(
    name = "beamspace",
    version,
    about = "Design, enumerate, and select beampattern-equivalent beamforming vectors",
    propagate_version = true
)]
struct Cli {
    /// Worker threads for parallel sections (default: available parallelism).
    /// Results are independent of the thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design a sector mother vector and write it as a beam-vector file.
    Design(DesignArgs),
    /// Enumerate the pattern-equivalent family of a beam vector.
    Enumerate(EnumerateArgs),
    /// Evaluate beampatterns on an angle grid and write a CSV.
    Pattern(PatternArgs),
    /// Check whether two beam vectors generate the same beampattern.
    Verify(VerifyArgs),
    /// Pick the k-member subset of a family with the most uniform
    /// per-element transmit power.
    Select(SelectArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Dominant-subspace (discrete prolate) design.
    Spheroidal,
    /// Constrained minimax design.
    Cvx,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Spheroidal => "spheroidal",
            Method::Cvx => "cvx",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    /// Worst-element deviation from the uniform target.
    Maxdev,
    /// Variance of the per-element powers.
    Var,
}

impl Metric {
    fn name(self) -> &'static str {
        match self {
            Metric::Maxdev => "maxdev",
            Metric::Var => "var",
        }
    }
}

#[derive(Args)]
struct DesignArgs {
    /// Design method.
    #[arg(long, value_enum)]
    method: Method,
    /// Design-spec JSON file.
    #[arg(long)]
    spec: PathBuf,
    /// Output beam-vector file.
    #[arg(long)]
    out: PathBuf,
    /// Seed for extra minimax restarts beyond the deterministic set.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Input beam-vector file (the mother).
    #[arg(long)]
    input: PathBuf,
    /// Output family file.
    #[arg(long)]
    out: PathBuf,
    /// Sample this many flip masks instead of the full 2^(M-1) sweep.
    #[arg(long)]
    sample: Option<usize>,
    /// Seed for mask sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PatternArgs {
    /// Input beam-vector file(s); each contributes one power column pair.
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    /// Output CSV file.
    #[arg(long)]
    out: PathBuf,
    /// Number of grid points spanning [-90, 90] degrees.
    #[arg(long, default_value_t = 721)]
    grid: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// First beam-vector file.
    a: PathBuf,
    /// Second beam-vector file.
    b: PathBuf,
    /// Relative tolerance on autocorrelation lags.
    #[arg(long, default_value_t = tolerances::SAME_PATTERN_DEFAULT_REL)]
    tol: f64,
}

#[derive(Args)]
struct SelectArgs {
    /// Input family file.
    #[arg(long)]
    family: PathBuf,
    /// Subset size.
    #[arg(short)]
    k: usize,
    /// Total transmit power budget for the subset.
    #[arg(long)]
    power: f64,
    /// Uniformity metric to minimize.
    #[arg(long, value_enum, default_value_t = Metric::Maxdev)]
    metric: Metric,
    /// Score every subset even when the count exceeds the budget.
    #[arg(long)]
    exhaustive: bool,
    /// Candidate-subset budget for the exhaustive path.
    #[arg(long, default_value_t = tolerances::SELECT_BUDGET_DEFAULT)]
    budget: u64,
    /// Output prefix: writes <prefix>_1.json .. <prefix>_k.json and
    /// <prefix>_power.csv.
    #[arg(long, default_value = "selected")]
    out_prefix: PathBuf,
}

#[derive(Args)]
struct ReplayArgs {
    /// Manifest file written by a previous run.
    manifest: PathBuf,
}

/// A command failure: the exit code plus an optional diagnostic. Verdict
/// exits (verify's "different") carry a code but no error message.
struct Failure {
    code: u8,
    message: Option<String>,
    hint: Option<&'static str>,
}

impl Failure {
    fn new(code: u8, error: Error) -> Self {
        Failure {
            code,
            message: Some(error.to_string()),
            hint: None,
        }
    }

    fn with_hint(code: u8, error: Error, hint: &'static str) -> Self {
        Failure {
            code,
            message: Some(error.to_string()),
            hint: Some(hint),
        }
    }

    fn silent(code: u8) -> Self {
        Failure {
            code,
            message: None,
            hint: None,
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // Ignore the error if a global pool already exists (e.g. under replay).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match dispatch(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if let Some(message) = &failure.message {
                eprintln!("error: {message}");
            }
            if let Some(hint) = failure.hint {
                eprintln!("hint: {hint}");
            }
            ExitCode::from(failure.code)
        }
    }
}

fn dispatch(command: &Command) -> CmdResult {
    match command {
        Command::Design(args) => cmd_design(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Pattern(args) => cmd_pattern(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Select(args) => cmd_select(args),
        Command::Replay(args) => cmd_replay(args),
    }
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

fn write_manifest(
    command: &str,
    argv: Vec<String>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    started: Instant,
    code: u8,
) -> CmdResult {
    let manifest = RunManifest {
        command: command.to_string(),
        argv,
        inputs,
        outputs,
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    io::write_manifests(&manifest).map_err(|e| Failure::new(code, e))
}

fn cmd_design(args: &DesignArgs) -> CmdResult {
    let started = Instant::now();
    let fail = |e: Error| {
        let code = match e {
            Error::SolverFailure { .. }
            | Error::AmbiguousDesign { .. }
            | Error::EigenNoConvergence { .. } => 3,
            _ => 2,
        };
        Failure::new(code, e)
    };
    let spec = io::read_design_spec(&args.spec).map_err(fail)?;
    let vector = match args.method {
        Method::Spheroidal => spheroidal_mother(&spec).map_err(fail)?,
        Method::Cvx => {
            let design = convex_mother(&spec, args.seed).map_err(fail)?;
            eprintln!(
                "minimax objective {}; out-of-sector level {} (bound {})",
                io::fmt12(design.objective),
                io::fmt12(design.max_constraint_level),
                io::fmt12(spec.delta()),
            );
            design.vector
        }
    };
    io::write_beam_vector(&args.out, &vector).map_err(fail)?;
    let argv = vec![
        "design".to_string(),
        "--method".to_string(),
        args.method.name().to_string(),
        "--spec".to_string(),
        path_str(&args.spec),
        "--out".to_string(),
        path_str(&args.out),
        "--seed".to_string(),
        args.seed.to_string(),
    ];
    write_manifest(
        "design",
        argv,
        vec![path_str(&args.spec)],
        vec![path_str(&args.out)],
        started,
        2,
    )
}

fn cmd_enumerate(args: &EnumerateArgs) -> CmdResult {
    let started = Instant::now();
    let fail = |e: Error| match e {
        Error::DegenerateEndpoints { .. } => Failure::with_hint(
            4,
            e,
            "the first or last weight is (near) zero, so the beam polynomial drops degree; \
             trim the zero end taps to a shorter array or perturb the design",
        ),
        Error::FamilyTooLarge { .. } => {
            Failure::with_hint(2, e, "pass --sample N to draw a random subfamily")
        }
        _ => Failure::new(2, e),
    };
    let mother = io::read_beam_vector(&args.input).map_err(fail)?;
    let options = EnumerateOptions {
        sample: args.sample,
        seed: args.seed,
    };
    let family = enumerate_family(&mother, &options).map_err(fail)?;
    io::write_family(&args.out, &family).map_err(fail)?;
    println!("{}", family.distinct_count());
    let mut argv = vec![
        "enumerate".to_string(),
        "--input".to_string(),
        path_str(&args.input),
        "--out".to_string(),
        path_str(&args.out),
    ];
    if let Some(sample) = args.sample {
        argv.push("--sample".to_string());
        argv.push(sample.to_string());
        argv.push("--seed".to_string());
        argv.push(args.seed.to_string());
    }
    write_manifest(
        "enumerate",
        argv,
        vec![path_str(&args.input)],
        vec![path_str(&args.out)],
        started,
        2,
    )
}

fn cmd_pattern(args: &PatternArgs) -> CmdResult {
    let started = Instant::now();
    let fail = |e: Error| Failure::new(2, e);
    if args.grid < 2 {
        return Err(fail(Error::EmptyGrid));
    }
    let step = 180.0 / (args.grid - 1) as f64;
    let angles: Vec<f64> = (0..args.grid).map(|i| -90.0 + step * i as f64).collect();
    let mut columns = Vec::with_capacity(args.input.len());
    for path in &args.input {
        let w = io::read_beam_vector(path).map_err(fail)?;
        columns.push(beampattern(&w, &angles).map_err(fail)?);
    }
    let refs: Vec<&[f64]> = columns.iter().map(Vec::as_slice).collect();
    io::write_pattern_csv(&args.out, &angles, &refs).map_err(fail)?;
    let mut argv = vec!["pattern".to_string()];
    for path in &args.input {
        argv.push("--input".to_string());
        argv.push(path_str(path));
    }
    argv.push("--out".to_string());
    argv.push(path_str(&args.out));
    argv.push("--grid".to_string());
    argv.push(args.grid.to_string());
    write_manifest(
        "pattern",
        argv,
        args.input.iter().map(|p| path_str(p)).collect(),
        vec![path_str(&args.out)],
        started,
        2,
    )
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let fail = |e: Error| Failure::new(2, e);
    let a = io::read_beam_vector(&args.a).map_err(fail)?;
    let b = io::read_beam_vector(&args.b).map_err(fail)?;
    let same = same_beampattern(&a, &b, args.tol).map_err(fail)?;
    let ra = autocorrelation(&a);
    let rb = autocorrelation(&b);
    let deviation = ra
        .lags()
        .iter()
        .zip(rb.lags())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0_f64, f64::max);
    println!("{}", io::fmt12(deviation));
    if same {
        eprintln!(
            "same beampattern (max lag deviation {})",
            io::fmt12(deviation)
        );
        Ok(())
    } else {
        eprintln!(
            "different beampatterns (max lag deviation {})",
            io::fmt12(deviation)
        );
        Err(Failure::silent(1))
    }
}

fn cmd_select(args: &SelectArgs) -> CmdResult {
    let started = Instant::now();
    let fail = |e: Error| Failure::new(2, e);
    let family = io::read_family(&args.family).map_err(fail)?;
    let metric = match args.metric {
        Metric::Maxdev => UniformityMetric::MaxDeviation,
        Metric::Var => UniformityMetric::Variance,
    };
    let budget = if args.exhaustive { u64::MAX } else { args.budget };
    let before = power_profile(std::slice::from_ref(family.mother()), args.power)
        .map_err(fail)?
        .uniformity();
    let selection = select_subset(&family, args.k, args.power, metric, budget).map_err(fail)?;
    println!("uniformity_before = {}", io::fmt12(before));
    println!(
        "uniformity_after = {}",
        io::fmt12(selection.profile().uniformity())
    );
    let prefix = path_str(&args.out_prefix);
    let mut outputs = Vec::new();
    for (i, vector) in selection.vectors().iter().enumerate() {
        let path = PathBuf::from(format!("{prefix}_{}.json", i + 1));
        io::write_beam_vector(&path, vector).map_err(fail)?;
        outputs.push(path_str(&path));
    }
    let power_path = PathBuf::from(format!("{prefix}_power.csv"));
    io::write_power_csv(&power_path, selection.profile()).map_err(fail)?;
    outputs.push(path_str(&power_path));
    let mut argv = vec![
        "select".to_string(),
        "--family".to_string(),
        path_str(&args.family),
        "-k".to_string(),
        args.k.to_string(),
        "--power".to_string(),
        io::fmt12(args.power),
        "--metric".to_string(),
        args.metric.name().to_string(),
        "--budget".to_string(),
        args.budget.to_string(),
        "--out-prefix".to_string(),
        prefix.clone(),
    ];
    if args.exhaustive {
        argv.push("--exhaustive".to_string());
    }
    write_manifest(
        "select",
        argv,
        vec![path_str(&args.family)],
        outputs,
        started,
        2,
    )
}

fn cmd_replay(args: &ReplayArgs) -> CmdResult {
    let manifest = io::read_manifest(&args.manifest).map_err(|e| Failure::new(2, e))?;
    let mut argv = vec!["beamspace".to_string()];
    argv.extend(manifest.argv.iter().cloned());
    let cli = Cli::try_parse_from(&argv).map_err(|e| {
        Failure::new(
            2,
            Error::Parse {
                path: path_str(&args.manifest),
                detail: format!("recorded argv does not parse: {e}"),
            },
        )
    })?;
    dispatch(&cli.command)
}
