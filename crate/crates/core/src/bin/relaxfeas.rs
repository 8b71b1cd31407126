#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use relaxfeas::bench::{
    render_table, run_bench, solve_instance, write_csv, Algo, BenchConfig, BenchError, SolveSettings, Suite,
};
use relaxfeas::model::{gen_random01, gen_wedge, read_instance, write_instance};

const EXIT_USAGE: u8 = 64;
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "relaxfeas",
    version,
    about = "Feasibility of linear systems by divide-and-conquer search and relaxation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one instance. Exit 0 feasible, 1 infeasible, 2 out of budget or time.
    Solve(SolveArgs),
    /// Run a benchmark suite and print the results table.
    Bench(BenchArgs),
    /// Write a generated instance to a directory.
    Gen(GenArgs),
}

#[derive(Args)]
struct Knobs {
    /// Search radius, solution-norm bound, or r* depending on the algorithm.
    #[arg(long)]
    radius: Option<f64>,
    /// Subdeterminant bound for lfs.
    #[arg(long)]
    delta: Option<f64>,
    /// Relaxation parameter of the classical method.
    #[arg(long, default_value_t = 1.9)]
    lambda: f64,
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    #[arg(long, default_value_t = relaxfeas::dnc::THETA_DEFAULT)]
    theta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Elementary-procedure calls per search, or classical iterations.
    #[arg(long)]
    budget: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 600.0)]
    timeout: f64,
    /// Starting perturbation for lfg.
    #[arg(long)]
    nu: Option<f64>,
}

impl Knobs {
    fn settings(&self) -> Result<SolveSettings, String> {
        if !(self.timeout > 0.0) || !self.timeout.is_finite() {
            return Err(format!(
                "--timeout must be a positive number of seconds, got {}",
                self.timeout
            ));
        }
        Ok(SolveSettings {
            radius: self.radius,
            delta: self.delta,
            lambda: self.lambda,
            eps: self.eps,
            theta: self.theta,
            seed: self.seed,
            budget: self.budget,
            timeout: Some(Duration::from_secs_f64(self.timeout)),
            nu: self.nu,
        })
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    algo: Algo,
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    knobs: Knobs,
    /// Print the full report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteKind {
    Random01,
    Wedge,
    Files,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    suite: SuiteKind,
    /// Instance directory for `--suite files`.
    dir: Option<PathBuf>,
    /// Dimensions (random01) or exponents (wedge), as `a..b` or a single value.
    #[arg(long, value_parser = parse_dims)]
    dims: Option<RangeInclusive<usize>>,
    #[arg(long, default_value_t = 10)]
    per_dim: usize,
    /// Repetitions of relax-rand per instance.
    #[arg(long, default_value_t = 100)]
    runs: usize,
    /// Comma-separated algorithm list.
    #[arg(long, value_delimiter = ',')]
    algos: Option<Vec<Algo>>,
    #[arg(long)]
    threads: Option<usize>,
    /// Also write the results as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    knobs: Knobs,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Random01,
    Wedge,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    /// Number of variables (random01).
    #[arg(long)]
    n: Option<usize>,
    /// Wedge exponent.
    #[arg(long)]
    alpha: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Existing output directory.
    #[arg(long)]
    out: PathBuf,
}

fn parse_dims(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad dimension `{t}`"));
    let range = if let Some((a, b)) = s.split_once("..=") {
        num(a)?..=num(b)?
    } else if let Some((a, b)) = s.split_once("..") {
        num(a)?..=num(b)?
    } else {
        let v = num(s)?;
        v..=v
    };
    if range.is_empty() {
        return Err(format!("empty range `{s}`"));
    }
    Ok(range)
}

enum Failure {
    Usage(String),
    Other(String),
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Usage(m) => Failure::Usage(m),
            other => Failure::Other(other.to_string()),
        }
    }
}

fn solve(args: SolveArgs) -> Result<u8, Failure> {
    let settings = args.knobs.settings().map_err(Failure::Usage)?;
    let inst =
        read_instance(&args.instance).map_err(|e| Failure::Other(format!("{}: {e}", args.instance.display())))?;
    let report = solve_instance(args.algo, &inst.system, &settings)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        println!("{}: {}", report.algorithm, report.decision.label());
        if let Some(x) = report.decision.point() {
            let xs: Vec<String> = x.iter().map(|v| format!("{v}")).collect();
            println!("x = [{}]", xs.join(", "));
        }
        println!(
            "recursions {}  ep calls {}  iterations {}  max depth {}  time {:.3}s",
            report.recursions,
            report.ep_calls,
            report.iterations,
            report.max_depth,
            report.elapsed.as_secs_f64()
        );
        for t in &report.trace {
            let row = t.row.map_or_else(String::new, |r| format!(" row {r}"));
            println!("  [{}] {}{} {}", t.iteration, t.outcome, row, t.detail);
        }
        for n in &report.notes {
            println!("note: {n}");
        }
    }
    Ok(report.decision.exit_code() as u8)
}

fn bench(args: BenchArgs) -> Result<u8, Failure> {
    let suite = match (args.suite, args.dir) {
        (SuiteKind::Random01, None) => Suite::Random01,
        (SuiteKind::Wedge, None) => Suite::Wedge,
        (SuiteKind::Files, Some(dir)) => Suite::Files(dir),
        (SuiteKind::Files, None) => return Err(Failure::Usage("--suite files requires a directory".into())),
        (_, Some(_)) => return Err(Failure::Usage("a directory only applies to --suite files".into())),
    };
    let mut cfg = BenchConfig::new(suite);
    if let Some(d) = args.dims {
        cfg.dims = d;
    } else if cfg.suite == Suite::Wedge {
        cfg.dims = 1..=10;
    }
    cfg.per_dim = args.per_dim;
    cfg.runs = args.runs;
    if let Some(a) = args.algos {
        cfg.algos = a;
    }
    cfg.threads = args.threads;
    cfg.settings = args.knobs.settings().map_err(Failure::Usage)?;
    let out = run_bench(&cfg)?;
    print!("{}", render_table(&out.rows));
    for u in &out.unfinished {
        eprintln!("unfinished: {u}");
    }
    if let Some(path) = &args.out {
        write_csv(&out.rows, path)?;
    }
    Ok(0)
}

fn generate(args: GenArgs) -> Result<u8, Failure> {
    let inst = match args.family {
        FamilyKind::Random01 => match args.n {
            Some(n) if n >= 2 => gen_random01(n, args.seed),
            _ => return Err(Failure::Usage("--family random01 requires --n ≥ 2".into())),
        },
        FamilyKind::Wedge => match args.alpha {
            Some(a) if a >= 1 => gen_wedge(a),
            _ => return Err(Failure::Usage("--family wedge requires --alpha ≥ 1".into())),
        },
    };
    if !args.out.is_dir() {
        return Err(Failure::Other(format!(
            "output directory {} does not exist",
            args.out.display()
        )));
    }
    let path = args.out.join(format!("{}.txt", inst.name));
    write_instance(&inst, &path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
    println!("{}", path.display());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Gen(a) => generate(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
