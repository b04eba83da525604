use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use symtangle::sweep::{
    parse_usize_list, run_sweep, write_csv, KSelection, SweepConfig, DEFAULT_PRECISION,
};
use symtangle::verify::{run_check, run_oracle, CheckConfig, OracleConfig, ORACLE_REPORT_CAP};

/// Entanglement monogamy of Dicke-class symmetric N-qubit states.
#[derive(Debug, Parser)]
#[command(name = "symtangle", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a CSV of tangles over an (N, k, a) grid.
    Sweep(SweepArgs),
    /// Check the monogamy and monotonicity properties over a grid.
    Check(CheckArgs),
    /// Compare the analytic marginals against brute-force partial traces.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Jobs {
    Auto,
    Fixed(usize),
}

impl FromStr for Jobs {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Self::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Self::Fixed(n)),
            _ => Err(format!("expected a positive integer or 'auto', got '{s}'")),
        }
    }
}

#[derive(Debug, Args)]
struct Common {
    /// Worker threads, or `auto`.
    #[arg(long, default_value = "auto")]
    jobs: Jobs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Comma-separated qubit counts.
    #[arg(long = "n", default_value = "10,100", value_parser = parse_list)]
    n: NList,
    /// Comma-separated degeneracies, or `all` for 1..=N/2.
    #[arg(long = "k", default_value = "all", value_parser = parse_k)]
    k: KSelection,
    #[arg(long, default_value_t = 0.0)]
    a_min: f64,
    #[arg(long, default_value_t = 1.0)]
    a_max: f64,
    #[arg(long, default_value_t = 101)]
    a_steps: usize,
    /// Digits after the decimal point.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    #[arg(long, default_value_t = 101)]
    a_steps: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    #[arg(long, default_value_t = 11)]
    a_steps: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone)]
struct NList(Vec<usize>);

fn parse_list(s: &str) -> Result<NList, String> {
    parse_usize_list(s).map(NList).map_err(|e| e.to_string())
}

fn parse_k(s: &str) -> Result<KSelection, String> {
    s.parse().map_err(|e: symtangle::Error| e.to_string())
}

const EXIT_VIOLATION: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = match &cli.command {
        Command::Sweep(a) => a.common.jobs,
        Command::Check(a) => a.common.jobs,
        Command::Oracle(a) => a.common.jobs,
    };
    if let Jobs::Fixed(n) = jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    match cli.command {
        Command::Sweep(args) => sweep(args),
        Command::Check(args) => check(args),
        Command::Oracle(args) => oracle(args),
    }
}

fn sweep(args: SweepArgs) -> ExitCode {
    let cfg = SweepConfig {
        n_values: args.n.0,
        k_values: args.k,
        a_min: args.a_min,
        a_max: args.a_max,
        a_steps: args.a_steps,
        precision: args.precision,
    };
    let output = match run_sweep(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    if output.records.is_empty() {
        eprintln!("error: no valid rows in the requested grid");
        return ExitCode::from(EXIT_CONFIG);
    }

    let written = match &args.out {
        Some(path) => File::create(path)
            .and_then(|f| write_csv(&output.records, cfg.precision, BufWriter::new(f))),
        None => write_csv(
            &output.records,
            cfg.precision,
            BufWriter::new(io::stdout().lock()),
        ),
    };
    if let Err(e) = written {
        let target = args
            .out
            .as_ref()
            .map_or("standard output".to_string(), |p| p.display().to_string());
        eprintln!("error: writing {target}: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    ExitCode::SUCCESS
}

fn check(args: CheckArgs) -> ExitCode {
    let cfg = CheckConfig {
        n_max: args.n_max,
        a_steps: args.a_steps,
        tol: args.tol,
        ..CheckConfig::default()
    };
    match run_check(&cfg) {
        Ok(report) => {
            print_lines(&report.lines());
            exit_with(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn oracle(args: OracleArgs) -> ExitCode {
    let cfg = OracleConfig {
        n_max: args.n_max,
        a_steps: args.a_steps,
        tol: args.tol,
        cap: ORACLE_REPORT_CAP,
    };
    match run_oracle(&cfg) {
        Ok(report) => {
            print_lines(&report.lines());
            if let (false, Some(worst)) = (report.passed(), report.worst()) {
                eprintln!("worst cell: {}", worst.line(report.tol));
            }
            exit_with(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn print_lines(lines: &[String]) {
    let mut out = io::stdout().lock();
    for line in lines {
        let _ = writeln!(out, "{line}");
    }
}

fn exit_with(code: i32) -> ExitCode {
    if code == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    }
}
