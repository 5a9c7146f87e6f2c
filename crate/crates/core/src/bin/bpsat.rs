//! Command-line front end. Exit codes for `solve`: 10 = satisfiable,
//! 0 = unknown, 2 = input error.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use bpa_sat::bench::{self, BaselineTimes, BenchConfig, GenSpec, SpiModel};
use bpa_sat::engine::EngineConfig;
use bpa_sat::graph::FactorGraph;
use bpa_sat::ldpc::{self, DecodeOutcome, ParityInstance};
use bpa_sat::solver::{self, SolveStatus, SolverConfig};
use bpa_sat::{alist, dimacs};

const EXIT_SAT: u8 = 10;
const EXIT_UNKNOWN: u8 = 0;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "bpsat", version, about = "Belief-propagation SAT solver and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one DIMACS CNF file.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Run a directory of CNF files, or generated classes, and report completeness.
    Bench(BenchArgs),
    /// Estimated speedup of a hardware run against a baseline time.
    Estimate {
        #[arg(long)]
        t_baseline: f64,
        #[arg(long)]
        iters: usize,
        #[command(flatten)]
        spi: SpiArgs,
    },
    /// Decode a parity-check code from an alist matrix and per-bit P(bit = 1).
    Decode {
        matrix: PathBuf,
        priors: PathBuf,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
    },
    /// Time an external solver on every CNF file and write a baseline file.
    Baseline {
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Solver program and arguments; the instance path is appended.
        #[arg(last = true, required = true)]
        command: Vec<String>,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    #[arg(long, default_value_t = 9)]
    max_restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.0)]
    damping: f64,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            engine: EngineConfig {
                max_iterations: self.max_iters,
                epsilon: self.epsilon,
                damping: self.damping,
                ..EngineConfig::default()
            },
            max_restarts: self.max_restarts,
            seed: self.seed,
            ..SolverConfig::default()
        }
    }
}

#[derive(Args)]
struct SpiArgs {
    #[arg(long, default_value_t = SpiModel::VIRTEX2_QC_LDPC.codeword_length)]
    spi_codeword: f64,
    #[arg(long, default_value_t = SpiModel::VIRTEX2_QC_LDPC.throughput)]
    spi_throughput: f64,
    #[arg(long, default_value_t = SpiModel::VIRTEX2_QC_LDPC.reference_iterations)]
    spi_iters: f64,
}

impl SpiArgs {
    fn model(&self) -> Result<SpiModel> {
        Ok(SpiModel::new(self.spi_codeword, self.spi_throughput, self.spi_iters)?)
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of `*.cnf` files; classes come from the file names.
    #[arg(required_unless_present = "gen", conflicts_with = "gen")]
    dir: Option<PathBuf>,
    /// Generated class `vars,clauses,count`; repeatable.
    #[arg(long, value_parser = parse_gen)]
    gen: Vec<(usize, usize, usize)>,
    /// Two-column baseline time file (instance name, seconds).
    #[arg(long)]
    baseline: Option<PathBuf>,
    /// Class report CSV; instance rows go to `<stem>.details.csv` beside it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    spi: SpiArgs,
}

fn parse_gen(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| format!("`{p}` is not a count")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        &[n, m, count] => Ok((n, m, count)),
        _ => Err("expected vars,clauses,count".into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Solve { file, solver } => solve(file, solver),
        Cmd::Bench(args) => run_bench(args),
        Cmd::Estimate { t_baseline, iters, spi } => {
            let model = spi.model()?;
            let speedup = bench::estimate_speedup(t_baseline, iters, &model)?;
            println!("spi_seconds {:e}", model.spi());
            println!("hw_seconds {:e}", bench::hardware_seconds(iters, &model));
            println!("speedup {speedup}");
            Ok(0)
        }
        Cmd::Decode { matrix, priors, max_iters } => decode(matrix, priors, max_iters),
        Cmd::Baseline { dir, out, command } => {
            let instances = bench::load_directory(&dir)?;
            let times = bench::measure_baseline(&instances, &command)?;
            fs::write(&out, times.to_text()).with_context(|| format!("writing {}", out.display()))?;
            println!("timed {} instances", times.len());
            Ok(0)
        }
    }
}

fn solve(file: PathBuf, args: SolverArgs) -> Result<u8> {
    let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
    let formula = dimacs::parse_dimacs(&text).with_context(|| file.display().to_string())?;
    let outcome = solver::solve(&formula, &args.config())?;
    println!("c iterations {} attempts {}", outcome.total_iterations, outcome.attempts);
    if formula.tautologies_dropped() > 0 {
        println!("c tautologies dropped {}", formula.tautologies_dropped());
    }
    match &outcome.status {
        SolveStatus::Sat(assignment) => {
            println!("s SATISFIABLE");
            let lits: Vec<String> = assignment.to_dimacs_literals().iter().map(i64::to_string).collect();
            println!("v {} 0", lits.join(" "));
            Ok(EXIT_SAT)
        }
        SolveStatus::Unknown => {
            println!("s UNKNOWN");
            Ok(EXIT_UNKNOWN)
        }
    }
}

fn run_bench(args: BenchArgs) -> Result<u8> {
    let instances = match &args.dir {
        Some(dir) => bench::load_directory(dir)?,
        None => bench::generate_instances(
            &args
                .gen
                .iter()
                .map(|&(vars, clauses, count)| GenSpec { vars, clauses, count, seed: args.solver.seed })
                .collect::<Vec<_>>(),
        )?,
    };
    if instances.is_empty() {
        bail!("no instances");
    }
    let baseline = args
        .baseline
        .as_ref()
        .map(|p| -> Result<BaselineTimes> {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(BaselineTimes::parse(&text)?)
        })
        .transpose()?;
    let config = BenchConfig { solver: args.solver.config(), spi: args.spi.model()?, parallel: !args.sequential };
    let run = bench::run_bench(&instances, &config, baseline.as_ref())?;
    for w in &run.warnings {
        eprintln!("warning: {w}");
    }

    println!(
        "{:<16} {:>6} {:>6} {:>12} {:>10} {:>12}",
        "class", "total", "solved", "completeness", "mean_iters", "mean_speedup"
    );
    for c in &run.report.classes {
        let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.2}"));
        println!(
            "{:<16} {:>6} {:>6} {:>12.3} {:>10} {:>12}",
            c.class,
            c.total,
            c.solved,
            c.completeness,
            fmt(c.mean_iters),
            fmt(c.mean_speedup)
        );
    }
    if let Some(out) = &args.out {
        let create =
            |p: &PathBuf| File::create(p).with_context(|| format!("creating {}", p.display())).map(BufWriter::new);
        bench::write_report_csv(&run.report, create(out)?)?;
        let details = bench::details_path(out);
        bench::write_details_csv(&run.details, create(&details)?)?;
        println!("wrote {} and {}", out.display(), details.display());
    }
    Ok(0)
}

fn decode(matrix: PathBuf, priors: PathBuf, max_iters: usize) -> Result<u8> {
    let text = fs::read_to_string(&matrix).with_context(|| format!("reading {}", matrix.display()))?;
    let h = alist::parse_alist(&text).with_context(|| matrix.display().to_string())?;
    let text = fs::read_to_string(&priors).with_context(|| format!("reading {}", priors.display()))?;
    let p = ldpc::parse_priors(&text)?;
    let instance = ParityInstance::new(FactorGraph::from_parity_matrix(&h)?, p)?;
    let config = EngineConfig { max_iterations: max_iters, ..EngineConfig::default() };
    match ldpc::decode(&instance, &config)? {
        DecodeOutcome::Codeword { bits, iterations } => {
            let word: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            println!("codeword {word}");
            println!("iterations {iterations}");
        }
        DecodeOutcome::Failed { iterations } => println!("failed after {iterations} iterations"),
    }
    Ok(0)
}
