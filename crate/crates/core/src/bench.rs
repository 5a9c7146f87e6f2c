//! Benchmark harness: instance loading, completeness and iteration
//! statistics, the seconds-per-iteration hardware model, speedup estimates
//! and CSV reports.
//!
//! Two CSV files come out of a run. The class report has one row per class:
//!
//! ```text
//! class,total,solved,completeness,mean_iters,median_iters,mean_hw_seconds,mean_baseline_seconds,mean_speedup
//! ```
//!
//! and the detail file has one row per instance. Iteration counts are the
//! total over all restart attempts, which is what the hardware would execute.
//! Iteration and time statistics cover solved instances only; baseline and
//! speedup means cover solved instances that have a baseline time. Empty cells
//! mean "not available".

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;
use walkdir::WalkDir;

use crate::cnf::{Assignment, CnfFormula};
use crate::dimacs::{self, DimacsError};
use crate::generator::{self, gen_random_3sat};
use crate::solver::{self, derive_seed, SolveError, SolveOutcome, SolverConfig};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: DimacsError },
    #[error("baseline line {line}: {message}")]
    Baseline { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("instance {name}: {source}")]
    Solve { name: String, source: SolveError },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Hardware throughput model: how long one message-passing iteration takes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiModel {
    /// Symbols processed in parallel per pass.
    pub codeword_length: f64,
    /// Symbols per second.
    pub throughput: f64,
    /// Iterations the throughput figure was measured at.
    pub reference_iterations: f64,
}

impl SpiModel {
    /// Quasi-cyclic LDPC decoder on a Virtex-2 XC2V6000-5: 3969-bit
    /// codewords at 1417 Mb/s with 15 iterations.
    pub const VIRTEX2_QC_LDPC: SpiModel =
        SpiModel { codeword_length: 3969.0, throughput: 1417e6, reference_iterations: 15.0 };

    pub fn new(codeword_length: f64, throughput: f64, reference_iterations: f64) -> Result<Self, BenchError> {
        let model = SpiModel { codeword_length, throughput, reference_iterations };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<(), BenchError> {
        for (name, v) in [
            ("codeword length", self.codeword_length),
            ("throughput", self.throughput),
            ("reference iterations", self.reference_iterations),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(BenchError::Invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Seconds per iteration.
    pub fn spi(&self) -> f64 {
        self.codeword_length / (self.throughput * self.reference_iterations)
    }
}

impl Default for SpiModel {
    fn default() -> Self {
        SpiModel::VIRTEX2_QC_LDPC
    }
}

pub fn spi(model: &SpiModel) -> Result<f64, BenchError> {
    model.validate()?;
    Ok(model.spi())
}

/// Estimated hardware time for `iterations`.
pub fn hardware_seconds(iterations: usize, model: &SpiModel) -> f64 {
    iterations as f64 * model.spi()
}

/// `t_baseline / (iterations · spi)`.
pub fn estimate_speedup(t_baseline: f64, iterations: usize, model: &SpiModel) -> Result<f64, BenchError> {
    model.validate()?;
    if !(t_baseline > 0.0 && t_baseline.is_finite()) {
        return Err(BenchError::Invalid(format!("baseline time must be positive, got {t_baseline}")));
    }
    if iterations == 0 {
        return Err(BenchError::Invalid("iterations must be at least 1".into()));
    }
    Ok(t_baseline / hardware_seconds(iterations, model))
}

/// SATLIB-style class of a file name: everything before a trailing
/// `-<digits>.cnf`, e.g. `uf20-01.cnf` → `uf20`. Other names map to their stem.
pub fn class_name(file_name: &str) -> String {
    let stem = file_name.strip_suffix(".cnf").unwrap_or(file_name);
    match stem.rsplit_once('-') {
        Some((prefix, digits))
            if file_name.ends_with(".cnf")
                && !prefix.is_empty()
                && !digits.is_empty()
                && digits.bytes().all(|b| b.is_ascii_digit()) =>
        {
            prefix.to_string()
        }
        _ => stem.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub class: String,
    pub name: String,
    pub path: Option<PathBuf>,
    pub formula: CnfFormula,
}

/// Every `*.cnf` file below `dir`, sorted by (class, name).
pub fn load_directory(dir: &Path) -> Result<Vec<Instance>, BenchError> {
    let mut out = Vec::new();
    for entry in WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| BenchError::Io {
            path: e.path().map_or_else(|| dir.to_path_buf(), Path::to_path_buf),
            source: e.into(),
        })?;
        let path = entry.path();
        if !entry.file_type().is_file() || path.extension().and_then(|e| e.to_str()) != Some("cnf") {
            continue;
        }
        let text = fs::read_to_string(path).map_err(|source| BenchError::Io { path: path.to_path_buf(), source })?;
        let formula =
            dimacs::parse_dimacs(&text).map_err(|source| BenchError::Parse { path: path.to_path_buf(), source })?;
        let file_name = entry.file_name().to_string_lossy().into_owned();
        out.push(Instance {
            class: class_name(&file_name),
            name: file_name.strip_suffix(".cnf").unwrap_or(&file_name).to_string(),
            path: Some(path.to_path_buf()),
            formula,
        });
    }
    sort_instances(&mut out);
    Ok(out)
}

fn sort_instances(instances: &mut [Instance]) {
    instances.sort_by(|a, b| (&a.class, &a.name).cmp(&(&b.class, &b.name)));
}

/// A family of uniform random 3-SAT instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub vars: usize,
    pub clauses: usize,
    pub count: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn class(&self) -> String {
        generator::class_label("rand", self.vars, self.clauses)
    }
}

/// Instances named `<class>-<index>`; instance `k` of a spec uses the formula
/// seed derived from `(seed, vars, clauses, k)`.
pub fn generate_instances(specs: &[GenSpec]) -> Result<Vec<Instance>, BenchError> {
    let mut out = Vec::new();
    for spec in specs {
        let class = spec.class();
        let family_seed = derive_seed(derive_seed(spec.seed, spec.vars as u64), spec.clauses as u64);
        for k in 0..spec.count {
            let formula = gen_random_3sat(spec.vars, spec.clauses, derive_seed(family_seed, k as u64))
                .map_err(|e| BenchError::Invalid(e.to_string()))?;
            out.push(Instance { name: format!("{class}-{:04}", k + 1), class: class.clone(), path: None, formula });
        }
    }
    sort_instances(&mut out);
    Ok(out)
}

/// Baseline solver times by instance name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BaselineTimes {
    times: BTreeMap<String, f64>,
}

impl BaselineTimes {
    pub fn new(times: BTreeMap<String, f64>) -> Self {
        BaselineTimes { times }
    }

    /// Two columns per line, `name seconds`, separated by whitespace or a
    /// comma. Blank lines and `#` comments are skipped. Names may carry a
    /// `.cnf` suffix.
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let mut times = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| BenchError::Baseline { line: idx + 1, message };
            let fields: Vec<&str> =
                line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
            let [name, secs] = fields.as_slice() else {
                return Err(err(format!("expected 2 columns, found {}", fields.len())));
            };
            let secs: f64 = secs.parse().map_err(|_| err(format!("`{secs}` is not a number")))?;
            if !(secs > 0.0 && secs.is_finite()) {
                return Err(err(format!("time must be positive, got {secs}")));
            }
            let name = name.strip_suffix(".cnf").unwrap_or(name);
            times.insert(name.to_string(), secs);
        }
        Ok(BaselineTimes { times })
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.times.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.times.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn to_text(&self) -> String {
        self.times.iter().map(|(n, t)| format!("{n} {t}\n")).collect()
    }
}

/// Wall-clock times of an external solver, one run per instance file.
/// `command[0]` is the program; the instance path is appended to the rest.
pub fn measure_baseline(instances: &[Instance], command: &[String]) -> Result<BaselineTimes, BenchError> {
    let (program, args) = command.split_first().ok_or_else(|| BenchError::Invalid("empty solver command".into()))?;
    let mut times = BTreeMap::new();
    for inst in instances {
        let path =
            inst.path.as_ref().ok_or_else(|| BenchError::Invalid(format!("instance {} has no file", inst.name)))?;
        let start = Instant::now();
        Command::new(program)
            .args(args)
            .arg(path)
            .output()
            .map_err(|source| BenchError::Io { path: PathBuf::from(program), source })?;
        times.insert(inst.name.clone(), start.elapsed().as_secs_f64());
    }
    Ok(BaselineTimes { times })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchConfig {
    pub solver: SolverConfig,
    pub spi: SpiModel,
    /// Run instances on the rayon pool. Output does not depend on it.
    pub parallel: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { solver: SolverConfig::default(), spi: SpiModel::default(), parallel: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Sat,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetailRow {
    pub class: String,
    pub instance: String,
    pub num_vars: usize,
    pub num_clauses: usize,
    pub tautologies: usize,
    pub status: Status,
    pub attempts: usize,
    pub total_iterations: usize,
    pub hw_seconds: Option<f64>,
    pub baseline_seconds: Option<f64>,
    pub speedup: Option<f64>,
    /// `0`/`1` per variable, variable 1 first; empty unless solved.
    pub assignment: String,
    pub assignment_sha256: String,
}

impl DetailRow {
    pub fn assignment(&self) -> Option<Assignment> {
        (self.status == Status::Sat).then(|| Assignment::from_bit_string(&self.assignment)).flatten()
    }
}

pub fn assignment_digest(assignment: &Assignment) -> String {
    hex::encode(Sha256::digest(assignment.to_bit_string().as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub class: String,
    pub total: usize,
    pub solved: usize,
    pub completeness: f64,
    pub mean_iters: Option<f64>,
    pub median_iters: Option<f64>,
    pub mean_hw_seconds: Option<f64>,
    pub mean_baseline_seconds: Option<f64>,
    pub mean_speedup: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchReport {
    pub classes: Vec<ClassRow>,
}

impl BenchReport {
    /// Aggregates detail rows per class, classes in sorted order.
    pub fn from_details(details: &[DetailRow]) -> Self {
        let mut groups: BTreeMap<&str, Vec<&DetailRow>> = BTreeMap::new();
        for row in details {
            groups.entry(&row.class).or_default().push(row);
        }
        let classes = groups
            .into_iter()
            .map(|(class, rows)| {
                let solved: Vec<&DetailRow> = rows.iter().copied().filter(|r| r.status == Status::Sat).collect();
                let mut iters: Vec<f64> = solved.iter().map(|r| r.total_iterations as f64).collect();
                iters.sort_by(f64::total_cmp);
                let with_baseline: Vec<&DetailRow> = solved.iter().copied().filter(|r| r.speedup.is_some()).collect();
                ClassRow {
                    class: class.to_string(),
                    total: rows.len(),
                    solved: solved.len(),
                    completeness: solved.len() as f64 / rows.len() as f64,
                    mean_iters: mean(iters.iter().copied()),
                    median_iters: median(&iters),
                    mean_hw_seconds: mean(solved.iter().filter_map(|r| r.hw_seconds)),
                    mean_baseline_seconds: mean(with_baseline.iter().filter_map(|r| r.baseline_seconds)),
                    mean_speedup: mean(with_baseline.iter().filter_map(|r| r.speedup)),
                }
            })
            .collect();
        BenchReport { classes }
    }

    pub fn class(&self, name: &str) -> Option<&ClassRow> {
        self.classes.iter().find(|c| c.class == name)
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Median of sorted values.
fn median(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some((sorted[n / 2 - 1] + sorted[n / 2]) / 2.0),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRun {
    pub report: BenchReport,
    pub details: Vec<DetailRow>,
    pub warnings: Vec<String>,
}

/// Solves every instance and aggregates the results. Instance `k` (in the
/// given order) runs with the solver seed derived from `(config seed, k)`.
pub fn run_bench(
    instances: &[Instance],
    config: &BenchConfig,
    baseline: Option<&BaselineTimes>,
) -> Result<BenchRun, BenchError> {
    config.spi.validate()?;
    let mut warnings = Vec::new();
    if let Some(b) = baseline {
        let known: BTreeSet<&str> = instances.iter().map(|i| i.name.as_str()).collect();
        for name in b.names().filter(|n| !known.contains(n)) {
            warnings.push(format!("baseline entry `{name}` matches no instance; ignored"));
        }
    }

    let formulas: Vec<CnfFormula> = instances.iter().map(|i| i.formula.clone()).collect();
    let outcomes = if config.parallel {
        solver::solve_batch(&formulas, &config.solver)
    } else {
        solver::solve_batch_sequential(&formulas, &config.solver)
    };

    let details = instances
        .iter()
        .zip(outcomes)
        .map(|(inst, outcome)| {
            let outcome = outcome.map_err(|source| BenchError::Solve { name: inst.name.clone(), source })?;
            detail_row(inst, &outcome, config, baseline)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BenchRun { report: BenchReport::from_details(&details), details, warnings })
}

fn detail_row(
    inst: &Instance,
    outcome: &SolveOutcome,
    config: &BenchConfig,
    baseline: Option<&BaselineTimes>,
) -> Result<DetailRow, BenchError> {
    let assignment = outcome.assignment();
    let solved_iters = assignment.map(|_| outcome.total_iterations).filter(|&n| n > 0);
    let baseline_seconds = baseline.and_then(|b| b.get(&inst.name));
    let speedup = match (solved_iters, baseline_seconds) {
        (Some(iters), Some(t)) => Some(estimate_speedup(t, iters, &config.spi)?),
        _ => None,
    };
    Ok(DetailRow {
        class: inst.class.clone(),
        instance: inst.name.clone(),
        num_vars: inst.formula.num_vars(),
        num_clauses: inst.formula.num_clauses(),
        tautologies: inst.formula.tautologies_dropped(),
        status: if outcome.is_sat() { Status::Sat } else { Status::Unknown },
        attempts: outcome.attempts,
        total_iterations: outcome.total_iterations,
        hw_seconds: solved_iters.map(|n| hardware_seconds(n, &config.spi)),
        baseline_seconds,
        speedup,
        assignment: assignment.map(Assignment::to_bit_string).unwrap_or_default(),
        assignment_sha256: assignment.map(assignment_digest).unwrap_or_default(),
    })
}

fn write_rows<T: Serialize, W: Write>(rows: &[T], writer: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn read_rows<T: for<'de> Deserialize<'de>, R: Read>(reader: R) -> Result<Vec<T>, BenchError> {
    csv::Reader::from_reader(reader).deserialize().collect::<Result<Vec<T>, _>>().map_err(Into::into)
}

pub fn write_report_csv<W: Write>(report: &BenchReport, writer: W) -> Result<(), BenchError> {
    write_rows(&report.classes, writer)
}

pub fn read_report_csv<R: Read>(reader: R) -> Result<BenchReport, BenchError> {
    Ok(BenchReport { classes: read_rows(reader)? })
}

pub fn write_details_csv<W: Write>(details: &[DetailRow], writer: W) -> Result<(), BenchError> {
    write_rows(details, writer)
}

pub fn read_details_csv<R: Read>(reader: R) -> Result<Vec<DetailRow>, BenchError> {
    read_rows(reader)
}

/// Detail file path for a report path: `report.csv` → `report.details.csv`.
pub fn details_path(report: &Path) -> PathBuf {
    let stem = report.file_stem().map_or_else(|| "report".into(), |s| s.to_string_lossy().into_owned());
    report.with_file_name(format!("{stem}.details.csv"))
}
