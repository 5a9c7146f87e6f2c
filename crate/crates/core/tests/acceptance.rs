//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Set `BPSAT_SATLIB_DIR` to a directory holding the SATLIB
//! `uf20-91` and `uf100-430` sets to run criterion 7a on them; otherwise
//! generated instances of the same shapes are used.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;

use bpa_sat::bench::{
    self, estimate_speedup, BaselineTimes, BenchConfig, BenchRun, DetailRow, GenSpec, Instance, SpiModel, Status,
};
use bpa_sat::cnf::{Literal, Polarity};
use bpa_sat::engine::{init_messages, oracle_clause_marginal, update_clause_to_var, EngineConfig, InitPolicy};
use bpa_sat::graph::{FactorGraph, ParityMatrix};
use bpa_sat::ldpc::{brute_force_ml, decode, xor_check_to_var, DecodeOutcome, ParityInstance};
use bpa_sat::solver::SolverConfig;
use bpa_sat::CnfFormula;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PUBLISHED_SPI: f64 = 1.86e-7;
const ROUNDED_SPI: f64 = 1.8668e-7;
const SPI_REL_TOL: f64 = 0.01;
const SPEEDUP_REL_TOL: f64 = 1e-9;
const ORACLE_CASES: usize = 10_000;
const ORACLE_TOL: f64 = 1e-12;
const EASY_RATIO: f64 = 2.0;
const EASY_SIZES: [usize; 3] = [20, 50, 100];
const EASY_COUNT: usize = 100;
const EASY_COMPLETENESS: f64 = 0.9;
const ITER_GROWTH_BOUND: f64 = 3.0;
const LDPC_TRIALS: usize = 200;
const LDPC_MIN_PRIOR: f64 = 0.85;
const BENCH_SEED: u64 = 2024;

/// Results keyed by criterion id, printed in id order at the end.
#[derive(Default)]
struct Suite {
    results: BTreeMap<&'static str, (bool, String)>,
}

impl Suite {
    fn check(&mut self, id: &'static str, pass: bool, summary: String) {
        self.results.insert(id, (pass, summary));
    }

    fn report(&self) -> usize {
        for (id, (pass, summary)) in &self.results {
            println!("{} {id:<3} {summary}", if *pass { "PASS" } else { "FAIL" });
        }
        self.results.values().filter(|(pass, _)| !pass).count()
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn main() -> ExitCode {
    let mut suite = Suite::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);

    spi_reproduction(&mut suite);
    speedup_replay(&mut suite, &mut rng);
    oracle_equivalence(&mut suite, &mut rng);
    let bench_runs = benchmarks(&mut suite);
    soundness(&mut suite, &bench_runs);
    ldpc_cross_check(&mut suite, &mut rng);
    baseline_speedup_column(&mut suite);

    let failed = suite.report();
    println!("{failed} of {} criteria failed", suite.results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn spi_reproduction(suite: &mut Suite) {
    let spi = bench::spi(&SpiModel::new(3969.0, 1.417e9, 15.0).unwrap()).unwrap();
    let (e_published, e_rounded) = (rel_err(spi, PUBLISHED_SPI), rel_err(spi, ROUNDED_SPI));
    suite.check(
        "1",
        e_published <= SPI_REL_TOL && e_rounded <= SPI_REL_TOL,
        format!(
            "spi = {spi:.6e} s/iter; {:.3}% from 1.86e-7, {:.3}% from 1.8668e-7",
            e_published * 100.0,
            e_rounded * 100.0
        ),
    );
}

fn speedup_replay(suite: &mut Suite, rng: &mut ChaCha8Rng) {
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let n = rng.random_range(500.0..20_000.0);
        let throughput = rng.random_range(1e8..5e9);
        let ref_iters = rng.random_range(1.0..50.0);
        let t = rng.random_range(1e-4..100.0);
        let iters = rng.random_range(1..5_000usize);
        let model = SpiModel::new(n, throughput, ref_iters).unwrap();
        let got = estimate_speedup(t, iters, &model).unwrap();
        // t * throughput * ref_iters / (iters * n), evaluated in a different order
        let want = (t * throughput) / (iters as f64) * ref_iters / n;
        worst = worst.max(rel_err(got, want));
    }
    suite.check("2", worst <= SPEEDUP_REL_TOL, format!("10 random inputs, worst relative error {worst:.2e}"));
}

fn oracle_equivalence(suite: &mut Suite, rng: &mut ChaCha8Rng) {
    let config = EngineConfig::default();
    let eps = config.epsilon;
    let mut worst_clause: f64 = 0.0;
    for _ in 0..ORACLE_CASES {
        let len = rng.random_range(1..=10usize);
        let vars = index::sample(rng, 12, len);
        let clause: Vec<Literal> = vars
            .iter()
            .map(|v| Literal::new(v as u32 + 1, if rng.random() { Polarity::Negated } else { Polarity::Positive }))
            .collect();
        let f = CnfFormula::new(12, vec![clause.clone()]).unwrap();
        let g = FactorGraph::from_cnf(&f).unwrap();
        let mut state = init_messages(&g, InitPolicy::Uniform, &config);
        let q_one: Vec<f64> = (0..len).map(|_| rng.random_range(eps..=1.0 - eps)).collect();
        for (k, id) in g.check_edges(0).enumerate() {
            state.q[id] = [1.0 - q_one[k], q_one[k]];
        }
        let r = update_clause_to_var(&g, &state);
        for (k, id) in g.check_edges(0).enumerate() {
            for value in [false, true] {
                let want = oracle_clause_marginal(&clause, &q_one, k, value).unwrap();
                worst_clause = worst_clause.max((r[id][value as usize] - want).abs());
            }
        }
    }

    let mut worst_xor: f64 = 0.0;
    for _ in 0..ORACLE_CASES {
        let others: Vec<f64> = (0..rng.random_range(0..10usize)).map(|_| rng.random_range(eps..=1.0 - eps)).collect();
        let got = xor_check_to_var(others.iter().map(|&p| [1.0 - p, p]));
        let mut even = 0.0;
        for bits in 0u32..1 << others.len() {
            let w: f64 =
                others.iter().enumerate().map(|(k, &p)| if bits >> k & 1 == 1 { p } else { 1.0 - p }).product();
            if bits.count_ones() % 2 == 0 {
                even += w;
            }
        }
        worst_xor = worst_xor.max((got[0] - even).abs()).max((got[1] - (1.0 - even)).abs());
    }
    suite.check(
        "3",
        worst_clause <= ORACLE_TOL && worst_xor <= ORACLE_TOL,
        format!(
            "{ORACLE_CASES} clause cases, max |diff| {worst_clause:.2e}; {ORACLE_CASES} parity cases, max |diff| {worst_xor:.2e}"
        ),
    );
}

fn details_bytes(rows: &[DetailRow]) -> Vec<u8> {
    let mut buf = Vec::new();
    bench::write_details_csv(rows, &mut buf).unwrap();
    buf
}

/// Satisfiable instances per class, by the independent DPLL oracle.
fn satisfiable_counts(instances: &[Instance]) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for inst in instances {
        *counts.entry(inst.class.clone()).or_insert(0) += common::dpll_sat(&inst.formula) as usize;
    }
    counts
}

fn solved_counts(run: &BenchRun) -> BTreeMap<String, usize> {
    run.report.classes.iter().map(|c| (c.class.clone(), c.solved)).collect()
}

/// First `count` satisfiable instances of a generated shape.
fn satisfiable_proxy(vars: usize, clauses: usize, count: usize) -> Vec<Instance> {
    let pool = bench::generate_instances(&[GenSpec { vars, clauses, count: count * 4, seed: BENCH_SEED }]).unwrap();
    let picked: Vec<Instance> = pool.into_iter().filter(|i| common::dpll_sat(&i.formula)).take(count).collect();
    assert_eq!(picked.len(), count, "not enough satisfiable {vars}-{clauses} instances");
    picked
}

fn benchmarks(suite: &mut Suite) -> Vec<(Vec<Instance>, BenchRun)> {
    let specs: Vec<GenSpec> = EASY_SIZES
        .iter()
        .map(|&n| GenSpec { vars: n, clauses: (n as f64 * EASY_RATIO) as usize, count: EASY_COUNT, seed: BENCH_SEED })
        .collect();
    let easy = bench::generate_instances(&specs).unwrap();
    let config = BenchConfig::default();

    // 5: determinism
    let first = bench::run_bench(&easy, &config, None).unwrap();
    let second = bench::run_bench(&easy, &config, None).unwrap();
    let sequential = bench::run_bench(&easy, &BenchConfig { parallel: false, ..config }, None).unwrap();
    let bytes = details_bytes(&first.details);
    let same_twice = bytes == details_bytes(&second.details);
    let same_seq = bytes == details_bytes(&sequential.details);
    suite.check(
        "5",
        same_twice && same_seq,
        format!(
            "{} rows, {} bytes; parallel rerun identical: {same_twice}, sequential identical: {same_seq}",
            first.details.len(),
            bytes.len()
        ),
    );

    // 6: completeness over satisfiable instances
    let sat = satisfiable_counts(&easy);
    let solved = solved_counts(&first);
    let mut parts = Vec::new();
    let mut all_ok = true;
    for spec in &specs {
        let class = spec.class();
        let c = solved[&class] as f64 / sat[&class] as f64;
        all_ok &= c >= EASY_COMPLETENESS;
        parts.push(format!("{class} {}/{} = {c:.2}", solved[&class], sat[&class]));
    }
    suite.check("6", all_ok, format!("completeness >= {EASY_COMPLETENESS}: {}", parts.join(", ")));

    // 7a: completeness non-increasing with size
    let (small, large, source) = match std::env::var_os("BPSAT_SATLIB_DIR") {
        Some(dir) => {
            let all = bench::load_directory(std::path::Path::new(&dir)).unwrap();
            let pick = |c: &str| all.iter().filter(|i| i.class == c).cloned().collect::<Vec<_>>();
            (pick("uf20"), pick("uf100"), "SATLIB uf20-91 / uf100-430")
        }
        None => (
            satisfiable_proxy(20, 91, EASY_COUNT),
            satisfiable_proxy(100, 430, EASY_COUNT),
            "generated satisfiable 20-91 / 100-430",
        ),
    };
    let trend: Vec<Instance> = small.iter().chain(&large).cloned().collect();
    let trend_run = bench::run_bench(&trend, &config, None).unwrap();
    let share = |insts: &[Instance]| {
        let names: std::collections::BTreeSet<&str> = insts.iter().map(|i| i.name.as_str()).collect();
        let solved =
            trend_run.details.iter().filter(|d| names.contains(d.instance.as_str()) && d.status == Status::Sat).count();
        (solved, insts.len())
    };
    let ((s_small, n_small), (s_large, n_large)) = (share(&small), share(&large));
    let (c_small, c_large) = (s_small as f64 / n_small as f64, s_large as f64 / n_large as f64);
    suite.check(
        "7a",
        n_small > 0 && n_large > 0 && c_small >= c_large,
        format!("{source}: completeness {s_small}/{n_small} = {c_small:.2} vs {s_large}/{n_large} = {c_large:.2}"),
    );

    // 7b: restarts keep every solution and do not lower completeness
    let no_restart_config = BenchConfig { solver: SolverConfig::default().without_restarts(), ..config };
    let no_restart = bench::run_bench(&easy, &no_restart_config, None).unwrap();
    let lost = no_restart
        .details
        .iter()
        .zip(&first.details)
        .filter(|(off, on)| off.status == Status::Sat && on.status != Status::Sat)
        .count();
    let (on, off) = (
        first.details.iter().filter(|d| d.status == Status::Sat).count(),
        no_restart.details.iter().filter(|d| d.status == Status::Sat).count(),
    );
    let per_class: Vec<String> = first
        .report
        .classes
        .iter()
        .zip(&no_restart.report.classes)
        .map(|(a, b)| format!("{} {:+.2}", a.class, a.completeness - b.completeness))
        .collect();
    suite.check(
        "7b",
        lost == 0 && on >= off,
        format!("solved {off} -> {on} with restarts, {lost} lost; completeness delta {}", per_class.join(", ")),
    );

    // 7c: mean iterations over solved instances, n = 100 vs n = 20
    let class_of = |n: usize| specs.iter().find(|s| s.vars == n).unwrap().class();
    let mean_iters = |n: usize| first.report.class(&class_of(n)).and_then(|c| c.mean_iters).unwrap();
    let mean_attempts = |n: usize| {
        let solved: Vec<&DetailRow> =
            first.details.iter().filter(|d| d.class == class_of(n) && d.status == Status::Sat).collect();
        solved.iter().map(|d| d.attempts as f64).sum::<f64>() / solved.len() as f64
    };
    let (m20, m100) = (mean_iters(20), mean_iters(100));
    let ratio = m100 / m20;
    let (attempts20, attempts100) = (mean_attempts(20), mean_attempts(100));
    let no_restart_ratio = {
        let f = |n: usize| no_restart.report.class(&class_of(n)).and_then(|c| c.mean_iters).unwrap();
        f(100) / f(20)
    };
    suite.check(
        "7c",
        ratio <= ITER_GROWTH_BOUND,
        format!(
            "mean iterations {m20:.2} (n=20) vs {m100:.2} (n=100), ratio {ratio:.2} <= {ITER_GROWTH_BOUND}; \
             mean attempts {attempts20:.2} vs {attempts100:.2}; ratio without restarts {no_restart_ratio:.2}"
        ),
    );

    vec![
        (easy.clone(), first),
        (easy.clone(), second),
        (easy.clone(), sequential),
        (easy, no_restart),
        (trend, trend_run),
    ]
}

fn soundness(suite: &mut Suite, runs: &[(Vec<Instance>, BenchRun)]) {
    let (mut sat, mut bad) = (0, 0);
    for (instances, run) in runs {
        let by_name: BTreeMap<&str, &Instance> = instances.iter().map(|i| (i.name.as_str(), i)).collect();
        for d in run.details.iter().filter(|d| d.status == Status::Sat) {
            sat += 1;
            let ok = d
                .assignment()
                .and_then(|a| by_name[d.instance.as_str()].formula.verify(&a).ok())
                .is_some_and(|v| v.is_satisfied());
            bad += !ok as usize;
        }
    }
    suite.check(
        "4",
        sat > 0 && bad == 0,
        format!("{sat} Sat outcomes over {} runs, {bad} failed verification", runs.len()),
    );
}

fn ldpc_cross_check(suite: &mut Suite, rng: &mut ChaCha8Rng) {
    let h = ParityMatrix::from_dense(&[[1u8, 1, 1, 0], [1, 1, 0, 1], [0, 1, 1, 1]]).unwrap();
    let codewords: Vec<Vec<bool>> = (0u32..16)
        .map(|w| (0..4).map(|k| w >> k & 1 == 1).collect::<Vec<bool>>())
        .filter(|w| h.is_codeword(w))
        .collect();
    let config = EngineConfig::default();
    let (mut matched, mut valid) = (0, 0);
    for _ in 0..LDPC_TRIALS {
        let target = &codewords[rng.random_range(0..codewords.len())];
        let priors: Vec<f64> = target
            .iter()
            .map(|&b| {
                let toward = rng.random_range(LDPC_MIN_PRIOR..1.0);
                if b {
                    toward
                } else {
                    1.0 - toward
                }
            })
            .collect();
        let ml = brute_force_ml(&h, &priors).unwrap();
        let instance = ParityInstance::new(FactorGraph::from_parity_matrix(&h).unwrap(), priors).unwrap();
        if let DecodeOutcome::Codeword { bits, .. } = decode(&instance, &config).unwrap() {
            valid += h.syndrome(&bits).iter().all(|&s| !s) as usize;
            matched += (bits == ml) as usize;
        }
    }
    suite.check(
        "8",
        matched == LDPC_TRIALS && valid == LDPC_TRIALS,
        format!("{matched}/{LDPC_TRIALS} decodes equal the ML codeword, {valid}/{LDPC_TRIALS} satisfy every check ({} codewords)", codewords.len()),
    );
}

fn baseline_speedup_column(suite: &mut Suite) {
    let instances = bench::generate_instances(&[GenSpec { vars: 20, clauses: 40, count: 30, seed: 9 }]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let text: String = instances.iter().map(|i| format!("{}.cnf {}\n", i.name, rng.random_range(1e-4..10.0))).collect();
    let baseline = BaselineTimes::parse(&text).unwrap();
    let config = BenchConfig::default();
    let run = bench::run_bench(&instances, &config, Some(&baseline)).unwrap();

    // round trip through the CSV file to check what a user would read back
    let rows = bench::read_details_csv(details_bytes(&run.details).as_slice()).unwrap();
    let mut checked = 0;
    let mut mismatched = 0;
    for d in &rows {
        let expected = match (d.status, baseline.get(&d.instance)) {
            (Status::Sat, Some(t)) => Some(t / (d.total_iterations as f64 * config.spi.spi())),
            _ => None,
        };
        checked += expected.is_some() as usize;
        mismatched += (d.speedup != expected) as usize;
    }
    suite.check(
        "9",
        checked > 0 && mismatched == 0,
        format!("{checked} rows with a baseline time, {mismatched} differ from t / (iters * spi)"),
    );
}
