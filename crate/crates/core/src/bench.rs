//! Algorithm dispatch for single instances and the benchmark protocol:
//! generated or file-based suites, per-dimension statistics, CSV and a
//! plain-text table.

use std::fmt;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use rayon::prelude::*;
use thiserror::Error;

use crate::classical::{mean_std, relax_random_stats, relax_solve, ClassicalError, RelaxConfig, Selection};
use crate::dnc::{dnc, DnCError, DnCOutcome, DnCParams};
use crate::ep::{base_radius, elementary_procedure, EpError, EpOutcome};
use crate::linalg::{norm, Matrix};
use crate::model::{gen_random01, gen_wedge, read_instance, tau_cert, Instance, LinearSystem, ModelError};
use crate::solvers::{
    chubanov_relaxation, lfg_with, lfs, lfs_bounded, lfs_tu, Decision, LfgOptions, LfsInput, SolveOptions, SolveReport,
    SolverError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algo {
    Ep,
    Dnc,
    Lfs,
    LfsTu,
    Lfg,
    Chubanov,
    Relax,
    RelaxRand,
}

impl Algo {
    pub const ALL: [Algo; 8] = [
        Algo::Ep,
        Algo::Dnc,
        Algo::Lfs,
        Algo::LfsTu,
        Algo::Lfg,
        Algo::Chubanov,
        Algo::Relax,
        Algo::RelaxRand,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Ep => "ep",
            Algo::Dnc => "dnc",
            Algo::Lfs => "lfs",
            Algo::LfsTu => "lfs-tu",
            Algo::Lfg => "lfg",
            Algo::Chubanov => "chubanov",
            Algo::Relax => "relax",
            Algo::RelaxRand => "relax-rand",
        }
    }

    /// What the work column counts for this algorithm.
    pub fn metric(self) -> &'static str {
        match self {
            Algo::Relax | Algo::RelaxRand => "iterations",
            _ => "recursions",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Dnc(#[from] DnCError),
    #[error(transparent)]
    Ep(#[from] EpError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("thread pool: {0}")]
    Threads(String),
}

/// Knobs shared by every algorithm; each one reads what it needs.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveSettings {
    /// Search radius (`ep`, `dnc`, `lfs`), solution-norm bound (`lfg`) or
    /// `r*` (`chubanov`).
    pub radius: Option<f64>,
    pub delta: Option<f64>,
    pub lambda: f64,
    /// Approximation parameter for `ep`, `dnc` and the classical method.
    pub eps: f64,
    pub theta: f64,
    pub seed: u64,
    /// Elementary-procedure calls per search, or classical iterations.
    pub budget: Option<u64>,
    pub timeout: Option<Duration>,
    pub nu: Option<f64>,
}

impl Default for SolveSettings {
    fn default() -> Self {
        SolveSettings {
            radius: None,
            delta: None,
            lambda: 1.9,
            eps: 1e-6,
            theta: crate::dnc::THETA_DEFAULT,
            seed: 0,
            budget: None,
            timeout: Some(Duration::from_secs(600)),
            nu: None,
        }
    }
}

impl SolveSettings {
    fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            theta: self.theta,
            node_budget: self.budget,
            timeout: self.timeout,
        }
    }

    fn relax_config(&self, selection: Selection) -> RelaxConfig {
        let mut cfg = RelaxConfig {
            lambda: self.lambda,
            eps: self.eps,
            selection,
            time_limit: self.timeout,
            ..RelaxConfig::default()
        };
        if let Some(b) = self.budget {
            cfg.max_iters = b;
        }
        cfg
    }
}

/// How the inequality block of a standard-form instance looks.
enum StandardShape {
    /// `−x ≤ 0`
    NonNegative,
    /// `x ≤ λ1, −x ≤ 0`
    Box(f64),
}

fn standard_shape(sys: &LinearSystem) -> Option<StandardShape> {
    let n = sys.n();
    let c = sys.c();
    let d = sys.d();
    let is_unit =
        |row: &[f64], j: usize, v: f64| row.iter().enumerate().all(|(i, &x)| x == if i == j { v } else { 0.0 });
    if sys.l() == n && (0..n).all(|j| is_unit(c.row(j), j, -1.0) && d[j] == 0.0) {
        return Some(StandardShape::NonNegative);
    }
    if sys.l() == 2 * n && n > 0 {
        let lambda = d[0];
        let upper = (0..n).all(|j| is_unit(c.row(j), j, 1.0) && d[j] == lambda);
        let lower = (0..n).all(|j| is_unit(c.row(n + j), j, -1.0) && d[n + j] == 0.0);
        if upper && lower && lambda > 0.0 {
            return Some(StandardShape::Box(lambda));
        }
    }
    None
}

fn finish_search(sys: &LinearSystem, outcome: DnCOutcome, report: &mut SolveReport, r: f64) -> Result<(), BenchError> {
    report.decision = match outcome {
        DnCOutcome::ApproxSolution(x) => {
            let violation = sys.ineq_violation_max(&x).max(sys.eq_residual_inf(&x) - sys.tau_lin());
            if violation > tau_cert(norm(&x)) {
                return Err(SolverError::Unverified { violation }.into());
            }
            Decision::Feasible(x)
        }
        DnCOutcome::Separator(_) => {
            report.notes.push(format!("no solution with margin ε inside B(0, {r})"));
            Decision::Infeasible
        }
        DnCOutcome::Failure { .. } => {
            report
                .notes
                .push("opposite separators: the strengthened system is infeasible".into());
            Decision::Infeasible
        }
        DnCOutcome::BudgetExceeded(_) => Decision::BudgetExceeded,
        DnCOutcome::TimedOut(_) => Decision::TimedOut,
    };
    Ok(())
}

/// Runs one algorithm on one system.
///
/// `ep` and `dnc` search `Ax = b, Cx ≤ d − ε` from the origin, so an
/// approximate solution there is an exact one here; a separator only rules
/// out the searched ball. `lfs` and `lfs-tu` need the inequality block to be
/// `x ≥ 0` or `0 ≤ x ≤ λ`.
pub fn solve_instance(algo: Algo, sys: &LinearSystem, s: &SolveSettings) -> Result<SolveReport, BenchError> {
    let n = sys.n();
    let start = std::time::Instant::now();
    let report = match algo {
        Algo::Ep => {
            let st = sys.with_shifted_rhs(-s.eps);
            let limit = base_radius(&st, s.eps);
            let r = s.radius.unwrap_or(limit.min(((n + 1) as f64).sqrt()));
            let mut report = SolveReport::new("ep");
            report.ep_calls = 1;
            report.iterations = 1;
            let outcome = match elementary_procedure(&st, &vec![0.0; n], r, s.eps)? {
                EpOutcome::ApproxSolution(x) => DnCOutcome::ApproxSolution(x),
                EpOutcome::Separator(h) => DnCOutcome::Separator(h),
            };
            finish_search(sys, outcome, &mut report, r)?;
            report
        }
        Algo::Dnc => {
            let st = sys.with_shifted_rhs(-s.eps);
            let r = s.radius.unwrap_or(((n + 1) as f64).sqrt());
            let params = DnCParams {
                theta: s.theta,
                eps: s.eps,
                node_budget: s.budget,
                deadline: s.timeout.map(|t| start + t),
            };
            let run = dnc(&st, &vec![0.0; n], r, &params)?;
            let mut report = SolveReport::new("dnc");
            report.absorb(&run.counters);
            finish_search(sys, run.outcome, &mut report, r)?;
            report
        }
        Algo::Lfs | Algo::LfsTu => {
            let delta = match (algo, s.delta) {
                (Algo::LfsTu, _) => 1.0,
                (_, Some(d)) => d,
                (_, None) => return Err(BenchError::Usage("--algo lfs requires --delta".into())),
            };
            let opts = s.solve_options();
            match standard_shape(sys) {
                Some(StandardShape::Box(lambda)) if algo == Algo::LfsTu => lfs_tu(sys.a(), sys.b(), lambda, &opts)?,
                Some(StandardShape::Box(lambda)) => lfs_bounded(sys.a(), sys.b(), lambda, delta, &opts)?,
                Some(StandardShape::NonNegative) => {
                    let r = s.radius.ok_or_else(|| {
                        BenchError::Usage(format!("--algo {algo} on x ≥ 0 instances requires --radius"))
                    })?;
                    let mut rep = lfs(
                        &LfsInput {
                            a: sys.a().clone(),
                            b: sys.b().to_vec(),
                            r,
                            delta,
                        },
                        &opts,
                    )?;
                    rep.algorithm = algo.name().into();
                    rep
                }
                None => {
                    return Err(BenchError::Usage(format!(
                        "--algo {algo} needs inequalities of the form x ≥ 0 or 0 ≤ x ≤ λ"
                    )))
                }
            }
        }
        Algo::Lfg => lfg_with(
            sys,
            &LfgOptions {
                radius_override: s.radius,
                nu_override: s.nu,
                solve: s.solve_options(),
            },
        )?,
        Algo::Chubanov => {
            let r_star = s.radius.unwrap_or(((n + 1) as f64).sqrt());
            chubanov_relaxation(sys, r_star, &s.solve_options())?
        }
        Algo::Relax => relax_solve(sys, &vec![0.0; n], &s.relax_config(Selection::MaxViolation))?,
        Algo::RelaxRand => relax_solve(
            sys,
            &vec![0.0; n],
            &s.relax_config(Selection::RandomViolation { seed: s.seed }),
        )?,
    };
    let mut report = report;
    report.elapsed = start.elapsed();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Suite {
    Random01,
    Wedge,
    Files(PathBuf),
}

impl Suite {
    pub fn default_algos(&self) -> Vec<Algo> {
        match self {
            Suite::Random01 => vec![Algo::Chubanov, Algo::Dnc, Algo::Relax, Algo::RelaxRand],
            Suite::Wedge | Suite::Files(_) => vec![Algo::Relax, Algo::RelaxRand],
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub suite: Suite,
    /// `n` for the random suite, `α` for the wedge suite.
    pub dims: RangeInclusive<usize>,
    pub per_dim: usize,
    /// Repetitions of the random-selection classical method per instance.
    pub runs: usize,
    pub algos: Vec<Algo>,
    pub settings: SolveSettings,
    /// Worker threads; `None` reads `RELAXFEAS_THREADS`, else rayon's default.
    pub threads: Option<usize>,
}

impl BenchConfig {
    pub fn new(suite: Suite) -> Self {
        BenchConfig {
            algos: suite.default_algos(),
            suite,
            dims: 2..=10,
            per_dim: 10,
            runs: 100,
            settings: SolveSettings::default(),
            threads: None,
        }
    }
}

/// The instances of each experiment, in output order.
pub fn suite_instances(cfg: &BenchConfig) -> Result<Vec<(String, Vec<Instance>)>, BenchError> {
    match &cfg.suite {
        Suite::Random01 => {
            if *cfg.dims.start() < 2 {
                return Err(BenchError::Usage("random 0-1 instances need n ≥ 2".into()));
            }
            Ok(cfg
                .dims
                .clone()
                .map(|n| {
                    let insts = (0..cfg.per_dim as u64)
                        .map(|k| gen_random01(n, cfg.settings.seed + k))
                        .collect();
                    (format!("random01-n{n}"), insts)
                })
                .collect())
        }
        Suite::Wedge => {
            if *cfg.dims.start() < 1 {
                return Err(BenchError::Usage("wedge instances need α ≥ 1".into()));
            }
            Ok(cfg
                .dims
                .clone()
                .map(|a| (format!("wedge-a{a}"), vec![gen_wedge(a as u32)]))
                .collect())
        }
        Suite::Files(dir) => {
            let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
                .map_err(|source| BenchError::Io {
                    path: dir.clone(),
                    source,
                })?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            paths.sort();
            paths
                .into_iter()
                .map(|p| {
                    let inst = read_instance(&p)?;
                    Ok((inst.name.clone(), vec![inst]))
                })
                .collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stat {
    pub avg: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Stat {
    pub fn of(xs: &[f64]) -> Option<Stat> {
        if xs.is_empty() {
            return None;
        }
        let (avg, std) = mean_std(xs);
        Some(Stat {
            avg,
            std,
            min: xs.iter().copied().fold(f64::INFINITY, f64::min),
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

/// One line of the results table. Statistics cover the instances that
/// finished; a row where none finished is marked `timed_out` and carries no
/// numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub experiment: String,
    pub algorithm: String,
    pub metric: String,
    pub work: Option<Stat>,
    pub time_avg: Option<f64>,
    pub time_std: Option<f64>,
    pub timed_out: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchOutcome {
    pub rows: Vec<BenchRow>,
    /// Instances that did not finish, as `experiment/algo/instance: reason`.
    pub unfinished: Vec<String>,
}

struct Measurement {
    work: f64,
    secs: f64,
    finished: Result<(), String>,
}

fn measure(algo: Algo, inst: &Instance, cfg: &BenchConfig) -> Measurement {
    let s = &cfg.settings;
    if algo == Algo::RelaxRand {
        let rc = s.relax_config(Selection::RandomViolation { seed: s.seed });
        return match relax_random_stats(&inst.system, &vec![0.0; inst.system.n()], &rc, cfg.runs.max(1)) {
            Ok(st) => Measurement {
                work: st.avg_iters,
                secs: st.avg_time,
                finished: if st.unfinished == 0 {
                    Ok(())
                } else {
                    Err(format!("{} of {} runs hit the limit", st.unfinished, st.runs))
                },
            },
            Err(e) => Measurement {
                work: 0.0,
                secs: 0.0,
                finished: Err(e.to_string()),
            },
        };
    }
    match solve_instance(algo, &inst.system, s) {
        Ok(rep) => Measurement {
            work: match algo.metric() {
                "iterations" => rep.iterations as f64,
                _ => rep.recursions as f64,
            },
            secs: rep.elapsed.as_secs_f64(),
            finished: if rep.decision.exit_code() == 2 {
                Err(rep.decision.label().to_string())
            } else {
                Ok(())
            },
        },
        Err(e) => Measurement {
            work: 0.0,
            secs: 0.0,
            finished: Err(e.to_string()),
        },
    }
}

fn thread_count(cfg: &BenchConfig) -> Option<usize> {
    cfg.threads.or_else(|| {
        std::env::var("RELAXFEAS_THREADS")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&t: &usize| t > 0)
    })
}

/// Runs every algorithm on every instance of the suite. Output order is
/// fixed by the suite and the algorithm list, independent of scheduling.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchOutcome, BenchError> {
    let experiments = suite_instances(cfg)?;
    let mut tasks = Vec::new();
    for (e, (_, insts)) in experiments.iter().enumerate() {
        for a in 0..cfg.algos.len() {
            for i in 0..insts.len() {
                tasks.push((e, a, i));
            }
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_count(cfg) {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| BenchError::Threads(e.to_string()))?;
    let results: Vec<Measurement> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(e, a, i)| measure(cfg.algos[a], &experiments[e].1[i], cfg))
            .collect()
    });

    let mut rows = Vec::new();
    let mut unfinished = Vec::new();
    let mut k = 0;
    for (name, insts) in &experiments {
        for &algo in &cfg.algos {
            let mut work = Vec::new();
            let mut secs = Vec::new();
            for inst in insts {
                let m = &results[k];
                k += 1;
                match &m.finished {
                    Ok(()) => {
                        work.push(m.work);
                        secs.push(m.secs);
                    }
                    Err(why) => unfinished.push(format!("{name}/{algo}/{}: {why}", inst.name)),
                }
            }
            let (t_avg, t_std) = mean_std(&secs);
            let done = !work.is_empty();
            rows.push(BenchRow {
                experiment: name.clone(),
                algorithm: algo.name().into(),
                metric: algo.metric().into(),
                work: Stat::of(&work),
                time_avg: done.then_some(t_avg),
                time_std: done.then_some(t_std),
                timed_out: !done,
            });
        }
    }
    Ok(BenchOutcome { rows, unfinished })
}

pub const CSV_HEADER: &str = "experiment,algo,metric,avg,std,min,max,time_avg,time_std,timed_out";

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "--".to_string(), |x| format!("{x}"))
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(',')).expect("in-memory write");
    for r in rows {
        let s = r.work;
        w.write_record([
            r.experiment.clone(),
            r.algorithm.clone(),
            r.metric.clone(),
            cell(s.map(|s| s.avg)),
            cell(s.map(|s| s.std)),
            cell(s.map(|s| s.min)),
            cell(s.map(|s| s.max)),
            cell(r.time_avg),
            cell(r.time_std),
            r.timed_out.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
}

pub fn parse_csv(text: &str) -> Result<Vec<BenchRow>, BenchError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header_ok = reader
        .headers()
        .map(|h| h.iter().eq(CSV_HEADER.split(',')))
        .unwrap_or(false);
    if !header_ok {
        return Err(BenchError::Csv {
            line: 1,
            message: format!("expected header `{CSV_HEADER}`"),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let f = record.map_err(|e| BenchError::Csv {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = f.position().map_or(0, |p| p.line() as usize);
        let err = |message: String| BenchError::Csv { line, message };
        let num = |s: &str| -> Result<Option<f64>, BenchError> {
            if s == "--" {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| err(format!("not a number: `{s}`")))
            }
        };
        let (avg, std, min, max) = (num(&f[3])?, num(&f[4])?, num(&f[5])?, num(&f[6])?);
        let work = match (avg, std, min, max) {
            (Some(avg), Some(std), Some(min), Some(max)) => Some(Stat { avg, std, min, max }),
            (None, None, None, None) => None,
            _ => return Err(err("statistics must be all numbers or all `--`".into())),
        };
        rows.push(BenchRow {
            experiment: f[0].into(),
            algorithm: f[1].into(),
            metric: f[2].into(),
            work,
            time_avg: num(&f[7])?,
            time_std: num(&f[8])?,
            timed_out: f[9].parse().map_err(|_| err(format!("not a boolean: `{}`", &f[9])))?,
        });
    }
    Ok(rows)
}

fn short(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e6 || v.abs() < 1e-3) {
        format!("{v:.4e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Plain-text table: one line per row, `avg/std` and `min/max` pairs as in
/// the usual iteration tables, `--` for rows that never finished.
pub fn render_table(rows: &[BenchRow]) -> String {
    let header = ["experiment", "algo", "metric", "avg/std", "min/max", "time avg/std (s)"];
    let body: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            let pair = |a: Option<f64>, b: Option<f64>| match (a, b) {
                (Some(a), Some(b)) if !r.timed_out => format!("{}/{}", short(a), short(b)),
                _ => "--".into(),
            };
            [
                r.experiment.clone(),
                r.algorithm.clone(),
                r.metric.clone(),
                pair(r.work.map(|s| s.avg), r.work.map(|s| s.std)),
                pair(r.work.map(|s| s.min), r.work.map(|s| s.max)),
                pair(r.time_avg, r.time_std),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &body {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = line(&header.map(String::from));
    out.push('\n');
    for row in &body {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}

/// Writes `rows` as CSV to `path`.
pub fn write_csv(rows: &[BenchRow], path: &Path) -> Result<(), BenchError> {
    std::fs::write(path, to_csv(rows)).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Matrix helper for callers assembling standard-form inputs by hand.
pub fn nonnegative_rows(n: usize) -> (Matrix, Vec<f64>) {
    let mut c = Matrix::zeros(n, n);
    for j in 0..n {
        c[(j, j)] = -1.0;
    }
    (c, vec![0.0; n])
}
