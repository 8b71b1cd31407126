//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one `PASS`/`FAIL` line, followed by its measurements.
//!
//! Criterion 9 compares the classical method against the relaxation driver
//! on random 0-1 instances. Its outcome is reported but only fails the run
//! when `RELAXFEAS_STRICT=1` is set.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relaxfeas::bench::{run_bench, to_csv, Algo, BenchConfig, Suite};
use relaxfeas::classical::{relax_observed, relax_solve, RelaxConfig, Selection};
use relaxfeas::dnc::{dnc, DnCOutcome, DnCParams};
use relaxfeas::ep::{base_radius, elementary_procedure, EpOutcome};
use relaxfeas::inference::strip_radius;
use relaxfeas::linalg::{distance, dot, norm, norm_inf, Matrix};
use relaxfeas::model::{
    box_rows, gen_random01, gen_wedge, homogenize, standardize_bounded, strengthen, tau_cert, validate_certificate,
    EqualityReduction, Hyperplane, LinearSystem,
};
use relaxfeas::oracle::{oracle_feasible, oracle_integer01, oracle_strict};
use relaxfeas::solvers::{chubanov_relaxation, lfg, lfs_tu, Decision, SolveOptions};

struct Verdict {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Verdict {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Verdict {
            pass,
            summary: summary.into(),
            details: Vec::new(),
        }
    }
}

fn int_in(rng: &mut ChaCha8Rng, lo: i32, hi: i32) -> f64 {
    rng.gen_range(lo..=hi) as f64
}

fn nonzero_row(rng: &mut ChaCha8Rng, n: usize, bound: i32) -> Vec<f64> {
    loop {
        let r: Vec<f64> = (0..n).map(|_| int_in(rng, -bound, bound)).collect();
        if r.iter().any(|&v| v != 0.0) {
            return r;
        }
    }
}

/// Integer system with `m < n` independent equalities through an integer
/// point `x0`, and inequalities whose slack at `x0` is drawn from
/// `[-1, 3]` (so some systems are infeasible).
fn random_system(rng: &mut ChaCha8Rng, max_n: usize, bound: i32) -> (LinearSystem, Vec<f64>) {
    loop {
        let n = rng.gen_range(1..=max_n);
        let m = rng.gen_range(0..n);
        let l = rng.gen_range(1..=2 * n);
        let x0: Vec<f64> = (0..n).map(|_| int_in(rng, -2, 2)).collect();
        let a: Vec<Vec<f64>> = (0..m).map(|_| nonzero_row(rng, n, bound)).collect();
        let b: Vec<f64> = a.iter().map(|r| dot(r, &x0)).collect();
        let c: Vec<Vec<f64>> = (0..l).map(|_| nonzero_row(rng, n, bound)).collect();
        let d: Vec<f64> = c.iter().map(|r| dot(r, &x0) + int_in(rng, -1, 3)).collect();
        let sys = LinearSystem::new(
            Matrix::from_rows(n, &a).unwrap(),
            b,
            Matrix::from_rows(n, &c).unwrap(),
            d,
        )
        .unwrap();
        if let EqualityReduction::Reduced(s) = sys.reduce_equalities() {
            if s.m() == m {
                return (s, x0);
            }
        }
    }
}

fn eq_ok(sys: &LinearSystem, x: &[f64]) -> bool {
    sys.eq_residual_inf(x) <= 1e-8 * (1.0 + norm_inf(sys.b()))
}

fn separator_ok(sys: &LinearSystem, h: &Hyperplane, z: &[f64], r: f64, tol: f64) -> bool {
    validate_certificate(sys, h).is_valid() && h.signed_distance(z) >= r - tol
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut approx, mut seps, mut bad) = (0, 0, Vec::new());
    for trial in 0..1000 {
        let (sys, x0) = random_system(&mut rng, 8, 3);
        let n = sys.n();
        let eps = rng.gen_range(0.05..2.0);
        let r = base_radius(&sys, eps) * rng.gen_range(0.2..=1.0);
        let spread = if rng.gen_bool(0.5) { r } else { 3.0 };
        let z: Vec<f64> = x0
            .iter()
            .map(|v| v + rng.gen_range(-spread..=spread) / (n as f64).sqrt())
            .collect();
        match elementary_procedure(&sys, &z, r, eps) {
            Ok(EpOutcome::ApproxSolution(x)) => {
                approx += 1;
                let ineq = (0..sys.l()).all(|k| dot(sys.c().row(k), &x) <= sys.d()[k] + eps + 1e-8);
                if !(eq_ok(&sys, &x) && ineq) {
                    bad.push(format!("trial {trial}: approximate solution violates the system"));
                }
            }
            Ok(EpOutcome::Separator(h)) => {
                seps += 1;
                if !separator_ok(&sys, &h, &z, r, 1e-8) {
                    bad.push(format!("trial {trial}: separator fails its contract"));
                }
            }
            Err(e) => bad.push(format!("trial {trial}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    let pass = bad.is_empty() && elapsed < Duration::from_secs(30);
    let mut v = Verdict::new(
        pass,
        format!(
            "elementary procedure contract: 1000 triples, {approx} approximate solutions, {seps} separators, {} violations, {:.2}s",
            bad.len(),
            elapsed.as_secs_f64()
        ),
    );
    v.details = bad;
    v
}

struct DncCase {
    sys: LinearSystem,
    z: Vec<f64>,
    r: f64,
    eps: f64,
}

fn dnc_suite() -> Vec<DncCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    (0..500)
        .map(|_| {
            let (sys, x0) = random_system(&mut rng, 6, 3);
            let z = x0.iter().map(|v| v + rng.gen_range(-2.0..=2.0)).collect();
            DncCase {
                sys,
                z,
                r: rng.gen_range(0.5..=4.0),
                eps: 0.1,
            }
        })
        .collect()
}

fn criteria_2_and_3() -> (Verdict, Verdict) {
    let start = Instant::now();
    let (mut sol, mut sep, mut fail, mut budget) = (0, 0, 0, 0);
    let mut bad2 = Vec::new();
    let mut bad3 = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    for (i, case) in dnc_suite().iter().enumerate() {
        let run = match dnc(&case.sys, &case.z, case.r, &DnCParams::new(case.eps)) {
            Ok(run) => run,
            Err(e) => {
                bad2.push(format!("system {i}: {e}"));
                continue;
            }
        };
        match &run.outcome {
            DnCOutcome::ApproxSolution(x) => {
                sol += 1;
                let tol = tau_cert(norm(x));
                if !(eq_ok(&case.sys, x) && case.sys.ineq_violation_max(x) <= case.eps + tol) {
                    bad2.push(format!("system {i}: approximate solution violates the system"));
                }
            }
            DnCOutcome::Separator(h) => {
                sep += 1;
                if !separator_ok(&case.sys, h, &case.z, case.r, tau_cert(norm(&h.normal))) {
                    bad2.push(format!("system {i}: separator fails its contract"));
                }
            }
            DnCOutcome::Failure { h1, h2, gamma } => {
                fail += 1;
                let u1 = h1.unit_normal();
                let u2 = h2.unit_normal();
                let opposite = norm(&u1.iter().zip(&u2).map(|(a, b)| a + b).collect::<Vec<_>>()) <= 1e-9;
                let gamma_ok = (gamma - norm(&h1.normal) / norm(&h2.normal)).abs() <= 1e-9 * gamma.max(1.0);
                let infeasible = !oracle_feasible(&case.sys).expect("small system").feasible;
                if !(opposite && gamma_ok && infeasible) {
                    bad2.push(format!(
                        "system {i}: failure outcome (opposite {opposite}, γ {gamma_ok}, oracle infeasible {infeasible})"
                    ));
                }
            }
            DnCOutcome::BudgetExceeded(_) | DnCOutcome::TimedOut(_) => {
                budget += 1;
                bad2.push(format!("system {i}: out of budget"));
            }
        }
        let c_max = case.sys.c_max();
        let depth = ((2.0 * case.r * c_max / case.eps).ln() / 1.4f64.ln()).ceil().max(0.0);
        let bound = 2f64.powf(depth + 1.0);
        let leaves = run.counters.ep_calls as f64;
        worst_ratio = worst_ratio.max(leaves / bound);
        if leaves > bound {
            bad3.push(format!("system {i}: {leaves} leaves exceed 2^{}", depth + 1.0));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let mut v2 = Verdict::new(
        bad2.is_empty(),
        format!(
            "divide-and-conquer soundness: 500 systems, {sol} solutions, {sep} separators, {fail} failures (all oracle-infeasible), {budget} out of budget, {} violations, {secs:.2}s",
            bad2.len()
        ),
    );
    v2.details = bad2;
    let mut v3 = Verdict::new(
        bad3.is_empty(),
        format!(
            "leaf-count bound: {} violations over 500 searches, largest leaves/2^(D+1) = {worst_ratio:.3e}",
            bad3.len()
        ),
    );
    v3.details = bad3;
    (v2, v3)
}

/// Integer system inside a box `0 ≤ x ≤ u` with extra rows tight at an
/// integer point, so that implied equalities are common.
fn boxed_system(rng: &mut ChaCha8Rng) -> LinearSystem {
    loop {
        let n = rng.gen_range(1..=4);
        let u = rng.gen_range(1..=2) as f64;
        let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=u as i32) as f64).collect();
        let (bc, bd) = box_rows(n, u);
        let mut c = bc.to_rows();
        let mut d = bd;
        for _ in 0..rng.gen_range(1..=3) {
            let row = nonzero_row(rng, n, 3);
            d.push(dot(&row, &x0) + int_in(rng, -1, 1).max(0.0) * int_in(rng, 0, 1));
            c.push(row);
        }
        let m = rng.gen_range(0..n);
        let a: Vec<Vec<f64>> = (0..m).map(|_| nonzero_row(rng, n, 2)).collect();
        let b: Vec<f64> = a
            .iter()
            .map(|r| dot(r, &x0) + int_in(rng, -1, 1) * int_in(rng, 0, 1))
            .collect();
        let sys = LinearSystem::new(
            Matrix::from_rows(n, &a).unwrap(),
            b,
            Matrix::from_rows(n, &c).unwrap(),
            d,
        )
        .unwrap();
        if let EqualityReduction::Reduced(s) = sys.reduce_equalities() {
            return s;
        }
    }
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut forced, mut separated, mut bad) = (0, 0, Vec::new());
    for i in 0..200 {
        let sys = if i % 2 == 0 {
            boxed_system(&mut rng)
        } else {
            match gen_random01(rng.gen_range(2..=5), i).system.reduce_equalities() {
                EqualityReduction::Reduced(s) => s,
                EqualityReduction::Inconsistent { .. } => boxed_system(&mut rng),
            }
        };
        let verdict = oracle_feasible(&sys).expect("small system");
        let vertices = verdict.vertices.clone().unwrap_or_default();
        let slack = |v: &[f64], k: usize| sys.d()[k] - dot(sys.c().row(k), v);
        let tight_everywhere = |width: f64| (0..sys.l()).any(|k| vertices.iter().all(|v| slack(v, k) <= width));

        let lifted = strengthen(&homogenize(&sys), 1.0).unwrap();
        if !oracle_feasible(&lifted).expect("small system").feasible {
            forced += 1;
            if !tight_everywhere(1e-8) {
                bad.push(format!(
                    "system {i}: strengthened system infeasible but no row is tight on P"
                ));
            }
        }

        let r_star = vertices.iter().map(|v| norm(v)).fold(1.0, f64::max);
        let radius = strip_radius(sys.l(), r_star);
        let run = dnc(&lifted, &vec![0.0; sys.n() + 1], radius, &DnCParams::new(1.0)).expect("search runs");
        if let DnCOutcome::Separator(_) = run.outcome {
            separated += 1;
            if !tight_everywhere(0.5 + 1e-8) {
                bad.push(format!("system {i}: separator but no row within 1/2 of tight on P"));
            }
        }
    }
    let mut v = Verdict::new(
        bad.is_empty(),
        format!(
            "implied equalities and thin strips: 200 systems, {forced} with infeasible strengthening, {separated} separated searches, {} disagreements",
            bad.len()
        ),
    );
    v.details = bad;
    v
}

fn criterion_5() -> Verdict {
    let start = Instant::now();
    let opts = SolveOptions {
        node_budget: Some(5_000_000),
        timeout: Some(Duration::from_secs(60)),
        ..SolveOptions::default()
    };
    let (mut feasible, mut empty, mut capped, mut bad) = (0, 0, 0, Vec::new());
    for n in 2..=6 {
        for seed in 0..100 {
            let inst = gen_random01(n, seed);
            let rep = match chubanov_relaxation(&inst.system, ((n + 1) as f64).sqrt(), &opts) {
                Ok(rep) => rep,
                Err(e) => {
                    bad.push(format!("{}: {e}", inst.name));
                    continue;
                }
            };
            match &rep.decision {
                Decision::Feasible(x) => {
                    feasible += 1;
                    if !inst.system.is_satisfied_by(x, tau_cert(norm(x))) {
                        bad.push(format!("{}: returned point does not verify", inst.name));
                    }
                }
                Decision::NoIntegerSolutions | Decision::Infeasible => {
                    empty += 1;
                    if oracle_integer01(&inst.system).expect("n ≤ 12") {
                        bad.push(format!("{}: claimed empty but a 0-1 point exists", inst.name));
                    }
                }
                _ => capped += 1,
            }
        }
    }
    let elapsed = start.elapsed();
    let mut v = Verdict::new(
        bad.is_empty() && elapsed < Duration::from_secs(600),
        format!(
            "relaxation driver semantics: 500 instances, {feasible} feasible, {empty} without 0-1 points, {capped} capped, {} unsound or failed, {:.2}s",
            bad.len(),
            elapsed.as_secs_f64()
        ),
    );
    v.details = bad;
    v
}

/// Interval (consecutive ones) or bipartite incidence matrix.
fn tu_matrix(rng: &mut ChaCha8Rng) -> Matrix {
    if rng.gen_bool(0.5) {
        let n = rng.gen_range(3..=7);
        let m = rng.gen_range(1..n);
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|_| {
                let s = rng.gen_range(0..n - 1);
                let e = rng.gen_range(s + 1..n);
                (0..n).map(|j| if (s..=e).contains(&j) { 1.0 } else { 0.0 }).collect()
            })
            .collect();
        Matrix::from_rows(n, &rows).unwrap()
    } else {
        let (p, q) = (rng.gen_range(1..=3), rng.gen_range(2..=3));
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for i in 0..p {
            for j in 0..q {
                if rng.gen_bool(0.7) && edges.len() < 7 {
                    edges.push((i, j));
                }
            }
        }
        if edges.len() < 2 {
            edges = vec![(0, 0), (0, 1)];
        }
        let n = edges.len();
        let rows: Vec<Vec<f64>> = (0..p + q)
            .map(|v| {
                edges
                    .iter()
                    .map(|&(i, j)| if v == i || v == p + j { 1.0 } else { 0.0 })
                    .collect()
            })
            .filter(|r: &Vec<f64>| r.iter().any(|&x| x != 0.0))
            .collect();
        Matrix::from_rows(n, &rows).unwrap()
    }
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut accepted, mut tried, mut feasible, mut bad) = (0, 0, 0, Vec::new());
    while accepted < 50 {
        tried += 1;
        let a = tu_matrix(&mut rng);
        let n = a.ncols();
        let b: Vec<f64> = a
            .iter_rows()
            .map(|r| rng.gen_range(0..=r.iter().sum::<f64>() as i32) as f64)
            .collect();
        let standard = standardize_bounded(&a, &b, 1.0).unwrap();
        let (bc, bd) = box_rows(n, 1.0);
        let original = LinearSystem::new(a.clone(), b.clone(), bc, bd).unwrap();
        let truth = oracle_feasible(&original).expect("small system").feasible;
        let strict = oracle_strict(&standard).expect("small system").is_some();
        if truth && !strict {
            continue;
        }
        accepted += 1;
        let rep = match lfs_tu(&a, &b, 1.0, &SolveOptions::default()) {
            Ok(rep) => rep,
            Err(e) => {
                bad.push(format!("instance {accepted}: {e}"));
                continue;
            }
        };
        match &rep.decision {
            Decision::Feasible(x) => {
                feasible += 1;
                if !truth {
                    bad.push(format!("instance {accepted}: feasible on an infeasible system"));
                } else if !(eq_ok(&original, x) && original.ineq_violation_max(x) <= 1e-8) {
                    bad.push(format!("instance {accepted}: point does not verify"));
                }
            }
            Decision::Infeasible if truth => bad.push(format!("instance {accepted}: missed a strict solution")),
            Decision::Infeasible => {}
            other => bad.push(format!("instance {accepted}: {}", other.label())),
        }
    }
    let mut v = Verdict::new(
        bad.is_empty(),
        format!(
            "totally unimodular solver: 50 promise-respecting instances ({tried} drawn), {feasible} feasible, {} disagreements",
            bad.len()
        ),
    );
    v.details = bad;
    v
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut feasible, mut bad) = (0, Vec::new());
    for i in 0..50 {
        let n = rng.gen_range(1..=4);
        let l = rng.gen_range(1..=n + 2);
        let m = rng.gen_range(0..n);
        let a: Vec<Vec<f64>> = (0..m).map(|_| nonzero_row(&mut rng, n, 3)).collect();
        let b: Vec<f64> = (0..m).map(|_| int_in(&mut rng, -3, 3)).collect();
        let c: Vec<Vec<f64>> = (0..l).map(|_| nonzero_row(&mut rng, n, 3)).collect();
        let d: Vec<f64> = (0..l).map(|_| int_in(&mut rng, -3, 3)).collect();
        let sys = LinearSystem::new(
            Matrix::from_rows(n, &a).unwrap(),
            b,
            Matrix::from_rows(n, &c).unwrap(),
            d,
        )
        .unwrap();
        let verdict = oracle_feasible(&sys).expect("small system");
        let radius = verdict
            .vertices
            .as_deref()
            .unwrap_or_default()
            .iter()
            .map(|v| norm(v))
            .fold(1.0, f64::max);
        match lfg(&sys, Some(radius), Some(0.5)) {
            Ok(rep) => match (&rep.decision, verdict.feasible) {
                (Decision::Feasible(x), true) => {
                    feasible += 1;
                    if !(eq_ok(&sys, x) && sys.ineq_violation_max(x) <= 1e-8) {
                        bad.push(format!("system {i}: rounded point violates the system"));
                    }
                }
                (Decision::Infeasible, false) => {}
                (dec, truth) => bad.push(format!(
                    "system {i}: {} but oracle says feasible = {truth}",
                    dec.label()
                )),
            },
            Err(e) => bad.push(format!("system {i}: {e}")),
        }
    }
    let mut v = Verdict::new(
        bad.is_empty(),
        format!(
            "general solver: 50 systems, {feasible} feasible, {} disagreements",
            bad.len()
        ),
    );
    v.details = bad;
    v
}

fn criterion_8() -> Verdict {
    let base = RelaxConfig {
        lambda: 1.9,
        eps: 1e-6,
        ..RelaxConfig::default()
    };
    let mut iters = Vec::new();
    let mut bad = Vec::new();
    let mut steps_checked = 0u64;
    for alpha in 1..=5 {
        let inst = gen_wedge(alpha);
        let anchors = [vec![1.0, 0.0], vec![3.0, 0.0], vec![5.0, 2f64.powi(-(alpha as i32))]];
        for (label, selection) in [
            ("max", Selection::MaxViolation),
            ("random", Selection::RandomViolation { seed: 3 }),
        ] {
            let cfg = RelaxConfig {
                selection,
                ..base.clone()
            };
            let mut prev: Option<Vec<f64>> = None;
            let mut worst: f64 = 0.0;
            let rep = relax_observed(&inst.system, &[0.0, 0.0], &cfg, 0, |z| {
                if let Some(p) = &prev {
                    for y in &anchors {
                        let before = distance(p, y);
                        let after = distance(z, y);
                        worst = worst.max((after - before) / before.max(1e-300));
                    }
                    steps_checked += 1;
                }
                prev = Some(z.to_vec());
            })
            .expect("valid config");
            if rep.decision.point().is_none() {
                bad.push(format!("α = {alpha} ({label}): {}", rep.decision.label()));
            }
            if worst > 1e-10 {
                bad.push(format!(
                    "α = {alpha} ({label}): distance grew by a factor 1 + {worst:.2e}"
                ));
            }
            if label == "max" {
                iters.push(rep.iterations);
            }
        }
    }
    let monotone = iters.windows(2).all(|w| w[0] <= w[1]);
    if !monotone {
        bad.push(format!("iterations not monotone: {iters:?}"));
    }
    let mut v = Verdict::new(
        bad.is_empty(),
        format!("classical method on wedges: iterations {iters:?}, {steps_checked} Fejér steps checked"),
    );
    v.details = bad;
    v
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}

fn criterion_9() -> Verdict {
    const CAP: u64 = 100_000;
    let cfg = RelaxConfig {
        max_iters: CAP,
        ..RelaxConfig::default()
    };
    let opts = SolveOptions {
        node_budget: Some(5_000_000),
        ..SolveOptions::default()
    };
    let mut wins = 0;
    let mut details = Vec::new();
    for n in 2..=6 {
        let (mut classical, mut driver) = (Vec::new(), Vec::new());
        let mut unfinished = 0;
        for seed in 0..10 {
            let inst = gen_random01(n, seed);
            let rep = relax_solve(&inst.system, &vec![0.0; n], &cfg).expect("valid config");
            if rep.decision.point().is_none() {
                unfinished += 1;
            }
            classical.push(rep.iterations as f64);
            let rep = chubanov_relaxation(&inst.system, ((n + 1) as f64).sqrt(), &opts).expect("solver runs");
            driver.push(rep.recursions as f64);
        }
        let (mc, md) = (median(&mut classical), median(&mut driver));
        if mc < md {
            wins += 1;
        }
        details.push(format!(
            "n = {n}: classical median {mc} iterations ({unfinished}/10 hit the {CAP} cap), driver median {md} recursions"
        ));
    }
    let mut v = Verdict::new(
        wins >= 4,
        format!(
            "classical vs relaxation driver on random 0-1 instances: classical cheaper in {wins}/5 dimensions (need 4)"
        ),
    );
    v.details = details;
    v
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_relaxfeas"))
        .args(args)
        .env("RELAXFEAS_THREADS", "2")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn without_elapsed(json: &[u8]) -> String {
    let mut v: serde_json::Value = serde_json::from_slice(json).expect("JSON report");
    v.as_object_mut().expect("object").remove("elapsed");
    v.to_string()
}

fn csv_without_timing(csv: &str) -> String {
    csv.lines()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            [&f[..7], &f[9..]].concat().join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn criterion_10() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut bad = Vec::new();
    let mut checked = 0;

    let gen_twice: Vec<Vec<u8>> = ["a", "b"]
        .iter()
        .map(|sub| {
            let out = d.join(sub);
            std::fs::create_dir(&out).unwrap();
            run_cli(&[
                "gen",
                "--family",
                "random01",
                "--n",
                "6",
                "--seed",
                "11",
                "--out",
                out.to_str().unwrap(),
            ]);
            std::fs::read(out.join("random01-n6-s11.txt")).unwrap_or_default()
        })
        .collect();
    checked += 1;
    if gen_twice[0].is_empty() || gen_twice[0] != gen_twice[1] {
        bad.push("gen output differs".to_string());
    }

    let inst = d.join("a/random01-n6-s11.txt");
    let inst = inst.to_str().unwrap();
    for extra in [
        vec!["--algo", "chubanov"],
        vec!["--algo", "dnc"],
        vec!["--algo", "lfs-tu"],
        vec!["--algo", "relax", "--budget", "20000"],
        vec!["--algo", "relax-rand", "--seed", "5", "--budget", "20000"],
    ] {
        let mut args = vec!["solve", "--instance", inst, "--json"];
        args.extend(&extra);
        let (c1, o1) = run_cli(&args);
        let (c2, o2) = run_cli(&args);
        checked += 1;
        if c1 != c2 || without_elapsed(&o1) != without_elapsed(&o2) {
            bad.push(format!("solve {} differs", extra.join(" ")));
        }
    }

    let csvs: Vec<String> = ["x.csv", "y.csv"]
        .iter()
        .map(|name| {
            let p = d.join(name);
            run_cli(&[
                "bench",
                "--suite",
                "random01",
                "--dims",
                "2..4",
                "--per-dim",
                "4",
                "--runs",
                "5",
                "--budget",
                "20000",
                "--seed",
                "3",
                "--out",
                p.to_str().unwrap(),
            ]);
            std::fs::read_to_string(p).unwrap_or_default()
        })
        .collect();
    checked += 1;
    if csvs[0].is_empty() || csv_without_timing(&csvs[0]) != csv_without_timing(&csvs[1]) {
        bad.push("bench CSV differs".to_string());
    }

    let lib_runs: Vec<String> = [1, 3]
        .iter()
        .map(|&threads| {
            let mut cfg = BenchConfig::new(Suite::Wedge);
            cfg.dims = 1..=4;
            cfg.runs = 10;
            cfg.algos = vec![Algo::Relax, Algo::RelaxRand];
            cfg.threads = Some(threads);
            csv_without_timing(&to_csv(&run_bench(&cfg).expect("wedge suite").rows))
        })
        .collect();
    checked += 1;
    if lib_runs[0] != lib_runs[1] {
        bad.push("bench rows depend on the thread count".to_string());
    }

    let mut v = Verdict::new(
        bad.is_empty(),
        format!(
            "determinism: {checked} seeded commands repeated, {} differences",
            bad.len()
        ),
    );
    v.details = bad;
    v
}

fn main() {
    // `cargo test -- --list` and filters are accepted but ignored
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let strict = std::env::var("RELAXFEAS_STRICT").is_ok_and(|v| v == "1");
    assert!(Path::new(env!("CARGO_BIN_EXE_relaxfeas")).exists());

    let (c2, c3) = criteria_2_and_3();
    let results = [
        (1, criterion_1()),
        (2, c2),
        (3, c3),
        (4, criterion_4()),
        (5, criterion_5()),
        (6, criterion_6()),
        (7, criterion_7()),
        (8, criterion_8()),
        (9, criterion_9()),
        (10, criterion_10()),
    ];
    let mut blocking = 0;
    for (k, v) in &results {
        let status = if v.pass { "PASS" } else { "FAIL" };
        let allowed = *k == 9 && !strict;
        let note = if !v.pass && allowed {
            " (reported, not enforced)"
        } else {
            ""
        };
        println!("criterion {k:>2}: {status}{note}  {}", v.summary);
        for d in v.details.iter().take(12) {
            println!("    {d}");
        }
        if !v.pass && !allowed {
            blocking += 1;
        }
    }
    let passed = results.iter().filter(|(_, v)| v.pass).count();
    println!("acceptance: {passed}/10 criteria passed");
    if blocking > 0 {
        std::process::exit(1);
    }
}
