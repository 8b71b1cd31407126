//! The recursive ball search on a small polytope, with its counters and the
//! a-priori work estimate.

use relaxfeas::dnc::{complexity_estimate, dnc, DnCOutcome, DnCParams};
use relaxfeas::model::LinearSystem;

fn main() {
    // a thin triangle away from the origin
    let sys = LinearSystem::inequalities(
        2,
        &[vec![-1.0, 0.0], vec![0.0, -1.0], vec![1.0, 1.0]],
        &[-1.0, -1.0, 2.05],
    )
    .expect("valid system");
    let eps = 1e-3;
    let (z, r) = ([0.0, 0.0], 4.0);
    let est = complexity_estimate(&sys, &z, r, eps);
    println!("K ≈ {:.3e}, predicted operations ≈ {:.3e}", est.k, est.predicted_ops);

    let run = dnc(&sys, &z, r, &DnCParams::new(eps)).expect("search runs");
    println!(
        "recursions {}, ep calls {}, max depth {}",
        run.counters.recursions, run.counters.ep_calls, run.counters.max_depth
    );
    match run.outcome {
        DnCOutcome::ApproxSolution(x) => println!("x = {x:?}"),
        DnCOutcome::Separator(h) => println!("no solution in the ball: {:?}·x ≤ {}", h.normal, h.offset),
        other => println!("{other:?}"),
    }

    // shrinking the triangle below ε makes the search report infeasibility
    let empty = LinearSystem::inequalities(
        2,
        &[vec![-1.0, 0.0], vec![0.0, -1.0], vec![1.0, 1.0]],
        &[-1.0, -1.0, 1.9],
    )
    .expect("valid system");
    let run = dnc(&empty, &z, r, &DnCParams::new(eps)).expect("search runs");
    let verdict = match run.outcome {
        DnCOutcome::ApproxSolution(_) => "approximate solution",
        DnCOutcome::Separator(_) => "separator",
        DnCOutcome::Failure { .. } => "opposite separators",
        _ => "out of budget",
    };
    println!("empty triangle: {verdict} after {} recursions", run.counters.recursions);
}
