//! General systems: perturb, search, then round the strict solution back
//! onto a face of the original polyhedron.

use relaxfeas::model::LinearSystem;
use relaxfeas::solvers::{lfg, round_strict_solution};

fn main() {
    // the single point (1, 1): x ≤ 1, y ≤ 1, x + y ≥ 2
    let sys = LinearSystem::inequalities(
        2,
        &[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]],
        &[1.0, 1.0, -2.0],
    )
    .expect("valid system");
    let rep = lfg(&sys, Some(2.0), Some(0.5)).expect("integral data");
    println!("{}: {:?}", rep.decision.label(), rep.decision.point());
    for t in &rep.trace {
        println!("  {} {}", t.outcome, t.detail);
    }

    // rounding on its own
    let r = round_strict_solution(&sys, &[1.1, 0.95], 0.25).expect("within the perturbation");
    println!("rounded {:?} using tight rows {:?}", r.x, r.tight);
}
