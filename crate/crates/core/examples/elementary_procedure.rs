//! One elementary step: a point that nearly satisfies the system, or a
//! hyperplane separating the feasible set from a small ball.

use relaxfeas::ep::{base_radius, elementary_procedure, EpOutcome};
use relaxfeas::model::LinearSystem;

fn main() {
    // x + y ≤ 1, −x ≤ 0, −y ≤ 0
    let sys = LinearSystem::inequalities(2, &[vec![1.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]], &[1.0, 0.0, 0.0])
        .expect("valid system");
    let eps = 0.1;
    let r = base_radius(&sys, eps);
    println!("base radius for ε = {eps}: {r:.4}");

    for z in [[0.2, 0.2], [2.0, 2.0]] {
        match elementary_procedure(&sys, &z, r, eps).expect("radius within the limit") {
            EpOutcome::ApproxSolution(x) => println!("z = {z:?}: approximate solution {x:?}"),
            EpOutcome::Separator(h) => println!(
                "z = {z:?}: separator {:?}·x ≤ {:.3}, distance {:.3}",
                h.normal,
                h.offset,
                h.signed_distance(&z)
            ),
        }
    }
}
