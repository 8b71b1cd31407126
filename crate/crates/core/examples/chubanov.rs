//! Integer-aware relaxation: inequalities that must be tight at every
//! integer point are turned into equalities one at a time.

use relaxfeas::linalg::Matrix;
use relaxfeas::model::{box_rows, gen_random01, LinearSystem};
use relaxfeas::oracle::oracle_integer01;
use relaxfeas::solvers::{chubanov_relaxation, SolveOptions};

fn main() {
    // 2x + 2y = 1 has fractional solutions in the unit box but no 0-1 one
    let (c, d) = box_rows(2, 1.0);
    let parity = LinearSystem::new(Matrix::from_rows(2, &[vec![2.0, 2.0]]).unwrap(), vec![1.0], c, d).unwrap();
    let rep = chubanov_relaxation(&parity, 3f64.sqrt(), &SolveOptions::default()).expect("solver runs");
    // a fractional point may be returned: only integer solutions are preserved
    println!("parity: {} in {} searches", rep.decision.label(), rep.iterations);
    for t in &rep.trace {
        println!("  [{}] {} {:?} {}", t.iteration, t.outcome, t.row, t.detail);
    }

    for seed in 0..5 {
        let inst = gen_random01(5, seed);
        let rep = chubanov_relaxation(&inst.system, 6f64.sqrt(), &SolveOptions::default()).expect("solver runs");
        let oracle = oracle_integer01(&inst.system).expect("small instance");
        println!(
            "{}: {} ({} recursions), 0-1 point exists: {oracle}",
            inst.name,
            rep.decision.label(),
            rep.recursions
        );
    }
}
