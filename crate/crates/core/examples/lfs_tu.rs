//! Exact feasibility for bounded systems with a totally unimodular matrix.

use relaxfeas::linalg::Matrix;
use relaxfeas::solvers::{lfs_tu, SolveOptions};

fn main() {
    // interval matrix: consecutive ones in every row
    let a = Matrix::from_rows(
        4,
        &[
            vec![1.0, 1.0, 0.0, 0.0],
            vec![0.0, 1.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0, 1.0],
        ],
    )
    .expect("rectangular rows");
    for b in [[1.0, 1.0, 1.0], [1.0, 3.0, 1.0]] {
        let rep = lfs_tu(&a, &b, 1.0, &SolveOptions::default()).expect("integral data");
        println!(
            "b = {b:?}: {} after {} recursions {:?}",
            rep.decision.label(),
            rep.recursions,
            rep.decision.point()
        );
    }
}
