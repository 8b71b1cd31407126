//! The exact reference oracle: feasibility, vertices, strict and 0-1
//! feasibility for small systems.

use relaxfeas::model::gen_random01;
use relaxfeas::oracle::{oracle_analyze, oracle_integer01};

fn main() {
    for seed in 0..4 {
        let inst = gen_random01(3, seed);
        let v = oracle_analyze(&inst.system).expect("small instance");
        println!(
            "{}: feasible {}, {} vertices, strictly feasible {:?}, 0-1 point {}",
            inst.name,
            v.feasible,
            v.vertices.as_ref().map_or(0, Vec::len),
            v.strictly_feasible,
            oracle_integer01(&inst.system).expect("small instance")
        );
        if let Some(w) = v.witness {
            println!("  witness {w:?}");
        }
    }
}
