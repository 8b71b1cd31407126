//! The classical relaxation method on wedges of growing sharpness: the
//! iteration count climbs with the exponent.

use relaxfeas::classical::{relax_random_stats, relax_solve, RelaxConfig, Selection};
use relaxfeas::model::gen_wedge;

fn main() {
    let cfg = RelaxConfig::default();
    for alpha in 1..=8 {
        let inst = gen_wedge(alpha);
        let z0 = vec![0.0; 2];
        let det = relax_solve(&inst.system, &z0, &cfg).expect("valid config");
        let rand_cfg = RelaxConfig {
            selection: Selection::RandomViolation { seed: 7 },
            ..cfg.clone()
        };
        let stats = relax_random_stats(&inst.system, &z0, &rand_cfg, 20).expect("valid config");
        println!(
            "α = {alpha}: max-violation {} iterations, random {:.1} ± {:.1}",
            det.iterations, stats.avg_iters, stats.std_iters
        );
    }
}
