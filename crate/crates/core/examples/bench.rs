//! A small benchmark run, printed as a table and as CSV.

use relaxfeas::bench::{render_table, run_bench, to_csv, Algo, BenchConfig, Suite};

fn main() {
    let mut cfg = BenchConfig::new(Suite::Random01);
    cfg.dims = 2..=4;
    cfg.per_dim = 4;
    cfg.runs = 5;
    cfg.algos = vec![Algo::Chubanov, Algo::Dnc, Algo::Relax];
    cfg.settings.budget = Some(50_000);
    let out = run_bench(&cfg).expect("generated suite");
    print!("{}", render_table(&out.rows));
    println!();
    print!("{}", to_csv(&out.rows));
    for u in &out.unfinished {
        println!("unfinished: {u}");
    }
}
