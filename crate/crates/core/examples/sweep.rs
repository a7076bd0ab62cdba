use std::time::Instant;

use latpack::{solve, Algorithm, Lattice, Preset, SearchConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let preset: Preset = args.next().unwrap_or_else(|| "fcc".into()).parse().unwrap();
    let max_n: usize = args.next().map(|s| s.parse().unwrap()).unwrap_or(9);
    let lattice = Lattice::preset(preset, 1.0).unwrap();
    for n in 1..=max_n {
        let t = Instant::now();
        let r = solve(&lattice, &SearchConfig::new(n).algorithm(Algorithm::BranchAndBound)).unwrap();
        println!(
            "{preset} n={n:>2} C={:>3} optimal={} nodes={:>12} {:?}",
            r.contact_number,
            r.optimal,
            r.nodes_explored,
            t.elapsed()
        );
    }
}
