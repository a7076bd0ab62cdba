//! Fixtures shared by the solver benchmarks.

use latpack::{candidate_box, Lattice, LatticePoint, Preset};

pub fn preset(p: Preset) -> Lattice {
    Lattice::preset(p, 1.0).expect("presets are valid")
}

/// Candidate box for `n` spheres on a preset, as the solvers build it.
pub fn box_for(p: Preset, n: usize) -> (Lattice, Vec<LatticePoint>) {
    let lattice = preset(p);
    let points = candidate_box(&lattice, n).expect("small boxes fit the cap");
    (lattice, points)
}
