//! Exact maximal contact numbers `C_d(Λ, n)`: the largest number of
//! touching pairs among `n` spheres centred on lattice points.
//!
//! Both solvers search the coefficient box `{0, ..., ⌈n/d⌉}^d`. The
//! exhaustive solver enumerates every `n`-subset of it and serves as the
//! reference; the branch-and-bound solver returns the same value and the
//! same witness while visiting far fewer nodes.
//!
//! Witnesses are canonical: among all maximizers, the one whose sorted
//! point list is lexicographically smallest. The incumbent starts at 0
//! (not at `n`), since `n` spheres may have fewer than `n` contacts.

mod bnb;
mod exhaustive;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bounds::{octahedral_lower_bound, upper_bound_lattice};
use crate::contact::Packing;
use crate::error::{Error, Result};
use crate::lattice::{box_side, candidate_box_with, Lattice, LatticePoint, Preset, DEFAULT_BOX_CAP};

pub use bnb::solve_bnb;
pub use exhaustive::{binomial, solve_exhaustive};

/// `auto` picks exhaustive search when the subset count is at most this.
pub const AUTO_EXHAUSTIVE_THRESHOLD: u128 = 10_000_000;

/// Default cap on subsets enumerated by the exhaustive solver.
pub const DEFAULT_EXHAUSTIVE_LIMIT: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    #[default]
    Auto,
    Exhaustive,
    BranchAndBound,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Algorithm::Auto),
            "exhaustive" => Ok(Algorithm::Exhaustive),
            "bnb" | "branch_and_bound" => Ok(Algorithm::BranchAndBound),
            other => Err(Error::Domain(format!("unknown algorithm `{other}`"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Auto => "auto",
            Algorithm::Exhaustive => "exhaustive",
            Algorithm::BranchAndBound => "branch_and_bound",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub n: usize,
    pub algorithm: Algorithm,
    /// Cap on search nodes; hitting it yields a non-optimal result.
    pub node_limit: Option<u64>,
    /// Worker count. Results do not depend on it.
    pub thread_hint: Option<usize>,
    /// Overrides the box side `⌈n/d⌉`.
    pub box_k: Option<usize>,
    pub box_cap: usize,
    pub exhaustive_limit: u128,
}

impl SearchConfig {
    pub fn new(n: usize) -> Self {
        SearchConfig {
            n,
            algorithm: Algorithm::Auto,
            node_limit: None,
            thread_hint: None,
            box_k: None,
            box_cap: DEFAULT_BOX_CAP,
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
        }
    }

    pub fn algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.thread_hint = Some(threads);
        self
    }

    pub fn node_limit(mut self, limit: u64) -> Self {
        self.node_limit = Some(limit);
        self
    }

    pub fn box_k(mut self, k: usize) -> Self {
        self.box_k = Some(k);
        self
    }

    pub fn exhaustive_limit(mut self, limit: u128) -> Self {
        self.exhaustive_limit = limit;
        self
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub contact_number: u64,
    pub witness: Packing,
    /// False only when the node limit stopped the search.
    pub optimal: bool,
    pub nodes_explored: u64,
    /// Strict lattice upper bound, for `n > 2` in three dimensions.
    pub theorem_bound: Option<f64>,
    pub algorithm: Algorithm,
}

impl SearchResult {
    pub fn n(&self) -> usize {
        self.witness.len()
    }
}

/// Box, validated against `n`, shared by both solvers.
pub(crate) fn search_box(lattice: &Lattice, config: &SearchConfig) -> Result<Vec<LatticePoint>> {
    if config.n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let k = config.box_k.unwrap_or_else(|| box_side(config.n, lattice.dim()));
    let points = candidate_box_with(lattice.dim(), k, config.box_cap)?;
    if points.len() < config.n {
        return Err(Error::BoxTooSmall { points: points.len(), n: config.n });
    }
    Ok(points)
}

pub(crate) fn theorem_bound_for(lattice: &Lattice, n: usize) -> Option<f64> {
    (lattice.dim() == 3 && n > 2).then(|| upper_bound_lattice(n as u64).expect("n > 2"))
}

pub(crate) fn thread_pool(hint: Option<usize>) -> Result<Option<rayon::ThreadPool>> {
    match hint {
        None => Ok(None),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map(Some)
            .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}"))),
    }
}

pub(crate) fn run_in<T: Send>(pool: &Option<rayon::ThreadPool>, f: impl FnOnce() -> T + Send) -> T {
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

/// Runs the configured algorithm; `auto` uses exhaustive search when the
/// subset count is at most [`AUTO_EXHAUSTIVE_THRESHOLD`]. Optimal results
/// for `n > 2` in three dimensions are checked against the strict lattice
/// bound and reported as [`Error::BoundViolation`] if they break it.
pub fn solve(lattice: &Lattice, config: &SearchConfig) -> Result<SearchResult> {
    let result = match config.algorithm {
        Algorithm::Exhaustive => solve_exhaustive(lattice, config)?,
        Algorithm::BranchAndBound => solve_bnb(lattice, config)?,
        Algorithm::Auto => {
            let box_len = search_box(lattice, config)?.len();
            if binomial(box_len as u64, config.n as u64) <= AUTO_EXHAUSTIVE_THRESHOLD {
                solve_exhaustive(lattice, config)?
            } else {
                solve_bnb(lattice, config)?
            }
        }
    };
    if let (true, Some(bound)) = (result.optimal, result.theorem_bound) {
        if result.contact_number as f64 >= bound {
            return Err(Error::BoundViolation { n: config.n, contacts: result.contact_number, bound });
        }
    }
    Ok(result)
}

/// `C_d(Λ, n)` with default settings.
pub fn maximal_contact_number(lattice: &Lattice, n: usize) -> Result<SearchResult> {
    solve(lattice, &SearchConfig::new(n))
}

/// Checks an optimal result against the strict lattice upper bound and,
/// on FCC, against the octahedral lower bound.
pub fn verify_against_bounds(result: &SearchResult) -> Result<bool> {
    let n = result.n();
    if n <= 2 {
        return Err(Error::NotApplicable(format!("bounds need n > 2, got n = {n}")));
    }
    if !result.optimal {
        return Err(Error::NotApplicable("result is not optimal".into()));
    }
    let lattice = result.witness.lattice();
    if lattice.dim() != 3 {
        return Err(Error::NotApplicable("bounds are stated for three dimensions".into()));
    }
    let c = result.contact_number;
    let below_upper = (c as f64) < upper_bound_lattice(n as u64)?;
    let above_lower = match lattice.preset_kind() {
        Some(Preset::FaceCentered) => c >= octahedral_lower_bound(n as u64)?,
        _ => true,
    };
    Ok(below_upper && above_lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::octahedral_construction;
    use crate::contact::contact_count;

    fn fcc() -> Lattice {
        Lattice::preset(Preset::FaceCentered, 1.0).unwrap()
    }

    #[test]
    fn dispatch_examples() {
        assert_eq!(maximal_contact_number(&fcc(), 2).unwrap().contact_number, 1);
        // FCC has no trigonal bipyramid: each triangle borders one
        // tetrahedron and one octahedron, so five spheres make at most 8.
        assert_eq!(maximal_contact_number(&fcc(), 5).unwrap().contact_number, 8);
        let sc = Lattice::preset(Preset::SimpleCubic, 1.0).unwrap();
        let r = maximal_contact_number(&sc, 8).unwrap();
        assert_eq!(r.contact_number, 12);
        assert_eq!(contact_count(&r.witness).unwrap(), 12);
    }

    #[test]
    fn zero_spheres_rejected() {
        assert!(matches!(maximal_contact_number(&fcc(), 0), Err(Error::Domain(_))));
    }

    #[test]
    fn box_override() {
        let cfg = SearchConfig::new(6).box_k(1);
        let r = solve(&fcc(), &cfg).unwrap();
        assert!(r.witness.points().iter().all(|p| p.coeffs().iter().all(|&c| c <= 1)));
        let too_small = SearchConfig::new(9).box_k(1);
        assert!(matches!(solve(&fcc(), &too_small), Err(Error::BoxTooSmall { .. })));
    }

    #[test]
    fn verify_examples() {
        let r6 = maximal_contact_number(&fcc(), 6).unwrap();
        assert_eq!(r6.contact_number, 12);
        assert!(verify_against_bounds(&r6).unwrap());
        let r4 = maximal_contact_number(&fcc(), 4).unwrap();
        assert!(verify_against_bounds(&r4).unwrap());

        let mut fake = r6.clone();
        fake.contact_number = 36;
        assert!(!verify_against_bounds(&fake).unwrap());

        let r2 = maximal_contact_number(&fcc(), 2).unwrap();
        assert!(matches!(verify_against_bounds(&r2), Err(Error::NotApplicable(_))));
        let mut partial = r6;
        partial.optimal = false;
        assert!(matches!(verify_against_bounds(&partial), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn fcc_six_matches_octahedron() {
        let r = solve(&fcc(), &SearchConfig::new(6).algorithm(Algorithm::BranchAndBound)).unwrap();
        let octa = octahedral_construction(2, 1.0).unwrap();
        assert_eq!(r.contact_number, contact_count(&octa).unwrap());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in [Algorithm::Auto, Algorithm::Exhaustive, Algorithm::BranchAndBound] {
            assert_eq!(a.to_string().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!("bnb".parse::<Algorithm>().unwrap(), Algorithm::BranchAndBound);
    }
}
