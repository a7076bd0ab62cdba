use rayon::prelude::*;

use super::{run_in, search_box, theorem_bound_for, thread_pool, Algorithm, SearchConfig, SearchResult};
use crate::contact::{Adjacency, Packing};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Best (contacts, indices) under one first index, and leaves visited.
type RootOutcome = (Option<(u64, Vec<usize>)>, u64);

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Dense adjacency rows as bitsets.
struct BitRows {
    words: usize,
    rows: Vec<u64>,
}

impl BitRows {
    fn from_adjacency(adj: &Adjacency) -> Self {
        let words = adj.len().div_ceil(64).max(1);
        let mut rows = vec![0u64; words * adj.len()];
        for i in 0..adj.len() {
            for &j in adj.neighbors(i) {
                rows[i * words + j as usize / 64] |= 1 << (j % 64);
            }
        }
        BitRows { words, rows }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }
}

struct Enumerator<'a> {
    rows: &'a BitRows,
    n: usize,
    len: usize,
    chosen: Vec<usize>,
    mask: Vec<u64>,
    best: Option<(u64, Vec<usize>)>,
    leaves: u64,
}

impl Enumerator<'_> {
    fn descend(&mut self, next: usize, edges: u64) {
        if self.chosen.len() == self.n {
            self.leaves += 1;
            if self.best.as_ref().is_none_or(|(b, _)| edges > *b) {
                self.best = Some((edges, self.chosen.clone()));
            }
            return;
        }
        let need = self.n - self.chosen.len();
        for v in next..=self.len - need {
            let gain: u32 = self.rows.row(v).iter().zip(&self.mask).map(|(r, m)| (r & m).count_ones()).sum();
            self.chosen.push(v);
            self.mask[v / 64] |= 1 << (v % 64);
            self.descend(v + 1, edges + gain as u64);
            self.mask[v / 64] &= !(1 << (v % 64));
            self.chosen.pop();
        }
    }
}

/// Enumerates every `n`-subset of the candidate box and keeps the
/// lexicographically first one with the most contacts.
///
/// Adjacency comes from the all-pairs Gram-form definition, independent of
/// the kissing-vector lookup the branch-and-bound solver uses.
pub fn solve_exhaustive(lattice: &Lattice, config: &SearchConfig) -> Result<SearchResult> {
    let points = search_box(lattice, config)?;
    let n = config.n;
    let subsets = binomial(points.len() as u64, n as u64);
    if subsets > config.exhaustive_limit {
        return Err(Error::InstanceTooLarge { subsets, limit: config.exhaustive_limit });
    }
    let rows = BitRows::from_adjacency(&Adjacency::all_pairs(&points, lattice)?);
    let len = points.len();

    let pool = thread_pool(config.thread_hint)?;
    let per_root: Vec<RootOutcome> = run_in(&pool, || {
        (0..=len - n)
            .into_par_iter()
            .map(|first| {
                let mut e = Enumerator {
                    rows: &rows,
                    n,
                    len,
                    chosen: vec![first],
                    mask: vec![0; rows.words],
                    best: None,
                    leaves: 0,
                };
                e.mask[first / 64] |= 1 << (first % 64);
                e.descend(first + 1, 0);
                (e.best, e.leaves)
            })
            .collect()
    });

    let leaves = per_root.iter().map(|(_, l)| l).sum();
    // Roots are in lexicographic order, so the first maximal root holds the
    // canonical witness.
    let (contacts, indices) = per_root
        .into_iter()
        .filter_map(|(b, _)| b)
        .reduce(|acc, b| if b.0 > acc.0 { b } else { acc })
        .expect("box holds at least n points");

    let witness = Packing::new(lattice.clone(), indices.iter().map(|&i| points[i].clone()).collect())?;
    Ok(SearchResult {
        contact_number: contacts,
        witness,
        optimal: true,
        nodes_explored: leaves,
        theorem_bound: theorem_bound_for(lattice, n),
        algorithm: Algorithm::Exhaustive,
    })
}
