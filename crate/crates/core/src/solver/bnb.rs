//! Branch-and-bound over `n`-subsets of the candidate box.
//!
//! Nodes are partial selections `S` whose indices increase; children
//! append a larger index, so leaves are visited in lexicographic order and
//! the first strict improvement found for a value is the canonical witness.
//!
//! With `r = n - |S|` picks left from the candidates `j > max(S)`, the
//! node bound is `E(S) + min(A, B)` where, writing `g(c)` for the number of
//! neighbours of `c` already in `S` and `h(c)` for its neighbours among
//! the candidates,
//!
//! * `A = ⌊top_r(2g(c) + min(r-1, h(c), K-g(c))) / 2⌋` bounds each new
//!   vertex by its edges into `S` plus half its internal degree, and
//! * `B = top_r(g(c)) + U(r)` where `U(r)` is the maximum contact count of
//!   `r` points anywhere in the same box.
//!
//! `U` is filled bottom-up by solving `r = 1, 2, ..., n-1` on the same box
//! first. Every maximizer can be translated towards the origin without
//! leaving the box, and translation makes its sorted point list smaller,
//! so the canonical witness always starts at a point with `λ_1 = 0`; only
//! those points are used as roots.
//!
//! Roots are searched independently, each starting from the same greedy
//! lower bound, so node counts and witnesses do not depend on the number of
//! worker threads.

use std::cmp::Reverse;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use super::{run_in, search_box, theorem_bound_for, thread_pool, Algorithm, SearchConfig, SearchResult};
use crate::bounds::strict_floor;
use crate::contact::{Adjacency, Packing};
use crate::error::Result;
use crate::lattice::{Lattice, LatticePoint};

const FLUSH_EVERY: u64 = 1 << 12;

type Selection = (u64, Vec<u32>);

struct Budget {
    limit: Option<u64>,
    used: AtomicU64,
    stop: AtomicBool,
}

impl Budget {
    fn new(limit: Option<u64>) -> Self {
        Budget { limit, used: AtomicU64::new(0), stop: AtomicBool::new(false) }
    }

    fn charge(&self, nodes: u64) {
        let total = self.used.fetch_add(nodes, Ordering::Relaxed) + nodes;
        if self.limit.is_some_and(|l| total > l) {
            self.stop.store(true, Ordering::Relaxed);
        }
    }

    fn exhausted(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }
}

/// Read-only data shared by the workers of one size.
struct Instance<'a> {
    adj: &'a Adjacency,
    /// Most contacts among `r` points of this box, for `r < n`.
    table: &'a [u64],
    n: usize,
    kiss: u32,
    /// Upper bound on the answer that holds regardless of the search.
    cap: u64,
}

struct Dfs<'a> {
    inst: &'a Instance<'a>,
    budget: &'a Budget,
    chosen: Vec<u32>,
    gain: Vec<u32>,
    incumbent: i64,
    best: Option<Selection>,
    nodes: u64,
    pending: u64,
    hist_a: Vec<u32>,
    hist_b: Vec<u32>,
}

impl<'a> Dfs<'a> {
    fn new(inst: &'a Instance<'a>, budget: &'a Budget, floor: i64) -> Self {
        let k = inst.kiss as usize;
        Dfs {
            inst,
            budget,
            chosen: Vec::with_capacity(inst.n),
            gain: vec![0; inst.adj.len()],
            incumbent: floor,
            best: None,
            nodes: 0,
            pending: 0,
            hist_a: vec![0; 2 * k + 1],
            hist_b: vec![0; k + 1],
        }
    }

    fn push(&mut self, v: usize) -> u64 {
        self.chosen.push(v as u32);
        for &u in self.inst.adj.neighbors(v) {
            self.gain[u as usize] += 1;
        }
        self.gain[v] as u64
    }

    fn pop(&mut self) {
        let v = self.chosen.pop().expect("non-empty selection") as usize;
        for &u in self.inst.adj.neighbors(v) {
            self.gain[u as usize] -= 1;
        }
    }

    /// Counts a node; true when the shared budget is spent.
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.pending += 1;
        if self.pending >= FLUSH_EVERY {
            self.budget.charge(self.pending);
            self.pending = 0;
        }
        self.budget.exhausted()
    }

    fn record(&mut self, value: u64, last: Option<u32>) {
        self.incumbent = value as i64;
        let mut set = self.chosen.clone();
        set.extend(last);
        self.best = Some((value, set));
    }

    fn bound(&mut self, edges: u64, last: usize, r: usize) -> u64 {
        let k = self.inst.kiss;
        self.hist_a.fill(0);
        self.hist_b.fill(0);
        for c in last + 1..self.inst.adj.len() {
            let g = self.gain[c];
            let nb = self.inst.adj.neighbors(c);
            let h = (nb.len() - nb.partition_point(|&j| j as usize <= last)) as u32;
            let internal = h.min(r as u32 - 1).min(k - g);
            self.hist_a[(2 * g + internal) as usize] += 1;
            self.hist_b[g as usize] += 1;
        }
        let a = top_sum(&self.hist_a, r) / 2;
        let b = top_sum(&self.hist_b, r) + self.inst.table[r];
        (edges + a.min(b)).min(self.inst.cap)
    }

    fn descend(&mut self, last: usize, edges: u64) {
        if self.tick() {
            return;
        }
        let len = self.inst.adj.len();
        let r = self.inst.n - self.chosen.len();
        match r {
            0 => {
                if edges as i64 > self.incumbent {
                    self.record(edges, None);
                }
            }
            1 => {
                // The first candidate of maximal gain closes the selection.
                let Some(pick) = (last + 1..len).max_by_key(|&c| (self.gain[c], Reverse(c))) else {
                    return;
                };
                let value = edges + self.gain[pick] as u64;
                if value as i64 > self.incumbent {
                    self.record(value, Some(pick as u32));
                }
            }
            _ => {
                if len - (last + 1) < r || self.bound(edges, last, r) as i64 <= self.incumbent {
                    return;
                }
                for v in last + 1..=len - r {
                    let g = self.push(v);
                    self.descend(v, edges + g);
                    self.pop();
                    if self.budget.exhausted() {
                        return;
                    }
                }
            }
        }
    }

    fn run(mut self, root: usize) -> (Option<Selection>, u64) {
        self.push(root);
        self.descend(root, 0);
        self.budget.charge(self.pending);
        (self.best, self.nodes)
    }
}

/// Sum of the `r` largest entries of a histogram indexed by value.
fn top_sum(hist: &[u32], mut r: usize) -> u64 {
    let mut acc = 0u64;
    for (value, &count) in hist.iter().enumerate().rev() {
        if r == 0 {
            break;
        }
        let take = (count as usize).min(r);
        acc += (value * take) as u64;
        r -= take;
    }
    acc
}

/// Best greedy completion over all roots: repeatedly add the point with
/// the most neighbours in the selection.
fn greedy(adj: &Adjacency, roots: &[usize], n: usize) -> Selection {
    let mut best: Option<Selection> = None;
    let mut gain = vec![0u32; adj.len()];
    let mut taken = vec![false; adj.len()];
    for &root in roots {
        gain.fill(0);
        taken.fill(false);
        let mut set = Vec::with_capacity(n);
        let mut edges = 0u64;
        let mut v = root;
        for step in 0..n {
            if step > 0 {
                v = (0..adj.len())
                    .filter(|&c| !taken[c])
                    .max_by_key(|&c| (gain[c], Reverse(c)))
                    .expect("box holds n points");
            }
            taken[v] = true;
            set.push(v as u32);
            edges += gain[v] as u64;
            for &u in adj.neighbors(v) {
                gain[u as usize] += 1;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| edges > *b) {
            set.sort_unstable();
            best = Some((edges, set));
        }
    }
    best.expect("at least one root")
}

/// Cap on contacts among `r` points: pair count, degree sum and the strict
/// lattice bound where it applies.
fn trivial_cap(r: usize, kiss: u64, theorem: Option<f64>) -> u64 {
    let r64 = r as u64;
    let mut cap = (r64 * r64.saturating_sub(1) / 2).min(r64 * kiss / 2);
    if let Some(t) = theorem {
        cap = cap.min(strict_floor(t).max(0) as u64);
    }
    cap
}

struct SizeOutcome {
    best: Option<Selection>,
    greedy: Selection,
    nodes: u64,
}

fn solve_size(inst: &Instance<'_>, roots: &[usize], budget: &Budget) -> SizeOutcome {
    let greedy = greedy(inst.adj, roots, inst.n);
    // One below the greedy value, so a canonical maximizer that merely ties
    // it is still recorded.
    let floor = greedy.0 as i64 - 1;
    let per_root: Vec<(Option<Selection>, u64)> =
        roots.par_iter().map(|&root| Dfs::new(inst, budget, floor).run(root)).collect();
    let nodes = per_root.iter().map(|(_, n)| n).sum();
    // Roots are in lexicographic order: keep the first root reaching the max.
    let best = per_root
        .into_iter()
        .filter_map(|(b, _)| b)
        .reduce(|acc, b| if b.0 > acc.0 { b } else { acc });
    SizeOutcome { best, greedy, nodes }
}

/// Branch-and-bound search for `C_d(Λ, n)` over the candidate box.
///
/// Returns the same value and canonical witness as
/// [`solve_exhaustive`](super::solve_exhaustive). When the node limit is
/// hit, the best selection found so far comes back with `optimal = false`.
pub fn solve_bnb(lattice: &Lattice, config: &SearchConfig) -> Result<SearchResult> {
    let points = search_box(lattice, config)?;
    let n = config.n;
    let adj = Adjacency::build(&points, lattice)?;
    let roots: Vec<usize> = (0..points.len()).filter(|&i| points[i].coeffs()[0] == 0).collect();
    let kiss = adj.max_degree() as u32;
    let budget = Budget::new(config.node_limit);
    let pool = thread_pool(config.thread_hint)?;

    let (outcome, nodes) = run_in(&pool, || {
        let mut table = vec![0u64; n + 1];
        let mut nodes = 0;
        for r in 1..=n {
            let inst = Instance {
                adj: &adj,
                table: &table,
                n: r,
                kiss,
                cap: trivial_cap(r, kiss as u64, theorem_bound_for(lattice, r)),
            };
            if r < n && r <= 1 {
                continue;
            }
            let outcome = solve_size(&inst, &roots, &budget);
            nodes += outcome.nodes;
            if r == n {
                return (outcome, nodes);
            }
            let value = match (&outcome.best, budget.exhausted()) {
                (Some((v, _)), false) => *v,
                _ => inst.cap,
            };
            table[r] = value;
        }
        unreachable!("returns at r = n")
    });

    let optimal = !budget.exhausted();
    let (contacts, indices) = outcome.best.unwrap_or(outcome.greedy);
    let witness: Vec<LatticePoint> = indices.iter().map(|&i| points[i as usize].clone()).collect();
    Ok(SearchResult {
        contact_number: contacts,
        witness: Packing::new(lattice.clone(), witness)?,
        optimal,
        nodes_explored: nodes,
        theorem_bound: theorem_bound_for(lattice, n),
        algorithm: Algorithm::BranchAndBound,
    })
}
