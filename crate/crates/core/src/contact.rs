//! Packings on a lattice and their contact graphs.
//!
//! Two spheres touch when the squared distance between their centres lies
//! in the relative band `(2r)^2 (1 ± ε)`. Anything closer is an overlap,
//! which is reported as an error rather than counted.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::{coefficient_cube, Lattice, LatticePoint, CONTACT_EPS, VALIDITY_COEFF_BOUND};

/// A lattice together with a finite set of distinct sphere centres, kept
/// in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct Packing {
    lattice: Lattice,
    points: Vec<LatticePoint>,
}

impl Packing {
    pub fn new(lattice: Lattice, mut points: Vec<LatticePoint>) -> Result<Self> {
        let d = lattice.dim();
        if let Some(p) = points.iter().find(|p| p.dim() != d) {
            return Err(Error::DimensionMismatch { dim: d, found: p.dim() });
        }
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0].to_string()));
        }
        Ok(Packing { lattice, points })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Cartesian sphere centres in point order.
    pub fn positions(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| self.lattice.embed(p)).collect()
    }

    /// Translates every point by a common coefficient vector.
    pub fn translated(&self, by: &[i64]) -> Result<Self> {
        Packing::new(self.lattice.clone(), self.points.iter().map(|p| p.offset(by)).collect())
    }
}

/// Undirected contact graph; `edges` holds `(i, j)` with `i < j` in
/// lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContactGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl ContactGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// All-pairs contact graph over Cartesian positions with a relative
    /// tolerance `eps` around `(2r)^2`.
    pub fn from_positions(positions: &[[f64; 3]], radius: f64, eps: f64) -> Result<Self> {
        let c = 4.0 * radius * radius;
        let mut edges = Vec::new();
        for i in 0..positions.len() {
            for j in i + 1..positions.len() {
                let d2: f64 = (0..3).map(|k| (positions[i][k] - positions[j][k]).powi(2)).sum();
                match classify(d2, c, eps) {
                    Proximity::Overlap => return Err(Error::OverlapDetected(i, j)),
                    Proximity::Touching => edges.push((i, j)),
                    Proximity::Apart => {}
                }
            }
        }
        Ok(ContactGraph { n: positions.len(), edges })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Proximity {
    Overlap,
    Touching,
    Apart,
}

fn classify(d2: f64, contact_sq: f64, eps: f64) -> Proximity {
    if d2 < contact_sq * (1.0 - eps) {
        Proximity::Overlap
    } else if d2 <= contact_sq * (1.0 + eps) {
        Proximity::Touching
    } else {
        Proximity::Apart
    }
}

pub fn build_contact_graph(packing: &Packing) -> Result<ContactGraph> {
    let lattice = packing.lattice();
    let pts = packing.points();
    let c = lattice.contact_sq();
    let mut edges = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            match classify(lattice.squared_distance(&pts[i], &pts[j]), c, CONTACT_EPS) {
                Proximity::Overlap => return Err(Error::OverlapDetected(i, j)),
                Proximity::Touching => edges.push((i, j)),
                Proximity::Apart => {}
            }
        }
    }
    Ok(ContactGraph { n: pts.len(), edges })
}

pub fn contact_count(packing: &Packing) -> Result<u64> {
    Ok(build_contact_graph(packing)?.edge_count() as u64)
}

/// Nonzero coefficient vectors with entries in `[-3, 3]` whose length is
/// the contact distance `2r`. The set is closed under negation.
pub fn kissing_vectors(lattice: &Lattice) -> Vec<LatticePoint> {
    coefficient_cube(lattice.dim(), -VALIDITY_COEFF_BOUND, VALIDITY_COEFF_BOUND)
        .filter(|v| v.iter().any(|&c| c != 0))
        .filter(|v| lattice.is_contact_sq(lattice.norm_sq(v)))
        .map(LatticePoint::new)
        .collect()
}

/// Per-point sorted neighbour lists over an indexed point set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Adjacency {
    neighbors: Vec<Vec<u32>>,
}

impl Adjacency {
    /// Builds adjacency by translating each point by the kissing vectors
    /// and looking the result up in the point set. Falls back to the
    /// all-pairs definition when the lattice is flagged as skewed.
    pub fn build(points: &[LatticePoint], lattice: &Lattice) -> Result<Self> {
        if lattice.is_skewed() {
            return Self::all_pairs(points, lattice);
        }
        let index: HashMap<&[i64], u32> =
            points.iter().enumerate().map(|(i, p)| (p.coeffs(), i as u32)).collect();
        let kissing = kissing_vectors(lattice);
        let mut buf = Vec::with_capacity(lattice.dim());
        let neighbors = points
            .iter()
            .map(|p| {
                let mut row: Vec<u32> = kissing
                    .iter()
                    .filter_map(|v| {
                        buf.clear();
                        buf.extend(p.coeffs().iter().zip(v.coeffs()).map(|(a, b)| a + b));
                        index.get(buf.as_slice()).copied()
                    })
                    .collect();
                row.sort_unstable();
                row
            })
            .collect();
        Ok(Adjacency { neighbors })
    }

    /// O(n²) adjacency straight from the Gram form.
    pub fn all_pairs(points: &[LatticePoint], lattice: &Lattice) -> Result<Self> {
        let c = lattice.contact_sq();
        let mut neighbors = vec![Vec::new(); points.len()];
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                match classify(lattice.squared_distance(&points[i], &points[j]), c, CONTACT_EPS) {
                    Proximity::Overlap => return Err(Error::OverlapDetected(i, j)),
                    Proximity::Touching => {
                        neighbors[i].push(j as u32);
                        neighbors[j].push(i as u32);
                    }
                    Proximity::Apart => {}
                }
            }
        }
        Ok(Adjacency { neighbors })
    }

    /// Checks this structure against the all-pairs definition.
    pub fn verify(&self, points: &[LatticePoint], lattice: &Lattice) -> bool {
        Self::all_pairs(points, lattice).is_ok_and(|reference| reference == *self)
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }
}
