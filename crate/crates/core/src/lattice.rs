//! Lattices as free Z-modules of rank `d`, their Gram forms, and the
//! coefficient box searched by the solvers.
//!
//! A lattice is stored by its basis vectors `ω_1..ω_d` together with the
//! cached Gram matrix `G[i][j] = <ω_i, ω_j>`. Every distance the solver
//! needs is evaluated through the quadratic form `(p - q)ᵀ G (p - q)` on
//! integer coefficient vectors, so Cartesian coordinates are only produced
//! at the edges of the system (XYZ export, reporting).

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use itertools::Itertools;
use serde::Deserialize;

use crate::error::{Error, Result};

/// Relative width of the contact band around `(2r)^2`.
pub const CONTACT_EPS: f64 = 1e-9;

/// Coefficient bound used for the packing-validity scan and for
/// kissing-vector enumeration.
pub const VALIDITY_COEFF_BOUND: i64 = 3;

/// Default cap on the number of points in a candidate box.
pub const DEFAULT_BOX_CAP: usize = 20_000;

/// Relative pivot threshold below which the Gram matrix is treated as singular.
const DEGENERACY_TOL: f64 = 1e-10;

/// Integer coefficient vector `(λ_1, ..., λ_d)` over a lattice basis.
///
/// Ordering is lexicographic on the coefficients; witnesses and candidate
/// boxes rely on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coeffs: Vec<i64>) -> Self {
        LatticePoint(coeffs)
    }

    pub fn origin(d: usize) -> Self {
        LatticePoint(vec![0; d])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Componentwise sum, used for translating point sets.
    pub fn offset(&self, by: &[i64]) -> Self {
        LatticePoint(self.0.iter().zip(by).map(|(a, b)| a + b).collect())
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.0
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl<const D: usize> From<[i64; D]> for LatticePoint {
    fn from(v: [i64; D]) -> Self {
        LatticePoint(v.to_vec())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// The standard cubic packing lattices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    SimpleCubic,
    FaceCentered,
    BodyCentered,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::SimpleCubic => "sc",
            Preset::FaceCentered => "fcc",
            Preset::BodyCentered => "bcc",
        }
    }

    pub const ALL: [Preset; 3] = [Preset::SimpleCubic, Preset::FaceCentered, Preset::BodyCentered];
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sc" => Ok(Preset::SimpleCubic),
            "fcc" => Ok(Preset::FaceCentered),
            "bcc" => Ok(Preset::BodyCentered),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    basis: Vec<Vec<f64>>,
    gram: Vec<Vec<f64>>,
    radius: f64,
    name: String,
    preset: Option<Preset>,
    min_length: f64,
    skewed: bool,
}

impl Lattice {
    /// Builds a lattice from `d` basis vectors of `d` components each and
    /// checks that spheres of `radius` centred on it do not overlap.
    ///
    /// The check scans every nonzero coefficient vector with entries in
    /// `[-3, 3]`, which is stronger than requiring only the basis vectors
    /// to be `2r` apart.
    pub fn new(basis: Vec<Vec<f64>>, radius: f64) -> Result<Self> {
        Self::build(basis, radius, "custom".to_string(), None)
    }

    fn build(basis: Vec<Vec<f64>>, radius: f64, name: String, preset: Option<Preset>) -> Result<Self> {
        let d = basis.len();
        if d == 0 {
            return Err(Error::DimensionMismatch { dim: 0, found: 0 });
        }
        if let Some(row) = basis.iter().find(|row| row.len() != d) {
            return Err(Error::DimensionMismatch { dim: d, found: row.len() });
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidRadius(radius));
        }
        let gram: Vec<Vec<f64>> = (0..d)
            .map(|i| (0..d).map(|j| dot(&basis[i], &basis[j])).collect())
            .collect();
        if !is_positive_definite(&gram) {
            return Err(Error::DegenerateBasis);
        }

        let mut lattice = Lattice {
            basis,
            gram,
            radius,
            name,
            preset,
            min_length: 0.0,
            skewed: false,
        };
        let (min_sq, skewed) = lattice.scan_short_vectors(VALIDITY_COEFF_BOUND);
        lattice.min_length = min_sq.sqrt();
        lattice.skewed = skewed;

        if min_sq < lattice.contact_sq() * (1.0 - CONTACT_EPS) {
            return Err(Error::OverlappingLattice {
                min_length: lattice.min_length,
                diameter: 2.0 * radius,
            });
        }
        Ok(lattice)
    }

    pub fn preset(preset: Preset, radius: f64) -> Result<Self> {
        let basis = match preset {
            Preset::SimpleCubic => {
                let s = 2.0 * radius;
                vec![vec![s, 0.0, 0.0], vec![0.0, s, 0.0], vec![0.0, 0.0, s]]
            }
            Preset::FaceCentered => {
                let s = radius * std::f64::consts::SQRT_2;
                vec![vec![0.0, s, s], vec![s, 0.0, s], vec![s, s, 0.0]]
            }
            Preset::BodyCentered => {
                let a = 4.0 * radius / 3f64.sqrt();
                let h = a / 2.0;
                vec![vec![a, 0.0, 0.0], vec![0.0, a, 0.0], vec![h, h, h]]
            }
        };
        Self::build(basis, radius, preset.name().to_string(), Some(preset))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn gram(&self) -> &[Vec<f64>] {
        &self.gram
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Preset name (`sc`, `fcc`, `bcc`) or `custom`.
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn preset_kind(&self) -> Option<Preset> {
        self.preset
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Same basis with a different sphere radius; revalidates.
    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Self::build(self.basis.clone(), radius, self.name.clone(), self.preset)
    }

    /// Squared contact distance `(2r)^2`.
    pub fn contact_sq(&self) -> f64 {
        4.0 * self.radius * self.radius
    }

    /// Shortest nonzero vector length found by the validity scan.
    pub fn min_vector_length_cached(&self) -> f64 {
        self.min_length
    }

    /// True when a contact-length vector sits on the boundary of the
    /// validity scan region, meaning contacts may exist with coefficient
    /// differences outside `[-3, 3]`.
    pub fn is_skewed(&self) -> bool {
        self.skewed
    }

    /// Cartesian centre `Σ λ_i ω_i` of the sphere at `p`.
    pub fn embed(&self, p: &LatticePoint) -> Vec<f64> {
        let d = self.dim();
        let mut out = vec![0.0; d];
        for (lambda, omega) in p.coeffs().iter().zip(&self.basis) {
            let lambda = *lambda as f64;
            for (o, w) in out.iter_mut().zip(omega) {
                *o += lambda * w;
            }
        }
        out
    }

    /// Quadratic form `vᵀ G v` for an integer coefficient vector.
    pub fn norm_sq(&self, v: &[i64]) -> f64 {
        let mut acc = 0.0;
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            let row = &self.gram[i];
            let mut s = 0.0;
            for (j, &vj) in v.iter().enumerate() {
                s += row[j] * vj as f64;
            }
            acc += vi as f64 * s;
        }
        acc
    }

    /// `(p - q)ᵀ G (p - q)`.
    pub fn squared_distance(&self, p: &LatticePoint, q: &LatticePoint) -> f64 {
        let diff: Vec<i64> = p.coeffs().iter().zip(q.coeffs()).map(|(a, b)| a - b).collect();
        self.norm_sq(&diff)
    }

    /// Whether a squared distance lies inside the contact band.
    pub fn is_contact_sq(&self, d2: f64) -> bool {
        let c = self.contact_sq();
        d2 >= c * (1.0 - CONTACT_EPS) && d2 <= c * (1.0 + CONTACT_EPS)
    }

    /// Minimum length over nonzero coefficient vectors with `|v_i| <= coeff_bound`.
    pub fn min_vector_length(&self, coeff_bound: i64) -> f64 {
        self.scan_short_vectors(coeff_bound).0.sqrt()
    }

    fn scan_short_vectors(&self, bound: i64) -> (f64, bool) {
        let band_hi = self.contact_sq() * (1.0 + CONTACT_EPS);
        let mut min_sq = f64::INFINITY;
        let mut boundary_contact = false;
        for v in coefficient_cube(self.dim(), -bound, bound) {
            if v.iter().all(|&c| c == 0) {
                continue;
            }
            let n2 = self.norm_sq(&v);
            min_sq = min_sq.min(n2);
            if n2 <= band_hi && v.iter().any(|c| c.abs() == bound) {
                boundary_contact = true;
            }
        }
        (min_sq, boundary_contact)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn is_positive_definite(gram: &[Vec<f64>]) -> bool {
    // Cholesky with a relative pivot threshold.
    let d = gram.len();
    let mut l = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let pivot = gram[i][i] - s;
                if !pivot.is_finite() || pivot <= DEGENERACY_TOL * gram[i][i].abs() {
                    return false;
                }
                l[i][j] = pivot.sqrt();
            } else {
                l[i][j] = (gram[i][j] - s) / l[j][j];
            }
        }
    }
    true
}

/// All integer vectors in `[lo, hi]^d`, in lexicographic order.
pub(crate) fn coefficient_cube(d: usize, lo: i64, hi: i64) -> impl Iterator<Item = Vec<i64>> {
    (0..d).map(move |_| lo..=hi).multi_cartesian_product()
}

/// Side parameter `k = ⌈n/d⌉` of the candidate box.
pub fn box_side(n: usize, d: usize) -> usize {
    n.div_ceil(d)
}

/// Every point with coefficients in `{0, ..., k}`, lexicographically sorted,
/// where `k = ⌈n/d⌉`.
pub fn candidate_box(lattice: &Lattice, n: usize) -> Result<Vec<LatticePoint>> {
    candidate_box_with(lattice.dim(), box_side(n, lattice.dim()), DEFAULT_BOX_CAP)
}

/// Candidate box for an explicit side parameter `k` and point cap.
pub fn candidate_box_with(d: usize, k: usize, cap: usize) -> Result<Vec<LatticePoint>> {
    let points = (k as u128 + 1).checked_pow(d as u32).unwrap_or(u128::MAX);
    if points > cap as u128 {
        return Err(Error::BoxTooLarge { points, cap });
    }
    Ok(coefficient_cube(d, 0, k as i64).map(LatticePoint).collect())
}

/// On-disk lattice description (TOML).
///
/// ```toml
/// preset = "fcc"
/// radius = 1.0
/// ```
///
/// or an explicit basis:
///
/// ```toml
/// dimension = 3
/// radius = 1.0
/// basis = [[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 2.0]]
/// ```
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub preset: Option<String>,
    pub dimension: Option<usize>,
    pub radius: Option<f64>,
    pub basis: Option<Vec<Vec<f64>>>,
}

impl LatticeSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::SpecFile(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Builds the lattice, with `radius_override` taking precedence over the
    /// file's `radius` field.
    pub fn to_lattice(&self, radius_override: Option<f64>) -> Result<Lattice> {
        let radius = radius_override
            .or(self.radius)
            .ok_or_else(|| Error::SpecFile("missing `radius`".into()))?;
        match (&self.preset, &self.basis) {
            (Some(_), Some(_)) => Err(Error::SpecFile("give either `preset` or `basis`, not both".into())),
            (Some(name), None) => Lattice::preset(name.parse()?, radius),
            (None, Some(basis)) => {
                if let Some(d) = self.dimension {
                    if d != basis.len() {
                        return Err(Error::DimensionMismatch { dim: d, found: basis.len() });
                    }
                }
                Lattice::new(basis.clone(), radius)
            }
            (None, None) => Err(Error::SpecFile("missing `preset` or `basis`".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn simple_cubic_gram_is_diagonal() {
        let l = Lattice::preset(Preset::SimpleCubic, 1.0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 4.0 } else { 0.0 };
                assert_eq!(l.gram()[i][j], want);
            }
        }
    }

    #[test]
    fn explicit_fcc_basis_is_valid() {
        let s = 2f64.sqrt();
        let l = Lattice::new(vec![vec![0.0, s, s], vec![s, 0.0, s], vec![s, s, 0.0]], 1.0).unwrap();
        assert!(approx(l.min_vector_length(2), 2.0, 1e-12));
        assert!(!l.is_skewed());
    }

    #[test]
    fn dependent_basis_is_degenerate() {
        let err = Lattice::new(
            vec![vec![2.0, 0.0, 0.0], vec![4.0, 0.0, 0.0], vec![0.0, 0.0, 2.0]],
            1.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DegenerateBasis));
    }

    #[test]
    fn unit_cube_is_too_tight_for_unit_spheres() {
        let basis = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let err = Lattice::new(basis, 1.0).unwrap_err();
        match err {
            Error::OverlappingLattice { min_length, .. } => assert!(approx(min_length, 1.0, 1e-12)),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn short_basis_difference_passes_basis_length_check_but_overlaps() {
        // ω_1 - ω_2 and friends are long, but ω_1 + ω_2 is short.
        let basis = vec![vec![2.0, 0.0, 0.0], vec![-1.9, 0.3, 0.0], vec![0.0, 0.0, 2.0]];
        assert!(matches!(Lattice::new(basis, 1.0), Err(Error::OverlappingLattice { .. })));
    }

    #[test]
    fn bad_shapes_and_radii_rejected() {
        assert!(matches!(
            Lattice::new(vec![vec![2.0, 0.0], vec![0.0, 2.0, 0.0]], 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(Lattice::preset(Preset::FaceCentered, 0.0), Err(Error::InvalidRadius(_))));
        assert!(matches!(Lattice::preset(Preset::FaceCentered, f64::NAN), Err(Error::InvalidRadius(_))));
        assert!(matches!("hcp".parse::<Preset>(), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn presets_have_min_vector_two_r() {
        for p in Preset::ALL {
            for r in [0.5, 1.0, 1.28] {
                let l = Lattice::preset(p, r).unwrap();
                assert!(approx(l.min_vector_length(3), 2.0 * r, 1e-9), "{p} r={r}");
            }
        }
    }

    #[test]
    fn embed_examples() {
        let sc = Lattice::preset(Preset::SimpleCubic, 1.0).unwrap();
        assert_eq!(sc.embed(&LatticePoint::origin(3)), vec![0.0; 3]);
        assert_eq!(sc.embed(&[1, 0, 0].into()), vec![2.0, 0.0, 0.0]);

        let fcc = Lattice::preset(Preset::FaceCentered, 1.0).unwrap();
        let x = fcc.embed(&[1, 1, 0].into());
        let s = 2f64.sqrt();
        for (a, b) in x.iter().zip([s, s, 2.0 * s]) {
            assert!(approx(*a, b, 1e-12));
        }
    }

    #[test]
    fn squared_distance_examples() {
        let sc = Lattice::preset(Preset::SimpleCubic, 1.0).unwrap();
        let o = LatticePoint::origin(3);
        assert_eq!(sc.squared_distance(&o, &o), 0.0);
        assert!(approx(sc.squared_distance(&o, &[1, 0, 0].into()), 4.0, 1e-12));
        let fcc = Lattice::preset(Preset::FaceCentered, 1.0).unwrap();
        assert!(approx(fcc.squared_distance(&o, &[1, 1, 1].into()), 24.0, 1e-12));
    }

    #[test]
    fn candidate_box_sizes() {
        let fcc = Lattice::preset(Preset::FaceCentered, 1.0).unwrap();
        let b = candidate_box(&fcc, 6).unwrap();
        assert_eq!(b.len(), 27);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(b.last().unwrap().coeffs(), &[2, 2, 2]);
        assert_eq!(candidate_box(&fcc, 1).unwrap().len(), 8);

        let sq = Lattice::new(vec![vec![2.0, 0.0], vec![0.0, 2.0]], 1.0).unwrap();
        assert_eq!(candidate_box(&sq, 5).unwrap().len(), 16);
    }

    #[test]
    fn candidate_box_cap() {
        let fcc = Lattice::preset(Preset::FaceCentered, 1.0).unwrap();
        // k = 28 -> 29^3 = 24389 points
        match candidate_box(&fcc, 84) {
            Err(Error::BoxTooLarge { points, cap }) => {
                assert_eq!(points, 24_389);
                assert_eq!(cap, DEFAULT_BOX_CAP);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lattice_spec_files() {
        let spec = LatticeSpec::from_toml_str("preset = \"bcc\"\nradius = 1.5\n").unwrap();
        let l = spec.to_lattice(None).unwrap();
        assert_eq!(l.name(), "bcc");
        assert_eq!(l.radius(), 1.5);
        assert_eq!(spec.to_lattice(Some(2.0)).unwrap().radius(), 2.0);

        let spec = LatticeSpec::from_toml_str(
            "dimension = 2\nradius = 1.0\nbasis = [[2.0, 0.0], [1.0, 1.7320508075688772]]\n",
        )
        .unwrap();
        let hex = spec.to_lattice(None).unwrap();
        assert_eq!(hex.dim(), 2);

        assert!(LatticeSpec::from_toml_str("radius = 1.0\n").unwrap().to_lattice(None).is_err());
        assert!(LatticeSpec::from_toml_str("presett = \"fcc\"\n").is_err());
        let bad_dim = LatticeSpec::from_toml_str("dimension = 3\nradius = 1.0\nbasis = [[2.0, 0.0], [0.0, 2.0]]\n").unwrap();
        assert!(matches!(bad_dim.to_lattice(None), Err(Error::DimensionMismatch { .. })));
    }
}
