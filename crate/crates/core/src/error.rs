use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate basis: Gram matrix is not positive definite")]
    DegenerateBasis,

    #[error("basis has {found} vectors/components, expected a {dim}x{dim} matrix")]
    DimensionMismatch { dim: usize, found: usize },

    #[error("radius must be a positive finite number, got {0}")]
    InvalidRadius(f64),

    #[error("lattice overlaps: shortest nonzero vector has length {min_length} < 2r = {diameter}")]
    OverlappingLattice { min_length: f64, diameter: f64 },

    #[error("unknown lattice preset `{0}` (expected sc, fcc or bcc)")]
    UnknownPreset(String),

    #[error("candidate box has {points} points, above the cap of {cap}")]
    BoxTooLarge { points: u128, cap: usize },

    #[error("candidate box holds {points} points, fewer than the {n} requested")]
    BoxTooSmall { points: usize, n: usize },

    #[error("spheres {0} and {1} overlap: the point set is not a packing")]
    OverlapDetected(usize, usize),

    #[error("duplicate lattice point {0}")]
    DuplicatePoint(String),

    #[error("{0}")]
    Domain(String),

    #[error("exhaustive search would enumerate {subsets} subsets (limit {limit}); use branch-and-bound")]
    InstanceTooLarge { subsets: u128, limit: u128 },

    #[error("bound check not applicable: {0}")]
    NotApplicable(String),

    #[error("contact number {contacts} violates the strict lattice bound {bound:.4} for n = {n}")]
    BoundViolation { n: usize, contacts: u64, bound: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid spec file: {0}")]
    SpecFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
