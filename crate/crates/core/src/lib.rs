//! Exact maximal contact numbers of finite congruent sphere packings on
//! lattices, with the matching upper bounds, the octahedral lower-bound
//! construction, and a chemistry layer that reads these as bond counts of
//! monatomic crystals.
//!
//! ```
//! use latpack::{maximal_contact_number, Lattice, Preset};
//!
//! let fcc = Lattice::preset(Preset::FaceCentered, 1.0).unwrap();
//! let result = maximal_contact_number(&fcc, 6).unwrap();
//! assert_eq!(result.contact_number, 12);
//! ```

pub mod bounds;
pub mod chem;
pub mod contact;
mod error;
pub mod lattice;
pub mod solver;

pub use bounds::{
    bond_bound, lattice_bound_coeff, octahedral_construction, octahedral_lower_bound, octahedral_partial,
    octahedral_sizes, upper_bound_general, upper_bound_lattice, GENERAL_BOUND_COEFF,
};
pub use chem::{bond_report, compound_to_packing, export_xyz, import_xyz, BondReport, CompoundSpec, LatticeSource, XyzStructure};
pub use contact::{build_contact_graph, contact_count, kissing_vectors, Adjacency, ContactGraph, Packing};
pub use error::{Error, Result};
pub use lattice::{candidate_box, Lattice, LatticePoint, LatticeSpec, Preset, CONTACT_EPS};
pub use solver::{
    maximal_contact_number, solve, solve_bnb, solve_exhaustive, verify_against_bounds, Algorithm, SearchConfig,
    SearchResult,
};
