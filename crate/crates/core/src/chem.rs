//! Monatomic compounds as congruent sphere packings.
//!
//! A compound `A_Z` of `Z` atoms of radius `r(A)` becomes `Z` spheres of
//! radius `r(A)`; bonds are contacts. Radii are always supplied by the
//! caller and share one length unit with the lattice basis (Ångström in
//! the examples). There is no built-in table of ionic radii.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::bounds::{upper_bound_general, upper_bound_lattice};
use crate::contact::{build_contact_graph, ContactGraph, Packing};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticePoint, LatticeSpec, Preset};

/// Relative contact tolerance for imported XYZ structures. Coordinates
/// written with six decimals carry squared-distance errors near 1e-6.
pub const XYZ_CONTACT_EPS: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq)]
pub enum LatticeSource {
    Preset(Preset),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompoundSpec {
    pub element_symbol: String,
    pub radius: f64,
    pub z: usize,
    pub lattice_source: LatticeSource,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CompoundFile {
    element: String,
    radius: f64,
    #[serde(alias = "z")]
    #[serde(rename = "Z")]
    atoms: usize,
    lattice: String,
}

impl CompoundSpec {
    /// Parses a compound file:
    ///
    /// ```toml
    /// element = "Cu"
    /// radius = 1.28
    /// Z = 13
    /// lattice = "fcc"          # preset name or path to a lattice file
    /// ```
    ///
    /// Relative lattice paths resolve against `base_dir` when given.
    pub fn from_toml_str(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let raw: CompoundFile = toml::from_str(text).map_err(|e| Error::SpecFile(e.to_string()))?;
        if !(raw.radius.is_finite() && raw.radius > 0.0) {
            return Err(Error::InvalidRadius(raw.radius));
        }
        if raw.atoms == 0 {
            return Err(Error::SpecFile("Z must be at least 1".into()));
        }
        let lattice_source = match raw.lattice.parse::<Preset>() {
            Ok(p) => LatticeSource::Preset(p),
            Err(_) => {
                let path = PathBuf::from(&raw.lattice);
                LatticeSource::File(match base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path,
                })
            }
        };
        Ok(CompoundSpec { element_symbol: raw.element, radius: raw.radius, z: raw.atoms, lattice_source })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?, path.parent())
    }

    /// The compound's lattice, with spheres of the compound's radius.
    pub fn lattice(&self) -> Result<Lattice> {
        match &self.lattice_source {
            LatticeSource::Preset(p) => Lattice::preset(*p, self.radius),
            LatticeSource::File(path) => LatticeSpec::from_path(path)?.to_lattice(Some(self.radius)),
        }
    }
}

/// Places the compound's atoms at the given lattice points.
pub fn compound_to_packing(spec: &CompoundSpec, points: Vec<LatticePoint>) -> Result<Packing> {
    if points.len() != spec.z {
        return Err(Error::Domain(format!(
            "compound has Z = {} atoms but {} positions were given",
            spec.z,
            points.len()
        )));
    }
    let packing = Packing::new(spec.lattice()?, points)?;
    build_contact_graph(&packing)?;
    Ok(packing)
}

#[derive(Clone, Debug)]
pub struct BondReport {
    pub z: usize,
    pub bonds: u64,
    /// `6Z - 0.926 Z^{2/3}`, for `Z > 2`.
    pub amorphous_bound: Option<f64>,
    /// `6Z - c Z^{2/3}`, for `Z > 2`.
    pub crystal_bound: Option<f64>,
    pub max_coordination_witness: Option<Packing>,
}

impl BondReport {
    /// Report for a bond count without lattice information; `crystalline`
    /// selects whether the crystal bound is included.
    pub fn from_count(z: usize, bonds: u64, crystalline: bool) -> Self {
        let above_two = z > 2;
        BondReport {
            z,
            bonds,
            amorphous_bound: above_two.then(|| upper_bound_general(z as u64).expect("z > 2")),
            crystal_bound: (above_two && crystalline).then(|| upper_bound_lattice(z as u64).expect("z > 2")),
            max_coordination_witness: None,
        }
    }

    /// Whether the bond count respects every bound present.
    pub fn within_bounds(&self) -> bool {
        let b = self.bonds as f64;
        self.amorphous_bound.is_none_or(|u| b < u) && self.crystal_bound.is_none_or(|u| b < u)
    }
}

pub fn bond_report(packing: &Packing) -> Result<BondReport> {
    let bonds = build_contact_graph(packing)?.edge_count() as u64;
    Ok(BondReport::from_count(packing.len(), bonds, true))
}

fn fmt_coord(x: f64) -> String {
    // normalise -0.0 so output is stable
    format!("{:.6}", x + 0.0)
}

/// XYZ text for a packing: count line, a comment with lattice name, radius
/// and contact count, then `SYMBOL x y z` per sphere in sorted order.
pub fn export_xyz(packing: &Packing, element_symbol: &str) -> Result<String> {
    let lattice = packing.lattice();
    if lattice.dim() > 3 {
        return Err(Error::Domain(format!("XYZ export needs d <= 3, lattice has d = {}", lattice.dim())));
    }
    let contacts = build_contact_graph(packing)?.edge_count();
    let mut out = String::new();
    writeln!(out, "{}", packing.len()).unwrap();
    writeln!(out, "lattice={} radius={:.6} contacts={}", lattice.name(), lattice.radius(), contacts).unwrap();
    for x in packing.positions() {
        let mut xyz = [0.0; 3];
        xyz[..x.len()].copy_from_slice(&x);
        writeln!(out, "{} {} {} {}", element_symbol, fmt_coord(xyz[0]), fmt_coord(xyz[1]), fmt_coord(xyz[2]))
            .unwrap();
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct XyzStructure {
    pub comment: String,
    pub symbols: Vec<String>,
    pub positions: Vec<[f64; 3]>,
    pub graph: ContactGraph,
}

/// Parses XYZ text and builds its contact graph for spheres of `radius`,
/// without assuming any lattice.
pub fn import_xyz(text: &str, radius: f64) -> Result<XyzStructure> {
    import_xyz_with(text, radius, XYZ_CONTACT_EPS)
}

pub fn import_xyz_with(text: &str, radius: f64, eps: f64) -> Result<XyzStructure> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidRadius(radius));
    }
    let parse_err = |line: usize, message: String| Error::Parse { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file".into()))?;
    let count: usize = header
        .trim()
        .parse()
        .map_err(|_| parse_err(1, format!("expected atom count, got `{}`", header.trim())))?;
    let comment = lines.next().map(|(_, l)| l.to_string()).ok_or_else(|| parse_err(2, "missing comment line".into()))?;

    let mut symbols = Vec::with_capacity(count);
    let mut positions = Vec::with_capacity(count);
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if symbols.len() == count {
            return Err(parse_err(lineno, format!("more than the {count} declared atoms")));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 4 {
            return Err(parse_err(lineno, format!("expected `symbol x y z`, got `{}`", line.trim())));
        }
        let mut xyz = [0.0; 3];
        for (slot, field) in xyz.iter_mut().zip(&fields[1..4]) {
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(lineno, format!("invalid coordinate `{field}`")))?;
        }
        symbols.push(fields[0].to_string());
        positions.push(xyz);
    }
    if symbols.len() != count {
        return Err(parse_err(1, format!("header declares {count} atoms, found {}", symbols.len())));
    }
    let graph = ContactGraph::from_positions(&positions, radius, eps)?;
    Ok(XyzStructure { comment, symbols, positions, graph })
}
