use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use serde::Serialize;

use latpack::{
    bond_report, export_xyz, import_xyz, lattice_bound_coeff, octahedral_construction, octahedral_sizes, solve as run_solver,
    upper_bound_general, upper_bound_lattice, verify_against_bounds, Algorithm, BondReport, CompoundSpec, Lattice,
    LatticeSpec, Preset, SearchConfig,
};

use crate::{AlgorithmArg, AnalyzeArgs, BoundsArgs, OctaArgs, SolveArgs};

/// A bound check failed on a result the tool produced itself.
#[derive(Debug)]
struct InvariantViolation(String);

impl std::fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvariantViolation {}

pub(crate) fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<InvariantViolation>().is_some()
        || matches!(err.downcast_ref::<latpack::Error>(), Some(latpack::Error::BoundViolation { .. }))
    {
        4
    } else {
        3
    }
}

/// Writes the human-readable report: stdout normally, stderr when stdout
/// carries JSON.
fn emit(json: bool, text: &str) {
    if json {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn resolve_lattice(source: &str, radius: Option<f64>) -> Result<Lattice> {
    if let Ok(preset) = source.parse::<Preset>() {
        return Ok(Lattice::preset(preset, radius.unwrap_or(1.0))?);
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(latpack::Error::UnknownPreset(source.to_string()))
            .with_context(|| format!("`{source}` is neither a preset nor an existing lattice file"));
    }
    let spec = LatticeSpec::from_path(path).with_context(|| format!("reading lattice file {}", path.display()))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("custom").to_string();
    let lattice = spec.to_lattice(radius)?;
    Ok(if lattice.preset_kind().is_some() { lattice } else { lattice.with_name(name) })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct SolveJson<'a> {
    lattice: &'a str,
    n: usize,
    contact_number: u64,
    optimal: bool,
    bound: Option<f64>,
    witness: Vec<&'a [i64]>,
}

pub(crate) fn solve(args: SolveArgs) -> Result<()> {
    let (lattice, n, compound) = match &args.compound {
        Some(path) => {
            let spec = CompoundSpec::from_path(path).with_context(|| format!("reading compound {}", path.display()))?;
            let lattice = spec.lattice()?;
            (lattice, spec.z, Some(spec))
        }
        None => {
            let source = args.lattice.as_deref().expect("clap requires --lattice");
            let n = args.n.expect("clap requires --n") as usize;
            (resolve_lattice(source, args.radius)?, n, None)
        }
    };

    let mut config = SearchConfig::new(n).algorithm(match args.algorithm {
        AlgorithmArg::Auto => Algorithm::Auto,
        AlgorithmArg::Exhaustive => Algorithm::Exhaustive,
        AlgorithmArg::Bnb => Algorithm::BranchAndBound,
    });
    config.box_k = args.box_k;
    config.thread_hint = args.threads;
    config.node_limit = args.node_limit;

    let result = run_solver(&lattice, &config)?;

    let mut text = String::new();
    writeln!(text, "lattice     {} (r = {})", lattice.name(), lattice.radius())?;
    writeln!(text, "n           {n}")?;
    writeln!(text, "contacts    {}", result.contact_number)?;
    writeln!(text, "optimal     {}", result.optimal)?;
    match result.theorem_bound {
        Some(b) => writeln!(text, "bound       {b:.4}  (6n - {:.4} n^(2/3), strict)", lattice_bound_coeff())?,
        None => writeln!(text, "bound       n/a")?,
    }
    writeln!(text, "nodes       {}", result.nodes_explored)?;
    writeln!(text, "algorithm   {}", result.algorithm)?;
    let witness: Vec<String> = result.witness.points().iter().map(ToString::to_string).collect();
    writeln!(text, "witness     {}", witness.join(" "))?;
    if let Some(spec) = &compound {
        let mut report = bond_report(&result.witness)?;
        report.max_coordination_witness = Some(result.witness.clone());
        writeln!(text, "compound    {}_{}", spec.element_symbol, spec.z)?;
        write_bond_lines(&mut text, &report)?;
    }
    emit(args.json, &text);

    if args.json {
        print_json(&SolveJson {
            lattice: lattice.name(),
            n,
            contact_number: result.contact_number,
            optimal: result.optimal,
            bound: result.theorem_bound,
            witness: result.witness.points().iter().map(|p| p.coeffs()).collect(),
        })?;
    }

    if let Some(path) = &args.export_xyz {
        let symbol = compound.as_ref().map_or(args.element.as_str(), |c| c.element_symbol.as_str());
        write_file(path, &export_xyz(&result.witness, symbol)?)?;
    }

    if result.optimal && n > 2 && lattice.dim() == 3 && !verify_against_bounds(&result)? {
        return Err(InvariantViolation(format!(
            "contact number {} for n = {n} fails the bound check",
            result.contact_number
        ))
        .into());
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundsJson {
    n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    general_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lattice_bound: Option<f64>,
}

pub(crate) fn bounds(args: BoundsArgs) -> Result<()> {
    let general = (!args.lattice_only).then(|| upper_bound_general(args.n)).transpose()?;
    let lattice = (!args.general_only).then(|| upper_bound_lattice(args.n)).transpose()?;
    let mut text = String::new();
    if let Some(g) = general {
        writeln!(text, "general  {g:.4}  (6n - 0.926 n^(2/3))")?;
    }
    if let Some(l) = lattice {
        writeln!(text, "lattice  {l:.4}  (6n - {:.4} n^(2/3))", lattice_bound_coeff())?;
    }
    emit(args.json, &text);
    if args.json {
        print_json(&BoundsJson { n: args.n, general_bound: general, lattice_bound: lattice })?;
    }
    Ok(())
}

#[derive(Serialize)]
struct OctaJson {
    k: u64,
    n: u64,
    contacts: u64,
    bound: Option<f64>,
}

pub(crate) fn octa(args: OctaArgs) -> Result<()> {
    let packing = octahedral_construction(args.k, args.radius)?;
    let n = octahedral_sizes(args.k);
    let report = bond_report(&packing)?;
    let bound = (n > 2).then(|| upper_bound_lattice(n)).transpose()?;

    let mut text = String::new();
    writeln!(text, "k           {}", args.k)?;
    writeln!(text, "n           {n}")?;
    writeln!(text, "contacts    {}", report.bonds)?;
    match bound {
        Some(b) => writeln!(text, "bound       {b:.4}")?,
        None => writeln!(text, "bound       n/a")?,
    }
    emit(args.json, &text);
    if args.json {
        print_json(&OctaJson { k: args.k, n, contacts: report.bonds, bound })?;
    }
    if let Some(path) = &args.export_xyz {
        write_file(path, &export_xyz(&packing, &args.element)?)?;
    }
    if !report.within_bounds() {
        return Err(InvariantViolation(format!("octahedron k = {} breaks the lattice bound", args.k)).into());
    }
    Ok(())
}

#[derive(Serialize)]
struct AnalyzeJson {
    atoms: usize,
    bonds: u64,
    amorphous_bound: Option<f64>,
    crystal_bound: Option<f64>,
    within_bounds: bool,
}

fn write_bond_lines(text: &mut String, report: &BondReport) -> std::fmt::Result {
    writeln!(text, "atoms       {}", report.z)?;
    writeln!(text, "bonds       {}", report.bonds)?;
    if let Some(b) = report.amorphous_bound {
        writeln!(text, "amorphous   < {b:.4}")?;
    }
    if let Some(b) = report.crystal_bound {
        writeln!(text, "crystal     < {b:.4}")?;
    }
    Ok(())
}

pub(crate) fn analyze(args: AnalyzeArgs) -> Result<()> {
    let text_in = fs::read_to_string(&args.xyz).with_context(|| format!("reading {}", args.xyz.display()))?;
    let structure = import_xyz(&text_in, args.radius).with_context(|| format!("parsing {}", args.xyz.display()))?;
    let report = BondReport::from_count(structure.positions.len(), structure.graph.edge_count() as u64, args.crystal);

    let mut text = String::new();
    write_bond_lines(&mut text, &report)?;
    emit(args.json, &text);
    if args.json {
        print_json(&AnalyzeJson {
            atoms: report.z,
            bonds: report.bonds,
            amorphous_bound: report.amorphous_bound,
            crystal_bound: report.crystal_bound,
            within_bounds: report.within_bounds(),
        })?;
    }
    if !report.within_bounds() {
        return Err(anyhow!(InvariantViolation(format!(
            "{} bonds among {} atoms exceed the applicable bound",
            report.bonds, report.z
        ))));
    }
    Ok(())
}
