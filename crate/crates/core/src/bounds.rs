//! Upper bounds on contact numbers of unit-ball packings in R^3 and the
//! octahedral lower-bound construction on the FCC lattice.

use std::f64::consts::PI;

use crate::contact::{contact_count, Packing};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticePoint, Preset};

/// Coefficient of `n^{2/3}` in the bound for arbitrary packings.
pub const GENERAL_BOUND_COEFF: f64 = 0.926;

/// Coefficient of `n^{2/3}` in the bound for lattice packings,
/// `3 (18π)^{1/3} / π ≈ 3.6651`.
pub fn lattice_bound_coeff() -> f64 {
    3.0 * (18.0 * PI).cbrt() / PI
}

fn require_above_two(n: u64) -> Result<()> {
    if n <= 2 {
        return Err(Error::Domain(format!("contact bounds require n > 2, got n = {n}")));
    }
    Ok(())
}

/// `6n - 0.926 n^{2/3}`: strict upper bound on touching pairs among any
/// `n > 2` unit balls in R^3.
pub fn upper_bound_general(n: u64) -> Result<f64> {
    require_above_two(n)?;
    let n = n as f64;
    Ok(6.0 * n - GENERAL_BOUND_COEFF * n.powf(2.0 / 3.0))
}

/// `6n - c n^{2/3}` with `c = 3 (18π)^{1/3} / π`: strict upper bound for
/// lattice packings of `n > 2` unit balls.
pub fn upper_bound_lattice(n: u64) -> Result<f64> {
    require_above_two(n)?;
    let n = n as f64;
    Ok(6.0 * n - lattice_bound_coeff() * n.powf(2.0 / 3.0))
}

/// Bound on the bond count of a monatomic compound with `z` atoms.
pub fn bond_bound(z: u64, crystalline: bool) -> Result<f64> {
    if crystalline {
        upper_bound_lattice(z)
    } else {
        upper_bound_general(z)
    }
}

/// Largest integer strictly below `bound`.
pub fn strict_floor(bound: f64) -> i64 {
    let f = bound.floor();
    if f == bound {
        f as i64 - 1
    } else {
        f as i64
    }
}

/// Sphere count `(2k^3 + k) / 3` of the k-th complete octahedron.
pub fn octahedral_sizes(k: u64) -> u64 {
    (2 * k * k * k + k) / 3
}

/// Integer coordinates of the k-th octahedron, in fill order.
///
/// Points are `p ∈ Z^3` with `‖p‖₁ ≤ k-1` and `p_1+p_2+p_3 ≡ k-1 (mod 2)`;
/// the FCC lattice is `r√2 · p` for even coordinate sums. The order is
/// nested: the (k-1)-th octahedron shifted by `+e_3` comes first, then the
/// remaining lower shell `{p_3 ≤ 0, ‖p‖₁ = k-1}` layer by layer from
/// `p_3 = 0` downwards, lexicographically within a layer. Every prefix is
/// therefore a superset of the previous one.
pub fn octahedral_order(k: u64) -> Vec<[i64; 3]> {
    if k == 0 {
        return Vec::new();
    }
    let m = k as i64 - 1;
    let mut out: Vec<[i64; 3]> = octahedral_order(k - 1)
        .into_iter()
        .map(|[x, y, z]| [x, y, z + 1])
        .collect();
    for z in (-m..=0).rev() {
        let ring = m + z; // |p_1| + |p_2| on this layer
        let mut layer = Vec::new();
        for x in -ring..=ring {
            let rest = ring - x.abs();
            if rest == 0 {
                layer.push([x, 0, z]);
            } else {
                layer.push([x, -rest, z]);
                layer.push([x, rest, z]);
            }
        }
        out.extend(layer);
    }
    out
}

/// Converts octahedron coordinates (parity `k-1`) to FCC basis
/// coefficients, shifted so every coefficient is nonnegative.
fn to_fcc_coefficients(points: &[[i64; 3]], parity: i64) -> Vec<LatticePoint> {
    let lambdas: Vec<[i64; 3]> = points
        .iter()
        .map(|&[x, y, z]| {
            let qx = x + parity;
            debug_assert_eq!((qx + y + z).rem_euclid(2), 0);
            [(y + z - qx) / 2, (qx + z - y) / 2, (qx + y - z) / 2]
        })
        .collect();
    let mut min = [i64::MAX; 3];
    for l in &lambdas {
        for i in 0..3 {
            min[i] = min[i].min(l[i]);
        }
    }
    lambdas
        .into_iter()
        .map(|l| LatticePoint::new((0..3).map(|i| l[i] - min[i]).collect()))
        .collect()
}

/// The complete k-th octahedron as a packing on `fcc` with the given radius.
pub fn octahedral_construction(k: u64, radius: f64) -> Result<Packing> {
    if k == 0 {
        return Err(Error::Domain("octahedral construction needs k >= 1".into()));
    }
    let pts = octahedral_order(k);
    Packing::new(Lattice::preset(Preset::FaceCentered, radius)?, to_fcc_coefficients(&pts, k as i64 - 1))
}

/// First `n` spheres of the octahedral fill order, taken from the smallest
/// `k` whose octahedron holds at least `n` spheres.
pub fn octahedral_partial(n: u64, radius: f64) -> Result<Packing> {
    if n == 0 {
        return Err(Error::Domain("octahedral partial packing needs n >= 1".into()));
    }
    let k = (1..).find(|&k| octahedral_sizes(k) >= n).expect("sizes are unbounded");
    let pts = octahedral_order(k);
    Packing::new(
        Lattice::preset(Preset::FaceCentered, radius)?,
        to_fcc_coefficients(&pts[..n as usize], k as i64 - 1),
    )
}

/// Contact count of the partial octahedron with `n` spheres: a lower bound
/// on the maximal FCC contact number for `n`.
pub fn octahedral_lower_bound(n: u64) -> Result<u64> {
    contact_count(&octahedral_partial(n, 1.0)?)
}
