use proptest::prelude::*;
use rand::{Rng, SeedableRng};

use latpack::bounds::octahedral_partial;
use latpack::lattice::candidate_box_with;
use latpack::{
    build_contact_graph, candidate_box, contact_count, export_xyz, import_xyz, kissing_vectors, octahedral_construction,
    octahedral_lower_bound, octahedral_sizes, solve_bnb, Adjacency, Lattice, LatticePoint, Packing, Preset,
    SearchConfig,
};

fn preset_strategy() -> impl Strategy<Value = Preset> {
    prop_oneof![Just(Preset::SimpleCubic), Just(Preset::FaceCentered), Just(Preset::BodyCentered)]
}

fn coeffs(bound: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-bound..=bound, 3)
}

proptest! {
    #[test]
    fn squared_distance_is_a_metric_form(p in preset_strategy(), a in coeffs(10), b in coeffs(10)) {
        let l = Lattice::preset(p, 1.0).unwrap();
        let (a, b) = (LatticePoint::new(a), LatticePoint::new(b));
        let ab = l.squared_distance(&a, &b);
        prop_assert_eq!(ab, l.squared_distance(&b, &a));
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(ab == 0.0, a == b);
    }

    #[test]
    fn candidate_box_shape(n in 1usize..=20, d in 2usize..=3) {
        let k = n.div_ceil(d);
        let pts = candidate_box_with(d, k, 20_000).unwrap();
        prop_assert_eq!(pts.len(), (k + 1).pow(d as u32));
        prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(pts.iter().all(|p| p.coeffs().iter().all(|&c| (0..=k as i64).contains(&c))));
    }

    #[test]
    fn translation_keeps_the_contact_graph(p in preset_strategy(), seed in any::<u64>()) {
        let l = Lattice::preset(p, 1.0).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut pts: Vec<LatticePoint> = candidate_box_with(3, 2, 100).unwrap();
        pts.retain(|_| rng.gen_bool(0.5));
        prop_assume!(!pts.is_empty());
        let packing = Packing::new(l, pts).unwrap();
        let moved = packing.translated(&[1, 1, 1]).unwrap();
        // translation preserves lexicographic order, so edges map index to index
        prop_assert_eq!(build_contact_graph(&packing).unwrap(), build_contact_graph(&moved).unwrap());
    }

    #[test]
    fn xyz_round_trip(p in preset_strategy(), radius in 0.5f64..3.0, seed in any::<u64>()) {
        let l = Lattice::preset(p, radius).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut pts: Vec<LatticePoint> = candidate_box_with(3, 2, 100).unwrap();
        pts.retain(|_| rng.gen_bool(0.4));
        prop_assume!(!pts.is_empty());
        let packing = Packing::new(l, pts).unwrap();
        let text = export_xyz(&packing, "X").unwrap();
        let back = import_xyz(&text, radius).unwrap();
        for (x, y) in packing.positions().iter().zip(&back.positions) {
            for k in 0..3 {
                prop_assert!((x[k] - y[k]).abs() <= 1e-6);
            }
        }
        prop_assert_eq!(back.graph, build_contact_graph(&packing).unwrap());
    }
}

#[test]
fn gram_form_matches_cartesian_distance() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let lattices: Vec<Lattice> = Preset::ALL
        .iter()
        .map(|&p| Lattice::preset(p, 1.3).unwrap())
        .chain([Lattice::new(vec![vec![2.0, 0.0, 0.0], vec![1.0, 1.8, 0.0], vec![0.7, 0.5, 2.1]], 1.0).unwrap()])
        .collect();
    for l in &lattices {
        for _ in 0..1000 {
            let p = LatticePoint::new((0..3).map(|_| rng.gen_range(-10..=10)).collect());
            let q = LatticePoint::new((0..3).map(|_| rng.gen_range(-10..=10)).collect());
            let (x, y) = (l.embed(&p), l.embed(&q));
            let cart: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum();
            let gram = l.squared_distance(&p, &q);
            assert!((cart - gram).abs() <= 1e-9 * cart.max(1.0), "{cart} vs {gram}");
        }
    }
}

#[test]
fn kissing_vectors_match_a_wider_enumeration() {
    // Oracle: count contact-length vectors in [-2, 2]^3 straight from the basis.
    for (p, want) in [(Preset::SimpleCubic, 6), (Preset::FaceCentered, 12), (Preset::BodyCentered, 8)] {
        let l = Lattice::preset(p, 1.0).unwrap();
        let mut count = 0;
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                for c in -2i64..=2 {
                    let v: Vec<f64> = (0..3)
                        .map(|k| a as f64 * l.basis()[0][k] + b as f64 * l.basis()[1][k] + c as f64 * l.basis()[2][k])
                        .collect();
                    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if (len - 2.0).abs() < 1e-9 {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, want);
        assert_eq!(kissing_vectors(&l).len(), want);
        assert!((l.min_vector_length(3) - 2.0).abs() < 1e-9);
    }
}

#[test]
fn adjacency_degree_sum_matches_contact_graph() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for p in Preset::ALL {
        let l = Lattice::preset(p, 1.0).unwrap();
        let kiss = kissing_vectors(&l).len();
        for _ in 0..100 {
            let k = rng.gen_range(1..=3);
            let mut pts = candidate_box_with(3, k, 100).unwrap();
            pts.retain(|_| rng.gen_bool(0.6));
            let adj = Adjacency::build(&pts, &l).unwrap();
            let degree_sum: usize = (0..pts.len()).map(|i| adj.degree(i)).sum();
            let packing = Packing::new(l.clone(), pts.clone()).unwrap();
            let graph = build_contact_graph(&packing).unwrap();
            assert_eq!(degree_sum, 2 * graph.edge_count());
            assert!(graph.max_degree() <= kiss);
            assert!(adj.verify(&pts, &l));
        }
    }
}

#[test]
fn candidate_box_counts_for_n_up_to_twenty() {
    let fcc = Lattice::preset(Preset::FaceCentered, 1.0).unwrap();
    for n in 1..=20usize {
        assert_eq!(candidate_box(&fcc, n).unwrap().len(), (n.div_ceil(3) + 1).pow(3));
    }
}

/// All-pairs Euclidean contact count, independent of the Gram form.
fn cartesian_contacts(packing: &Packing) -> usize {
    let x = packing.positions();
    let c = 4.0 * packing.lattice().radius().powi(2);
    let mut count = 0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let d2: f64 = x[i].iter().zip(&x[j]).map(|(a, b)| (a - b).powi(2)).sum();
            if (d2 - c).abs() <= 1e-9 * c {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn octahedra_sizes_contacts_and_lattice_membership() {
    let sizes: Vec<usize> = (1..=6).map(|k| octahedral_construction(k, 1.0).unwrap().len()).collect();
    assert_eq!(sizes, vec![1, 6, 19, 44, 85, 146]);
    for k in 1..=6u64 {
        let packing = octahedral_construction(k, 1.0).unwrap();
        assert_eq!(packing.len() as u64, octahedral_sizes(k));
        assert_eq!(contact_count(&packing).unwrap() as usize, cartesian_contacts(&packing));
    }
    // Cartesian centres solve back to integer FCC coefficients.
    let fcc = Lattice::preset(Preset::FaceCentered, 1.0).unwrap();
    let s = 2f64.sqrt();
    for p in octahedral_construction(5, 1.0).unwrap().positions() {
        // inverse of r√2·[[0,1,1],[1,0,1],[1,1,0]] (rows are basis vectors)
        let (x, y, z) = (p[0] / s, p[1] / s, p[2] / s);
        let lambda = [(y + z - x) / 2.0, (x + z - y) / 2.0, (x + y - z) / 2.0];
        for v in lambda {
            assert!((v - v.round()).abs() <= 1e-9);
        }
        let back = fcc.embed(&LatticePoint::new(lambda.iter().map(|v| v.round() as i64).collect()));
        for k in 0..3 {
            assert!((back[k] - p[k]).abs() <= 1e-9);
        }
    }
}

#[test]
fn octahedral_lower_bound_is_monotone() {
    let mut prev = 0;
    for n in 1..=146u64 {
        let v = octahedral_lower_bound(n).unwrap();
        assert!(v >= prev, "n={n}: {v} < {prev}");
        prev = v;
        let partial = octahedral_partial(n, 1.0).unwrap();
        assert_eq!(cartesian_contacts(&partial) as u64, v);
    }
    assert_eq!(octahedral_lower_bound(6).unwrap(), 12);
}

#[test]
fn solver_is_monotone_and_witnesses_check_out() {
    for p in Preset::ALL {
        let l = Lattice::preset(p, 1.0).unwrap();
        let kiss = kissing_vectors(&l).len() as u64;
        let mut prev = 0;
        for n in 1..=9 {
            let r = solve_bnb(&l, &SearchConfig::new(n)).unwrap();
            assert!(r.contact_number >= prev, "{p} n={n}");
            prev = r.contact_number;
            assert_eq!(r.witness.len(), n);
            assert_eq!(cartesian_contacts(&r.witness) as u64, r.contact_number);
            assert!(r.contact_number <= n as u64 * kiss / 2);
        }
    }
}
