//! Cross-checks between independent routes to the same quantity.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use ihara::corpus;
use ihara::covers::{derived_cover, VoltageAssignment, VoltageGroup};
use ihara::l2::{torus_symbol, TorusQuadrature};
use ihara::zeta::{det_poly, det_poly_exact, euler_log_coeffs, numeric_det, DetRoot, ZetaFunction};
use ihara::{build_graph, MultiGraph};

fn multigraph() -> impl Strategy<Value = MultiGraph> {
    (2usize..7)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), n - 1..3 * n)))
        .prop_map(|(n, edges)| build_graph(n, &edges).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn interpolation_matches_elimination(g in multigraph()) {
        prop_assert_eq!(det_poly(&g).unwrap(), det_poly_exact(&g).unwrap());
    }

    #[test]
    fn relabelling_leaves_the_zeta_unchanged(g in multigraph(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
        perm.shuffle(&mut StdRng::seed_from_u64(seed));
        let h = g.relabel(&perm).unwrap();
        prop_assert_eq!(det_poly(&g).unwrap(), det_poly(&h).unwrap());
    }

    #[test]
    fn euler_product_holds_without_regularity(g in multigraph()) {
        let z = ZetaFunction::of(&g).unwrap();
        prop_assert_eq!(z.log_coeffs(8).unwrap(), euler_log_coeffs(&g, 8).unwrap());
    }

    #[test]
    fn cyclic_covers_of_k4_keep_their_invariants(
        n in 2u64..6,
        volts in prop::collection::vec(0i64..6, 6),
    ) {
        let k4 = corpus::complete(4);
        let cover = derived_cover(&k4, &VoltageAssignment::cyclic(n, &volts).unwrap()).unwrap();
        let g = &cover.graph;
        prop_assert_eq!(g.euler_characteristic(), n as i64 * k4.euler_characteristic());
        prop_assert_eq!(g.regularity().q, Some(2));
        let base = det_poly(&k4).unwrap();
        prop_assert!(det_poly(g).unwrap().is_divisible_by(&base).unwrap());
    }
}

#[test]
fn polynomial_agrees_with_lu_off_the_sampling_circle() {
    let mut rng = StdRng::seed_from_u64(3);
    let g = corpus::random_regular(14, 4, &mut rng);
    let p = det_poly(&g).unwrap();
    for u in [Complex64::new(0.9, 0.4), Complex64::new(-1.3, 0.2), Complex64::new(0.05, -0.7)] {
        let exact = numeric_det(&g, u);
        assert!((p.eval(u) - exact).norm() <= 1e-9 * exact.norm().max(1.0));
    }
}

/// On `n` nodes per dimension the trapezoid rule for the torus symbol is
/// exactly the normalised log-determinant of the `(Z/n)^k` cover.
#[test]
fn trapezoid_on_n_nodes_is_the_finite_cover() {
    let b2 = corpus::bouquet(2);
    let volts = vec![vec![1, 0], vec![0, 1]];
    let sym = torus_symbol(&b2, &VoltageAssignment::new(VoltageGroup::Free(2), volts.clone()).unwrap()).unwrap();
    let quad = TorusQuadrature::new(sym, 3).unwrap();
    for n in [2u64, 3, 5, 8] {
        let volt = VoltageAssignment::new(VoltageGroup::Finite(vec![n, n]), volts.clone()).unwrap();
        let cover = derived_cover(&b2, &volt).unwrap().graph;
        let root = DetRoot::new(&cover).unwrap();
        for u in [Complex64::new(0.2, 0.1), Complex64::new(-0.15, -0.3), Complex64::new(0.05, 0.0)] {
            let finite = root.log_det(u).unwrap() / (n * n) as f64;
            let trap = quad.trapezoid(u, n as usize).unwrap();
            assert!((finite - trap).norm() < 1e-12, "n={n} u={u}: {finite} vs {trap}");
        }
    }
}
