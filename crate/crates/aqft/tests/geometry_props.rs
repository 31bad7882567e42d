use aqft::geometry::causal::{are_causally_disjoint, causal_future, causal_past, is_causally_convex};
use aqft::geometry::development::cauchy_development;
use aqft::geometry::lattice::LatticeGrid;
use aqft::geometry::{Region, Spacetime};
use aqft::rational::{q, qi};
use proptest::prelude::*;

fn strip() -> Spacetime {
    Spacetime::strip(qi(1))
}

/// Diamonds on a 1/20 grid, possibly cut by the boundary. A closure that
/// touches `∂M` in a single vertex is left out: rasterizing that vertex
/// blocks the boundary-hugging lattice paths, so the oracle cannot see it.
fn diamond() -> impl Strategy<Value = Region> {
    (-20i64..=20, 0i64..=20, 1i64..=10)
        .prop_filter("vertex on the boundary", |&(_, x, r)| x != r && x + r != 20)
        .prop_map(|(t, x, r)| Region::diamond(strip(), q(t, 20), q(x, 20), q(r, 20)))
}

fn region() -> impl Strategy<Value = Region> {
    prop::collection::vec(diamond(), 1..=3).prop_map(|ds| ds.iter().skip(1).fold(ds[0].clone(), |acc, d| acc.union(d)))
}

fn dev(s: &Region) -> Region {
    cauchy_development(s).expect("bounded regions have a development")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn development_is_extensive_and_idempotent(s in region()) {
        let d = dev(&s);
        prop_assert!(s.is_subset(&d));
        prop_assert_eq!(dev(&d), d);
    }

    #[test]
    fn development_is_monotone(s in region(), t in region()) {
        let big = s.union(&t);
        prop_assert!(dev(&s).is_subset(&dev(&big)));
    }

    #[test]
    fn developments_are_stable_under_intersection(s in region(), t in region()) {
        let meet = dev(&s).intersection(&dev(&t));
        if !meet.is_empty() {
            prop_assert_eq!(dev(&meet), meet);
        }
    }

    #[test]
    fn development_of_a_convex_region_is_convex(s in diamond()) {
        prop_assume!(!s.is_empty() && is_causally_convex(&s));
        prop_assert!(is_causally_convex(&dev(&s)));
    }

    // unions can leave open null slits between pieces, which rasterization fills
    #[test]
    fn futures_and_disjointness_match_a_coarse_lattice(s in diamond(), t in diamond()) {
        let g = LatticeGrid::around(strip(), 20, &[&s, &t]);
        let sm = g.rasterize(&s);
        prop_assert_eq!(g.rasterize(&causal_future(&s)).first_difference(&g.causal_future(&sm)), None);
        prop_assert_eq!(g.rasterize(&causal_past(&s)).first_difference(&g.causal_past(&sm)), None);
        prop_assert_eq!(g.rasterize(&dev(&s)).first_difference(&g.development(&sm)), None);
        prop_assert_eq!(are_causally_disjoint(&s, &t), g.are_causally_disjoint(&sm, &g.rasterize(&t)));
    }
}
