use std::sync::Arc;

use aqft::algebra::presented::{letter, unit_poly, Poly};
use aqft::algebra::{ideal_generated_by, morphism_kernel, quotient_by_ideal, CcrAlgebra, StarAlgebra, SymplecticSpace};
use aqft::linalg::{c, cr, C64};
use proptest::prelude::*;

fn algebra() -> impl Strategy<Value = StarAlgebra> {
    prop_oneof![
        (1usize..=4).prop_map(StarAlgebra::diagonal),
        Just(StarAlgebra::matrices(2)),
        Just(StarAlgebra::upper_triangular()),
        Just(StarAlgebra::diagonal(2).tensor(&StarAlgebra::upper_triangular())),
    ]
}

fn antisymmetric(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(-8i32..=8, n * n).prop_map(move |xs| {
        let mut t = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                t[i][j] = xs[i * n + j] as f64 / 4.0;
                t[j][i] = -t[i][j];
            }
        }
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quotient_dimensions_add_up(a in algebra(), seed in prop::collection::vec(-1i32..=1, 16), count in 0usize..=2) {
        let a = Arc::new(a);
        let n = a.dim();
        let gens: Vec<Vec<C64>> = (0..count).map(|g| (0..n).map(|i| cr(seed[(g * n + i) % 16] as f64)).collect()).collect();
        let ideal = ideal_generated_by(&a, &gens);
        let (q, pi) = quotient_by_ideal(&ideal).unwrap();
        prop_assert_eq!(a.dim(), ideal.dim() + q.dim());
        prop_assert!(pi.is_surjective());
        prop_assert_eq!(morphism_kernel(&pi).unwrap().dim(), ideal.dim());
        prop_assert!(q.check_axioms().is_ok());
    }

    #[test]
    fn ccr_commutators_are_central_scalars(t in (2usize..=4).prop_flat_map(antisymmetric)) {
        let n = t.len();
        let labels = (0..n).map(|i| format!("f{i}")).collect();
        let a = CcrAlgebra::new(SymplecticSpace::new(labels, t.clone()).unwrap(), 4);
        for i in 0..n {
            for j in 0..n {
                let comm = a.commutator(&letter(i as u32), &letter(j as u32)).unwrap();
                let want: Poly = if t[i][j] == 0.0 { Poly::new() } else { Poly::from([(vec![], c(0.0, t[i][j]))]) };
                prop_assert_eq!(&comm, &want);
                for k in 0..n {
                    let outer = a.commutator(&comm, &letter(k as u32)).unwrap();
                    prop_assert!(outer.is_empty());
                }
            }
        }
        let unit = a.commutator(&unit_poly(), &letter(0)).unwrap();
        prop_assert!(unit.is_empty());
    }

    #[test]
    fn tensor_products_are_star_algebras(a in algebra(), b in algebra()) {
        prop_assume!(a.dim() * b.dim() <= 16);
        let ab = a.tensor(&b);
        prop_assert_eq!(ab.dim(), a.dim() * b.dim());
        prop_assert!(ab.check_axioms().is_ok());
        prop_assert_eq!(ab.is_commutative(), a.is_commutative() && b.is_commutative());
    }
}
