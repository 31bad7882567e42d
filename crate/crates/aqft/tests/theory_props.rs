use std::collections::BTreeMap;

use aqft::algebra::Ideal;
use aqft::extension::{counit, ext_theory, materialize};
use aqft::fixtures::{f1_boundary_generator, f1_evaluation, f1_interior_theory};
use aqft::linalg::cr;
use aqft::theory::{quotient_theory, IdealFunctor, PresentedTheory, Theory};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixtures() -> Vec<Theory> {
    let mut out: Vec<Theory> = (1..=4).map(|k| f1_interior_theory(k).unwrap()).collect();
    out.push(f1_boundary_generator().unwrap());
    out.push(f1_evaluation().unwrap());
    out
}

fn verdicts(t: &Theory) -> Vec<bool> {
    let mut v = vec![t.check_functoriality().passed, t.check_causality().passed, t.check_time_slice().passed];
    v.extend(t.objects.iter().map(|&o| t.is_additive_at(o)));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn axiom_checks_are_invariant_under_isomorphism(which in 0usize..6, seed in any::<u64>()) {
        let t = &fixtures()[which];
        let (c, iso) = t.conjugate(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(iso.is_iso());
        prop_assert!(iso.check_naturality(t, &c).passed);
        prop_assert_eq!(verdicts(t), verdicts(&c));
    }
}

#[test]
fn quotients_of_additive_theories_are_additive() {
    for k in 1..=4 {
        let a = f1_interior_theory(k).unwrap();
        let ext = ext_theory(&PresentedTheory::from_theory(&a)).unwrap();
        let (mat, _) = materialize(&ext, 2).unwrap();
        assert!(mat.is_additive(), "ext A{k}");
        let (q, _) = quotient_theory(&mat, &IdealFunctor::zero(&mat)).unwrap();
        assert!(q.is_additive(), "ext A{k} / 0");
    }
    let b = f1_evaluation().unwrap();
    assert!(b.is_additive());
    let (ext, eps) = counit(&b, 2).unwrap();
    let ker = IdealFunctor::kernel(&eps, &ext).unwrap();
    assert!(ker.is_trivial_on_interior(&b.catalog));
    assert!(quotient_theory(&ext, &ker).unwrap().0.is_additive());

    // the point of W that B0 does not evaluate spans an ideal compatible with every map
    let w = b.catalog.index_of("D(V1+V2)").unwrap();
    let mut comps: BTreeMap<usize, Ideal> = b.objects.iter().map(|&o| (o, Ideal::zero(b.algebra(o).clone()))).collect();
    comps.insert(w, Ideal::new(b.algebra(w).clone(), &[vec![cr(0.0), cr(1.0)]]).unwrap());
    let ideal = IdealFunctor::new(&b, comps).unwrap();
    let (q, pi) = quotient_theory(&b, &ideal).unwrap();
    assert_eq!(q.algebra(w).dim(), 1);
    assert!(q.is_additive());
    assert!(pi.check_naturality(&b, &q).passed);
}
