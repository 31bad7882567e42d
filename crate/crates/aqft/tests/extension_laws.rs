use aqft::algebra::presented::letter;
use aqft::algebra::StarAlgebra;
use aqft::extension::{characterize, counit, ext_theory, interior_objects, materialize, unit_component, ExtTheory};
use aqft::fixtures::{catalog, f1_boundary_generator, f1_evaluation, f1_interior_theory, free_product_seeds};
use aqft::linalg::Matrix;
use aqft::theory::{PresentedTheory, Theory, TheoryMorphism};

fn ext_of(a: &Theory) -> ExtTheory {
    ext_theory(&PresentedTheory::from_theory(a)).unwrap()
}

#[test]
fn extensions_of_fixtures_satisfy_causality() {
    for k in 1..=4 {
        let ext = ext_of(&f1_interior_theory(k).unwrap());
        assert!(ext.theory.check_causality(3).passed, "A{k}");
        let (mat, _) = materialize(&ext, 2).unwrap();
        assert!(mat.check_causality().passed, "A{k}");
        assert!(mat.check_functoriality().passed, "A{k}");
    }
    let fp = catalog(free_product_seeds);
    for alg in [StarAlgebra::diagonal(2), StarAlgebra::upper_triangular()] {
        let a = Theory::constant(fp.clone(), interior_objects(&fp), alg).unwrap();
        assert!(ext_of(&a).theory.check_causality(3).passed);
    }
}

#[test]
fn unit_is_natural_and_satisfies_the_first_triangle_identity() {
    for k in 1..=4 {
        let a = f1_interior_theory(k).unwrap();
        let ext = ext_of(&a);
        let (mat, truncs) = materialize(&ext, 2).unwrap();
        let eta = TheoryMorphism {
            components: a.objects.iter().map(|&u| (u, unit_component(&ext, &a, &mat, &truncs, u).unwrap())).collect(),
        };
        let res = mat.restrict(&a.objects).unwrap();
        assert!(eta.check_naturality(&a, &res).passed, "A{k}");
        // ε_{ext A} ∘ ext η_A sends each generator [ι, e] of ext A(V) to ext A(ι)(η e)
        for &v in &mat.objects {
            for &u in &a.objects {
                if !a.catalog.leq(u, v) {
                    continue;
                }
                let eta_u = &eta.components[&u];
                for j in 0..a.algebra(u).dim() {
                    let via = mat.map(u, v).apply(&eta_u.m.column(j));
                    let l = ext.layouts[&v].letter(u, j).unwrap();
                    let direct = truncs[&v].coords(&letter(l)).unwrap();
                    let diff = via.iter().zip(&direct).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                    assert!(diff < 1e-12, "A{k} at {} from {}", a.name(v), a.name(u));
                }
            }
        }
    }
}

#[test]
fn counit_is_natural_and_satisfies_the_second_triangle_identity() {
    for b in [f1_evaluation().unwrap(), f1_boundary_generator().unwrap()] {
        let (ext_b, eps) = counit(&b, 2).unwrap();
        assert!(eps.check_naturality(&ext_b, &b).passed);
        let res = b.restrict(&interior_objects(&b.catalog)).unwrap();
        let ext = ext_of(&res);
        let (mat, truncs) = materialize(&ext, 2).unwrap();
        for &u in &res.objects {
            let eta = unit_component(&ext, &res, &mat, &truncs, u).unwrap();
            let id = eta.then(&eps.components[&u]);
            assert!(id.m.max_abs_diff(&Matrix::identity(res.algebra(u).dim())) < 1e-12, "{}", res.name(u));
        }
    }
}

#[test]
fn counit_kernel_is_trivial_on_the_interior() {
    let mut theories = vec![f1_evaluation().unwrap(), f1_boundary_generator().unwrap()];
    for k in 1..=4 {
        theories.push(materialize(&ext_of(&f1_interior_theory(k).unwrap()), 2).unwrap().0);
    }
    for b in &theories {
        assert!(characterize(b, 2).unwrap().kernel_trivial_on_interior);
    }
}
