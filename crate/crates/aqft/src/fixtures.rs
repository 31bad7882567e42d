//! Named regions and catalogs used by the test suites and the CLI defaults.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::StarAlgebra;
use crate::catalog::{Catalog, DEFAULT_BOUND};
use crate::geometry::{Rect, Region, Spacetime};
use crate::linalg::{cr, Matrix, C64};
use crate::rational::{parse_q, qi};
use crate::theory::{Theory, TheoryError};

fn rect(m: Spacetime, u0: &str, u1: &str, v0: &str, v1: &str) -> Region {
    let p = |s: &str| parse_q(s).unwrap();
    Region::new(m, [Rect::fin(p(u0), p(u1), p(v0), p(v1))])
}

/// Seeds of the twelve-region strip catalog (lengths in units of the width).
///
/// Three spacelike interior diamonds on `t = 0`, one diamond in the future
/// of `D1`, two boundary triangles (one per boundary line) and a null slab.
/// Closure adds `M` and the three pair unions and the triple union.
pub fn strip_seeds(m: Spacetime) -> Vec<(String, Region)> {
    vec![
        ("D1".into(), rect(m, "-0.6", "-0.4", "0.4", "0.6")),
        ("D2".into(), rect(m, "-0.28", "-0.12", "0.12", "0.28")),
        ("D3".into(), rect(m, "-0.9", "-0.7", "0.7", "0.9")),
        ("D4".into(), rect(m, "-0.1", "0.1", "0.9", "1.1")),
        ("BL".into(), rect(m, "-0.3", "0.3", "-0.3", "0.3")),
        ("BR".into(), rect(m, "-1.3", "-0.7", "0.7", "1.3")),
        ("S".into(), rect(m, "-1.3", "0.3", "-0.3", "1.3")),
    ]
}

/// A boundary triangle `B0` holding two spacelike interior diamonds; closure
/// adds their joint development `W`, the unique maximal interior region of `B0`.
pub fn f1_seeds(m: Spacetime) -> Vec<(String, Region)> {
    vec![
        ("B0".into(), rect(m, "-1/2", "1/2", "-1/2", "1/2")),
        ("V1".into(), rect(m, "-1/4", "-1/20", "1/20", "1/4")),
        ("V2".into(), rect(m, "-1/2", "-3/10", "3/10", "1/2")),
    ]
}

/// A boundary triangle holding two timelike-separated interior diamonds
/// whose causal hull meets the boundary, so no interior region contains both.
pub fn free_product_seeds(m: Spacetime) -> Vec<(String, Region)> {
    vec![
        ("B".into(), rect(m, "-1/2", "1/2", "-1/2", "1/2")),
        ("U1".into(), rect(m, "-3/10", "-1/5", "-1/10", "0")),
        ("U2".into(), rect(m, "0", "1/10", "1/5", "3/10")),
    ]
}

pub fn catalog(seeds: fn(Spacetime) -> Vec<(String, Region)>) -> Arc<Catalog> {
    let m = Spacetime::strip(qi(1));
    Arc::new(Catalog::build(m, &seeds(m), DEFAULT_BOUND).expect("fixture catalog builds"))
}

fn unit_column(a: &StarAlgebra) -> Matrix {
    Matrix::from_columns(a.dim(), &[a.unit()])
}

/// Interior theories on the `f1` catalog, indexed `1..=4`:
/// `C` everywhere; `C^2, C, C^2`; `T_2, C, T_2`; `C^2, C^2, C^2 ⊗ C^2`
/// on `V1, V2, W` respectively.
pub fn f1_interior_theory(k: usize) -> Result<Theory, TheoryError> {
    let cat = catalog(f1_seeds);
    let v1 = cat.index_of("V1").unwrap();
    let v2 = cat.index_of("V2").unwrap();
    let w = cat.index_of("D(V1+V2)").unwrap();
    let objs = vec![v1, v2, w];
    let (a1, a2, aw) = match k {
        1 => (StarAlgebra::complex(), StarAlgebra::complex(), StarAlgebra::complex()),
        2 => (StarAlgebra::diagonal(2), StarAlgebra::complex(), StarAlgebra::diagonal(2)),
        3 => (StarAlgebra::upper_triangular(), StarAlgebra::complex(), StarAlgebra::upper_triangular()),
        4 => (StarAlgebra::diagonal(2), StarAlgebra::diagonal(2), StarAlgebra::diagonal(2).tensor(&StarAlgebra::diagonal(2))),
        _ => panic!("no interior fixture {k}"),
    };
    let m1 = match k {
        4 => Matrix::from_columns(4, &[pattern(4, &[0, 1]), pattern(4, &[2, 3])]),
        _ => Matrix::identity(a1.dim()),
    };
    let m2 = match k {
        4 => Matrix::from_columns(4, &[pattern(4, &[0, 2]), pattern(4, &[1, 3])]),
        _ => unit_column(&aw),
    };
    let algebras = BTreeMap::from([(v1, Arc::new(a1)), (v2, Arc::new(a2)), (w, Arc::new(aw))]);
    let matrices = BTreeMap::from([((v1, w), m1), ((v2, w), m2)]);
    Theory::new(cat, objs, algebras, matrices)
}

fn pattern(n: usize, ones: &[usize]) -> Vec<C64> {
    (0..n).map(|i| if ones.contains(&i) { cr(1.0) } else { cr(0.0) }).collect()
}

/// A theory on all stable regions of `f1` that is not additive at `B0`:
/// `C^2` there, `C` on the interior, unit maps.
pub fn f1_boundary_generator() -> Result<Theory, TheoryError> {
    let cat = catalog(f1_seeds);
    let b0 = cat.index_of("B0").unwrap();
    let objs = cat.localize().objects;
    Theory::from_fn(
        cat,
        objs,
        |v| if v == b0 { StarAlgebra::diagonal(2) } else { StarAlgebra::complex() },
        |_, b| if b == b0 { Matrix::from_columns(2, &[pattern(2, &[0, 1])]) } else { Matrix::identity(1) },
    )
}

/// An additive theory on `f1` with a nonzero counit kernel at `B0`:
/// `C^2` on `W`, `C` elsewhere, and `W → B0` evaluation at the first point.
pub fn f1_evaluation() -> Result<Theory, TheoryError> {
    let cat = catalog(f1_seeds);
    let w = cat.index_of("D(V1+V2)").unwrap();
    let objs = cat.localize().objects;
    Theory::from_fn(
        cat,
        objs,
        |v| if v == w { StarAlgebra::diagonal(2) } else { StarAlgebra::complex() },
        |a, b| {
            if b == w {
                Matrix::from_columns(2, &[pattern(2, &[0, 1])])
            } else if a == w {
                Matrix::from_columns(1, &[pattern(1, &[0]), pattern(1, &[])])
            } else {
                Matrix::identity(1)
            }
        },
    )
}
