use aqft::klein_gordon::checks::{green_residuals, image_doubling_defect, tau, tol_quad, uniqueness_gaps};
use aqft::klein_gordon::{Bump, GreenPair, TestFunction};
use proptest::prelude::*;

const A: f64 = std::f64::consts::PI;
const N: usize = 100;

/// A unit bump inside the strip, clear of both boundary lines.
fn bump() -> impl Strategy<Value = Bump> {
    (0.2f64..0.6, 0.0f64..1.0, -0.5f64..0.5).prop_map(|(r, s, t)| {
        let x = r + 0.05 + s * (A - 2.0 * r - 0.1);
        Bump::unit(t, x, r)
    })
}

fn pairs() -> (GreenPair, GreenPair) {
    (GreenPair::dirichlet(A, N, 0.0).unwrap(), GreenPair::minkowski(A / N as f64, 0.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn green_axioms_hold_for_random_bumps(f in bump(), g in bump()) {
        let (gd, gm) = pairs();
        let tol = tol_quad(gd.h());
        let partner = TestFunction::single(g.translated(1.5, 0.0));
        for pair in [&gd, &gm] {
            let r = green_residuals(pair, &TestFunction::single(f), &partner, A).unwrap();
            prop_assert!(r.p_after_g <= tol && r.g_after_p <= tol, "{:?}", r);
            prop_assert_eq!(r.support_violations, 0);
            prop_assert!(r.adjoint_defect <= tol);
            prop_assert!(r.boundary_trace <= tol);
        }
    }

    #[test]
    fn tau_is_antisymmetric(f in bump(), g in bump(), dt in -2.0f64..2.0) {
        let (gd, _) = pairs();
        let (f, g) = (TestFunction::single(f), TestFunction::single(g.translated(dt, 0.0)));
        let x = tau(&gd, &f, &g, |_, _| true).unwrap();
        let y = tau(&gd, &g, &f, |_, _| true).unwrap();
        prop_assert!((x + y).abs() <= tol_quad(gd.h()));
    }

    #[test]
    fn dirichlet_and_free_agree_away_from_the_boundary(f in bump()) {
        let (gd, gm) = pairs();
        let inner = (f.t0, f.x0, f.x0.min(A - f.x0));
        let (gin, _) = uniqueness_gaps(&gd, &gm, &TestFunction::single(f), inner, (f.t0 + A, f.x0, A)).unwrap();
        prop_assert!(gin <= tol_quad(gd.h()));
    }

    #[test]
    fn doubling_the_images_changes_nothing(f in bump()) {
        let (gd, _) = pairs();
        let d = image_doubling_defect(&gd, &TestFunction::single(f), (f.t0 - 2.0 * A, f.t0 + 2.0 * A)).unwrap();
        prop_assert!(d <= 1e-12);
    }
}
