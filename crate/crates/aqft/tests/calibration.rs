//! Measures the constant in `tol_quad(h) = 10 h² QUAD_SCALE` on the seeded
//! random bumps and checks it stays below the pinned value on two grids.

use aqft::klein_gordon::checks::{green_residuals, random_bumps, GreenResiduals, QUAD_SCALE};
use aqft::klein_gordon::{GreenPair, TestFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const A: f64 = std::f64::consts::PI;

fn measured(n: usize) -> f64 {
    let h = A / n as f64;
    let bumps = random_bumps(&mut ChaCha8Rng::seed_from_u64(7), A, 10);
    let mut worst: f64 = 0.0;
    for g in [GreenPair::dirichlet(A, n, 0.0).unwrap(), GreenPair::minkowski(h, 0.0).unwrap()] {
        let mut all = GreenResiduals::default();
        for k in 0..bumps.len() {
            let partner = TestFunction::single(bumps[(k + 1) % bumps.len()].translated(1.5, 0.0));
            all.merge(&green_residuals(&g, &TestFunction::single(bumps[k]), &partner, A).unwrap());
        }
        worst = worst.max(all.p_after_g.max(all.g_after_p).max(all.adjoint_defect) / (10.0 * h * h));
    }
    worst
}

#[test]
fn quadrature_constant_stays_below_the_pinned_scale() {
    let cs: Vec<f64> = [50, 100].iter().map(|&n| measured(n)).collect();
    for (n, c) in [50, 100].iter().zip(&cs) {
        println!("n = {n}: residual / (10 h²) = {c:.4}");
        assert!(*c <= QUAD_SCALE, "n = {n}: {c}");
    }
    // second order: halving h quarters the residual, so the constant barely moves
    let ratio = cs[0] / cs[1];
    assert!((0.5..2.0).contains(&ratio), "{ratio}");
}
