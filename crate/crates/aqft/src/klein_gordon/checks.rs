//! Numerical checks of the Green's operator axioms and of `τ`.
//!
//! Every residual is measured relative to the natural size of the quantity
//! it perturbs (`sup |f|` for `P G f − f`, the L¹ norm for field values,
//! `‖f‖₁ ‖g‖₁` for pairings), so one dimensionless tolerance
//! `tol_quad = 10 h² · QUAD_SCALE` covers all of them.

use serde::{Deserialize, Serialize};

use super::green::{node_integral, GreenPair};
use super::{Bump, KgError, TestFunction};

/// Error constant of the midpoint lattice quadrature for the bump family used
/// here (radii `>= 0.3`), in units of `1/length²`; see the calibration test.
pub const QUAD_SCALE: f64 = 10.0;

pub fn tol_quad(h: f64) -> f64 {
    10.0 * h * h * QUAD_SCALE
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GreenResiduals {
    /// `max |P G^± f − f| / sup |f|`
    pub p_after_g: f64,
    /// `max |G^± P f − f| / sup |f|`
    pub g_after_p: f64,
    /// nodes where `G^± f ≠ 0` outside `J^±(supp f)` widened by one cell
    pub support_violations: usize,
    /// `|∫ G^+(f) g − ∫ f G^-(g)| / (‖f‖₁ ‖g‖₁)`
    pub adjoint_defect: f64,
    /// `max |G^± f|` on `∂M`, over `‖f‖₁` (zero for the free pair)
    pub boundary_trace: f64,
    pub nodes: usize,
}

impl GreenResiduals {
    pub fn worst(&self) -> f64 {
        self.p_after_g.max(self.g_after_p).max(self.adjoint_defect).max(self.boundary_trace)
    }

    pub fn merge(&mut self, o: &GreenResiduals) {
        self.p_after_g = self.p_after_g.max(o.p_after_g);
        self.g_after_p = self.g_after_p.max(o.g_after_p);
        self.support_violations += o.support_violations;
        self.adjoint_defect = self.adjoint_defect.max(o.adjoint_defect);
        self.boundary_trace = self.boundary_trace.max(o.boundary_trace);
        self.nodes += o.nodes;
    }
}

/// Window `[t0 − T, t0 + T]` around `f`, full strip width (or `±(T + r)` about `x0`).
fn window(g: &GreenPair, f: &TestFunction, t_half: f64) -> ((f64, f64), (f64, f64)) {
    let (lo, hi) = f.time_range();
    let tw = (lo - t_half, hi + t_half);
    let xw = match g.width() {
        Some(w) => (0.0, w),
        None => {
            let xl = f.bumps.iter().map(|b| b.x0 - b.r).fold(f64::INFINITY, f64::min);
            let xh = f.bumps.iter().map(|b| b.x0 + b.r).fold(f64::NEG_INFINITY, f64::max);
            (xl - t_half, xh + t_half)
        }
    };
    (tw, xw)
}

/// Axioms (i)-(iii), adjoint-relatedness against `partner`, and the boundary trace.
pub fn green_residuals(g: &GreenPair, f: &TestFunction, partner: &TestFunction, t_half: f64) -> Result<GreenResiduals, KgError> {
    let lat = g.lattice;
    let h = lat.h;
    let (tw, xw) = window(g, f, t_half);
    let field = g.apply(f, tw)?;
    let pfield = g.apply_to_p(f, tw)?;
    let sup = f.sup_bound();
    let l1 = f.l1_bound();
    let across = g.cells_across();
    let mut out = GreenResiduals::default();
    let nodes = lat.nodes_in(tw, xw);
    out.nodes = nodes.len();
    for &(i, j) in &nodes {
        let (t, x) = lat.node(i, j);
        let fv = f.value(t, x);
        let inner = match g.width() {
            Some(w) => x >= h - 1e-12 && x <= w - h + 1e-12,
            None => true,
        };
        for retarded in [true, false] {
            let gv = field.get(i, j, retarded);
            if inner {
                let s = field.get(i + 1, j + 1, retarded) + field.get(i - 1, j - 1, retarded)
                    - field.get(i - 1, j + 1, retarded)
                    - field.get(i + 1, j - 1, retarded);
                out.p_after_g = out.p_after_g.max((-s / (h * h) - fv).abs() / sup);
            }
            out.g_after_p = out.g_after_p.max((pfield.get(i, j, retarded) - fv).abs() / sup);
            if gv != 0.0 && !f.in_causal_shadow(t, x, retarded, h) {
                out.support_violations += 1;
            }
            if let Some(n) = across {
                if j - i == 0 || j - i == 2 * n {
                    out.boundary_trace = out.boundary_trace.max(gv.abs() / l1);
                }
            }
        }
    }
    let (pw, _) = window(g, partner, 0.0);
    let pfield_partner = g.apply(partner, (pw.0.min(tw.0), pw.1.max(tw.1)))?;
    let inside = |i: i64, j: i64| g.node_in_spacetime(i, j);
    let lhs = node_integral(&lat, partner, |i, j| field.retarded(i, j), inside);
    let rhs = node_integral(&lat, f, |i, j| pfield_partner.advanced(i, j), inside);
    out.adjoint_defect = (lhs - rhs).abs() / (l1 * partner.l1_bound());
    Ok(out)
}

/// `max |G_D^± f − G_M^± f| / ‖f‖₁` over the nodes of `nodes`.
pub fn dirichlet_minkowski_gap(gd: &GreenPair, gm: &GreenPair, f: &TestFunction, nodes: &[(i64, i64)]) -> Result<f64, KgError> {
    let (lo, hi) = nodes.iter().map(|&(i, j)| gd.lattice.node(i, j).0).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), t| (a.min(t), b.max(t)));
    let fd = gd.apply(f, (lo, hi))?;
    let fm = gm.apply(f, (lo, hi))?;
    let l1 = f.l1_bound();
    let mut worst: f64 = 0.0;
    for &(i, j) in nodes {
        for r in [true, false] {
            worst = worst.max((fd.get(i, j, r) - fm.get(i, j, r)).abs() / l1);
        }
    }
    Ok(worst)
}

/// `τ(f, g) = ∫ f (G^+ − G^-) g`, integrated over the nodes accepted by `keep`.
pub fn tau(g: &GreenPair, f: &TestFunction, gg: &TestFunction, keep: impl Fn(i64, i64) -> bool) -> Result<f64, KgError> {
    let (lo, hi) = f.time_range();
    let field = g.apply(gg, (lo, hi))?;
    Ok(node_integral(&g.lattice, f, |i, j| field.causal(i, j), |i, j| g.node_in_spacetime(i, j) && keep(i, j)))
}

/// `τ` between a unit bump at `(0, x)` and one at `(T, x)` for shrinking radii (free pair).
pub fn timelike_tau_sequence(g: &GreenPair, x: f64, big_t: f64, radii: &[f64]) -> Result<Vec<f64>, KgError> {
    radii
        .iter()
        .map(|&r| {
            let f = TestFunction::single(Bump::unit(0.0, x, r));
            let gg = TestFunction::single(Bump::unit(big_t, x, r));
            tau(g, &f, &gg, |_, _| true)
        })
        .collect()
}

/// Random unit bumps strictly inside the strip, radii in `[0.3, 0.6] · width/π`.
pub fn random_bumps(rng: &mut impl rand::Rng, width: f64, count: usize) -> Vec<Bump> {
    let s = width / std::f64::consts::PI;
    (0..count)
        .map(|_| {
            let r = s * rng.random_range(0.3..0.6);
            let x0 = rng.random_range(r + 0.05 * s..width - r - 0.05 * s);
            let t0 = rng.random_range(-0.5..0.5) * s;
            Bump::unit(t0, x0, r)
        })
        .collect()
}

/// Lattice nodes in the closed strip with `|t − t0| + |x − x0| < d`.
pub fn diamond_nodes(g: &GreenPair, (t0, x0, d): (f64, f64, f64)) -> Vec<(i64, i64)> {
    let lat = g.lattice;
    lat.nodes_in((t0 - d, t0 + d), (x0 - d, x0 + d))
        .into_iter()
        .filter(|&(i, j)| {
            let (t, x) = lat.node(i, j);
            (t - t0).abs() + (x - x0).abs() < d && g.node_in_spacetime(i, j)
        })
        .collect()
}

/// `(gap on the diamond, gap on the wider diamond)` between the Dirichlet and
/// free pairs; the first diamond must avoid `∂M`, the second should not.
pub fn uniqueness_gaps(
    gd: &GreenPair,
    gm: &GreenPair,
    f: &TestFunction,
    inner: (f64, f64, f64),
    outer: (f64, f64, f64),
) -> Result<(f64, f64), KgError> {
    let a = gd.width().ok_or(KgError::BadGrid)?;
    if inner.1 - inner.2 < 0.0 || inner.1 + inner.2 > a {
        return Err(KgError::SupportTouchesBoundary(format!("diamond ({}, {}, {})", inner.0, inner.1, inner.2)));
    }
    let gin = dirichlet_minkowski_gap(gd, gm, f, &diamond_nodes(gd, inner))?;
    let gout = dirichlet_minkowski_gap(gd, gm, f, &diamond_nodes(gd, outer))?;
    Ok((gin, gout))
}

/// `max |G^± f|_N − G^± f|_{2N}| / ‖f‖₁` on the strip over `t_window`, with
/// `N` the image count the window needs.
pub fn image_doubling_defect(g: &GreenPair, f: &TestFunction, t_window: (f64, f64)) -> Result<f64, KgError> {
    let a = g.width().ok_or(KgError::BadGrid)?;
    let n = g.image_count(f, t_window);
    let once = g.apply_with_images(f, n)?;
    let twice = g.apply_with_images(f, 2 * n)?;
    let l1 = f.l1_bound();
    let mut worst: f64 = 0.0;
    for (i, j) in g.lattice.nodes_in(t_window, (0.0, a)) {
        for r in [true, false] {
            worst = worst.max((once.get(i, j, r) - twice.get(i, j, r)).abs() / l1);
        }
    }
    Ok(worst)
}
