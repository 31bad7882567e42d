//! Retarded and advanced Green's operators of the massless field on a null
//! lattice: `G^± f(p) = −½ ∫_{J^∓(p)} f`, evaluated as a midpoint sum over
//! lattice cells (`dt dx = ½ du dv`). The Dirichlet pair on the strip is the
//! free pair applied to the odd, `2a`-periodic image extension of `f`.

use std::f64::consts::SQRT_2;

use super::{Bump, KgError, TestFunction};

/// Nodes `(i, j)` at `u = i h`, `v = j h`; `t = (u + v)/2`, `x = (v − u)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    pub h: f64,
}

impl Lattice {
    pub fn node(&self, i: i64, j: i64) -> (f64, f64) {
        let (u, v) = (i as f64 * self.h, j as f64 * self.h);
        ((u + v) / 2.0, (v - u) / 2.0)
    }

    pub fn cell_mid(&self, i: i64, j: i64) -> (f64, f64) {
        let (u, v) = ((i as f64 + 0.5) * self.h, (j as f64 + 0.5) * self.h);
        ((u + v) / 2.0, (v - u) / 2.0)
    }

    /// Nodes with `t_lo <= t <= t_hi` and `x_lo <= x <= x_hi`.
    pub fn nodes_in(&self, (t_lo, t_hi): (f64, f64), (x_lo, x_hi): (f64, f64)) -> Vec<(i64, i64)> {
        let h = self.h;
        let i_lo = ((t_lo - x_hi) / h).floor() as i64;
        let i_hi = ((t_hi - x_lo) / h).ceil() as i64;
        let j_lo = ((t_lo + x_lo) / h).floor() as i64;
        let j_hi = ((t_hi + x_hi) / h).ceil() as i64;
        let eps = 1e-9 * h;
        let mut out = vec![];
        for i in i_lo..=i_hi {
            for j in j_lo..=j_hi {
                let (t, x) = self.node(i, j);
                if t >= t_lo - eps && t <= t_hi + eps && x >= x_lo - eps && x <= x_hi + eps {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Nodes whose `(t, x)` lies in the closed disk bounding box of the support.
    pub fn nodes_near(&self, f: &TestFunction) -> Vec<(i64, i64)> {
        let mut out = vec![];
        for b in &f.bumps {
            out.extend(self.nodes_in((b.t0 - b.r, b.t0 + b.r), (b.x0 - b.r, b.x0 + b.r)));
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Quadrant sums of one source profile over its cell box.
#[derive(Clone, Debug)]
struct Table {
    i0: i64,
    j0: i64,
    ni: usize,
    nj: usize,
    /// `cum[a (nj + 1) + b] = h² Σ_{i' < i0 + a, j' < j0 + b} f(mid(i', j'))`
    cum: Vec<f64>,
    /// the same with `i' >= i0 + a, j' >= j0 + b`, summed separately so that
    /// empty quadrants give exact zeros
    suf: Vec<f64>,
}

impl Table {
    fn build(lat: &Lattice, b: &Bump, profile: impl Fn(&Bump, f64, f64) -> f64) -> Table {
        let h = lat.h;
        let (uc, vc) = (b.t0 - b.x0, b.t0 + b.x0);
        let rr = b.r * SQRT_2;
        let i0 = ((uc - rr) / h).floor() as i64 - 1;
        let i1 = ((uc + rr) / h).ceil() as i64 + 1;
        let j0 = ((vc - rr) / h).floor() as i64 - 1;
        let j1 = ((vc + rr) / h).ceil() as i64 + 1;
        let (ni, nj) = ((i1 - i0) as usize, (j1 - j0) as usize);
        let w = nj + 1;
        let cells: Vec<f64> = (0..ni * nj)
            .map(|k| {
                let (t, x) = lat.cell_mid(i0 + (k / nj) as i64, j0 + (k % nj) as i64);
                profile(b, t, x) * h * h
            })
            .collect();
        let mut cum = vec![0.0; (ni + 1) * w];
        let mut suf = vec![0.0; (ni + 1) * w];
        for a in 0..ni {
            let mut row = 0.0;
            for bb in 0..nj {
                row += cells[a * nj + bb];
                cum[(a + 1) * w + bb + 1] = cum[a * w + bb + 1] + row;
            }
        }
        for a in (0..ni).rev() {
            let mut row = 0.0;
            for bb in (0..nj).rev() {
                row += cells[a * nj + bb];
                suf[a * w + bb] = suf[(a + 1) * w + bb] + row;
            }
        }
        Table { i0, j0, ni, nj, cum, suf }
    }

    fn at(&self, a: usize, b: usize) -> f64 {
        self.cum[a * (self.nj + 1) + b]
    }

    fn clamp(&self, i: i64, j: i64) -> (usize, usize) {
        ((i - self.i0).clamp(0, self.ni as i64) as usize, (j - self.j0).clamp(0, self.nj as i64) as usize)
    }

    fn past_sum(&self, i: i64, j: i64) -> f64 {
        let (a, b) = self.clamp(i, j);
        self.at(a, b)
    }

    fn future_sum(&self, i: i64, j: i64) -> f64 {
        let (a, b) = self.clamp(i, j);
        self.suf[a * (self.nj + 1) + b]
    }
}

/// `G^± g` for one source, ready for evaluation at lattice nodes.
#[derive(Clone, Debug)]
pub struct GreenField {
    tables: Vec<Table>,
    pub images: usize,
}

impl GreenField {
    pub fn retarded(&self, i: i64, j: i64) -> f64 {
        -0.25 * self.tables.iter().map(|t| t.past_sum(i, j)).sum::<f64>()
    }

    pub fn advanced(&self, i: i64, j: i64) -> f64 {
        -0.25 * self.tables.iter().map(|t| t.future_sum(i, j)).sum::<f64>()
    }

    /// `G = G^+ − G^-`.
    pub fn causal(&self, i: i64, j: i64) -> f64 {
        self.retarded(i, j) - self.advanced(i, j)
    }

    pub fn get(&self, i: i64, j: i64, retarded: bool) -> f64 {
        if retarded {
            self.retarded(i, j)
        } else {
            self.advanced(i, j)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Flavor {
    /// The unique pair of an interior region (free kernels, no boundary).
    Minkowski,
    /// Dirichlet conditions at `x = 0` and `x = width`.
    Dirichlet { width: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenPair {
    pub flavor: Flavor,
    pub lattice: Lattice,
}

impl GreenPair {
    pub fn minkowski(h: f64, mass: f64) -> Result<GreenPair, KgError> {
        if mass != 0.0 {
            return Err(KgError::UnsupportedMass(mass));
        }
        if h.is_nan() || h <= 0.0 {
            return Err(KgError::BadGrid);
        }
        Ok(GreenPair { flavor: Flavor::Minkowski, lattice: Lattice { h } })
    }

    /// Grid `h = width / n`, so both boundary lines are lattice lines.
    pub fn dirichlet(width: f64, n: usize, mass: f64) -> Result<GreenPair, KgError> {
        if mass != 0.0 {
            return Err(KgError::UnsupportedMass(mass));
        }
        if n == 0 || width.is_nan() || width <= 0.0 {
            return Err(KgError::BadGrid);
        }
        Ok(GreenPair { flavor: Flavor::Dirichlet { width }, lattice: Lattice { h: width / n as f64 } })
    }

    pub fn h(&self) -> f64 {
        self.lattice.h
    }

    pub fn width(&self) -> Option<f64> {
        match self.flavor {
            Flavor::Dirichlet { width } => Some(width),
            Flavor::Minkowski => None,
        }
    }

    /// Nodes per strip width (`x = width` is the lattice line `j − i = 2n`).
    pub fn cells_across(&self) -> Option<i64> {
        self.width().map(|w| (w / self.h()).round() as i64)
    }

    /// `⌈t_span / 2a⌉ + 1` image pairs suffice on `t_window`: farther images
    /// sit outside the causal reach of every node of the window.
    pub fn image_count(&self, f: &TestFunction, t_window: (f64, f64)) -> usize {
        match self.flavor {
            Flavor::Minkowski => 0,
            Flavor::Dirichlet { width } => {
                let (lo, hi) = f.time_range();
                let span = (t_window.1 - lo).max(hi - t_window.0).max(0.0);
                (span / (2.0 * width)).ceil() as usize + 1
            }
        }
    }

    /// The sources the free kernels act on: `f` itself, or its odd `2a`-periodic extension.
    pub fn sources(&self, f: &TestFunction, images: usize) -> Result<Vec<Bump>, KgError> {
        match self.flavor {
            Flavor::Minkowski => Ok(f.bumps.clone()),
            Flavor::Dirichlet { width } => {
                let mut out = vec![];
                for b in &f.bumps {
                    if b.x0 - b.r <= 0.0 || b.x0 + b.r >= width {
                        return Err(KgError::SupportTouchesBoundary(format!("bump at (t, x) = ({:.4}, {:.4})", b.t0, b.x0)));
                    }
                    let n = images as i64;
                    for k in -n..=n {
                        let shift = 2.0 * k as f64 * width;
                        out.push(b.translated(0.0, shift));
                        out.push(b.odd_reflection(0.0).translated(0.0, shift));
                    }
                }
                Ok(out)
            }
        }
    }

    /// `G^± f` valid on nodes with `t` in `t_window`.
    pub fn apply(&self, f: &TestFunction, t_window: (f64, f64)) -> Result<GreenField, KgError> {
        self.apply_with_images(f, self.image_count(f, t_window))
    }

    pub fn apply_with_images(&self, f: &TestFunction, images: usize) -> Result<GreenField, KgError> {
        let tables = self.sources(f, images)?.iter().map(|b| Table::build(&self.lattice, b, |b, t, x| b.value(t, x))).collect();
        Ok(GreenField { tables, images })
    }

    /// `G^± (P f)` (massless `P`).
    pub fn apply_to_p(&self, f: &TestFunction, t_window: (f64, f64)) -> Result<GreenField, KgError> {
        let images = self.image_count(f, t_window);
        let tables = self
            .sources(f, images)?
            .iter()
            .map(|b| Table::build(&self.lattice, b, |b, t, x| b.apply_p(t, x, 0.0)))
            .collect();
        Ok(GreenField { tables, images })
    }

    /// Is the node inside the spacetime (the closed strip for Dirichlet)?
    pub fn node_in_spacetime(&self, i: i64, j: i64) -> bool {
        match self.cells_across() {
            None => true,
            Some(n) => (0..=2 * n).contains(&(j - i)),
        }
    }
}

/// `∫ w · F` over lattice nodes, with `dt dx = ½ h²` per node.
pub fn node_integral(lat: &Lattice, w: &TestFunction, field: impl Fn(i64, i64) -> f64, keep: impl Fn(i64, i64) -> bool) -> f64 {
    let half_h2 = 0.5 * lat.h * lat.h;
    lat.nodes_near(w)
        .into_iter()
        .filter(|&(i, j)| keep(i, j))
        .map(|(i, j)| {
            let (t, x) = lat.node(i, j);
            let wv = w.value(t, x);
            if wv == 0.0 {
                0.0
            } else {
                wv * field(i, j) * half_h2
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deep_future_value_is_minus_half() {
        let g = GreenPair::minkowski(0.01, 0.0).unwrap();
        let f = TestFunction::single(Bump::unit(0.0, 0.0, 0.2));
        let field = g.apply(&f, (-1.0, 2.0)).unwrap();
        // node at t = 1, x = 0: u = v = 1 = 100 h
        let v = field.retarded(100, 100);
        assert!((v + 0.5).abs() < 1e-4, "{v}");
        assert_eq!(field.advanced(100, 100), 0.0);
        assert_eq!(field.retarded(-100, -100), 0.0);
        assert!((field.advanced(-100, -100) + 0.5).abs() < 1e-4);
        // spacelike to the support
        assert_eq!(field.retarded(-100, 100), 0.0);
    }

    #[test]
    fn images_vanish_on_both_boundaries() {
        let g = GreenPair::dirichlet(std::f64::consts::PI, 100, 0.0).unwrap();
        let f = TestFunction::single(Bump::unit(0.0, 1.0, 0.3));
        let field = g.apply(&f, (-6.0, 6.0)).unwrap();
        for i in -150..150 {
            assert!(field.retarded(i, i).abs() < 1e-13);
            assert!(field.advanced(i, i + 200).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_mass_and_boundary_support() {
        assert_eq!(GreenPair::minkowski(0.1, 1.0), Err(KgError::UnsupportedMass(1.0)));
        let g = GreenPair::dirichlet(1.0, 10, 0.0).unwrap();
        let f = TestFunction::single(Bump::unit(0.0, 0.05, 0.1));
        assert!(matches!(g.apply(&f, (0.0, 1.0)), Err(KgError::SupportTouchesBoundary(_))));
    }
}
