//! Brute-force oracle on a `(t, x)` grid of spacing `h = 1/n`.
//!
//! Cell `(i, j)` has center `t = t_lo + (i + 1/2) h`, `x = (j + 1/2) h`, with
//! `t_lo ∈ h/2 + hZ`. In null coordinates the centers then sit at odd
//! multiples of `h/2`, so they never lie on a bound that is a multiple of
//! `h`. A causal step goes from `(i, j)` to `(i + 1, j')` with `|j' − j| <= 1`.

use super::{Kind, Region, Spacetime};
use crate::rational::{qi, Bound, Q};

#[derive(Clone, Debug)]
pub struct LatticeGrid {
    m: Spacetime,
    n: i64,
    m0: i64,
    pub nt: usize,
    pub nx: usize,
}

/// Boolean occupancy per cell of a [`LatticeGrid`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMask {
    pub nt: usize,
    pub nx: usize,
    cells: Vec<bool>,
}

impl LatticeMask {
    fn new(nt: usize, nx: usize) -> Self {
        LatticeMask { nt, nx, cells: vec![false; nt * nx] }
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.nx + j]
    }

    fn set(&mut self, i: usize, j: usize, b: bool) {
        self.cells[i * self.nx + j] = b;
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn and(&self, o: &LatticeMask) -> LatticeMask {
        self.zip(o, |a, b| a && b)
    }

    pub fn or(&self, o: &LatticeMask) -> LatticeMask {
        self.zip(o, |a, b| a || b)
    }

    fn zip(&self, o: &LatticeMask, f: impl Fn(bool, bool) -> bool) -> LatticeMask {
        LatticeMask {
            nt: self.nt,
            nx: self.nx,
            cells: self.cells.iter().zip(&o.cells).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn is_subset(&self, o: &LatticeMask) -> bool {
        self.cells.iter().zip(&o.cells).all(|(&a, &b)| !a || b)
    }

    /// First cell where the masks differ.
    pub fn first_difference(&self, o: &LatticeMask) -> Option<(usize, usize)> {
        self.cells
            .iter()
            .zip(&o.cells)
            .position(|(a, b)| a != b)
            .map(|p| (p / self.nx, p % self.nx))
    }
}

fn thresholds(b: Bound, n2: i64, lower: bool) -> i64 {
    const BIG: i64 = i64::MAX / 8;
    match b {
        Bound::NegInf => -BIG,
        Bound::PosInf => BIG,
        Bound::Fin(x) => {
            let y = x * qi(n2);
            if lower {
                y.floor().to_integer()
            } else {
                y.ceil().to_integer()
            }
        }
    }
}

impl LatticeGrid {
    /// Grid covering `t_lo <= t <= t_hi` (rounded outward) and `0 <= x <= x_hi`.
    /// `x_hi` is ignored when `M` is spatially bounded.
    pub fn new(m: Spacetime, n: i64, t_lo: Q, t_hi: Q, x_hi: Q) -> LatticeGrid {
        let nq = qi(n);
        let m0 = (t_lo * nq).floor().to_integer() - 1;
        let nt = ((t_hi * nq).ceil().to_integer() - m0).max(1) as usize;
        let nx = match m.kind {
            Kind::Strip | Kind::DiamondWithEdge => n,
            Kind::HalfPlane => (x_hi * nq).ceil().to_integer().max(1),
        } as usize;
        LatticeGrid { m, n, m0, nt, nx }
    }

    /// Window of one causal diameter beyond the time extent of the regions.
    pub fn around(m: Spacetime, n: i64, regions: &[&Region]) -> LatticeGrid {
        let mut lo = qi(-1);
        let mut hi = qi(1);
        let mut xh = qi(1);
        for r in regions {
            if let Some((a, b)) = r.time_extent() {
                if let Some(a) = a.fin() {
                    lo = lo.min(a);
                }
                if let Some(b) = b.fin() {
                    hi = hi.max(b);
                }
            }
            if let Some(Bound::Fin(x)) = r.x_sup() {
                xh = xh.max(x);
            }
        }
        let pad = match m.kind {
            Kind::HalfPlane => xh + qi(2),
            _ => qi(3),
        };
        match m.kind {
            Kind::DiamondWithEdge => LatticeGrid::new(m, n, qi(-1), qi(1), qi(1)),
            _ => LatticeGrid::new(m, n, lo - pad, hi + pad, xh + qi(2)),
        }
    }

    pub fn spacing(&self) -> Q {
        Q::new(1, self.n)
    }

    /// Null coordinates of the center in units of `h/2`.
    fn center_uv(&self, i: usize, j: usize) -> (i64, i64) {
        let (i, j) = (i as i64, j as i64);
        (2 * (self.m0 + i - j) + 1, 2 * (self.m0 + i + j) + 3)
    }

    pub fn center_tx(&self, i: usize, j: usize) -> (Q, Q) {
        let h = self.spacing();
        (h * qi(self.m0 + i as i64 + 1), h * Q::new(2 * j as i64 + 1, 2))
    }

    pub fn in_m(&self, i: usize, j: usize) -> bool {
        match self.m.kind {
            Kind::DiamondWithEdge => {
                let (u, v) = self.center_uv(i, j);
                u > -2 * self.n && v < 2 * self.n
            }
            _ => true,
        }
    }

    fn mask_from(&self, f: impl Fn(usize, usize) -> bool) -> LatticeMask {
        let mut out = LatticeMask::new(self.nt, self.nx);
        for i in 0..self.nt {
            for j in 0..self.nx {
                if self.in_m(i, j) && f(i, j) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    pub fn rasterize(&self, r: &Region) -> LatticeMask {
        let n2 = 2 * self.n;
        let rs: Vec<[i64; 4]> = r
            .rects()
            .iter()
            .map(|x| {
                [
                    thresholds(x.u0, n2, true),
                    thresholds(x.u1, n2, false),
                    thresholds(x.v0, n2, true),
                    thresholds(x.v1, n2, false),
                ]
            })
            .collect();
        self.mask_from(|i, j| {
            let (u, v) = self.center_uv(i, j);
            rs.iter().any(|t| t[0] < u && u < t[1] && t[2] < v && v < t[3])
        })
    }

    /// Breadth-first closure under causal steps, forward or backward in time.
    fn sweep(&self, s: &LatticeMask, forward: bool) -> LatticeMask {
        let mut out = s.clone();
        let rows: Vec<usize> = if forward {
            (1..self.nt).collect()
        } else {
            (0..self.nt.saturating_sub(1)).rev().collect()
        };
        for i in rows {
            let prev = if forward { i - 1 } else { i + 1 };
            for j in 0..self.nx {
                if out.get(i, j) || !self.in_m(i, j) {
                    continue;
                }
                let lo = j.saturating_sub(1);
                let hi = (j + 1).min(self.nx - 1);
                if (lo..=hi).any(|jj| self.in_m(prev, jj) && out.get(prev, jj)) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    pub fn causal_future(&self, s: &LatticeMask) -> LatticeMask {
        self.sweep(s, true)
    }

    pub fn causal_past(&self, s: &LatticeMask) -> LatticeMask {
        self.sweep(s, false)
    }

    /// Cells whose closed neighborhood (within `M` and the window) lies in the mask.
    pub fn neighborhood_interior(&self, s: &LatticeMask) -> LatticeMask {
        self.mask_from(|i, j| {
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if jj < 0 || jj >= self.nx as i64 {
                        continue;
                    }
                    if ii < 0 || ii >= self.nt as i64 {
                        return false;
                    }
                    let (ii, jj) = (ii as usize, jj as usize);
                    if self.in_m(ii, jj) && !s.get(ii, jj) {
                        return false;
                    }
                }
            }
            true
        })
    }

    fn development_one_sided(&self, s: &LatticeMask, future: bool) -> LatticeMask {
        let mut out = LatticeMask::new(self.nt, self.nx);
        let rows: Vec<usize> = if future {
            (0..self.nt).collect()
        } else {
            (0..self.nt).rev().collect()
        };
        let edge = if future { 0 } else { self.nt - 1 };
        for i in rows {
            for j in 0..self.nx {
                if !self.in_m(i, j) {
                    continue;
                }
                if s.get(i, j) {
                    out.set(i, j, true);
                    continue;
                }
                if i == edge {
                    continue;
                }
                let prev = if future { i - 1 } else { i + 1 };
                let mut ok = true;
                for dj in -1i64..=1 {
                    let jj = j as i64 + dj;
                    if jj < 0 {
                        continue;
                    }
                    if jj >= self.nx as i64 {
                        if self.m.kind == Kind::HalfPlane {
                            ok = false;
                        }
                        continue;
                    }
                    let jj = jj as usize;
                    // outside the cut diamond only through its removed null edge
                    if !self.in_m(prev, jj) || !out.get(prev, jj) {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    /// Fixpoint `D+ ∪ D−`; leaving the window in the relevant time direction
    /// (or through the far side of the half-plane) counts as escaping.
    pub fn development(&self, s: &LatticeMask) -> LatticeMask {
        self.development_one_sided(s, true)
            .or(&self.development_one_sided(s, false))
    }

    pub fn future_development(&self, s: &LatticeMask) -> LatticeMask {
        self.development_one_sided(s, true)
    }

    pub fn is_causally_convex(&self, s: &LatticeMask) -> bool {
        self.causal_future(s).and(&self.causal_past(s)).is_subset(s)
    }

    pub fn are_causally_disjoint(&self, s: &LatticeMask, s2: &LatticeMask) -> bool {
        self.causal_future(s).or(&self.causal_past(s)).and(s2).count() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::NullPoint;
    use crate::rational::q;

    #[test]
    fn raster_matches_exact_membership() {
        let m = Spacetime::strip(qi(1));
        let d = Region::diamond(m, qi(0), q(1, 2), q(1, 10));
        let g = LatticeGrid::new(m, 50, qi(-1), qi(1), qi(1));
        let mask = g.rasterize(&d);
        for i in 0..g.nt {
            for j in 0..g.nx {
                let (t, x) = g.center_tx(i, j);
                assert_eq!(mask.get(i, j), d.contains(NullPoint::from_tx(t, x)));
            }
        }
        assert!(mask.count() > 0);
    }

    #[test]
    fn future_cone_spreads_at_light_speed() {
        let m = Spacetime::strip(qi(1));
        let d = Region::diamond(m, qi(0), q(1, 2), q(1, 10));
        let g = LatticeGrid::new(m, 50, qi(-1), qi(2), qi(1));
        let f = g.causal_future(&g.rasterize(&d));
        let (i, _) = (0..g.nt).map(|i| (i, g.center_tx(i, 0))).find(|(_, (t, _))| *t > qi(1)).unwrap();
        assert!(f.get(i, 0) && f.get(i, g.nx - 1));
    }
}
