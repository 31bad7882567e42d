//! Exact Cauchy development of rectangle unions.
//!
//! All region bounds lie on the null lattice `δ·Z²` with `δ = 1/N`, and so do
//! the boundary lines of `M`. Membership in `S` and in `D+(S)` is constant on
//! each cell of that lattice (vertex, the two kinds of open edge, open
//! square), so `D+` is decided by a dynamic program over cells in causal
//! order: a cell lies in `D+` iff it lies in `S`, or every past move from it
//! leads to a cell in `D+` and none leaves `M` into an escape.
//!
//! On the strip a point more than one width above `sup t(S)` is in `D+` iff
//! every such point is, which lets the program stop at a finite horizon.

use super::{GeometryError, Kind, Rect, Region, Spacetime};
use crate::rational::{lcm_denoms, q, qi, Bound, Q};

pub fn cauchy_development(s: &Region) -> Result<Region, GeometryError> {
    if let Some(fast) = fast_path(s) {
        return Ok(fast);
    }
    check_bounded(s)?;
    let plus = future_development(s)?;
    let minus = future_development(&s.reflect_time())?.reflect_time();
    Ok(plus.union(&minus))
}

/// `D+(S)`: points whose every past-inextensible causal curve meets `S`.
pub fn future_development(s: &Region) -> Result<Region, GeometryError> {
    if s.is_empty() {
        return Ok(s.clone());
    }
    check_bounded(s)?;
    let lat = Lattice::new(s);
    let states = lat.solve();
    lat.extract(&states)
}

pub fn past_development(s: &Region) -> Result<Region, GeometryError> {
    Ok(future_development(&s.reflect_time())?.reflect_time())
}

fn check_bounded(s: &Region) -> Result<(), GeometryError> {
    let bounded = s
        .rects()
        .iter()
        .all(|r| r.u0.is_finite() && r.u1.is_finite() && r.v0.is_finite() && r.v1.is_finite());
    if bounded {
        Ok(())
    } else {
        Err(GeometryError::UnboundedRegion(s.to_string()))
    }
}

/// Does the rectangle (tightened, so inside `M`) contain a Cauchy surface?
pub fn contains_cauchy_surface(m: &Spacetime, r: &Rect) -> bool {
    match m.kind {
        Kind::Strip => {
            // a slice t = c lies inside for c in this interval
            let w = m.band_width().unwrap() / qi(2);
            r.u0.shift(w).max(r.v0) < r.u1.min(r.v1.shift(-w))
        }
        Kind::HalfPlane => r.u0 == Bound::NegInf && r.v1 == Bound::PosInf && r.v0 < r.u1,
        Kind::DiamondWithEdge => {
            r.u0 == Bound::Fin(qi(-1)) && r.v1 == Bound::Fin(qi(1)) && r.v0 < r.u1
        }
    }
}

fn fast_path(s: &Region) -> Option<Region> {
    let m = s.spacetime();
    if s.is_empty() {
        return Some(s.clone());
    }
    if s.rects().iter().any(|r| contains_cauchy_surface(&m, r)) || *s == m.whole() {
        return Some(m.whole());
    }
    if let [r] = s.rects() {
        // a rectangle that M does not clip: the null lines through its
        // corners stay in M and escape on either side
        let unclipped = r.v0 >= r.u1
            && match m.band_width() {
                Some(w) => r.v1.add(r.u0.neg()) <= Some(Bound::Fin(w)),
                None => true,
            };
        if unclipped {
            return Some(s.clone());
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cell {
    Vertex,
    VEdge,
    HEdge,
    Square,
}

const CELLS: [Cell; 4] = [Cell::Vertex, Cell::VEdge, Cell::HEdge, Cell::Square];

impl Cell {
    fn idx(self) -> usize {
        self as usize
    }

    /// `u` is a lattice point on this cell (else an open lattice interval).
    fn u_point(self) -> bool {
        matches!(self, Cell::Vertex | Cell::VEdge)
    }

    fn v_point(self) -> bool {
        matches!(self, Cell::Vertex | Cell::HEdge)
    }

    fn past_moves(self, k: i64, l: i64) -> ([(Cell, i64, i64); 3], usize) {
        match self {
            Cell::Square => ([(Cell::Vertex, k, l), (Cell::VEdge, k, l), (Cell::HEdge, k, l)], 3),
            Cell::VEdge => ([(Cell::Vertex, k, l), (Cell::Square, k - 1, l), (Cell::Square, 0, 0)], 2),
            Cell::HEdge => ([(Cell::Vertex, k, l), (Cell::Square, k, l - 1), (Cell::Square, 0, 0)], 2),
            Cell::Vertex => (
                [(Cell::VEdge, k, l - 1), (Cell::HEdge, k - 1, l), (Cell::Square, k - 1, l - 1)],
                3,
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Outside,
    InS,
    Dev,
    Escapes,
}

const BIG: i64 = i64::MAX / 8;

struct Lattice {
    m: Spacetime,
    n: i64,
    band: Option<i64>,
    floor: Option<i64>,
    ceil: Option<i64>,
    k0: i64,
    k1: i64,
    l0: i64,
    l1: i64,
    rects: Vec<[i64; 4]>,
    far_side: Option<i64>,
    blocking_probe: Option<(i64, i64, Q)>,
}

fn scale(b: Bound, n: i64) -> i64 {
    match b {
        Bound::NegInf => -BIG,
        Bound::PosInf => BIG,
        Bound::Fin(x) => {
            let y = x * qi(n);
            debug_assert!(y.is_integer());
            y.to_integer()
        }
    }
}

fn floor_i(x: Q) -> i64 {
    x.floor().to_integer()
}

fn ceil_i(x: Q) -> i64 {
    x.ceil().to_integer()
}

impl Lattice {
    fn new(s: &Region) -> Lattice {
        let m = s.spacetime();
        let finite = s
            .rects()
            .iter()
            .flat_map(|r| [r.u0, r.u1, r.v0, r.v1])
            .filter_map(|b| b.fin());
        let n = lcm_denoms(finite);
        let nq = qi(n);
        let rects: Vec<[i64; 4]> = s
            .rects()
            .iter()
            .map(|r| [scale(r.u0, n), scale(r.u1, n), scale(r.v0, n), scale(r.v1, n)])
            .collect();
        let (tlo, thi) = s.time_extent().unwrap();
        let (tlo, thi) = (tlo.fin().unwrap(), thi.fin().unwrap());
        let mut lat = Lattice {
            m,
            n,
            band: m.band_width().map(|w| (w * nq).to_integer()),
            floor: m.u_floor().map(|f| (f * nq).to_integer()),
            ceil: m.v_ceil().map(|c| (c * nq).to_integer()),
            k0: 0,
            k1: 0,
            l0: 0,
            l1: 0,
            rects,
            far_side: None,
            blocking_probe: None,
        };
        match m.kind {
            Kind::Strip => {
                let t0 = tlo - qi(1);
                let t1 = thi + qi(3);
                lat.k0 = floor_i((t0 - qi(1)) * nq);
                lat.k1 = ceil_i(t1 * nq);
                lat.l0 = floor_i(t0 * nq);
                lat.l1 = ceil_i((t1 + qi(1)) * nq);
                let c = thi + qi(2);
                let k = floor_i((c - q(1, 2)) * nq);
                let l = floor_i((c + q(1, 2)) * nq);
                lat.blocking_probe = Some((k, l, c));
            }
            Kind::HalfPlane => {
                let dmax = lat.rects.iter().map(|r| r[3] - r[0]).max().unwrap();
                lat.far_side = Some(dmax);
                let xb = Q::new(dmax, 2 * n) + qi(1);
                let t0 = tlo - qi(1);
                let t1 = thi + xb + qi(1);
                lat.k0 = floor_i((t0 - xb) * nq);
                lat.k1 = ceil_i(t1 * nq);
                lat.l0 = floor_i(t0 * nq);
                lat.l1 = ceil_i((t1 + xb) * nq);
            }
            Kind::DiamondWithEdge => {
                lat.k0 = -n;
                lat.k1 = n;
                lat.l0 = -n;
                lat.l1 = n;
            }
        }
        lat
    }

    fn width(&self) -> usize {
        (self.l1 - self.l0) as usize
    }

    fn in_box(&self, k: i64, l: i64) -> bool {
        k >= self.k0 && k < self.k1 && l >= self.l0 && l < self.l1
    }

    fn index(&self, c: Cell, k: i64, l: i64) -> usize {
        (((k - self.k0) as usize * self.width()) + (l - self.l0) as usize) * 4 + c.idx()
    }

    fn valid(&self, c: Cell, k: i64, l: i64) -> bool {
        let d = l - k;
        let w = self.band.unwrap_or(BIG);
        let (lo, hi) = match c {
            Cell::Vertex | Cell::Square => (0, w),
            Cell::VEdge => (0, w - 1),
            Cell::HEdge => (1, w),
        };
        if d < lo || d > hi {
            return false;
        }
        if let Some(f) = self.floor {
            if (c.u_point() && k <= f) || (!c.u_point() && k < f) {
                return false;
            }
        }
        if let Some(cc) = self.ceil {
            if (c.v_point() && l >= cc) || (!c.v_point() && l + 1 > cc) {
                return false;
            }
        }
        true
    }

    fn in_s(&self, c: Cell, k: i64, l: i64) -> bool {
        self.rects.iter().any(|r| {
            let u_ok = if c.u_point() { r[0] < k && k < r[1] } else { r[0] <= k && k < r[1] };
            let v_ok = if c.v_point() { r[2] < l && l < r[3] } else { r[2] <= l && l < r[3] };
            u_ok && v_ok
        })
    }

    /// Lower bound of `v - u` on the cell, in lattice units.
    fn inf_d(c: Cell, k: i64, l: i64) -> i64 {
        match c {
            Cell::Vertex | Cell::VEdge => l - k,
            Cell::HEdge | Cell::Square => l - k - 1,
        }
    }

    fn solve(&self) -> Vec<State> {
        let mut st = vec![State::Outside; (self.k1 - self.k0) as usize * self.width() * 4];
        for k in self.k0..self.k1 {
            for l in self.l0..self.l1 {
                for c in CELLS {
                    let i = self.index(c, k, l);
                    st[i] = self.decide(&st, c, k, l);
                }
            }
        }
        st
    }

    fn decide(&self, st: &[State], c: Cell, k: i64, l: i64) -> State {
        if !self.valid(c, k, l) {
            return State::Outside;
        }
        if self.in_s(c, k, l) {
            return State::InS;
        }
        if let Some(dm) = self.far_side {
            if Self::inf_d(c, k, l) >= dm {
                return State::Escapes;
            }
        }
        let (moves, count) = c.past_moves(k, l);
        let mut any = false;
        for &(tc, tk, tl) in &moves[..count] {
            if let Some(f) = self.floor {
                if tc.u_point() && tk <= f {
                    // reaches the removed past edge of M
                    return State::Escapes;
                }
            }
            if !self.valid(tc, tk, tl) {
                continue;
            }
            any = true;
            if !self.in_box(tk, tl) {
                return State::Escapes;
            }
            match st[self.index(tc, tk, tl)] {
                State::Escapes => return State::Escapes,
                State::Outside => unreachable!("valid cell marked outside"),
                _ => {}
            }
        }
        if any {
            State::Dev
        } else {
            State::Escapes
        }
    }

    fn in_dev(&self, st: &[State], c: Cell, k: i64, l: i64) -> bool {
        self.in_box(k, l) && matches!(st[self.index(c, k, l)], State::InS | State::Dev)
    }

    /// Every cell of `M` inside the open lattice rectangle lies in `D+`.
    fn admissible(&self, st: &[State], ka: i64, kb: i64, la: i64, lb: i64) -> bool {
        for k in ka..=kb {
            for l in la..=lb {
                for c in CELLS {
                    let inside_u = if c.u_point() { ka < k && k < kb } else { ka <= k && k < kb };
                    let inside_v = if c.v_point() { la < l && l < lb } else { la <= l && l < lb };
                    if inside_u && inside_v && self.valid(c, k, l) && !self.in_dev(st, c, k, l) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn grow(&self, st: &[State], mut r: [i64; 4]) -> [i64; 4] {
        while r[3] < self.l1 && self.admissible(st, r[0], r[1], r[3] - 1, r[3] + 1) {
            r[3] += 1;
        }
        while r[2] > self.l0 && self.admissible(st, r[0], r[1], r[2] - 1, r[2] + 1) {
            r[2] -= 1;
        }
        while r[1] < self.k1 && self.admissible(st, r[1] - 1, r[1] + 1, r[2], r[3]) {
            r[1] += 1;
        }
        while r[0] > self.k0 && self.admissible(st, r[0] - 1, r[0] + 1, r[2], r[3]) {
            r[0] -= 1;
        }
        r
    }

    fn mark(&self, covered: &mut [bool], r: [i64; 4]) {
        for k in r[0].max(self.k0)..=r[1].min(self.k1 - 1) {
            for l in r[2].max(self.l0)..=r[3].min(self.l1 - 1) {
                for c in CELLS {
                    let inside_u = if c.u_point() { r[0] < k && k < r[1] } else { r[0] <= k && k < r[1] };
                    let inside_v = if c.v_point() { r[2] < l && l < r[3] } else { r[2] <= l && l < r[3] };
                    if inside_u && inside_v {
                        covered[self.index(c, k, l)] = true;
                    }
                }
            }
        }
    }

    fn extract(&self, st: &[State]) -> Result<Region, GeometryError> {
        let mut covered = vec![false; st.len()];
        let mut out: Vec<[i64; 4]> = vec![];
        for c in [Cell::Square, Cell::VEdge, Cell::HEdge, Cell::Vertex] {
            for k in self.k0..self.k1 {
                for l in self.l0..self.l1 {
                    let i = self.index(c, k, l);
                    if covered[i] || !self.in_dev(st, c, k, l) {
                        continue;
                    }
                    let seed = match c {
                        Cell::Square => [k, k + 1, l, l + 1],
                        Cell::VEdge => [k - 1, k + 1, l, l + 1],
                        Cell::HEdge => [k, k + 1, l - 1, l + 1],
                        Cell::Vertex => [k - 1, k + 1, l - 1, l + 1],
                    };
                    if !self.admissible(st, seed[0], seed[1], seed[2], seed[3]) {
                        return Err(GeometryError::NotOpen(k, l));
                    }
                    let r = self.grow(st, seed);
                    self.mark(&mut covered, r);
                    out.push(r);
                }
            }
        }
        let nq = qi(self.n);
        let mut rects: Vec<Rect> = out
            .into_iter()
            .map(|r| Rect::fin(qi(r[0]) / nq, qi(r[1]) / nq, qi(r[2]) / nq, qi(r[3]) / nq))
            .collect();
        if let Some((k, l, c)) = self.blocking_probe {
            if self.in_dev(st, Cell::Square, k, l) {
                rects.push(Rect::new(Bound::Fin(c - qi(1)), Bound::PosInf, Bound::Fin(c), Bound::PosInf));
            }
        }
        Ok(Region::new(self.m, rects))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::NullPoint;

    fn m() -> Spacetime {
        Spacetime::strip(qi(1))
    }

    fn r(u0: Q, u1: Q, v0: Q, v1: Q) -> Region {
        Region::new(m(), [Rect::fin(u0, u1, v0, v1)])
    }

    #[test]
    fn interior_diamond_is_stable() {
        let d = Region::diamond(m(), qi(0), q(1, 2), q(1, 10));
        assert_eq!(cauchy_development(&d).unwrap(), d);
        // same answer without the closed form
        assert_eq!(future_development(&d).unwrap(), d);
        assert_eq!(past_development(&d).unwrap(), d);
    }

    #[test]
    fn slab_develops_to_everything() {
        let s = Region::null_slab(m(), qi(0), qi(1));
        assert_eq!(cauchy_development(&s).unwrap(), m().whole());
        let thin = r(q(-13, 10), q(3, 10), q(-3, 10), q(13, 10));
        let plus = future_development(&thin).unwrap();
        assert!(plus.contains(NullPoint::from_tx(qi(50), q(1, 2))));
    }

    #[test]
    fn boundary_triangle_is_stable() {
        let b = r(q(-3, 10), q(3, 10), q(-3, 10), q(3, 10));
        assert_eq!(cauchy_development(&b).unwrap(), b);
    }

    #[test]
    fn wide_rectangle_develops_past_its_trace() {
        let s = r(q(-1, 2), q(1, 4), qi(0), q(3, 4));
        let d = cauchy_development(&s).unwrap();
        assert_eq!(d, r(q(-1, 2), q(3, 4), q(-1, 2), q(3, 4)));
        assert_eq!(cauchy_development(&d).unwrap(), d);
    }

    #[test]
    fn unbounded_region_is_rejected() {
        // on the strip every time-unbounded rectangle holds a Cauchy slice
        let hp = Spacetime::half_plane();
        let s = Region::new(
            hp,
            [
                Rect::new(Bound::Fin(qi(0)), Bound::PosInf, Bound::Fin(q(1, 2)), Bound::PosInf),
                Rect::fin(qi(-6), qi(-5), qi(-5), qi(-4)),
            ],
        );
        assert!(matches!(cauchy_development(&s), Err(GeometryError::UnboundedRegion(_))));
        let up = Region::new(m(), [Rect::new(Bound::Fin(qi(0)), Bound::PosInf, Bound::Fin(q(1, 2)), Bound::PosInf)]);
        assert_eq!(cauchy_development(&up).unwrap(), m().whole());
    }

    #[test]
    fn half_plane_development_is_bounded() {
        let hp = Spacetime::half_plane();
        let s = Region::new(hp, [Rect::fin(q(-1, 2), q(1, 2), q(-1, 2), q(1, 2))]);
        let d = cauchy_development(&s).unwrap();
        assert_eq!(d, s);
    }

    #[test]
    fn cut_diamond_whole_and_corner() {
        let dm = Spacetime::diamond_with_edge(qi(1));
        let all = Region::new(dm, [Rect::fin(qi(-1), q(1, 2), q(-1, 2), qi(1))]);
        assert_eq!(cauchy_development(&all).unwrap(), dm.whole());
        let s = Region::new(dm, [Rect::fin(q(-1, 2), q(1, 4), q(-1, 4), q(1, 2))]);
        let tri = Region::new(dm, [Rect::fin(q(-1, 2), q(1, 2), q(-1, 2), q(1, 2))]);
        assert_eq!(cauchy_development(&s).unwrap(), tri);
    }
}
