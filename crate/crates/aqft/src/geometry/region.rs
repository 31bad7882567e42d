//! Regions: finite unions of open null rectangles, intersected with `M`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{NullPoint, Spacetime};
use crate::rational::{qi, Bound, Q};

/// Open rectangle `(u0,u1) × (v0,v1)` in null coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect {
    pub u0: Bound,
    pub u1: Bound,
    pub v0: Bound,
    pub v1: Bound,
}

/// Config/JSON form of a rectangle: `{u:[u0,u1], v:[v0,v1]}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectLit {
    pub u: [Bound; 2],
    pub v: [Bound; 2],
}

impl From<Rect> for RectLit {
    fn from(r: Rect) -> Self {
        RectLit { u: [r.u0, r.u1], v: [r.v0, r.v1] }
    }
}

impl From<RectLit> for Rect {
    fn from(l: RectLit) -> Self {
        Rect { u0: l.u[0], u1: l.u[1], v0: l.v[0], v1: l.v[1] }
    }
}

impl Rect {
    pub fn new(u0: Bound, u1: Bound, v0: Bound, v1: Bound) -> Self {
        Rect { u0, u1, v0, v1 }
    }

    pub fn fin(u0: Q, u1: Q, v0: Q, v1: Q) -> Self {
        Rect::new(Bound::Fin(u0), Bound::Fin(u1), Bound::Fin(v0), Bound::Fin(v1))
    }

    pub fn all() -> Self {
        Rect::new(Bound::NegInf, Bound::PosInf, Bound::NegInf, Bound::PosInf)
    }

    pub fn is_empty_raw(&self) -> bool {
        self.u0 >= self.u1 || self.v0 >= self.v1
    }

    pub fn contains_point(&self, p: NullPoint) -> bool {
        let (u, v) = (Bound::Fin(p.u), Bound::Fin(p.v));
        self.u0 < u && u < self.u1 && self.v0 < v && v < self.v1
    }

    /// Coordinatewise containment (exact set containment for tightened rects).
    pub fn contains_rect(&self, o: &Rect) -> bool {
        self.u0 <= o.u0 && o.u1 <= self.u1 && self.v0 <= o.v0 && o.v1 <= self.v1
    }

    pub fn intersect(&self, o: &Rect) -> Rect {
        Rect::new(
            self.u0.max(o.u0),
            self.u1.min(o.u1),
            self.v0.max(o.v0),
            self.v1.min(o.v1),
        )
    }

    /// Image under time reversal `(u, v) ↦ (−v, −u)`.
    pub fn reflect_time(&self) -> Rect {
        Rect::new(self.v1.neg(), self.v0.neg(), self.u1.neg(), self.u0.neg())
    }

    /// Smallest rectangle with the same trace on `M`; `None` if the trace is empty.
    pub fn tighten(&self, m: &Spacetime) -> Option<Rect> {
        let mut r = *self;
        loop {
            let prev = r;
            r.u1 = r.u1.min(r.v1);
            r.v0 = r.v0.max(r.u0);
            if let Some(w) = m.band_width() {
                r.u0 = r.u0.max(r.v0.shift(-w));
                r.v1 = r.v1.min(r.u1.shift(w));
            }
            if let Some(f) = m.u_floor() {
                r.u0 = r.u0.max(Bound::Fin(f));
            }
            if let Some(c) = m.v_ceil() {
                r.v1 = r.v1.min(Bound::Fin(c));
            }
            if r.is_empty_raw() {
                return None;
            }
            if r == prev {
                return Some(r);
            }
        }
    }

    fn finite_bounds(&self) -> impl Iterator<Item = (bool, Q)> + '_ {
        [(true, self.u0), (true, self.u1), (false, self.v0), (false, self.v1)]
            .into_iter()
            .filter_map(|(is_u, b)| b.fin().map(|x| (is_u, x)))
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})x({}, {})", self.u0, self.u1, self.v0, self.v1)
    }
}

/// Interval with open/closed ends, used for the exact cell decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Iv {
    pub lo: Bound,
    pub lo_c: bool,
    pub hi: Bound,
    pub hi_c: bool,
}

impl Iv {
    pub fn open(lo: Bound, hi: Bound) -> Iv {
        Iv { lo, lo_c: false, hi, hi_c: false }
    }

    pub fn point(x: Q) -> Iv {
        Iv { lo: Bound::Fin(x), lo_c: true, hi: Bound::Fin(x), hi_c: true }
    }

    pub fn nonempty(&self) -> bool {
        self.lo < self.hi || (self.lo == self.hi && self.lo_c && self.hi_c && self.lo.is_finite())
    }

    pub fn meet(&self, o: &Iv) -> Iv {
        let (lo, lo_c) = if self.lo > o.lo {
            (self.lo, self.lo_c)
        } else if o.lo > self.lo {
            (o.lo, o.lo_c)
        } else {
            (self.lo, self.lo_c && o.lo_c)
        };
        let (hi, hi_c) = if self.hi < o.hi {
            (self.hi, self.hi_c)
        } else if o.hi < self.hi {
            (o.hi, o.hi_c)
        } else {
            (self.hi, self.hi_c && o.hi_c)
        };
        Iv { lo, lo_c, hi, hi_c }
    }

    /// `self ⊆ (a, b)`.
    pub fn inside_open(&self, a: Bound, b: Bound) -> bool {
        (self.lo > a || (self.lo == a && !self.lo_c)) && (self.hi < b || (self.hi == b && !self.hi_c))
    }

    /// Open intervals and points cut out by sorted distinct breakpoints.
    pub fn pieces(bps: &[Q]) -> Vec<Iv> {
        let mut out = Vec::with_capacity(2 * bps.len() + 1);
        let mut prev = Bound::NegInf;
        for &b in bps {
            out.push(Iv::open(prev, Bound::Fin(b)));
            out.push(Iv::point(b));
            prev = Bound::Fin(b);
        }
        out.push(Iv::open(prev, Bound::PosInf));
        out
    }
}

/// Does the product cell `iu × iv` meet `M`?
pub(crate) fn cell_meets(m: &Spacetime, iu: &Iv, iv: &Iv) -> bool {
    let mut iu = *iu;
    let mut iv = *iv;
    if let Some(f) = m.u_floor() {
        iu = iu.meet(&Iv::open(Bound::Fin(f), Bound::PosInf));
    }
    if let Some(c) = m.v_ceil() {
        iv = iv.meet(&Iv::open(Bound::NegInf, Bound::Fin(c)));
    }
    if !iu.nonempty() || !iv.nonempty() {
        return false;
    }
    // v - u ranges over an interval with these ends
    let dlo = iv.lo.add(iu.hi.neg()).unwrap_or(Bound::NegInf);
    let dhi = iv.hi.add(iu.lo.neg()).unwrap_or(Bound::PosInf);
    let d = Iv { lo: dlo, lo_c: iv.lo_c && iu.hi_c, hi: dhi, hi_c: iv.hi_c && iu.lo_c };
    let target = match m.band_width() {
        Some(w) => Iv { lo: Bound::Fin(qi(0)), lo_c: true, hi: Bound::Fin(w), hi_c: true },
        None => Iv { lo: Bound::Fin(qi(0)), lo_c: true, hi: Bound::PosInf, hi_c: false },
    };
    d.meet(&target).nonempty()
}

/// A finite union of open null rectangles, intersected with `M`.
///
/// Stored rectangles are tightened to their trace on `M` and pairwise
/// non-nested. Equality is set equality, decided on the exact cell
/// decomposition generated by all rectangle bounds.
#[derive(Clone)]
pub struct Region {
    m: Spacetime,
    rects: Vec<Rect>,
}

impl Region {
    pub fn new(m: Spacetime, rects: impl IntoIterator<Item = Rect>) -> Region {
        let mut r = Region { m, rects: rects.into_iter().collect() };
        r.canonicalize();
        r
    }

    pub fn empty(m: Spacetime) -> Region {
        Region { m, rects: vec![] }
    }

    pub fn whole(m: Spacetime) -> Region {
        Region::new(m, [Rect::all()])
    }

    /// Double cone `|t − t0| + |x − x0| < r`.
    pub fn diamond(m: Spacetime, t0: Q, x0: Q, r: Q) -> Region {
        let c = NullPoint::from_tx(t0, x0);
        Region::new(m, [Rect::fin(c.u - r, c.u + r, c.v - r, c.v + r)])
    }

    /// The null rectangle whose trace on both strip boundaries is `t0 < t < t1`;
    /// it contains the slab `t0 < t < t1` and every slice in between.
    pub fn null_slab(m: Spacetime, t0: Q, t1: Q) -> Region {
        let w = m.spatial_width().unwrap_or(qi(1));
        Region::new(m, [Rect::fin(t0 - w, t1, t0, t1 + w)])
    }

    pub fn from_lits(m: Spacetime, lits: &[RectLit]) -> Region {
        Region::new(m, lits.iter().map(|&l| Rect::from(l)))
    }

    pub fn to_lits(&self) -> Vec<RectLit> {
        self.rects.iter().map(|&r| r.into()).collect()
    }

    pub fn spacetime(&self) -> Spacetime {
        self.m
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    fn canonicalize(&mut self) {
        let m = self.m;
        let mut rs: Vec<Rect> = self.rects.iter().filter_map(|r| r.tighten(&m)).collect();
        loop {
            let before = rs.len();
            rs.sort();
            rs.dedup();
            // absorb nested rectangles
            let mut keep = vec![true; rs.len()];
            for i in 0..rs.len() {
                for j in 0..rs.len() {
                    if i != j && keep[j] && rs[j].contains_rect(&rs[i]) {
                        keep[i] = false;
                        break;
                    }
                }
            }
            rs = rs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(r, _)| r).collect();
            // merge overlapping rectangles that share a full side range
            let mut merged = true;
            while merged {
                merged = false;
                'outer: for i in 0..rs.len() {
                    for j in (i + 1)..rs.len() {
                        let (a, b) = (rs[i], rs[j]);
                        let joined = if a.u0 == b.u0 && a.u1 == b.u1 && a.v0.max(b.v0) < a.v1.min(b.v1) {
                            Some(Rect::new(a.u0, a.u1, a.v0.min(b.v0), a.v1.max(b.v1)))
                        } else if a.v0 == b.v0 && a.v1 == b.v1 && a.u0.max(b.u0) < a.u1.min(b.u1) {
                            Some(Rect::new(a.u0.min(b.u0), a.u1.max(b.u1), a.v0, a.v1))
                        } else {
                            None
                        };
                        if let Some(r) = joined {
                            rs.swap_remove(j);
                            rs[i] = r.tighten(&m).unwrap_or(r);
                            merged = true;
                            break 'outer;
                        }
                    }
                }
            }
            if rs.len() == before {
                break;
            }
        }
        rs.sort();
        self.rects = rs;
    }

    pub fn contains(&self, p: NullPoint) -> bool {
        self.m.contains(p) && self.rects.iter().any(|r| r.contains_point(p))
    }

    /// Sufficient test that the closed disk of radius `r` about `(t, x)` (geometric
    /// units) lies in the interior of one rectangle of the region and of `M`.
    pub fn contains_disk_f64(&self, t: f64, x: f64, r: f64) -> bool {
        let (u, v) = (t - x, t + x);
        let rr = r * std::f64::consts::SQRT_2;
        if x - r <= 0.0 {
            return false;
        }
        if let (Some(w), Some(_)) = (self.m.spatial_width(), self.m.band_width()) {
            if x + r >= crate::rational::to_f64(w) {
                return false;
            }
        }
        if self.m.u_floor().is_some_and(|f| u - rr <= crate::rational::to_f64(f))
            || self.m.v_ceil().is_some_and(|c| v + rr >= crate::rational::to_f64(c))
        {
            return false;
        }
        self.rects.iter().any(|q| {
            q.u0.to_f64() < u - rr && u + rr < q.u1.to_f64() && q.v0.to_f64() < v - rr && v + rr < q.v1.to_f64()
        })
    }

    /// Membership of a floating-point `(t, x)` given in geometric units.
    pub fn contains_tx_f64(&self, t: f64, x: f64) -> bool {
        let (u, v) = (t - x, t + x);
        if x < 0.0 {
            return false;
        }
        if let Some(w) = self.m.spatial_width() {
            if self.m.band_width().is_some() && x > crate::rational::to_f64(w) {
                return false;
            }
        }
        if let Some(f) = self.m.u_floor() {
            if u <= crate::rational::to_f64(f) {
                return false;
            }
        }
        if let Some(c) = self.m.v_ceil() {
            if v >= crate::rational::to_f64(c) {
                return false;
            }
        }
        self.rects.iter().any(|r| {
            r.u0.to_f64() < u && u < r.u1.to_f64() && r.v0.to_f64() < v && v < r.v1.to_f64()
        })
    }

    pub(crate) fn contains_cell(&self, iu: &Iv, iv: &Iv) -> bool {
        self.rects
            .iter()
            .any(|r| iu.inside_open(r.u0, r.u1) && iv.inside_open(r.v0, r.v1))
    }

    /// Sorted distinct finite u- and v-breakpoints of several regions.
    pub(crate) fn breakpoints(regs: &[&Region]) -> (Vec<Q>, Vec<Q>) {
        let mut us = vec![];
        let mut vs = vec![];
        for r in regs {
            for rect in &r.rects {
                for (is_u, x) in rect.finite_bounds() {
                    if is_u {
                        us.push(x)
                    } else {
                        vs.push(x)
                    }
                }
            }
        }
        us.sort();
        us.dedup();
        vs.sort();
        vs.dedup();
        (us, vs)
    }

    /// Visits every cell of the joint decomposition that meets `M`.
    pub(crate) fn for_each_cell(regs: &[&Region], mut f: impl FnMut(&Iv, &Iv) -> bool) -> bool {
        let m = regs[0].m;
        let (us, vs) = Region::breakpoints(regs);
        let pu = Iv::pieces(&us);
        let pv = Iv::pieces(&vs);
        for iu in &pu {
            for iv in &pv {
                if cell_meets(&m, iu, iv) && !f(iu, iv) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        if self.m != other.m {
            return false;
        }
        if self.rects.iter().all(|r| other.rects.iter().any(|o| o.contains_rect(r))) {
            return true;
        }
        Region::for_each_cell(&[self, other], |iu, iv| {
            !self.contains_cell(iu, iv) || other.contains_cell(iu, iv)
        })
    }

    pub fn union(&self, other: &Region) -> Region {
        Region::new(self.m, self.rects.iter().chain(other.rects.iter()).copied())
    }

    pub fn intersection(&self, other: &Region) -> Region {
        let mut out = vec![];
        for a in &self.rects {
            for b in &other.rects {
                let r = a.intersect(b);
                if !r.is_empty_raw() {
                    out.push(r);
                }
            }
        }
        Region::new(self.m, out)
    }

    pub fn intersects(&self, other: &Region) -> bool {
        !self.intersection(other).is_empty()
    }

    pub fn reflect_time(&self) -> Region {
        Region::new(self.m, self.rects.iter().map(|r| r.reflect_time()))
    }

    /// Infimum and supremum of `t` over the region (`None` when empty).
    pub fn time_extent(&self) -> Option<(Bound, Bound)> {
        let two = qi(2);
        let half = |a: Bound, b: Bound| -> Bound {
            match a.add(b) {
                Some(Bound::Fin(s)) => Bound::Fin(s / two),
                Some(other) => other,
                None => Bound::NegInf,
            }
        };
        let lo = self.rects.iter().map(|r| half(r.u0, r.v0)).min()?;
        let hi = self.rects.iter().map(|r| half(r.u1, r.v1)).max()?;
        Some((lo, hi))
    }

    /// Supremum of `x` over the region.
    pub fn x_sup(&self) -> Option<Bound> {
        let two = qi(2);
        self.rects
            .iter()
            .map(|r| match r.v1.add(r.u0.neg()) {
                Some(Bound::Fin(d)) => {
                    let x = d / two;
                    match self.m.spatial_width() {
                        Some(w) if self.m.band_width().is_some() && x > w => Bound::Fin(w),
                        _ => Bound::Fin(x),
                    }
                }
                _ => match self.m.spatial_width() {
                    Some(w) if self.m.band_width().is_some() => Bound::Fin(w),
                    _ => Bound::PosInf,
                },
            })
            .max()
    }

    /// Does the region meet the timelike boundary `∂M`?
    pub fn meets_boundary(&self) -> bool {
        self.rects.iter().any(|r| {
            // trace on v - u = 0: the line u = v crosses the open rectangle
            let left = r.u0.max(r.v0) < r.u1.min(r.v1);
            let right = match self.m.band_width() {
                Some(w) => r.u0.shift(w).max(r.v0) < r.u1.shift(w).min(r.v1),
                None => false,
            };
            left || right
        })
    }

    /// Does the closure of the region meet `∂M`?
    pub fn closure_meets_boundary(&self) -> bool {
        self.rects.iter().any(|r| {
            let left = r.u0.max(r.v0) <= r.u1.min(r.v1);
            let right = match self.m.band_width() {
                Some(w) => r.u0.shift(w).max(r.v0) <= r.u1.shift(w).min(r.v1),
                None => false,
            };
            left || right
        })
    }
}

impl PartialEq for Region {
    fn eq(&self, other: &Region) -> bool {
        self.m == other.m && (self.rects == other.rects || (self.is_subset(other) && other.is_subset(self)))
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rects.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.rects.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn strip() -> Spacetime {
        Spacetime::strip(qi(1))
    }

    #[test]
    fn tightening_clips_to_band() {
        let m = strip();
        let r = Rect::new(Bound::NegInf, Bound::PosInf, Bound::Fin(qi(0)), Bound::Fin(qi(1)));
        let t = r.tighten(&m).unwrap();
        assert_eq!(t, Rect::fin(qi(-2), qi(1), qi(0), qi(1)));
        assert!(Rect::fin(qi(0), qi(1), qi(5), qi(6)).tighten(&m).is_none());
    }

    #[test]
    fn canonical_merge_and_absorb() {
        let m = strip();
        let a = Rect::fin(q(-1, 2), qi(0), q(1, 2), qi(1));
        let b = Rect::fin(q(-1, 2), qi(0), q(3, 4), q(5, 4));
        let inner = Rect::fin(q(-1, 4), q(-1, 8), q(6, 10), q(7, 10));
        let r = Region::new(m, [a, b, inner]);
        assert_eq!(r.rects().len(), 1);
        assert_eq!(r.rects()[0], Rect::fin(q(-1, 2), qi(0), q(1, 2), q(5, 4)));
    }

    #[test]
    fn abutting_rectangles_are_not_merged() {
        let m = strip();
        let a = Rect::fin(q(-1, 2), qi(0), q(1, 2), q(3, 4));
        let b = Rect::fin(q(-1, 2), qi(0), q(3, 4), qi(1));
        let split = Region::new(m, [a, b]);
        let whole = Region::new(m, [Rect::fin(q(-1, 2), qi(0), q(1, 2), qi(1))]);
        assert_eq!(split.rects().len(), 2);
        assert!(split.is_subset(&whole));
        assert!(!whole.is_subset(&split));
        assert_ne!(split, whole);
    }

    #[test]
    fn set_equality_ignores_decomposition() {
        let m = strip();
        let l = Region::new(
            m,
            [
                Rect::fin(qi(-1), qi(0), q(1, 2), qi(1)),
                Rect::fin(q(-1, 2), q(1, 2), q(1, 2), qi(1)),
            ],
        );
        let r = Region::new(
            m,
            [
                Rect::fin(qi(-1), q(1, 2), q(1, 2), q(3, 4)),
                Rect::fin(qi(-1), q(1, 2), q(1, 2), qi(1)),
                Rect::fin(qi(-1), qi(0), q(1, 2), qi(1)),
                Rect::fin(q(-1, 2), q(1, 2), q(1, 2), qi(1)),
            ],
        );
        assert_eq!(l, r);
    }

    #[test]
    fn whole_strip_is_the_band() {
        let m = strip();
        let w = Region::whole(m);
        assert!(w.contains(NullPoint::from_tx(qi(100), qi(1))));
        assert!(!w.contains(NullPoint::from_tx(qi(0), q(3, 2))));
        let slab = Region::null_slab(m, qi(0), qi(1));
        assert!(slab.is_subset(&w));
        assert!(!w.is_subset(&slab));
    }

    #[test]
    fn boundary_tests() {
        let m = strip();
        let d = Region::diamond(m, qi(0), q(1, 2), q(1, 10));
        assert!(!d.meets_boundary());
        let touching_corner = Region::diamond(m, qi(0), q(1, 10), q(1, 10));
        assert!(!touching_corner.meets_boundary());
        assert!(touching_corner.closure_meets_boundary());
        let b = Region::diamond(m, qi(0), qi(0), q(1, 10));
        assert!(b.meets_boundary());
    }
}
