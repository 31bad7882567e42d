//! Causal future/past, convexity, disjointness and the region predicates.
//!
//! Regions are open, so `J±(S)` is itself open in `M` and coincides with
//! `I±(S)`: every point of an open set lies in the chronological future of
//! a nearby point of the same set. Closed cones only arise for points.

use super::development::cauchy_development;
use super::{GeometryError, NullPoint, Rect, Region, Spacetime};
use crate::rational::Bound;

/// `J+_M(S)`: union of the open quadrants `{u > u0, v > v0}` over the rectangles of `S`.
pub fn causal_future(s: &Region) -> Region {
    Region::new(
        s.spacetime(),
        s.rects()
            .iter()
            .map(|r| Rect::new(r.u0, Bound::PosInf, r.v0, Bound::PosInf)),
    )
}

pub fn causal_past(s: &Region) -> Region {
    Region::new(
        s.spacetime(),
        s.rects()
            .iter()
            .map(|r| Rect::new(Bound::NegInf, r.u1, Bound::NegInf, r.v1)),
    )
}

pub fn chronological_future(s: &Region) -> Region {
    causal_future(s)
}

pub fn chronological_past(s: &Region) -> Region {
    causal_past(s)
}

/// Closed cone `J+_M(p)`.
pub fn point_in_causal_future(m: &Spacetime, p: NullPoint, q: NullPoint) -> bool {
    m.contains(p) && m.contains(q) && p.precedes(&q)
}

/// Open cone `I+_M(p)`.
pub fn point_in_chronological_future(m: &Spacetime, p: NullPoint, q: NullPoint) -> bool {
    m.contains(p) && m.contains(q) && p.u < q.u && p.v < q.v
}

/// `J+(S) ∩ J−(S)`: the union of all causal segments between points of `S`.
pub fn causal_hull(s: &Region) -> Region {
    causal_future(s).intersection(&causal_past(s))
}

pub fn is_causally_convex(s: &Region) -> bool {
    causal_hull(s).is_subset(s)
}

/// `(J+(S) ∪ J−(S)) ∩ S2 = ∅`.
pub fn are_causally_disjoint(s: &Region, s2: &Region) -> bool {
    !causal_future(s).intersects(s2) && !causal_past(s).intersects(s2)
}

/// `S ∩ ∂M = ∅`.
pub fn is_interior(s: &Region) -> bool {
    !s.meets_boundary()
}

pub fn is_stable(s: &Region) -> Result<bool, GeometryError> {
    Ok(cauchy_development(s)? == *s)
}

/// `D(U) = D(U2)` for an inclusion `U ⊆ U2`.
pub fn is_cauchy_inclusion(u: &Region, u2: &Region) -> Result<bool, GeometryError> {
    if !u.is_subset(u2) {
        return Err(GeometryError::NotAnInclusion(u.to_string(), u2.to_string()));
    }
    Ok(cauchy_development(u)? == cauchy_development(u2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn m() -> Spacetime {
        Spacetime::strip(qi(1))
    }

    #[test]
    fn future_of_interior_diamond_is_clipped_quadrant() {
        let d = Region::diamond(m(), qi(0), q(1, 2), q(1, 10));
        let f = causal_future(&d);
        assert_eq!(f.rects().len(), 1);
        assert!(f.contains(NullPoint::from_tx(qi(5), qi(0))));
        assert!(f.contains(NullPoint::from_tx(qi(5), qi(1))));
        assert!(!f.contains(NullPoint::from_tx(q(1, 10), qi(1))));
        assert!(causal_future(&Region::empty(m())).is_empty());
    }

    #[test]
    fn convexity_examples() {
        let a = Region::diamond(m(), qi(0), q(1, 4), q(1, 10));
        let b = Region::diamond(m(), qi(0), q(3, 4), q(1, 10));
        assert!(is_causally_convex(&a));
        assert!(are_causally_disjoint(&a, &b));
        assert!(is_causally_convex(&a.union(&b)));
        let c = Region::diamond(m(), qi(1), q(1, 4), q(1, 10));
        assert!(!are_causally_disjoint(&a, &c));
        assert!(!is_causally_convex(&a.union(&c)));
        assert!(!are_causally_disjoint(&a, &a));
    }

    #[test]
    fn point_cones() {
        let mm = m();
        let p = NullPoint::from_tx(qi(0), q(1, 2));
        let null = NullPoint::from_tx(q(1, 4), q(3, 4));
        assert!(point_in_causal_future(&mm, p, null));
        assert!(!point_in_chronological_future(&mm, p, null));
        assert!(point_in_chronological_future(&mm, p, NullPoint::from_tx(q(1, 2), q(3, 4))));
    }

    #[test]
    fn inclusion_precondition() {
        let a = Region::diamond(m(), qi(0), q(1, 4), q(1, 10));
        let b = Region::diamond(m(), qi(0), q(3, 4), q(1, 10));
        assert!(matches!(is_cauchy_inclusion(&a, &b), Err(GeometryError::NotAnInclusion(..))));
        let slab = Region::null_slab(m(), qi(0), qi(1));
        assert!(is_cauchy_inclusion(&slab, &m().whole()).unwrap());
    }
}
