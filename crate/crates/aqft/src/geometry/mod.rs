//! Flat 1+1-D spacetimes with timelike boundary, in null coordinates
//! `u = t - x`, `v = t + x`.
//!
//! Lengths are measured in units of the spacetime scale (the strip width
//! for the strip), so the strip is the band `0 <= v - u <= 2`.
//!
//! Every supported `M` is convex in null coordinates. A future-directed
//! causal curve is then any path along which `u` and `v` are both
//! nondecreasing, and the straight segment between two ordered points stays
//! in `M`. Consequently `J+_M(p) = {u >= u_p, v >= v_p} ∩ M`; the lattice
//! oracle in [`lattice`] checks this on every test grid.

pub mod causal;
pub mod development;
pub mod lattice;
pub mod oracle;
pub mod region;

use serde::{Deserialize, Serialize};

use crate::rational::{qi, to_f64, Q};
pub use region::{Rect, RectLit, Region};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("region {0} has unbounded time extent and no closed-form development")]
    UnboundedRegion(String),
    #[error("{0} is not contained in {1}")]
    NotAnInclusion(String, String),
    #[error("development is not open at lattice cell ({0}, {1})")]
    NotOpen(i64, i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// `R × [0, a]`
    Strip,
    /// `R × [0, ∞)`
    HalfPlane,
    /// `{x >= 0, |t| + x < L}`: a double cone cut along a timelike edge.
    DiamondWithEdge,
}

/// Physical length of one geometric unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scale {
    Pi,
    Exact(Q),
}

impl Scale {
    pub fn to_f64(self) -> f64 {
        match self {
            Scale::Pi => std::f64::consts::PI,
            Scale::Exact(x) => to_f64(x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpacetimeLit", into = "SpacetimeLit")]
pub struct Spacetime {
    pub kind: Kind,
    pub scale: Scale,
}

/// Config form: `{kind: "strip", width: "pi"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpacetimeLit {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<String>,
}

impl TryFrom<SpacetimeLit> for Spacetime {
    type Error = String;
    fn try_from(l: SpacetimeLit) -> Result<Self, String> {
        let scale = match l.width.as_deref().map(str::trim) {
            None | Some("pi") | Some("π") => Scale::Pi,
            Some(w) => {
                let x = crate::rational::parse_q(w)?;
                if x <= qi(0) {
                    return Err(format!("width must be positive, got {w}"));
                }
                Scale::Exact(x)
            }
        };
        let scale = match (l.kind, l.width.is_none()) {
            (Kind::Strip, _) | (_, false) => scale,
            _ => Scale::Exact(qi(1)),
        };
        Ok(Spacetime { kind: l.kind, scale })
    }
}

impl From<Spacetime> for SpacetimeLit {
    fn from(m: Spacetime) -> Self {
        let width = match m.scale {
            Scale::Pi => "pi".to_string(),
            Scale::Exact(x) => crate::rational::fmt_q(x),
        };
        SpacetimeLit { kind: m.kind, width: Some(width) }
    }
}

impl Default for Spacetime {
    fn default() -> Self {
        Spacetime::strip_pi()
    }
}

/// A point in null coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NullPoint {
    pub u: Q,
    pub v: Q,
}

impl NullPoint {
    pub fn new(u: Q, v: Q) -> Self {
        NullPoint { u, v }
    }

    pub fn from_tx(t: Q, x: Q) -> Self {
        NullPoint { u: t - x, v: t + x }
    }

    pub fn t(&self) -> Q {
        (self.u + self.v) / qi(2)
    }

    pub fn x(&self) -> Q {
        (self.v - self.u) / qi(2)
    }

    /// `self <= other` in the causal order of the flat cone.
    pub fn precedes(&self, other: &NullPoint) -> bool {
        self.u <= other.u && self.v <= other.v
    }
}

impl Spacetime {
    pub fn strip_pi() -> Self {
        Spacetime { kind: Kind::Strip, scale: Scale::Pi }
    }

    pub fn strip(width: Q) -> Self {
        Spacetime { kind: Kind::Strip, scale: Scale::Exact(width) }
    }

    pub fn half_plane() -> Self {
        Spacetime { kind: Kind::HalfPlane, scale: Scale::Exact(qi(1)) }
    }

    pub fn diamond_with_edge(size: Q) -> Self {
        Spacetime { kind: Kind::DiamondWithEdge, scale: Scale::Exact(size) }
    }

    pub fn unit_length(&self) -> f64 {
        self.scale.to_f64()
    }

    /// Upper bound on `v - u`, if any.
    pub fn band_width(&self) -> Option<Q> {
        match self.kind {
            Kind::Strip => Some(qi(2)),
            _ => None,
        }
    }

    /// Open lower bound on `u` (the past null edge of the cut diamond).
    pub fn u_floor(&self) -> Option<Q> {
        match self.kind {
            Kind::DiamondWithEdge => Some(qi(-1)),
            _ => None,
        }
    }

    /// Open upper bound on `v`.
    pub fn v_ceil(&self) -> Option<Q> {
        match self.kind {
            Kind::DiamondWithEdge => Some(qi(1)),
            _ => None,
        }
    }

    /// Spatial extent in units, if bounded.
    pub fn spatial_width(&self) -> Option<Q> {
        match self.kind {
            Kind::Strip => Some(qi(1)),
            Kind::DiamondWithEdge => Some(qi(1)),
            Kind::HalfPlane => None,
        }
    }

    pub fn contains(&self, p: NullPoint) -> bool {
        let d = p.v - p.u;
        if d < qi(0) {
            return false;
        }
        if let Some(w) = self.band_width() {
            if d > w {
                return false;
            }
        }
        if let Some(f) = self.u_floor() {
            if p.u <= f {
                return false;
            }
        }
        if let Some(c) = self.v_ceil() {
            if p.v >= c {
                return false;
            }
        }
        true
    }

    /// Point on the timelike boundary `∂M`.
    pub fn on_boundary(&self, p: NullPoint) -> bool {
        if !self.contains(p) {
            return false;
        }
        let d = p.v - p.u;
        d == qi(0) || self.band_width() == Some(d)
    }

    /// The boundary lines are `x = const`; their tangent `∂_t` has norm `-1`
    /// in signature (−,+), so the induced metric is Lorentzian.
    pub fn boundary_is_timelike(&self) -> bool {
        let tangent = (1.0f64, 0.0f64);
        let norm = -tangent.0 * tangent.0 + tangent.1 * tangent.1;
        norm < 0.0
    }

    pub fn whole(&self) -> Region {
        Region::whole(*self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn membership_and_boundary() {
        let m = Spacetime::strip_pi();
        let p = NullPoint::from_tx(qi(0), q(1, 2));
        assert!(m.contains(p));
        assert!(!m.on_boundary(p));
        assert!(m.on_boundary(NullPoint::from_tx(qi(3), qi(1))));
        assert!(!m.contains(NullPoint::from_tx(qi(0), q(11, 10))));
        assert!(m.boundary_is_timelike());
        let d = Spacetime::diamond_with_edge(qi(1));
        assert!(d.contains(NullPoint::from_tx(qi(0), qi(0))));
        assert!(!d.contains(NullPoint::from_tx(q(1, 2), q(1, 2))));
    }

    #[test]
    fn spacetime_literal() {
        let m: Spacetime = serde_json::from_str(r#"{"kind":"strip","width":"pi"}"#).unwrap();
        assert_eq!(m, Spacetime::strip_pi());
        let back: Spacetime = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        let hp: Spacetime = serde_json::from_str(r#"{"kind":"half_plane"}"#).unwrap();
        assert_eq!(hp, Spacetime::half_plane());
        assert!(serde_json::from_str::<Spacetime>(r#"{"kind":"strip","width":"-1"}"#).is_err());
    }
}
