//! The free massless Klein-Gordon field on the strip `R × [0, a]`.
//!
//! Conventions: `□ = −∂t² + ∂x²`, `P = □ + m²`. All lengths here are
//! physical (the strip width is `a`, by default `π`); catalog regions are
//! converted from geometric units by multiplying with `a`.

pub mod checks;
pub mod green;
pub mod model;
pub mod support;

use serde::{Deserialize, Serialize};

pub use green::{GreenField, GreenPair, Lattice};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KgError {
    #[error("closed-form Green's operators need m = 0, got m = {0}")]
    UnsupportedMass(f64),
    #[error("support of {0} touches the boundary")]
    SupportTouchesBoundary(String),
    #[error("support of {0} is not inside the region")]
    SupportViolation(String),
    #[error("quotient by the P-image collapses the basis of {0}")]
    BasisDegenerate(String),
    #[error("τ fails antisymmetry by {0:.3e}")]
    NotAdjointRelated(f64),
    #[error("no catalog interior region covers {0}")]
    CoverNotFound(String),
    #[error("grid must divide the strip width into n > 0 cells")]
    BadGrid,
}

/// `amp · (1 − s²)⁴` with `s = |(t, x) − (t0, x0)| / r`, zero for `s >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub t0: f64,
    pub x0: f64,
    pub r: f64,
    pub amp: f64,
}

impl Bump {
    /// Amplitude normalized to unit integral (`∫ (1 − s²)⁴ = π r² / 5`).
    pub fn unit(t0: f64, x0: f64, r: f64) -> Bump {
        Bump { t0, x0, r, amp: 5.0 / (std::f64::consts::PI * r * r) }
    }

    pub fn integral(&self) -> f64 {
        self.amp * std::f64::consts::PI * self.r * self.r / 5.0
    }

    fn q(&self, t: f64, x: f64) -> f64 {
        ((t - self.t0).powi(2) + (x - self.x0).powi(2)) / (self.r * self.r)
    }

    pub fn value(&self, t: f64, x: f64) -> f64 {
        let q = self.q(t, x);
        if q >= 1.0 {
            0.0
        } else {
            self.amp * (1.0 - q).powi(4)
        }
    }

    /// `(∂t² f, ∂x² f)`.
    pub fn second_derivatives(&self, t: f64, x: f64) -> (f64, f64) {
        let q = self.q(t, x);
        if q >= 1.0 {
            return (0.0, 0.0);
        }
        let r2 = self.r * self.r;
        let w = 1.0 - q;
        let d = |y: f64| 48.0 * w * w * y * y / (r2 * r2) - 8.0 * w.powi(3) / r2;
        (self.amp * d(t - self.t0), self.amp * d(x - self.x0))
    }

    /// `(□ + m²) f`.
    pub fn apply_p(&self, t: f64, x: f64, m: f64) -> f64 {
        let (tt, xx) = self.second_derivatives(t, x);
        -tt + xx + m * m * self.value(t, x)
    }

    pub fn translated(&self, dt: f64, dx: f64) -> Bump {
        Bump { t0: self.t0 + dt, x0: self.x0 + dx, ..*self }
    }

    /// `x ↦ 2c − x` with the sign flipped.
    pub fn odd_reflection(&self, c: f64) -> Bump {
        Bump { x0: 2.0 * c - self.x0, amp: -self.amp, ..*self }
    }
}

/// A finite real combination of bumps (the amplitudes carry the coefficients).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub bumps: Vec<Bump>,
}

impl TestFunction {
    pub fn new(bumps: Vec<Bump>) -> Self {
        TestFunction { bumps }
    }

    pub fn single(b: Bump) -> Self {
        TestFunction { bumps: vec![b] }
    }

    pub fn value(&self, t: f64, x: f64) -> f64 {
        self.bumps.iter().map(|b| b.value(t, x)).sum()
    }

    pub fn apply_p(&self, t: f64, x: f64, m: f64) -> f64 {
        self.bumps.iter().map(|b| b.apply_p(t, x, m)).sum()
    }

    /// `Σ |amp| · π r² / 5`, an upper bound for the L¹ norm.
    pub fn l1_bound(&self) -> f64 {
        self.bumps.iter().map(|b| b.integral().abs()).sum()
    }

    pub fn sup_bound(&self) -> f64 {
        self.bumps.iter().map(|b| b.amp.abs()).sum()
    }

    pub fn time_range(&self) -> (f64, f64) {
        let lo = self.bumps.iter().map(|b| b.t0 - b.r).fold(f64::INFINITY, f64::min);
        let hi = self.bumps.iter().map(|b| b.t0 + b.r).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// Is `(t, x)` within `slack` (in each null direction) of `J^+` (`future`) or `J^-` of the support?
    pub fn in_causal_shadow(&self, t: f64, x: f64, future: bool, slack: f64) -> bool {
        let (u, v) = (t - x, t + x);
        self.bumps.iter().any(|b| {
            let (uc, vc) = (b.t0 - b.x0, b.t0 + b.x0);
            let rr = b.r * std::f64::consts::SQRT_2;
            let (du, dv) = if future {
                ((uc - u - slack).max(0.0), (vc - v - slack).max(0.0))
            } else {
                ((u - uc - slack).max(0.0), (v - vc - slack).max(0.0))
            };
            du * du + dv * dv <= rr * rr
        })
    }
}

/// `(□ + m²) f` by centred differences with step `e`.
pub fn apply_p_fd(f: impl Fn(f64, f64) -> f64, t: f64, x: f64, m: f64, e: f64) -> f64 {
    let c = f(t, x);
    let tt = (f(t + e, x) - 2.0 * c + f(t - e, x)) / (e * e);
    let xx = (f(t, x + e) - 2.0 * c + f(t, x - e)) / (e * e);
    -tt + xx + m * m * c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_bump_integrates_to_one() {
        let b = Bump::unit(0.3, 1.0, 0.4);
        let n = 400;
        let h = 1.0 / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += b.value(0.3 - 0.5 + (i as f64 + 0.5) * h, 0.5 + (j as f64 + 0.5) * h) * h * h;
            }
        }
        assert!((s - 1.0).abs() < 1e-6, "{s}");
    }

    #[test]
    fn second_derivatives_match_differences() {
        let b = Bump::unit(0.0, 0.0, 1.0);
        let e = 1e-4;
        for &(t, x) in &[(0.1, 0.2), (-0.4, 0.3), (0.0, 0.0)] {
            let tt = (b.value(t + e, x) - 2.0 * b.value(t, x) + b.value(t - e, x)) / (e * e);
            let xx = (b.value(t, x + e) - 2.0 * b.value(t, x) + b.value(t, x - e)) / (e * e);
            let (a, c) = b.second_derivatives(t, x);
            assert!((a - tt).abs() < 1e-5 * a.abs().max(1.0));
            assert!((c - xx).abs() < 1e-5 * c.abs().max(1.0));
        }
    }

    #[test]
    fn sign_convention() {
        let mode = |t: f64, x: f64| x.sin() * t.cos();
        assert!(apply_p_fd(mode, 0.7, 1.1, 0.0, 1e-3).abs() < 1e-6);
        // −∂t² + ∂x² on sin(x) e^t gives −2 sin(x) e^t
        let grow = |t: f64, x: f64| x.sin() * t.exp();
        let want = -2.0 * 1.1f64.sin() * 0.7f64.exp();
        assert!((apply_p_fd(grow, 0.7, 1.1, 0.0, 1e-3) - want).abs() < 1e-5);
    }
}
