//! Support of `G φ` on the strip against a Dirichlet mode function: the
//! propagated support misses two wedges at the boundary that every mode fills.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::green::GreenPair;
use super::{KgError, TestFunction};
use crate::catalog::CheckLine;

/// Values below this count as zero in a mask.
pub const MASK_THRESHOLD: f64 = 1e-12;

/// Boolean grid on `t = p h`, `x = q h` (rows `t`, columns `x`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mask {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub cells: Vec<Vec<bool>>,
}

impl Mask {
    pub fn count(&self) -> usize {
        self.cells.iter().flatten().filter(|&&c| c).count()
    }

    pub fn write_csv(&self, w: impl Write) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["t\\x".to_string()];
        header.extend(self.x.iter().map(|x| format!("{x:.6}")));
        out.write_record(&header)?;
        for (t, row) in self.t.iter().zip(&self.cells) {
            let mut rec = vec![format!("{t:.6}")];
            rec.extend(row.iter().map(|&c| if c { "1".to_string() } else { "0".to_string() }));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SupportReport {
    pub green: Mask,
    pub mode: Mask,
    pub checks: Vec<CheckLine>,
}

/// Samples `G φ = (G^+ − G^-) φ` and `sin(πx/a) cos(πt/a)` for `|t − t_φ| <= t_half`.
pub fn demonstrate_nonsurjectivity(g: &GreenPair, phi: &TestFunction, t_half: f64) -> Result<SupportReport, KgError> {
    let (width, n) = match (g.width(), g.cells_across()) {
        (Some(w), Some(n)) => (w, n),
        _ => return Err(KgError::BadGrid),
    };
    let h = g.h();
    let (lo, hi) = phi.time_range();
    let tc = 0.5 * (lo + hi);
    let p0 = ((tc - t_half) / h).floor() as i64;
    let p1 = ((tc + t_half) / h).ceil() as i64;
    let field = g.apply(phi, (p0 as f64 * h, p1 as f64 * h))?;
    let ts: Vec<f64> = (p0..=p1).map(|p| p as f64 * h).collect();
    let xs: Vec<f64> = (0..=n).map(|q| q as f64 * h).collect();
    let k = std::f64::consts::PI / width;
    let mut green = vec![];
    let mut mode = vec![];
    let mut outside = 0;
    let mut wedge_nodes = [0usize; 2];
    let mut wedge_hits = [0usize; 2];
    let mut mode_misses = 0;
    let mut mode_in_wedges = 0;
    // each bump lies in the diamond |t − t0| + |x − x0| < √2 r; the wedges are
    // the points spacelike to every such diamond on the boundary side
    let diag = std::f64::consts::SQRT_2;
    let in_wedge = |t: f64, x: f64, left: bool| {
        phi.bumps.iter().all(|b| {
            let d = if left { b.x0 - x } else { x - b.x0 };
            (t - b.t0).abs() < d - diag * b.r - 2.0 * h
        })
    };
    for p in p0..=p1 {
        let mut grow = vec![];
        let mut mrow = vec![];
        for q in 0..=n {
            let (i, j) = (p - q, p + q);
            let (t, x) = (p as f64 * h, q as f64 * h);
            let on = field.causal(i, j).abs() > MASK_THRESHOLD;
            let mv = (k * x).sin() * (k * t).cos();
            let mon = mv.abs() > MASK_THRESHOLD;
            if on && !phi.in_causal_shadow(t, x, true, h) && !phi.in_causal_shadow(t, x, false, h) {
                outside += 1;
            }
            let wedges = [in_wedge(t, x, true), in_wedge(t, x, false)];
            for s in 0..2 {
                if wedges[s] {
                    wedge_nodes[s] += 1;
                    if on {
                        wedge_hits[s] += 1;
                    }
                    if mon {
                        mode_in_wedges += 1;
                    }
                }
            }
            let interior = q > 0 && q < n;
            let nodal = ((k * t).cos()).abs() < 1e-9;
            if interior && !nodal && !mon {
                mode_misses += 1;
            }
            grow.push(on);
            mrow.push(mon);
        }
        green.push(grow);
        mode.push(mrow);
    }
    let green = Mask { t: ts.clone(), x: xs.clone(), cells: green };
    let mode = Mask { t: ts, x: xs, cells: mode };
    let checks = vec![
        CheckLine::new("G φ is supported (nonempty mask)", green.count() > 0, Some(format!("{} nodes", green.count()))),
        CheckLine::new(
            "mask of G φ lies in J+ ∪ J- of supp φ (one-cell tolerance)",
            outside == 0,
            Some(format!("{outside} nodes outside")),
        ),
        CheckLine::new(
            "mask of G φ excludes the wedge at x = 0",
            wedge_nodes[0] > 0 && wedge_hits[0] == 0,
            Some(format!("{} of {} wedge nodes supported", wedge_hits[0], wedge_nodes[0])),
        ),
        CheckLine::new(
            "mask of G φ excludes the wedge at x = a",
            wedge_nodes[1] > 0 && wedge_hits[1] == 0,
            Some(format!("{} of {} wedge nodes supported", wedge_hits[1], wedge_nodes[1])),
        ),
        CheckLine::new(
            "mode function mask is full off its nodal lines",
            mode_misses == 0,
            Some(format!("{mode_misses} interior nodes missed")),
        ),
        CheckLine::new(
            "mode function is supported inside the wedges",
            mode_in_wedges > 0,
            Some(format!("{mode_in_wedges} wedge nodes")),
        ),
    ];
    Ok(SupportReport { green, mode, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::klein_gordon::Bump;

    #[test]
    fn mid_strip_bump_leaves_both_wedges_empty() {
        let a = std::f64::consts::PI;
        let g = GreenPair::dirichlet(a, 100, 0.0).unwrap();
        let phi = TestFunction::single(Bump::unit(0.0, a / 2.0, 0.4));
        let rep = demonstrate_nonsurjectivity(&g, &phi, a).unwrap();
        for c in &rep.checks {
            assert!(c.passed, "{c:?}");
        }
        let mut buf = vec![];
        rep.green.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), rep.green.t.len() + 1);
    }
}
