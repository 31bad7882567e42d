//! Cell-by-cell comparison of the analytic operations with the lattice oracle.

use super::causal::{
    are_causally_disjoint, causal_future, causal_past, chronological_future, chronological_past, is_causally_convex,
};
use super::development::cauchy_development;
use super::lattice::{LatticeGrid, LatticeMask};
use super::{GeometryError, Region};

/// One comparison over a family of regions; `failures` names the offenders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleCheck {
    pub name: String,
    pub failures: Vec<String>,
    /// Cells compared.
    pub cells: usize,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn diff(name: &str, a: &LatticeMask, b: &LatticeMask) -> Option<String> {
    a.first_difference(b).map(|(i, j)| format!("{name} at cell ({i}, {j})"))
}

/// `J±`, `I±`, `D` and convexity of every region, and disjointness of every
/// pair, against the lattice at `n` cells per unit length.
///
/// `I±` of an open region is open and equals `J±`; on the lattice it must lie
/// between the cellwise interior of the `J±` closure and the closure itself.
pub fn compare(regions: &[(String, Region)], n: i64) -> Vec<OracleCheck> {
    let mut checks: Vec<OracleCheck> = ["J+", "J-", "I+", "I-", "D", "causal convexity", "causal disjointness"]
        .iter()
        .map(|s| OracleCheck { name: format!("{s} matches the lattice oracle (n = {n})"), failures: vec![], cells: 0 })
        .collect();
    for (name, s) in regions {
        let m = s.spacetime();
        let g = LatticeGrid::around(m, n, &[s]);
        let cells = g.nt * g.nx;
        let sm = g.rasterize(s);
        let lj = [g.causal_future(&sm), g.causal_past(&sm)];
        let aj = [g.rasterize(&causal_future(s)), g.rasterize(&causal_past(s))];
        let ai = [g.rasterize(&chronological_future(s)), g.rasterize(&chronological_past(s))];
        for k in 0..2 {
            checks[k].cells += cells;
            checks[k].failures.extend(diff(name, &aj[k], &lj[k]));
            checks[2 + k].cells += cells;
            let inner = g.neighborhood_interior(&lj[k]);
            if !(inner.is_subset(&ai[k]) && ai[k].is_subset(&lj[k])) {
                checks[2 + k].failures.push(name.clone());
            }
        }
        checks[4].cells += cells;
        match cauchy_development(s) {
            Ok(d) => checks[4].failures.extend(diff(name, &g.rasterize(&d), &g.development(&sm))),
            Err(GeometryError::UnboundedRegion(_)) => {}
            Err(e) => checks[4].failures.push(format!("{name}: {e}")),
        }
        checks[5].cells += cells;
        if is_causally_convex(s) != g.is_causally_convex(&sm) {
            checks[5].failures.push(name.clone());
        }
    }
    for (i, (na, a)) in regions.iter().enumerate() {
        for (nb, b) in &regions[i + 1..] {
            let g = LatticeGrid::around(a.spacetime(), n, &[a, b]);
            checks[6].cells += g.nt * g.nx;
            if are_causally_disjoint(a, b) != g.are_causally_disjoint(&g.rasterize(a), &g.rasterize(b)) {
                checks[6].failures.push(format!("{na}, {nb}"));
            }
        }
    }
    checks
}

/// `D(D(S)) = D(S)` and `J±(I±(S)) = I±(S) = I±(J±(S))`, decided exactly.
pub fn identities(regions: &[(String, Region)]) -> Vec<OracleCheck> {
    let mut dd = OracleCheck { name: "D(D(S)) = D(S)".into(), failures: vec![], cells: 0 };
    let mut ij = OracleCheck { name: "J±(I±(S)) = I±(S) = I±(J±(S))".into(), failures: vec![], cells: 0 };
    for (name, s) in regions {
        match cauchy_development(s) {
            Ok(d) => {
                if cauchy_development(&d).ok().as_ref() != Some(&d) {
                    dd.failures.push(name.clone());
                }
            }
            Err(GeometryError::UnboundedRegion(_)) => {}
            Err(e) => dd.failures.push(format!("{name}: {e}")),
        }
        let fut = chronological_future(s);
        let past = chronological_past(s);
        let ok = causal_future(&fut) == fut
            && chronological_future(&causal_future(s)) == fut
            && causal_past(&past) == past
            && chronological_past(&causal_past(s)) == past;
        if !ok {
            ij.failures.push(name.clone());
        }
    }
    vec![dd, ij]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Spacetime;
    use crate::rational::{q, qi};

    #[test]
    fn two_diamonds_agree_with_the_lattice() {
        let m = Spacetime::strip(qi(1));
        let regions = vec![
            ("a".to_string(), Region::diamond(m, qi(0), q(1, 2), q(1, 10))),
            ("b".to_string(), Region::diamond(m, q(1, 2), q(1, 5), q(1, 10))),
        ];
        for c in compare(&regions, 50).iter().chain(&identities(&regions)) {
            assert!(c.passed(), "{c:?}");
        }
    }
}
