//! Finite region categories: the poset of a curated set of regions, its
//! localization at Cauchy morphisms (the stable regions) and the interior
//! embedding `J`.

use serde::{Deserialize, Serialize};

use crate::geometry::causal::{are_causally_disjoint, is_causally_convex, is_interior};
use crate::geometry::development::cauchy_development;
use crate::geometry::{GeometryError, RectLit, Region, Spacetime};

pub const DEFAULT_BOUND: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("no seed regions given")]
    EmptyCatalog,
    #[error("seed region {0} is not causally convex")]
    NotCausallyConvex(String),
    #[error("closure under development exceeds {0} regions")]
    ClosureOverflow(usize),
    #[error("regions {0} and {1} are not causally disjoint interior stable regions inside the target")]
    NotDisjoint(String, String),
    #[error("unknown region {0}")]
    UnknownRegion(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub m: Spacetime,
    names: Vec<String>,
    regions: Vec<Region>,
    dev: Vec<usize>,
    interior: Vec<bool>,
    leq: Vec<Vec<bool>>,
    cauchy: Vec<Vec<bool>>,
    disjoint: Vec<Vec<bool>>,
}

/// Outcome of one named verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl CheckLine {
    pub fn new(name: impl Into<String>, passed: bool, witness: Option<String>) -> Self {
        CheckLine { name: name.into(), passed, witness }
    }
}

fn position(regions: &[Region], r: &Region) -> Option<usize> {
    regions.iter().position(|x| x == r)
}

impl Catalog {
    /// Seeds plus their developments plus `D(V1 ⊔ V2)` for every causally
    /// disjoint pair of interior stable regions, iterated to a fixpoint.
    pub fn build(m: Spacetime, seeds: &[(String, Region)], bound: usize) -> Result<Catalog, CatalogError> {
        if seeds.is_empty() {
            return Err(CatalogError::EmptyCatalog);
        }
        let mut names: Vec<String> = vec![];
        let mut regions: Vec<Region> = vec![];
        for (name, r) in seeds {
            if !is_causally_convex(r) {
                return Err(CatalogError::NotCausallyConvex(name.clone()));
            }
            if position(&regions, r).is_none() {
                names.push(name.clone());
                regions.push(r.clone());
            }
        }
        let whole = m.whole();
        let add = |names: &mut Vec<String>, regions: &mut Vec<Region>, name: String, r: Region| {
            if let Some(i) = position(regions, &r) {
                return Ok(i);
            }
            if regions.len() >= bound {
                return Err(CatalogError::ClosureOverflow(bound));
            }
            names.push(if r == whole { "M".to_string() } else { name });
            regions.push(r);
            Ok(regions.len() - 1)
        };
        let mut devs: Vec<Option<usize>> = vec![];
        let mut seen_pairs = std::collections::BTreeSet::new();
        loop {
            let before = regions.len();
            let mut i = 0;
            while i < regions.len() {
                if devs.len() <= i {
                    devs.push(None);
                }
                if devs[i].is_none() {
                    let d = cauchy_development(&regions[i])?;
                    let name = format!("D({})", names[i]);
                    let j = add(&mut names, &mut regions, name, d)?;
                    devs[i] = Some(j);
                }
                i += 1;
            }
            let n = regions.len();
            for a in 0..n {
                for b in (a + 1)..n {
                    if seen_pairs.contains(&(a, b)) {
                        continue;
                    }
                    let (da, db) = (devs.get(a).copied().flatten(), devs.get(b).copied().flatten());
                    let stable = da == Some(a) && db == Some(b);
                    if stable
                        && is_interior(&regions[a])
                        && is_interior(&regions[b])
                        && are_causally_disjoint(&regions[a], &regions[b])
                    {
                        seen_pairs.insert((a, b));
                        let u = regions[a].union(&regions[b]);
                        let w = cauchy_development(&u)?;
                        let name = format!("D({}+{})", names[a], names[b]);
                        add(&mut names, &mut regions, name, w)?;
                    }
                }
            }
            if regions.len() == before && devs.len() == regions.len() && devs.iter().all(Option::is_some) {
                break;
            }
        }
        let dev: Vec<usize> = devs.into_iter().map(Option::unwrap).collect();
        Ok(Catalog::assemble(m, names, regions, dev))
    }

    fn assemble(m: Spacetime, names: Vec<String>, regions: Vec<Region>, dev: Vec<usize>) -> Catalog {
        let n = regions.len();
        let interior = regions.iter().map(is_interior).collect();
        let mut leq = vec![vec![false; n]; n];
        let mut cauchy = vec![vec![false; n]; n];
        let mut disjoint = vec![vec![false; n]; n];
        for a in 0..n {
            for b in 0..n {
                leq[a][b] = a == b || regions[a].is_subset(&regions[b]);
                cauchy[a][b] = leq[a][b] && regions[dev[a]] == regions[dev[b]];
                disjoint[a][b] = are_causally_disjoint(&regions[a], &regions[b]);
            }
        }
        Catalog { m, names, regions, dev, interior, leq, cauchy, disjoint }
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn region(&self, i: usize) -> &Region {
        &self.regions[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, CatalogError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CatalogError::UnknownRegion(name.to_string()))
    }

    pub fn find(&self, r: &Region) -> Option<usize> {
        position(&self.regions, r)
    }

    /// Index of `D(U)`.
    pub fn dev(&self, i: usize) -> usize {
        self.dev[i]
    }

    pub fn is_stable(&self, i: usize) -> bool {
        self.dev[i] == i
    }

    pub fn is_interior(&self, i: usize) -> bool {
        self.interior[i]
    }

    /// Morphism `a → b` exists (inclusion).
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn is_cauchy(&self, a: usize, b: usize) -> bool {
        self.cauchy[a][b]
    }

    pub fn disjoint(&self, a: usize, b: usize) -> bool {
        self.disjoint[a][b]
    }

    pub fn morphisms(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.leq[a][b])
            .collect()
    }

    /// Orthogonal pairs `a → c ← b` with `a`, `b` causally disjoint.
    pub fn orthogonal_pairs(&self) -> Vec<(usize, usize, usize)> {
        let n = self.len();
        let mut out = vec![];
        for c in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if self.leq[a][c] && self.leq[b][c] && self.disjoint[a][b] {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    /// Returns a copy whose Cauchy flag on `a → b` is flipped.
    pub fn with_misflagged(&self, a: usize, b: usize) -> Catalog {
        let mut c = self.clone();
        c.cauchy[a][b] = !c.cauchy[a][b];
        c
    }

    /// The full sub-poset of stable regions.
    pub fn localize(&self) -> Localized {
        let objects: Vec<usize> = (0..self.len()).filter(|&i| self.is_stable(i)).collect();
        Localized { objects }
    }

    /// Interior stable regions (objects of the localized interior catalog).
    pub fn interior_localized(&self) -> Localized {
        let objects = (0..self.len()).filter(|&i| self.is_stable(i) && self.interior[i]).collect();
        Localized { objects }
    }

    /// `W = D(V1 ⊔ V2)` with `V1, V2 ⊆ W ⊆ V`, or `None` when `W` is not in the catalog.
    pub fn factor_through_interior(&self, v1: usize, v2: usize, v: usize) -> Result<Option<usize>, CatalogError> {
        let ok = v1 != v2
            && self.is_stable(v1)
            && self.is_stable(v2)
            && self.is_stable(v)
            && self.interior[v1]
            && self.interior[v2]
            && self.disjoint[v1][v2]
            && self.leq[v1][v]
            && self.leq[v2][v];
        if !ok {
            return Err(CatalogError::NotDisjoint(self.names[v1].clone(), self.names[v2].clone()));
        }
        let w = cauchy_development(&self.regions[v1].union(&self.regions[v2]))?;
        let Some(wi) = self.find(&w) else { return Ok(None) };
        let certified = self.interior[wi]
            && self.is_stable(wi)
            && is_causally_convex(&w)
            && self.leq[v1][wi]
            && self.leq[v2][wi]
            && self.leq[wi][v];
        debug_assert!(certified, "factorization region {} fails its certificate", self.names[wi]);
        Ok(certified.then_some(wi))
    }

    /// Unit/counit/triangle checks for `D ⊣ I` and agreement of stored Cauchy flags.
    pub fn check_adjunction_di(&self) -> Vec<CheckLine> {
        let mut out = vec![];
        let n = self.len();
        let fail = |v: Vec<String>| if v.is_empty() { None } else { Some(v.join("; ")) };
        let mut bad = vec![];
        for u in 0..n {
            let d = self.dev[u];
            if !self.leq[u][d] || !self.cauchy[u][d] {
                bad.push(format!("unit at {} is not a Cauchy inclusion", self.names[u]));
            }
        }
        out.push(CheckLine::new("unit components are Cauchy morphisms", bad.is_empty(), fail(bad)));
        let mut bad = vec![];
        for v in 0..n {
            if self.is_stable(v) && self.regions[self.dev[v]] != self.regions[v] {
                bad.push(format!("counit at {} is not the identity", self.names[v]));
            }
        }
        out.push(CheckLine::new("counit components are identities", bad.is_empty(), fail(bad)));
        let mut bad = vec![];
        for u in 0..n {
            let d = self.dev[u];
            // D(η_U): D(U) → D(D(U)) followed by ε_{D(U)} is the identity iff D(D(U)) = D(U)
            if self.dev[d] != d {
                bad.push(format!("D(D({})) differs from D({})", self.names[u], self.names[u]));
            }
        }
        out.push(CheckLine::new("triangle identity on the localized side", bad.is_empty(), fail(bad)));
        let mut bad = vec![];
        for v in (0..n).filter(|&v| self.is_stable(v)) {
            if !(self.leq[v][self.dev[v]] && self.leq[self.dev[v]][v]) {
                bad.push(format!("η at stable {} is not invertible", self.names[v]));
            }
        }
        out.push(CheckLine::new("triangle identity on the full side", bad.is_empty(), fail(bad)));
        let mut bad = vec![];
        for a in 0..n {
            for b in 0..n {
                let truth = self.leq[a][b]
                    && cauchy_development(&self.regions[a]).ok() == cauchy_development(&self.regions[b]).ok();
                if self.cauchy[a][b] != truth {
                    bad.push(format!("{} -> {}", self.names[a], self.names[b]));
                }
            }
        }
        out.push(CheckLine::new("stored Cauchy flags match D(U) = D(U')", bad.is_empty(), fail(bad)));
        let mut bad = vec![];
        for (a, b) in self.morphisms() {
            let (da, db) = (self.dev[a], self.dev[b]);
            if !self.leq[da][db] {
                bad.push(format!("D not monotone on {} -> {}", self.names[a], self.names[b]));
            }
            if self.cauchy[a][b] && da != db {
                bad.push(format!("D does not invert {} -> {}", self.names[a], self.names[b]));
            }
        }
        out.push(CheckLine::new("D is a functor inverting Cauchy morphisms", bad.is_empty(), fail(bad)));
        out
    }

    /// `J` from the interior localized catalog: preserves and detects orthogonality.
    pub fn check_embedding_j(&self) -> Vec<CheckLine> {
        let int = self.interior_localized();
        let loc = self.localize();
        let mut bad = vec![];
        for &o in &int.objects {
            if !loc.objects.contains(&o) {
                bad.push(format!("{} missing from the localized catalog", self.names[o]));
            }
        }
        let in_image = |i: usize| int.objects.contains(&i);
        let mut orth_bad = vec![];
        for &c in &int.objects {
            for &a in &int.objects {
                for &b in &int.objects {
                    if !(self.leq[a][c] && self.leq[b][c]) {
                        continue;
                    }
                    // in the interior catalog orthogonality is causal disjointness
                    // relative to the interior; J sends the pair to the same regions in M
                    let int_orth = self.disjoint[a][b];
                    let amb_orth = loc.objects.contains(&a)
                        && loc.objects.contains(&b)
                        && are_causally_disjoint(&self.regions[a], &self.regions[b]);
                    if int_orth != amb_orth {
                        orth_bad.push(format!("{} , {} in {}", self.names[a], self.names[b], self.names[c]));
                    }
                }
            }
        }
        let mut img_bad = vec![];
        for &o in &loc.objects {
            if !self.interior[o] && in_image(o) {
                img_bad.push(self.names[o].clone());
            }
        }
        let f = |v: Vec<String>| if v.is_empty() { None } else { Some(v.join("; ")) };
        vec![
            CheckLine::new("J is a full embedding on objects and morphisms", bad.is_empty(), f(bad)),
            CheckLine::new("J preserves and detects orthogonality", orth_bad.is_empty(), f(orth_bad)),
            CheckLine::new("boundary-touching stable regions are outside the image of J", img_bad.is_empty(), f(img_bad)),
        ]
    }

    /// Orthogonality in the localized catalog coincides with causal disjointness in `M`.
    pub fn check_localized_orthogonality(&self) -> CheckLine {
        let loc = self.localize();
        let mut bad = vec![];
        for &a in &loc.objects {
            for &b in &loc.objects {
                let ambient = are_causally_disjoint(&self.regions[a], &self.regions[b]);
                if ambient != self.disjoint[a][b] {
                    bad.push(format!("{} / {}", self.names[a], self.names[b]));
                }
            }
        }
        CheckLine::new(
            "localized orthogonality equals causal disjointness",
            bad.is_empty(),
            if bad.is_empty() { None } else { Some(bad.join("; ")) },
        )
    }

    pub fn to_doc(&self) -> CatalogDoc {
        let n = self.len();
        CatalogDoc {
            spacetime: self.m,
            scope: "finite curated catalog; statements are certified on these regions only".to_string(),
            regions: (0..n)
                .map(|i| RegionDoc {
                    id: self.names[i].clone(),
                    rects: self.regions[i].to_lits(),
                    development: self.names[self.dev[i]].clone(),
                    stable: self.is_stable(i),
                    interior: self.interior[i],
                })
                .collect(),
            inclusions: self
                .morphisms()
                .into_iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| InclusionDoc {
                    from: self.names[a].clone(),
                    to: self.names[b].clone(),
                    cauchy: self.cauchy[a][b],
                })
                .collect(),
            orthogonal: self
                .orthogonal_pairs()
                .into_iter()
                .filter(|(a, b, _)| a < b)
                .map(|(a, b, c)| [self.names[a].clone(), self.names[b].clone(), self.names[c].clone()])
                .collect(),
        }
    }

    /// Rebuilds a catalog from its document, recomputing all derived data.
    pub fn from_doc(doc: &CatalogDoc) -> Result<Catalog, CatalogError> {
        let names: Vec<String> = doc.regions.iter().map(|r| r.id.clone()).collect();
        let regions: Vec<Region> = doc.regions.iter().map(|r| Region::from_lits(doc.spacetime, &r.rects)).collect();
        let mut dev = vec![];
        for r in &doc.regions {
            dev.push(
                names
                    .iter()
                    .position(|n| *n == r.development)
                    .ok_or_else(|| CatalogError::UnknownRegion(r.development.clone()))?,
            );
        }
        Ok(Catalog::assemble(doc.spacetime, names, regions, dev))
    }
}

/// Objects of a localized (sub-)catalog, as indices into the ambient catalog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localized {
    pub objects: Vec<usize>,
}

impl Localized {
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Position of an ambient index among the objects.
    pub fn pos(&self, i: usize) -> Option<usize> {
        self.objects.iter().position(|&o| o == i)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogDoc {
    pub spacetime: Spacetime,
    pub scope: String,
    pub regions: Vec<RegionDoc>,
    pub inclusions: Vec<InclusionDoc>,
    pub orthogonal: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionDoc {
    pub id: String,
    pub rects: Vec<RectLit>,
    pub development: String,
    pub stable: bool,
    pub interior: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionDoc {
    pub from: String,
    pub to: String,
    pub cauchy: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn m() -> Spacetime {
        Spacetime::strip_pi()
    }

    #[test]
    fn single_diamond() {
        let d = Region::diamond(m(), qi(0), q(1, 2), q(1, 10));
        let c = Catalog::build(m(), &[("V".into(), d)], DEFAULT_BOUND).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c.check_adjunction_di().iter().all(|l| l.passed));
    }

    #[test]
    fn slab_gains_whole_spacetime() {
        let s = Region::null_slab(m(), qi(0), qi(1));
        let c = Catalog::build(m(), &[("S".into(), s)], DEFAULT_BOUND).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.name(1), "M");
        assert!(c.is_cauchy(0, 1));
    }

    #[test]
    fn disjoint_pair_gains_factorization_region() {
        let a = Region::diamond(m(), qi(0), q(1, 4), q(1, 10));
        let b = Region::diamond(m(), qi(0), q(3, 4), q(1, 10));
        let c = Catalog::build(m(), &[("A".into(), a), ("B".into(), b)], DEFAULT_BOUND).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.is_interior(2) && c.is_stable(2));
    }

    #[test]
    fn errors() {
        assert_eq!(Catalog::build(m(), &[], 8).unwrap_err(), CatalogError::EmptyCatalog);
        let a = Region::diamond(m(), qi(0), q(1, 4), q(1, 10));
        let b = Region::diamond(m(), qi(1), q(1, 4), q(1, 10));
        let err = Catalog::build(m(), &[("AB".into(), a.union(&b))], 8).unwrap_err();
        assert_eq!(err, CatalogError::NotCausallyConvex("AB".into()));
        let s = Region::null_slab(m(), qi(0), qi(1));
        assert_eq!(Catalog::build(m(), &[("S".into(), s)], 1).unwrap_err(), CatalogError::ClosureOverflow(1));
    }
}
