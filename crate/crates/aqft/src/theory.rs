//! Quantum field theories on finite catalogs: functors into *-algebras,
//! their axioms, the pullbacks along `D` and `I`, ideals, quotients and
//! additivity from the interior.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::One;
use rand::Rng;

use crate::algebra::{quotient_by_ideal, AlgebraError, Ideal, Morphism, Presented, StarAlgebra, Truncated};
use crate::algebra::presented::{self, Poly};
use crate::catalog::{Catalog, CheckLine};
use crate::linalg::{c, norm_inf, Matrix, C64, TOL_LIN};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TheoryError {
    #[error("no algebra assigned to region {0}")]
    MissingObject(String),
    #[error("no morphism for the inclusion {0} -> {1}")]
    MissingMorphism(String, String),
    #[error("not functorial: {0}")]
    NotFunctorial(String),
    #[error("not an ideal functor at {0}")]
    NotAnIdealFunctor(String),
    #[error("algebra error at {0}: {1}")]
    Algebra(String, AlgebraError),
}

fn fail_list(v: Vec<String>) -> Option<String> {
    if v.is_empty() {
        None
    } else {
        Some(v.join("; "))
    }
}

/// A functor from a full sub-poset of a catalog to finite-dimensional *-algebras.
#[derive(Clone, Debug)]
pub struct Theory {
    pub catalog: Arc<Catalog>,
    pub objects: Vec<usize>,
    algebras: BTreeMap<usize, Arc<StarAlgebra>>,
    maps: BTreeMap<(usize, usize), Morphism>,
}

impl Theory {
    /// `maps` must cover every proper inclusion between objects; identities are added.
    pub fn new(
        catalog: Arc<Catalog>,
        objects: Vec<usize>,
        algebras: BTreeMap<usize, Arc<StarAlgebra>>,
        matrices: BTreeMap<(usize, usize), Matrix>,
    ) -> Result<Theory, TheoryError> {
        let mut maps = BTreeMap::new();
        for &a in &objects {
            let aa = algebras.get(&a).ok_or_else(|| TheoryError::MissingObject(catalog.name(a).into()))?;
            for &b in &objects {
                if !catalog.leq(a, b) {
                    continue;
                }
                let bb = &algebras[&b];
                let m = if a == b {
                    Matrix::identity(aa.dim())
                } else {
                    matrices
                        .get(&(a, b))
                        .cloned()
                        .ok_or_else(|| TheoryError::MissingMorphism(catalog.name(a).into(), catalog.name(b).into()))?
                };
                let f = Morphism::new(aa.clone(), bb.clone(), m)
                    .map_err(|e| TheoryError::Algebra(format!("{} -> {}", catalog.name(a), catalog.name(b)), e))?;
                maps.insert((a, b), f);
            }
        }
        let t = Theory { catalog, objects, algebras, maps };
        let f = t.check_functoriality();
        if !f.passed {
            return Err(TheoryError::NotFunctorial(f.witness.unwrap_or_default()));
        }
        Ok(t)
    }

    pub fn from_fn(
        catalog: Arc<Catalog>,
        objects: Vec<usize>,
        alg: impl Fn(usize) -> StarAlgebra,
        map: impl Fn(usize, usize) -> Matrix,
    ) -> Result<Theory, TheoryError> {
        let algebras: BTreeMap<_, _> = objects.iter().map(|&o| (o, Arc::new(alg(o)))).collect();
        let mut matrices = BTreeMap::new();
        for &a in &objects {
            for &b in &objects {
                if a != b && catalog.leq(a, b) {
                    matrices.insert((a, b), map(a, b));
                }
            }
        }
        Theory::new(catalog, objects, algebras, matrices)
    }

    /// Same algebra everywhere, identity maps.
    pub fn constant(catalog: Arc<Catalog>, objects: Vec<usize>, a: StarAlgebra) -> Result<Theory, TheoryError> {
        let n = a.dim();
        Theory::from_fn(catalog, objects, |_| a.clone(), |_, _| Matrix::identity(n))
    }

    pub fn algebra(&self, v: usize) -> &Arc<StarAlgebra> {
        &self.algebras[&v]
    }

    pub fn map(&self, a: usize, b: usize) -> &Morphism {
        &self.maps[&(a, b)]
    }

    pub fn has_object(&self, v: usize) -> bool {
        self.algebras.contains_key(&v)
    }

    pub fn inclusions(&self) -> Vec<(usize, usize)> {
        self.maps.keys().copied().collect()
    }

    pub fn name(&self, v: usize) -> &str {
        self.catalog.name(v)
    }

    pub fn check_functoriality(&self) -> CheckLine {
        let mut bad = vec![];
        for &a in &self.objects {
            if self.map(a, a).m.max_abs_diff(&Matrix::identity(self.algebra(a).dim())) > TOL_LIN {
                bad.push(format!("identity at {}", self.name(a)));
            }
            for &b in &self.objects {
                for &c in &self.objects {
                    if !(self.catalog.leq(a, b) && self.catalog.leq(b, c)) {
                        continue;
                    }
                    let comp = self.map(a, b).then(self.map(b, c));
                    if comp.m.max_abs_diff(&self.map(a, c).m) > TOL_LIN {
                        bad.push(format!("{} -> {} -> {}", self.name(a), self.name(b), self.name(c)));
                    }
                }
            }
        }
        CheckLine::new("functoriality", bad.is_empty(), fail_list(bad))
    }

    /// Images of causally disjoint subregions commute in every common target.
    pub fn check_causality(&self) -> CheckLine {
        let mut bad = vec![];
        for (a, b, v) in self.catalog.orthogonal_pairs() {
            if !(self.has_object(a) && self.has_object(b) && self.has_object(v)) || a > b {
                continue;
            }
            let (fa, fb) = (self.map(a, v), self.map(b, v));
            let target = self.algebra(v);
            'pairs: for i in 0..fa.src.dim() {
                for j in 0..fb.src.dim() {
                    let x = fa.m.column(i);
                    let y = fb.m.column(j);
                    let comm = norm_inf(&target.commutator(&x, &y));
                    if comm > TOL_LIN {
                        bad.push(format!(
                            "[{}:e{i}, {}:e{j}] = {comm:.3e} in {}",
                            self.name(a),
                            self.name(b),
                            self.name(v)
                        ));
                        break 'pairs;
                    }
                }
            }
        }
        CheckLine::new("causality axiom", bad.is_empty(), fail_list(bad))
    }

    /// Cauchy morphisms go to isomorphisms.
    pub fn check_time_slice(&self) -> CheckLine {
        let mut bad = vec![];
        for (&(a, b), f) in &self.maps {
            if a != b && self.catalog.is_cauchy(a, b) && !f.is_iso() {
                bad.push(format!("{} -> {}", self.name(a), self.name(b)));
            }
        }
        CheckLine::new("time-slice axiom", bad.is_empty(), fail_list(bad))
    }

    /// `U ↦ T(D(U))` on every catalog region.
    pub fn pullback_d(&self) -> Result<Theory, TheoryError> {
        let cat = &self.catalog;
        let all: Vec<usize> = (0..cat.len()).collect();
        for &u in &all {
            if !self.has_object(cat.dev(u)) {
                return Err(TheoryError::MissingObject(cat.name(cat.dev(u)).into()));
            }
        }
        let algebras = all.iter().map(|&u| (u, self.algebra(cat.dev(u)).clone())).collect();
        let mut matrices = BTreeMap::new();
        for &a in &all {
            for &b in &all {
                if a != b && cat.leq(a, b) {
                    matrices.insert((a, b), self.map(cat.dev(a), cat.dev(b)).m.clone());
                }
            }
        }
        Theory::new(cat.clone(), all, algebras, matrices)
    }

    /// Restriction to the given objects (`I` for the stable ones, `res` for the interior ones).
    pub fn restrict(&self, objects: &[usize]) -> Result<Theory, TheoryError> {
        let mut algebras = BTreeMap::new();
        for &o in objects {
            let a = self.algebras.get(&o).ok_or_else(|| TheoryError::MissingObject(self.name(o).into()))?;
            algebras.insert(o, a.clone());
        }
        let matrices = self
            .maps
            .iter()
            .filter(|((a, b), _)| objects.contains(a) && objects.contains(b) && a != b)
            .map(|(&k, f)| (k, f.m.clone()))
            .collect();
        Theory::new(self.catalog.clone(), objects.to_vec(), algebras, matrices)
    }

    pub fn pullback_i(&self) -> Result<Theory, TheoryError> {
        self.restrict(&self.catalog.localize().objects)
    }

    /// `T(η_U): T(U) → T(D(U))`, the comparison between a theory on the full
    /// catalog and the pullback of its restriction to stable regions.
    pub fn unit_d(&self) -> TheoryMorphism {
        let comps = self
            .objects
            .iter()
            .map(|&u| (u, self.map(u, self.catalog.dev(u)).clone()))
            .collect();
        TheoryMorphism { components: comps }
    }

    /// The subalgebra generated by the images of all interior objects is everything.
    pub fn is_additive_at(&self, v: usize) -> bool {
        self.interior_generated_dim(v) == self.algebra(v).dim()
    }

    pub fn interior_generated_dim(&self, v: usize) -> usize {
        let gens: Vec<Vec<C64>> = self
            .objects
            .iter()
            .filter(|&&u| self.catalog.is_interior(u) && self.catalog.leq(u, v))
            .flat_map(|&u| {
                let f = self.map(u, v);
                (0..f.src.dim()).map(move |i| f.m.column(i))
            })
            .collect();
        self.algebra(v).generated_dim(&gens)
    }

    pub fn is_additive(&self) -> bool {
        self.objects.iter().all(|&v| self.is_additive_at(v))
    }

    /// An isomorphic theory obtained by random complex basis changes, with the isomorphism.
    pub fn conjugate(&self, rng: &mut impl Rng) -> (Theory, TheoryMorphism) {
        let mut algebras = BTreeMap::new();
        let mut isos = BTreeMap::new();
        for &o in &self.objects {
            let a = self.algebra(o);
            let (b, iso) = loop {
                let n = a.dim();
                let mut p = Matrix::identity(n);
                for x in p.data.iter_mut() {
                    *x += c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
                }
                if let Some(r) = a.change_basis(&p) {
                    break r;
                }
            };
            algebras.insert(o, b);
            isos.insert(o, iso);
        }
        let mut matrices = BTreeMap::new();
        for (&(a, b), f) in &self.maps {
            if a != b {
                let inv = isos[&a].m.inverse().expect("basis change is invertible");
                matrices.insert((a, b), isos[&b].m.compose(&f.m).compose(&inv));
            }
        }
        let t = Theory::new(self.catalog.clone(), self.objects.clone(), algebras, matrices)
            .expect("conjugate of a theory is a theory");
        (t, TheoryMorphism { components: isos })
    }
}

/// Natural transformation between theories on the same objects.
#[derive(Clone, Debug)]
pub struct TheoryMorphism {
    pub components: BTreeMap<usize, Morphism>,
}

impl TheoryMorphism {
    pub fn identity(t: &Theory) -> TheoryMorphism {
        TheoryMorphism {
            components: t.objects.iter().map(|&o| (o, Morphism::identity(t.algebra(o).clone()))).collect(),
        }
    }

    pub fn check_naturality(&self, src: &Theory, dst: &Theory) -> CheckLine {
        let mut bad = vec![];
        for (a, b) in src.inclusions() {
            let (Some(ca), Some(cb)) = (self.components.get(&a), self.components.get(&b)) else {
                bad.push(format!("missing component at {} or {}", src.name(a), src.name(b)));
                continue;
            };
            let lhs = cb.m.compose(&src.map(a, b).m);
            let rhs = dst.map(a, b).m.compose(&ca.m);
            if lhs.max_abs_diff(&rhs) > TOL_LIN {
                bad.push(format!("square at {} -> {}", src.name(a), src.name(b)));
            }
        }
        CheckLine::new("naturality", bad.is_empty(), fail_list(bad))
    }

    pub fn is_iso(&self) -> bool {
        self.components.values().all(Morphism::is_iso)
    }
}

/// Per-object two-sided *-ideals, compatible with the theory's morphisms.
#[derive(Clone, Debug)]
pub struct IdealFunctor {
    pub components: BTreeMap<usize, Ideal>,
}

impl IdealFunctor {
    pub fn new(t: &Theory, components: BTreeMap<usize, Ideal>) -> Result<IdealFunctor, TheoryError> {
        for (a, b) in t.inclusions() {
            let (ia, ib) = (&components[&a], &components[&b]);
            let f = t.map(a, b);
            if ia.basis().iter().any(|x| !ib.contains(&f.apply(x))) {
                return Err(TheoryError::NotAnIdealFunctor(format!("{} -> {}", t.name(a), t.name(b))));
            }
        }
        Ok(IdealFunctor { components })
    }

    pub fn zero(t: &Theory) -> IdealFunctor {
        IdealFunctor { components: t.objects.iter().map(|&o| (o, Ideal::zero(t.algebra(o).clone()))).collect() }
    }

    pub fn full(t: &Theory) -> IdealFunctor {
        IdealFunctor { components: t.objects.iter().map(|&o| (o, Ideal::full(t.algebra(o).clone()))).collect() }
    }

    pub fn kernel(k: &TheoryMorphism, t: &Theory) -> Result<IdealFunctor, TheoryError> {
        let mut comps = BTreeMap::new();
        for (&o, f) in &k.components {
            let i = crate::algebra::morphism_kernel(f).map_err(|e| TheoryError::Algebra(t.name(o).into(), e))?;
            comps.insert(o, i);
        }
        IdealFunctor::new(t, comps)
    }

    pub fn is_trivial_on_interior(&self, catalog: &Catalog) -> bool {
        self.components.iter().all(|(&o, i)| !catalog.is_interior(o) || i.is_zero())
    }
}

/// Objectwise quotient with induced morphisms and the projection.
pub fn quotient_theory(t: &Theory, ideal: &IdealFunctor) -> Result<(Theory, TheoryMorphism), TheoryError> {
    let mut algebras = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for &o in &t.objects {
        let i = ideal.components.get(&o).ok_or_else(|| TheoryError::NotAnIdealFunctor(t.name(o).into()))?;
        let (q, p) = quotient_by_ideal(i).map_err(|e| TheoryError::Algebra(t.name(o).into(), e))?;
        algebras.insert(o, q);
        proj.insert(o, p);
    }
    let mut matrices = BTreeMap::new();
    for (a, b) in t.inclusions() {
        if a == b {
            continue;
        }
        let ia = &ideal.components[&a];
        if ia.basis().iter().any(|x| !ideal.components[&b].contains(&t.map(a, b).apply(x))) {
            return Err(TheoryError::NotAnIdealFunctor(format!("{} -> {}", t.name(a), t.name(b))));
        }
        let cols: Vec<Vec<C64>> = ia
            .reps()
            .iter()
            .map(|&r| proj[&b].apply(&t.map(a, b).m.column(r)))
            .collect();
        matrices.insert((a, b), Matrix::from_columns(algebras[&b].dim(), &cols));
    }
    let q = Theory::new(t.catalog.clone(), t.objects.clone(), algebras, matrices)?;
    Ok((q, TheoryMorphism { components: proj }))
}

/// Unital *-morphisms with 0/1 matrix entries between two algebras. For
/// diagonal algebras `C^m → C^n` these are all of them.
pub fn zero_one_morphisms(a: &Arc<StarAlgebra>, b: &Arc<StarAlgebra>) -> Vec<Morphism> {
    let (m, n) = (a.dim(), b.dim());
    let cells = m * n;
    assert!(cells <= 16, "0/1 enumeration is limited to dimensions with m n <= 16");
    let mut out = vec![];
    for mask in 0u32..(1 << cells) {
        let mut mat = Matrix::zeros(n, m);
        for k in 0..cells {
            if mask & (1 << k) != 0 {
                mat.data[k] = C64::one();
            }
        }
        if let Ok(f) = Morphism::new(a.clone(), b.clone(), mat) {
            out.push(f);
        }
    }
    out
}

/// All natural transformations `G ⇒ H` whose components have 0/1 entries.
pub fn natural_transformations(g: &Theory, h: &Theory) -> Vec<BTreeMap<usize, Matrix>> {
    let objs = search_order(g);
    let cands: Vec<Vec<Matrix>> = objs
        .iter()
        .map(|&o| zero_one_morphisms(g.algebra(o), h.algebra(o)).into_iter().map(|f| f.m).collect())
        .collect();
    let mut out = vec![];
    let mut chosen: Vec<usize> = vec![];
    fn rec(
        g: &Theory,
        h: &Theory,
        objs: &[usize],
        cands: &[Vec<Matrix>],
        chosen: &mut Vec<usize>,
        out: &mut Vec<BTreeMap<usize, Matrix>>,
    ) {
        let k = chosen.len();
        if k == objs.len() {
            out.push(objs.iter().enumerate().map(|(j, &o)| (o, cands[j][chosen[j]].clone())).collect());
            return;
        }
        for ci in 0..cands[k].len() {
            let ok = (0..k).all(|j| {
                let (a, b) = (objs[j], objs[k]);
                let (ma, mb) = (&cands[j][chosen[j]], &cands[k][ci]);
                let sq = |a: usize, b: usize, ma: &Matrix, mb: &Matrix| {
                    mb.compose(&g.map(a, b).m).max_abs_diff(&h.map(a, b).m.compose(ma)) <= TOL_LIN
                };
                (!g.catalog.leq(a, b) || sq(a, b, ma, mb)) && (!g.catalog.leq(b, a) || sq(b, a, mb, ma))
            });
            if ok {
                chosen.push(ci);
                rec(g, h, objs, cands, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(g, h, &objs, &cands, &mut chosen, &mut out);
    out
}

/// Objects ordered so that each is comparable to as many earlier ones as
/// possible; the search then prunes at the first inconsistent square.
fn search_order(g: &Theory) -> Vec<usize> {
    let cat = &g.catalog;
    let related = |a: usize, b: usize| a != b && (cat.leq(a, b) || cat.leq(b, a));
    let mut rest = g.objects.clone();
    let mut out: Vec<usize> = vec![];
    while !rest.is_empty() {
        let score = |v: usize| {
            let linked = out.iter().filter(|&&o| related(o, v)).count();
            let degree = rest.iter().filter(|&&o| related(o, v)).count();
            (linked, degree)
        };
        let k = (0..rest.len()).max_by_key(|&k| (score(rest[k]), std::cmp::Reverse(k))).expect("nonempty");
        out.push(rest.remove(k));
    }
    out
}

/// Precomposition with `D` is a bijection `Nat(G, H) → Nat(G D, H D)`.
pub fn check_localization_requirement_c(g: &Theory, h: &Theory) -> Result<CheckLine, TheoryError> {
    let loc = natural_transformations(g, h);
    let (gd, hd) = (g.pullback_d()?, h.pullback_d()?);
    let full = natural_transformations(&gd, &hd);
    let cat = &g.catalog;
    let image: Vec<BTreeMap<usize, Matrix>> = loc
        .iter()
        .map(|alpha| (0..cat.len()).map(|u| (u, alpha[&cat.dev(u)].clone())).collect())
        .collect();
    let same = |x: &BTreeMap<usize, Matrix>, y: &BTreeMap<usize, Matrix>| {
        x.iter().all(|(k, m)| m.max_abs_diff(&y[k]) <= TOL_LIN)
    };
    let injective = (0..image.len()).all(|i| (0..i).all(|j| !same(&image[i], &image[j])));
    let lands = image.iter().all(|x| full.iter().any(|y| same(x, y)));
    let surjective = full.iter().all(|y| image.iter().any(|x| same(x, y)));
    let passed = injective && lands && surjective;
    let witness = format!("|Nat(G,H)| = {}, |Nat(GD,HD)| = {}", loc.len(), full.len());
    Ok(CheckLine::new("precomposition with D is a bijection on natural transformations", passed, Some(witness)))
}

/// A theory whose algebras are presented by generators and relations.
#[derive(Clone, Debug)]
pub struct PresentedTheory {
    pub catalog: Arc<Catalog>,
    pub objects: Vec<usize>,
    pub algebras: BTreeMap<usize, Presented>,
    /// Image of each source letter as a polynomial in the target letters.
    pub maps: BTreeMap<(usize, usize), Vec<Poly>>,
}

impl PresentedTheory {
    pub fn from_theory(t: &Theory) -> PresentedTheory {
        let algebras = t
            .objects
            .iter()
            .map(|&o| (o, Presented::from_star_algebra(t.algebra(o), &format!("{}:", t.name(o)))))
            .collect();
        let maps = t
            .inclusions()
            .into_iter()
            .map(|(a, b)| {
                let f = t.map(a, b);
                let imgs = (0..f.src.dim())
                    .map(|i| {
                        presented::clean(
                            f.m.column(i).into_iter().enumerate().map(|(k, c)| (vec![k as u32], c)).collect(),
                        )
                    })
                    .collect();
                ((a, b), imgs)
            })
            .collect();
        PresentedTheory { catalog: t.catalog.clone(), objects: t.objects.clone(), algebras, maps }
    }

    pub fn name(&self, v: usize) -> &str {
        self.catalog.name(v)
    }

    pub fn apply(&self, a: usize, b: usize, p: &Poly) -> Poly {
        presented::substitute(p, &self.maps[&(a, b)])
    }

    pub fn truncations(&self, max_len: usize) -> BTreeMap<usize, Truncated> {
        self.algebras.iter().map(|(&o, p)| (o, p.truncate(max_len))).collect()
    }

    /// Commutators of generator images from causally disjoint subregions
    /// vanish in the truncated target (truncation at least 2).
    pub fn check_causality(&self, max_len: usize) -> CheckLine {
        let tr = self.truncations(max_len.max(2));
        let mut bad = vec![];
        for (a, b, v) in self.catalog.orthogonal_pairs() {
            if a > b || !(self.algebras.contains_key(&a) && self.algebras.contains_key(&b) && self.algebras.contains_key(&v)) {
                continue;
            }
            for i in 0..self.algebras[&a].len() {
                for j in 0..self.algebras[&b].len() {
                    let x = &self.maps[&(a, v)][i];
                    let y = &self.maps[&(b, v)][j];
                    if presented::degree(x) + presented::degree(y) > tr[&v].max_len {
                        continue;
                    }
                    let comm = presented::sub(&presented::mul(x, y), &presented::mul(y, x));
                    let zero = tr[&v].contains_zero(&comm).unwrap_or(false);
                    if !zero {
                        bad.push(format!("{}:{i} , {}:{j} in {}", self.name(a), self.name(b), self.name(v)));
                    }
                }
            }
        }
        CheckLine::new(format!("causality axiom (truncation {})", max_len.max(2)), bad.is_empty(), fail_list(bad))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::DEFAULT_BOUND;
    use crate::fixtures::strip_seeds;
    use crate::geometry::Spacetime;
    use crate::rational::qi;

    fn catalog() -> Arc<Catalog> {
        let m = Spacetime::strip(qi(1));
        Arc::new(Catalog::build(m, &strip_seeds(m), DEFAULT_BOUND).unwrap())
    }

    #[test]
    fn constant_theory_axioms() {
        let cat = catalog();
        let loc = cat.localize().objects;
        let t = Theory::constant(cat.clone(), loc, StarAlgebra::diagonal(2)).unwrap();
        assert!(t.check_causality().passed);
        let full = t.pullback_d().unwrap();
        assert!(full.check_time_slice().passed);
        assert!(full.check_causality().passed);
        let back = full.pullback_i().unwrap();
        assert_eq!(back.objects, t.objects);
        assert!(t.is_additive());
    }

    #[test]
    fn noncommuting_disjoint_pair_is_reported() {
        let cat = catalog();
        let loc = cat.localize().objects;
        // M_2 everywhere with identity maps: disjoint images cannot commute
        let t = Theory::constant(cat, loc, StarAlgebra::matrices(2)).unwrap();
        assert!(!t.check_causality().passed);
    }

    #[test]
    fn quotient_by_zero_and_full() {
        let cat = catalog();
        let loc = cat.localize().objects;
        let t = Theory::constant(cat.clone(), loc, StarAlgebra::diagonal(2)).unwrap();
        let (q, p) = quotient_theory(&t, &IdealFunctor::zero(&t)).unwrap();
        assert!(p.is_iso());
        assert!(p.check_naturality(&t, &q).passed);
        let (q, _) = quotient_theory(&t, &IdealFunctor::full(&t)).unwrap();
        assert!(q.objects.iter().all(|&o| q.algebra(o).dim() == 0));
        assert!(IdealFunctor::zero(&t).is_trivial_on_interior(&cat));
        assert!(!IdealFunctor::full(&t).is_trivial_on_interior(&cat));
    }
}
