//! The universal extension `ext` of an interior theory to all stable
//! regions, presented by generators and relations: the generators of
//! `ext A(V)` are pairs `(U, a)` with `U ⊆ V` interior, products are
//! concatenations, and a letter of `U` equals its pushforward into any
//! interior `U' ⊇ U`. Also restriction, unit and counit, the additivity
//! characterization and the round trip between additive theories and
//! pairs `(A, I)`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::presented::{self, add_scaled, clean, letter, unit_poly, Poly, Word};
use crate::algebra::{AlgebraError, Morphism, Presented, Truncated};
use crate::catalog::{Catalog, CatalogError, CheckLine};
use crate::linalg::{rank, Matrix, SparseVec, C64, TOL_LIN};
use crate::theory::{quotient_theory, IdealFunctor, PresentedTheory, Theory, TheoryError, TheoryMorphism};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtError {
    #[error("catalog lacks the factorization region {0}")]
    MissingFactorizationRegion(String),
    #[error("theory is not additive at {0}")]
    NotAdditive(String),
    #[error("ideal is not trivial on the interior region {0}")]
    IdealNotTrivialOnInterior(String),
    #[error("unknown region {0} in tree term")]
    UnknownRegion(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("at {0}: {1}")]
    Algebra(String, AlgebraError),
}

/// Letter numbering of `ext A(V)`: one block of letters per interior region.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    /// `(region, first letter, number of letters)`
    pub blocks: Vec<(usize, u32, usize)>,
}

impl Layout {
    pub fn letter(&self, region: usize, k: usize) -> Option<u32> {
        self.blocks.iter().find(|b| b.0 == region).map(|b| b.1 + k as u32)
    }

    pub fn decode(&self, l: u32) -> (usize, usize) {
        let b = self.blocks.iter().rev().find(|b| b.1 <= l).expect("letter in layout");
        (b.0, (l - b.1) as usize)
    }

    pub fn regions(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.0).collect()
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.2).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn shift(p: &Poly, by: u32) -> Poly {
    p.iter().map(|(w, c)| (w.iter().map(|l| l + by).collect(), *c)).collect()
}

/// `ext A` on the stable objects of the catalog, with the interior theory it came from.
#[derive(Clone, Debug)]
pub struct ExtTheory {
    pub interior: PresentedTheory,
    pub theory: PresentedTheory,
    pub layouts: BTreeMap<usize, Layout>,
}

/// Builds `ext A` for an interior theory `A`.
pub fn ext_theory(a: &PresentedTheory) -> Result<ExtTheory, ExtError> {
    let cat = &a.catalog;
    let objects = cat.localize().objects;
    let mut layouts = BTreeMap::new();
    let mut algebras = BTreeMap::new();
    for &v in &objects {
        let regions: Vec<usize> = a.objects.iter().copied().filter(|&u| cat.leq(u, v)).collect();
        for (i, &u1) in regions.iter().enumerate() {
            for &u2 in &regions[i + 1..] {
                if cat.disjoint(u1, u2) && cat.factor_through_interior(u1, u2, v)?.is_none() {
                    return Err(ExtError::MissingFactorizationRegion(format!("D({}+{})", cat.name(u1), cat.name(u2))));
                }
            }
        }
        let mut blocks = vec![];
        let mut off = 0u32;
        for &u in &regions {
            let n = a.algebras[&u].len();
            blocks.push((u, off, n));
            off += n as u32;
        }
        let layout = Layout { blocks };
        let mut letters = vec![];
        let mut star = vec![];
        let mut relations = vec![];
        for &(u, o, _) in &layout.blocks {
            let au = &a.algebras[&u];
            letters.extend(au.letters.iter().map(|l| format!("{}/{}", cat.name(u), l)));
            star.extend(au.star.iter().map(|s| shift(s, o)));
            relations.extend(au.relations.iter().map(|r| shift(r, o)));
        }
        for &(u, o, n) in &layout.blocks {
            for &(u2, o2, _) in &layout.blocks {
                if u == u2 || !cat.leq(u, u2) {
                    continue;
                }
                for k in 0..n {
                    let img = shift(&a.maps[&(u, u2)][k], o2);
                    relations.push(presented::sub(&letter(o + k as u32), &img));
                }
            }
        }
        layouts.insert(v, layout);
        algebras.insert(v, Presented { letters, star, relations });
    }
    let mut maps = BTreeMap::new();
    for &v in &objects {
        for &v2 in &objects {
            if !cat.leq(v, v2) {
                continue;
            }
            let (l1, l2) = (&layouts[&v], &layouts[&v2]);
            let imgs = (0..l1.len() as u32)
                .map(|l| {
                    let (u, k) = l1.decode(l);
                    letter(l2.letter(u, k).expect("subregion of V is a subregion of V'"))
                })
                .collect();
            maps.insert((v, v2), imgs);
        }
    }
    let theory = PresentedTheory { catalog: cat.clone(), objects, algebras, maps };
    Ok(ExtTheory { interior: a.clone(), theory, layouts })
}

impl ExtTheory {
    /// Truncated quotient of `ext A(V)` by all relation instances of length `<= max_len`.
    pub fn brute_force_quotient(&self, v: usize, max_len: usize) -> Truncated {
        self.theory.algebras[&v].truncate(max_len)
    }

    /// `res ext A`: the restriction to interior objects.
    pub fn res(&self) -> PresentedTheory {
        restrict_presented(&self.theory, &self.interior.objects)
    }

    /// Unit `a ↦ [id_U, a]` on letters.
    pub fn unit_letters(&self, u: usize) -> Vec<Poly> {
        let n = self.interior.algebras[&u].len();
        (0..n).map(|k| letter(self.layouts[&u].letter(u, k).unwrap())).collect()
    }

    pub fn to_tree(&self, v: usize, p: &Poly) -> TreeTerm {
        let lay = &self.layouts[&v];
        let cat = &self.theory.catalog;
        let terms = p
            .iter()
            .map(|(w, c)| TreeSummand {
                coeff: [c.re, c.im],
                leaves: w
                    .iter()
                    .map(|&l| {
                        let (u, k) = lay.decode(l);
                        let n = self.interior.algebras[&u].len();
                        let mut element = vec![[0.0, 0.0]; n];
                        element[k] = [1.0, 0.0];
                        Leaf { region: cat.name(u).to_string(), element }
                    })
                    .collect(),
            })
            .collect();
        TreeTerm { target: cat.name(v).to_string(), terms }
    }

    /// Multilinear expansion of a tree term into words of letters.
    pub fn from_tree(&self, t: &TreeTerm) -> Result<(usize, Poly), ExtError> {
        let cat = &self.theory.catalog;
        let v = cat.index_of(&t.target).map_err(|_| ExtError::UnknownRegion(t.target.clone()))?;
        let lay = self.layouts.get(&v).ok_or_else(|| ExtError::UnknownRegion(t.target.clone()))?;
        let mut out = Poly::new();
        for s in &t.terms {
            let mut acc = Poly::from([(vec![], C64::new(s.coeff[0], s.coeff[1]))]);
            for leaf in &s.leaves {
                let u = cat.index_of(&leaf.region).map_err(|_| ExtError::UnknownRegion(leaf.region.clone()))?;
                let mut lp = Poly::new();
                for (k, z) in leaf.element.iter().enumerate() {
                    let l = lay.letter(u, k).ok_or_else(|| ExtError::UnknownRegion(leaf.region.clone()))?;
                    *lp.entry(vec![l]).or_insert_with(C64::zero) += C64::new(z[0], z[1]);
                }
                acc = presented::mul(&acc, &lp);
            }
            add_scaled(&mut out, &acc, C64::one());
        }
        Ok((v, clean(out)))
    }

    /// Star of a tree term: reversed tuple with starred leaves.
    pub fn star(&self, v: usize, p: &Poly) -> Poly {
        self.theory.algebras[&v].star_poly(p)
    }
}

pub fn restrict_presented(t: &PresentedTheory, objects: &[usize]) -> PresentedTheory {
    PresentedTheory {
        catalog: t.catalog.clone(),
        objects: objects.to_vec(),
        algebras: t.algebras.iter().filter(|(o, _)| objects.contains(o)).map(|(&o, p)| (o, p.clone())).collect(),
        maps: t
            .maps
            .iter()
            .filter(|((a, b), _)| objects.contains(a) && objects.contains(b))
            .map(|(&k, m)| (k, m.clone()))
            .collect(),
    }
}

/// Nested JSON form of an element of `ext A(V)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeTerm {
    pub target: String,
    pub terms: Vec<TreeSummand>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeSummand {
    pub coeff: [f64; 2],
    pub leaves: Vec<Leaf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Leaf {
    pub region: String,
    pub element: Vec<[f64; 2]>,
}

/// Rewriting to normal form for the extension of a finite-dimensional theory.
///
/// Strategy, applied to the leftmost applicable position until none applies:
/// push a leaf to the unique maximal interior region above it; merge the
/// leftmost longest block of leaves that lies in a common interior region
/// (the smallest such); expand the distinguished unit-carrying basis leaf
/// of each region in terms of `1` and the other basis leaves.
pub struct Normalizer<'a> {
    a: &'a Theory,
    layout: &'a Layout,
    top: BTreeMap<usize, Option<usize>>,
    unit_idx: BTreeMap<usize, usize>,
    memo: RefCell<HashMap<Word, Poly>>,
}

impl<'a> Normalizer<'a> {
    pub fn new(ext: &'a ExtTheory, a: &'a Theory, v: usize) -> Normalizer<'a> {
        let layout = &ext.layouts[&v];
        let regions = layout.regions();
        let cat = &a.catalog;
        let maximal = |set: &[usize]| -> Vec<usize> {
            set.iter().copied().filter(|&x| !set.iter().any(|&y| y != x && cat.leq(x, y))).collect()
        };
        let top = regions
            .iter()
            .map(|&u| {
                let above: Vec<usize> = regions.iter().copied().filter(|&w| cat.leq(u, w)).collect();
                let m = maximal(&above);
                (u, if m.len() == 1 { Some(m[0]) } else { None })
            })
            .collect();
        let unit_idx = regions
            .iter()
            .map(|&u| {
                let unit = a.algebra(u).unit();
                let best = (0..unit.len())
                    .max_by(|&i, &j| unit[i].norm().total_cmp(&unit[j].norm()).then(j.cmp(&i)))
                    .unwrap_or(0);
                (u, best)
            })
            .collect();
        Normalizer { a, layout, top, unit_idx, memo: RefCell::new(HashMap::new()) }
    }

    fn leaf_in(&self, l: u32, target: usize) -> Vec<C64> {
        let (u, k) = self.layout.decode(l);
        self.a.map(u, target).m.column(k)
    }

    fn vec_to_letters(&self, region: usize, x: &[C64]) -> Poly {
        clean(
            x.iter()
                .enumerate()
                .map(|(j, c)| (vec![self.layout.letter(region, j).unwrap()], *c))
                .collect(),
        )
    }

    fn splice(w: &[u32], from: usize, to: usize, repl: &Poly) -> Poly {
        repl.iter()
            .map(|(m, c)| {
                let mut nw = w[..from].to_vec();
                nw.extend_from_slice(m);
                nw.extend_from_slice(&w[to..]);
                (nw, *c)
            })
            .collect()
    }

    fn mergeable_block(&self, w: &[u32]) -> Option<(usize, usize, usize)> {
        let cat = &self.a.catalog;
        let regions = self.layout.regions();
        for len in (2..=w.len()).rev() {
            for s in 0..=(w.len() - len) {
                let rs: Vec<usize> = w[s..s + len].iter().map(|&l| self.layout.decode(l).0).collect();
                let common: Vec<usize> =
                    regions.iter().copied().filter(|&c| rs.iter().all(|&r| cat.leq(r, c))).collect();
                let minimal = common.iter().copied().find(|&x| !common.iter().any(|&y| y != x && cat.leq(y, x)));
                if let Some(c) = minimal {
                    return Some((s, s + len, c));
                }
            }
        }
        None
    }

    fn step(&self, w: &[u32]) -> Option<Poly> {
        for (i, &l) in w.iter().enumerate() {
            let (u, _) = self.layout.decode(l);
            if let Some(Some(t)) = self.top.get(&u) {
                if *t != u {
                    let img = self.vec_to_letters(*t, &self.leaf_in(l, *t));
                    return Some(Self::splice(w, i, i + 1, &img));
                }
            }
        }
        if let Some((s, e, c)) = self.mergeable_block(w) {
            let alg = self.a.algebra(c);
            let mut x = self.leaf_in(w[s], c);
            for &l in &w[s + 1..e] {
                x = alg.mul(&x, &self.leaf_in(l, c));
            }
            return Some(Self::splice(w, s, e, &self.vec_to_letters(c, &x)));
        }
        for (i, &l) in w.iter().enumerate() {
            let (u, k) = self.layout.decode(l);
            if self.unit_idx[&u] == k {
                let unit = self.a.algebra(u).unit();
                let mut repl = Poly::from([(vec![], C64::one() / unit[k])]);
                for (j, c) in unit.iter().enumerate() {
                    if j != k {
                        *repl.entry(vec![self.layout.letter(u, j).unwrap()]).or_insert_with(C64::zero) -= c / unit[k];
                    }
                }
                return Some(Self::splice(w, i, i + 1, &clean(repl)));
            }
        }
        None
    }

    pub fn normal_form_word(&self, w: &[u32]) -> Poly {
        if let Some(p) = self.memo.borrow().get(w) {
            return p.clone();
        }
        let out = match self.step(w) {
            None => presented::word(w),
            Some(p) => {
                let mut acc = Poly::new();
                for (m, c) in &p {
                    add_scaled(&mut acc, &self.normal_form_word(m), *c);
                }
                clean(acc)
            }
        };
        self.memo.borrow_mut().insert(w.to_vec(), out.clone());
        out
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        let mut acc = Poly::new();
        for (w, c) in p {
            add_scaled(&mut acc, &self.normal_form_word(w), *c);
        }
        clean(acc)
    }

    /// Dimension of the span of normal forms of all words of length `<= max_len`.
    pub fn span_dim(&self, max_len: usize) -> usize {
        let k = self.layout.len() as u32;
        let mut index: HashMap<Word, usize> = HashMap::new();
        let mut vecs = vec![];
        let mut layer: Vec<Word> = vec![vec![]];
        for len in 0..=max_len {
            for w in &layer {
                let nf = self.normal_form_word(w);
                let mut v = SparseVec::new();
                for (m, c) in nf {
                    let n = index.len();
                    let i = *index.entry(m).or_insert(n);
                    v.insert(i, c);
                }
                vecs.push(v);
            }
            if len < max_len {
                layer = layer
                    .iter()
                    .flat_map(|w| {
                        (0..k).map(move |l| {
                            let mut x = w.clone();
                            x.push(l);
                            x
                        })
                    })
                    .collect();
            }
        }
        rank(&vecs)
    }
}

/// `ext A` materialized objectwise as structure-constant algebras, with the truncations used.
pub fn materialize(ext: &ExtTheory, max_len: usize) -> Result<(Theory, BTreeMap<usize, Truncated>), ExtError> {
    let t = &ext.theory;
    let mut truncs = BTreeMap::new();
    let mut algebras = BTreeMap::new();
    for (&v, p) in &t.algebras {
        let tr = p.truncate(max_len);
        let alg = tr.to_star_algebra().map_err(|e| ExtError::Algebra(t.name(v).into(), e))?;
        algebras.insert(v, Arc::new(alg));
        truncs.insert(v, tr);
    }
    let mut matrices = BTreeMap::new();
    for (&(a, b), imgs) in &t.maps {
        if a == b {
            continue;
        }
        let cols = truncs[&a]
            .rep_words()
            .iter()
            .map(|w| {
                let img = presented::substitute(&presented::word(w), imgs);
                truncs[&b].coords(&img)
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| ExtError::Algebra(t.name(b).into(), e))?;
        matrices.insert((a, b), Matrix::from_columns(algebras[&b].dim(), &cols));
    }
    let th = Theory::new(t.catalog.clone(), t.objects.clone(), algebras, matrices)?;
    Ok((th, truncs))
}

/// Unit component `A(U) → ext A(U)` as a matrix into the materialized algebra.
pub fn unit_component(ext: &ExtTheory, a: &Theory, mat: &Theory, truncs: &BTreeMap<usize, Truncated>, u: usize) -> Result<Morphism, ExtError> {
    let cols = ext
        .unit_letters(u)
        .iter()
        .map(|p| truncs[&u].coords(p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| ExtError::Algebra(a.name(u).into(), e))?;
    Morphism::new(a.algebra(u).clone(), mat.algebra(u).clone(), Matrix::from_columns(mat.algebra(u).dim(), &cols))
        .map_err(|e| ExtError::Algebra(a.name(u).into(), e))
}

/// Value in `B(V)` of a word of `ext res B(V)`: the product of the pushed-forward leaves.
fn evaluate_word(b: &Theory, layout: &Layout, v: usize, w: &[u32]) -> Vec<C64> {
    let target = b.algebra(v);
    let mut acc = target.unit();
    for &l in w {
        let (u, k) = layout.decode(l);
        acc = target.mul(&acc, &b.map(u, v).m.column(k));
    }
    acc
}

/// Counit `ε_B: ext res B → B`, as matrices on representatives of the truncation.
pub fn counit_matrix(b: &Theory, ext: &ExtTheory, tr: &Truncated, v: usize) -> Matrix {
    let cols: Vec<Vec<C64>> = tr.rep_words().iter().map(|w| evaluate_word(b, &ext.layouts[&v], v, w)).collect();
    Matrix::from_columns(b.algebra(v).dim(), &cols)
}

pub fn interior_objects(cat: &Catalog) -> Vec<usize> {
    cat.interior_localized().objects
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterizeRow {
    pub region: String,
    pub interior: bool,
    pub additive: bool,
    pub lambda_iso: bool,
    pub dim: usize,
    pub generated_dim: usize,
    pub ext_dim: usize,
    pub counit_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterizeReport {
    pub max_len: usize,
    pub rows: Vec<CharacterizeRow>,
    /// `ker ε_B` vanishes on every interior object.
    pub kernel_trivial_on_interior: bool,
    /// Additivity and bijectivity of `λ_B` agree on every object.
    pub agree: bool,
}

/// Per object: additivity (span saturation inside `B(V)`) and bijectivity of
/// `λ_B: ext res B / ker ε_B → B(V)` (rank of the counit on the truncation).
pub fn characterize(b: &Theory, max_len: usize) -> Result<CharacterizeReport, ExtError> {
    let cat = &b.catalog;
    let res = b.restrict(&interior_objects(cat))?;
    let ext = ext_theory(&PresentedTheory::from_theory(&res))?;
    let mut rows = vec![];
    let mut kernel_ok = true;
    for &v in &b.objects {
        let tr = ext.brute_force_quotient(v, max_len);
        let eps = counit_matrix(b, &ext, &tr, v);
        let counit_rank = eps.rank();
        let dim = b.algebra(v).dim();
        let generated_dim = b.interior_generated_dim(v);
        let interior = cat.is_interior(v);
        if interior && counit_rank != tr.dim() {
            kernel_ok = false;
        }
        rows.push(CharacterizeRow {
            region: cat.name(v).to_string(),
            interior,
            additive: generated_dim == dim,
            lambda_iso: counit_rank == dim,
            dim,
            generated_dim,
            ext_dim: tr.dim(),
            counit_rank,
        });
    }
    let agree = rows.iter().all(|r| r.additive == r.lambda_iso);
    Ok(CharacterizeReport { max_len, rows, kernel_trivial_on_interior: kernel_ok, agree })
}

/// `ext res B` materialized with its counit `ε_B`.
pub fn counit(b: &Theory, max_len: usize) -> Result<(Theory, TheoryMorphism), ExtError> {
    let res = b.restrict(&interior_objects(&b.catalog))?;
    let ext = ext_theory(&PresentedTheory::from_theory(&res))?;
    let (mat, truncs) = materialize(&ext, max_len)?;
    let mut comps = BTreeMap::new();
    for &v in &mat.objects {
        let m = counit_matrix(b, &ext, &truncs[&v], v);
        let f = Morphism::new(mat.algebra(v).clone(), b.algebra(v).clone(), m)
            .map_err(|e| ExtError::Algebra(b.name(v).into(), e))?;
        comps.insert(v, f);
    }
    Ok((mat, TheoryMorphism { components: comps }))
}

/// A pair `(A, I)`: an interior theory and an ideal of `ext A` trivial on the interior.
#[derive(Clone, Debug)]
pub struct IqftPair {
    pub a: Theory,
    pub ext: Theory,
    pub ideal: IdealFunctor,
}

/// `S(B) = (res B, ker ε_B)` for additive `B`.
pub fn functor_s(b: &Theory, max_len: usize) -> Result<IqftPair, ExtError> {
    if let Some(&v) = b.objects.iter().find(|&&v| !b.is_additive_at(v)) {
        return Err(ExtError::NotAdditive(b.name(v).into()));
    }
    let (ext, eps) = counit(b, max_len)?;
    let ideal = IdealFunctor::kernel(&eps, &ext)?;
    let a = b.restrict(&interior_objects(&b.catalog))?;
    Ok(IqftPair { a, ext, ideal })
}

/// `Q(A, I) = ext A / I`, with the projection.
pub fn functor_q(p: &IqftPair) -> Result<(Theory, TheoryMorphism), ExtError> {
    if let Some((&v, _)) = p.ideal.components.iter().find(|(&v, i)| p.a.catalog.is_interior(v) && !i.is_zero()) {
        return Err(ExtError::IdealNotTrivialOnInterior(p.a.name(v).into()));
    }
    Ok(quotient_theory(&p.ext, &p.ideal)?)
}

/// The pair `(A, I)` built from an interior theory and an ideal given on `ext A`.
pub fn iqft_pair(a: &Theory, max_len: usize, ideal: impl FnOnce(&Theory) -> Result<IdealFunctor, TheoryError>) -> Result<IqftPair, ExtError> {
    let ext = ext_theory(&PresentedTheory::from_theory(a))?;
    let (mat, _) = materialize(&ext, max_len)?;
    let ideal = ideal(&mat)?;
    Ok(IqftPair { a: a.clone(), ext: mat, ideal })
}

/// `QS(B) ≅ B` through `λ_B`.
pub fn roundtrip_qs(b: &Theory, max_len: usize) -> Result<Vec<CheckLine>, ExtError> {
    let (ext, eps) = counit(b, max_len)?;
    let pair = functor_s(b, max_len)?;
    let (qs, _) = functor_q(&pair)?;
    let mut comps = BTreeMap::new();
    let mut bad = vec![];
    for &v in &b.objects {
        let reps = pair.ideal.components[&v].reps();
        let cols: Vec<Vec<C64>> = reps.iter().map(|&r| eps.components[&v].m.column(r)).collect();
        let m = Matrix::from_columns(b.algebra(v).dim(), &cols);
        match Morphism::new(qs.algebra(v).clone(), b.algebra(v).clone(), m) {
            Ok(f) => {
                if !f.is_iso() {
                    bad.push(format!("λ at {} has rank {} of {}", b.name(v), f.rank(), b.algebra(v).dim()));
                }
                comps.insert(v, f);
            }
            Err(e) => bad.push(format!("λ at {}: {e}", b.name(v))),
        }
    }
    let _ = ext;
    let lambda = TheoryMorphism { components: comps };
    let nat = if bad.is_empty() { lambda.check_naturality(&qs, b) } else { CheckLine::new("naturality", false, None) };
    let wit = if bad.is_empty() { None } else { Some(bad.join("; ")) };
    Ok(vec![
        CheckLine::new(format!("QS(B) -> B is an isomorphism at every object (max_len {max_len})"), wit.is_none(), wit),
        CheckLine::new("λ is natural", nat.passed, nat.witness),
    ])
}

/// `SQ(A, I) ≅ (A, I)`: the unit of `A` into `res Q(A, I)` is invertible and
/// the mediating map `ε_{Q} ∘ ext η̃` equals the canonical projection.
pub fn roundtrip_sq(p: &IqftPair, max_len: usize) -> Result<Vec<CheckLine>, ExtError> {
    let (qt, pi) = functor_q(p)?;
    let ext = ext_theory(&PresentedTheory::from_theory(&p.a))?;
    let truncs: BTreeMap<usize, Truncated> = ext.theory.truncations(max_len);
    let mut eta = BTreeMap::new();
    let mut bad = vec![];
    for &u in &p.a.objects {
        let unit = unit_component(&ext, &p.a, &p.ext, &truncs, u)?;
        let f = unit.then(&pi.components[&u]);
        if !f.is_iso() {
            bad.push(format!("η̃ at {} is not invertible", p.a.name(u)));
        }
        eta.insert(u, f);
    }
    let mut worst: f64 = 0.0;
    let mut exact = true;
    for &v in &qt.objects {
        let lay = &ext.layouts[&v];
        let target = qt.algebra(v);
        let cols: Vec<Vec<C64>> = truncs[&v]
            .rep_words()
            .iter()
            .map(|w| {
                let mut acc = target.unit();
                for &l in w {
                    let (u, k) = lay.decode(l);
                    let x = qt.map(u, v).apply(&eta[&u].m.column(k));
                    acc = target.mul(&acc, &x);
                }
                acc
            })
            .collect();
        let q = Matrix::from_columns(target.dim(), &cols);
        let d = q.max_abs_diff(&pi.components[&v].m);
        exact &= q == pi.components[&v].m;
        worst = worst.max(d);
    }
    let wit = if bad.is_empty() { None } else { Some(bad.join("; ")) };
    Ok(vec![
        CheckLine::new("η̃: A -> res Q(A, I) is an isomorphism", wit.is_none(), wit),
        CheckLine::new(
            format!("mediating map equals the canonical projection (max_len {max_len})"),
            worst <= TOL_LIN,
            Some(format!("max |q - π| = {worst:.3e}, bitwise equal: {exact}")),
        ),
    ])
}

/// `(A, I)` with `A` and `I` presented (truncated), as for the Klein-Gordon pair.
#[derive(Clone, Debug)]
pub struct PresentedPair {
    pub ext: ExtTheory,
    /// Generators of `I(V)` as polynomials in the letters of `ext A(V)`.
    pub generators: BTreeMap<usize, Vec<Poly>>,
}

impl PresentedPair {
    /// `Q(A, I)(V)`: `ext A(V)` with the generators of `I(V)` as extra relations.
    pub fn quotient(&self, v: usize) -> Presented {
        let mut p = self.ext.theory.algebras[&v].clone();
        p.relations.extend(self.generators.get(&v).cloned().unwrap_or_default());
        p
    }

    /// Round-trip checks at truncation `max_len`.
    pub fn roundtrip(&self, max_len: usize) -> Vec<CheckLine> {
        let t = &self.ext.theory;
        let cat = &t.catalog;
        let q: BTreeMap<usize, Truncated> = t.objects.iter().map(|&v| (v, self.quotient(v).truncate(max_len))).collect();
        let e: BTreeMap<usize, Truncated> = t.truncations(max_len);
        let mut trivial = vec![];
        let mut eta_bad = vec![];
        for &u in &self.ext.interior.objects {
            if q[&u].dim() != e[&u].dim() {
                trivial.push(cat.name(u).to_string());
            }
            let a = self.ext.interior.algebras[&u].truncate(max_len);
            let imgs = self.ext.unit_letters(u);
            let cols: Vec<Vec<C64>> = a
                .rep_words()
                .iter()
                .map(|w| q[&u].coords(&presented::substitute(&presented::word(w), &imgs)).unwrap_or_default())
                .collect();
            let m = Matrix::from_columns(q[&u].dim(), &cols);
            if !(m.rank() == a.dim() && a.dim() == q[&u].dim()) {
                eta_bad.push(cat.name(u).to_string());
            }
        }
        let mut worst: f64 = 0.0;
        let mut overflow = vec![];
        for &v in &t.objects {
            let tr = &q[&v];
            let words = all_words(self.ext.layouts[&v].len(), max_len);
            for w in &words {
                let Ok(direct) = tr.coords(&presented::word(w)) else { continue };
                let mut acc = tr.coords(&unit_poly()).unwrap();
                let mut ok = true;
                for &l in w {
                    let x = tr.coords(&letter(l)).unwrap();
                    match tr.mul(&acc, &x) {
                        Ok(y) => acc = y,
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    overflow.push(cat.name(v).to_string());
                    continue;
                }
                for (x, y) in acc.iter().zip(&direct) {
                    worst = worst.max((x - y).norm());
                }
            }
        }
        let mut lambda_bad = vec![];
        for &v in &t.objects {
            let eps_rank = q[&v].dim();
            // ε: ext res Q(V) → Q(V) sends each letter to its class, so its image is
            // spanned by the classes of words; compare with the dimension of Q(V)
            let span: Vec<SparseVec<C64>> = all_words(self.ext.layouts[&v].len(), max_len)
                .iter()
                .filter_map(|w| q[&v].coords(&presented::word(w)).ok())
                .map(|c| c.into_iter().enumerate().filter(|(_, z)| z.norm() > TOL_LIN).collect())
                .collect();
            if rank(&span) != eps_rank {
                lambda_bad.push(cat.name(v).to_string());
            }
        }
        let w = |v: Vec<String>| if v.is_empty() { None } else { Some(v.join(", ")) };
        overflow.dedup();
        vec![
            CheckLine::new("ideal is trivial on the interior", trivial.is_empty(), w(trivial)),
            CheckLine::new(format!("η̃ is invertible on interior objects (max_len {max_len})"), eta_bad.is_empty(), w(eta_bad)),
            CheckLine::new(
                format!("mediating map equals the canonical projection (max_len {max_len})"),
                worst <= TOL_LIN,
                Some(format!("max |q - π| = {worst:.3e}; words beyond the truncation skipped at: {}", if overflow.is_empty() { "none".into() } else { overflow.join(", ") })),
            ),
            CheckLine::new(format!("λ is surjective at every object (max_len {max_len})"), lambda_bad.is_empty(), w(lambda_bad)),
        ]
    }
}

fn all_words(k: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Word> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..k as u32).map(move |l| {
                    let mut x = w.clone();
                    x.push(l);
                    x
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::StarAlgebra;
    use crate::catalog::DEFAULT_BOUND;
    use crate::fixtures::{f1_seeds, free_product_seeds};
    use crate::geometry::Spacetime;
    use crate::rational::qi;

    fn cat(seeds: fn(Spacetime) -> Vec<(String, crate::geometry::Region)>) -> Arc<Catalog> {
        let m = Spacetime::strip(qi(1));
        Arc::new(Catalog::build(m, &seeds(m), DEFAULT_BOUND).unwrap())
    }

    #[test]
    fn interior_extension_is_the_algebra() {
        let c = cat(f1_seeds);
        let a = Theory::constant(c.clone(), interior_objects(&c), StarAlgebra::diagonal(2)).unwrap();
        let ext = ext_theory(&PresentedTheory::from_theory(&a)).unwrap();
        for &u in &a.objects {
            assert_eq!(ext.brute_force_quotient(u, 3).dim(), 2);
        }
        let b0 = c.index_of("B0").unwrap();
        assert_eq!(ext.brute_force_quotient(b0, 3).dim(), 2);
        let nf = Normalizer::new(&ext, &a, b0);
        assert_eq!(nf.span_dim(3), 2);
    }

    #[test]
    fn free_product_grows_with_length() {
        let c = cat(free_product_seeds);
        let a = Theory::constant(c.clone(), interior_objects(&c), StarAlgebra::diagonal(2)).unwrap();
        let ext = ext_theory(&PresentedTheory::from_theory(&a)).unwrap();
        let b = c.index_of("B").unwrap();
        // alternating words in the two non-unit leaves: 1, 2, 2, 2, ...
        assert_eq!(ext.brute_force_quotient(b, 2).dim(), 5);
        assert_eq!(ext.brute_force_quotient(b, 3).dim(), 7);
        assert_eq!(Normalizer::new(&ext, &a, b).span_dim(3), 7);
    }

    #[test]
    fn tree_terms_round_trip() {
        let c = cat(f1_seeds);
        let a = Theory::constant(c.clone(), interior_objects(&c), StarAlgebra::upper_triangular()).unwrap();
        let ext = ext_theory(&PresentedTheory::from_theory(&a)).unwrap();
        let b0 = c.index_of("B0").unwrap();
        let p = presented::word(&[1, 4]);
        let t = ext.to_tree(b0, &p);
        let json = serde_json::to_string(&t).unwrap();
        let back: TreeTerm = serde_json::from_str(&json).unwrap();
        assert_eq!(ext.from_tree(&back).unwrap(), (b0, p));
    }
}
