//! The Klein-Gordon theories on a finite catalog: `K` on the interior
//! regions, `K^ext` with commutation relations fixed only inside interior
//! regions, and the ideal `I_{G±}` that a Green's pair on the whole strip
//! imposes on `K^ext`.
//!
//! Every region gets a finite basis of unit bumps (the ones whose support
//! fits in it); `Φ_V(f)` is the letter of `f` in that basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::checks::{tau, tol_quad};
use super::green::GreenPair;
use super::{Bump, KgError, TestFunction};
use crate::algebra::ccr::{CcrAlgebra, SymplecticSpace};
use crate::algebra::presented::{self, letter, unit_poly, Poly, Presented, Word};
use crate::catalog::{Catalog, CheckLine};
use crate::extension::{interior_objects, ExtTheory, PresentedPair};
use crate::linalg::{c, Matrix, C64, TOL_LIN};
use crate::theory::PresentedTheory;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisFn {
    /// Catalog region the bump was inscribed in.
    pub owner: usize,
    /// Physical coordinates.
    pub bump: Bump,
}

#[derive(Clone, Debug)]
pub struct KgModel {
    pub catalog: Arc<Catalog>,
    /// Physical strip width; catalog coordinates are multiplied by it.
    pub width: f64,
    /// The free pair, unique on interior regions.
    pub interior: GreenPair,
    pub basis: Vec<BasisFn>,
}

/// One entry of a `τ` table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauEntry {
    pub region: String,
    pub f: usize,
    pub g: usize,
    pub tau: f64,
}

/// A `τ_V` matrix on the basis functions supported in `V`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauMatrix {
    pub region: String,
    pub basis: Vec<usize>,
    pub tau: Vec<Vec<f64>>,
    /// `max |τ + τᵀ|` before antisymmetrization.
    pub antisymmetry_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealRow {
    pub region: String,
    pub f: usize,
    pub g: usize,
    pub tau_boundary: f64,
    pub tau_interior: f64,
    /// False when both supports share an interior region, where the relation already holds.
    pub generator: bool,
}

#[derive(Clone, Debug)]
pub struct GreenIdeal {
    pub pair: PresentedPair,
    pub rows: Vec<IdealRow>,
    /// `max |τ_D − τ_M|` over pairs inside a common interior region.
    pub interior_gap: f64,
    pub tol: f64,
}

impl KgModel {
    /// One bump for each interior object not already holding one, centred in
    /// its widest rectangle with radius `fill` times the largest inscribed one.
    pub fn inscribed(catalog: Arc<Catalog>, n: usize, fill: f64) -> Result<KgModel, KgError> {
        let width = unit_length(&catalog);
        let mut basis: Vec<BasisFn> = vec![];
        for u in interior_objects(&catalog) {
            let held = basis.iter().any(|b| catalog.region(u).contains_disk_f64(b.bump.t0 / width, b.bump.x0 / width, b.bump.r / width));
            if held {
                continue;
            }
            let best = catalog
                .region(u)
                .rects()
                .iter()
                .filter(|r| [r.u0, r.u1, r.v0, r.v1].iter().all(|b| b.is_finite()))
                .map(|r| {
                    let (u0, u1, v0, v1) = (r.u0.to_f64(), r.u1.to_f64(), r.v0.to_f64(), r.v1.to_f64());
                    let half = 0.5 * (u1 - u0).min(v1 - v0);
                    (half, 0.5 * (u0 + u1), 0.5 * (v0 + v1))
                })
                .max_by(|a, b| a.0.total_cmp(&b.0));
            let Some((half, uc, vc)) = best else {
                return Err(KgError::SupportViolation(catalog.name(u).to_string()));
            };
            let r = fill * half / std::f64::consts::SQRT_2;
            let (t, x) = (0.5 * (uc + vc), 0.5 * (vc - uc));
            basis.push(BasisFn { owner: u, bump: Bump::unit(t * width, x * width, r * width) });
        }
        KgModel::with_basis(catalog, n, basis)
    }

    /// Grid `h = width / n`; every bump must sit strictly inside its owner.
    pub fn with_basis(catalog: Arc<Catalog>, n: usize, basis: Vec<BasisFn>) -> Result<KgModel, KgError> {
        let width = unit_length(&catalog);
        let interior = GreenPair::minkowski(width / n.max(1) as f64, 0.0)?;
        if n == 0 {
            return Err(KgError::BadGrid);
        }
        let m = KgModel { catalog, width, interior, basis };
        for b in &m.basis {
            if !m.fits(&b.bump, b.owner) {
                return Err(KgError::SupportViolation(format!("bump at ({:.4}, {:.4}) in {}", b.bump.t0, b.bump.x0, m.catalog.name(b.owner))));
            }
        }
        Ok(m)
    }

    pub fn dirichlet(&self) -> Result<GreenPair, KgError> {
        let n = (self.width / self.interior.h()).round() as usize;
        GreenPair::dirichlet(self.width, n, 0.0)
    }

    pub fn tol(&self) -> f64 {
        tol_quad(self.interior.h())
    }

    fn fits(&self, b: &Bump, v: usize) -> bool {
        let s = self.width;
        self.catalog.region(v).contains_disk_f64(b.t0 / s, b.x0 / s, b.r / s)
    }

    pub fn function(&self, k: usize) -> TestFunction {
        TestFunction::single(self.basis[k].bump)
    }

    /// Basis functions supported in `v`.
    pub fn gens(&self, v: usize) -> Vec<usize> {
        (0..self.basis.len()).filter(|&k| self.fits(&self.basis[k].bump, v)).collect()
    }

    /// Interior objects of the catalog inside `v` that contain the support of `k`.
    pub fn covers(&self, k: usize, v: usize) -> Vec<usize> {
        interior_objects(&self.catalog)
            .into_iter()
            .filter(|&u| self.catalog.leq(u, v) && self.fits(&self.basis[k].bump, u))
            .collect()
    }

    /// `τ_V` on `gens(v)` for the pair `g`, antisymmetrized; fails when the
    /// raw matrix is not antisymmetric to `tol_quad`.
    pub fn tau_matrix(&self, g: &GreenPair, v: usize) -> Result<TauMatrix, KgError> {
        let idx = self.gens(v);
        let n = idx.len();
        let mut raw = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    raw[a][b] = tau(g, &self.function(idx[a]), &self.function(idx[b]), |_, _| true)?;
                }
            }
        }
        let mut defect: f64 = 0.0;
        let mut out = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in 0..n {
                defect = defect.max((raw[a][b] + raw[b][a]).abs());
                out[a][b] = 0.5 * (raw[a][b] - raw[b][a]);
            }
        }
        if defect > tol_quad(g.h()) {
            return Err(KgError::NotAdjointRelated(defect));
        }
        Ok(TauMatrix { region: self.catalog.name(v).to_string(), basis: idx, tau: out, antisymmetry_defect: defect })
    }

    /// Numerical rank of `k ↦ G f_k` sampled on the lattice: a drop means a
    /// combination of basis functions lies in the image of `P`.
    pub fn check_p_image(&self, v: usize) -> Result<usize, KgError> {
        let idx = self.gens(v);
        if idx.is_empty() {
            return Ok(0);
        }
        let fs: Vec<TestFunction> = idx.iter().map(|&k| self.function(k)).collect();
        let all = TestFunction::new(fs.iter().flat_map(|f| f.bumps.clone()).collect());
        let (lo, hi) = all.time_range();
        let span = hi - lo;
        let lat = self.interior.lattice;
        let xl = all.bumps.iter().map(|b| b.x0 - b.r).fold(f64::INFINITY, f64::min);
        let xh = all.bumps.iter().map(|b| b.x0 + b.r).fold(f64::NEG_INFINITY, f64::max);
        let nodes = lat.nodes_in((lo - span, hi + span), (xl - span, xh + span));
        let mut rows: Vec<Vec<f64>> = vec![];
        for f in &fs {
            let field = self.interior.apply(f, (lo - span, hi + span))?;
            rows.push(nodes.iter().map(|&(i, j)| field.causal(i, j)).collect());
        }
        let r = numerical_rank(&rows, self.tol());
        if r < idx.len() {
            return Err(KgError::BasisDegenerate(self.catalog.name(v).to_string()));
        }
        Ok(r)
    }

    /// `K` on the interior objects: CCR algebras over `(gens(U), τ_U)` with
    /// `Φ_U(f) ↦ Φ_{U'}(f)` along inclusions.
    pub fn interior_theory(&self) -> Result<PresentedTheory, KgError> {
        let objects = interior_objects(&self.catalog);
        let mut algebras = BTreeMap::new();
        for &u in &objects {
            self.check_p_image(u)?;
            let tm = self.tau_matrix(&self.interior, u)?;
            let labels = tm.basis.iter().map(|k| format!("f{k}")).collect();
            let space = SymplecticSpace::new(labels, tm.tau).map_err(|_| KgError::NotAdjointRelated(f64::NAN))?;
            algebras.insert(u, CcrAlgebra::new(space, 0).presentation());
        }
        Ok(PresentedTheory { catalog: self.catalog.clone(), objects: objects.clone(), algebras, maps: self.letter_maps(&objects) })
    }

    fn letter_maps(&self, objects: &[usize]) -> BTreeMap<(usize, usize), Vec<Poly>> {
        let mut maps = BTreeMap::new();
        for &a in objects {
            for &b in objects {
                if !self.catalog.leq(a, b) {
                    continue;
                }
                let gb = self.gens(b);
                let imgs = self
                    .gens(a)
                    .iter()
                    .map(|k| letter(gb.iter().position(|x| x == k).expect("support in a is support in b") as u32))
                    .collect();
                maps.insert((a, b), imgs);
            }
        }
        maps
    }

    /// `K^ext` on all stable objects: letters `Φ_V(f)` for `f ∈ gens(V)`,
    /// with `[Φ_V(f), Φ_V(g)] = i τ(f, g)` only when both supports fit one
    /// interior region inside `V`.
    pub fn kext(&self) -> Result<PresentedTheory, KgError> {
        let objects = self.catalog.localize().objects;
        let mut algebras = BTreeMap::new();
        for &v in &objects {
            let idx = self.gens(v);
            for &k in &idx {
                if self.covers(k, v).is_empty() {
                    return Err(KgError::CoverNotFound(format!("f{k} in {}", self.catalog.name(v))));
                }
            }
            let mut p = Presented::free(idx.iter().map(|k| format!("f{k}")).collect());
            for a in 0..idx.len() {
                for b in (a + 1)..idx.len() {
                    let Some(u) = self.common_interior(idx[a], idx[b], v) else { continue };
                    let tm = self.tau_matrix(&self.interior, u)?;
                    let (pa, pb) = (pos(&tm.basis, idx[a]), pos(&tm.basis, idx[b]));
                    p.relations.push(ccr_relation(a as u32, b as u32, tm.tau[pa][pb]));
                }
            }
            algebras.insert(v, p);
        }
        Ok(PresentedTheory { catalog: self.catalog.clone(), objects: objects.clone(), algebras, maps: self.letter_maps(&objects) })
    }

    fn common_interior(&self, f: usize, g: usize, v: usize) -> Option<usize> {
        let cf = self.covers(f, v);
        self.covers(g, v).into_iter().find(|u| cf.contains(u))
    }

    /// `ζ_V(Φ_V(f))`: the pushforward of `Φ_U(f)` for an interior `U ∋ supp f`, for every such `U`.
    pub fn zeta_letter(&self, ext: &ExtTheory, v: usize, k: usize) -> Vec<(usize, Poly)> {
        self.covers(k, v)
            .into_iter()
            .map(|u| {
                let p = pos(&self.gens(u), k);
                (u, letter(ext.layouts[&v].letter(u, p).expect("cover is a subregion")))
            })
            .collect()
    }

    /// `ζ: K^ext → ext K` at truncation `max_len`: independent of the cover,
    /// well defined on relations, and bijective.
    pub fn check_zeta(&self, kext: &PresentedTheory, ext: &ExtTheory, max_len: usize) -> Vec<CheckLine> {
        let mut cover_bad = vec![];
        let mut rel_bad = vec![];
        let mut bij_bad = vec![];
        let mut iso_dims = vec![];
        for &v in &kext.objects {
            let tr = ext.brute_force_quotient(v, max_len);
            let idx = self.gens(v);
            let mut imgs = vec![];
            for &k in &idx {
                let choices = self.zeta_letter(ext, v, k);
                let first = tr.coords(&choices[0].1).unwrap_or_default();
                for (u, p) in &choices[1..] {
                    let other = tr.coords(p).unwrap_or_default();
                    if first.iter().zip(&other).any(|(x, y)| (x - y).norm() > TOL_LIN) {
                        cover_bad.push(format!("f{k} in {} via {} and {}", self.catalog.name(v), self.catalog.name(choices[0].0), self.catalog.name(*u)));
                    }
                }
                imgs.push(choices[0].1.clone());
            }
            let src = kext.algebras[&v].truncate(max_len);
            for r in &kext.algebras[&v].relations {
                if !tr.contains_zero(&presented::substitute(r, &imgs)).unwrap_or(false) {
                    rel_bad.push(self.catalog.name(v).to_string());
                }
            }
            let cols: Vec<Vec<C64>> = src
                .rep_words()
                .iter()
                .map(|w: &Word| tr.coords(&presented::substitute(&presented::word(w), &imgs)).unwrap_or_default())
                .collect();
            let rank = Matrix::from_columns(tr.dim(), &cols).rank();
            if !(rank == src.dim() && rank == tr.dim()) {
                bij_bad.push(format!("{}: rank {rank}, K^ext {}, ext K {}", self.catalog.name(v), src.dim(), tr.dim()));
            }
            iso_dims.push(format!("{} {}", self.catalog.name(v), tr.dim()));
        }
        let w = |v: Vec<String>| if v.is_empty() { None } else { Some(v.join("; ")) };
        rel_bad.dedup();
        vec![
            CheckLine::new("ζ is independent of the chosen cover", cover_bad.is_empty(), w(cover_bad)),
            CheckLine::new(format!("ζ respects the partial CCR (max_len {max_len})"), rel_bad.is_empty(), w(rel_bad)),
            CheckLine::new(
                format!("ζ: K^ext → ext K is bijective (max_len {max_len})"),
                bij_bad.is_empty(),
                Some(if bij_bad.is_empty() { iso_dims.join(", ") } else { bij_bad.join("; ") }),
            ),
        ]
    }

    /// `I_{G±}` for the pair `g` as relations on `ext K`: the full CCR with
    /// `τ_V` from `g`, for pairs whose commutator `ext K` leaves free.
    pub fn green_ideal(&self, ext: &ExtTheory, g: &GreenPair) -> Result<GreenIdeal, KgError> {
        let tol = tol_quad(g.h()).max(self.tol());
        let mut generators = BTreeMap::new();
        let mut rows = vec![];
        let mut interior_gap: f64 = 0.0;
        for &v in &ext.theory.objects {
            let tb = self.tau_matrix(g, v)?;
            let tm = self.tau_matrix(&self.interior, v)?;
            let idx = &tb.basis;
            let imgs: Vec<Poly> = idx.iter().map(|&k| self.zeta_letter(ext, v, k).remove(0).1).collect();
            let mut gens = vec![];
            for a in 0..idx.len() {
                for b in (a + 1)..idx.len() {
                    let common = self.common_interior(idx[a], idx[b], v).is_some();
                    if common {
                        interior_gap = interior_gap.max((tb.tau[a][b] - tm.tau[a][b]).abs());
                    } else {
                        let comm = presented::sub(&presented::mul(&imgs[a], &imgs[b]), &presented::mul(&imgs[b], &imgs[a]));
                        let mut r = comm;
                        presented::add_scaled(&mut r, &unit_poly(), c(0.0, -tb.tau[a][b]));
                        gens.push(presented::clean(r));
                    }
                    rows.push(IdealRow {
                        region: self.catalog.name(v).to_string(),
                        f: idx[a],
                        g: idx[b],
                        tau_boundary: tb.tau[a][b],
                        tau_interior: tm.tau[a][b],
                        generator: !common,
                    });
                }
            }
            generators.insert(v, gens);
        }
        Ok(GreenIdeal { pair: PresentedPair { ext: ext.clone(), generators }, rows, interior_gap, tol })
    }

    /// `τ_V(f, g) = τ_{V'}(f, g)` for interior `V ⊆ V'` and `f, g` supported in `V`,
    /// with `τ_V` integrated over the lattice nodes of `V` only.
    pub fn check_tau_naturality(&self, g: &GreenPair) -> Result<CheckLine, KgError> {
        let objects = interior_objects(&self.catalog);
        let mut worst: f64 = 0.0;
        let mut pairs = 0;
        for &v in &objects {
            for &v2 in &objects {
                if v == v2 || !self.catalog.leq(v, v2) {
                    continue;
                }
                for &f in &self.gens(v) {
                    for &h in &self.gens(v) {
                        let a = self.tau_in(g, f, h, v)?;
                        let b = self.tau_in(g, f, h, v2)?;
                        worst = worst.max((a - b).abs());
                        pairs += 1;
                    }
                }
            }
        }
        let tol = tol_quad(g.h());
        Ok(CheckLine::new("τ is natural along interior inclusions", worst <= tol, Some(format!("max |Δτ| = {worst:.3e} over {pairs} pairs (tol {tol:.3e})"))))
    }

    fn tau_in(&self, g: &GreenPair, f: usize, h: usize, v: usize) -> Result<f64, KgError> {
        let region = self.catalog.region(v).clone();
        let (lat, s) = (g.lattice, self.width);
        tau(g, &self.function(f), &self.function(h), |i, j| {
            let (t, x) = lat.node(i, j);
            region.contains_tx_f64(t / s, x / s)
        })
    }

    /// `τ(f, g) = 0` for bases of causally disjoint catalog regions.
    pub fn check_disjoint_vanishing(&self, g: &GreenPair) -> Result<CheckLine, KgError> {
        let mut worst: f64 = 0.0;
        let mut pairs = 0;
        for (a, b, _) in self.catalog.orthogonal_pairs() {
            for &f in &self.gens(a) {
                for &h in &self.gens(b) {
                    worst = worst.max(tau(g, &self.function(f), &self.function(h), |_, _| true)?.abs());
                    pairs += 1;
                }
            }
        }
        let tol = tol_quad(g.h());
        Ok(CheckLine::new(
            "τ vanishes on causally disjoint supports",
            worst <= tol,
            Some(format!("max |τ| = {worst:.3e} over {pairs} pairs (tol {tol:.3e})")),
        ))
    }
}

fn unit_length(cat: &Catalog) -> f64 {
    if cat.is_empty() {
        1.0
    } else {
        cat.region(0).spacetime().unit_length()
    }
}

fn pos(v: &[usize], k: usize) -> usize {
    v.iter().position(|&x| x == k).expect("basis function present")
}

/// `Φ_a Φ_b − Φ_b Φ_a − i τ 1`.
fn ccr_relation(a: u32, b: u32, t: f64) -> Poly {
    let mut r = presented::sub(&presented::word(&[a, b]), &presented::word(&[b, a]));
    presented::add_scaled(&mut r, &unit_poly(), c(0.0, -t));
    presented::clean(r)
}

/// Rank by Gram-Schmidt, dropping rows whose residual falls below `rel_tol` of their norm.
fn numerical_rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    let mut basis: Vec<Vec<f64>> = vec![];
    for r in rows {
        let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let mut w = r.clone();
        for q in &basis {
            let d: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
            for (x, y) in w.iter_mut().zip(q) {
                *x -= d * y;
            }
        }
        let rest = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if rest > rel_tol * norm {
            basis.push(w.iter().map(|x| x / rest).collect());
        }
    }
    basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::ext_theory;
    use crate::fixtures::{f1_seeds, free_product_seeds};
    use crate::catalog::DEFAULT_BOUND;
    use crate::geometry::Spacetime;

    fn model(seeds: fn(Spacetime) -> Vec<(String, crate::geometry::Region)>, n: usize) -> KgModel {
        let m = Spacetime::strip_pi();
        let cat = Arc::new(Catalog::build(m, &seeds(m), DEFAULT_BOUND).unwrap());
        KgModel::inscribed(cat, n, 0.8).unwrap()
    }

    #[test]
    fn free_product_pair_sees_the_images() {
        let m = model(free_product_seeds, 200);
        let k = m.interior_theory().unwrap();
        let ext = ext_theory(&k).unwrap();
        let gi = m.green_ideal(&ext, &m.dirichlet().unwrap()).unwrap();
        let row = gi.rows.iter().find(|r| r.generator).unwrap();
        assert!((row.tau_interior.abs() - 0.5).abs() < 1e-3, "{row:?}");
        assert!(row.tau_boundary.abs() < 1e-3, "{row:?}");
    }

    #[test]
    fn duplicated_bump_is_degenerate() {
        let m = model(f1_seeds, 100);
        let mut basis = m.basis.clone();
        basis.push(basis[0]);
        let m2 = KgModel::with_basis(m.catalog.clone(), 100, basis).unwrap();
        let u = m.basis[0].owner;
        assert!(matches!(m2.check_p_image(u), Err(KgError::BasisDegenerate(_))));
        assert_eq!(m.check_p_image(u).unwrap(), m.gens(u).len());
    }
}
