//! Algebras presented by letters, a star on letters and polynomial
//! relations, materialized as truncated quotients by linear algebra.
//!
//! The truncation at length `L` is the span of all words of length `<= L`
//! modulo the span of `x r y` with `|x| + deg r + |y| <= L`.

use std::collections::{BTreeMap, HashMap};

use num::{One, Zero};

use super::{AlgebraError, StarAlgebra};
use crate::linalg::{Echelon, Matrix, SparseVec, C64, TOL_LIN};

pub type Word = Vec<u32>;
pub type Poly = BTreeMap<Word, C64>;

pub fn word(w: &[u32]) -> Poly {
    Poly::from([(w.to_vec(), C64::one())])
}

pub fn unit_poly() -> Poly {
    word(&[])
}

pub fn letter(l: u32) -> Poly {
    word(&[l])
}

pub fn clean(mut p: Poly) -> Poly {
    p.retain(|_, c| c.norm() > TOL_LIN * 1e-3);
    p
}

pub fn add_scaled(acc: &mut Poly, p: &Poly, s: C64) {
    for (w, c) in p {
        *acc.entry(w.clone()).or_insert_with(C64::zero) += c * s;
    }
}

pub fn sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    add_scaled(&mut out, b, -C64::one());
    clean(out)
}

pub fn scale(p: &Poly, s: C64) -> Poly {
    clean(p.iter().map(|(w, c)| (w.clone(), c * s)).collect())
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (x, c) in a {
        for (y, d) in b {
            let mut w = x.clone();
            w.extend_from_slice(y);
            *out.entry(w).or_insert_with(C64::zero) += c * d;
        }
    }
    clean(out)
}

pub fn degree(p: &Poly) -> usize {
    p.keys().map(Vec::len).max().unwrap_or(0)
}

/// Substitutes `images[l]` for each letter `l`.
pub fn substitute(p: &Poly, images: &[Poly]) -> Poly {
    let mut out = Poly::new();
    for (w, c) in p {
        let mut acc = unit_poly();
        for &l in w {
            acc = mul(&acc, &images[l as usize]);
        }
        add_scaled(&mut out, &acc, *c);
    }
    clean(out)
}

pub fn max_abs_diff(a: &Poly, b: &Poly) -> f64 {
    sub(a, b).values().map(|c| c.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct Presented {
    pub letters: Vec<String>,
    /// `star(letter)` as a polynomial in the letters.
    pub star: Vec<Poly>,
    pub relations: Vec<Poly>,
}

impl Presented {
    /// Free algebra on self-adjoint letters.
    pub fn free(letters: Vec<String>) -> Presented {
        let star = (0..letters.len() as u32).map(letter).collect();
        Presented { letters, star, relations: vec![] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Antilinear anti-multiplicative extension of the letter star.
    pub fn star_poly(&self, p: &Poly) -> Poly {
        let mut out = Poly::new();
        for (w, c) in p {
            let mut acc = unit_poly();
            for &l in w.iter().rev() {
                acc = mul(&acc, &self.star[l as usize]);
            }
            add_scaled(&mut out, &acc, c.conj());
        }
        clean(out)
    }

    /// Letters are basis elements; relations are the structure constants and
    /// `Σ unit_k e_k = 1`.
    pub fn from_star_algebra(a: &StarAlgebra, prefix: &str) -> Presented {
        let n = a.dim();
        let letters = (0..n).map(|i| format!("{prefix}{i}")).collect();
        let star = (0..n)
            .map(|i| {
                let s = a.star_of(&a.basis(i));
                clean(s.iter().enumerate().map(|(k, c)| (vec![k as u32], *c)).collect())
            })
            .collect();
        let mut relations = vec![];
        for i in 0..n {
            for j in 0..n {
                let mut r = word(&[i as u32, j as u32]);
                for (k, c) in a.structure(i, j).into_iter().enumerate() {
                    *r.entry(vec![k as u32]).or_insert_with(C64::zero) -= c;
                }
                relations.push(clean(r));
            }
        }
        let mut u: Poly = a.unit().into_iter().enumerate().map(|(k, c)| (vec![k as u32], c)).collect();
        *u.entry(vec![]).or_insert_with(C64::zero) -= C64::one();
        relations.push(clean(u));
        Presented { letters, star, relations }
    }

    pub fn truncate(&self, max_len: usize) -> Truncated {
        Truncated::new(self, max_len)
    }
}

/// All words of length `<= L`, ordered by length then lexicographically.
fn all_words(k: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Word> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = vec![];
        for w in &layer {
            for l in 0..k as u32 {
                let mut x = w.clone();
                x.push(l);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Clone, Debug)]
pub struct Truncated {
    pub max_len: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    ech: Echelon<C64>,
    reps: Vec<usize>,
    star: Vec<Poly>,
}

impl Truncated {
    fn new(p: &Presented, max_len: usize) -> Truncated {
        let words = all_words(p.len(), max_len);
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut rels = p.relations.clone();
        rels.extend(p.relations.iter().map(|r| p.star_poly(r)));
        let mut ech = Echelon::new();
        for r in &rels {
            let d = degree(r);
            if d > max_len {
                continue;
            }
            for w in words.iter().take_while(|w| w.len() <= max_len - d) {
                // every split of w into x y
                for cut in 0..=w.len() {
                    let (x, y) = w.split_at(cut);
                    let mut v = SparseVec::new();
                    for (m, c) in r {
                        let mut full = x.to_vec();
                        full.extend_from_slice(m);
                        full.extend_from_slice(y);
                        *v.entry(index[&full]).or_insert_with(C64::zero) += c;
                    }
                    ech.insert(v);
                }
            }
        }
        let reps = (0..words.len()).filter(|&i| !ech.is_pivot(i)).collect();
        Truncated { max_len, words, index, ech, reps, star: p.star.clone() }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn rep_words(&self) -> Vec<Word> {
        self.reps.iter().map(|&i| self.words[i].clone()).collect()
    }

    pub fn max_rep_len(&self) -> usize {
        self.reps.iter().map(|&i| self.words[i].len()).max().unwrap_or(0)
    }

    pub fn is_ambiguous(&self) -> bool {
        self.ech.is_ambiguous()
    }

    /// Class of `p` as coordinates on the representative words.
    pub fn coords(&self, p: &Poly) -> Result<Vec<C64>, AlgebraError> {
        let mut v = SparseVec::new();
        for (w, c) in p {
            let Some(&i) = self.index.get(w) else {
                return Err(AlgebraError::DegreeOverflow { degree: w.len(), bound: self.max_len });
            };
            *v.entry(i).or_insert_with(C64::zero) += c;
        }
        let r = self.ech.reduce(v);
        Ok(self.reps.iter().map(|i| r.get(i).copied().unwrap_or_default()).collect())
    }

    pub fn lift(&self, x: &[C64]) -> Poly {
        clean(self.reps.iter().zip(x).map(|(&i, c)| (self.words[i].clone(), *c)).collect())
    }

    pub fn contains_zero(&self, p: &Poly) -> Result<bool, AlgebraError> {
        Ok(self.coords(p)?.iter().all(|c| c.norm() <= TOL_LIN))
    }

    pub fn mul(&self, x: &[C64], y: &[C64]) -> Result<Vec<C64>, AlgebraError> {
        let p = mul(&self.lift(x), &self.lift(y));
        let d = degree(&p);
        if d > self.max_len {
            return Err(AlgebraError::TruncationUnsound { needed: d, max_len: self.max_len });
        }
        self.coords(&p)
    }

    /// The quotient as a structure-constant algebra, when products of
    /// representatives stay within the truncation.
    pub fn to_star_algebra(&self) -> Result<StarAlgebra, AlgebraError> {
        let needed = 2 * self.max_rep_len();
        if needed > self.max_len {
            return Err(AlgebraError::TruncationUnsound { needed, max_len: self.max_len });
        }
        let k = self.dim();
        let reps = self.rep_words();
        let mut c = vec![C64::zero(); k * k * k];
        let mut star = Matrix::zeros(k, k);
        let pres_star = |w: &Word| {
            let mut acc = unit_poly();
            for &l in w.iter().rev() {
                acc = mul(&acc, &self.star[l as usize]);
            }
            acc
        };
        for (a, wa) in reps.iter().enumerate() {
            let s = self.coords(&pres_star(wa))?;
            for (z, v) in s.into_iter().enumerate() {
                star.set(z, a, v);
            }
            for (b, wb) in reps.iter().enumerate() {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                let p = self.coords(&word(&w))?;
                c[(a * k + b) * k..(a * k + b + 1) * k].copy_from_slice(&p);
            }
        }
        StarAlgebra::new(k, c, self.coords(&unit_poly())?, star)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cr;

    #[test]
    fn structure_algebra_round_trips() {
        let a = StarAlgebra::upper_triangular();
        let t = Presented::from_star_algebra(&a, "e").truncate(2);
        assert_eq!(t.dim(), 3);
        let b = t.to_star_algebra().unwrap();
        assert_eq!(b.dim(), 3);
        assert!(!b.is_commutative());
    }

    #[test]
    fn free_algebra_counts_words() {
        let p = Presented::free(vec!["x".into(), "y".into()]);
        let t = p.truncate(3);
        assert_eq!(t.dim(), 15);
        assert!(matches!(t.to_star_algebra(), Err(AlgebraError::TruncationUnsound { .. })));
        assert!(matches!(t.coords(&word(&[0, 0, 0, 0])), Err(AlgebraError::DegreeOverflow { .. })));
    }

    #[test]
    fn commuting_letters() {
        let mut p = Presented::free(vec!["x".into(), "y".into()]);
        p.relations.push(sub(&word(&[1, 0]), &word(&[0, 1])));
        // polynomial ring in two variables: 1 + 2 + 3 monomials up to degree 2
        assert_eq!(p.truncate(2).dim(), 6);
        let t = p.truncate(3);
        let x = t.coords(&word(&[1, 0, 1])).unwrap();
        let y = t.coords(&scale(&word(&[0, 1, 1]), cr(1.0))).unwrap();
        assert_eq!(x, y);
    }
}
