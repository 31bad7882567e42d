//! CCR polynomial algebras over a finite symplectic space, with ordered
//! monomials `Φ_{i1} ⋯ Φ_{ik}` (`i1 <= ⋯ <= ik`) as normal forms.

use std::collections::HashMap;
use std::sync::Mutex;

use num::Zero;

use super::presented::{add_scaled, clean, sub, unit_poly, word, Poly, Presented, Word};
use super::AlgebraError;
use crate::linalg::{c, C64, TOL_LIN};

#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticSpace {
    pub labels: Vec<String>,
    pub tau: Vec<Vec<f64>>,
}

impl SymplecticSpace {
    pub fn new(labels: Vec<String>, tau: Vec<Vec<f64>>) -> Result<SymplecticSpace, AlgebraError> {
        let n = labels.len();
        if tau.len() != n || tau.iter().any(|r| r.len() != n) {
            return Err(AlgebraError::DimensionMismatch { expected: n, got: tau.len() });
        }
        for i in 0..n {
            if tau[i][i] != 0.0 {
                return Err(AlgebraError::NotAntisymmetric(i, i));
            }
            for j in 0..i {
                if (tau[i][j] + tau[j][i]).abs() > TOL_LIN {
                    return Err(AlgebraError::NotAntisymmetric(i, j));
                }
            }
        }
        Ok(SymplecticSpace { labels, tau })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

#[derive(Debug)]
pub struct CcrAlgebra {
    pub space: SymplecticSpace,
    pub max_degree: usize,
    memo: Mutex<HashMap<Word, Poly>>,
}

impl Clone for CcrAlgebra {
    fn clone(&self) -> Self {
        CcrAlgebra::new(self.space.clone(), self.max_degree)
    }
}

impl CcrAlgebra {
    pub fn new(space: SymplecticSpace, max_degree: usize) -> CcrAlgebra {
        CcrAlgebra { space, max_degree, memo: Mutex::new(HashMap::new()) }
    }

    /// Reorders by `Φ_j Φ_i = Φ_i Φ_j − i τ_ij` for `j > i`.
    pub fn normal_form(&self, w: &[u32]) -> Result<Poly, AlgebraError> {
        if w.len() > self.max_degree {
            return Err(AlgebraError::DegreeOverflow { degree: w.len(), bound: self.max_degree });
        }
        Ok(self.nf(w))
    }

    fn nf(&self, w: &[u32]) -> Poly {
        if let Some(p) = self.memo.lock().unwrap().get(w) {
            return p.clone();
        }
        let out = match w.windows(2).position(|p| p[0] > p[1]) {
            None => word(w),
            Some(p) => {
                let (j, i) = (w[p], w[p + 1]);
                let mut swapped = w.to_vec();
                swapped.swap(p, p + 1);
                let mut out = self.nf(&swapped);
                let mut shorter = w[..p].to_vec();
                shorter.extend_from_slice(&w[p + 2..]);
                let t = self.space.tau[i as usize][j as usize];
                add_scaled(&mut out, &self.nf(&shorter), c(0.0, -t));
                clean(out)
            }
        };
        self.memo.lock().unwrap().insert(w.to_vec(), out.clone());
        out
    }

    pub fn normalize(&self, p: &Poly) -> Result<Poly, AlgebraError> {
        let mut out = Poly::new();
        for (w, c) in p {
            add_scaled(&mut out, &self.normal_form(w)?, *c);
        }
        Ok(clean(out))
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly, AlgebraError> {
        self.normalize(&super::presented::mul(a, b))
    }

    /// Generators are self-adjoint.
    pub fn star(&self, p: &Poly) -> Result<Poly, AlgebraError> {
        let mut out = Poly::new();
        for (w, c) in p {
            let r: Word = w.iter().rev().copied().collect();
            *out.entry(r).or_insert_with(C64::zero) += c.conj();
        }
        self.normalize(&out)
    }

    pub fn commutator(&self, a: &Poly, b: &Poly) -> Result<Poly, AlgebraError> {
        Ok(sub(&self.mul(a, b)?, &self.mul(b, a)?))
    }

    /// The same algebra as generators and relations.
    pub fn presentation(&self) -> Presented {
        let n = self.space.dim();
        let mut p = Presented::free(self.space.labels.clone());
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                let mut r = sub(&word(&[i, j]), &word(&[j, i]));
                let t = self.space.tau[i as usize][j as usize];
                add_scaled(&mut r, &unit_poly(), c(0.0, -t));
                p.relations.push(clean(r));
            }
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(t: f64) -> SymplecticSpace {
        SymplecticSpace::new(vec!["f".into(), "g".into()], vec![vec![0.0, t], vec![-t, 0.0]]).unwrap()
    }

    #[test]
    fn reordering_produces_tau() {
        let a = CcrAlgebra::new(space(0.25), 4);
        let p = a.normal_form(&[1, 0]).unwrap();
        assert_eq!(p[&vec![0, 1]], C64::new(1.0, 0.0));
        assert_eq!(p[&vec![]], c(0.0, -0.25));
        let comm = a.commutator(&word(&[0]), &word(&[1])).unwrap();
        assert_eq!(comm, Poly::from([(vec![], c(0.0, 0.25))]));
        assert!(matches!(a.normal_form(&[0; 5]), Err(AlgebraError::DegreeOverflow { .. })));
    }

    #[test]
    fn rejects_non_antisymmetric() {
        let r = SymplecticSpace::new(vec!["f".into(), "g".into()], vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(r, Err(AlgebraError::NotAntisymmetric(1, 0)));
    }
}
