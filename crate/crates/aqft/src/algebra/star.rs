//! Finite-dimensional unital *-algebras given by structure constants.

use std::sync::Arc;

use num::{One, Zero};

use super::AlgebraError;
use crate::linalg::{dense_from_sparse, norm_inf, null_space, sparse_from_dense, Echelon, Matrix, C64, TOL_LIN};

/// `e_i e_j = Σ_k c[(i n + j) n + k] e_k`; `star(x) = S · conj(x)`.
#[derive(Clone, Debug)]
pub struct StarAlgebra {
    n: usize,
    c: Vec<C64>,
    unit: Vec<C64>,
    star: Matrix,
}

fn close(a: &[C64], b: &[C64]) -> bool {
    let scale = 1.0 + norm_inf(a).max(norm_inf(b));
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= TOL_LIN * scale)
}

fn basis_vec(n: usize, i: usize) -> Vec<C64> {
    let mut v = vec![C64::zero(); n];
    v[i] = C64::one();
    v
}

impl StarAlgebra {
    pub fn new(n: usize, c: Vec<C64>, unit: Vec<C64>, star: Matrix) -> Result<StarAlgebra, AlgebraError> {
        if c.len() != n * n * n {
            return Err(AlgebraError::DimensionMismatch { expected: n * n * n, got: c.len() });
        }
        if unit.len() != n || star.rows != n || star.cols != n {
            return Err(AlgebraError::DimensionMismatch { expected: n, got: unit.len() });
        }
        let a = StarAlgebra { n, c, unit, star };
        a.check_axioms()?;
        Ok(a)
    }

    /// Associativity, unitality, involutivity and anti-multiplicativity on basis elements.
    pub fn check_axioms(&self) -> Result<(), AlgebraError> {
        let n = self.n;
        let bad = |s: String| Err(AlgebraError::NotAnAlgebra(s));
        for i in 0..n {
            let e = self.basis(i);
            if !close(&self.mul(&self.unit, &e), &e) || !close(&self.mul(&e, &self.unit), &e) {
                return bad(format!("unit fails on e{i}"));
            }
            if !close(&self.star_of(&self.star_of(&e)), &e) {
                return bad(format!("star is not involutive on e{i}"));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.structure(i, j);
                let lhs = self.star_of(&ij);
                let rhs = self.mul(&self.star_of(&self.basis(j)), &self.star_of(&self.basis(i)));
                if !close(&lhs, &rhs) {
                    return bad(format!("star(e{i} e{j}) != star(e{j}) star(e{i})"));
                }
                for k in 0..n {
                    let l = self.mul(&ij, &self.basis(k));
                    let r = self.mul(&self.basis(i), &self.structure(j, k));
                    if !close(&l, &r) {
                        return bad(format!("(e{i} e{j}) e{k} != e{i} (e{j} e{k})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// The one-point algebra `{0}` (unit equal to zero).
    pub fn zero() -> StarAlgebra {
        StarAlgebra { n: 0, c: vec![], unit: vec![], star: Matrix::zeros(0, 0) }
    }

    pub fn complex() -> StarAlgebra {
        StarAlgebra::diagonal(1)
    }

    /// `C^k`: functions on `k` points.
    pub fn diagonal(k: usize) -> StarAlgebra {
        let mut c = vec![C64::zero(); k * k * k];
        for i in 0..k {
            c[(i * k + i) * k + i] = C64::one();
        }
        StarAlgebra { n: k, c, unit: vec![C64::one(); k], star: Matrix::identity(k) }
    }

    /// `M_m(C)` with basis `E_ab` at index `a m + b` and the adjoint as star.
    pub fn matrices(m: usize) -> StarAlgebra {
        let n = m * m;
        let mut c = vec![C64::zero(); n * n * n];
        let mut unit = vec![C64::zero(); n];
        let mut star = Matrix::zeros(n, n);
        for a in 0..m {
            unit[a * m + a] = C64::one();
            for b in 0..m {
                star.set(b * m + a, a * m + b, C64::one());
                for d in 0..m {
                    c[((a * m + b) * n + b * m + d) * n + a * m + d] = C64::one();
                }
            }
        }
        StarAlgebra { n, c, unit, star }
    }

    /// Upper triangular 2×2 matrices `span{E11, E12, E22}`, with the star
    /// `E11 ↔ E22`, `E12 ↦ E12` (transpose along the anti-diagonal, conjugated).
    pub fn upper_triangular() -> StarAlgebra {
        let n = 3;
        let mut c = vec![C64::zero(); 27];
        let mut set = |i: usize, j: usize, k: usize| c[(i * n + j) * n + k] = C64::one();
        set(0, 0, 0);
        set(0, 1, 1);
        set(1, 2, 1);
        set(2, 2, 2);
        let mut star = Matrix::zeros(3, 3);
        star.set(2, 0, C64::one());
        star.set(1, 1, C64::one());
        star.set(0, 2, C64::one());
        StarAlgebra { n, c, unit: vec![C64::one(), C64::zero(), C64::one()], star }
    }

    pub fn tensor(&self, o: &StarAlgebra) -> StarAlgebra {
        let (na, nb) = (self.n, o.n);
        let n = na * nb;
        let mut c = vec![C64::zero(); n * n * n];
        for i1 in 0..na {
            for i2 in 0..na {
                for k1 in 0..na {
                    let x = self.c[(i1 * na + i2) * na + k1];
                    if x.is_zero() {
                        continue;
                    }
                    for j1 in 0..nb {
                        for j2 in 0..nb {
                            for k2 in 0..nb {
                                let y = o.c[(j1 * nb + j2) * nb + k2];
                                c[((i1 * nb + j1) * n + i2 * nb + j2) * n + k1 * nb + k2] = x * y;
                            }
                        }
                    }
                }
            }
        }
        let mut unit = vec![C64::zero(); n];
        let mut star = Matrix::zeros(n, n);
        for i in 0..na {
            for j in 0..nb {
                unit[i * nb + j] = self.unit[i] * o.unit[j];
                for k in 0..na {
                    for l in 0..nb {
                        star.set(k * nb + l, i * nb + j, self.star.get(k, i) * o.star.get(l, j));
                    }
                }
            }
        }
        StarAlgebra { n, c, unit, star }
    }

    /// The same algebra in the basis `f_a = Σ_i P_ia e_i`, with the
    /// isomorphism from `self` (coordinates `x ↦ P^{-1} x`).
    pub fn change_basis(self: &Arc<Self>, p: &Matrix) -> Option<(Arc<StarAlgebra>, Morphism)> {
        let n = self.n;
        let pinv = p.inverse()?;
        let mut c = vec![C64::zero(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                let prod = self.mul(&p.column(a), &p.column(b));
                let f = pinv.apply(&prod);
                c[(a * n + b) * n..(a * n + b + 1) * n].copy_from_slice(&f);
            }
        }
        let unit = pinv.apply(&self.unit);
        let conj_p = Matrix { rows: n, cols: n, data: p.data.iter().map(|z| z.conj()).collect() };
        let star = pinv.compose(&self.star).compose(&conj_p);
        let b = Arc::new(StarAlgebra::new(n, c, unit, star).ok()?);
        let iso = Morphism::new(self.clone(), b.clone(), pinv).ok()?;
        Some((b, iso))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn unit(&self) -> Vec<C64> {
        self.unit.clone()
    }

    pub fn basis(&self, i: usize) -> Vec<C64> {
        basis_vec(self.n, i)
    }

    pub fn star_matrix(&self) -> &Matrix {
        &self.star
    }

    pub fn structure(&self, i: usize, j: usize) -> Vec<C64> {
        let n = self.n;
        self.c[(i * n + j) * n..(i * n + j + 1) * n].to_vec()
    }

    pub fn mul(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut out = vec![C64::zero(); n];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for k in 0..n {
                    out[k] += ab * self.c[(i * n + j) * n + k];
                }
            }
        }
        out
    }

    pub fn star_of(&self, x: &[C64]) -> Vec<C64> {
        let conj: Vec<C64> = x.iter().map(|z| z.conj()).collect();
        self.star.apply(&conj)
    }

    pub fn commutator(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        xy.iter().zip(&yx).map(|(a, b)| a - b).collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| norm_inf(&self.commutator(&self.basis(i), &self.basis(j))) <= TOL_LIN))
    }

    /// Dimension of the unital subalgebra generated by `gens`, by span saturation.
    pub fn generated_dim(&self, gens: &[Vec<C64>]) -> usize {
        let mut e = Echelon::<C64>::new();
        let mut span: Vec<Vec<C64>> = vec![];
        let mut frontier: Vec<Vec<C64>> = vec![];
        for v in std::iter::once(self.unit.clone()).chain(gens.iter().cloned()) {
            if e.insert(sparse_from_dense(&v)) {
                span.push(v.clone());
                frontier.push(v);
            }
        }
        while let Some(v) = frontier.pop() {
            let snapshot = span.clone();
            for w in snapshot {
                for p in [self.mul(&v, &w), self.mul(&w, &v)] {
                    if e.insert(sparse_from_dense(&p)) {
                        span.push(p.clone());
                        frontier.push(p);
                    }
                }
            }
        }
        e.rank()
    }
}

/// Linear map between *-algebras, `m` of shape `dst.dim × src.dim`.
#[derive(Clone, Debug)]
pub struct Morphism {
    pub src: Arc<StarAlgebra>,
    pub dst: Arc<StarAlgebra>,
    pub m: Matrix,
}

impl Morphism {
    pub fn new(src: Arc<StarAlgebra>, dst: Arc<StarAlgebra>, m: Matrix) -> Result<Morphism, AlgebraError> {
        let f = Morphism::unchecked(src, dst, m)?;
        f.check()?;
        Ok(f)
    }

    pub fn unchecked(src: Arc<StarAlgebra>, dst: Arc<StarAlgebra>, m: Matrix) -> Result<Morphism, AlgebraError> {
        if m.rows != dst.dim() || m.cols != src.dim() {
            return Err(AlgebraError::DimensionMismatch { expected: dst.dim() * src.dim(), got: m.rows * m.cols });
        }
        Ok(Morphism { src, dst, m })
    }

    pub fn identity(a: Arc<StarAlgebra>) -> Morphism {
        let n = a.dim();
        Morphism { src: a.clone(), dst: a, m: Matrix::identity(n) }
    }

    /// Unital, multiplicative and star-preserving on basis elements.
    pub fn check(&self) -> Result<(), AlgebraError> {
        let bad = |s: String| Err(AlgebraError::NotAMorphism(s));
        if !close(&self.apply(&self.src.unit()), &self.dst.unit()) {
            return bad("unit is not preserved".into());
        }
        let n = self.src.dim();
        for i in 0..n {
            let fi = self.m.column(i);
            if !close(&self.apply(&self.src.star_of(&self.src.basis(i))), &self.dst.star_of(&fi)) {
                return bad(format!("star fails on e{i}"));
            }
            for j in 0..n {
                let lhs = self.apply(&self.src.structure(i, j));
                let rhs = self.dst.mul(&fi, &self.m.column(j));
                if !close(&lhs, &rhs) {
                    return bad(format!("f(e{i} e{j}) != f(e{i}) f(e{j})"));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.m.apply(x)
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Morphism) -> Morphism {
        Morphism { src: self.src.clone(), dst: g.dst.clone(), m: g.m.compose(&self.m) }
    }

    pub fn rank(&self) -> usize {
        self.m.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.src.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.dst.dim()
    }

    pub fn is_iso(&self) -> bool {
        self.src.dim() == self.dst.dim() && self.is_injective()
    }
}

/// Two-sided *-ideal, stored as an echelon basis of the subspace.
#[derive(Clone, Debug)]
pub struct Ideal {
    pub parent: Arc<StarAlgebra>,
    ech: Echelon<C64>,
}

impl Ideal {
    pub fn new(parent: Arc<StarAlgebra>, vectors: &[Vec<C64>]) -> Result<Ideal, AlgebraError> {
        let mut ech = Echelon::new();
        for v in vectors {
            ech.insert(sparse_from_dense(v));
        }
        let ideal = Ideal { parent, ech };
        ideal.check()?;
        Ok(ideal)
    }

    pub fn zero(parent: Arc<StarAlgebra>) -> Ideal {
        Ideal { parent, ech: Echelon::new() }
    }

    pub fn full(parent: Arc<StarAlgebra>) -> Ideal {
        let n = parent.dim();
        let vs: Vec<_> = (0..n).map(|i| basis_vec(n, i)).collect();
        let mut ech = Echelon::new();
        for v in &vs {
            ech.insert(sparse_from_dense(v));
        }
        Ideal { parent, ech }
    }

    fn check(&self) -> Result<(), AlgebraError> {
        let a = &self.parent;
        for (bi, b) in self.basis().iter().enumerate() {
            if !self.contains(&a.star_of(b)) {
                return Err(AlgebraError::NotAnIdeal(format!("star(b{bi}) escapes")));
            }
            for i in 0..a.dim() {
                let e = a.basis(i);
                if !self.contains(&a.mul(&e, b)) {
                    return Err(AlgebraError::NotAnIdeal(format!("e{i} b{bi} escapes")));
                }
                if !self.contains(&a.mul(b, &e)) {
                    return Err(AlgebraError::NotAnIdeal(format!("b{bi} e{i} escapes")));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> Vec<Vec<C64>> {
        let n = self.parent.dim();
        self.ech.reduced_rows().values().map(|r| dense_from_sparse(r, n)).collect()
    }

    pub fn contains(&self, x: &[C64]) -> bool {
        self.ech.contains(sparse_from_dense(x))
    }

    /// Coordinates of the class of `x` on the non-pivot basis elements.
    pub fn project(&self, x: &[C64]) -> Vec<C64> {
        let r = self.ech.reduce(sparse_from_dense(x));
        self.reps().iter().map(|i| r.get(i).copied().unwrap_or_default()).collect()
    }

    /// Basis indices representing the quotient.
    pub fn reps(&self) -> Vec<usize> {
        (0..self.parent.dim()).filter(|&i| !self.ech.is_pivot(i)).collect()
    }
}

/// `A / I` with its projection; the full ideal gives the one-point algebra.
pub fn quotient_by_ideal(ideal: &Ideal) -> Result<(Arc<StarAlgebra>, Morphism), AlgebraError> {
    let a = &ideal.parent;
    let reps = ideal.reps();
    let k = reps.len();
    let mut c = vec![C64::zero(); k * k * k];
    let mut star = Matrix::zeros(k, k);
    for (x, &rx) in reps.iter().enumerate() {
        let s = ideal.project(&a.star_of(&a.basis(rx)));
        for (z, v) in s.into_iter().enumerate() {
            star.set(z, x, v);
        }
        for (y, &ry) in reps.iter().enumerate() {
            let p = ideal.project(&a.structure(rx, ry));
            c[(x * k + y) * k..(x * k + y + 1) * k].copy_from_slice(&p);
        }
    }
    let q = Arc::new(StarAlgebra::new(k, c, ideal.project(&a.unit()), star)?);
    let cols: Vec<Vec<C64>> = (0..a.dim()).map(|i| ideal.project(&a.basis(i))).collect();
    let pi = Morphism::new(a.clone(), q.clone(), Matrix::from_columns(k, &cols))?;
    Ok((q, pi))
}

pub fn morphism_kernel(f: &Morphism) -> Result<Ideal, AlgebraError> {
    let rows: Vec<Vec<C64>> = (0..f.m.rows).map(|i| f.m.row(i)).collect();
    let ns = null_space(&rows, f.m.cols);
    Ideal::new(f.src.clone(), &ns)
}

/// Smallest two-sided *-ideal containing `gens`.
pub fn ideal_generated_by(a: &Arc<StarAlgebra>, gens: &[Vec<C64>]) -> Ideal {
    let mut ech = Echelon::<C64>::new();
    let mut frontier = vec![];
    let push = |ech: &mut Echelon<C64>, frontier: &mut Vec<Vec<C64>>, v: Vec<C64>| {
        if ech.insert(sparse_from_dense(&v)) {
            frontier.push(v);
        }
    };
    for g in gens {
        push(&mut ech, &mut frontier, g.clone());
    }
    while let Some(v) = frontier.pop() {
        push(&mut ech, &mut frontier, a.star_of(&v));
        for i in 0..a.dim() {
            let e = a.basis(i);
            push(&mut ech, &mut frontier, a.mul(&e, &v));
            push(&mut ech, &mut frontier, a.mul(&v, &e));
        }
    }
    Ideal { parent: a.clone(), ech }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cr, I};

    #[test]
    fn constructors_satisfy_axioms() {
        for a in [
            StarAlgebra::complex(),
            StarAlgebra::diagonal(3),
            StarAlgebra::matrices(2),
            StarAlgebra::upper_triangular(),
            StarAlgebra::zero(),
            StarAlgebra::diagonal(2).tensor(&StarAlgebra::matrices(2)),
        ] {
            a.check_axioms().unwrap();
        }
        assert!(!StarAlgebra::upper_triangular().is_commutative());
        assert!(StarAlgebra::diagonal(3).is_commutative());
    }

    #[test]
    fn broken_star_is_rejected() {
        let a = StarAlgebra::matrices(2);
        let r = StarAlgebra::new(4, a.c.clone(), a.unit(), Matrix::identity(4));
        assert!(matches!(r, Err(AlgebraError::NotAnAlgebra(_))));
    }

    #[test]
    fn quotient_of_three_points() {
        let a = Arc::new(StarAlgebra::diagonal(3));
        let i = Ideal::new(a.clone(), &[a.basis(1)]).unwrap();
        let (q, pi) = quotient_by_ideal(&i).unwrap();
        assert_eq!(q.dim(), 2);
        assert!(q.is_commutative());
        assert!(pi.is_surjective());
        assert_eq!(morphism_kernel(&pi).unwrap().dim(), 1);
    }

    #[test]
    fn matrix_unit_generates_everything() {
        let a = Arc::new(StarAlgebra::matrices(2));
        assert_eq!(ideal_generated_by(&a, &[a.basis(1)]).dim(), 4);
        assert_eq!(ideal_generated_by(&a, &[vec![C64::zero(); 4]]).dim(), 0);
        let (q, _) = quotient_by_ideal(&Ideal::full(a.clone())).unwrap();
        assert_eq!(q.dim(), 0);
        let bad = Ideal::new(a.clone(), &[a.basis(0)]);
        assert!(matches!(bad, Err(AlgebraError::NotAnIdeal(_))));
    }

    #[test]
    fn basis_change_is_an_isomorphism() {
        let a = Arc::new(StarAlgebra::upper_triangular());
        let mut p = Matrix::identity(3);
        p.set(0, 1, cr(2.0));
        p.set(2, 0, I);
        let (b, iso) = a.change_basis(&p).unwrap();
        assert!(iso.is_iso());
        b.check_axioms().unwrap();
    }
}
