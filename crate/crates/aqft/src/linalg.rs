//! Complex linear algebra: sparse incremental row echelon forms, rank,
//! null spaces, with an exact rational fallback when a floating-point pivot
//! decision is too close to the tolerance to trust.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num::bigint::BigInt;
use num::complex::Complex;
use num::{BigRational, One, Zero};

pub type C64 = Complex<f64>;
pub type CQ = Complex<BigRational>;

/// Rank and null-space decisions treat magnitudes at or below this as zero.
pub const TOL_LIN: f64 = 1e-9;

/// Magnitudes in this band make a floating-point decision ambiguous.
const AMBIGUOUS: (f64, f64) = (1e-13, 1e-6);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub trait Scalar: Clone + Debug + PartialEq {
    fn zero_value() -> Self;
    fn one_value() -> Self;
    fn is_negligible(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn from_c64(x: C64) -> Self;
    fn to_c64(&self) -> C64;
    /// Records ambiguity of the last zero test, if the type can be ambiguous.
    fn ambiguous(&self) -> bool {
        false
    }
}

impl Scalar for C64 {
    fn zero_value() -> Self {
        <C64 as Zero>::zero()
    }
    fn one_value() -> Self {
        <C64 as One>::one()
    }
    fn is_negligible(&self) -> bool {
        self.norm() <= TOL_LIN
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn from_c64(x: C64) -> Self {
        x
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn ambiguous(&self) -> bool {
        let n = self.norm();
        n > AMBIGUOUS.0 && n < AMBIGUOUS.1
    }
}

fn big_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

fn big_to_f64(x: &BigRational) -> f64 {
    use num::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // fall back on a scaled quotient for huge numerators/denominators
        let shift = x.denom().bits().max(x.numer().bits()) as i64 - 60;
        let scale = BigInt::one() << shift.max(0) as usize;
        let n = (x.numer() / &scale).to_f64().unwrap_or(0.0);
        let d = (x.denom() / &scale).to_f64().unwrap_or(1.0);
        n / d
    })
}

impl Scalar for CQ {
    fn zero_value() -> Self {
        CQ::new(BigRational::zero(), BigRational::zero())
    }
    fn one_value() -> Self {
        CQ::new(BigRational::one(), BigRational::zero())
    }
    fn is_negligible(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn from_c64(x: C64) -> Self {
        CQ::new(big_from_f64(x.re), big_from_f64(x.im))
    }
    fn to_c64(&self) -> C64 {
        C64::new(big_to_f64(&self.re), big_to_f64(&self.im))
    }
}

pub type SparseVec<S> = BTreeMap<usize, S>;

pub fn sparse_from_dense(v: &[C64]) -> SparseVec<C64> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_negligible() || x.ambiguous())
        .map(|(i, x)| (i, *x))
        .collect()
}

pub fn dense_from_sparse(v: &SparseVec<C64>, n: usize) -> Vec<C64> {
    let mut out = vec![C64::zero(); n];
    for (&i, &x) in v {
        out[i] = x;
    }
    out
}

/// Row echelon form with pivots at the largest column index of each row
/// (columns with larger index are eliminated first), rows normalized to a
/// unit pivot.
#[derive(Clone, Debug)]
pub struct Echelon<S: Scalar> {
    rows: BTreeMap<usize, SparseVec<S>>,
    ambiguous: bool,
}

impl<S: Scalar> Default for Echelon<S> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new(), ambiguous: false }
    }
}

impl<S: Scalar> Echelon<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_ambiguous(&self) -> bool {
        self.ambiguous
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Remainder of `v` modulo the row space; only non-pivot columns survive.
    pub fn reduce(&self, v: SparseVec<S>) -> SparseVec<S> {
        self.reduce_flagged(v).0
    }

    /// As [`Echelon::reduce`], also reporting whether an ambiguous magnitude was met.
    pub fn reduce_flagged(&self, mut v: SparseVec<S>) -> (SparseVec<S>, bool) {
        let mut ambiguous = false;
        let mut clean = |v: &mut SparseVec<S>| {
            v.retain(|_, x| {
                if x.ambiguous() {
                    ambiguous = true;
                }
                !x.is_negligible()
            })
        };
        clean(&mut v);
        let mut out = SparseVec::new();
        while let Some((&col, _)) = v.iter().next_back() {
            let x = v.remove(&col).unwrap();
            match self.rows.get(&col) {
                Some(row) => {
                    for (&j, r) in row.range(..col) {
                        let e = v.entry(j).or_insert_with(S::zero_value);
                        *e = e.sub(&x.mul(r));
                    }
                    clean(&mut v);
                }
                None => {
                    out.insert(col, x);
                }
            }
        }
        (out, ambiguous)
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec<S>) -> bool {
        let (mut r, amb) = self.reduce_flagged(v);
        self.ambiguous |= amb;
        let Some((&col, piv)) = r.iter().next_back() else { return false };
        let piv = piv.clone();
        for x in r.values_mut() {
            *x = x.div(&piv);
        }
        r.insert(col, S::one_value());
        self.rows.insert(col, r);
        true
    }

    pub fn contains(&self, v: SparseVec<S>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Fully reduced rows: each row vanishes on every other pivot column.
    pub fn reduced_rows(&self) -> BTreeMap<usize, SparseVec<S>> {
        let mut out: BTreeMap<usize, SparseVec<S>> = BTreeMap::new();
        for (&col, row) in &self.rows {
            let mut r = row.clone();
            r.remove(&col);
            let mut acc = SparseVec::new();
            while let Some((&j, _)) = r.iter().next_back() {
                let x = r.remove(&j).unwrap();
                match out.get(&j) {
                    Some(prow) => {
                        for (&k, y) in prow {
                            if k != j {
                                let e = r.entry(k).or_insert_with(S::zero_value);
                                *e = e.sub(&x.mul(y));
                            }
                        }
                        r.retain(|_, y| !y.is_negligible());
                    }
                    None => {
                        acc.insert(j, x);
                    }
                }
            }
            acc.insert(col, S::one_value());
            out.insert(col, acc);
        }
        out
    }

    /// Basis of `{x : <row, x> = 0 for all rows}` in `n` columns.
    pub fn null_space(&self, n: usize) -> Vec<SparseVec<S>> {
        let rows = self.reduced_rows();
        let mut out = vec![];
        for f in (0..n).filter(|j| !rows.contains_key(j)) {
            let mut x = SparseVec::new();
            x.insert(f, S::one_value());
            for (&p, row) in &rows {
                if let Some(v) = row.get(&f) {
                    x.insert(p, S::zero_value().sub(v));
                }
            }
            out.push(x);
        }
        out
    }
}

fn to_exact(v: &SparseVec<C64>) -> SparseVec<CQ> {
    v.iter().map(|(&i, x)| (i, CQ::from_c64(*x))).collect()
}

/// Rank of a family of vectors, redone exactly when the floating-point
/// elimination met an ambiguous magnitude.
pub fn rank(vectors: &[SparseVec<C64>]) -> usize {
    let mut e = Echelon::<C64>::new();
    for v in vectors {
        e.insert(v.clone());
    }
    if !e.is_ambiguous() {
        return e.rank();
    }
    let mut x = Echelon::<CQ>::new();
    for v in vectors {
        x.insert(to_exact(v));
    }
    x.rank()
}

pub fn rank_dense(rows: &[Vec<C64>]) -> usize {
    rank(&rows.iter().map(|r| sparse_from_dense(r)).collect::<Vec<_>>())
}

/// Null space of the `m × n` matrix given by its rows.
pub fn null_space(rows: &[Vec<C64>], n: usize) -> Vec<Vec<C64>> {
    let sparse: Vec<_> = rows.iter().map(|r| sparse_from_dense(r)).collect();
    let mut e = Echelon::<C64>::new();
    for v in &sparse {
        e.insert(v.clone());
    }
    if !e.is_ambiguous() {
        return e.null_space(n).iter().map(|v| dense_from_sparse(v, n)).collect();
    }
    let mut x = Echelon::<CQ>::new();
    for v in &sparse {
        x.insert(to_exact(v));
    }
    x.null_space(n)
        .iter()
        .map(|v| {
            let mut out = vec![C64::zero(); n];
            for (&i, y) in v {
                out[i] = y.to_c64();
            }
            out
        })
        .collect()
}

/// Dense matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![C64::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::one());
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[Vec<C64>]) -> Self {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for i in 0..rows {
                m.set(i, j, col[i]);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: C64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<C64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn compose(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows);
        let mut m = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    m.data[i * o.cols + j] += a * o.get(k, j);
                }
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        rank_dense(&(0..self.rows).map(|i| self.row(i)).collect::<Vec<_>>())
    }

    pub fn max_abs_diff(&self, o: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        self.data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.rows;
        if n != self.cols || self.rank() < n {
            return None;
        }
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let p = (col..n).max_by(|&x, &y| a.get(x, col).norm().total_cmp(&a.get(y, col).norm()))?;
            for j in 0..n {
                a.data.swap(col * n + j, p * n + j);
                inv.data.swap(col * n + j, p * n + j);
            }
            let d = a.get(col, col);
            for j in 0..n {
                a.set(col, j, a.get(col, j) / d);
                inv.set(col, j, inv.get(col, j) / d);
            }
            for i in 0..n {
                if i != col {
                    let f = a.get(i, col);
                    if f.is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        a.set(i, j, a.get(i, j) - f * a.get(col, j));
                        inv.set(i, j, inv.get(i, j) - f * inv.get(col, j));
                    }
                }
            }
        }
        Some(inv)
    }
}

pub fn norm_inf(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn is_small(x: f64) -> bool {
    x.abs() <= TOL_LIN
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[(usize, f64)]) -> SparseVec<C64> {
        v.iter().map(|&(i, x)| (i, cr(x))).collect()
    }

    #[test]
    fn echelon_rank_and_reduce() {
        let mut e = Echelon::<C64>::new();
        assert!(e.insert(sv(&[(0, 1.0), (2, 1.0)])));
        assert!(e.insert(sv(&[(1, 1.0), (2, 1.0)])));
        assert!(!e.insert(sv(&[(0, 1.0), (1, -1.0)])));
        assert_eq!(e.rank(), 2);
        // quotient representative lives on the lowest surviving column
        let r = e.reduce(sv(&[(2, 1.0)]));
        assert_eq!(r.keys().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn null_space_of_projection() {
        let rows = vec![vec![cr(1.0), cr(0.0), cr(0.0)], vec![cr(0.0), cr(1.0), cr(1.0)]];
        let ns = null_space(&rows, 3);
        assert_eq!(ns.len(), 1);
        let m = Matrix { rows: 2, cols: 3, data: rows.concat() };
        assert!(norm_inf(&m.apply(&ns[0])) < 1e-12);
    }

    #[test]
    fn ambiguous_pivot_uses_exact_arithmetic() {
        let eps = 1e-8;
        let v = vec![sv(&[(0, 1.0), (1, 1.0)]), sv(&[(0, 1.0), (1, 1.0 + eps)])];
        assert_eq!(rank(&v), 2);
        let w = vec![sv(&[(0, 1.0), (1, 1.0)]), sv(&[(0, 2.0), (1, 2.0)])];
        assert_eq!(rank(&w), 1);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix { rows: 2, cols: 2, data: vec![cr(2.0), I, cr(0.0), cr(1.0)] };
        let inv = m.inverse().unwrap();
        assert!(m.compose(&inv).max_abs_diff(&Matrix::identity(2)) < 1e-12);
        assert!(Matrix::zeros(2, 2).inverse().is_none());
    }
}
