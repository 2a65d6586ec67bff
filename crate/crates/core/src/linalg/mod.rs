//! Exact dense linear algebra over [`Field`]s.
//!
//! Operators act on column vectors; subspaces are stored as row vectors in
//! reduced row echelon form.

mod subspace;

pub use subspace::{quotient_action, restrict_action, spin, BasisCoordinates, Subspace};
pub(crate) use subspace::EchelonBuilder;

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{poly, same_field, Field, FieldElem};

#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
            && same_field(&self.field, &other.field)
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "{:?}", self.row(i))?;
            if i + 1 < self.rows {
                write!(f, ", ")?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|&v| v >= field.order()) {
            return Err(Error::InvalidField("matrix entry out of range".into()));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        Self::scalar(field, n, 1)
    }

    pub fn scalar(field: &Field, n: usize, c: u64) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, f: impl Fn(usize, usize) -> u64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    /// Builds from integer rows, reducing entries into the prime subfield.
    pub fn from_ints(field: &Field, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(field, r, c, |i, j| field.from_int(rows[i][j]))
    }

    /// Builds from encoded rows of equal length.
    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length");
            data.extend_from_slice(r);
        }
        Matrix { field: field.clone(), rows: rows.len(), cols, data }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElem {
        self.field.elem(self.get(i, j))
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// `Some(c)` if the matrix is `c·I`.
    pub fn scalar_value(&self) -> Option<u64> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 0 {
            return Some(0);
        }
        let c = self.get(0, 0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) != if i == j { c } else { 0 } {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    fn zip(&self, other: &Matrix, f: impl Fn(u64, u64) -> u64) -> Matrix {
        assert!(same_field(&self.field, &other.field), "matrices over different fields");
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let f = self.field.clone();
        self.zip(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let f = self.field.clone();
        self.zip(other, |a, b| f.sub(a, b))
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let data = self.data.iter().map(|&a| self.field.mul(a, c)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|&a| self.field.neg(a)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: u64, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        if c == 0 {
            return;
        }
        let f = &self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, f.mul(c, b));
        }
    }

    /// Matrix product; panics on incompatible shapes.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert!(same_field(&self.field, &other.field), "matrices over different fields");
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let f = &self.field;
        let mut data = vec![0u64; n * m];
        if f.is_prime_field() {
            let p = f.characteristic();
            let mut acc = vec![0u64; m];
            for i in 0..n {
                acc.iter_mut().for_each(|a| *a = 0);
                for t in 0..k {
                    let a = self.data[i * k + t];
                    if a == 0 {
                        continue;
                    }
                    let brow = &other.data[t * m..(t + 1) * m];
                    for (x, &b) in acc.iter_mut().zip(brow) {
                        *x += a * b;
                    }
                    if t % 1024 == 1023 {
                        acc.iter_mut().for_each(|x| *x %= p);
                    }
                }
                for (d, &x) in data[i * m..(i + 1) * m].iter_mut().zip(&acc) {
                    *d = x % p;
                }
            }
        } else {
            for i in 0..n {
                for t in 0..k {
                    let a = self.data[i * k + t];
                    if a == 0 {
                        continue;
                    }
                    for j in 0..m {
                        let b = other.data[t * m + j];
                        if b != 0 {
                            data[i * m + j] = f.add(data[i * m + j], f.mul(a, b));
                        }
                    }
                }
            }
        }
        Matrix { field: f.clone(), rows: n, cols: m, data }
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        if !same_field(&self.field, &other.field) {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(other))
    }

    /// `self · v` for a column vector `v`.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "vector length");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                if f.is_prime_field() {
                    let s: u64 = row.iter().zip(v).map(|(&a, &b)| a * b).sum();
                    s % f.characteristic()
                } else {
                    row.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
                }
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Kronecker product; index `(i, k)` of the result is `i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        assert!(same_field(&self.field, &other.field));
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        let f = &self.field;
        let mut out = Matrix::zeros(f, r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        out.set(i * r2 + k, j * c2 + l, f.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        out
    }

    pub fn vstack(field: &Field, cols: usize, blocks: &[&Matrix]) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    /// Maps every entry through `f` into another field.
    pub fn map_into(&self, target: &Field, f: impl Fn(u64) -> u64) -> Matrix {
        let data = self.data.iter().map(|&a| f(a)).collect();
        Matrix { field: target.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form, rank and pivot columns.
    pub fn rref(&self) -> (Matrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let r = pivots.len();
        (m, r, pivots)
    }

    pub(crate) fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    self.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).unwrap();
            if inv != 1 {
                for j in c..cols {
                    self.data[r * cols + j] = f.mul(self.data[r * cols + j], inv);
                }
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (prow, after) = rest.split_at_mut(cols);
            let eliminate = |row: &mut [u64]| {
                let factor = row[c];
                if factor == 0 {
                    return;
                }
                if f.is_prime_field() {
                    let p = f.characteristic();
                    let neg = p - factor;
                    for j in c..cols {
                        row[j] = (row[j] + neg * prow[j]) % p;
                    }
                } else {
                    for j in c..cols {
                        if prow[j] != 0 {
                            row[j] = f.sub(row[j], f.mul(factor, prow[j]));
                        }
                    }
                }
            };
            before.chunks_mut(cols).for_each(eliminate);
            after.chunks_mut(cols).for_each(eliminate);
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// `{v : M v = 0}` in canonical echelon form.
    pub fn kernel(&self) -> Subspace {
        let (r, rank, pivots) = self.rref();
        let n = self.cols;
        let f = &self.field;
        let mut is_pivot = vec![false; n];
        pivots.iter().for_each(|&c| is_pivot[c] = true);
        let mut vecs = Vec::with_capacity(n - rank);
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; n];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            vecs.push(v);
        }
        Subspace::from_vectors(f, n, vecs)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(&self.field, n, n, |i, j| aug.get(i, n + j)))
    }

    /// Characteristic polynomial via reduction to Hessenberg form.
    pub fn char_poly(&self) -> poly::Poly {
        assert!(self.is_square());
        let f = self.field.clone();
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(i) = (j + 1..n).find(|&i| h.get(i, j) != 0) else {
                continue;
            };
            if i != j + 1 {
                for c in 0..n {
                    h.data.swap(i * n + c, (j + 1) * n + c);
                }
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + j + 1);
                }
            }
            let inv = f.inv(h.get(j + 1, j)).unwrap();
            for k in j + 2..n {
                let fac = f.mul(h.get(k, j), inv);
                if fac == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = f.sub(h.get(k, c), f.mul(fac, h.get(j + 1, c)));
                    h.set(k, c, v);
                }
                for r in 0..n {
                    let v = f.add(h.get(r, j + 1), f.mul(fac, h.get(r, k)));
                    h.set(r, j + 1, v);
                }
            }
        }
        // p_k is the characteristic polynomial of the leading k×k block
        let mut ps: Vec<poly::Poly> = vec![vec![1]];
        for k in 1..=n {
            let hk = h.get(k - 1, k - 1);
            let mut pk = poly::mul(&f, &[f.neg(hk), 1], &ps[k - 1]);
            let mut prod = 1u64;
            for i in (1..k).rev() {
                prod = f.mul(prod, h.get(i, i - 1));
                if prod == 0 {
                    break;
                }
                let coef = f.mul(prod, h.get(i - 1, k - 1));
                pk = poly::sub(&f, &pk, &poly::scale(&f, &ps[i - 1], coef));
            }
            ps.push(pk);
        }
        ps.pop().unwrap()
    }

    /// `g(self)` by Horner's rule.
    pub fn eval_poly(&self, g: &[u64]) -> Matrix {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = Matrix::zeros(&self.field, n, n);
        for &c in g.iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                let v = self.field.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;

    #[test]
    fn rref_examples() {
        let f2 = FieldCtx::prime(2).unwrap();
        let z = Matrix::zeros(&f2, 2, 3);
        let (r, rank, _) = z.rref();
        assert_eq!((r, rank), (z.clone(), 0));

        let id = Matrix::identity(&f2, 3);
        assert_eq!(id.rref().0, id);

        let m = Matrix::from_ints(&f2, &[vec![1, 1], vec![1, 1]]);
        let (r, rank, piv) = m.rref();
        assert_eq!(r, Matrix::from_ints(&f2, &[vec![1, 1], vec![0, 0]]));
        assert_eq!((rank, piv), (1, vec![0]));
    }

    #[test]
    fn kernel_examples() {
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(Matrix::identity(&f3, 3).kernel().dim(), 0);
        assert_eq!(Matrix::zeros(&f3, 2, 3).kernel().dim(), 3);
        let m = Matrix::from_ints(&f3, &[vec![1, 2], vec![2, 4]]);
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis().row(0), &[1, 1]);
    }

    #[test]
    fn char_poly_of_companion_matrix() {
        let f5 = FieldCtx::prime(5).unwrap();
        // companion of x^3 + 2x + 3
        let c = Matrix::from_ints(&f5, &[vec![0, 0, -3], vec![1, 0, -2], vec![0, 1, 0]]);
        assert_eq!(c.char_poly(), vec![3, 2, 0, 1]);
        assert!(c.eval_poly(&c.char_poly()).is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let f7 = FieldCtx::prime(7).unwrap();
        let m = Matrix::from_ints(&f7, &[vec![1, 2, 0], vec![3, 1, 4], vec![0, 5, 6]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(&f7, 3));
        assert!(Matrix::from_ints(&f7, &[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }
}
