use crate::error::{Error, Result};
use crate::gf::{same_field, Field};

use super::Matrix;

/// A subspace of `F^n` held as a reduced-row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: &Field, n: usize) -> Self {
        Subspace { basis: Matrix::zeros(field, 0, n), pivots: Vec::new() }
    }

    pub fn full(field: &Field, n: usize) -> Self {
        Subspace { basis: Matrix::identity(field, n), pivots: (0..n).collect() }
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        let (r, rank, pivots) = m.rref();
        let n = m.cols();
        let basis = Matrix::new(m.field(), rank, n, r.data()[..rank * n].to_vec()).unwrap();
        Subspace { basis, pivots }
    }

    pub fn from_vectors(field: &Field, n: usize, vecs: Vec<Vec<u64>>) -> Self {
        Self::row_space(&Matrix::from_rows(field, n, &vecs))
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> Vec<Vec<u64>> {
        self.basis.row_vectors()
    }

    /// Non-pivot columns; the canonical complement coordinates.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim()];
        self.pivots.iter().for_each(|&c| is_pivot[c] = true);
        (0..self.ambient_dim()).filter(|&c| !is_pivot[c]).collect()
    }

    /// Remainder of `v` modulo the subspace; zero at every pivot column.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let f = self.field();
        let mut w = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = w[pc];
            if c == 0 {
                continue;
            }
            for (x, &b) in w.iter_mut().zip(self.basis.row(i)) {
                if b != 0 {
                    *x = f.sub(*x, f.mul(c, b));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        v.len() == self.ambient_dim() && self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[u64]) -> Option<Vec<u64>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&c| v[c]).collect())
    }

    /// Linear combination of basis rows.
    pub fn combine(&self, coords: &[u64]) -> Vec<u64> {
        let f = self.field();
        let mut out = vec![0; self.ambient_dim()];
        for (i, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (x, &b) in out.iter_mut().zip(self.basis.row(i)) {
                *x = f.add(*x, f.mul(c, b));
            }
        }
        out
    }

    /// Image of `v` in the quotient, in complement coordinates.
    pub fn quotient_coordinates(&self, v: &[u64]) -> Vec<u64> {
        let w = self.reduce(v);
        self.complement_indices().into_iter().map(|c| w[c]).collect()
    }

    /// Representative of a quotient vector given in complement coordinates.
    pub fn lift_from_quotient(&self, coords: &[u64]) -> Vec<u64> {
        let mut v = vec![0; self.ambient_dim()];
        for (c, &x) in self.complement_indices().into_iter().zip(coords) {
            v[c] = x;
        }
        v
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() || !same_field(self.field(), other.field()) {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of dimension {} and {}",
                self.ambient_dim(),
                other.ambient_dim()
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let n = self.ambient_dim();
        Ok(Subspace::row_space(&Matrix::vstack(self.field(), n, &[&self.basis, &other.basis])))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let f = self.field();
        let n = self.ambient_dim();
        // x·A lies in B iff x·(A mod B) = 0
        let residues: Vec<Vec<u64>> = self.vectors().iter().map(|v| other.reduce(v)).collect();
        let r = Matrix::from_rows(f, n, &residues);
        let left_kernel = r.transpose().kernel();
        let vecs = left_kernel.vectors().iter().map(|x| self.combine(x)).collect();
        Ok(Subspace::from_vectors(f, n, vecs))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.vectors().iter().all(|v| other.contains(v))
    }

    /// Whether `M u ∈ self` for every basis vector `u`.
    pub fn is_invariant(&self, op: &Matrix) -> bool {
        self.vectors().iter().all(|u| self.contains(&op.apply(u)))
    }

    /// Maps a subspace of this subspace, given in echelon coordinates, to ambient coordinates.
    pub fn lift_subspace(&self, inner: &Subspace) -> Subspace {
        let vecs = inner.vectors().iter().map(|c| self.combine(c)).collect();
        Subspace::from_vectors(self.field(), self.ambient_dim(), vecs)
    }

    /// Preimage in the ambient space of a subspace of the quotient (complement coordinates).
    pub fn lift_quotient_subspace(&self, inner: &Subspace) -> Subspace {
        let mut vecs = self.vectors();
        vecs.extend(inner.vectors().iter().map(|c| self.lift_from_quotient(c)));
        Subspace::from_vectors(self.field(), self.ambient_dim(), vecs)
    }

    /// Echelon coordinates of a subspace contained in this one.
    pub fn relative(&self, inner: &Subspace) -> Option<Subspace> {
        let coords: Option<Vec<Vec<u64>>> = inner.vectors().iter().map(|v| self.coordinates(v)).collect();
        Some(Subspace::from_vectors(self.field(), self.dim(), coords?))
    }
}

/// Coordinates with respect to an arbitrary (non-echelon) basis of row vectors.
#[derive(Clone, Debug)]
pub struct BasisCoordinates {
    echelon: Subspace,
    // row i of `transform` expresses echelon row i in the original basis
    transform: Matrix,
}

impl BasisCoordinates {
    /// Fails if the rows are linearly dependent.
    pub fn new(field: &Field, n: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let k = rows.len();
        let mut aug = Matrix::zeros(field, k, n + k);
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                aug.set(i, j, x);
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref_in_place();
        if pivots.iter().filter(|&&c| c < n).count() < k {
            return Err(Error::DimensionMismatch("basis vectors are linearly dependent".into()));
        }
        let echelon = Subspace {
            basis: Matrix::from_fn(field, k, n, |i, j| aug.get(i, j)),
            pivots: pivots[..k].to_vec(),
        };
        let transform = Matrix::from_fn(field, k, k, |i, j| aug.get(i, n + j));
        Ok(BasisCoordinates { echelon, transform })
    }

    pub fn span(&self) -> &Subspace {
        &self.echelon
    }

    pub fn coordinates(&self, v: &[u64]) -> Option<Vec<u64>> {
        let ech = self.echelon.coordinates(v)?;
        let f = self.echelon.field();
        let k = ech.len();
        let mut out = vec![0; k];
        for (i, &c) in ech.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, x) in out.iter_mut().enumerate() {
                *x = f.add(*x, f.mul(c, self.transform.get(i, j)));
            }
        }
        debug_assert_eq!(out.len(), k);
        Some(out)
    }
}

/// Incrementally grown semi-echelon basis.
pub(crate) struct EchelonBuilder {
    field: Field,
    n: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl EchelonBuilder {
    pub(crate) fn new(field: &Field, n: usize) -> Self {
        EchelonBuilder { field: field.clone(), n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub(crate) fn reduce(&self, v: &mut [u64]) {
        let f = &self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            if f.is_prime_field() {
                let p = f.characteristic();
                let neg = p - c;
                for (x, &b) in v.iter_mut().zip(row) {
                    *x = (*x + neg * b) % p;
                }
            } else {
                for (x, &b) in v.iter_mut().zip(row) {
                    if b != 0 {
                        *x = f.sub(*x, f.mul(c, b));
                    }
                }
            }
        }
    }

    /// Adds `v` if it is independent; returns the normalized row when added.
    pub(crate) fn insert(&mut self, mut v: Vec<u64>) -> Option<&[u64]> {
        self.reduce(&mut v);
        let pc = v.iter().position(|&x| x != 0)?;
        let inv = self.field.inv(v[pc]).unwrap();
        if inv != 1 {
            v.iter_mut().for_each(|x| *x = self.field.mul(*x, inv));
        }
        self.rows.push(v);
        self.pivots.push(pc);
        self.rows.last().map(|r| r.as_slice())
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn finish(self) -> Subspace {
        Subspace::from_vectors(&self.field, self.n, self.rows)
    }
}

/// Smallest subspace containing `generators` and invariant under every operator.
pub fn spin(field: &Field, n: usize, generators: &[Vec<u64>], operators: &[Matrix]) -> Subspace {
    let mut builder = EchelonBuilder::new(field, n);
    let mut queue: Vec<Vec<u64>> = Vec::new();
    for g in generators {
        if let Some(row) = builder.insert(g.clone()) {
            queue.push(row.to_vec());
        }
    }
    let mut next = 0;
    while next < queue.len() {
        if builder.dim() == n {
            break;
        }
        let v = queue[next].clone();
        next += 1;
        for op in operators {
            let w = op.apply(&v);
            if let Some(row) = builder.insert(w) {
                queue.push(row.to_vec());
            }
        }
    }
    builder.finish()
}

/// Action induced on `U` in its echelon basis.
pub fn restrict_action(m: &Matrix, u: &Subspace) -> Result<Matrix> {
    let k = u.dim();
    let mut out = Matrix::zeros(m.field(), k, k);
    for (i, v) in u.vectors().iter().enumerate() {
        let w = m.apply(v);
        let coords = u
            .coordinates(&w)
            .ok_or_else(|| Error::NotInvariant(format!("image of basis vector {i} leaves the subspace")))?;
        for (j, c) in coords.into_iter().enumerate() {
            out.set(j, i, c);
        }
    }
    Ok(out)
}

/// Action induced on `F^n / U` in the complement coordinates of `U`.
pub fn quotient_action(m: &Matrix, u: &Subspace) -> Result<Matrix> {
    if !u.is_invariant(m) {
        return Err(Error::NotInvariant("operator does not preserve the subspace".into()));
    }
    let comp = u.complement_indices();
    let k = comp.len();
    let mut out = Matrix::zeros(m.field(), k, k);
    for (i, &c) in comp.iter().enumerate() {
        let w = u.quotient_coordinates(&m.column(c));
        for (j, x) in w.into_iter().enumerate() {
            out.set(j, i, x);
        }
    }
    Ok(out)
}
