//! Lie algebras given by structure constants, p-maps, series and subnormality.

mod envelope;

pub use envelope::{adjust_pmap_centre_kill, matrix_p_closure, p_envelope, Envelope, MatrixLieAlgebra};

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{spin, Matrix, Subspace};

/// A failed axiom together with the basis indices involved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub indices: Vec<usize>,
}

/// Lie algebra with basis `e_0..e_{n-1}` and `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    field: Field,
    dim: usize,
    // row i*n + j holds the coordinates of [e_i, e_j]
    brackets: Matrix,
}

impl LieAlgebra {
    pub fn abelian(field: &Field, dim: usize) -> Self {
        LieAlgebra { field: field.clone(), dim, brackets: Matrix::zeros(field, dim * dim, dim) }
    }

    /// From the brackets `[e_i, e_j] = v` for `i < j`; the rest follows by antisymmetry.
    pub fn from_brackets(field: &Field, dim: usize, brackets: &[(usize, usize, Vec<u64>)]) -> Result<Self> {
        let mut alg = Self::abelian(field, dim);
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim || v.len() != dim {
                return Err(Error::InvalidAlgebra(format!("bracket [{i},{j}] out of range")));
            }
            if i == j {
                if v.iter().any(|&x| x != 0) {
                    return Err(Error::InvalidAlgebra(format!("[e{i}, e{i}] must vanish")));
                }
                continue;
            }
            for (k, &x) in v.iter().enumerate() {
                alg.brackets.set(i * dim + j, k, x);
                alg.brackets.set(j * dim + i, k, field.neg(x));
            }
        }
        Ok(alg)
    }

    /// From a full structure-constant table, without checking any axiom.
    pub fn from_table(field: &Field, dim: usize, table: Matrix) -> Result<Self> {
        if table.rows() != dim * dim || table.cols() != dim {
            return Err(Error::InvalidAlgebra("structure constant table has the wrong shape".into()));
        }
        Ok(LieAlgebra { field: field.clone(), dim, brackets: table })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> u64 {
        self.brackets.get(i * self.dim + j, k)
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &[u64] {
        self.brackets.row(i * self.dim + j)
    }

    pub fn unit(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    pub fn bracket(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let f = &self.field;
        let n = self.dim;
        let mut out = vec![0; n];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 || i == j {
                    continue;
                }
                let c = f.mul(a, b);
                for (o, &s) in out.iter_mut().zip(self.basis_bracket(i, j)) {
                    if s != 0 {
                        *o = f.add(*o, f.mul(c, s));
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad(x)` acting on coordinate columns.
    pub fn ad(&self, x: &[u64]) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(&self.field, n, n);
        for j in 0..n {
            let col = self.bracket(x, &self.unit(j));
            for (k, v) in col.into_iter().enumerate() {
                m.set(k, j, v);
            }
        }
        m
    }

    pub fn ad_basis(&self) -> Vec<Matrix> {
        (0..self.dim).map(|i| self.ad(&self.unit(i))).collect()
    }

    /// Antisymmetry, `[x,x] = 0` and the Jacobi identity on basis triples.
    pub fn verify_lie(&self) -> Vec<Violation> {
        let n = self.dim;
        let f = &self.field;
        let mut out = Vec::new();
        for i in 0..n {
            if self.basis_bracket(i, i).iter().any(|&x| x != 0) {
                out.push(Violation { axiom: "alternating", indices: vec![i] });
            }
            for j in i + 1..n {
                let a = self.basis_bracket(i, j);
                let b = self.basis_bracket(j, i);
                if a.iter().zip(b).any(|(&x, &y)| f.add(x, y) != 0) {
                    out.push(Violation { axiom: "antisymmetry", indices: vec![i, j] });
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ei, ej, ek) = (self.unit(i), self.unit(j), self.unit(k));
                    let t1 = self.bracket(&ei, &self.bracket(&ej, &ek));
                    let t2 = self.bracket(&ej, &self.bracket(&ek, &ei));
                    let t3 = self.bracket(&ek, &self.bracket(&ei, &ej));
                    if (0..n).any(|c| f.add(f.add(t1[c], t2[c]), t3[c]) != 0) {
                        out.push(Violation { axiom: "jacobi", indices: vec![i, j, k] });
                    }
                }
            }
        }
        out
    }

    /// `{z : [z, L] = 0}`.
    pub fn centre(&self) -> Subspace {
        let n = self.dim;
        let ads = self.ad_basis();
        // [e_i, z] = ad(e_i) z
        let refs: Vec<&Matrix> = ads.iter().collect();
        if n == 0 {
            return Subspace::zero(&self.field, 0);
        }
        Matrix::vstack(&self.field, n, &refs).kernel()
    }

    /// Span of `[a, b]` for `a ∈ A`, `b ∈ B`.
    pub fn bracket_space(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vecs = Vec::new();
        for x in a.vectors() {
            for y in b.vectors() {
                vecs.push(self.bracket(&x, &y));
            }
        }
        Subspace::from_vectors(&self.field, self.dim, vecs)
    }

    pub fn full_space(&self) -> Subspace {
        Subspace::full(&self.field, self.dim)
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        self.bracket_space(s, s).is_subspace_of(s)
    }

    pub fn is_ideal(&self, s: &Subspace, within: &Subspace) -> bool {
        self.bracket_space(within, s).is_subspace_of(s)
    }

    /// `S = S^1 ⊇ [S, S^1] ⊇ [S, S^2] ⊇ …` until it stabilizes.
    pub fn lower_central_series(&self, s: &Subspace) -> Vec<Subspace> {
        let mut chain = vec![s.clone()];
        loop {
            let next = self.bracket_space(s, chain.last().unwrap());
            if next == *chain.last().unwrap() {
                return chain;
            }
            chain.push(next);
        }
    }

    /// `S ⊇ [S, S] ⊇ …` until it stabilizes.
    pub fn derived_series(&self, s: &Subspace) -> Vec<Subspace> {
        let mut chain = vec![s.clone()];
        loop {
            let last = chain.last().unwrap();
            let next = self.bracket_space(last, last);
            if next == *last {
                return chain;
            }
            chain.push(next);
        }
    }

    pub fn is_nilpotent(&self, s: &Subspace) -> bool {
        self.lower_central_series(s).last().unwrap().is_zero()
    }

    pub fn is_soluble(&self, s: &Subspace) -> bool {
        self.derived_series(s).last().unwrap().is_zero()
    }

    /// Smallest subspace of `M` containing `S` and stable under `ad(M)`.
    pub fn ideal_closure(&self, s: &Subspace, m: &Subspace) -> Subspace {
        let ops: Vec<Matrix> = m.vectors().iter().map(|x| self.ad(x)).collect();
        spin(&self.field, self.dim, &s.vectors(), &ops)
    }

    /// Descending ideal-closure chain `L_0 = L, L_{i+1} = ideal_closure(S, L_i)`;
    /// `S` is subnormal iff the chain ends at `S`.
    pub fn is_subnormal(&self, s: &Subspace) -> (bool, Vec<Subspace>) {
        let mut chain = vec![self.full_space()];
        for _ in 0..=self.dim {
            let last = chain.last().unwrap();
            if last == s {
                return (true, chain);
            }
            let next = self.ideal_closure(s, last);
            if next == *last {
                return (false, chain);
            }
            chain.push(next);
        }
        let ok = chain.last() == Some(s);
        (ok, chain)
    }

    /// Structure constants of a subalgebra in its echelon basis.
    pub fn induced(&self, s: &Subspace) -> Result<LieAlgebra> {
        let k = s.dim();
        let vecs = s.vectors();
        let mut table = Matrix::zeros(&self.field, k * k, k);
        for i in 0..k {
            for j in 0..k {
                let b = self.bracket(&vecs[i], &vecs[j]);
                let c = s
                    .coordinates(&b)
                    .ok_or_else(|| Error::InvalidAlgebra("subspace is not closed under the bracket".into()))?;
                for (t, x) in c.into_iter().enumerate() {
                    table.set(i * k + j, t, x);
                }
            }
        }
        LieAlgebra::from_table(&self.field, k, table)
    }
}

/// Lie algebra with p-map images of its basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedLieAlgebra {
    alg: LieAlgebra,
    // row i holds e_i^[p]
    pmap: Matrix,
}

impl RestrictedLieAlgebra {
    /// Does not verify the axioms; see [`RestrictedLieAlgebra::verify_pmap`].
    pub fn new(alg: LieAlgebra, pmap: Matrix) -> Result<Self> {
        if pmap.rows() != alg.dim || pmap.cols() != alg.dim {
            return Err(Error::InvalidAlgebra("p-map table has the wrong shape".into()));
        }
        Ok(RestrictedLieAlgebra { alg, pmap })
    }

    /// Constructs and rejects anything failing `verify_lie` or `verify_pmap`.
    pub fn verified(alg: LieAlgebra, pmap: Matrix) -> Result<Self> {
        let l = Self::new(alg, pmap)?;
        let mut v = l.alg.verify_lie();
        v.extend(l.verify_pmap());
        if let Some(first) = v.first() {
            return Err(Error::InvalidAlgebra(format!("{} fails at {:?}", first.axiom, first.indices)));
        }
        Ok(l)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn field(&self) -> &Field {
        &self.alg.field
    }

    pub fn dim(&self) -> usize {
        self.alg.dim
    }

    pub fn pmap_table(&self) -> &Matrix {
        &self.pmap
    }

    pub fn pmap_basis(&self, i: usize) -> &[u64] {
        self.pmap.row(i)
    }

    /// `Σ_i s_i(x, y)` where `i·s_i(x, y)` is the coefficient of `t^{i-1}` in
    /// `ad(tx + y)^{p-1}(x)`.
    pub fn jacobson_sum(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let f = self.field();
        let p = f.characteristic() as usize;
        let n = self.dim();
        let ad_x = self.alg.ad(x);
        let ad_y = self.alg.ad(y);
        let mut coeffs: Vec<Vec<u64>> = vec![x.to_vec()];
        for _ in 0..p - 1 {
            let mut next = vec![vec![0; n]; coeffs.len() + 1];
            for (d, c) in coeffs.iter().enumerate() {
                let ay = ad_y.apply(c);
                let ax = ad_x.apply(c);
                for k in 0..n {
                    next[d][k] = f.add(next[d][k], ay[k]);
                    next[d + 1][k] = f.add(next[d + 1][k], ax[k]);
                }
            }
            coeffs = next;
        }
        let mut out = vec![0; n];
        for i in 1..p {
            let inv_i = f.inv(f.from_int(i as i64)).unwrap();
            for k in 0..n {
                out[k] = f.add(out[k], f.mul(inv_i, coeffs[i - 1][k]));
            }
        }
        out
    }

    /// `x^[p]` from the basis images via p-semilinearity and Jacobson's formula.
    pub fn pmap(&self, x: &[u64]) -> Vec<u64> {
        let f = self.field().clone();
        let p = f.characteristic();
        let n = self.dim();
        let mut acc = vec![0; n];
        let mut acc_p = vec![0; n];
        for (i, &lambda) in x.iter().enumerate() {
            if lambda == 0 {
                continue;
            }
            let mut y = vec![0; n];
            y[i] = lambda;
            let lp = f.pow(lambda, p);
            let y_p: Vec<u64> = self.pmap_basis(i).iter().map(|&v| f.mul(lp, v)).collect();
            let cross = if acc.iter().all(|&a| a == 0) { vec![0; n] } else { self.jacobson_sum(&acc, &y) };
            for k in 0..n {
                acc_p[k] = f.add(f.add(acc_p[k], y_p[k]), cross[k]);
                acc[k] = f.add(acc[k], y[k]);
            }
        }
        acc_p
    }

    /// Checks `ad(x^[p]) = ad(x)^p` on basis vectors, scaled basis vectors and
    /// pairwise sums, the latter two through semilinearity and Jacobson's formula.
    pub fn verify_pmap(&self) -> Vec<Violation> {
        let f = self.field();
        let p = f.characteristic();
        let n = self.dim();
        let mut out = Vec::new();
        let ads = self.alg.ad_basis();
        let check = |x: &[u64], ad_x: &Matrix| self.alg.ad(&self.pmap(x)) == ad_x.pow(p);
        for i in 0..n {
            if self.alg.ad(self.pmap_basis(i)) != ads[i].pow(p) {
                out.push(Violation { axiom: "ad_pmap", indices: vec![i] });
            }
            let lambda = if f.order() > 2 { f.generator().max(2) } else { 1 };
            let mut x = vec![0; n];
            x[i] = lambda;
            if !check(&x, &ads[i].scale(lambda)) {
                out.push(Violation { axiom: "semilinearity", indices: vec![i] });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let mut x = vec![0; n];
                x[i] = 1;
                x[j] = 1;
                if !check(&x, &ads[i].add(&ads[j])) {
                    out.push(Violation { axiom: "jacobson_additivity", indices: vec![i, j] });
                }
            }
        }
        out
    }

    /// Central basis vectors `z` with `z^[p] ≠ 0`, as coordinate vectors.
    pub fn central_pmap_witnesses(&self) -> Vec<Vec<u64>> {
        self.alg
            .centre()
            .vectors()
            .into_iter()
            .filter(|z| self.pmap(z).iter().any(|&c| c != 0))
            .collect()
    }

    pub fn is_centre_killed(&self) -> bool {
        self.central_pmap_witnesses().is_empty()
    }
}

/// A subalgebra of a restricted Lie algebra.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    parent: Arc<RestrictedLieAlgebra>,
    space: Subspace,
}

impl Subalgebra {
    pub fn new(parent: Arc<RestrictedLieAlgebra>, space: Subspace) -> Result<Self> {
        if space.ambient_dim() != parent.dim() {
            return Err(Error::DimensionMismatch("subalgebra lives in a different space".into()));
        }
        if !parent.algebra().is_subalgebra(&space) {
            return Err(Error::InvalidAlgebra("subspace is not closed under the bracket".into()));
        }
        Ok(Subalgebra { parent, space })
    }

    pub fn whole(parent: Arc<RestrictedLieAlgebra>) -> Self {
        let space = parent.algebra().full_space();
        Subalgebra { parent, space }
    }

    pub fn parent(&self) -> &Arc<RestrictedLieAlgebra> {
        &self.parent
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Structure constants in the echelon basis of the subspace.
    pub fn as_lie_algebra(&self) -> LieAlgebra {
        self.parent.algebra().induced(&self.space).expect("closed by construction")
    }

    pub fn is_nilpotent(&self) -> bool {
        self.parent.algebra().is_nilpotent(&self.space)
    }

    pub fn is_subnormal(&self) -> (bool, Vec<Subspace>) {
        self.parent.algebra().is_subnormal(&self.space)
    }

    pub fn is_ideal(&self) -> bool {
        let alg = self.parent.algebra();
        alg.is_ideal(&self.space, &alg.full_space())
    }
}
