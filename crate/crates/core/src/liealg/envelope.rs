use super::{LieAlgebra, RestrictedLieAlgebra};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{BasisCoordinates, EchelonBuilder, Matrix, Subspace};

/// A restricted Lie algebra realized inside `gl_n`, with its basis matrices.
#[derive(Clone, Debug)]
pub struct MatrixLieAlgebra {
    algebra: RestrictedLieAlgebra,
    basis: Vec<Matrix>,
    coords: BasisCoordinates,
    n: usize,
}

impl MatrixLieAlgebra {
    pub fn algebra(&self) -> &RestrictedLieAlgebra {
        &self.algebra
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn matrix_size(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        self.algebra.field()
    }

    /// Coordinates of a matrix in the basis, or `None` outside the span.
    pub fn coordinates(&self, m: &Matrix) -> Option<Vec<u64>> {
        if m.rows() != self.n || m.cols() != self.n {
            return None;
        }
        self.coords.coordinates(m.data())
    }

    pub fn matrix_of(&self, x: &[u64]) -> Matrix {
        let mut out = Matrix::zeros(self.field(), self.n, self.n);
        for (c, b) in x.iter().zip(&self.basis) {
            if *c != 0 {
                out.add_scaled(*c, b);
            }
        }
        out
    }
}

/// Smallest space of matrices containing the generators that is closed under
/// commutators and p-th powers, with the p-map given by matrix p-th powers.
pub fn matrix_p_closure(generators: &[Matrix]) -> Result<MatrixLieAlgebra> {
    let first = generators
        .first()
        .ok_or_else(|| Error::Precondition("matrix_p_closure needs at least one generator".into()))?;
    let field = first.field().clone();
    let n = first.rows();
    if generators.iter().any(|g| g.rows() != n || g.cols() != n || g.field() != &field) {
        return Err(Error::DimensionMismatch("generators must be square matrices of one size over one field".into()));
    }
    let p = field.characteristic();
    let mut builder = EchelonBuilder::new(&field, n * n);
    let mut basis: Vec<Matrix> = Vec::new();
    let push = |m: Matrix, builder: &mut EchelonBuilder, basis: &mut Vec<Matrix>| {
        if let Some(row) = builder.insert(m.data().to_vec()) {
            basis.push(Matrix::new(&field, n, n, row.to_vec()).unwrap());
        }
    };
    for g in generators {
        push(g.clone(), &mut builder, &mut basis);
    }
    let mut done = 0;
    while done < basis.len() {
        let x = basis[done].clone();
        for j in 0..done {
            let c = x.commutator(&basis[j]);
            push(c, &mut builder, &mut basis);
        }
        push(x.pow(p), &mut builder, &mut basis);
        done += 1;
    }
    let dim = basis.len();
    let rows: Vec<Vec<u64>> = basis.iter().map(|b| b.data().to_vec()).collect();
    let coords = BasisCoordinates::new(&field, n * n, &rows)?;
    let locate = |m: &Matrix| {
        coords
            .coordinates(m.data())
            .ok_or_else(|| Error::Internal("closure is not closed".into()))
    };
    let mut table = Matrix::zeros(&field, dim * dim, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let c = locate(&basis[i].commutator(&basis[j]))?;
            for (k, v) in c.into_iter().enumerate() {
                table.set(i * dim + j, k, v);
                table.set(j * dim + i, k, field.neg(v));
            }
        }
    }
    let mut pmap = Matrix::zeros(&field, dim, dim);
    for (i, b) in basis.iter().enumerate() {
        for (k, v) in locate(&b.pow(p))?.into_iter().enumerate() {
            pmap.set(i, k, v);
        }
    }
    let algebra = RestrictedLieAlgebra::new(LieAlgebra::from_table(&field, dim, table)?, pmap)?;
    Ok(MatrixLieAlgebra { algebra, basis, coords, n })
}

/// A p-envelope of an ordinary Lie algebra `S`: `S` sits in it as an ideal.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub closure: MatrixLieAlgebra,
    /// Row `i` holds the coordinates of the image of `e_i`.
    pub embedding: Matrix,
    pub image: Subspace,
}

impl Envelope {
    pub fn algebra(&self) -> &RestrictedLieAlgebra {
        self.closure.algebra()
    }

    pub fn embed(&self, x: &[u64]) -> Vec<u64> {
        self.embedding.transpose().apply(x)
    }
}

/// p-envelope of `s`. Without a representation the adjoint one is used, which
/// is only faithful when the centre of `s` is zero.
pub fn p_envelope(s: &LieAlgebra, faithful: Option<&[Matrix]>) -> Result<Envelope> {
    let field = s.field().clone();
    let dim = s.dim();
    if dim == 0 {
        return Err(Error::Precondition("cannot envelope the zero algebra".into()));
    }
    let reps: Vec<Matrix> = match faithful {
        Some(ms) => {
            if ms.len() != dim {
                return Err(Error::DimensionMismatch("one matrix per basis vector expected".into()));
            }
            ms.to_vec()
        }
        None => {
            if !s.centre().is_zero() {
                return Err(Error::NoFaithfulRepresentation);
            }
            s.ad_basis()
        }
    };
    let n = reps[0].rows();
    if reps.iter().any(|m| m.rows() != n || m.cols() != n || m.field() != &field) {
        return Err(Error::DimensionMismatch("representation matrices disagree in shape".into()));
    }
    let flat: Vec<Vec<u64>> = reps.iter().map(|m| m.data().to_vec()).collect();
    if BasisCoordinates::new(&field, n * n, &flat).is_err() {
        return Err(Error::NoFaithfulRepresentation);
    }
    for i in 0..dim {
        for j in i + 1..dim {
            let mut want = Matrix::zeros(&field, n, n);
            for (k, &c) in s.basis_bracket(i, j).iter().enumerate() {
                if c != 0 {
                    want.add_scaled(c, &reps[k]);
                }
            }
            if reps[i].commutator(&reps[j]) != want {
                return Err(Error::InvalidModule(format!("matrices do not respect [e{i}, e{j}]")));
            }
        }
    }
    let closure = matrix_p_closure(&reps)?;
    let l_dim = closure.algebra().dim();
    let mut embedding = Matrix::zeros(&field, dim, l_dim);
    for (i, m) in reps.iter().enumerate() {
        let c = closure.coordinates(m).ok_or_else(|| Error::Internal("generator left the closure".into()))?;
        for (k, v) in c.into_iter().enumerate() {
            embedding.set(i, k, v);
        }
    }
    let image = Subspace::row_space(&embedding);
    let alg = closure.algebra().algebra();
    let whole = alg.full_space();
    if !alg.is_ideal(&image, &whole) || !alg.bracket_space(&whole, &whole).is_subspace_of(&image) {
        return Err(Error::Internal("enveloped algebra is not an ideal containing [L, L]".into()));
    }
    Ok(Envelope { closure, embedding, image })
}

/// Replaces `x^[p]` by `x^[p] − φ(x)` where `φ` is the p-semilinear map equal to
/// `z ↦ z^[p]` on the echelon basis of the centre and zero on the unit vectors
/// at its non-pivot positions. Central elements then have zero p-th power.
pub fn adjust_pmap_centre_kill(l: &RestrictedLieAlgebra) -> Result<RestrictedLieAlgebra> {
    let f = l.field().clone();
    let z = l.algebra().centre();
    let mut pmap = l.pmap_table().clone();
    for (zi, &pc) in z.vectors().iter().zip(z.pivots()) {
        // e_pc = z_i − (complement part), so φ(e_pc) = z_i^[p]
        for (k, x) in l.pmap(zi).into_iter().enumerate() {
            pmap.set(pc, k, f.sub(pmap.get(pc, k), x));
        }
    }
    let out = RestrictedLieAlgebra::new(l.algebra().clone(), pmap)?;
    if !out.verify_pmap().is_empty() || !out.is_centre_killed() {
        return Err(Error::Internal("centre-kill adjustment produced an invalid p-map".into()));
    }
    Ok(out)
}
