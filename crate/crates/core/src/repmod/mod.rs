//! Modules over Lie algebras as families of action matrices.

mod extend;
mod meataxe;

pub use extend::extend_action_to_penvelope;
pub use meataxe::{CompositionSeries, Irreducibility, DEFAULT_WORD_LENGTH};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{same_field, Embedding, Field};
use crate::liealg::{LieAlgebra, RestrictedLieAlgebra, Subalgebra, Violation};
use crate::linalg::{quotient_action, restrict_action, spin, Matrix, Subspace};

/// Default refusal threshold for constructed module dimensions.
pub const DEFAULT_MAX_MODULE_DIM: usize = 4096;

/// The algebra a module is defined over.
#[derive(Clone, Debug)]
pub enum ModuleAlgebra {
    Restricted(Arc<RestrictedLieAlgebra>),
    Plain(Arc<LieAlgebra>),
}

impl ModuleAlgebra {
    pub fn lie(&self) -> &LieAlgebra {
        match self {
            ModuleAlgebra::Restricted(l) => l.algebra(),
            ModuleAlgebra::Plain(l) => l,
        }
    }

    pub fn restricted(&self) -> Option<&Arc<RestrictedLieAlgebra>> {
        match self {
            ModuleAlgebra::Restricted(l) => Some(l),
            ModuleAlgebra::Plain(_) => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.lie().dim()
    }

    pub fn field(&self) -> &Field {
        self.lie().field()
    }

    pub fn same_as(&self, other: &ModuleAlgebra) -> bool {
        match (self, other) {
            (ModuleAlgebra::Restricted(a), ModuleAlgebra::Restricted(b)) => Arc::ptr_eq(a, b) || a == b,
            (ModuleAlgebra::Plain(a), ModuleAlgebra::Plain(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl From<Arc<RestrictedLieAlgebra>> for ModuleAlgebra {
    fn from(l: Arc<RestrictedLieAlgebra>) -> Self {
        ModuleAlgebra::Restricted(l)
    }
}

impl From<Arc<LieAlgebra>> for ModuleAlgebra {
    fn from(l: Arc<LieAlgebra>) -> Self {
        ModuleAlgebra::Plain(l)
    }
}

/// A module: one matrix `ρ(e_i)` per basis vector of the algebra, acting on
/// column vectors. The matrices may live over an extension of the algebra's
/// field, reached through `scalars`.
#[derive(Clone, Debug)]
pub struct LModule {
    algebra: ModuleAlgebra,
    scalars: Embedding,
    action: Vec<Matrix>,
    dim: usize,
}

fn check_cap(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        return Err(Error::DimensionCap { requested: dim, cap });
    }
    Ok(())
}

impl LModule {
    /// Checks shapes only; see [`LModule::verify_module`].
    pub fn new(algebra: impl Into<ModuleAlgebra>, action: Vec<Matrix>) -> Result<Self> {
        let algebra = algebra.into();
        let scalars = Embedding::identity(algebra.field());
        Self::over(algebra, scalars, action)
    }

    /// A module whose matrices live in `scalars.target()`.
    pub fn over(algebra: impl Into<ModuleAlgebra>, scalars: Embedding, action: Vec<Matrix>) -> Result<Self> {
        let algebra = algebra.into();
        if !same_field(scalars.source(), algebra.field()) {
            return Err(Error::FieldMismatch);
        }
        if action.len() != algebra.dim() {
            return Err(Error::InvalidModule(format!(
                "{} action matrices for an algebra of dimension {}",
                action.len(),
                algebra.dim()
            )));
        }
        let dim = match action.first() {
            Some(m) => m.rows(),
            None => return Err(Error::InvalidModule("the zero algebra has no action matrices to infer a dimension from".into())),
        };
        for m in &action {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::InvalidModule("action matrices must be square of one size".into()));
            }
            if !same_field(m.field(), scalars.target()) {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(LModule { algebra, scalars, action, dim })
    }

    /// Rejects modules failing [`LModule::verify_module`].
    pub fn verified(algebra: impl Into<ModuleAlgebra>, action: Vec<Matrix>) -> Result<Self> {
        let m = Self::new(algebra, action)?;
        if let Some(v) = m.verify_module().first() {
            return Err(Error::InvalidModule(format!("bracket not respected at {:?}", v.indices)));
        }
        Ok(m)
    }

    pub fn trivial(algebra: impl Into<ModuleAlgebra>, dim: usize) -> Self {
        let algebra = algebra.into();
        let f = algebra.field().clone();
        let action = vec![Matrix::zeros(&f, dim, dim); algebra.dim()];
        LModule { scalars: Embedding::identity(&f), algebra, action, dim }
    }

    /// The adjoint module of a restricted algebra.
    pub fn adjoint(l: &Arc<RestrictedLieAlgebra>) -> Self {
        let f = l.field().clone();
        let action = l.algebra().ad_basis();
        LModule { algebra: ModuleAlgebra::Restricted(l.clone()), scalars: Embedding::identity(&f), action, dim: l.dim() }
    }

    pub fn algebra(&self) -> &ModuleAlgebra {
        &self.algebra
    }

    pub fn restricted_algebra(&self) -> Option<&Arc<RestrictedLieAlgebra>> {
        self.algebra.restricted()
    }

    /// Embedding of the algebra's field into the field of the matrices.
    pub fn scalars(&self) -> &Embedding {
        &self.scalars
    }

    pub fn field(&self) -> &Field {
        self.scalars.target()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    /// Algebra coordinates mapped into the module field.
    pub fn lift_coords(&self, x: &[u64]) -> Vec<u64> {
        x.iter().map(|&a| self.scalars.apply(a)).collect()
    }

    /// `ρ(x)` for `x` given in coordinates over the module field.
    pub fn act(&self, x: &[u64]) -> Matrix {
        let mut out = Matrix::zeros(self.field(), self.dim, self.dim);
        for (&c, m) in x.iter().zip(&self.action) {
            if c != 0 {
                out.add_scaled(c, m);
            }
        }
        out
    }

    fn same_algebra(&self, other: &LModule) -> Result<()> {
        if !self.algebra.same_as(&other.algebra) || self.scalars != other.scalars {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    /// Pairs `(i, j)` with `ρ([e_i, e_j]) ≠ [ρ(e_i), ρ(e_j)]`.
    pub fn verify_module(&self) -> Vec<Violation> {
        let alg = self.algebra.lie();
        let n = alg.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let want = self.act(&self.lift_coords(alg.basis_bracket(i, j)));
                if self.action[i].commutator(&self.action[j]) != want {
                    out.push(Violation { axiom: "bracket", indices: vec![i, j] });
                }
            }
        }
        out
    }

    /// `ρ(e_i)^p − ρ(e_i^[p])`.
    pub fn semilinear_defect(&self, i: usize) -> Result<Matrix> {
        let l = self.algebra.restricted().ok_or(Error::NotRestricted)?;
        let p = self.field().characteristic();
        let image = self.act(&self.lift_coords(l.pmap_basis(i)));
        Ok(self.action[i].pow(p).sub(&image))
    }

    /// `ρ(x)^p − ρ(x^[p])` for `x` in algebra coordinates.
    pub fn semilinear_defect_at(&self, x: &[u64]) -> Result<Matrix> {
        let l = self.algebra.restricted().ok_or(Error::NotRestricted)?;
        let p = self.field().characteristic();
        let rx = self.act(&self.lift_coords(x));
        Ok(rx.pow(p).sub(&self.act(&self.lift_coords(&l.pmap(x)))))
    }

    /// Whether `ρ(e_i)^p = ρ(e_i^[p])` for every basis vector.
    pub fn is_restricted_module(&self) -> bool {
        match self.algebra.restricted() {
            Some(_) => (0..self.action.len()).all(|i| self.semilinear_defect(i).map(|d| d.is_zero()).unwrap_or(false)),
            None => false,
        }
    }

    pub fn direct_sum(&self, other: &LModule) -> Result<LModule> {
        self.direct_sum_capped(other, DEFAULT_MAX_MODULE_DIM)
    }

    pub fn direct_sum_capped(&self, other: &LModule, cap: usize) -> Result<LModule> {
        self.same_algebra(other)?;
        let (a, b) = (self.dim, other.dim);
        check_cap(a + b, cap)?;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(x, y)| {
                Matrix::from_fn(self.field(), a + b, a + b, |i, j| match (i < a, j < a) {
                    (true, true) => x.get(i, j),
                    (false, false) => y.get(i - a, j - a),
                    _ => 0,
                })
            })
            .collect();
        Ok(LModule { algebra: self.algebra.clone(), scalars: self.scalars.clone(), action, dim: a + b })
    }

    /// `x·(a ⊗ b) = x·a ⊗ b + a ⊗ x·b`, with basis index `i * dim(other) + j`.
    pub fn tensor(&self, other: &LModule) -> Result<LModule> {
        self.tensor_capped(other, DEFAULT_MAX_MODULE_DIM)
    }

    pub fn tensor_capped(&self, other: &LModule, cap: usize) -> Result<LModule> {
        self.same_algebra(other)?;
        let d = self.dim * other.dim;
        check_cap(d, cap)?;
        let f = self.field();
        let ia = Matrix::identity(f, self.dim);
        let ib = Matrix::identity(f, other.dim);
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(x, y)| x.kron(&ib).add(&ia.kron(y)))
            .collect();
        Ok(LModule { algebra: self.algebra.clone(), scalars: self.scalars.clone(), action, dim: d })
    }

    /// Action `−ρ(x)^T`.
    pub fn dual(&self) -> LModule {
        let action = self.action.iter().map(|m| m.transpose().neg()).collect();
        LModule { algebra: self.algebra.clone(), scalars: self.scalars.clone(), action, dim: self.dim }
    }

    /// `Hom(self, other)` with `(x·f) = ρ_other(x) f − f ρ_self(x)`. A map `f`
    /// is stored row-major: entry `(b, a)` sits at index `b * dim(self) + a`.
    pub fn hom_module(&self, other: &LModule) -> Result<LModule> {
        self.hom_module_capped(other, DEFAULT_MAX_MODULE_DIM)
    }

    pub fn hom_module_capped(&self, other: &LModule, cap: usize) -> Result<LModule> {
        self.same_algebra(other)?;
        let d = self.dim * other.dim;
        check_cap(d, cap)?;
        let f = self.field();
        let ia = Matrix::identity(f, self.dim);
        let ib = Matrix::identity(f, other.dim);
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(x, y)| y.kron(&ia).sub(&ib.kron(&x.transpose())))
            .collect();
        Ok(LModule { algebra: self.algebra.clone(), scalars: self.scalars.clone(), action, dim: d })
    }

    /// Reshapes a vector of `Hom(self, other)` into a `dim(other) × dim(self)` matrix.
    pub fn hom_vector_to_matrix(&self, other: &LModule, v: &[u64]) -> Matrix {
        Matrix::new(self.field(), other.dim, self.dim, v.to_vec()).expect("hom vector has the right length")
    }

    /// Submodule generated by `generators`.
    pub fn submodule(&self, generators: &[Vec<u64>]) -> Subspace {
        spin(self.field(), self.dim, generators, &self.action)
    }

    pub fn is_submodule(&self, u: &Subspace) -> bool {
        u.ambient_dim() == self.dim && self.action.iter().all(|m| u.is_invariant(m))
    }

    /// `upper / lower` in the complement coordinates of `lower` inside the
    /// echelon coordinates of `upper`.
    pub fn sub_quotient(&self, lower: &Subspace, upper: &Subspace) -> Result<LModule> {
        if !lower.is_subspace_of(upper) {
            return Err(Error::NotInvariant("lower space is not contained in the upper one".into()));
        }
        let rel = upper.relative(lower).expect("contained");
        let mut action = Vec::with_capacity(self.action.len());
        for m in &self.action {
            let r = restrict_action(m, upper)?;
            action.push(quotient_action(&r, &rel)?);
        }
        let dim = upper.dim() - lower.dim();
        Ok(LModule { algebra: self.algebra.clone(), scalars: self.scalars.clone(), action, dim })
    }

    pub fn restrict_to(&self, u: &Subspace) -> Result<LModule> {
        self.sub_quotient(&Subspace::zero(self.field(), self.dim), u)
    }

    pub fn quotient_by(&self, u: &Subspace) -> Result<LModule> {
        self.sub_quotient(u, &Subspace::full(self.field(), self.dim))
    }

    /// Same matrices with entries pushed through `e`.
    pub fn extend_scalars(&self, e: &Embedding) -> Result<LModule> {
        if !same_field(e.source(), self.field()) {
            return Err(Error::FieldMismatch);
        }
        let target = e.target().clone();
        let action = self.action.iter().map(|m| m.map_into(&target, |a| e.apply(a))).collect();
        let scalars = self.scalars.compose(e)?;
        Ok(LModule { algebra: self.algebra.clone(), scalars, action, dim: self.dim })
    }

    /// The module over the structure constants of `s` in its echelon basis.
    pub fn restrict_to_subalgebra(&self, s: &Subalgebra) -> Result<LModule> {
        match &self.algebra {
            ModuleAlgebra::Restricted(l) if Arc::ptr_eq(l, s.parent()) || **l == **s.parent() => {}
            _ => return Err(Error::AlgebraMismatch),
        }
        if s.dim() == 0 {
            return Err(Error::Precondition("cannot restrict to the zero subalgebra".into()));
        }
        let action = s.space().vectors().iter().map(|v| self.act(&self.lift_coords(v))).collect();
        let algebra = ModuleAlgebra::Plain(Arc::new(s.as_lie_algebra()));
        Ok(LModule { algebra, scalars: self.scalars.clone(), action, dim: self.dim })
    }

    /// Conjugates every action matrix by `g`: `g ρ(x) g^{-1}`.
    pub fn conjugate(&self, g: &Matrix) -> Result<LModule> {
        let inv = g.inverse().ok_or_else(|| Error::Precondition("conjugating matrix is singular".into()))?;
        let action = self.action.iter().map(|m| g.mul(m).mul(&inv)).collect();
        Ok(LModule { algebra: self.algebra.clone(), scalars: self.scalars.clone(), action, dim: self.dim })
    }

    /// Same matrices attached to a different but equal-dimensional algebra.
    pub fn with_algebra(&self, algebra: impl Into<ModuleAlgebra>) -> Result<LModule> {
        let algebra = algebra.into();
        if algebra.dim() != self.algebra.dim() || !same_field(algebra.field(), self.algebra.field()) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(LModule { algebra, scalars: self.scalars.clone(), action: self.action.clone(), dim: self.dim })
    }
}

/// A linear map between modules, `d_target × d_source`.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: LModule,
    pub target: LModule,
    pub matrix: Matrix,
}

impl ModuleMap {
    /// Fails unless `matrix` intertwines the two actions.
    pub fn new(source: LModule, target: LModule, matrix: Matrix) -> Result<Self> {
        source.same_algebra(&target)?;
        if matrix.rows() != target.dim || matrix.cols() != source.dim {
            return Err(Error::DimensionMismatch("module map has the wrong shape".into()));
        }
        let map = ModuleMap { source, target, matrix };
        if let Some(i) = map.failing_generator() {
            return Err(Error::InvalidModule(format!("map does not commute with generator {i}")));
        }
        Ok(map)
    }

    fn failing_generator(&self) -> Option<usize> {
        (0..self.source.action.len())
            .find(|&i| self.matrix.mul(&self.source.action[i]) != self.target.action[i].mul(&self.matrix))
    }

    pub fn image(&self) -> Subspace {
        Subspace::row_space(&self.matrix.transpose())
    }

    pub fn kernel(&self) -> Subspace {
        self.matrix.kernel()
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.target.dim
    }
}

/// The canonical isomorphism `dual(a) ⊗ b → Hom(a, b)`, `α ⊗ w ↦ (v ↦ α(v) w)`.
pub fn dual_tensor_to_hom(a: &LModule, b: &LModule) -> Result<ModuleMap> {
    let source = a.dual().tensor(b)?;
    let target = a.hom_module(b)?;
    let (da, db) = (a.dim, b.dim);
    let mut perm = Matrix::zeros(a.field(), da * db, da * db);
    for i in 0..da {
        for j in 0..db {
            perm.set(j * da + i, i * db + j, 1);
        }
    }
    ModuleMap::new(source, target, perm)
}
