//! JSON records for fields, algebras, modules, instances and clusters.
//!
//! Field elements are coefficient lists, little-endian in the generator of
//! the field. On input a bare integer is accepted for prime-field elements.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::charcluster::{Character, CharacterCluster};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldCtx};
use crate::liealg::{LieAlgebra, RestrictedLieAlgebra};
use crate::linalg::{Matrix, Subspace};
use crate::repmod::LModule;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub p: u64,
    #[serde(default = "one")]
    pub m: usize,
    /// Monic modulus, constant term first; omitted for prime fields.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modulus: Vec<u64>,
}

fn one() -> usize {
    1
}

impl FieldRecord {
    pub fn from_field(f: &Field) -> Self {
        let modulus = if f.is_prime_field() { Vec::new() } else { f.modulus().to_vec() };
        FieldRecord { p: f.characteristic(), m: f.degree(), modulus }
    }

    pub fn to_field(&self) -> Result<Field> {
        if self.modulus.is_empty() {
            return FieldCtx::canonical(self.p, self.m);
        }
        let f = FieldCtx::new(self.p, self.modulus.clone())?;
        if f.degree() != self.m {
            return Err(Error::Parse(format!("modulus has degree {} but m = {}", f.degree(), self.m)));
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRecord {
    Int(i64),
    Coeffs(Vec<u64>),
}

impl ElemRecord {
    /// Bare integers over prime fields, coefficient lists otherwise.
    pub fn from_elem(f: &Field, a: u64) -> Self {
        if f.is_prime_field() {
            ElemRecord::Int(a as i64)
        } else {
            ElemRecord::Coeffs(f.decode(a))
        }
    }

    pub fn to_elem(&self, f: &Field) -> Result<u64> {
        match self {
            ElemRecord::Int(n) => Ok(f.from_int(*n)),
            ElemRecord::Coeffs(c) => f.encode(c),
        }
    }
}

pub fn vector_record(f: &Field, v: &[u64]) -> Vec<ElemRecord> {
    v.iter().map(|&a| ElemRecord::from_elem(f, a)).collect()
}

pub fn parse_vector(f: &Field, v: &[ElemRecord], len: usize) -> Result<Vec<u64>> {
    if v.len() != len {
        return Err(Error::Parse(format!("expected a vector of length {len}, got {}", v.len())));
    }
    v.iter().map(|e| e.to_elem(f)).collect()
}

pub type MatrixRecord = Vec<Vec<ElemRecord>>;

pub fn matrix_record(m: &Matrix) -> MatrixRecord {
    (0..m.rows()).map(|i| vector_record(m.field(), m.row(i))).collect()
}

pub fn parse_matrix(f: &Field, rows: &MatrixRecord, n: usize) -> Result<Matrix> {
    if rows.len() != n {
        return Err(Error::Parse(format!("expected {n} rows, got {}", rows.len())));
    }
    let data: Vec<Vec<u64>> = rows.iter().map(|r| parse_vector(f, r, n)).collect::<Result<_>>()?;
    Ok(Matrix::from_rows(f, n, &data))
}

pub fn subspace_record(s: &Subspace) -> Vec<Vec<ElemRecord>> {
    s.vectors().iter().map(|v| vector_record(s.field(), v)).collect()
}

pub fn parse_subspace(f: &Field, rows: &[Vec<ElemRecord>], n: usize) -> Result<Subspace> {
    let vecs = rows.iter().map(|r| parse_vector(f, r, n)).collect::<Result<Vec<_>>>()?;
    Ok(Subspace::from_vectors(f, n, vecs))
}

/// `[e_i, e_j]` has coefficient `value` at `e_k`; only `i < j` is listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConstant(pub usize, pub usize, pub usize, pub ElemRecord);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraRecord {
    pub field: FieldRecord,
    pub dim: usize,
    #[serde(default)]
    pub structure_constants: Vec<StructureConstant>,
    /// `e_i^[p]` as coordinate vectors; all zero when omitted.
    #[serde(default)]
    pub pmap_images: Vec<Vec<ElemRecord>>,
}

impl AlgebraRecord {
    pub fn from_algebra(l: &RestrictedLieAlgebra) -> Self {
        let f = l.field();
        let alg = l.algebra();
        let n = alg.dim();
        let mut sc = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for (k, &c) in alg.basis_bracket(i, j).iter().enumerate() {
                    if c != 0 {
                        sc.push(StructureConstant(i, j, k, ElemRecord::from_elem(f, c)));
                    }
                }
            }
        }
        let pmap_images = (0..n).map(|i| vector_record(f, l.pmap_basis(i))).collect();
        AlgebraRecord { field: FieldRecord::from_field(f), dim: n, structure_constants: sc, pmap_images }
    }

    pub fn to_lie(&self) -> Result<LieAlgebra> {
        let f = self.field.to_field()?;
        let n = self.dim;
        let mut brackets: Vec<(usize, usize, Vec<u64>)> = Vec::new();
        for StructureConstant(i, j, k, v) in &self.structure_constants {
            if *i >= n || *j >= n || *k >= n || i >= j {
                return Err(Error::Parse(format!("structure constant ({i}, {j}, {k}) must have i < j < dim")));
            }
            let c = v.to_elem(&f)?;
            match brackets.iter_mut().find(|(a, b, _)| a == i && b == j) {
                Some((_, _, vec)) => vec[*k] = f.add(vec[*k], c),
                None => {
                    let mut vec = vec![0; n];
                    vec[*k] = c;
                    brackets.push((*i, *j, vec));
                }
            }
        }
        LieAlgebra::from_brackets(&f, n, &brackets)
    }

    /// Parses without checking the axioms.
    pub fn to_algebra_unchecked(&self) -> Result<RestrictedLieAlgebra> {
        let alg = self.to_lie()?;
        let f = alg.field().clone();
        let n = self.dim;
        let pmap = if self.pmap_images.is_empty() {
            Matrix::zeros(&f, n, n)
        } else {
            if self.pmap_images.len() != n {
                return Err(Error::Parse(format!("expected {n} p-map images")));
            }
            let rows = self.pmap_images.iter().map(|r| parse_vector(&f, r, n)).collect::<Result<Vec<_>>>()?;
            Matrix::from_rows(&f, n, &rows)
        };
        RestrictedLieAlgebra::new(alg, pmap)
    }

    /// Parses and rejects anything failing the Lie or p-map axioms.
    pub fn to_algebra(&self) -> Result<RestrictedLieAlgebra> {
        let l = self.to_algebra_unchecked()?;
        RestrictedLieAlgebra::verified(l.algebra().clone(), l.pmap_table().clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRecord {
    pub dim: usize,
    /// `ρ(e_i)` for each basis vector of the algebra.
    pub action: Vec<MatrixRecord>,
}

impl ModuleRecord {
    pub fn from_module(m: &LModule) -> Self {
        ModuleRecord { dim: m.dim(), action: m.actions().iter().map(matrix_record).collect() }
    }

    pub fn to_module(&self, l: &Arc<RestrictedLieAlgebra>) -> Result<LModule> {
        let f = l.field();
        if self.action.len() != l.dim() {
            return Err(Error::Parse(format!("expected {} action matrices, got {}", l.dim(), self.action.len())));
        }
        let action = self.action.iter().map(|m| parse_matrix(f, m, self.dim)).collect::<Result<Vec<_>>>()?;
        LModule::verified(l.clone(), action)
    }
}

/// An algebra together with one module over it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraModuleRecord {
    pub algebra: AlgebraRecord,
    pub module: ModuleRecord,
    /// Optional subalgebra as row vectors.
    #[serde(default)]
    pub subalgebra: Option<Vec<Vec<ElemRecord>>>,
    #[serde(default)]
    pub formation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub algebra: AlgebraRecord,
    pub subalgebra: Vec<Vec<ElemRecord>>,
    pub v: ModuleRecord,
    pub w: ModuleRecord,
    #[serde(default = "nilpotent_name")]
    pub formation: String,
    #[serde(default)]
    pub seed: u64,
}

fn nilpotent_name() -> String {
    "nilpotent".to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterRecord {
    pub field: FieldRecord,
    pub values: Vec<ElemRecord>,
}

impl CharacterRecord {
    pub fn from_character(c: &Character) -> Self {
        let f = c.field();
        CharacterRecord { field: FieldRecord::from_field(f), values: vector_record(f, c.values()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterRecord {
    /// The splitting field the characters live in.
    pub field: FieldRecord,
    /// Each character as its values on the algebra basis.
    pub characters: Vec<Vec<ElemRecord>>,
}

impl ClusterRecord {
    pub fn from_cluster(c: &CharacterCluster) -> Self {
        let f = c.field();
        ClusterRecord {
            field: FieldRecord::from_field(f),
            characters: c.values().iter().map(|v| vector_record(f, v)).collect(),
        }
    }
}
