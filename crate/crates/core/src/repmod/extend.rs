use std::sync::Arc;

use super::{LModule, ModuleAlgebra};
use crate::error::{Error, Result};
use crate::gf::same_field;
use crate::liealg::{RestrictedLieAlgebra, Subalgebra};
use crate::linalg::{BasisCoordinates, EchelonBuilder, Matrix};

/// Extends an `S`-module to the restricted algebra `L` generated by the ideal `S`.
///
/// Starting from the echelon basis of `S`, p-th powers and brackets of assigned
/// vectors are reduced against the assigned span; a new residue `c` arising as
/// `t^[p] = s + c` gets `ρ(c) = ρ(t)^p − ρ(s)`, and one from `[t, u] = s + c`
/// gets `ρ(c) = [ρ(t), ρ(u)] − ρ(s)`.
pub fn extend_action_to_penvelope(l: &Arc<RestrictedLieAlgebra>, s: &Subalgebra, m: &LModule) -> Result<LModule> {
    if !(Arc::ptr_eq(s.parent(), l) || **s.parent() == **l) {
        return Err(Error::AlgebraMismatch);
    }
    if m.algebra().dim() != s.dim() || !same_field(m.scalars().source(), l.field()) {
        return Err(Error::AlgebraMismatch);
    }
    if !s.is_ideal() {
        return Err(Error::Precondition("S must be an ideal of L".into()));
    }
    let lf = l.field().clone();
    let n = l.dim();
    let p = lf.characteristic();
    let mut builder = EchelonBuilder::new(&lf, n);
    let mut vecs: Vec<Vec<u64>> = Vec::new();
    let mut reps: Vec<Matrix> = Vec::new();
    for (v, a) in s.space().vectors().into_iter().zip(m.actions()) {
        builder.insert(v.clone());
        vecs.push(v);
        reps.push(a.clone());
    }
    // ρ of an element of the assigned span, given the raw assigned vectors
    let rho_of = |x: &[u64], vecs: &[Vec<u64>], reps: &[Matrix]| -> Result<Matrix> {
        let coords = BasisCoordinates::new(&lf, n, vecs)?
            .coordinates(x)
            .ok_or_else(|| Error::Internal("vector outside the assigned span".into()))?;
        let mut out = Matrix::zeros(m.field(), m.dim(), m.dim());
        for (c, r) in coords.into_iter().zip(reps) {
            if c != 0 {
                out.add_scaled(m.scalars().apply(c), r);
            }
        }
        Ok(out)
    };
    let mut next = 0;
    while next < vecs.len() && vecs.len() < n {
        let t = vecs[next].clone();
        let tp = l.pmap(&t);
        let mut residue = tp.clone();
        builder.reduce(&mut residue);
        if residue.iter().any(|&x| x != 0) {
            let s_part: Vec<u64> = tp.iter().zip(&residue).map(|(&a, &b)| lf.sub(a, b)).collect();
            let rho = reps[next].pow(p).sub(&rho_of(&s_part, &vecs, &reps)?);
            builder.insert(residue.clone());
            vecs.push(residue);
            reps.push(rho);
        }
        for j in 0..vecs.len() {
            let b = l.algebra().bracket(&t, &vecs[j]);
            let mut residue = b.clone();
            builder.reduce(&mut residue);
            if residue.iter().any(|&x| x != 0) {
                let s_part: Vec<u64> = b.iter().zip(&residue).map(|(&a, &c)| lf.sub(a, c)).collect();
                let rho = reps[next].commutator(&reps[j]).sub(&rho_of(&s_part, &vecs, &reps)?);
                builder.insert(residue.clone());
                vecs.push(residue);
                reps.push(rho);
            }
        }
        next += 1;
    }
    if vecs.len() < n {
        return Err(Error::NotGenerated(format!(
            "S generates a restricted subalgebra of dimension {} in L of dimension {n}",
            vecs.len()
        )));
    }
    let action = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            rho_of(&e, &vecs, &reps)
        })
        .collect::<Result<Vec<_>>>()?;
    let out = LModule::over(ModuleAlgebra::Restricted(l.clone()), m.scalars().clone(), action)?;
    if let Some(v) = out.verify_module().first() {
        return Err(Error::InvalidModule(format!("extended action fails the bracket at {:?}", v.indices)));
    }
    Ok(out)
}
