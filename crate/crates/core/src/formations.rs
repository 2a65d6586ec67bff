//! Formations of Lie algebras, central factors and hypercentres of modules.

use crate::error::{Error, Result};
use crate::liealg::{LieAlgebra, Subalgebra};
use crate::linalg::{Matrix, Subspace};
use crate::repmod::LModule;

/// A class of Lie algebras together with its notion of central module factor.
pub trait Formation: Send + Sync {
    fn name(&self) -> &str;

    fn is_member(&self, alg: &LieAlgebra) -> bool;

    /// Whether the irreducible `S`-module `a` is a central factor.
    fn is_central_factor(&self, s: &LieAlgebra, a: &LModule) -> bool;
}

/// Nilpotent Lie algebras; a factor is central when `S` acts on it as zero.
#[derive(Clone, Copy, Debug, Default)]
pub struct Nilpotent;

impl Formation for Nilpotent {
    fn name(&self) -> &str {
        "nilpotent"
    }

    fn is_member(&self, alg: &LieAlgebra) -> bool {
        alg.is_nilpotent(&alg.full_space())
    }

    fn is_central_factor(&self, _s: &LieAlgebra, a: &LModule) -> bool {
        a.actions().iter().all(|m| m.is_zero())
    }
}

pub fn nilpotent_formation() -> Nilpotent {
    Nilpotent
}

/// Looks up a built-in formation.
pub fn formation_by_name(name: &str) -> Result<Box<dyn Formation>> {
    match name {
        "nilpotent" => Ok(Box::new(Nilpotent)),
        other => Err(Error::Parse(format!("unknown formation '{other}'"))),
    }
}

#[derive(Clone, Debug)]
pub struct HypercentralReport {
    /// `0 = U_0 ⊂ U_1 ⊂ …`, ending at the hypercentre.
    pub series: Vec<Subspace>,
    pub hypercentre: Subspace,
    pub is_hypercentral: bool,
    /// An irreducible submodule of `M / hypercentre` that is not central,
    /// given by its preimage in `M`.
    pub obstruction: Option<Subspace>,
    pub obstruction_dim: Option<usize>,
}

/// Matrix sending a vector to its coordinates modulo `u`.
fn quotient_projection(u: &Subspace) -> Matrix {
    let n = u.ambient_dim();
    let comp = u.complement_indices();
    let mut p = Matrix::zeros(u.field(), comp.len(), n);
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = 1;
        for (i, x) in u.quotient_coordinates(&e).into_iter().enumerate() {
            p.set(i, j, x);
        }
    }
    p
}

/// Images of all module maps `t → m`.
fn hom_images(t: &LModule, m: &LModule) -> Subspace {
    let (dt, dm) = (t.dim(), m.dim());
    let f = m.field().clone();
    let it = Matrix::identity(&f, dt);
    let im = Matrix::identity(&f, dm);
    // row-major vec(F) for F: dm × dt with F ρ_t = ρ_m F
    let blocks: Vec<Matrix> = t
        .actions()
        .iter()
        .zip(m.actions())
        .map(|(a, b)| im.kron(&a.transpose()).sub(&b.kron(&it)))
        .collect();
    let homs = if blocks.is_empty() {
        Subspace::full(&f, dm * dt)
    } else {
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Matrix::vstack(&f, dm * dt, &refs).kernel()
    };
    let mut images = Vec::new();
    for h in homs.vectors() {
        let fm = Matrix::new(&f, dm, dt, h).expect("shape");
        for j in 0..dt {
            images.push(fm.column(j));
        }
    }
    Subspace::from_vectors(&f, dm, images)
}

/// Sum of the central irreducible submodules of `q`.
fn central_socle(s: &LieAlgebra, q: &LModule, formation: &dyn Formation, seed: u64) -> Subspace {
    let f = q.field().clone();
    let mut types: Vec<LModule> = Vec::new();
    for factor in q.composition_series(seed).factors {
        if formation.is_central_factor(s, &factor) && !types.iter().any(|t| t.actions() == factor.actions()) {
            types.push(factor);
        }
    }
    let mut acc = Subspace::zero(&f, q.dim());
    for t in &types {
        acc = acc.sum(&hom_images(t, q)).expect("same ambient space");
    }
    acc
}

/// The formation hypercentre of an `S`-module, with its ascending series.
pub fn hypercentre(m: &LModule, formation: &dyn Formation, seed: u64) -> (Subspace, Vec<Subspace>) {
    let f = m.field().clone();
    let d = m.dim();
    let s = m.algebra().lie().clone();
    let mut series = vec![Subspace::zero(&f, d)];
    loop {
        let u = series.last().unwrap().clone();
        if u.is_full() {
            return (u, series);
        }
        let q = m.quotient_by(&u).expect("series members are submodules");
        let soc = central_socle(&s, &q, formation, seed);
        if soc.is_zero() {
            return (u, series);
        }
        series.push(u.lift_quotient_subspace(&soc));
    }
}

/// Nilpotent-formation hypercentre: `U_{i+1} = {v : ρ(s) v ∈ U_i}`.
pub fn hypercentre_nilpotent_fast(m: &LModule) -> (Subspace, Vec<Subspace>) {
    let f = m.field().clone();
    let d = m.dim();
    let mut series = vec![Subspace::zero(&f, d)];
    loop {
        let u = series.last().unwrap().clone();
        if u.is_full() {
            return (u, series);
        }
        let proj = quotient_projection(&u);
        let blocks: Vec<Matrix> = m.actions().iter().map(|a| proj.mul(a)).collect();
        let next = if blocks.is_empty() {
            Subspace::full(&f, d)
        } else {
            let refs: Vec<&Matrix> = blocks.iter().collect();
            Matrix::vstack(&f, d, &refs).kernel()
        };
        if next == u {
            return (u, series);
        }
        series.push(next);
    }
}

/// Decides hypercentrality of an `S`-module.
pub fn is_hypercentral(m: &LModule, formation: &dyn Formation, seed: u64) -> HypercentralReport {
    let (h, series) = hypercentre(m, formation, seed);
    report(m, h, series, seed)
}

/// As [`is_hypercentral`], using the fast path.
pub fn is_hypercentral_nilpotent_fast(m: &LModule, seed: u64) -> HypercentralReport {
    let (h, series) = hypercentre_nilpotent_fast(m);
    report(m, h, series, seed)
}

fn report(m: &LModule, h: Subspace, series: Vec<Subspace>, seed: u64) -> HypercentralReport {
    let full = h.is_full();
    let (obstruction, obstruction_dim) = if full {
        (None, None)
    } else {
        let q = m.quotient_by(&h).expect("hypercentre is a submodule");
        let cs = q.composition_series(seed);
        (Some(h.lift_quotient_subspace(&cs.chain[1])), Some(cs.factors[0].dim()))
    };
    HypercentralReport { series, hypercentre: h, is_hypercentral: full, obstruction, obstruction_dim }
}

/// Restricts an `L`-module to `S` and decides hypercentrality there.
pub fn is_hypercentral_over(s: &Subalgebra, m: &LModule, formation: &dyn Formation, seed: u64) -> Result<HypercentralReport> {
    let r = m.restrict_to_subalgebra(s)?;
    Ok(is_hypercentral(&r, formation, seed))
}
