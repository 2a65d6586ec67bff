//! Characters of absolutely irreducible modules and character clusters.
//!
//! A character is stored as its values on the basis of the acting algebra, in
//! a finite extension of the algebra's field reached through `scalars`.

use crate::error::{Error, Result};
use crate::gf::{common_extension, extend_field, Embedding, Field, DEFAULT_MAX_EXTENSION_DEGREE};
use crate::linalg::Matrix;
use crate::repmod::LModule;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    scalars: Embedding,
    values: Vec<u64>,
}

impl Character {
    pub fn new(scalars: Embedding, values: Vec<u64>) -> Self {
        Character { scalars, values }
    }

    pub fn zero(scalars: Embedding, n: usize) -> Self {
        Character { scalars, values: vec![0; n] }
    }

    pub fn field(&self) -> &Field {
        self.scalars.target()
    }

    pub fn scalars(&self) -> &Embedding {
        &self.scalars
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Value at `x`, given in coordinates over the algebra's field.
    pub fn eval(&self, x: &[u64]) -> u64 {
        let f = self.field();
        x.iter()
            .zip(&self.values)
            .fold(0, |acc, (&a, &c)| f.add(acc, f.mul(self.scalars.apply(a), c)))
    }

    pub fn add(&self, other: &Character) -> Result<Character> {
        if self.scalars != other.scalars {
            return Err(Error::FieldMismatch);
        }
        let f = self.field();
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Character { scalars: self.scalars.clone(), values })
    }

    pub fn scale(&self, k: u64) -> Character {
        let f = self.field();
        let c = f.from_int((k % f.characteristic()) as i64);
        let values = self.values.iter().map(|&a| f.mul(c, a)).collect();
        Character { scalars: self.scalars.clone(), values }
    }

    /// Pushes the values along `e`, which must start at this character's field.
    pub fn embed(&self, e: &Embedding) -> Result<Character> {
        let scalars = self.scalars.compose(e)?;
        Ok(Character { scalars, values: self.values.iter().map(|&a| e.apply(a)).collect() })
    }
}

/// A finite set of characters sharing one field, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterCluster {
    scalars: Embedding,
    values: Vec<Vec<u64>>,
    /// Dimensions of the absolutely irreducible factors the cluster was read from.
    pub factor_dims: Vec<usize>,
}

impl CharacterCluster {
    pub fn from_characters(scalars: Embedding, chars: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let mut values: Vec<Vec<u64>> = chars.into_iter().collect();
        values.sort();
        values.dedup();
        CharacterCluster { scalars, values, factor_dims: Vec::new() }
    }

    pub fn field(&self) -> &Field {
        self.scalars.target()
    }

    pub fn scalars(&self) -> &Embedding {
        &self.scalars
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Vec<u64>] {
        &self.values
    }

    pub fn characters(&self) -> Vec<Character> {
        self.values.iter().map(|v| Character::new(self.scalars.clone(), v.clone())).collect()
    }

    pub fn contains_zero(&self) -> bool {
        self.values.iter().any(|v| v.iter().all(|&x| x == 0))
    }

    pub fn is_zero_cluster(&self) -> bool {
        self.values.len() == 1 && self.contains_zero()
    }

    pub fn contains(&self, c: &Character) -> Result<bool> {
        let single = CharacterCluster::from_characters(c.scalars.clone(), [c.values.clone()]);
        cluster_subset(&single, self, DEFAULT_MAX_EXTENSION_DEGREE)
    }

    pub fn embed(&self, e: &Embedding) -> Result<CharacterCluster> {
        let scalars = self.scalars.compose(e)?;
        let values = self.values.iter().map(|v| v.iter().map(|&a| e.apply(a)).collect());
        let mut out = CharacterCluster::from_characters(scalars, values);
        out.factor_dims = self.factor_dims.clone();
        Ok(out)
    }
}

/// `ρ(e_i)^p − ρ(e_i^[p])`.
pub fn semilinear_defect(m: &LModule, i: usize) -> Result<Matrix> {
    m.semilinear_defect(i)
}

/// The character of an absolutely irreducible module: `c_i` is the p-th root
/// of the scalar by which `ρ(e_i)^p − ρ(e_i^[p])` acts.
pub fn character_of(m: &LModule) -> Result<Character> {
    if m.dim() == 0 {
        return Err(Error::Precondition("the zero module has no character".into()));
    }
    if m.endomorphism_algebra_dim() != 1 {
        return Err(Error::Precondition("module is not absolutely irreducible".into()));
    }
    character_of_unchecked(m)
}

fn character_of_unchecked(m: &LModule) -> Result<Character> {
    let f = m.field();
    let mut values = Vec::with_capacity(m.actions().len());
    for i in 0..m.actions().len() {
        let sigma = m.semilinear_defect(i)?.scalar_value().ok_or(Error::NonScalarDefect(i))?;
        values.push(f.pth_root(sigma));
    }
    Ok(Character::new(m.scalars().clone(), values))
}

fn lcm(a: usize, b: usize) -> usize {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// Characters of the composition factors of `m` after extending scalars far
/// enough that every factor is absolutely irreducible.
pub fn cluster(m: &LModule, seed: u64) -> Result<CharacterCluster> {
    cluster_capped(m, seed, DEFAULT_MAX_EXTENSION_DEGREE)
}

pub fn cluster_capped(m: &LModule, seed: u64, cap: usize) -> Result<CharacterCluster> {
    if m.dim() == 0 {
        return Err(Error::Precondition("the zero module has an empty cluster".into()));
    }
    m.restricted_algebra().ok_or(Error::NotRestricted)?;
    let mut pending = m.composition_series(seed).factors;
    // characters found so far, each with the round it was found in
    let mut found: Vec<(usize, Character, usize)> = Vec::new();
    let mut exts: Vec<Embedding> = Vec::new();
    let mut field = m.field().clone();
    loop {
        let mut k = 1;
        let mut split = Vec::new();
        for factor in pending {
            let e = factor.endomorphism_algebra_dim();
            if e == 1 {
                found.push((exts.len(), character_of_unchecked(&factor)?, factor.dim()));
            } else {
                k = lcm(k, e);
                split.push(factor);
            }
        }
        if split.is_empty() {
            break;
        }
        let (bigger, ext) = extend_field(&field, k, cap)?;
        pending = Vec::new();
        for factor in split {
            pending.extend(factor.extend_scalars(&ext)?.composition_series(seed).factors);
        }
        field = bigger;
        exts.push(ext);
    }
    let mut values = Vec::with_capacity(found.len());
    let mut dims = Vec::with_capacity(found.len());
    let mut scalars = None;
    for (round, c, dim) in found {
        let mut c = c;
        for e in &exts[round..] {
            c = c.embed(e)?;
        }
        scalars.get_or_insert_with(|| c.scalars.clone());
        values.push(c.values);
        dims.push(dim);
    }
    let mut out = CharacterCluster::from_characters(scalars.expect("nonzero module has factors"), values);
    dims.sort_unstable();
    out.factor_dims = dims;
    Ok(out)
}

/// All `Σ a_j c_j` with `a_j ∈ F_p`.
pub fn fp_span(c: &CharacterCluster) -> CharacterCluster {
    let f = c.field().clone();
    let p = f.characteristic();
    let n = c.values.first().map_or(0, |v| v.len());
    let mut set = vec![vec![0u64; n]];
    for v in &c.values {
        let mut next = Vec::with_capacity(set.len() * p as usize);
        for s in &set {
            let mut acc = s.clone();
            for _ in 0..p {
                next.push(acc.clone());
                acc = acc.iter().zip(v).map(|(&a, &b)| f.add(a, b)).collect();
            }
        }
        next.sort();
        next.dedup();
        set = next;
    }
    CharacterCluster::from_characters(c.scalars.clone(), set)
}

/// Brings two clusters into a common field, agreeing on the algebra's field.
pub fn common_field(a: &CharacterCluster, b: &CharacterCluster, cap: usize) -> Result<(CharacterCluster, CharacterCluster)> {
    if a.scalars == b.scalars {
        return Ok((a.clone(), b.clone()));
    }
    let (_, ea, eb) = common_extension(&a.scalars, &b.scalars, cap)?;
    Ok((a.embed(&ea)?, b.embed(&eb)?))
}

/// `a ⊆ b` after embedding both into a common field.
pub fn cluster_subset(a: &CharacterCluster, b: &CharacterCluster, cap: usize) -> Result<bool> {
    let (a, b) = common_field(a, b, cap)?;
    Ok(a.values.iter().all(|v| b.values.binary_search(v).is_ok()))
}

pub fn cluster_eq(a: &CharacterCluster, b: &CharacterCluster, cap: usize) -> Result<bool> {
    let (a, b) = common_field(a, b, cap)?;
    Ok(a.values == b.values)
}

/// Elements of `a` missing from `b`, expressed in their common field.
pub fn cluster_difference(a: &CharacterCluster, b: &CharacterCluster, cap: usize) -> Result<Vec<Character>> {
    let (a, b) = common_field(a, b, cap)?;
    Ok(a.characters().into_iter().filter(|c| b.values.binary_search(&c.values).is_err()).collect())
}

/// All sums `c_1 + … + c_r` with `c_i ∈ c`.
pub fn r_fold_sums(c: &CharacterCluster, r: usize) -> CharacterCluster {
    let f = c.field().clone();
    let n = c.values.first().map_or(0, |v| v.len());
    let mut set = vec![vec![0u64; n]];
    for _ in 0..r {
        let mut next = Vec::new();
        for s in &set {
            for v in &c.values {
                next.push(s.iter().zip(v).map(|(&a, &b)| f.add(a, b)).collect::<Vec<u64>>());
            }
        }
        next.sort();
        next.dedup();
        set = next;
    }
    CharacterCluster::from_characters(c.scalars.clone(), set)
}

#[derive(Clone, Debug)]
pub struct TensorPowerLawReport {
    pub r: usize,
    pub power_cluster: CharacterCluster,
    pub sums: CharacterCluster,
    pub holds: bool,
}

/// Compares `cl(V^{⊗r})` with `{c_1 + … + c_r : c_i ∈ cl(V)}`.
pub fn check_tensor_power_law(v: &LModule, r: usize, seed: u64) -> Result<TensorPowerLawReport> {
    if r == 0 {
        return Err(Error::Precondition("tensor power must be at least 1".into()));
    }
    let mut power = v.clone();
    for _ in 1..r {
        power = power.tensor(v)?;
    }
    let power_cluster = cluster(&power, seed)?;
    let sums = r_fold_sums(&cluster(v, seed)?, r);
    let holds = cluster_eq(&power_cluster, &sums, DEFAULT_MAX_EXTENSION_DEGREE)?;
    Ok(TensorPowerLawReport { r, power_cluster, sums, holds })
}

#[derive(Clone, Debug)]
pub struct HomLawReport {
    pub hom_cluster: CharacterCluster,
    /// Some character lies in both `cl(V)` and `cl(W)`.
    pub shared: bool,
    /// Zero lies in `cl(Hom(V, W))`.
    pub zero_in_hom: bool,
    /// `cl(Hom(V, W)) ⊆ {d − c}`.
    pub within_differences: bool,
    pub holds: bool,
}

pub fn check_hom_law(v: &LModule, w: &LModule, seed: u64) -> Result<HomLawReport> {
    let cap = DEFAULT_MAX_EXTENSION_DEGREE;
    let hom = v.hom_module(w)?;
    let hom_cluster = cluster(&hom, seed)?;
    let (cv, cw) = common_field(&cluster(v, seed)?, &cluster(w, seed)?, cap)?;
    let shared = cv.values.iter().any(|c| cw.values.binary_search(c).is_ok());
    let f = cv.field().clone();
    let diffs = CharacterCluster::from_characters(
        cv.scalars.clone(),
        cw.values.iter().flat_map(|d| {
            let f = f.clone();
            cv.values.iter().map(move |c| d.iter().zip(c).map(|(&a, &b)| f.sub(a, b)).collect::<Vec<u64>>())
        }),
    );
    let zero_in_hom = hom_cluster.contains_zero();
    let within_differences = cluster_subset(&hom_cluster, &diffs, cap)?;
    let holds = within_differences && (!shared || zero_in_hom);
    Ok(HomLawReport { hom_cluster, shared, zero_in_hom, within_differences, holds })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::gf::FieldCtx;
    use crate::liealg::{LieAlgebra, RestrictedLieAlgebra};

    fn line(p: u64) -> Arc<RestrictedLieAlgebra> {
        let f = FieldCtx::prime(p).unwrap();
        Arc::new(RestrictedLieAlgebra::new(LieAlgebra::abelian(&f, 1), Matrix::zeros(&f, 1, 1)).unwrap())
    }

    fn module(l: &Arc<RestrictedLieAlgebra>, rows: &[Vec<i64>]) -> LModule {
        LModule::new(l.clone(), vec![Matrix::from_ints(l.field(), rows)]).unwrap()
    }

    #[test]
    fn defect_and_character_of_scalars() {
        for p in [2u64, 3, 5] {
            let l = line(p);
            for lambda in 0..p as i64 {
                let m = module(&l, &[vec![lambda]]);
                let f = l.field();
                assert_eq!(semilinear_defect(&m, 0).unwrap().get(0, 0), f.pow(lambda as u64, p));
                assert_eq!(character_of(&m).unwrap().values(), &[lambda as u64]);
            }
        }
    }

    #[test]
    fn cluster_examples() {
        let l = line(3);
        assert!(cluster(&LModule::trivial(l.clone(), 3), 0).unwrap().is_zero_cluster());
        let d = module(&l, &[vec![0, 0], vec![0, 1]]);
        let c = cluster(&d, 0).unwrap();
        assert_eq!(c.values(), &[vec![0], vec![1]]);

        let l2 = line(2);
        let comp = module(&l2, &[vec![0, 1], vec![1, 1]]);
        let c = cluster(&comp, 0).unwrap();
        let f4 = c.field().clone();
        assert_eq!(f4.order(), 4);
        let w = f4.generator();
        let mut expect = vec![vec![w], vec![f4.mul(w, w)]];
        expect.sort();
        assert_eq!(c.values(), expect.as_slice());
        assert_eq!(c.factor_dims, vec![1, 1]);
    }

    #[test]
    fn fp_span_examples() {
        let l = line(3);
        let z = cluster(&LModule::trivial(l.clone(), 1), 0).unwrap();
        assert_eq!(fp_span(&z).values(), z.values());
        let c = cluster(&module(&l, &[vec![1]]), 0).unwrap();
        assert_eq!(fp_span(&c).values(), &[vec![0], vec![1], vec![2]]);
        let f2 = FieldCtx::prime(2).unwrap();
        let two = CharacterCluster::from_characters(Embedding::identity(&f2), [vec![1, 0], vec![0, 1]]);
        assert_eq!(fp_span(&two).len(), 4);
    }

    #[test]
    fn subset_examples() {
        let l = line(3);
        let d = cluster(&module(&l, &[vec![0, 0], vec![0, 1]]), 0).unwrap();
        let cap = DEFAULT_MAX_EXTENSION_DEGREE;
        assert!(cluster_subset(&d, &fp_span(&d), cap).unwrap());
        let zero = cluster(&LModule::trivial(l.clone(), 1), 0).unwrap();
        assert!(cluster_subset(&zero, &fp_span(&d), cap).unwrap());
        let one = cluster(&module(&l, &[vec![1]]), 0).unwrap();
        assert!(!cluster_subset(&one, &fp_span(&zero), cap).unwrap());
    }

    #[test]
    fn tensor_power_law_examples() {
        let l = line(3);
        let d = module(&l, &[vec![0, 0], vec![0, 1]]);
        let rep = check_tensor_power_law(&d, 2, 0).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.sums.values(), &[vec![0], vec![1], vec![2]]);
        assert!(check_tensor_power_law(&d, 1, 0).unwrap().holds);
        assert!(check_tensor_power_law(&LModule::trivial(l, 2), 3, 0).unwrap().power_cluster.is_zero_cluster());
    }

    #[test]
    fn hom_law_examples() {
        let l = line(3);
        let t = LModule::trivial(l.clone(), 1);
        let r = check_hom_law(&t, &t, 0).unwrap();
        assert!(r.holds && r.hom_cluster.is_zero_cluster());
        let one = module(&l, &[vec![1]]);
        let r = check_hom_law(&one, &one, 0).unwrap();
        assert!(r.holds && r.hom_cluster.is_zero_cluster());
        let d = module(&l, &[vec![0, 0], vec![0, 1]]);
        let r = check_hom_law(&d, &d, 0).unwrap();
        assert!(r.holds && r.zero_in_hom);
    }
}
