use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LModule;
use crate::gf::poly;
use crate::linalg::{spin, BasisCoordinates, EchelonBuilder, Matrix, Subspace};

/// Maximum length of the random words used by the irreducibility test.
pub const DEFAULT_WORD_LENGTH: usize = 8;

// random rounds before trying exhaustive enumeration
const RANDOM_ROUNDS: usize = 64;
const EXHAUSTIVE_LIMIT: u64 = 1 << 18;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// A proper nonzero submodule.
    Reducible(Subspace),
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible)
    }
}

/// `0 = chain[0] ⊂ … ⊂ chain[r] = M` with `factors[i] ≅ chain[i+1] / chain[i]`.
#[derive(Clone, Debug)]
pub struct CompositionSeries {
    pub chain: Vec<Subspace>,
    pub factors: Vec<LModule>,
}

impl CompositionSeries {
    pub fn factor_dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim()).collect()
    }
}

fn random_element(m: &LModule, rng: &mut ChaCha8Rng) -> Matrix {
    let f = m.field();
    let q = f.order();
    let d = m.dim();
    let gens: Vec<&Matrix> = m.actions().iter().filter(|a| !a.is_zero()).collect();
    let mut theta = Matrix::scalar(f, d, rng.gen_range(0..q));
    if gens.is_empty() {
        return theta;
    }
    for _ in 0..3 {
        let len = rng.gen_range(1..=DEFAULT_WORD_LENGTH);
        let mut w = gens[rng.gen_range(0..gens.len())].clone();
        for _ in 1..len {
            let g = gens[rng.gen_range(0..gens.len())];
            // mixing in the identity keeps shorter words reachable
            w = w.mul(g).add(&w.scale(rng.gen_range(0..q)));
        }
        theta.add_scaled(rng.gen_range(1..q), &w);
    }
    theta
}

fn random_vector_in(s: &Subspace, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let q = s.field().order();
    loop {
        let c: Vec<u64> = (0..s.dim()).map(|_| rng.gen_range(0..q)).collect();
        if c.iter().any(|&x| x != 0) {
            return s.combine(&c);
        }
    }
}

fn annihilator(u: &Subspace) -> Subspace {
    u.basis().kernel()
}

fn common_kernel(mats: &[Matrix], field: &crate::gf::Field, n: usize) -> Subspace {
    let refs: Vec<&Matrix> = mats.iter().collect();
    if refs.is_empty() {
        return Subspace::full(field, n);
    }
    Matrix::vstack(field, n, &refs).kernel()
}

impl LModule {
    fn transposed_actions(&self) -> Vec<Matrix> {
        self.actions().iter().map(|a| a.transpose()).collect()
    }

    /// Meataxe test: spins kernel vectors of `g(θ)` for random algebra elements
    /// `θ` and irreducible factors `g` of their characteristic polynomials,
    /// certifying irreducibility when `dim ker g(θ) = deg g` and both the
    /// vector and a dual kernel vector generate everything.
    pub fn irreducibility_test(&self, seed: u64) -> Irreducibility {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.irreducibility_with(&mut rng)
    }

    fn irreducibility_with(&self, rng: &mut ChaCha8Rng) -> Irreducibility {
        let d = self.dim();
        let f = self.field().clone();
        if d <= 1 {
            return Irreducibility::Irreducible;
        }
        let fixed = common_kernel(self.actions(), &f, d);
        if !fixed.is_zero() {
            return Irreducibility::Reducible(Subspace::from_vectors(&f, d, vec![fixed.vectors().swap_remove(0)]));
        }
        let transposed = self.transposed_actions();
        let cofixed = common_kernel(&transposed, &f, d);
        if !cofixed.is_zero() {
            let w = Subspace::from_vectors(&f, d, vec![cofixed.vectors().swap_remove(0)]);
            return Irreducibility::Reducible(annihilator(&w));
        }
        let mut round = 0usize;
        loop {
            if round == RANDOM_ROUNDS {
                if let Some(r) = self.exhaustive_search() {
                    return r;
                }
            }
            round += 1;
            let theta = random_element(self, rng);
            let cp = theta.char_poly();
            let factors = poly::irreducible_factors(&f, &cp, rng);
            for g in factors.iter().take(3) {
                let n = theta.eval_poly(g);
                let k = n.kernel();
                if k.is_zero() {
                    continue;
                }
                let v = random_vector_in(&k, rng);
                let u = spin(&f, d, &[v], self.actions());
                if !u.is_full() {
                    return Irreducibility::Reducible(u);
                }
                let kt = n.transpose().kernel();
                let w = random_vector_in(&kt, rng);
                let ut = spin(&f, d, &[w], &transposed);
                if !ut.is_full() {
                    return Irreducibility::Reducible(annihilator(&ut));
                }
                if k.dim() == poly::degree(g).unwrap_or(0) {
                    return Irreducibility::Irreducible;
                }
            }
        }
    }

    /// Spins every vector up to scalars when that is cheap enough.
    fn exhaustive_search(&self) -> Option<Irreducibility> {
        let f = self.field();
        let d = self.dim();
        let q = f.order();
        let count = (q as f64).powi(d as i32);
        if count > EXHAUSTIVE_LIMIT as f64 {
            return None;
        }
        for lead in 0..d {
            let free = d - lead - 1;
            for idx in 0..q.pow(free as u32) {
                let mut v = vec![0; d];
                v[lead] = 1;
                let mut r = idx;
                for x in v.iter_mut().skip(lead + 1) {
                    *x = r % q;
                    r /= q;
                }
                let u = spin(f, d, &[v], self.actions());
                if !u.is_full() {
                    return Some(Irreducibility::Reducible(u));
                }
            }
        }
        Some(Irreducibility::Irreducible)
    }

    /// A nonzero submodule with no proper nonzero submodules.
    pub fn minimal_submodule(&self, seed: u64) -> Subspace {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = self.field().clone();
        let d = self.dim();
        let fixed = common_kernel(self.actions(), &f, d);
        if !fixed.is_zero() {
            return Subspace::from_vectors(&f, d, vec![fixed.vectors().swap_remove(0)]);
        }
        let mut current = Subspace::full(&f, d);
        loop {
            let sub = self.restrict_to(&current).expect("submodule");
            match sub.irreducibility_with(&mut rng) {
                Irreducibility::Irreducible => return current,
                Irreducibility::Reducible(u) => current = current.lift_subspace(&u),
            }
        }
    }

    /// A composition series; factor dimensions do not depend on `seed`.
    pub fn composition_series(&self, seed: u64) -> CompositionSeries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (chain, factors) = self.series_with(&mut rng);
        CompositionSeries { chain, factors }
    }

    fn trivial_line(&self) -> LModule {
        let f = self.field().clone();
        LModule {
            algebra: self.algebra.clone(),
            scalars: self.scalars.clone(),
            action: vec![Matrix::zeros(&f, 1, 1); self.actions().len()],
            dim: 1,
        }
    }

    fn series_with(&self, rng: &mut ChaCha8Rng) -> (Vec<Subspace>, Vec<LModule>) {
        let d = self.dim();
        let f = self.field().clone();
        if d == 0 {
            return (vec![Subspace::zero(&f, 0)], Vec::new());
        }
        // vectors killed by everything give trivial one-dimensional factors
        let fixed = common_kernel(self.actions(), &f, d);
        if !fixed.is_zero() && d > 1 {
            let vecs = fixed.vectors();
            let mut chain = vec![Subspace::zero(&f, d)];
            for j in 1..=vecs.len() {
                chain.push(Subspace::from_vectors(&f, d, vecs[..j].to_vec()));
            }
            let mut factors = vec![self.trivial_line(); vecs.len()];
            if fixed.is_full() {
                return (chain, factors);
            }
            let q = self.quotient_by(&fixed).expect("fixed vectors form a submodule");
            let (qc, qf) = q.series_with(rng);
            chain.extend(qc.iter().skip(1).map(|s| fixed.lift_quotient_subspace(s)));
            factors.extend(qf);
            return (chain, factors);
        }
        match self.irreducibility_with(rng) {
            Irreducibility::Irreducible => (vec![Subspace::zero(&f, d), Subspace::full(&f, d)], vec![self.clone()]),
            Irreducibility::Reducible(u) => {
                let sub = self.restrict_to(&u).expect("witness is a submodule");
                let quo = self.quotient_by(&u).expect("witness is a submodule");
                let (sc, mut sf) = sub.series_with(rng);
                let (qc, qf) = quo.series_with(rng);
                let mut chain: Vec<Subspace> = sc.iter().map(|s| u.lift_subspace(s)).collect();
                chain.extend(qc.iter().skip(1).map(|s| u.lift_quotient_subspace(s)));
                sf.extend(qf);
                (chain, sf)
            }
        }
    }

    /// `dim {T : T ρ(e_i) = ρ(e_i) T for all i}`.
    pub fn endomorphism_algebra_dim(&self) -> usize {
        let d = self.dim();
        if d == 0 {
            return 0;
        }
        for start in 0..d {
            let mut v = vec![0; d];
            v[start] = 1;
            if let Some(k) = self.cyclic_endomorphism_dim(v) {
                return k;
            }
        }
        self.commutant_dim()
    }

    // When `v` generates the module, `T` is determined by `u = T v`, and the
    // admissible `u` are cut out by the relations among the spinning words.
    fn cyclic_endomorphism_dim(&self, v: Vec<u64>) -> Option<usize> {
        let d = self.dim();
        let f = self.field().clone();
        let mut builder = EchelonBuilder::new(&f, d);
        let mut vecs: Vec<Vec<u64>> = Vec::new();
        let mut words: Vec<Matrix> = Vec::new();
        builder.insert(v.clone());
        vecs.push(v);
        words.push(Matrix::identity(&f, d));
        let mut next = 0;
        while next < vecs.len() && vecs.len() < d {
            for a in self.actions() {
                let w = a.apply(&vecs[next]);
                if builder.insert(w.clone()).is_some() {
                    vecs.push(w);
                    words.push(a.mul(&words[next]));
                }
            }
            next += 1;
        }
        if vecs.len() < d {
            return None;
        }
        let coords = BasisCoordinates::new(&f, d, &vecs).ok()?;
        let mut blocks = Vec::new();
        for a in self.actions() {
            for (j, b) in vecs.iter().enumerate() {
                let c = coords.coordinates(&a.apply(b)).expect("basis spans");
                let mut rel = a.mul(&words[j]);
                for (k, &x) in c.iter().enumerate() {
                    if x != 0 {
                        rel.add_scaled(f.neg(x), &words[k]);
                    }
                }
                blocks.push(rel);
            }
        }
        if blocks.is_empty() {
            return Some(d);
        }
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Some(Matrix::vstack(&f, d, &refs).kernel().dim())
    }

    fn commutant_dim(&self) -> usize {
        let d = self.dim();
        let f = self.field().clone();
        let id = Matrix::identity(&f, d);
        // row-major vec(T): vec(T A) = (I ⊗ A^T) vec T, vec(A T) = (A ⊗ I) vec T
        let blocks: Vec<Matrix> = self
            .actions()
            .iter()
            .map(|a| id.kron(&a.transpose()).sub(&a.kron(&id)))
            .collect();
        if blocks.is_empty() {
            return d * d;
        }
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Matrix::vstack(&f, d * d, &refs).kernel().dim()
    }
}
