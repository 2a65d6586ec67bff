use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use clusterlie::charcluster::{character_of, cluster, fp_span, CharacterCluster};
use clusterlie::formations::{hypercentre, hypercentre_nilpotent_fast, is_hypercentral, nilpotent_formation};
use clusterlie::gf::{extend_field, Embedding, Field, FieldCtx};
use clusterlie::liealg::{adjust_pmap_centre_kill, matrix_p_closure, p_envelope, RestrictedLieAlgebra, Subalgebra};
use clusterlie::linalg::{spin, Matrix, Subspace};
use clusterlie::repmod::{dual_tensor_to_hom, extend_action_to_penvelope, LModule};
use clusterlie::theorem::{
    char_zero_hom_submodule, check_theorem_instance, proof_pipeline, random_instance, Status,
};

const PRIMES: [u64; 3] = [2, 3, 5];

fn field(p: u64, m: usize) -> Field {
    FieldCtx::canonical(p, m).unwrap()
}

fn rand_elem(f: &Field, rng: &mut ChaCha8Rng) -> u64 {
    rng.gen_range(0..f.order())
}

fn rand_matrix(f: &Field, r: usize, c: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let data = (0..r * c).map(|_| rand_elem(f, rng)).collect();
    Matrix::new(f, r, c, data).unwrap()
}

fn rand_vec(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    (0..n).map(|_| rand_elem(f, rng)).collect()
}

fn rand_invertible(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let g = rand_matrix(f, n, n, rng);
        if g.inverse().is_some() {
            return g;
        }
    }
}

fn upper(f: &Field, n: usize, strict: bool, rng: &mut ChaCha8Rng) -> Matrix {
    let mut m = Matrix::zeros(f, n, n);
    for i in 0..n {
        for j in i + usize::from(strict)..n {
            m.set(i, j, rand_elem(f, rng));
        }
    }
    m
}

/// A centre-killed restricted algebra of triangular matrices, with its
/// natural module (a module for the underlying Lie algebra).
fn triangular(p: u64, seed: u64) -> (Arc<RestrictedLieAlgebra>, LModule) {
    let f = field(p, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let closure = loop {
        let n = rng.gen_range(2..=3);
        let gens: Vec<Matrix> = (0..rng.gen_range(1..=2)).map(|_| upper(&f, n, rng.gen_bool(0.4), &mut rng)).collect();
        let c = matrix_p_closure(&gens).unwrap();
        if c.algebra().dim() > 0 {
            break c;
        }
    };
    let l = Arc::new(adjust_pmap_centre_kill(closure.algebra()).unwrap());
    let natural = LModule::new(l.clone(), closure.basis().to_vec()).unwrap();
    (l, natural)
}

/// A module of dimension at most 3 for a small triangular algebra.
fn small_module(p: u64, seed: u64) -> LModule {
    let (l, natural) = triangular(p, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
    match rng.gen_range(0..4) {
        0 => natural,
        1 => natural.dual(),
        2 => {
            let ad = LModule::adjoint(&l);
            if ad.dim() <= 3 {
                ad
            } else {
                natural
            }
        }
        _ => {
            let f = l.field();
            let full = l.algebra().full_space();
            let derived = l.algebra().bracket_space(&full, &full);
            let ann = if derived.is_zero() {
                Subspace::full(f, l.dim())
            } else {
                Matrix::from_rows(f, l.dim(), &derived.vectors()).kernel()
            };
            let lambda = ann.combine(&rand_vec(f, ann.dim(), &mut rng));
            let one = LModule::new(l.clone(), lambda.iter().map(|&a| Matrix::scalar(f, 1, a)).collect()).unwrap();
            natural.tensor(&one).unwrap()
        }
    }
}

fn values_eq(a: &CharacterCluster, b: &CharacterCluster) -> bool {
    clusterlie::charcluster::cluster_eq(a, b, 12).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn frobenius_and_pth_root_are_inverse(pi in 0usize..3, m in 1usize..=4, a in any::<u64>(), b in any::<u64>()) {
        let f = field(PRIMES[pi], m);
        let (a, b) = (a % f.order(), b % f.order());
        prop_assert_eq!(f.pth_root(f.frobenius(a)), a);
        prop_assert_eq!(f.frobenius(f.pth_root(a)), a);
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
    }

    #[test]
    fn embeddings_are_homomorphisms(pi in 0usize..3, d in 1usize..=2, k in 1usize..=3, a in any::<u64>(), b in any::<u64>()) {
        let small = field(PRIMES[pi], d);
        let (big, e) = extend_field(&small, k, 12).unwrap();
        prop_assert_eq!(big.degree(), d * k);
        let (a, b) = (a % small.order(), b % small.order());
        prop_assert_eq!(e.apply(small.add(a, b)), big.add(e.apply(a), e.apply(b)));
        prop_assert_eq!(e.apply(small.mul(a, b)), big.mul(e.apply(a), e.apply(b)));
        prop_assert_eq!(e.apply(1), 1);
        let c = Embedding::canonical(&small, &big).unwrap();
        prop_assert_eq!(c.apply(small.mul(a, b)), big.mul(c.apply(a), c.apply(b)));
    }

    #[test]
    fn rref_kernel_and_rank_nullity(pi in 0usize..3, r in 1usize..6, c in 1usize..6, seed in any::<u64>()) {
        let f = field(PRIMES[pi], 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rand_matrix(&f, r, c, &mut rng);
        let (e, rank, _) = m.rref();
        prop_assert_eq!(e.rref().0, e.clone());
        let k = m.kernel();
        prop_assert_eq!(k.dim() + rank, c);
        for v in k.vectors() {
            prop_assert!(m.apply(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn subspace_lattice_dimension_formula(pi in 0usize..3, n in 1usize..7, seed in any::<u64>()) {
        let f = field(PRIMES[pi], 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Subspace::from_vectors(&f, n, (0..rng.gen_range(0..=n)).map(|_| rand_vec(&f, n, &mut rng)).collect());
        let b = Subspace::from_vectors(&f, n, (0..rng.gen_range(0..=n)).map(|_| rand_vec(&f, n, &mut rng)).collect());
        let s = a.sum(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        prop_assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
        prop_assert!(a.is_subspace_of(&s) && b.is_subspace_of(&s));
    }

    #[test]
    fn spin_is_monotone_idempotent_and_invariant(pi in 0usize..3, n in 1usize..6, seed in any::<u64>()) {
        let f = field(PRIMES[pi], 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ops: Vec<Matrix> = (0..2).map(|_| rand_matrix(&f, n, n, &mut rng)).collect();
        let g1 = vec![rand_vec(&f, n, &mut rng)];
        let mut g2 = g1.clone();
        g2.push(rand_vec(&f, n, &mut rng));
        let s1 = spin(&f, n, &g1, &ops);
        let s2 = spin(&f, n, &g2, &ops);
        prop_assert!(s1.is_subspace_of(&s2));
        prop_assert_eq!(spin(&f, n, &s1.vectors(), &ops), s1.clone());
        prop_assert!(ops.iter().all(|m| s1.is_invariant(m)));
    }

    #[test]
    fn generated_algebras_satisfy_the_axioms(pi in 0usize..3, seed in any::<u64>()) {
        let (l, natural) = triangular(PRIMES[pi], seed);
        prop_assert!(l.algebra().verify_lie().is_empty());
        prop_assert!(l.verify_pmap().is_empty());
        prop_assert!(l.is_centre_killed());
        prop_assert!(natural.verify_module().is_empty());
        for z in l.algebra().centre().vectors() {
            prop_assert!(l.pmap(&z).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn p_closure_is_idempotent(pi in 0usize..3, seed in any::<u64>()) {
        let f = field(PRIMES[pi], 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<Matrix> = (0..2).map(|_| rand_matrix(&f, 3, 3, &mut rng)).collect();
        let c = matrix_p_closure(&gens).unwrap();
        let again = matrix_p_closure(c.basis()).unwrap();
        prop_assert_eq!(again.algebra().dim(), c.algebra().dim());
        for g in &gens {
            prop_assert!(c.coordinates(g).is_some());
        }
    }

    #[test]
    fn envelope_contains_the_algebra_as_subnormal_ideal(pi in 0usize..3, seed in any::<u64>()) {
        let f = field(PRIMES[pi], 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // the Lie algebra generated by two strictly upper triangular matrices
        let mut basis: Vec<Matrix> = Vec::new();
        let mut span = Subspace::zero(&f, 9);
        let mut queue: Vec<Matrix> = (0..2).map(|_| upper(&f, 3, rng.gen_bool(0.5), &mut rng)).collect();
        while let Some(m) = queue.pop() {
            if span.contains(m.data()) {
                continue;
            }
            span = span.sum(&Subspace::from_vectors(&f, 9, vec![m.data().to_vec()])).unwrap();
            for b in &basis {
                queue.push(b.commutator(&m));
            }
            basis.push(m);
        }
        prop_assume!(!basis.is_empty());
        let closure = matrix_p_closure(&basis).unwrap();
        let coords: Vec<Vec<u64>> = basis.iter().map(|b| closure.coordinates(b).unwrap()).collect();
        let s_space = Subspace::from_vectors(&f, closure.algebra().dim(), coords);
        let s_lie = closure.algebra().algebra().induced(&s_space).unwrap();
        let s_basis: Vec<Matrix> = s_space.vectors().iter().map(|v| closure.matrix_of(v)).collect();
        let env = p_envelope(&s_lie, Some(&s_basis)).unwrap();
        let l = env.algebra().algebra();
        prop_assert!(l.is_ideal(&env.image, &l.full_space()));
        let full = l.full_space();
        prop_assert!(l.bracket_space(&full, &full).is_subspace_of(&env.image));
        prop_assert!(l.is_subnormal(&env.image).0);
    }

    #[test]
    fn extension_to_envelope_restricts_back(pi in 0usize..3, seed in any::<u64>()) {
        let (l, natural) = triangular(PRIMES[pi], seed);
        let lie = l.algebra();
        let full = lie.full_space();
        let derived = lie.bracket_space(&full, &full);
        // S must generate L; L itself always does
        let s_space = if !derived.is_zero() && seed % 2 == 0 { derived } else { full };
        let s = Subalgebra::new(l.clone(), s_space).unwrap();
        let m = natural.restrict_to_subalgebra(&s).unwrap();
        match extend_action_to_penvelope(&l, &s, &m) {
            Ok(e) => {
                let back = e.restrict_to_subalgebra(&s).unwrap();
                prop_assert_eq!(back.actions(), m.actions());
                prop_assert!(e.verify_module().is_empty());
            }
            Err(clusterlie::Error::NotGenerated(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn module_constructions(pi in 0usize..2, seed in any::<u64>()) {
        let a = small_module(PRIMES[pi], seed);
        let b = small_module(PRIMES[pi], seed).dual();
        let t = a.tensor(&b).unwrap();
        prop_assert_eq!(t.dim(), a.dim() * b.dim());
        prop_assert!(t.verify_module().is_empty());
        prop_assert!(a.direct_sum(&b).unwrap().verify_module().is_empty());
        let iso = dual_tensor_to_hom(&a, &b).unwrap();
        prop_assert!(iso.is_surjective() && iso.kernel().is_zero());
    }

    #[test]
    fn jordan_holder_dims_are_seed_independent(pi in 0usize..3, seed in any::<u64>()) {
        let m = small_module(PRIMES[pi], seed);
        let m = m.tensor(&m.dual()).unwrap();
        let mut base = m.composition_series(0).factor_dims();
        base.sort_unstable();
        prop_assert_eq!(base.iter().sum::<usize>(), m.dim());
        for s in 1..5u64 {
            let mut d = m.composition_series(s.wrapping_mul(seed | 1)).factor_dims();
            d.sort_unstable();
            prop_assert_eq!(&d, &base);
        }
    }

    #[test]
    fn defect_is_p_semilinear(pi in 0usize..3, seed in any::<u64>()) {
        let m = small_module(PRIMES[pi], seed);
        let f = m.field().clone();
        let n = m.algebra().dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = rand_vec(&f, n, &mut rng);
        let mut expect = Matrix::zeros(&f, m.dim(), m.dim());
        for (i, &c) in x.iter().enumerate() {
            expect.add_scaled(f.frobenius(c), &m.semilinear_defect(i).unwrap());
        }
        prop_assert_eq!(m.semilinear_defect_at(&x).unwrap(), expect);
    }

    #[test]
    fn extend_scalars_commutes_with_tensor(seed in any::<u64>()) {
        let a = small_module(3, seed);
        let (_, e) = extend_field(a.field(), 2, 12).unwrap();
        let lhs = a.tensor(&a).unwrap().extend_scalars(&e).unwrap();
        let ae = a.extend_scalars(&e).unwrap();
        let rhs = ae.tensor(&ae).unwrap();
        prop_assert_eq!(lhs.actions(), rhs.actions());
        let hl = a.hom_module(&a).unwrap().extend_scalars(&e).unwrap();
        let hr = ae.hom_module(&ae).unwrap();
        prop_assert_eq!(hl.actions(), hr.actions());
    }

    #[test]
    fn cluster_properties(pi in 0usize..3, seed in any::<u64>()) {
        let m = small_module(PRIMES[pi], seed);
        let c = cluster(&m, seed).unwrap();
        prop_assert!(!c.is_empty());
        prop_assert_eq!(c.factor_dims.iter().sum::<usize>(), m.dim());
        let span = fp_span(&c);
        prop_assert!(values_eq(&fp_span(&span), &span));
        if m.is_restricted_module() {
            prop_assert!(c.is_zero_cluster());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = rand_invertible(m.field(), m.dim(), &mut rng);
        prop_assert!(values_eq(&cluster(&m.conjugate(&g).unwrap(), seed ^ 7).unwrap(), &c));
    }

    #[test]
    fn characters_are_additive(pi in 0usize..3, seed in any::<u64>()) {
        let m = small_module(PRIMES[pi], seed);
        let cs = m.composition_series(seed);
        for factor in cs.factors.iter().filter(|f| f.dim() == 1) {
            let c = character_of(factor).unwrap();
            let f = factor.field().clone();
            let n = factor.algebra().dim();
            for i in 0..n {
                for j in 0..n {
                    let mut x = vec![0; n];
                    x[i] = f.add(x[i], 1);
                    x[j] = f.add(x[j], 1);
                    let defect = factor.semilinear_defect_at(&x).unwrap().scalar_value().unwrap();
                    prop_assert_eq!(f.pth_root(defect), c.eval(&x));
                }
            }
        }
    }

    #[test]
    fn hypercentre_fast_path_agrees(pi in 0usize..3, seed in any::<u64>()) {
        let inst = random_instance(PRIMES[pi], 4, 4, seed).unwrap();
        let n = nilpotent_formation();
        for m in [&inst.v, &inst.w] {
            let r = m.restrict_to_subalgebra(&inst.subalgebra).unwrap();
            let (fast, _) = hypercentre_nilpotent_fast(&r);
            let (generic, _) = hypercentre(&r, &n, seed);
            prop_assert_eq!(&fast, &generic);
            // hypercentral iff the S-action generates a nilpotent associative algebra
            let mut products: Vec<Matrix> = r.actions().iter().filter(|m| !m.is_zero()).cloned().collect();
            for _ in 1..r.dim() {
                products = products.iter().flat_map(|a| r.actions().iter().map(move |b| a.mul(b))).collect();
                products.retain(|m| !m.is_zero());
            }
            prop_assert_eq!(fast.is_full(), products.is_empty() || r.dim() == 0);
        }
    }

    #[test]
    fn hypercentrality_passes_to_sections_and_sums(pi in 0usize..3, seed in any::<u64>()) {
        let inst = random_instance(PRIMES[pi], 4, 4, seed).unwrap();
        let n = nilpotent_formation();
        let r = inst.v.restrict_to_subalgebra(&inst.subalgebra).unwrap();
        let central = is_hypercentral(&r, &n, seed).is_hypercentral;
        let cs = r.composition_series(seed);
        for k in 1..cs.chain.len() - 1 {
            let sub = r.restrict_to(&cs.chain[k]).unwrap();
            let quo = r.quotient_by(&cs.chain[k]).unwrap();
            if central {
                prop_assert!(is_hypercentral(&sub, &n, seed).is_hypercentral);
                prop_assert!(is_hypercentral(&quo, &n, seed).is_hypercentral);
            }
        }
        let sum = r.direct_sum(&r).unwrap();
        prop_assert_eq!(is_hypercentral(&sum, &n, seed).is_hypercentral, central);
    }

    #[test]
    fn pipeline_agrees_with_verdict(pi in 0usize..3, seed in any::<u64>()) {
        let inst = random_instance(PRIMES[pi], 4, 4, seed).unwrap();
        let v = check_theorem_instance(&inst).unwrap();
        prop_assert_ne!(v.status, Status::Violation);
        if v.status == Status::Confirmed {
            let rep = proof_pipeline(&inst).unwrap();
            prop_assert!(rep.completed);
        }
    }

    #[test]
    fn char_zero_maps_exist_when_clusters_meet(pi in 0usize..3, seed in any::<u64>()) {
        let inst = random_instance(PRIMES[pi], 4, 4, seed).unwrap();
        let v = &inst.v;
        for w in inst.w.composition_series(seed).factors {
            let meet = cluster(&w, seed).unwrap().characters().iter()
                .any(|c| cluster(v, seed).unwrap().contains(c).unwrap());
            let (_, h) = char_zero_hom_submodule(v, &w).unwrap();
            if meet {
                prop_assert!(!h.is_zero());
            }
        }
    }

    #[test]
    fn generation_is_reproducible(pi in 0usize..3, seed in any::<u64>()) {
        let a = serde_json::to_string(&random_instance(PRIMES[pi], 4, 4, seed).unwrap().to_record()).unwrap();
        let b = serde_json::to_string(&random_instance(PRIMES[pi], 4, 4, seed).unwrap().to_record()).unwrap();
        prop_assert_eq!(a, b);
    }
}
