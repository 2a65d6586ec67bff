//! Dense univariate polynomials over a [`FieldCtx`], little-endian, with
//! factorization into distinct irreducible factors (squarefree split,
//! distinct-degree and equal-degree factorization).

use rand::Rng;

use super::FieldCtx;

/// Coefficients, constant term first; no trailing zeros. The zero polynomial is empty.
pub type Poly = Vec<u64>;

pub fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn x() -> Poly {
    vec![0, 1]
}

pub fn add(f: &FieldCtx, a: &[u64], b: &[u64]) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(&mut out);
    out
}

pub fn sub(f: &FieldCtx, a: &[u64], b: &[u64]) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(&mut out);
    out
}

pub fn scale(f: &FieldCtx, a: &[u64], c: u64) -> Poly {
    let mut out: Poly = a.iter().map(|&x| f.mul(x, c)).collect();
    trim(&mut out);
    out
}

pub fn mul(f: &FieldCtx, a: &[u64], b: &[u64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; panics if `b` is zero.
pub fn divrem(f: &FieldCtx, a: &[u64], b: &[u64]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]).unwrap();
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0; r.len() - db];
    for k in (db..r.len()).rev() {
        let c = f.mul(r[k], lead_inv);
        if c == 0 {
            continue;
        }
        q[k - db] = c;
        for j in 0..=db {
            r[k - db + j] = f.sub(r[k - db + j], f.mul(c, b[j]));
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub fn rem(f: &FieldCtx, a: &[u64], b: &[u64]) -> Poly {
    divrem(f, a, b).1
}

pub fn monic(f: &FieldCtx, a: &[u64]) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = f.inv(a[d]).unwrap();
            scale(f, &a[..=d], inv)
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(f: &FieldCtx, a: &[u64], b: &[u64]) -> Poly {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

pub fn mulmod(f: &FieldCtx, a: &[u64], b: &[u64], m: &[u64]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &FieldCtx, a: &[u64], mut e: u64, m: &[u64]) -> Poly {
    let mut base = rem(f, a, m);
    let mut acc = rem(f, &[1], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(f, &base, &base, m);
        }
    }
    acc
}

pub fn derivative(f: &FieldCtx, a: &[u64]) -> Poly {
    let mut out: Poly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| f.mul(c, f.from_int((i as u64 % f.characteristic()) as i64)))
        .collect();
    trim(&mut out);
    out
}

pub fn eval(f: &FieldCtx, a: &[u64], x: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `x^(q^k) mod g` where `q` is the order of `f`.
fn frobenius_power_of_x(f: &FieldCtx, k: usize, g: &[u64]) -> Poly {
    let mut h = rem(f, &x(), g);
    for _ in 0..k {
        h = powmod(f, &h, f.order(), g);
    }
    h
}

/// Rabin's irreducibility test over `f`.
pub fn is_irreducible(f: &FieldCtx, g: &[u64]) -> bool {
    let n = match degree(g) {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let g = monic(f, g);
    if frobenius_power_of_x(f, n, &g) != rem(f, &x(), &g) {
        return false;
    }
    prime_divisors(n).into_iter().all(|r| {
        let h = frobenius_power_of_x(f, n / r, &g);
        degree(&gcd(f, &sub(f, &h, &x()), &g)) == Some(0)
    })
}

pub(crate) fn is_irreducible_over_prime(prime: &FieldCtx, g: &[u64]) -> bool {
    debug_assert!(prime.is_prime_field());
    is_irreducible(prime, g)
}

fn random_poly<R: Rng + ?Sized>(f: &FieldCtx, deg_bound: usize, rng: &mut R) -> Poly {
    let mut a: Poly = (0..deg_bound).map(|_| rng.gen_range(0..f.order())).collect();
    trim(&mut a);
    a
}

/// Monic squarefree polynomials whose irreducible factors are exactly the
/// distinct irreducible factors of `g`.
fn squarefree_parts(f: &FieldCtx, g: &[u64]) -> Vec<Poly> {
    let g = monic(f, g);
    if degree(&g).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let d = derivative(f, &g);
    if d.is_empty() {
        return squarefree_parts(f, &pth_root_poly(f, &g));
    }
    let mut c = gcd(f, &g, &d);
    let w = divrem(f, &g, &c).0;
    let mut parts = Vec::new();
    if degree(&w).unwrap_or(0) > 0 {
        loop {
            let y = gcd(f, &c, &w);
            if degree(&y).unwrap_or(0) == 0 {
                break;
            }
            c = divrem(f, &c, &y).0;
        }
        parts.push(w);
    }
    if degree(&c).unwrap_or(0) > 0 {
        parts.extend(squarefree_parts(f, &pth_root_poly(f, &c)));
    }
    parts
}

/// For `g(x) = h(x)^p`, returns `h`.
fn pth_root_poly(f: &FieldCtx, g: &[u64]) -> Poly {
    let p = f.characteristic() as usize;
    let mut out: Poly = g.iter().step_by(p).map(|&c| f.pth_root(c)).collect();
    trim(&mut out);
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &FieldCtx, g: &[u64]) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = g.to_vec();
    let mut h = rem(f, &x(), &rest);
    let mut i = 1;
    while degree(&rest).unwrap_or(0) >= 2 * i {
        h = powmod(f, &h, f.order(), &rest);
        let u = gcd(f, &rest, &sub(f, &h, &x()));
        if degree(&u).unwrap_or(0) > 0 {
            rest = divrem(f, &rest, &u).0;
            h = rem(f, &h, &rest);
            out.push((u, i));
        }
        i += 1;
    }
    if let Some(d) = degree(&rest) {
        if d > 0 {
            out.push((monic(f, &rest), d));
        }
    }
    out
}

/// Splits a monic squarefree product of degree-`d` irreducibles.
fn equal_degree<R: Rng + ?Sized>(f: &FieldCtx, g: &[u64], d: usize, rng: &mut R) -> Vec<Poly> {
    let n = degree(g).unwrap_or(0);
    if n == d {
        return vec![g.to_vec()];
    }
    let q = f.order();
    loop {
        let a = random_poly(f, n, rng);
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = if f.characteristic() == 2 {
            // absolute trace of a in F_q[x]/(g)
            let mut acc = Vec::new();
            let mut term = a.clone();
            for _ in 0..f.degree() * d {
                acc = add(f, &acc, &term);
                term = mulmod(f, &term, &term, g);
            }
            acc
        } else {
            let mut norm = rem(f, &[1], g);
            let mut term = a.clone();
            for _ in 0..d {
                norm = mulmod(f, &norm, &term, g);
                term = powmod(f, &term, q, g);
            }
            sub(f, &powmod(f, &norm, (q - 1) / 2, g), &[1])
        };
        let u = gcd(f, g, &b);
        let du = degree(&u).unwrap_or(0);
        if du > 0 && du < n {
            let v = divrem(f, g, &u).0;
            let mut out = equal_degree(f, &u, d, rng);
            out.extend(equal_degree(f, &monic(f, &v), d, rng));
            return out;
        }
    }
}

/// Orders polynomials by degree, then by coefficients from the top down.
pub fn canonical_cmp(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// Distinct monic irreducible factors of `g`, sorted canonically.
pub fn irreducible_factors<R: Rng + ?Sized>(f: &FieldCtx, g: &[u64], rng: &mut R) -> Vec<Poly> {
    let mut out = Vec::new();
    for part in squarefree_parts(f, g) {
        for (block, d) in distinct_degree(f, &part) {
            out.extend(equal_degree(f, &block, d, rng));
        }
    }
    out.sort_by(|a, b| canonical_cmp(a, b));
    out.dedup();
    out
}

/// Distinct roots of `g` in `f`, ascending by encoding.
pub fn roots<R: Rng + ?Sized>(f: &FieldCtx, g: &[u64], rng: &mut R) -> Vec<u64> {
    let g = monic(f, g);
    match degree(&g) {
        None => panic!("roots of the zero polynomial"),
        Some(0) => return Vec::new(),
        _ => {}
    }
    let h = powmod(f, &x(), f.order(), &g);
    let lin = gcd(f, &g, &sub(f, &h, &x()));
    if degree(&lin).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut out: Vec<u64> = equal_degree(f, &lin, 1, rng)
        .into_iter()
        .map(|l| f.neg(l[0]))
        .collect();
    out.sort_unstable();
    out
}
